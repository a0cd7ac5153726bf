#include "glwt/spectral.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>

using namespace glwt;
using glwt::testing::eigenpair_filter;
using glwt::testing::expm_taylor;
using glwt::testing::jacobi_eigen;
using glwt::testing::kind_of;
using glwt::testing::random_connected_graph;
using glwt::testing::random_signal;
using glwt::testing::random_unit_signal;

namespace {

const KernelSpec kHeat{KernelFamily::Heat};

SpectralBasis p2_basis() {
  return spectral_basis(build_graph(2, {{0, 1, 1.0}}), LaplacianKind::Combinatorial);
}

double cheb_grid_error(const ChebCoeffs& c, double scale, double lmax) {
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = lmax * i / 1000.0;
    worst = std::max(worst, std::abs(c.evaluate(x) - std::exp(-scale * x)));
  }
  return worst;
}

}  // namespace

TEST(KernelEval, ClosedForms) {
  EXPECT_EQ(kernel_eval(kHeat, 1.0, 0.0), 1.0);
  EXPECT_NEAR(kernel_eval(kHeat, 0.5, 2.0), std::exp(-1.0), 1e-15);
  const double tiny = kernel_eval(kHeat, 10.0, 10.0);
  EXPECT_GE(tiny, 0.0);
  EXPECT_LT(tiny, 1e-40);
  const KernelSpec hat{KernelFamily::MexicanHat};
  EXPECT_NEAR(kernel_eval(hat, 1.0, 2.0), 2.0 * std::exp(-2.0), 1e-15);
  const KernelSpec spline{KernelFamily::Spline};
  EXPECT_NEAR(kernel_eval(spline, 1.0, 0.5), 0.25, 1e-15);
  EXPECT_NEAR(kernel_eval(spline, 1.0, 1.0), 1.0, 1e-12);
  EXPECT_NEAR(kernel_eval(spline, 1.0, 2.0), 1.0, 1e-12);
  EXPECT_NEAR(kernel_eval(spline, 1.0, 4.0), 0.25, 1e-15);
  EXPECT_TRUE(kind_of([] { kernel_eval(kHeat, -1.0, 1.0); }).has_value());
}

TEST(FilterBank, Validation) {
  FilterBank b = FilterBank::standard();
  EXPECT_EQ(b.size(), 5);
  EXPECT_NO_THROW(b.validate());
  b.scales = {1.0, 0.5};
  EXPECT_THROW(b.validate(), Error);
  b.scales = {};
  EXPECT_THROW(b.validate(), Error);
}

TEST(FilterExact, ConstantAndPureModes) {
  const Graph g = random_connected_graph(12, 0.4, 3);
  const SpectralBasis b = spectral_basis(g, LaplacianKind::Combinatorial);
  const Vector ones = Vector::Ones(12);
  EXPECT_LT((filter_apply_exact(b, kHeat, 2.0, ones) - ones).cwiseAbs().maxCoeff(), 1e-12);
  Vector alt(2);
  alt << 1, -1;
  EXPECT_LT((filter_apply_exact(p2_basis(), kHeat, 0.5, alt) - std::exp(-1.0) * alt).cwiseAbs().maxCoeff(),
            1e-14);
}

TEST(FilterExact, MatchesEigenpairOracle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = random_connected_graph(20, 0.3, seed);
    const Matrix l = laplacian(g, LaplacianKind::Combinatorial);
    const SpectralBasis b = eigendecompose(l, LaplacianKind::Combinatorial);
    const auto oracle = jacobi_eigen(l);
    const Vector f = random_signal(20, 40 + seed);
    for (double s : {0.1, 1.0, 3.0}) {
      const Vector expect = eigenpair_filter(oracle, [&](double lam) { return std::exp(-s * lam); }, f);
      EXPECT_LT((filter_apply_exact(b, kHeat, s, f) - expect).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(FilterExact, LinearAndContractive) {
  const Graph g = random_connected_graph(25, 0.2, 9);
  const SpectralBasis b = spectral_basis(g, LaplacianKind::Combinatorial);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Vector f = random_signal(25, s);
    const Vector y = filter_apply_exact(b, kHeat, 0.7, f);
    EXPECT_LT((filter_apply_exact(b, kHeat, 0.7, -3.5 * f) + 3.5 * y).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(y.norm(), f.norm() + 1e-12);
  }
}

TEST(LambdaMax, PowerIteration) {
  Matrix p2(2, 2);
  p2 << 1, -1, -1, 1;
  EXPECT_NEAR(estimate_lambda_max(p2, 100, 1), 2.02, 1e-6);
  EXPECT_EQ(estimate_lambda_max(Matrix::Zero(4, 4), 50, 1), 1.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = random_connected_graph(50, 0.15, seed);
    const Matrix l = laplacian(g, LaplacianKind::Combinatorial);
    const double exact = eigendecompose(l, LaplacianKind::Combinatorial).lambda_max;
    EXPECT_GE(estimate_lambda_max(l, 200, seed), exact);
  }
}

TEST(ChebyshevFit, ConstantKernel) {
  const ChebCoeffs c = chebyshev_fit(kHeat, 0.0, 12, 2.0);
  EXPECT_NEAR(c.coefficients[0], 1.0, 1e-12);
  for (int k = 1; k <= c.order(); ++k) EXPECT_NEAR(c.coefficients[k], 0.0, 1e-12);
}

TEST(ChebyshevFit, AccuracyAndConvergence) {
  EXPECT_LE(cheb_grid_error(chebyshev_fit(kHeat, 1.0, 30, 2.0), 1.0, 2.0), 1e-10);
  const double e5 = cheb_grid_error(chebyshev_fit(kHeat, 10.0, 5, 2.0), 10.0, 2.0);
  const double e40 = cheb_grid_error(chebyshev_fit(kHeat, 10.0, 40, 2.0), 10.0, 2.0);
  EXPECT_LT(e40, e5);
  double previous = cheb_grid_error(chebyshev_fit(kHeat, 3.0, 2, 2.0), 3.0, 2.0);
  for (int m : {4, 8, 16}) {
    const double e = cheb_grid_error(chebyshev_fit(kHeat, 3.0, m, 2.0), 3.0, 2.0);
    EXPECT_LE(e, previous);
    previous = e;
  }
  EXPECT_TRUE(kind_of([] { chebyshev_fit(kHeat, 1.0, -1, 2.0); }).has_value());
}

TEST(ChebyshevApply, LowOrderTerms) {
  const Graph g = random_connected_graph(10, 0.4, 5);
  const Matrix l = laplacian(g, LaplacianKind::Combinatorial);
  const Vector f = random_signal(10, 6);
  ChebCoeffs c;
  c.lambda_max = 7.0;
  c.coefficients = {1.0, 0.0, 0.0};
  EXPECT_LT((chebyshev_apply(l, c, f) - f).cwiseAbs().maxCoeff(), 1e-15);
  c.coefficients = {0.0, 1.0, 0.0};
  const Vector lt = (2.0 / 7.0) * (l * f) - f;
  EXPECT_LT((chebyshev_apply(l, c, f) - lt).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ChebyshevApply, MatchesExactPath) {
  const Graph g = random_connected_graph(30, 0.2, 8);
  const Matrix l = laplacian(g, LaplacianKind::Combinatorial);
  const SpectralBasis b = eigendecompose(l, LaplacianKind::Combinatorial);
  const Vector f = random_unit_signal(30, 2);
  const ChebCoeffs c = chebyshev_fit(kHeat, 1.0, 30, b.lambda_max);
  EXPECT_LE((chebyshev_apply(l, c, f) - filter_apply_exact(b, kHeat, 1.0, f)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(WaveletAtom, NearDeltaAndHandExpansion) {
  const Graph g = random_connected_graph(15, 0.3, 1);
  const SpectralBasis b = spectral_basis(g, LaplacianKind::Combinatorial);
  const Vector atom = wavelet_atom(b, kHeat, 1e-12, 4);
  Vector delta = Vector::Zero(15);
  delta[4] = 1.0;
  EXPECT_LT((atom - delta).cwiseAbs().maxCoeff(), 1e-9);

  const Vector p2 = wavelet_atom(p2_basis(), kHeat, 0.5, 0);
  const double e = std::exp(-1.0);
  EXPECT_NEAR(p2[0], (1 + e) / 2, 1e-14);
  EXPECT_NEAR(p2[1], (1 - e) / 2, 1e-14);
  Matrix l2(2, 2);
  l2 << 1, -1, -1, 1;
  const Matrix brute = expm_taylor(-0.5 * l2);
  EXPECT_NEAR(p2[0], brute(0, 0), 1e-13);
  EXPECT_NEAR(p2[1], brute(1, 0), 1e-13);
}

TEST(WaveletAtom, MatchesMatrixExponentialColumns) {
  const Graph g = random_connected_graph(12, 0.35, 21);
  const Matrix l = laplacian(g, LaplacianKind::Combinatorial);
  const SpectralBasis b = eigendecompose(l, LaplacianKind::Combinatorial);
  const Matrix brute = expm_taylor(-0.8 * l);
  for (int i = 0; i < 12; ++i) {
    EXPECT_LT((wavelet_atom(b, kHeat, 0.8, i) - brute.col(i)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(WaveletAtom, AtomsSpanTheFilter) {
  const Graph g = random_connected_graph(18, 0.3, 12);
  const SpectralBasis b = spectral_basis(g, LaplacianKind::Combinatorial);
  const Vector f = random_signal(18, 13);
  Vector combo = Vector::Zero(18);
  for (int i = 0; i < 18; ++i) combo += f[i] * wavelet_atom(b, kHeat, 1.3, i);
  EXPECT_LT((combo - filter_apply_exact(b, kHeat, 1.3, f)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(WaveletCoefficient, InnerProducts) {
  const Graph g = random_connected_graph(16, 0.3, 14);
  const SpectralBasis b = spectral_basis(g, LaplacianKind::Combinatorial);
  const Vector atom = wavelet_atom(b, kHeat, 0.6, 3);
  EXPECT_NEAR(wavelet_coefficient(atom, atom), atom.squaredNorm(), 1e-14);
  Vector orth = Vector::Zero(16);
  orth[0] = atom[1];
  orth[1] = -atom[0];
  EXPECT_NEAR(wavelet_coefficient(atom, orth), 0.0, 1e-15);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Vector f = random_signal(16, s);
    const Vector filtered = filter_apply_exact(b, kHeat, 0.6, f);
    EXPECT_NEAR(wavelet_coefficient(atom, f), filtered[3], 1e-10);
  }
  EXPECT_THROW(wavelet_coefficient(atom, Vector::Zero(3)), Error);
}

TEST(Frame, SynthesisIdentities) {
  const Graph g = random_connected_graph(20, 0.3, 15);
  const SpectralBasis b = spectral_basis(g, LaplacianKind::Combinatorial);
  const Vector f = random_signal(20, 16);
  const std::vector<double> scales = {0.1, 0.3, 1.0, 3.0, 10.0};
  EXPECT_EQ(frame_synthesize(b, kHeat, scales, Matrix::Zero(5, 20)), Vector::Zero(20));

  const Vector same = frame_synthesize(b, kHeat, {0.0}, frame_analyze(b, kHeat, {0.0}, f));
  EXPECT_LT((same - f).cwiseAbs().maxCoeff(), 1e-12);

  Vector expect = Vector::Zero(20);
  for (double s : scales) {
    expect += filter_apply_exact(b, kHeat, s, filter_apply_exact(b, kHeat, s, f));
  }
  const Vector got = frame_synthesize(b, kHeat, scales, frame_analyze(b, kHeat, scales, f));
  EXPECT_LT((got - expect).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_THROW(frame_synthesize(b, kHeat, scales, Matrix::Zero(4, 20)), Error);
}

TEST(Frame, BoundsReportTightness) {
  const Graph g = random_connected_graph(20, 0.3, 17);
  const SpectralBasis b = spectral_basis(g, LaplacianKind::Combinatorial);
  const FrameBounds single = frame_bounds(b, kHeat, {0.0});
  EXPECT_TRUE(single.tight());
  EXPECT_NEAR(single.lower, 1.0, 1e-15);
  const FrameBounds bank = frame_bounds(b, kHeat, {0.1, 0.3, 1.0, 3.0, 10.0});
  EXPECT_FALSE(bank.tight());
  EXPECT_NEAR(bank.upper, 5.0, 1e-9);  // lambda = 0 passes every scale
  EXPECT_LT(bank.lower, bank.upper);
}

TEST(ScaleFilter, PathsAgree) {
  const Graph g = random_connected_graph(30, 0.2, 18);
  FilterBank bank = FilterBank::standard();
  const Matrix l = laplacian(g, LaplacianKind::SymmetricNormalized);
  auto basis = std::make_shared<const SpectralBasis>(eigendecompose(l, LaplacianKind::SymmetricNormalized));
  bank.lambda_max = 2.0;
  const ScaleFilter exact = ScaleFilter::exact(basis, bank);
  const ScaleFilter cheb = ScaleFilter::chebyshev(std::make_shared<const Matrix>(l), bank);
  EXPECT_EQ(exact.path(), FilterPath::Exact);
  EXPECT_EQ(cheb.path(), FilterPath::Chebyshev);
  EXPECT_EQ(ScaleFilter::automatic(g, LaplacianKind::SymmetricNormalized, bank).path(), FilterPath::Exact);
  const Vector f = random_unit_signal(30, 19);
  for (int k = 0; k < bank.size(); ++k) {
    EXPECT_LE((exact.apply(k, f) - cheb.apply(k, f)).cwiseAbs().maxCoeff(), 1e-8) << "scale " << k;
  }
  EXPECT_THROW(exact.apply(5, f), Error);
}
