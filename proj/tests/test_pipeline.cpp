#include "glwt/pipeline.hpp"
#include "glwt/rng.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>

using namespace glwt;
using glwt::testing::kind_of;
using glwt::testing::random_connected_graph;
using glwt::testing::random_signal;

namespace {

const KernelSpec kHeat{KernelFamily::Heat};

FilterBank single_scale(double s) {
  FilterBank b;
  b.scales = {s};
  return b;
}

ScaleFilter exact_op(const Graph& g, const FilterBank& bank,
                     LaplacianKind kind = LaplacianKind::Combinatorial) {
  return ScaleFilter::exact(std::make_shared<const SpectralBasis>(spectral_basis(g, kind)), bank);
}

Graph path(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  return build_graph(n, edges);
}

GlwtModel random_model(const FilterBank& bank, std::uint64_t seed) {
  Rng rng(seed);
  GlwtModel m = GlwtModel::identity_like(bank);
  for (int k = 0; k < bank.size(); ++k) {
    m.modulation.threshold[k] = rng.uniform(0.0, 0.05);
    m.modulation.gain[k] = rng.uniform(0.5, 1.5);
    m.modulation.phase[k] = rng.uniform(-1.0, 1.0);
    m.fusion.logits[k] = rng.uniform(-1.0, 1.0);
  }
  return m;
}

}  // namespace

TEST(Softmax, SumsToOneAndShiftInvariant) {
  Vector a(4);
  a << 0.3, -2.0, 5.0, 1.0;
  const Vector w = softmax(a);
  EXPECT_NEAR(w.sum(), 1.0, 1e-12);
  EXPECT_GT(w.minCoeff(), 0.0);
  EXPECT_LT((softmax((a.array() + 123.0).matrix()) - w).cwiseAbs().maxCoeff(), 1e-12);
  Vector big(2);
  big << 1000.0, 0.0;
  EXPECT_NEAR(softmax(big)[0], 1.0, 1e-15);
}

TEST(Model, IdentityLikeAndValidation) {
  const GlwtModel m = GlwtModel::identity_like(FilterBank::standard());
  EXPECT_EQ(m.num_scales(), 5);
  EXPECT_NO_THROW(m.validate());
  GlwtModel bad = m;
  bad.modulation.threshold[2] = -0.1;
  EXPECT_EQ(kind_of([&] { bad.validate(); }), ErrorKind::NegativeThreshold);
  bad = m;
  bad.epsilon = 0.0;
  EXPECT_TRUE(kind_of([&] { bad.validate(); }).has_value());
  bad = m;
  bad.tau.resize(3);
  EXPECT_TRUE(kind_of([&] { bad.validate(); }).has_value());
}

TEST(Decompose, ZeroAndIdentity) {
  const Graph g = random_connected_graph(10, 0.4, 1);
  const FilterBank bank = FilterBank::standard();
  const ScaleFilter op = exact_op(g, bank);
  const GlwtModel m = GlwtModel::identity_like(bank);
  EXPECT_EQ(decompose(op, m, Vector::Zero(10)), Matrix::Zero(5, 10));

  const FilterBank tiny = single_scale(1e-13);
  const Vector f = random_signal(10, 2);
  const Matrix c = decompose(exact_op(g, tiny), GlwtModel::identity_like(tiny), f);
  EXPECT_LT((c.row(0).transpose() - f).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(kind_of([&] { decompose(op, m, Vector::Zero(4)); }), ErrorKind::DimensionMismatch);
}

TEST(Decompose, PathThreeRowsMatchExactFiltering) {
  const Graph g = path(3);
  const FilterBank bank = FilterBank::standard();
  const SpectralBasis b = spectral_basis(g, LaplacianKind::Combinatorial);
  Vector f(3);
  f << 1, 0, -1;
  const Matrix c = decompose(exact_op(g, bank), GlwtModel::identity_like(bank), f);
  // P3 eigenpairs: 0 -> 1/sqrt3 (1,1,1), 1 -> 1/sqrt2 (1,0,-1), 3 -> 1/sqrt6 (1,-2,1).
  // f is the lambda = 1 mode, so every scale returns e^{-s} f.
  for (int k = 0; k < 5; ++k) {
    EXPECT_LT((c.row(k).transpose() - std::exp(-bank.scales[k]) * f).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((c.row(k).transpose() - filter_apply_exact(b, kHeat, bank.scales[k], f)).cwiseAbs().maxCoeff(),
              1e-10);
  }
}

TEST(Modulate, Examples) {
  Vector c(1);
  c << 0.82;
  EXPECT_NEAR(modulate(c, 0.5, 1.0, 0.0)[0], 0.32, 1e-15);
  Vector c2(2);
  c2 << -0.3, 0.1;
  const Vector out = modulate(c2, 0.2, 2.0, 0.0);
  EXPECT_NEAR(out[0], -0.2, 1e-15);
  EXPECT_EQ(out[1], 0.0);
  const Vector any = random_signal(8, 3);
  EXPECT_EQ(modulate(any, 0.0, 3.0, std::numbers::pi / 2), Vector::Zero(8));
  EXPECT_EQ(kind_of([&] { modulate(any, -0.1, 1.0, 0.0); }), ErrorKind::NegativeThreshold);
}

TEST(Modulate, MagnitudeBoundAndShrinkMonotone) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Vector c = random_signal(20, s);
    const double gain = -1.7;
    const double phase = 0.4;
    const Vector out = modulate(c, 0.3, gain, phase);
    for (int i = 0; i < 20; ++i) {
      EXPECT_LE(std::abs(out[i]), std::abs(gain * std::cos(phase)) * std::abs(c[i]) + 1e-15);
    }
    double previous = modulate(c, 0.0, 1.0, 0.0).lpNorm<1>();
    for (double lam : {0.1, 0.2, 0.5, 1.0, 5.0}) {
      const double now = modulate(c, lam, 1.0, 0.0).lpNorm<1>();
      EXPECT_LE(now, previous);
      previous = now;
    }
  }
}

TEST(Reconstruct, Examples) {
  const Graph p2 = build_graph(2, {{0, 1, 1.0}});
  const FilterBank bank = single_scale(0.5);
  const ScaleFilter op = exact_op(p2, bank);
  Vector alt(2);
  alt << 1, -1;
  EXPECT_LT((reconstruct_scale(op, 0, alt) - std::exp(-1.0) * alt).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(reconstruct_scale(op, 0, Vector::Zero(2)), Vector::Zero(2));
  const ScaleFilter ident = exact_op(p2, single_scale(1e-13));
  EXPECT_LT((reconstruct_scale(ident, 0, alt) - alt).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(kind_of([&] { reconstruct_scale(op, 1, alt); }), ErrorKind::IndexOutOfRange);
}

TEST(Fuse, Examples) {
  Matrix partials(2, 3);
  partials << 1, 2, 3, -1, -2, -3;
  FusionParams equal{Vector::Zero(2)};
  EXPECT_LT(fuse(partials, equal).cwiseAbs().maxCoeff(), 1e-15);

  Matrix two(2, 2);
  two << 2, 0, 0, 2;
  const Vector avg = fuse(two, equal);
  EXPECT_NEAR(avg[0], 1.0, 1e-15);
  EXPECT_NEAR(avg[1], 1.0, 1e-15);

  Matrix three = Matrix::Random(3, 4);
  FusionParams saturated{Vector(3)};
  saturated.logits << 40, -40, -40;
  EXPECT_LT((fuse(three, saturated) - three.row(0).transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(kind_of([&] { fuse(three, equal); }), ErrorKind::DimensionMismatch);
}

TEST(Forward, LimitsAndComposition) {
  const Graph g = random_connected_graph(30, 0.15, 4);
  const FilterBank bank = FilterBank::standard();
  const ScaleFilter op = exact_op(g, bank, LaplacianKind::SymmetricNormalized);
  const Vector f = random_signal(30, 5);

  GlwtModel huge = GlwtModel::identity_like(bank);
  huge.modulation.threshold.setConstant(1e6);
  EXPECT_EQ(forward(huge, op, f).output, Vector::Zero(30));

  const FilterBank tiny = single_scale(1e-13);
  const Vector same = forward(GlwtModel::identity_like(tiny), exact_op(g, tiny), f).output;
  EXPECT_LT((same - f).cwiseAbs().maxCoeff(), 1e-10);

  const GlwtModel m = random_model(bank, 6);
  const ForwardResult r = forward(m, op, f);
  const Matrix c = decompose(op, m, f);
  Matrix parts(5, 30);
  for (int k = 0; k < 5; ++k) {
    const Vector phi = modulate(c.row(k).transpose(), m.modulation.threshold[k], m.modulation.gain[k],
                                m.modulation.phase[k]);
    EXPECT_EQ(phi, r.modulated.row(k).transpose());
    parts.row(k) = reconstruct_scale(op, k, phi).transpose();
  }
  EXPECT_LT((fuse(parts, m.fusion) - r.output).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((r.weights - m.weights()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Forward, LinearWithoutThresholdsAndConvexFusion) {
  const Graph g = random_connected_graph(25, 0.2, 7);
  const FilterBank bank = FilterBank::standard();
  const ScaleFilter op = exact_op(g, bank);
  GlwtModel m = random_model(bank, 8);
  const Vector f = random_signal(25, 9);
  const ForwardResult r = forward(m, op, f);
  for (int i = 0; i < 25; ++i) {
    EXPECT_GE(r.output[i], r.partials.col(i).minCoeff() - 1e-12);
    EXPECT_LE(r.output[i], r.partials.col(i).maxCoeff() + 1e-12);
  }
  m.modulation.threshold.setZero();
  const Vector y = forward(m, op, f).output;
  EXPECT_LT((forward(m, op, 2.5 * f).output - 2.5 * y).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Forward, ClosedGateZeroesPartial) {
  const Graph g = random_connected_graph(15, 0.3, 10);
  const FilterBank bank = FilterBank::standard();
  GlwtModel m = random_model(bank, 11);
  m.modulation.phase[2] = std::numbers::pi / 2;
  const ForwardResult r = forward(m, exact_op(g, bank), random_signal(15, 12));
  EXPECT_EQ(r.partials.row(2), Matrix::Zero(1, 15));
  EXPECT_EQ(phase_gate(std::numbers::pi / 2), 0.0);
  EXPECT_EQ(phase_gate(0.0), 1.0);
}

TEST(FeatureActivations, AveragesColumns) {
  const Graph g = random_connected_graph(12, 0.3, 13);
  const FilterBank bank = FilterBank::standard();
  const ScaleFilter op = exact_op(g, bank);
  const GlwtModel m = random_model(bank, 14);
  Matrix x(12, 3);
  for (int d = 0; d < 3; ++d) x.col(d) = random_signal(12, 20 + d);
  Matrix expect = Matrix::Zero(5, 12);
  for (int d = 0; d < 3; ++d) expect += forward(m, op, x.col(d)).modulated / 3.0;
  EXPECT_LT((feature_activations(m, op, x) - expect).cwiseAbs().maxCoeff(), 1e-14);
}
