#pragma once

#include "glwt/error.hpp"
#include "glwt/graph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace glwt::testing {

/// Erdos-Renyi sample, resampled until connected.
Graph random_connected_graph(int n, double p, std::uint64_t seed);
Vector random_signal(int n, std::uint64_t seed);
Vector random_unit_signal(int n, std::uint64_t seed);

// ---- oracles, written without the library's linear algebra -------------

struct JacobiResult {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // columns
};
/// Cyclic Jacobi rotations on a symmetric matrix.
JacobiResult jacobi_eigen(const Matrix& a, double tol = 1e-14, int max_sweeps = 100);

/// e^{m} by scaling and squaring a truncated Taylor series.
Matrix expm_taylor(const Matrix& m);

/// sum_j g(lambda_j) (u_j . f) u_j over a Jacobi basis of L.
template <typename G>
Vector eigenpair_filter(const JacobiResult& jr, G g, const Vector& f) {
  Vector out = Vector::Zero(f.size());
  for (Eigen::Index j = 0; j < jr.eigenvalues.size(); ++j) {
    double dot = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) dot += jr.eigenvectors(i, j) * f[i];
    const double gain = g(jr.eigenvalues[j]);
    for (Eigen::Index i = 0; i < f.size(); ++i) out[i] += gain * dot * jr.eigenvectors(i, j);
  }
  return out;
}

/// Kind of the glwt::Error thrown by f, or nullopt if none was thrown.
template <typename F>
std::optional<ErrorKind> kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

std::string data_path(const std::string& name);
std::string read_data(const std::string& name);
std::string temp_dir(const std::string& name);

/// One entry of a marker-separated corpus file. For malformed entries
/// `expect_line` is the line the parser should report, relative to the entry.
struct CorpusEntry {
  std::string text;
  int expect_line = 0;
};
/// Splits on lines starting with "%%% "; "%%% expect-line N" sets N.
std::vector<CorpusEntry> load_corpus(const std::string& name);

/// Random well-formed rule programs, including facts in about a third.
std::vector<std::string> generated_programs(int count, std::uint64_t seed);

}  // namespace glwt::testing
