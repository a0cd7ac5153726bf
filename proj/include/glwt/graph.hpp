#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace glwt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Edge {
  int i = 0;
  int j = 0;
  double w = 1.0;
};

/// Weighted undirected graph without self-loops or parallel edges.
/// Immutable after construction; edges are stored with i < j.
class Graph {
 public:
  int n() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<std::string>& node_ids() const noexcept { return node_ids_; }
  /// External label for node i, or "n<i>" when none were given.
  std::string node_id(int i) const;

  Vector degrees() const;
  Matrix adjacency() const;
  bool connected() const;

 private:
  friend Graph build_graph(int n, std::vector<Edge> edges, std::vector<std::string> node_ids);

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::string> node_ids_;
};

/// Throws IndexOutOfRange, SelfLoop, NonPositiveWeight or DuplicateEdge.
Graph build_graph(int n, std::vector<Edge> edges, std::vector<std::string> node_ids = {});

enum class LaplacianKind { Combinatorial, SymmetricNormalized };

std::string to_string(LaplacianKind kind);
LaplacianKind parse_laplacian_kind(const std::string& text);

/// L = D - A, or L = I - D^{-1/2} A D^{-1/2}. The normalized kind throws
/// IsolatedNodeForNormalized on a zero-degree node.
Matrix laplacian(const Graph& g, LaplacianKind kind);

struct SpectralBasis {
  Vector eigenvalues;   // ascending, nonnegative
  Matrix eigenvectors;  // column i pairs with eigenvalues[i]
  double lambda_max = 0.0;
  LaplacianKind kind = LaplacianKind::Combinatorial;

  int n() const { return static_cast<int>(eigenvalues.size()); }
};

/// Dense symmetric eigendecomposition. Each eigenvector is sign-fixed so
/// its largest-magnitude entry is positive (lowest index wins ties).
SpectralBasis eigendecompose(const Matrix& laplacian, LaplacianKind kind);

/// Convenience: laplacian() followed by eigendecompose().
SpectralBasis spectral_basis(const Graph& g, LaplacianKind kind);

Vector gft(const SpectralBasis& basis, const Vector& signal);
Vector igft(const SpectralBasis& basis, const Vector& spectrum);

// Edge-list text format: "n <count>" header, "e <i> <j> <w>" per edge,
// '#' starts a comment.
Graph read_graph(const std::string& path);
Graph parse_graph(const std::string& text);
std::string format_graph(const Graph& g);
void write_graph(const Graph& g, const std::string& path);

}  // namespace glwt
