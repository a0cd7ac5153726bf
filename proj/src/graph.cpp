#include "glwt/graph.hpp"

#include "glwt/error.hpp"
#include "glwt/text_io.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

namespace glwt {

std::string Graph::node_id(int i) const {
  if (!node_ids_.empty()) return node_ids_.at(static_cast<std::size_t>(i));
  return "n" + std::to_string(i);
}

Vector Graph::degrees() const {
  Vector d = Vector::Zero(n_);
  for (const Edge& e : edges_) {
    d[e.i] += e.w;
    d[e.j] += e.w;
  }
  return d;
}

Matrix Graph::adjacency() const {
  Matrix a = Matrix::Zero(n_, n_);
  for (const Edge& e : edges_) {
    a(e.i, e.j) = e.w;
    a(e.j, e.i) = e.w;
  }
  return a;
}

bool Graph::connected() const {
  if (n_ <= 1) return true;
  std::vector<std::vector<int>> nbrs(static_cast<std::size_t>(n_));
  for (const Edge& e : edges_) {
    nbrs[e.i].push_back(e.j);
    nbrs[e.j].push_back(e.i);
  }
  std::vector<char> seen(static_cast<std::size_t>(n_), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : nbrs[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        stack.push_back(u);
      }
    }
  }
  return count == n_;
}

Graph build_graph(int n, std::vector<Edge> edges, std::vector<std::string> node_ids) {
  if (n <= 0) fail(ErrorKind::InvalidArgument, "node count must be positive");
  if (!node_ids.empty() && static_cast<int>(node_ids.size()) != n) {
    fail(ErrorKind::DimensionMismatch, "node_ids has " + std::to_string(node_ids.size()) +
                                           " entries for " + std::to_string(n) + " nodes");
  }
  std::set<std::pair<int, int>> seen;
  for (Edge& e : edges) {
    if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n) {
      fail(ErrorKind::IndexOutOfRange, "edge (" + std::to_string(e.i) + ", " +
                                           std::to_string(e.j) + ") outside [0, " +
                                           std::to_string(n) + ")");
    }
    if (e.i == e.j) fail(ErrorKind::SelfLoop, "self-loop at node " + std::to_string(e.i));
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      fail(ErrorKind::NonPositiveWeight, "edge (" + std::to_string(e.i) + ", " +
                                             std::to_string(e.j) + ") has weight " +
                                             std::to_string(e.w));
    }
    if (e.i > e.j) std::swap(e.i, e.j);
    if (!seen.insert({e.i, e.j}).second) {
      fail(ErrorKind::DuplicateEdge, "duplicate edge (" + std::to_string(e.i) + ", " +
                                         std::to_string(e.j) + ")");
    }
  }
  Graph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  g.node_ids_ = std::move(node_ids);
  return g;
}

std::string to_string(LaplacianKind kind) {
  return kind == LaplacianKind::Combinatorial ? "combinatorial" : "normalized";
}

LaplacianKind parse_laplacian_kind(const std::string& text) {
  if (text == "combinatorial") return LaplacianKind::Combinatorial;
  if (text == "normalized" || text == "symmetric_normalized") {
    return LaplacianKind::SymmetricNormalized;
  }
  fail(ErrorKind::InvalidArgument, "unknown laplacian kind '" + text + "'");
}

Matrix laplacian(const Graph& g, LaplacianKind kind) {
  const Vector d = g.degrees();
  const Matrix a = g.adjacency();
  if (kind == LaplacianKind::Combinatorial) {
    Matrix l = -a;
    l.diagonal() += d;
    return l;
  }
  for (int i = 0; i < g.n(); ++i) {
    if (d[i] <= 0.0) {
      fail(ErrorKind::IsolatedNodeForNormalized,
           "node " + std::to_string(i) + " has zero degree");
    }
  }
  const Vector inv_sqrt = d.cwiseSqrt().cwiseInverse();
  Matrix l = -(inv_sqrt.asDiagonal() * a * inv_sqrt.asDiagonal());
  l.diagonal().array() += 1.0;
  return l;
}

SpectralBasis eigendecompose(const Matrix& l, LaplacianKind kind) {
  if (l.rows() != l.cols()) fail(ErrorKind::DimensionMismatch, "laplacian is not square");
  const double asym = (l - l.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) {
    fail(ErrorKind::NotSymmetric, "max |L - L^T| = " + std::to_string(asym));
  }
  // symmetrize exactly so the solver sees a self-adjoint input
  const Matrix sym = 0.5 * (l + l.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::DecompositionFailure, "self-adjoint eigensolver did not converge");
  }
  SpectralBasis basis;
  basis.kind = kind;
  basis.eigenvalues = solver.eigenvalues();
  basis.eigenvectors = solver.eigenvectors();
  const Eigen::Index n = basis.eigenvalues.size();
  const double scale = std::max(1.0, std::abs(basis.eigenvalues[n - 1]));
  for (Eigen::Index i = 0; i < n; ++i) {
    double& v = basis.eigenvalues[i];
    if (v < 0.0 && v > -1e-10 * scale) v = 0.0;
  }
  for (Eigen::Index c = 0; c < n; ++c) {
    auto col = basis.eigenvectors.col(c);
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < n; ++r) {
      const double mag = std::abs(col[r]);
      // strict comparison keeps the lowest index on ties; the slack absorbs
      // rounding between entries that are equal in exact arithmetic
      if (mag > best + 1e-12) {
        best = mag;
        arg = r;
      }
    }
    if (col[arg] < 0.0) col = -col;
  }
  basis.lambda_max = basis.eigenvalues[n - 1];
  return basis;
}

SpectralBasis spectral_basis(const Graph& g, LaplacianKind kind) {
  return eigendecompose(laplacian(g, kind), kind);
}

Vector gft(const SpectralBasis& basis, const Vector& signal) {
  if (signal.size() != basis.n()) {
    fail(ErrorKind::DimensionMismatch, "signal length " + std::to_string(signal.size()) +
                                           " != " + std::to_string(basis.n()));
  }
  return basis.eigenvectors.transpose() * signal;
}

Vector igft(const SpectralBasis& basis, const Vector& spectrum) {
  if (spectrum.size() != basis.n()) {
    fail(ErrorKind::DimensionMismatch, "spectrum length " + std::to_string(spectrum.size()) +
                                           " != " + std::to_string(basis.n()));
  }
  return basis.eigenvectors * spectrum;
}

Graph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  int n = -1;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_comment(line, '#');
    std::istringstream fields(line);
    std::string tag;
    if (!(fields >> tag)) continue;
    if (tag == "n") {
      if (n >= 0) fail(ErrorKind::SchemaError, "line " + std::to_string(line_no) + ": repeated header");
      if (!(fields >> n) || n <= 0) {
        fail(ErrorKind::SchemaError, "line " + std::to_string(line_no) + ": bad node count");
      }
    } else if (tag == "e") {
      if (n < 0) fail(ErrorKind::SchemaError, "line " + std::to_string(line_no) + ": edge before header");
      Edge e;
      if (!(fields >> e.i >> e.j >> e.w)) {
        fail(ErrorKind::SchemaError, "line " + std::to_string(line_no) + ": expected 'e <i> <j> <w>'");
      }
      edges.push_back(e);
    } else {
      fail(ErrorKind::SchemaError, "line " + std::to_string(line_no) + ": unknown record '" + tag + "'");
    }
    std::string extra;
    if (fields >> extra) {
      fail(ErrorKind::SchemaError, "line " + std::to_string(line_no) + ": trailing field '" + extra + "'");
    }
  }
  if (n < 0) fail(ErrorKind::SchemaError, "missing 'n <count>' header");
  return build_graph(n, std::move(edges));
}

Graph read_graph(const std::string& path) { return parse_graph(read_text_file(path)); }

std::string format_graph(const Graph& g) {
  std::string out = "n " + std::to_string(g.n()) + "\n";
  for (const Edge& e : g.edges()) {
    out += "e " + std::to_string(e.i) + " " + std::to_string(e.j) + " " + format_double(e.w) + "\n";
  }
  return out;
}

void write_graph(const Graph& g, const std::string& path) { write_text_file(path, format_graph(g)); }

}  // namespace glwt
