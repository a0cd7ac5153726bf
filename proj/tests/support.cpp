#include "support.hpp"

#include "glwt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <numeric>
#include <stdexcept>

namespace glwt::testing {

Graph random_connected_graph(int n, double p, std::uint64_t seed) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng.uniform() < p) edges.push_back({i, j, rng.uniform(0.5, 2.0)});
      }
    }
    Graph g = build_graph(n, std::move(edges));
    if (g.connected()) return g;
  }
  throw std::runtime_error("random_connected_graph: no connected sample");
}

Vector random_signal(int n, std::uint64_t seed) {
  Rng rng(seed);
  Vector f(n);
  for (int i = 0; i < n; ++i) f[i] = rng.normal();
  return f;
}

Vector random_unit_signal(int n, std::uint64_t seed) {
  Vector f = random_signal(n, seed);
  return f / f.norm();
}

JacobiResult jacobi_eigen(const Matrix& input, double tol, int max_sweeps) {
  const int n = static_cast<int>(input.rows());
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    v[i][i] = 1.0;
    for (int j = 0; j < n; ++j) a[i][j] = input(i, j);
  }
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    }
    if (std::sqrt(off) < tol) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return a[x][x] < a[y][y]; });
  JacobiResult r;
  r.eigenvalues.resize(n);
  r.eigenvectors.resize(n, n);
  for (int c = 0; c < n; ++c) {
    r.eigenvalues[c] = a[order[c]][order[c]];
    for (int k = 0; k < n; ++k) r.eigenvectors(k, c) = v[k][order[c]];
  }
  return r;
}

Matrix expm_taylor(const Matrix& m) {
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.5) ++squarings;
  const Matrix a = m / std::pow(2.0, squarings);
  Matrix term = Matrix::Identity(m.rows(), m.cols());
  Matrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

std::string data_path(const std::string& name) { return std::string(GLWT_TEST_DATA_DIR) + "/" + name; }

std::string read_data(const std::string& name) {
  std::ifstream in(data_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing test data " + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<CorpusEntry> load_corpus(const std::string& name) {
  std::istringstream in(read_data(name));
  std::vector<CorpusEntry> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("%%% ", 0) == 0) {
      CorpusEntry e;
      const std::string tag = "%%% expect-line ";
      if (line.rfind(tag, 0) == 0) e.expect_line = std::stoi(line.substr(tag.size()));
      out.push_back(e);
    } else if (!out.empty()) {
      out.back().text += line + "\n";
    }
  }
  return out;
}

std::vector<std::string> generated_programs(int count, std::uint64_t seed) {
  Rng rng(seed);
  const char* heads[] = {"alpha", "beta", "gamma_1", "delta"};
  const char* vars[] = {"N", "Node", "X", "V_2"};
  std::vector<std::string> out;
  for (int p = 0; p < count; ++p) {
    std::string text;
    const int rules = 1 + static_cast<int>(rng.below(4));
    for (int r = 0; r < rules; ++r) {
      // Distinct heads per rule index keep the program free of duplicates.
      const std::string head = std::string(heads[rng.below(4)]) + "_r" + std::to_string(r);
      const std::string var = vars[rng.below(4)];
      text += "rule(" + head + "(" + var + ")) :-";
      text += rng.below(2) ? "\n  " : " ";
      const int literals = 1 + static_cast<int>(rng.below(4));
      for (int l = 0; l < literals; ++l) {
        if (l) text += rng.below(2) ? ",\n  " : ", ";
        if (rng.below(3) == 0) text += "not ";
        text += "z(" + var + ", scale" + std::to_string(rng.below(8)) + ", ";
        text += rng.below(2) ? "active)" : "inactive)";
      }
      text += ".";
      text += rng.below(4) == 0 ? "  % note\n" : "\n";
    }
    if (rng.below(3) == 0) {
      for (int f = 0; f < 3; ++f) {
        text += "z(n" + std::to_string(f) + ", scale" + std::to_string(rng.below(8)) + ", active).\n";
      }
    }
    out.push_back(text);
  }
  return out;
}

std::string temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("glwt_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace glwt::testing
