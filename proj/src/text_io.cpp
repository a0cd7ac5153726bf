#include "glwt/text_io.hpp"

#include "glwt/error.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace glwt {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoFailure, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::IoFailure, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) fail(ErrorKind::IoFailure, "write to '" + path + "' failed");
}

std::string strip_comment(const std::string& line, char marker) {
  const auto pos = line.find(marker);
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string format_double(double value) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

double parse_double(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  if (t.empty()) fail(ErrorKind::SchemaError, context + ": empty numeric field");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE) {
    fail(ErrorKind::SchemaError, context + ": cannot parse '" + t + "' as a number");
  }
  return v;
}

Matrix parse_matrix_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(strip_comment(line, '#'));
    if (line.empty()) continue;
    std::vector<double> row;
    for (const std::string& field : split(line, ',')) {
      row.push_back(parse_double(field, "line " + std::to_string(line_no)));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail(ErrorKind::SchemaError, "line " + std::to_string(line_no) + ": expected " +
                                       std::to_string(rows.front().size()) + " columns, got " +
                                       std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return Matrix(0, 0);
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

Matrix read_matrix_csv(const std::string& path) { return parse_matrix_csv(read_text_file(path)); }

std::string format_matrix_csv(const Matrix& m) {
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_double(m(r, c));
    }
    out += '\n';
  }
  return out;
}

Vector parse_signal_csv(const std::string& text) {
  const Matrix m = parse_matrix_csv(text);
  if (m.size() == 0) return Vector(0);
  if (m.cols() != 1) fail(ErrorKind::SchemaError, "signal file must have one value per line");
  return m.col(0);
}

Vector read_signal_csv(const std::string& path) { return parse_signal_csv(read_text_file(path)); }

std::string format_signal_csv(const Vector& signal) { return format_matrix_csv(signal); }

void write_signal_csv(const Vector& signal, const std::string& path) {
  write_text_file(path, format_signal_csv(signal));
}

}  // namespace glwt
