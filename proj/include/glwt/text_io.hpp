#pragma once

#include "glwt/graph.hpp"

#include <string>
#include <vector>

namespace glwt {

std::string read_text_file(const std::string& path);
/// Creates parent directories as needed.
void write_text_file(const std::string& path, const std::string& text);

std::string strip_comment(const std::string& line, char marker);
std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

/// Shortest "%.17g"-class text that round-trips the double exactly.
std::string format_double(double value);
double parse_double(const std::string& text, const std::string& context);

// Signals: one value per line, row r = node r. Matrices: comma-separated
// rows. Blank lines and '#' comments are skipped.
Vector parse_signal_csv(const std::string& text);
Vector read_signal_csv(const std::string& path);
std::string format_signal_csv(const Vector& signal);
void write_signal_csv(const Vector& signal, const std::string& path);

Matrix parse_matrix_csv(const std::string& text);
Matrix read_matrix_csv(const std::string& path);
std::string format_matrix_csv(const Matrix& m);

}  // namespace glwt
