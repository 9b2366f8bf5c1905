#include "adaptive_mc/matrix_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace adaptive_mc {

std::string format_exact(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

std::string format_shortest(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

void write_matrix(std::ostream& out, const DenseMatrix& a) {
  out << a.rows() << ' ' << a.cols() << '\n';
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j > 0) out << ' ';
      out << format_exact(a(i, j));
    }
    out << '\n';
  }
}

DenseMatrix read_matrix(std::istream& in) {
  long long rows = -1;
  long long cols = -1;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0) {
    throw FormatError("matrix file: expected header 'm n'");
  }
  DenseMatrix a(rows, cols);
  std::string token;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!(in >> token)) {
        throw FormatError("matrix file: truncated at row " + std::to_string(i));
      }
      double value = 0.0;
      const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
      if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
        throw FormatError("matrix file: bad value '" + token + "'");
      }
      a(i, j) = value;
    }
  }
  if (in >> token) throw FormatError("matrix file: trailing data after " +
                                     std::to_string(rows) + "x" + std::to_string(cols) + " entries");
  return a;
}

void write_matrix_file(const std::filesystem::path& path, const DenseMatrix& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_matrix(out, a);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

DenseMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_matrix(in);
}

void write_key_values(std::ostream& out, const KeyValues& kv) {
  for (const auto& [key, value] : kv) out << key << '=' << value << '\n';
}

KeyValues read_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw FormatError("line " + std::to_string(line_no) + ": expected key=value");
    }
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

void write_key_values_file(const std::filesystem::path& path, const KeyValues& kv) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_key_values(out, kv);
}

KeyValues read_key_values_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_key_values(in);
}

}  // namespace adaptive_mc
