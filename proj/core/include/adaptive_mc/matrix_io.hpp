#pragma once

// Plain-text matrix files and key=value metadata files.
//
// Matrix format: first line "m n", then m lines of n space-separated values
// printed with 17 significant digits so that a round trip is exact.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "adaptive_mc/linalg.hpp"

namespace adaptive_mc {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_matrix(std::ostream& out, const DenseMatrix& a);
DenseMatrix read_matrix(std::istream& in);

void write_matrix_file(const std::filesystem::path& path, const DenseMatrix& a);
DenseMatrix read_matrix_file(const std::filesystem::path& path);

/// Ordered key=value lines. Keys are written in map order.
using KeyValues = std::map<std::string, std::string>;

void write_key_values(std::ostream& out, const KeyValues& kv);
KeyValues read_key_values(std::istream& in);

void write_key_values_file(const std::filesystem::path& path, const KeyValues& kv);
KeyValues read_key_values_file(const std::filesystem::path& path);

/// 17 significant digits, "%.17g" style.
std::string format_exact(double value);

/// Shortest representation that round-trips.
std::string format_shortest(double value);

}  // namespace adaptive_mc
