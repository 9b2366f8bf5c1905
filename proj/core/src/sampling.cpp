#include "adaptive_mc/sampling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace adaptive_mc {

Rng::Rng(RngState state) {
  std::uint64_t sm = derive_seed(state.seed, state.stream_id);
  for (auto& word : s_) word = splitmix64(sm);
  // xoshiro must not start from the all-zero state.
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

Rng::result_type Rng::operator()() {
  const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

__extension__ using Wide = unsigned __int128;

std::uint64_t Rng::uniform_index(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_index: bound must be positive");
  Wide product = static_cast<Wide>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = static_cast<Wide>((*this)()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

double Rng::uniform01() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double Rng::standard_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

Vector Rng::gaussian_vector(Eigen::Index n) {
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = standard_normal();
  return out;
}

DenseMatrix Rng::gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
  DenseMatrix out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = standard_normal();
  }
  return out;
}

Vector Rng::unit_vector(Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("unit_vector: dimension must be positive");
  for (;;) {
    Vector v = gaussian_vector(n);
    const double norm = v.norm();
    if (norm > 1e-300) return v / norm;
  }
}

IndexSet sample_uniform_subset(std::size_t m, std::size_t d, Rng& rng) {
  if (d == 0) throw std::invalid_argument("sample size d must be at least 1");
  if (d > m) {
    throw std::invalid_argument("sample size d = " + std::to_string(d) +
                                " exceeds m = " + std::to_string(m));
  }
  std::vector<std::size_t> pool(m);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < d; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(m - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(d);
  std::sort(pool.begin(), pool.end());
  return IndexSet(m, std::move(pool));
}

}  // namespace adaptive_mc
