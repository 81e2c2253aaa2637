#include "cohspec/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace cohspec {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RandomSource::RandomSource(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_(master_seed), stream_(stream_id) {
  std::uint64_t x = master_seed;
  (void)splitmix64(x);
  x ^= stream_id * 0xD2B74407B1CE6E93ULL + 0x8BB84B93962EACC9ULL;
  derived_ = splitmix64(x);
  std::uint64_t s = derived_;
  for (auto& w : state_) w = splitmix64(s);
  bool all_zero = true;
  for (auto w : state_) all_zero = all_zero && w == 0;
  if (all_zero) state_[0] = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t RandomSource::next_u64() {
  // xoshiro256++
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RandomSource::uniform01() {
  return double(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::uniform(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("uniform: requires lo < hi");
  return lo + (hi - lo) * uniform01();
}

double RandomSource::gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_gauss_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  cached_gauss_ = v * f;
  has_cached_ = true;
  return u * f;
}

int RandomSource::bernoulli(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("bernoulli: p outside [0, 1]");
  return uniform01() < p ? 1 : 0;
}

DenseVector RandomSource::gaussian_vector(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gaussian_vector: n must be positive");
  DenseVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = gaussian();
  return x;
}

DenseVector RandomSource::sphere(std::size_t n) {
  if (n == 0) throw std::invalid_argument("sphere: n must be positive");
  for (;;) {
    DenseVector x = gaussian_vector(n);
    const double nrm = norm2(x);
    if (nrm > 0.0) {
      for (std::size_t i = 0; i < n; ++i) x[i] /= nrm;
      return x;
    }
  }
}

}  // namespace cohspec
