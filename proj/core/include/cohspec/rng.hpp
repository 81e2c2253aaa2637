#pragma once

#include <array>
#include <cstdint>

#include "cohspec/linalg.hpp"

namespace cohspec {

// Deterministic random source: xoshiro256++ seeded through splitmix64 from
// (master_seed, stream_id). The same pair always yields the same draw
// sequence; parallel consumers take distinct stream ids. Gaussians use the
// Marsaglia polar transform, so the sequence is fixed by the u64 stream.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t master_seed, std::uint64_t stream_id = 0);

  std::uint64_t master_seed() const { return master_; }
  std::uint64_t stream_id() const { return stream_; }
  // The splitmix64 init value mixing (master_seed, stream_id); recorded per
  // trial so a single u64 reproduces the stream.
  std::uint64_t derived_seed() const { return derived_; }

  RandomSource with_stream(std::uint64_t stream_id) const {
    return RandomSource(master_, stream_id);
  }

  std::uint64_t next_u64();
  double uniform01();  // [0, 1)
  double uniform(double lo, double hi);
  double gaussian();   // N(0, 1)
  int bernoulli(double p);

  DenseVector gaussian_vector(std::size_t n);
  // Uniform draw from the unit sphere S^{n-1} (normalized Gaussian).
  DenseVector sphere(std::size_t n);

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t master_ = 0;
  std::uint64_t stream_ = 0;
  std::uint64_t derived_ = 0;
  double cached_gauss_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace cohspec
