#ifndef NBMC_RNG_HPP
#define NBMC_RNG_HPP

#include <cstdint>
#include <random>

namespace nbmc {

/// Seeded random stream with a split-by-index contract for parallel work.
///
/// A stream is single-owner: never share one instance across threads.
/// Independent substreams are derived from a master seed with
/// RandomStream::substream(master, index); distinct indices give streams
/// that do not overlap in practice (seeds are decorrelated through a
/// SplitMix64 mix before seeding the engine).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  /// Substream `index` of a master seed. Deterministic.
  static RandomStream substream(std::uint64_t master_seed, std::uint64_t index);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform on (0, 1); never returns 0 (safe as a log() argument).
  double uniform_pos();

  /// Standard normal (Marsaglia polar, one spare cached).
  double normal();

  /// Exponential with the given rate.
  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace nbmc

#endif  // NBMC_RNG_HPP
