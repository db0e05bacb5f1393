#include "nbmc/rng.hpp"

#include <cmath>

namespace nbmc {

namespace {

// SplitMix64 finalizer; decorrelates nearby seeds before they reach the engine.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

RandomStream RandomStream::substream(std::uint64_t master_seed,
                                     std::uint64_t index) {
  return RandomStream(splitmix64(master_seed) + 0x9E3779B97F4A7C15ULL * (index + 1));
}

std::uint64_t RandomStream::next_u64() { return engine_(); }

double RandomStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_pos() {
  double u;
  do {
    u = uniform01();
  } while (u == 0.0);
  return u;
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * m;
  has_spare_ = true;
  return u * m;
}

double RandomStream::exponential(double rate) {
  return -std::log(uniform_pos()) / rate;
}

}  // namespace nbmc
