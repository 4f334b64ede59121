#pragma once

#include <cstdint>
#include <random>

namespace rscatter {

/// The single random source threaded through schedulers and protocols.
///
/// Bit-level contract (the trace format depends on it): the engine is
/// std::mt19937_64 seeded with the scenario seed, and every derived value is
/// built from whole 64-bit outputs as follows, never through the
/// implementation-defined std distributions.
///   uniform01  = (next() >> 11) * 2^-53        in [0, 1)
///   coin       = next() >> 63                  in {0, 1}
///   bernoulli  = uniform01() < p
/// Every call to next() increments draws(), which the impossibility harness
/// uses to prove a protocol is coin-free.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() {
    ++draws_;
    return engine_();
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  int coin() { return static_cast<int>(next() >> 63); }

  bool bernoulli(double p) { return uniform01() < p; }

  std::uint64_t draws() const noexcept { return draws_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

/// Stateless seed scrambler used to derive per-trial seeds in campaigns.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace rscatter
