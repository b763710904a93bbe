#pragma once

#include <cstdint>
#include <random>

namespace semical {

/// Seeded random source used by every sampling routine.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. Uniform and normal variates are derived here rather than
/// through std::*_distribution, whose algorithms are implementation-defined,
/// so a seed reproduces the same stream on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller).
  double normal();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 finalizer; derives independent stream seeds from (seed, key).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key);

}  // namespace semical
