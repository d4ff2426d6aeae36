#pragma once

#include <cstdint>
#include <random>

namespace hbundle {

/// Mixes a master seed with a trial index into an independent sub-seed
/// (splitmix64 finaliser), so that trial i sees the same stream no matter
/// in which order trials run.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Thin wrapper over mt19937_64 whose draws are portable across standard
/// libraries (the std distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer on [lo, hi], inclusive.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);
  bool coin(double p_true) { return uniform(0.0, 1.0) < p_true; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hbundle
