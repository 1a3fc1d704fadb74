#pragma once

#include <cstdint>
#include <random>

namespace cwishart {

/// SplitMix64 finalizer; a bijection on 64-bit words with full avalanche.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Child stream seed for `key` under `parent`: mix64(parent ^ mix64(key)).
/// Distinct keys under one parent give unrelated streams.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t key) noexcept;

/// One random stream. Never shared between workers: each trial builds its own
/// from a derived seed, so results do not depend on scheduling.
class Stream {
  public:
    explicit Stream(std::uint64_t seed) : engine_(mix64(seed)) {}

    double normal() { return normal_(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    /// Uniform on [0, 2*pi).
    double phase();
    /// +1 or -1 with equal probability.
    double sign() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

    std::mt19937_64& engine() noexcept { return engine_; }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace cwishart
