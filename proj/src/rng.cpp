#include "cwishart/rng.hpp"

#include <numbers>

namespace cwishart {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t key) noexcept {
    return mix64(parent ^ mix64(key));
}

double Stream::phase() {
    // generate_canonical is in [0, 1); guard the rounding edge case anyway.
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double p = two_pi * std::generate_canonical<double, 64>(engine_);
    return p < two_pi ? p : 0.0;
}

} // namespace cwishart
