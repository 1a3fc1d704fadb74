#pragma once

#include <cstdint>
#include <string_view>

#include "cwishart/matrix.hpp"
#include "cwishart/rng.hpp"

namespace cwishart {

enum class DistributionKind { gaussian, rademacher, uniform };

/// Zero-mean, unit-variance scalar law for the entries of X0.
struct Distribution {
    DistributionKind kind = DistributionKind::gaussian;

    friend bool operator==(Distribution, Distribution) = default;
};

/// psi2 (Orlicz) norm of the unit-variance law, i.e. the smallest t with
/// E exp(x^2/t^2) <= 2:
///   gaussian   sqrt(8/3)
///   rademacher 1/sqrt(ln 2)
///   uniform    1.33836915543091 (law on [-sqrt3, sqrt3], solved numerically)
double psi2_constant(Distribution d) noexcept;

std::string_view distribution_name(Distribution d) noexcept;

/// Accepts `gaussian`, `rademacher`, `uniform`.
Distribution parse_distribution(std::string_view name);

double draw_scalar(Distribution d, Stream& stream);

/// n x m matrix of i.i.d. draws, filled column by column.
RealMatrix draw_white(Index n, Index m, Distribution d, Stream& stream);

/// (U + jV)/sqrt(2) with U, V independent n x m white matrices, interleaved per entry.
ComplexMatrix draw_white_complex(Index n, Index m, Distribution d, Stream& stream);

struct SampleBatch {
    Matrix x;
    Matrix sigma;
    Distribution distribution;
    std::uint64_t seed = 0;
    bool complex_flag = false;
};

/**
 * A covariance Sigma paired with its square root, for repeated draws.
 *
 * Sigma must be real symmetric positive definite. Complex samples are colored
 * by the same real root, which keeps Re(x) and Im(x) i.i.d. with covariance
 * Sigma/2 each.
 */
class SampleSource {
  public:
    SampleSource(Matrix sigma, Distribution d);

    Index dimension() const noexcept { return sigma_.rows(); }
    const Matrix& sigma() const noexcept { return sigma_; }
    const Matrix& root() const noexcept { return root_; }
    Distribution distribution() const noexcept { return distribution_; }

    /// X = Sigma^{1/2} X0; deterministic in (m, seed).
    RealMatrix draw_real(Index m, std::uint64_t seed) const;
    ComplexMatrix draw_complex(Index m, std::uint64_t seed) const;

  private:
    template <class M>
    M color(M white) const;

    Matrix sigma_;
    Matrix root_;
    bool diagonal_root_ = false;
    Distribution distribution_;
};

SampleBatch draw_real(Index n, Index m, const Matrix& sigma, Distribution d, std::uint64_t seed);
SampleBatch draw_complex(Index n, Index m, const Matrix& sigma, Distribution d, std::uint64_t seed);

} // namespace cwishart
