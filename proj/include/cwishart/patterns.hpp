#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cwishart/matrix.hpp"

namespace cwishart {

struct IdentityShape {};

/// Hermitian Toeplitz T(omega): entry (a,b) = omega^(b-a) on and above the
/// diagonal, conj(omega)^(a-b) below. Requires 0 < |omega| < 1.
struct ToeplitzShape {
    Complex omega;
};

/// Non-Hermitian P(c, Theta): entry (a,b) = (c e^{j Theta_ab})^|a-b|, 0 < c < 1.
struct PhaseShape {
    double c;
    RealMatrix theta;
};

/// Any square matrix; no further validation.
struct CustomShape {
    Matrix b;
};

/// Shape parameter B (m x m) of the correlated sample covariance.
class CorrelationPattern {
  public:
    using Shape = std::variant<IdentityShape, ToeplitzShape, PhaseShape, CustomShape>;

    static CorrelationPattern identity(Index m);
    static CorrelationPattern toeplitz(Complex omega, Index m);
    static CorrelationPattern phase(double c, RealMatrix theta);
    static CorrelationPattern custom(Matrix b);

    Index m() const noexcept { return m_; }
    const Shape& shape() const noexcept { return shape_; }

    /// True when trace(B) = m by construction (every named kind has unit diagonal).
    bool unit_diagonal() const noexcept { return !std::holds_alternative<CustomShape>(shape_); }

  private:
    CorrelationPattern(Shape shape, Index m) : shape_(std::move(shape)), m_(m) {}

    Shape shape_;
    Index m_;
};

Matrix materialize(const CorrelationPattern& p);

/// X * B, using the Toeplitz recursion (O(nm)) or skipping the product for the
/// identity; other kinds fall back to a dense product.
Matrix right_multiply(const Matrix& x, const CorrelationPattern& p);

/// ||T(omega)||_F^2 in closed form:
///   m(1+|w|^2)/(1-|w|^2) + 2|w|^2(|w|^{2m} - 1)/(1-|w|^2)^2
double toeplitz_frobenius_sq(Complex omega, Index m);

/// Gershgorin bound (1+|w|)/(1-|w|) on ||T(omega)||; also bounds ||P(|w|, Theta)||.
double toeplitz_spectral_bound(Complex omega);

/// m x m phases, i.i.d. uniform on [0, 2pi), drawn in shell order: shell k is
/// Theta(k, 0..k) followed by Theta(0..k-1, k). The leading k x k block of
/// draw_phases(m, s) therefore equals draw_phases(k, s).
RealMatrix draw_phases(Index m, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Textual pattern specs: identity | toeplitz:<re>[+<im>j] | phase:<c> |
// custom:<re.csv>[:<im.csv>]

struct IdentitySpec {};
struct ToeplitzSpec {
    Complex omega;
};
struct PhaseSpec {
    double c;
};
struct CustomSpec {
    Matrix b;
};

/// An m-free pattern family; `text` is the spec string it was parsed from.
struct PatternSpec {
    std::variant<IdentitySpec, ToeplitzSpec, PhaseSpec, CustomSpec> family;
    std::string text;

    bool is_phase() const noexcept { return std::holds_alternative<PhaseSpec>(family); }
};

PatternSpec parse_pattern(std::string_view text);

/// Comma-separated list of specs.
std::vector<PatternSpec> parse_pattern_list(std::string_view text);

/// Builds the m x m pattern. Phase patterns draw Theta from `phase_seed`;
/// custom patterns use the leading m x m block of the stored matrix.
CorrelationPattern instantiate(const PatternSpec& spec, Index m, std::uint64_t phase_seed);

/// Plain CSV of real numbers, one matrix row per line. Blank lines and lines
/// starting with '#' are skipped.
RealMatrix parse_real_csv(std::string_view text);
RealMatrix read_real_csv(const std::string& path);

/// Real matrix from `re_path`, or complex when `im_path` is given.
Matrix load_matrix(const std::string& re_path, const std::optional<std::string>& im_path = std::nullopt);

} // namespace cwishart
