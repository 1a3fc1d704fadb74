#pragma once

#include <optional>
#include <string>

#include "cwishart/matrix.hpp"
#include "cwishart/patterns.hpp"

namespace cwishart {

enum class BoundForm {
    tail,          ///< sqrt(n + delta), (n + delta); holds w.p. 1 - 2exp(-delta) (real)
    expectation,   ///< sqrt(n), n; bounds E||.||
};

/// Inputs to the error bounds. C is the unspecified absolute constant
/// (default 1); K is the psi2 constant of the sample law.
struct BoundQuery {
    Index n = 1;
    Index m = 1;
    double delta = 0.0;
    double k = 1.0;
    double c = 1.0;
    double b_frobenius = 1.0;
    double b_spectral = 1.0;
    Complex b_trace{1.0, 0.0};
    double sigma_spectral = 1.0;
    BoundForm form = BoundForm::tail;
    Field field = Field::real;

    /// Throws InvalidArgument if any input is out of range.
    void validate() const;
};

/// Query with ||B||_F, ||B|| and tr(B) computed from the materialized pattern.
BoundQuery make_query(const CorrelationPattern& p, Index n, double k, double c, double delta,
                      double sigma_spectral, BoundForm form = BoundForm::tail, Field field = Field::real);

/// C K^2 (sqrt(n+delta) ||B||_F + (n+delta) ||B||) / m * ||Sigma||.
double concentration_tail_bound(const BoundQuery& q);

/// |tr(B)/m - 1| ||Sigma||.
double bias_term(const BoundQuery& q);

/// bias_term + concentration_tail_bound.
double estimation_error_bound(const BoundQuery& q);

/// Probability with which the tail form holds. Real samples: 1 - 2exp(-delta),
/// clamped at 0. Complex samples carry an unknown constant c, so no value.
struct Confidence {
    std::optional<double> level;
    std::string expression;
};
Confidence confidence(const BoundQuery& q);

struct BoundBreakdown {
    double bias = 0.0;
    double concentration = 0.0;
    double total = 0.0;
    Confidence confidence;
};
BoundBreakdown evaluate(const BoundQuery& q);

/// Expectation bound written with the closed-form Toeplitz norms:
///   C K^2 (sqrt((1+|w|^2)/(1-|w|^2) * n/m) + (1+|w|)/(1-|w|) * n/m) ||Sigma||.
/// Uses the upper bound m(1+|w|^2)/(1-|w|^2) on ||T||_F^2, so it dominates the
/// generic bound evaluated at the exact Frobenius norm.
double toeplitz_expectation_bound(Complex omega, Index n, Index m, double k, double c, double sigma_spectral);

} // namespace cwishart
