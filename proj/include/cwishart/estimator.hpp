#pragma once

#include "cwishart/matrix.hpp"
#include "cwishart/patterns.hpp"
#include "cwishart/sampling.hpp"

namespace cwishart {

struct EstimateResult {
    Matrix sigma_hat;
    double spectral_error = 0.0;               ///< ||Sigma_hat - Sigma||
    double frobenius_error = 0.0;              ///< ||Sigma_hat - Sigma||_F
    double normalized_frobenius_error = 0.0;   ///< frobenius_error / ||Sigma||_F
};

/// Correlated sample covariance X B X^H / m (X^T for real X), computed as (XB) X^H.
Matrix correlated_sample_covariance(const Matrix& x, const Matrix& b);

/// Same estimator with B supplied as a pattern; structured kinds skip the dense product.
Matrix correlated_sample_covariance(const Matrix& x, const CorrelationPattern& p);

/// Classical estimator X X^H / m.
Matrix sample_covariance(const Matrix& x);

/// Error metrics of `sigma_hat` against `sigma`; the raw difference is scored.
EstimateResult score(Matrix sigma_hat, const Matrix& sigma);

/// Estimates from the batch and scores against batch.sigma. When B is
/// Hermitian the reported sigma_hat is symmetrized first.
EstimateResult estimate_and_score(const SampleBatch& batch, const CorrelationPattern& p);

} // namespace cwishart
