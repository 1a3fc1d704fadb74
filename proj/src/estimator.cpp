#include "cwishart/estimator.hpp"

#include <string>

#include "cwishart/kernels.hpp"

namespace cwishart {

namespace {

Matrix finish(const Matrix& xb, const Matrix& x) {
    return xb.visit([&](const auto& p) {
        return x.visit([&](const auto& xv) { return Matrix(kernels::finish_sandwich(p, xv)); });
    });
}

void require_conformable(const Matrix& x, Index b_rows, Index b_cols) {
    if (x.empty()) {
        throw InvalidArgument("correlated_sample_covariance: X is empty");
    }
    if (b_rows != b_cols || b_rows != x.cols()) {
        throw InvalidArgument("correlated_sample_covariance: X is " + std::to_string(x.rows()) + "x" +
                              std::to_string(x.cols()) + " but B is " + std::to_string(b_rows) + "x" +
                              std::to_string(b_cols));
    }
}

} // namespace

Matrix correlated_sample_covariance(const Matrix& x, const Matrix& b) {
    require_conformable(x, b.rows(), b.cols());
    return finish(x * b, x);
}

Matrix correlated_sample_covariance(const Matrix& x, const CorrelationPattern& p) {
    require_conformable(x, p.m(), p.m());
    return finish(right_multiply(x, p), x);
}

Matrix sample_covariance(const Matrix& x) {
    if (x.empty()) {
        throw InvalidArgument("sample_covariance: X is empty");
    }
    return finish(x, x);
}

EstimateResult score(Matrix sigma_hat, const Matrix& sigma) {
    if (sigma_hat.rows() != sigma.rows() || sigma_hat.cols() != sigma.cols()) {
        throw InvalidArgument("score: Sigma_hat and Sigma differ in shape");
    }
    const Matrix diff = sigma_hat - sigma;
    EstimateResult r;
    r.spectral_error = spectral_norm(diff);
    r.frobenius_error = frobenius_norm(diff);
    r.normalized_frobenius_error = r.frobenius_error / frobenius_norm(sigma);
    r.sigma_hat = std::move(sigma_hat);
    return r;
}

EstimateResult estimate_and_score(const SampleBatch& batch, const CorrelationPattern& p) {
    if (batch.x.cols() != p.m()) {
        throw InvalidArgument("estimate_and_score: batch has m = " + std::to_string(batch.x.cols()) +
                              ", pattern has m = " + std::to_string(p.m()));
    }
    Matrix sigma_hat = correlated_sample_covariance(batch.x, p);
    const bool hermitian_b = std::holds_alternative<IdentityShape>(p.shape()) ||
                             std::holds_alternative<ToeplitzShape>(p.shape()) ||
                             (std::holds_alternative<CustomShape>(p.shape()) &&
                              is_hermitian(std::get<CustomShape>(p.shape()).b));
    if (hermitian_b) {
        sigma_hat = hermitian_part(sigma_hat);
    }
    return score(std::move(sigma_hat), batch.sigma);
}

} // namespace cwishart
