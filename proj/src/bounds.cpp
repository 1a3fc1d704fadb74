#include "cwishart/bounds.hpp"

#include <cmath>

namespace cwishart {

void BoundQuery::validate() const {
    if (n < 1 || m < 1) {
        throw InvalidArgument("bound: n and m must be at least 1");
    }
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw InvalidArgument("bound: delta must be a finite nonnegative number");
    }
    if (!(k >= 1.0)) {
        throw InvalidArgument("bound: K must be at least 1");
    }
    // C = 0 is accepted so the bias term can be evaluated on its own.
    if (!(c >= 0.0)) {
        throw InvalidArgument("bound: C must be nonnegative");
    }
    if (!(b_frobenius >= 0.0) || !(b_spectral >= 0.0) || !(sigma_spectral >= 0.0)) {
        throw InvalidArgument("bound: norms must be nonnegative");
    }
    if (b_spectral > b_frobenius * (1.0 + 1e-12)) {
        throw InvalidArgument("bound: ||B|| cannot exceed ||B||_F");
    }
}

BoundQuery make_query(const CorrelationPattern& p, Index n, double k, double c, double delta,
                      double sigma_spectral, BoundForm form, Field field) {
    const Matrix b = materialize(p);
    BoundQuery q;
    q.n = n;
    q.m = p.m();
    q.delta = delta;
    q.k = k;
    q.c = c;
    q.b_frobenius = frobenius_norm(b);
    q.b_spectral = spectral_norm(b);
    q.b_trace = trace(b);
    q.sigma_spectral = sigma_spectral;
    q.form = form;
    q.field = field;
    q.validate();
    return q;
}

double concentration_tail_bound(const BoundQuery& q) {
    q.validate();
    const double dim = static_cast<double>(q.n) + (q.form == BoundForm::tail ? q.delta : 0.0);
    return q.c * q.k * q.k * (std::sqrt(dim) * q.b_frobenius + dim * q.b_spectral) / static_cast<double>(q.m) *
           q.sigma_spectral;
}

double bias_term(const BoundQuery& q) {
    q.validate();
    return std::abs(q.b_trace / static_cast<double>(q.m) - 1.0) * q.sigma_spectral;
}

double estimation_error_bound(const BoundQuery& q) {
    return bias_term(q) + concentration_tail_bound(q);
}

Confidence confidence(const BoundQuery& q) {
    if (q.form == BoundForm::expectation) {
        return {std::nullopt, "expectation"};
    }
    if (q.field == Field::complex) {
        return {std::nullopt, "1 - c*exp(-delta), c unknown"};
    }
    return {std::max(0.0, 1.0 - 2.0 * std::exp(-q.delta)), "1 - 2*exp(-delta)"};
}

BoundBreakdown evaluate(const BoundQuery& q) {
    BoundBreakdown out;
    out.bias = bias_term(q);
    out.concentration = concentration_tail_bound(q);
    out.total = out.bias + out.concentration;
    out.confidence = confidence(q);
    return out;
}

double toeplitz_expectation_bound(Complex omega, Index n, Index m, double k, double c, double sigma_spectral) {
    const double r = std::abs(omega);
    if (!(r > 0.0 && r < 1.0)) {
        throw InvalidArgument("toeplitz_expectation_bound: need 0 < |omega| < 1");
    }
    if (n < 1 || m < 1) {
        throw InvalidArgument("toeplitz_expectation_bound: n and m must be at least 1");
    }
    const double ratio = static_cast<double>(n) / static_cast<double>(m);
    const double frob_factor = (1.0 + r * r) / (1.0 - r * r);
    const double spec_factor = (1.0 + r) / (1.0 - r);
    return c * k * k * (std::sqrt(frob_factor * ratio) + spec_factor * ratio) * sigma_spectral;
}

} // namespace cwishart
