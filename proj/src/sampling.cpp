#include "cwishart/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace cwishart {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

} // namespace

double psi2_constant(Distribution d) noexcept {
    switch (d.kind) {
    case DistributionKind::gaussian:
        return 1.6329931618554521;   // sqrt(8/3)
    case DistributionKind::rademacher:
        return 1.2011224087864498;   // 1/sqrt(ln 2)
    case DistributionKind::uniform:
        return 1.3383691554309143;
    }
    return 0.0;
}

std::string_view distribution_name(Distribution d) noexcept {
    switch (d.kind) {
    case DistributionKind::gaussian:
        return "gaussian";
    case DistributionKind::rademacher:
        return "rademacher";
    case DistributionKind::uniform:
        return "uniform";
    }
    return "?";
}

Distribution parse_distribution(std::string_view name) {
    if (name == "gaussian") {
        return {DistributionKind::gaussian};
    }
    if (name == "rademacher") {
        return {DistributionKind::rademacher};
    }
    if (name == "uniform") {
        return {DistributionKind::uniform};
    }
    throw InvalidArgument("unknown distribution '" + std::string(name) +
                          "' (expected gaussian, rademacher or uniform)");
}

double draw_scalar(Distribution d, Stream& stream) {
    switch (d.kind) {
    case DistributionKind::gaussian:
        return stream.normal();
    case DistributionKind::rademacher:
        return stream.sign();
    case DistributionKind::uniform:
        return stream.uniform(-kSqrt3, kSqrt3);
    }
    return 0.0;
}

RealMatrix draw_white(Index n, Index m, Distribution d, Stream& stream) {
    RealMatrix x(n, m);
    double* p = x.data();
    for (Index k = 0; k < x.size(); ++k) {
        p[k] = draw_scalar(d, stream);
    }
    return x;
}

ComplexMatrix draw_white_complex(Index n, Index m, Distribution d, Stream& stream) {
    ComplexMatrix x(n, m);
    Complex* p = x.data();
    const double scale = std::numbers::sqrt2 / 2.0;
    for (Index k = 0; k < x.size(); ++k) {
        const double re = draw_scalar(d, stream);
        const double im = draw_scalar(d, stream);
        p[k] = Complex(scale * re, scale * im);
    }
    return x;
}

SampleSource::SampleSource(Matrix sigma, Distribution d) : sigma_(std::move(sigma)), distribution_(d) {
    if (sigma_.empty() || !sigma_.is_square()) {
        throw InvalidArgument("SampleSource: sigma must be a nonempty square matrix");
    }
    if (!sigma_.is_real()) {
        throw InvalidArgument("SampleSource: sigma must be real (complex samples use a real covariance)");
    }
    if (!is_hermitian(sigma_)) {
        throw NotPsdError("SampleSource: sigma is not symmetric");
    }
    const RealVector ev = hermitian_eigen(sigma_).eigenvalues;
    if (!(ev(0) > kPsdTolerance * std::max(1.0, ev(ev.size() - 1)))) {
        throw NotPsdError("SampleSource: sigma is not positive definite (smallest eigenvalue " +
                          std::to_string(ev(0)) + ")");
    }
    root_ = psd_sqrt(sigma_);
    const RealMatrix& r = root_.real_values();
    diagonal_root_ = r.isDiagonal(0.0);
}

template <class M>
M SampleSource::color(M white) const {
    const RealMatrix& r = root_.real_values();
    if (diagonal_root_) {
        for (Index i = 0; i < white.rows(); ++i) {
            if (r(i, i) != 1.0) {
                white.row(i) *= r(i, i);
            }
        }
        return white;
    }
    return M(r.template cast<typename M::Scalar>() * white);
}

RealMatrix SampleSource::draw_real(Index m, std::uint64_t seed) const {
    if (m < 1) {
        throw InvalidArgument("draw_real: m must be positive");
    }
    Stream stream(seed);
    return color(draw_white(dimension(), m, distribution_, stream));
}

ComplexMatrix SampleSource::draw_complex(Index m, std::uint64_t seed) const {
    if (m < 1) {
        throw InvalidArgument("draw_complex: m must be positive");
    }
    Stream stream(seed);
    return color(draw_white_complex(dimension(), m, distribution_, stream));
}

SampleBatch draw_real(Index n, Index m, const Matrix& sigma, Distribution d, std::uint64_t seed) {
    if (sigma.rows() != n) {
        throw InvalidArgument("draw_real: sigma is not " + std::to_string(n) + "x" + std::to_string(n));
    }
    SampleSource source(sigma, d);
    return {Matrix(source.draw_real(m, seed)), sigma, d, seed, false};
}

SampleBatch draw_complex(Index n, Index m, const Matrix& sigma, Distribution d, std::uint64_t seed) {
    if (sigma.rows() != n) {
        throw InvalidArgument("draw_complex: sigma is not " + std::to_string(n) + "x" + std::to_string(n));
    }
    SampleSource source(sigma, d);
    return {Matrix(source.draw_complex(m, seed)), sigma, d, seed, true};
}

} // namespace cwishart
