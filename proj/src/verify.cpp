#include "cwishart/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "cwishart/patterns.hpp"
#include "cwishart/montecarlo.hpp"
#include "cwishart/rng.hpp"

namespace cwishart {

namespace {

constexpr double kSplitThreshold = 1e-12;

ComplexVector random_unit(Index n, Stream& s) {
    ComplexVector v = draw_white_complex(n, 1, {DistributionKind::gaussian}, s).col(0);
    return v / v.norm();
}

RealVector random_unit_real(Index n, Stream& s) {
    RealVector v = draw_white(n, 1, {DistributionKind::gaussian}, s).col(0);
    return v / v.norm();
}

Index random_size(Stream& s, Index lo, Index hi) {
    return lo + static_cast<Index>(s.engine()() % static_cast<std::uint64_t>(hi - lo + 1));
}

IdentityReport finish(std::string name, double deviation, Index instances, double tolerance = 1e-10) {
    IdentityReport r;
    r.name = std::move(name);
    r.max_deviation = deviation;
    r.instances = instances;
    r.tolerance = tolerance;
    r.pass = deviation <= tolerance;
    return r;
}

double relative_excess(double value, double limit) {
    return limit > 0.0 ? std::max(0.0, (value - limit) / limit) : std::max(0.0, value);
}

} // namespace

IdentityReport check_vec_quadratic_identity(Index n, Index m, std::uint64_t seed, Index instances, Field field) {
    if (n < 1 || m < 1 || n > 16 || m > 16) {
        throw InvalidArgument("check_vec_quadratic_identity: need 1 <= n, m <= 16");
    }
    double worst = 0.0;
    for (Index k = 0; k < instances; ++k) {
        Stream s(derive_seed(seed, static_cast<std::uint64_t>(k)));
        if (field == Field::real) {
            const RealMatrix x = draw_white(n, m, {DistributionKind::gaussian}, s);
            const RealMatrix b = draw_white(m, m, {DistributionKind::gaussian}, s);
            const RealVector u = random_unit_real(n, s);
            const RealVector v = random_unit_real(n, s);
            const double lhs = u.dot(x * b.transpose() * x.transpose() * v);
            const RealMatrix vut = v * u.transpose();
            const RealMatrix k2 = kronecker(Matrix(b), Matrix(vut)).real_values();
            const RealVector vx = vec(Matrix(x)).real_values().col(0);
            const double rhs = vx.dot(k2 * vx);
            worst = std::max(worst, std::abs(lhs - rhs) / (b.norm() * x.squaredNorm()));
        } else {
            const ComplexMatrix x = draw_white_complex(n, m, {DistributionKind::gaussian}, s);
            const ComplexMatrix b = draw_white_complex(m, m, {DistributionKind::gaussian}, s);
            const ComplexVector u = random_unit(n, s);
            const ComplexVector v = random_unit(n, s);
            const Complex lhs = u.dot(x * b.adjoint() * x.adjoint() * v);   // dot conjugates u
            const ComplexMatrix vuh = v * u.adjoint();
            const ComplexMatrix k2 = kronecker(Matrix(ComplexMatrix(b.conjugate())), Matrix(vuh)).complex_values();
            const ComplexVector vx = vec(Matrix(x)).complex_values().col(0);
            const Complex rhs = vx.dot(k2 * vx);
            worst = std::max(worst, std::abs(lhs - rhs) / (b.norm() * x.squaredNorm()));
        }
    }
    return finish(field == Field::real ? "vec-quadratic" : "vec-quadratic-complex", worst, instances);
}

IdentityReport check_kronecker_norms(std::uint64_t seed, Index instances) {
    double worst = 0.0;
    for (Index k = 0; k < instances; ++k) {
        Stream s(derive_seed(seed, static_cast<std::uint64_t>(k)));
        const Index m = random_size(s, 1, 6);
        const Index n = random_size(s, 1, 5);
        const Matrix b = draw_white_complex(m, m, {DistributionKind::gaussian}, s);
        const ComplexVector u = random_unit(n, s);
        const ComplexVector v = random_unit(n, s);
        const Matrix kv = kronecker(b, Matrix(ComplexMatrix(v * u.transpose())));
        const double bs = spectral_norm(b);
        const double bf = frobenius_norm(b);
        worst = std::max(worst, std::abs(spectral_norm(kv) - bs) / bs);
        worst = std::max(worst, std::abs(frobenius_norm(kv) - bf) / bf);

        const Index p = random_size(s, 1, 4);
        const Matrix a = draw_white_complex(p, random_size(s, 1, 4), {DistributionKind::gaussian}, s);
        const double prod = spectral_norm(a) * bs;
        worst = std::max(worst, std::abs(spectral_norm(kronecker(a, b)) - prod) / prod);
    }
    return finish("kronecker-norms", worst, instances);
}

HermitianSplit hermitian_split(const Matrix& b) {
    if (!b.is_square() || !is_hermitian(b)) {
        throw InvalidArgument("hermitian_split: B is not Hermitian");
    }
    const HermitianEigen e = hermitian_eigen(b);
    RealVector pos = e.eigenvalues;
    RealVector neg = RealVector::Zero(pos.size());
    for (Index i = 0; i < pos.size(); ++i) {
        const double l = e.eigenvalues(i);
        if (l < -kSplitThreshold) {
            pos(i) = 0.0;
            neg(i) = -l;
        } else if (l <= kSplitThreshold) {
            pos(i) = 0.0;
        }
    }
    const auto build = [&](const RealVector& d) {
        return e.eigenvectors.visit([&](const auto& v) -> Matrix {
            using S = typename std::decay_t<decltype(v)>::Scalar;
            using Dense = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
            if (d.isZero(0.0)) {
                return Dense(Dense::Zero(v.rows(), v.cols()));
            }
            Dense out = v * d.cast<S>().asDiagonal() * v.adjoint();
            return Dense((out + out.adjoint()) * 0.5);
        });
    };
    return {build(pos), build(neg)};
}

IdentityReport check_hermitian_split(const Matrix& b) {
    const HermitianSplit sp = hermitian_split(b);
    const double bs = spectral_norm(b);
    const double bf = frobenius_norm(b);
    const double scale = std::max(bf, 1e-300);
    double dev = frobenius_norm(b - (sp.b1 - sp.b2)) / scale;
    for (const Matrix* part : {&sp.b1, &sp.b2}) {
        const double lmin = hermitian_eigen(*part).eigenvalues.minCoeff();
        dev = std::max(dev, std::max(0.0, -lmin) / scale);
        dev = std::max(dev, relative_excess(spectral_norm(*part), bs));
        dev = std::max(dev, relative_excess(frobenius_norm(*part), bf));
    }
    // splitting B1 again gives (B1, 0)
    const HermitianSplit again = hermitian_split(sp.b1);
    dev = std::max(dev, frobenius_norm(again.b2) / scale);
    dev = std::max(dev, frobenius_norm(again.b1 - sp.b1) / scale);
    return finish("hermitian-split", dev, 1);
}

RealMatrix complex_embedding(const ComplexMatrix& lambda) {
    const Index r = lambda.rows();
    const Index c = lambda.cols();
    RealMatrix a(2 * r, 2 * c);
    a.topLeftCorner(r, c) = lambda.real();
    a.topRightCorner(r, c) = -lambda.imag();
    a.bottomLeftCorner(r, c) = lambda.imag();
    a.bottomRightCorner(r, c) = lambda.real();
    return a;
}

IdentityReport check_complex_embedding(const ComplexMatrix& lambda, std::uint64_t seed) {
    if (lambda.rows() != lambda.cols() || lambda.rows() == 0) {
        throw InvalidArgument("check_complex_embedding: Lambda must be square and nonempty");
    }
    const RealMatrix a = complex_embedding(lambda);
    const RealMatrix aat = a * a.transpose();
    const ComplexMatrix b = lambda * lambda.adjoint();
    const double bs = spectral_norm(Matrix(b));
    const double bf = b.norm();
    double dev = 0.0;
    if (bs > 0.0) {
        dev = std::max(dev, std::abs(spectral_norm(Matrix(aat)) - bs) / bs);
        dev = std::max(dev, std::abs(aat.squaredNorm() - 2.0 * bf * bf) / (2.0 * bf * bf));
    } else {
        dev = std::max(dev, aat.norm());
    }
    Stream s(seed);
    const ComplexVector x = draw_white_complex(lambda.rows(), 1, {DistributionKind::gaussian}, s).col(0);
    RealVector z(2 * x.size());
    z << x.real(), x.imag();
    const double lhs = (a.transpose() * z).norm();
    const double rhs = (lambda.adjoint() * x).norm();
    dev = std::max(dev, std::abs(lhs - rhs) / std::max(lambda.norm() * x.norm(), 1e-300));
    return finish("complex-embedding", dev, 1);
}

// ---------------------------------------------------------------------------

HansonWrightReport check_hanson_wright_empirical(Distribution d, const Matrix& b, Index trials,
                                                 std::vector<double> t_grid, std::uint64_t seed,
                                                 const Execution& exec) {
    if (!b.is_square() || b.empty()) {
        throw InvalidArgument("hanson_wright: B must be square and nonempty");
    }
    if (trials < 2) {
        throw InvalidArgument("hanson_wright: need at least 2 trials");
    }
    const bool complex_samples = !b.is_real();
    if (complex_samples && !is_hermitian(b)) {
        throw InvalidArgument("hanson_wright: complex B must be Hermitian");
    }
    const Index m = b.rows();
    std::vector<double> y(static_cast<std::size_t>(trials));
    for_each_index(trials, exec, [&](Index t) {
        Stream s(derive_seed(seed, static_cast<std::uint64_t>(t)));
        if (complex_samples) {
            const ComplexVector x = draw_white_complex(m, 1, d, s).col(0);
            y[static_cast<std::size_t>(t)] = x.dot(b.complex_values() * x).real();
        } else {
            const RealVector x = draw_white(m, 1, d, s).col(0);
            y[static_cast<std::size_t>(t)] = x.dot(b.real_values() * x);
        }
    });

    HansonWrightReport r;
    r.distribution = std::string(distribution_name(d));
    r.trials = trials;
    const MeanStd ms = mean_std(y);
    r.mean = ms.mean;
    r.expected_mean = trace(b).real();
    r.mean_se = ms.std / std::sqrt(static_cast<double>(trials));
    r.mean_ok = std::abs(r.mean - r.expected_mean) <= 5.0 * r.mean_se + 1e-9 * std::max(1.0, std::abs(r.expected_mean));

    std::vector<double> dev(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        dev[i] = std::abs(y[i] - r.expected_mean);
    }
    std::sort(dev.begin(), dev.end());
    if (dev.back() <= 1e-9 * std::max(1.0, std::abs(r.expected_mean))) {
        r.degenerate = true;
        r.pass = r.mean_ok;
        r.note = "degenerate: x^H B x is constant, every tail is empty";
        return r;
    }
    if (t_grid.empty()) {
        constexpr int kPoints = 20;
        for (int i = 0; i < kPoints; ++i) {
            const double q = 0.5 + (0.999 - 0.5) * i / (kPoints - 1);
            t_grid.push_back(dev[static_cast<std::size_t>(q * static_cast<double>(dev.size() - 1))]);
        }
    }

    const double k = psi2_constant(d) / (complex_samples ? std::sqrt(2.0) : 1.0);
    const double bf = frobenius_norm(b);
    const double bs = spectral_norm(b);
    std::vector<double> hx;
    std::vector<double> hy;
    for (double t : t_grid) {
        const auto first = std::lower_bound(dev.begin(), dev.end(), t);
        const auto count = static_cast<double>(dev.end() - first);
        if (count == 0.0 || !(t > 0.0)) {
            ++r.dropped;
            continue;
        }
        const double tail = count / static_cast<double>(dev.size());
        r.t_used.push_back(t);
        r.tail.push_back(tail);
        hx.push_back(std::min(t * t / (std::pow(k, 4) * bf * bf), t / (k * k * bs)));
        hy.push_back(-std::log(tail));
    }
    if (r.dropped > 0) {
        r.note = std::to_string(r.dropped) + " grid point(s) with empty tail dropped";
    }
    if (hx.size() < 3) {
        r.note += r.note.empty() ? "too few usable grid points" : "; too few usable grid points";
        r.pass = false;
        return r;
    }
    const MeanStd mx = mean_std(hx);
    const MeanStd my = mean_std(hy);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < hx.size(); ++i) {
        sxy += (hx[i] - mx.mean) * (hy[i] - my.mean);
        sxx += (hx[i] - mx.mean) * (hx[i] - mx.mean);
        syy += (hy[i] - my.mean) * (hy[i] - my.mean);
    }
    r.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    r.intercept = my.mean - r.slope * mx.mean;
    r.r_squared = (sxx > 0.0 && syy > 0.0) ? sxy * sxy / (sxx * syy) : 0.0;
    r.pass = r.mean_ok && r.r_squared >= 0.9;
    return r;
}

// ---------------------------------------------------------------------------

std::vector<RealVector> greedy_epsilon_net(Index dim, double eps) {
    if (dim < 1) {
        throw InvalidArgument("greedy_epsilon_net: dim must be at least 1");
    }
    if (!(eps > 0.0 && eps < 0.5)) {
        throw InvalidArgument("greedy_epsilon_net: eps must lie in (0, 1/2)");
    }
    if (dim == 1) {
        return {RealVector::Constant(1, 1.0), RealVector::Constant(1, -1.0)};
    }
    const double grid_radius = eps / 5.0;
    const auto q = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(dim - 1)) / grid_radius));

    // cell centres of a q^(dim-1) grid on every face of [-1, 1]^dim, projected
    std::vector<RealVector> cand;
    std::vector<Index> digits(static_cast<std::size_t>(dim - 1), 0);
    for (Index axis = 0; axis < dim; ++axis) {
        for (double sign : {1.0, -1.0}) {
            std::fill(digits.begin(), digits.end(), 0);
            while (true) {
                RealVector p(dim);
                Index j = 0;
                for (Index i = 0; i < dim; ++i) {
                    if (i == axis) {
                        p(i) = sign;
                    } else {
                        p(i) = -1.0 + (2.0 * static_cast<double>(digits[static_cast<std::size_t>(j++)]) + 1.0) /
                                          static_cast<double>(q);
                    }
                }
                cand.push_back(p / p.norm());
                Index carry = 0;
                while (carry < dim - 1 && ++digits[static_cast<std::size_t>(carry)] == q) {
                    digits[static_cast<std::size_t>(carry++)] = 0;
                }
                if (carry == dim - 1) {
                    break;
                }
            }
        }
    }

    std::vector<double> dist(cand.size(), std::numeric_limits<double>::infinity());
    std::vector<RealVector> net;
    std::size_t next = 0;
    const double stop = eps - grid_radius;
    while (true) {
        const RealVector centre = cand[next];
        net.push_back(centre);
        double far = 0.0;
        for (std::size_t i = 0; i < cand.size(); ++i) {
            dist[i] = std::min(dist[i], (cand[i] - centre).norm());
            if (dist[i] > far) {
                far = dist[i];
                next = i;
            }
        }
        if (far <= stop) {
            break;
        }
    }
    return net;
}

namespace {

IdentityReport epsilon_net_report(const RealMatrix& a, double eps, const std::vector<RealVector>& in_net,
                                  const std::vector<RealVector>& out_net) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& x : in_net) {
        const RealVector ax = a * x;
        for (const auto& y : out_net) {
            best = std::max(best, ax.dot(y));
        }
    }
    const double norm = spectral_norm(Matrix(a));
    const double bound = best / (1.0 - 2.0 * eps);
    double dev = norm > 0.0 ? std::max(0.0, (norm - bound) / norm) : 0.0;
    IdentityReport r = finish("epsilon-net", dev, 1);
    const auto card_limit = [&](Index dim) { return std::pow(1.0 + 2.0 / eps, static_cast<double>(dim)); };
    const bool card_ok = static_cast<double>(in_net.size()) <= card_limit(a.cols()) &&
                         static_cast<double>(out_net.size()) <= card_limit(a.rows());
    if (!card_ok) {
        r.pass = false;
        r.note = "net cardinality exceeds (1 + 2/eps)^dim";
    }
    return r;
}

} // namespace

IdentityReport check_epsilon_net_bound(const RealMatrix& a, double eps) {
    if (a.rows() < 1 || a.cols() < 1 || a.rows() > 4 || a.cols() > 4) {
        throw InvalidArgument("check_epsilon_net_bound: dimensions must lie in [1, 4]");
    }
    const auto in_net = greedy_epsilon_net(a.cols(), eps);
    const auto out_net = a.rows() == a.cols() ? in_net : greedy_epsilon_net(a.rows(), eps);
    return epsilon_net_report(a, eps, in_net, out_net);
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& battery_names() {
    static const std::vector<std::string> names = {
        "vec-quadratic",     "vec-quadratic-complex", "kronecker-norms",        "hermitian-split",
        "complex-embedding", "epsilon-net",           "hanson-wright-gaussian", "hanson-wright-rademacher",
    };
    return names;
}

namespace {

IdentityReport merge(std::string name, const std::vector<IdentityReport>& parts) {
    IdentityReport r;
    r.name = std::move(name);
    r.pass = true;
    for (const auto& p : parts) {
        r.max_deviation = std::max(r.max_deviation, p.max_deviation);
        r.instances += p.instances;
        r.tolerance = p.tolerance;
        if (!p.pass) {
            r.pass = false;
            if (r.note.empty()) {
                r.note = p.note;
            }
        }
    }
    return r;
}

IdentityReport hanson_wright_row(DistributionKind kind, const BatteryOptions& o, const Execution& exec) {
    const Matrix b = materialize(CorrelationPattern::toeplitz(Complex(0.5, 0.0), 50));
    const auto hw = check_hanson_wright_empirical({kind}, b, o.hanson_wright_trials, {},
                                                  derive_seed(o.seed, static_cast<std::uint64_t>(kind) + 101), exec);
    IdentityReport r;
    r.name = "hanson-wright-" + hw.distribution;
    r.instances = hw.trials;
    r.max_deviation = 1.0 - hw.r_squared;
    r.tolerance = 0.1;
    r.pass = hw.pass;
    r.note = "R^2=" + std::to_string(hw.r_squared) + " slope=" + std::to_string(hw.slope) +
             " mean=" + std::to_string(hw.mean) + " tr(B)=" + std::to_string(hw.expected_mean) +
             (hw.note.empty() ? "" : " " + hw.note);
    return r;
}

} // namespace

std::vector<IdentityReport> run_battery(const BatteryOptions& o, const Execution& exec) {
    const auto& names = battery_names();
    for (const auto& want : o.only) {
        if (std::find(names.begin(), names.end(), want) == names.end()) {
            throw InvalidArgument("verify: unknown check '" + want + "'");
        }
    }
    const auto selected = [&](const std::string& name) {
        return o.only.empty() || std::find(o.only.begin(), o.only.end(), name) != o.only.end();
    };
    const Index count = o.instances;
    std::vector<IdentityReport> out;

    for (Field f : {Field::real, Field::complex}) {
        const std::string name = f == Field::real ? "vec-quadratic" : "vec-quadratic-complex";
        if (!selected(name)) {
            continue;
        }
        std::vector<IdentityReport> parts;
        for (Index k = 0; k < count; ++k) {
            Stream s(derive_seed(o.seed, 1000 + static_cast<std::uint64_t>(k) + (f == Field::real ? 0 : 500000)));
            const Index n = random_size(s, 1, 8);
            const Index m = random_size(s, 1, 8);
            parts.push_back(check_vec_quadratic_identity(n, m, s.engine()(), 1, f));
        }
        out.push_back(merge(name, parts));
    }
    if (selected("kronecker-norms")) {
        out.push_back(check_kronecker_norms(derive_seed(o.seed, 2), count));
    }
    if (selected("hermitian-split")) {
        std::vector<IdentityReport> parts;
        for (Index k = 0; k < count; ++k) {
            Stream s(derive_seed(o.seed, 3000 + static_cast<std::uint64_t>(k)));
            const Index m = random_size(s, 1, 8);
            Matrix b;
            if (k % 2 == 0) {
                const RealMatrix g = draw_white(m, m, {DistributionKind::gaussian}, s);
                b = RealMatrix(g + g.transpose());
            } else {
                const ComplexMatrix g = draw_white_complex(m, m, {DistributionKind::gaussian}, s);
                b = ComplexMatrix(g + g.adjoint());
            }
            parts.push_back(check_hermitian_split(b));
        }
        out.push_back(merge("hermitian-split", parts));
    }
    if (selected("complex-embedding")) {
        std::vector<IdentityReport> parts;
        for (Index k = 0; k < count; ++k) {
            Stream s(derive_seed(o.seed, 4000 + static_cast<std::uint64_t>(k)));
            const Index m = random_size(s, 1, 6);
            parts.push_back(check_complex_embedding(draw_white_complex(m, m, {DistributionKind::gaussian}, s),
                                                    s.engine()()));
        }
        out.push_back(merge("complex-embedding", parts));
    }
    if (selected("epsilon-net")) {
        constexpr double kEps = 0.25;
        std::map<Index, std::vector<RealVector>> nets;
        for (Index d = 1; d <= 3; ++d) {
            nets.emplace(d, greedy_epsilon_net(d, kEps));
        }
        std::vector<IdentityReport> parts;
        for (Index k = 0; k < count; ++k) {
            Stream s(derive_seed(o.seed, 5000 + static_cast<std::uint64_t>(k)));
            const Index rows = random_size(s, 1, 3);
            const Index cols = random_size(s, 1, 3);
            const RealMatrix a = draw_white(rows, cols, {DistributionKind::gaussian}, s);
            parts.push_back(epsilon_net_report(a, kEps, nets.at(cols), nets.at(rows)));
        }
        out.push_back(merge("epsilon-net", parts));
    }
    if (selected("hanson-wright-gaussian")) {
        out.push_back(hanson_wright_row(DistributionKind::gaussian, o, exec));
    }
    if (selected("hanson-wright-rademacher")) {
        out.push_back(hanson_wright_row(DistributionKind::rademacher, o, exec));
    }
    return out;
}

} // namespace cwishart
