#include "cwishart/montecarlo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include <omp.h>

#include "cwishart/kernels.hpp"
#include "cwishart/rng.hpp"

namespace cwishart {

int default_workers() { return std::max(1, omp_get_max_threads()); }

namespace detail {
void parallel_for(Index count, int workers, void (*body)(Index, void*), void* ctx) {
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (Index i = 0; i < count; ++i) {
        body(i, ctx);
    }
}
} // namespace detail

std::string_view experiment_name(ExperimentKind kind) noexcept {
    switch (kind) {
    case ExperimentKind::sample_size:
        return "sample-size";
    case ExperimentKind::convergence:
        return "convergence";
    case ExperimentKind::complex_sample_size:
        return "complex";
    }
    return "unknown";
}

namespace {

Index parse_index(std::string_view text, std::string_view whole) {
    Index value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end) {
        throw InvalidArgument("range: cannot parse '" + std::string(whole) + "'");
    }
    return value;
}

} // namespace

std::vector<Index> parse_range(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = text.find(':', start);
        parts.push_back(text.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
        if (colon == std::string_view::npos) {
            break;
        }
        start = colon + 1;
    }
    if (parts.size() > 3) {
        throw InvalidArgument("range: expected start[:stop[:step]], got '" + std::string(text) + "'");
    }
    const Index first = parse_index(parts[0], text);
    const Index last = parts.size() > 1 ? parse_index(parts[1], text) : first;
    const Index step = parts.size() > 2 ? parse_index(parts[2], text) : 1;
    if (step < 1) {
        throw InvalidArgument("range: step must be positive in '" + std::string(text) + "'");
    }
    if (last < first) {
        throw InvalidArgument("range: stop is below start in '" + std::string(text) + "'");
    }
    std::vector<Index> out;
    for (Index v = first; v <= last; v += step) {
        out.push_back(v);
    }
    return out;
}

namespace {
constexpr std::uint64_t kPhaseKey = 0x7068617365ULL;   // "phase"
}

std::uint64_t point_seed(std::uint64_t base, Index n) { return derive_seed(base, static_cast<std::uint64_t>(n)); }

std::uint64_t trial_seed(std::uint64_t base, Index n, Index trial) {
    return point_seed(base, n) ^ static_cast<std::uint64_t>(trial);
}

std::uint64_t sample_seed(std::uint64_t trial_seed, Index m) {
    return derive_seed(trial_seed, static_cast<std::uint64_t>(m));
}

std::uint64_t phase_seed(std::uint64_t trial_seed) { return derive_seed(trial_seed, kPhaseKey); }

Matrix ExperimentSpec::sigma_for(Index n) const { return sigma ? *sigma : Matrix::identity(n); }

void ExperimentSpec::validate() const {
    if (!(eta > 0.0 && eta < 1.0)) {
        throw InvalidArgument("experiment: eta must lie in (0, 1)");
    }
    if (trials < 1) {
        throw InvalidArgument("experiment: trials must be at least 1");
    }
    if (patterns.empty()) {
        throw InvalidArgument("experiment: no patterns given");
    }
    const auto increasing = [](const std::vector<Index>& v) {
        return !v.empty() && v.front() >= 1 && std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
    };
    if (!increasing(n_values)) {
        throw InvalidArgument("experiment: n range must be nonempty, positive and increasing");
    }
    if (kind == ExperimentKind::convergence) {
        if (!increasing(m_values)) {
            throw InvalidArgument("experiment: m range must be nonempty, positive and increasing");
        }
    } else if (m_cap != 0 && m_cap < n_values.back()) {
        throw InvalidArgument("experiment: m_cap must be at least max n");
    }
    if (sigma) {
        if (n_values.size() != 1 || sigma->rows() != n_values.front()) {
            throw InvalidArgument("experiment: a supplied Sigma fixes n to " + std::to_string(sigma->rows()));
        }
    }
}

// ---------------------------------------------------------------------------

namespace {

// Entries of P(c, Theta) with |a-b| > band have modulus c^|a-b| <= 2^-80 and
// are skipped in the product.
Index phase_band(double c) {
    return static_cast<Index>(std::ceil(-80.0 * std::log(2.0) / std::log(c)));
}

template <class XM>
ComplexMatrix banded_right(const XM& x, const ComplexMatrix& p, Index m, Index band) {
    const Index n = x.rows();
    ComplexMatrix y(n, m);
    for (Index b = 0; b < m; ++b) {
        const Index lo = std::max<Index>(0, b - band);
        const Index hi = std::min<Index>(m - 1, b + band);
        const Index len = hi - lo + 1;
        if constexpr (std::is_same_v<typename XM::Scalar, Complex>) {
            y.col(b).noalias() = x.middleCols(lo, len) * p.col(b).segment(lo, len);
        } else {
            y.col(b).noalias() = x.middleCols(lo, len).template cast<Complex>() * p.col(b).segment(lo, len);
        }
    }
    return y;
}

} // namespace

PatternLadder::PatternLadder(const PatternSpec& spec, std::uint64_t phase_seed, Index max_m)
    : spec_(&spec), phase_seed_(phase_seed), limit_(max_m) {
    if (const auto* custom = std::get_if<CustomSpec>(&spec.family)) {
        limit_ = std::min(limit_, custom->b.rows());
    }
}

void PatternLadder::ensure_capacity(Index m) {
    if (phase_cache_.rows() >= m) {
        return;
    }
    Index cap = std::max<Index>(16, phase_cache_.rows());
    while (cap < m) {
        cap *= 2;
    }
    cap = std::min(cap, std::max(m, limit_));
    phase_cache_ = materialize(instantiate(*spec_, cap, phase_seed_)).to_complex();
}

template <class XM>
Matrix PatternLadder::estimate_impl(const XM& x) {
    const Index m = x.cols();
    if (m > limit_) {
        throw InvalidArgument("pattern ladder: m = " + std::to_string(m) + " exceeds limit " +
                              std::to_string(limit_));
    }
    return std::visit(
        [&](const auto& f) -> Matrix {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, IdentitySpec>) {
                return Matrix(kernels::finish_sandwich(x, x));
            } else if constexpr (std::is_same_v<F, ToeplitzSpec>) {
                if (f.omega.imag() == 0.0) {
                    return Matrix(kernels::finish_sandwich(kernels::toeplitz_right(x, f.omega.real()), x));
                }
                return Matrix(kernels::finish_sandwich(kernels::toeplitz_right(x, f.omega), x));
            } else if constexpr (std::is_same_v<F, PhaseSpec>) {
                ensure_capacity(m);
                return Matrix(kernels::finish_sandwich(banded_right(x, phase_cache_, m, phase_band(f.c)), x));
            } else {
                return f.b.visit([&](const auto& b) {
                    return Matrix(kernels::dense_sandwich(x, b.topLeftCorner(m, m)));
                });
            }
        },
        spec_->family);
}

Matrix PatternLadder::estimate(const RealMatrix& x) { return estimate_impl(x); }
Matrix PatternLadder::estimate(const ComplexMatrix& x) { return estimate_impl(x); }

namespace {

double frobenius_distance(const Matrix& a, const RealMatrix& sigma) {
    return a.visit([&](const auto& v) {
        using S = typename std::decay_t<decltype(v)>::Scalar;
        return (v - sigma.template cast<S>()).norm();
    });
}

} // namespace

MinimalSizeResult minimal_sample_size_trial(const SampleSource& source, const PatternSpec& pattern, double eta,
                                            std::uint64_t trial_seed, Index m_cap, Field field) {
    if (!(eta > 0.0)) {
        throw InvalidArgument("minimal_sample_size_trial: eta must be positive");
    }
    if (m_cap < 1) {
        throw InvalidArgument("minimal_sample_size_trial: m_cap must be at least 1");
    }
    const RealMatrix& sigma = source.sigma().real_values();
    const double scale = sigma.norm();
    PatternLadder ladder(pattern, phase_seed(trial_seed), m_cap);
    const Index cap = std::min(m_cap, ladder.limit());
    for (Index m = 1; m <= cap; ++m) {
        const std::uint64_t s = sample_seed(trial_seed, m);
        const Matrix est = field == Field::real ? ladder.estimate(source.draw_real(m, s))
                                                : ladder.estimate(source.draw_complex(m, s));
        if (frobenius_distance(est, sigma) / scale <= eta) {
            return {m, false};
        }
    }
    return {cap, true};
}

MinimalSizeResult minimal_sample_size_trial(Index n, const PatternSpec& pattern, Distribution d, const Matrix& sigma,
                                            double eta, std::uint64_t trial_seed, Index m_cap, Field field) {
    if (sigma.rows() != n) {
        throw InvalidArgument("minimal_sample_size_trial: Sigma is not n x n");
    }
    const SampleSource source(sigma, d);
    return minimal_sample_size_trial(source, pattern, eta, trial_seed, m_cap, field);
}

EstimateResult error_trial(const SampleSource& source, const PatternSpec& pattern, Index m,
                           std::uint64_t trial_seed, Field field) {
    PatternLadder ladder(pattern, phase_seed(trial_seed), m);
    const std::uint64_t s = sample_seed(trial_seed, m);
    Matrix est = field == Field::real ? ladder.estimate(source.draw_real(m, s))
                                      : ladder.estimate(source.draw_complex(m, s));
    return score(std::move(est), source.sigma());
}

MeanStd mean_std(const std::vector<double>& values) {
    MeanStd r;
    if (values.empty()) {
        return r;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    r.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - r.mean) * (v - r.mean);
        }
        r.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return r;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<SampleSource> make_sources(const ExperimentSpec& spec) {
    std::vector<SampleSource> sources;
    sources.reserve(spec.n_values.size());
    for (Index n : spec.n_values) {
        sources.emplace_back(spec.sigma_for(n), spec.distribution);
    }
    return sources;
}

SampleSizeTable sample_size_impl(const ExperimentSpec& spec, const Execution& exec) {
    spec.validate();
    const auto sources = make_sources(spec);
    const Index n_count = static_cast<Index>(spec.n_values.size());
    const Index p_count = static_cast<Index>(spec.patterns.size());
    const Index total = n_count * p_count * spec.trials;
    const std::string dist(distribution_name(spec.distribution));

    std::vector<TrialResult> results(static_cast<std::size_t>(total));
    for_each_index(total, exec, [&](Index item) {
        const Index trial = item % spec.trials;
        const Index p = (item / spec.trials) % p_count;
        const Index ni = item / (spec.trials * p_count);
        const Index n = spec.n_values[static_cast<std::size_t>(ni)];
        const std::uint64_t seed = trial_seed(spec.seed, n, trial);
        const auto r = minimal_sample_size_trial(sources[static_cast<std::size_t>(ni)],
                                                 spec.patterns[static_cast<std::size_t>(p)], spec.eta, seed,
                                                 spec.cap_for(n), spec.field());
        TrialResult& out = results[static_cast<std::size_t>(item)];
        out.n = n;
        out.m = r.m;
        out.pattern = spec.patterns[static_cast<std::size_t>(p)].text;
        out.distribution = dist;
        out.trial = trial;
        out.minimal_m = r.m;
        out.censored = r.censored;
        out.seed = seed;
    });

    SampleSizeTable table;
    for (Index ni = 0; ni < n_count; ++ni) {
        for (Index p = 0; p < p_count; ++p) {
            SampleSizeRow row;
            row.pattern = spec.patterns[static_cast<std::size_t>(p)].text;
            row.n = spec.n_values[static_cast<std::size_t>(ni)];
            row.trials = spec.trials;
            std::vector<double> ms;
            ms.reserve(static_cast<std::size_t>(spec.trials));
            for (Index t = 0; t < spec.trials; ++t) {
                const auto& r = results[static_cast<std::size_t>((ni * p_count + p) * spec.trials + t)];
                ms.push_back(static_cast<double>(r.minimal_m));
                row.censored += r.censored ? 1 : 0;
            }
            const MeanStd ms_stats = mean_std(ms);
            row.mean_min_m = ms_stats.mean;
            row.std_min_m = ms_stats.std;
            table.censored_total += row.censored;
            table.rows.push_back(std::move(row));
        }
    }
    table.trials = std::move(results);
    return table;
}

} // namespace

SampleSizeTable run_sample_size_experiment(const ExperimentSpec& spec, const Execution& exec) {
    if (spec.kind != ExperimentKind::sample_size) {
        throw InvalidArgument("run_sample_size_experiment: spec kind is " + std::string(experiment_name(spec.kind)));
    }
    return sample_size_impl(spec, exec);
}

SampleSizeTable run_complex_experiment(const ExperimentSpec& spec, const Execution& exec) {
    if (spec.kind != ExperimentKind::complex_sample_size) {
        throw InvalidArgument("run_complex_experiment: spec kind is " + std::string(experiment_name(spec.kind)));
    }
    return sample_size_impl(spec, exec);
}

ConvergenceTable run_convergence_experiment(const ExperimentSpec& spec, const Execution& exec) {
    if (spec.kind != ExperimentKind::convergence) {
        throw InvalidArgument("run_convergence_experiment: spec kind is " + std::string(experiment_name(spec.kind)));
    }
    spec.validate();
    const auto sources = make_sources(spec);
    const Index n_count = static_cast<Index>(spec.n_values.size());
    const Index m_count = static_cast<Index>(spec.m_values.size());
    const Index p_count = static_cast<Index>(spec.patterns.size());
    const Index total = n_count * m_count * p_count * spec.trials;
    const std::string dist(distribution_name(spec.distribution));

    std::vector<TrialResult> results(static_cast<std::size_t>(total));
    for_each_index(total, exec, [&](Index item) {
        const Index trial = item % spec.trials;
        const Index p = (item / spec.trials) % p_count;
        const Index mi = (item / (spec.trials * p_count)) % m_count;
        const Index ni = item / (spec.trials * p_count * m_count);
        const Index n = spec.n_values[static_cast<std::size_t>(ni)];
        const Index m = spec.m_values[static_cast<std::size_t>(mi)];
        const std::uint64_t seed = trial_seed(spec.seed, n, trial);
        const auto r = error_trial(sources[static_cast<std::size_t>(ni)], spec.patterns[static_cast<std::size_t>(p)],
                                   m, seed, spec.field());
        TrialResult& out = results[static_cast<std::size_t>(item)];
        out.n = n;
        out.m = m;
        out.pattern = spec.patterns[static_cast<std::size_t>(p)].text;
        out.distribution = dist;
        out.trial = trial;
        out.spectral_error = r.spectral_error;
        out.normalized_frobenius_error = r.normalized_frobenius_error;
        out.seed = seed;
    });

    ConvergenceTable table;
    for (Index ni = 0; ni < n_count; ++ni) {
        for (Index p = 0; p < p_count; ++p) {
            for (Index mi = 0; mi < m_count; ++mi) {
                ConvergenceRow row;
                row.pattern = spec.patterns[static_cast<std::size_t>(p)].text;
                row.n = spec.n_values[static_cast<std::size_t>(ni)];
                row.m = spec.m_values[static_cast<std::size_t>(mi)];
                row.trials = spec.trials;
                std::vector<double> errs;
                errs.reserve(static_cast<std::size_t>(spec.trials));
                const Index base = ((ni * m_count + mi) * p_count + p) * spec.trials;
                for (Index t = 0; t < spec.trials; ++t) {
                    errs.push_back(results[static_cast<std::size_t>(base + t)].spectral_error);
                }
                const MeanStd s = mean_std(errs);
                row.mean_spec_err = s.mean;
                row.std_spec_err = s.std;
                table.rows.push_back(std::move(row));
            }
        }
    }
    table.trials = std::move(results);
    return table;
}

} // namespace cwishart
