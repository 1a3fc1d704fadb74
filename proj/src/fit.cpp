#include "cwishart/fit.hpp"

#include <algorithm>
#include <cmath>

#include "cwishart/rng.hpp"

namespace cwishart {

double FitResult::ratio_geometric_mean() const {
    if (cells.empty()) {
        return 0.0;
    }
    double log_sum = 0.0;
    for (const auto& c : cells) {
        log_sum += std::log(c.ratio);
    }
    return std::exp(log_sum / static_cast<double>(cells.size()));
}

double FitResult::ratio_spread() const {
    const double g = ratio_geometric_mean();
    double worst = 1.0;
    for (const auto& c : cells) {
        worst = std::max({worst, c.ratio / g, g / c.ratio});
    }
    return worst;
}

BoundQuery cell_query(const FitCell& cell, std::uint64_t cell_seed, double c, double delta, BoundForm form) {
    const Matrix sigma = cell.sigma_matrix();
    if (sigma.rows() != cell.n) {
        throw InvalidArgument("fit: Sigma is not n x n");
    }
    const CorrelationPattern p = instantiate(cell.pattern, cell.m, phase_seed(trial_seed(cell_seed, cell.n, 0)));
    return make_query(p, cell.n, psi2_constant(cell.distribution), c, delta, spectral_norm(sigma), form,
                      Field::real);
}

namespace {

/// ||Sigma_hat - s Sigma|| for every trial of a cell, in trial order.
std::vector<double> cell_errors(const FitCell& cell, Complex s, std::uint64_t cell_seed, Index trials,
                                const Execution& exec) {
    const SampleSource source(cell.sigma_matrix(), cell.distribution);
    const Matrix centre = s.imag() == 0.0 ? s.real() * source.sigma() : s * source.sigma();
    std::vector<double> errors(static_cast<std::size_t>(trials));
    for_each_index(trials, exec, [&](Index t) {
        const std::uint64_t ts = trial_seed(cell_seed, cell.n, t);
        PatternLadder ladder(cell.pattern, phase_seed(ts), cell.m);
        const Matrix est = ladder.estimate(source.draw_real(cell.m, sample_seed(ts, cell.m)));
        errors[static_cast<std::size_t>(t)] = spectral_norm(est - centre);
    });
    return errors;
}

} // namespace

FitResult fit_constant(const std::vector<FitCell>& grid, Index trials, std::uint64_t seed, const Execution& exec) {
    if (grid.empty()) {
        throw InvalidArgument("fit_constant: empty grid");
    }
    if (trials < 30) {
        throw InvalidArgument("fit_constant: at least 30 trials per cell are required");
    }
    FitResult out;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const FitCell& cell = grid[i];
        const std::uint64_t cell_seed = derive_seed(seed, i);
        const BoundQuery q = cell_query(cell, cell_seed, 1.0, 0.0, BoundForm::expectation);
        const double rate = concentration_tail_bound(q);
        if (!(rate > 0.0)) {
            throw InvalidArgument("fit_constant: a grid cell has zero rate");
        }
        const MeanStd e = mean_std(cell_errors(cell, q.b_trace / static_cast<double>(cell.m), cell_seed, trials, exec));
        num += e.mean * rate;
        den += rate * rate;
        out.cells.push_back({cell, e.mean, rate, e.mean / rate});
    }
    out.c = num / den;
    return out;
}

std::vector<TailCheck> tail_exceedance(const FitCell& cell, double c, const std::vector<double>& deltas, Index trials,
                                       std::uint64_t seed, const Execution& exec) {
    if (trials < 1) {
        throw InvalidArgument("tail_exceedance: trials must be at least 1");
    }
    const std::uint64_t cell_seed = derive_seed(seed, 0);
    const BoundQuery base = cell_query(cell, cell_seed, c, 0.0, BoundForm::tail);
    const std::vector<double> errors = cell_errors(cell, Complex(1.0, 0.0), cell_seed, trials, exec);
    std::vector<TailCheck> out;
    for (double delta : deltas) {
        BoundQuery q = base;
        q.delta = delta;
        TailCheck check;
        check.delta = delta;
        check.bound = estimation_error_bound(q);
        Index over = 0;
        for (double e : errors) {
            over += e > check.bound ? 1 : 0;
        }
        check.exceedance = static_cast<double>(over) / static_cast<double>(trials);
        check.allowed = 2.0 * std::exp(-delta) + 0.02;
        check.pass = check.exceedance <= check.allowed;
        out.push_back(check);
    }
    return out;
}

} // namespace cwishart
