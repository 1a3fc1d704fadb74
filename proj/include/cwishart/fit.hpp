#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cwishart/bounds.hpp"
#include "cwishart/montecarlo.hpp"

namespace cwishart {

/// One grid point of the constant fit. Sigma defaults to I_n.
struct FitCell {
    Index n = 1;
    Index m = 1;
    PatternSpec pattern;
    Distribution distribution;
    std::optional<Matrix> sigma;

    Matrix sigma_matrix() const { return sigma ? *sigma : Matrix::identity(n); }
};

struct FitCellResult {
    FitCell cell;
    double mean_error = 0.0;   ///< mean ||Sigma_hat - E Sigma_hat||
    double rate = 0.0;         ///< K^2 (sqrt(n) ||B||_F + n ||B||) / m * ||Sigma||
    double ratio = 0.0;        ///< mean_error / rate
};

struct FitResult {
    double c = 0.0;
    std::vector<FitCellResult> cells;

    double ratio_geometric_mean() const;
    /// Largest factor by which any ratio departs from the geometric mean.
    double ratio_spread() const;
};

/// Norms of B for a cell; phase patterns use Theta of the cell's first trial.
BoundQuery cell_query(const FitCell& cell, std::uint64_t cell_seed, double c, double delta, BoundForm form);

/// Least-squares C minimizing sum (mean_error - C rate)^2, i.e.
/// C = sum(e r) / sum(r^2). Requires trials >= 30 and a nonzero rate.
FitResult fit_constant(const std::vector<FitCell>& grid, Index trials, std::uint64_t seed,
                       const Execution& exec = {});

struct TailCheck {
    double delta = 0.0;
    double bound = 0.0;        ///< tail-form estimation_error_bound
    double exceedance = 0.0;   ///< fraction of trials with error above bound
    double allowed = 0.0;      ///< 2 exp(-delta) + 0.02
    bool pass = false;
};

/// Fresh trials at `cell`, each scored against the tail bound with constant c
/// for every delta.
std::vector<TailCheck> tail_exceedance(const FitCell& cell, double c, const std::vector<double>& deltas, Index trials,
                                       std::uint64_t seed, const Execution& exec = {});

} // namespace cwishart
