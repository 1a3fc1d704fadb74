#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cwishart/estimator.hpp"
#include "cwishart/parallel.hpp"
#include "cwishart/patterns.hpp"
#include "cwishart/sampling.hpp"

namespace cwishart {

enum class ExperimentKind {
    sample_size,           ///< minimal m vs n, real samples
    convergence,           ///< mean spectral error vs m, real samples
    complex_sample_size,   ///< minimal m vs n, complex samples
};

std::string_view experiment_name(ExperimentKind kind) noexcept;

/// `start:stop:step` (stop included when aligned), `start:stop` (step 1) or a single value.
std::vector<Index> parse_range(std::string_view text);

// Seed derivation. Every pattern at a given (n, trial) sees the same draws, so
// pattern-to-pattern comparisons are paired.
std::uint64_t point_seed(std::uint64_t base, Index n);
std::uint64_t trial_seed(std::uint64_t base, Index n, Index trial);   ///< point_seed ^ trial
std::uint64_t sample_seed(std::uint64_t trial_seed, Index m);
std::uint64_t phase_seed(std::uint64_t trial_seed);

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::sample_size;
    Distribution distribution;
    std::vector<PatternSpec> patterns;
    /// Covariance; I_n when absent. A supplied matrix fixes n to its size.
    std::optional<Matrix> sigma;
    double eta = 0.2;
    Index trials = 500;
    std::vector<Index> n_values;
    std::vector<Index> m_values;   ///< convergence only
    std::uint64_t seed = 0;
    /// Ceiling of the minimal-m scan; 0 means 200 n.
    Index m_cap = 0;

    Field field() const noexcept {
        return kind == ExperimentKind::complex_sample_size ? Field::complex : Field::real;
    }
    Index cap_for(Index n) const noexcept { return m_cap > 0 ? m_cap : 200 * n; }
    Matrix sigma_for(Index n) const;
    void validate() const;
};

struct TrialResult {
    Index n = 0;
    Index m = 0;
    std::string pattern;
    std::string distribution;
    Index trial = 0;
    double spectral_error = 0.0;
    double normalized_frobenius_error = 0.0;
    Index minimal_m = 0;
    bool censored = false;
    std::uint64_t seed = 0;
};

struct MinimalSizeResult {
    Index m = 0;
    bool censored = false;   ///< the scan reached m_cap without meeting eta
};

/**
 * Produces X B X^H / m for successive m without rebuilding B each time.
 *
 * Phase patterns keep P(c, Theta) materialized at a capacity that doubles on
 * demand; because Theta is drawn in shell order, its leading m x m block is
 * exactly instantiate(spec, m, phase_seed). Custom patterns use leading blocks
 * of the stored matrix, so `limit()` is its size.
 */
class PatternLadder {
  public:
    PatternLadder(const PatternSpec& spec, std::uint64_t phase_seed, Index max_m);

    Index limit() const noexcept { return limit_; }
    Matrix estimate(const RealMatrix& x);
    Matrix estimate(const ComplexMatrix& x);

  private:
    template <class XM>
    Matrix estimate_impl(const XM& x);
    void ensure_capacity(Index m);

    const PatternSpec* spec_;
    std::uint64_t phase_seed_;
    Index limit_;
    ComplexMatrix phase_cache_;
};

/// Smallest m in 1, 2, ... with ||Sigma_hat - Sigma||_F / ||Sigma||_F <= eta,
/// with a fresh X per m seeded by sample_seed(trial_seed, m).
MinimalSizeResult minimal_sample_size_trial(const SampleSource& source, const PatternSpec& pattern, double eta,
                                            std::uint64_t trial_seed, Index m_cap, Field field = Field::real);

MinimalSizeResult minimal_sample_size_trial(Index n, const PatternSpec& pattern, Distribution d, const Matrix& sigma,
                                            double eta, std::uint64_t trial_seed, Index m_cap,
                                            Field field = Field::real);

/// Spectral and normalized Frobenius error of one estimate at sample size m.
EstimateResult error_trial(const SampleSource& source, const PatternSpec& pattern, Index m,
                           std::uint64_t trial_seed, Field field = Field::real);

struct SampleSizeRow {
    std::string pattern;
    Index n = 0;
    Index trials = 0;
    double mean_min_m = 0.0;   ///< censored trials enter at m_cap
    double std_min_m = 0.0;
    Index censored = 0;
};

struct ConvergenceRow {
    std::string pattern;
    Index n = 0;
    Index m = 0;
    Index trials = 0;
    double mean_spec_err = 0.0;
    double std_spec_err = 0.0;
};

struct SampleSizeTable {
    std::vector<SampleSizeRow> rows;
    std::vector<TrialResult> trials;
    Index censored_total = 0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    std::vector<TrialResult> trials;
};

SampleSizeTable run_sample_size_experiment(const ExperimentSpec& spec, const Execution& exec = {});
ConvergenceTable run_convergence_experiment(const ExperimentSpec& spec, const Execution& exec = {});
/// Sample-size protocol with complex samples and the conjugate-transpose estimator.
SampleSizeTable run_complex_experiment(const ExperimentSpec& spec, const Execution& exec = {});

/// Mean and sample standard deviation (0 for a single value).
struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};
MeanStd mean_std(const std::vector<double>& values);

} // namespace cwishart
