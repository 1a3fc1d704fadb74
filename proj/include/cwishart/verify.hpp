#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cwishart/matrix.hpp"
#include "cwishart/parallel.hpp"
#include "cwishart/sampling.hpp"

namespace cwishart {

struct IdentityReport {
    std::string name;
    double max_deviation = 0.0;   ///< relative, over all instances
    Index instances = 0;
    double tolerance = 1e-10;
    bool pass = false;
    std::string note;
};

/// u^T X B^T X^T v against vec(X)^T (B kron v u^T) vec(X) for random X, B and
/// unit u, v; complex field uses u^H X B^H X^H v and vec(X)^H (conj(B) kron v u^H) vec(X).
/// Deviation is relative to ||B||_F ||X||_F^2. n, m <= 16.
IdentityReport check_vec_quadratic_identity(Index n, Index m, std::uint64_t seed, Index instances,
                                            Field field = Field::real);

/// ||B kron v u^T|| = ||B||, ||B kron v u^T||_F = ||B||_F for unit u, v, and
/// ||A kron B|| = ||A|| ||B||; random complex sizes up to 6.
IdentityReport check_kronecker_norms(std::uint64_t seed, Index instances);

struct HermitianSplit {
    Matrix b1;   ///< from eigenvalues >= -1e-12 (those within 1e-12 of 0 clamped to 0)
    Matrix b2;   ///< from the negated eigenvalues below -1e-12
};

/// B = B1 - B2 with B1, B2 PSD. Throws InvalidArgument if B is not Hermitian.
HermitianSplit hermitian_split(const Matrix& b);

/// Reconstruction, PSD-ness of both parts and ||Bi|| <= ||B||, ||Bi||_F <= ||B||_F.
IdentityReport check_hermitian_split(const Matrix& b);

/// [[Re L, -Im L], [Im L, Re L]].
RealMatrix complex_embedding(const ComplexMatrix& lambda);

/// With A the embedding and B = L L^H: ||A A^T|| = ||B||, ||A A^T||_F^2 = 2 ||B||_F^2
/// and ||A^T z|| = ||L^H x|| for random x (z its real stacking).
IdentityReport check_complex_embedding(const ComplexMatrix& lambda, std::uint64_t seed = 0);

struct HansonWrightReport {
    std::string distribution;
    Index trials = 0;
    double mean = 0.0;            ///< empirical E x^H B x
    double expected_mean = 0.0;   ///< Re tr(B)
    double mean_se = 0.0;
    bool mean_ok = false;         ///< within 5 standard errors
    std::vector<double> t_used;
    std::vector<double> tail;     ///< P(|Y - EY| >= t) at t_used
    Index dropped = 0;            ///< grid points with an empty tail
    double slope = 0.0;           ///< empirical c
    double intercept = 0.0;
    double r_squared = 0.0;
    bool degenerate = false;      ///< Y is constant
    bool pass = false;            ///< mean_ok and (degenerate or r_squared >= 0.9)
    std::string note;
};

/// Empirical tail of Y = x^H B x (x^T B x for real B) regressed as
///   -log P(|Y - EY| >= t) ~ a + c * min(t^2 / (K^4 ||B||_F^2), t / (K^2 ||B||)).
/// Complex B (Hermitian) uses complex samples whose parts have psi2 norm K/sqrt2.
/// An empty t_grid spans 20 quantiles of |Y - EY| from the 50th to the 99.9th percentile.
HansonWrightReport check_hanson_wright_empirical(Distribution d, const Matrix& b, Index trials,
                                                 std::vector<double> t_grid, std::uint64_t seed,
                                                 const Execution& exec = {});

/// Greedy eps-net of the unit sphere in R^dim: farthest-point insertion over a
/// radially projected cube-surface grid of resolution eps/5, stopped once the
/// grid is covered within 4 eps/5, so every sphere point is within eps.
std::vector<RealVector> greedy_epsilon_net(Index dim, double eps);

/// ||A|| <= max_{x in N_in, y in N_out} <Ax, y> / (1 - 2 eps) and |N| <= (1 + 2/eps)^dim.
/// Both dimensions of A must lie in [1, 4]; the candidate grid grows as (sqrt(dim)/eps)^(dim-1).
IdentityReport check_epsilon_net_bound(const RealMatrix& a, double eps = 0.25);

struct BatteryOptions {
    std::uint64_t seed = 0;
    Index instances = 200;
    Index hanson_wright_trials = 100000;
    /// Check names to run; empty runs everything.
    std::vector<std::string> only;
};

/// vec-quadratic, vec-quadratic-complex, kronecker-norms, hermitian-split,
/// complex-embedding, epsilon-net, hanson-wright-gaussian, hanson-wright-rademacher.
const std::vector<std::string>& battery_names();

/// Unknown names in `only` throw InvalidArgument.
std::vector<IdentityReport> run_battery(const BatteryOptions& options, const Execution& exec = {});

} // namespace cwishart
