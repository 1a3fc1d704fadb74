#pragma once

// Straightforward serial implementations kept as test oracles and as the
// baseline in the benchmark. Not used on any production path.

#include "cwishart/matrix.hpp"

namespace cwishart::reference {

/// Sigma_hat(i,j) = (1/m) sum_{a,b} X(i,a) B(a,b) conj(X(j,b)), summed entry by entry.
Matrix correlated_sample_covariance(const Matrix& x, const Matrix& b);

} // namespace cwishart::reference
