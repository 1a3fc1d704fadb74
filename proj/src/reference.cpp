#include "cwishart/reference.hpp"

#include <string>

namespace cwishart::reference {

Matrix correlated_sample_covariance(const Matrix& x, const Matrix& b) {
    if (!b.is_square() || b.rows() != x.cols()) {
        throw InvalidArgument("reference::correlated_sample_covariance: B must be " + std::to_string(x.cols()) +
                              "x" + std::to_string(x.cols()));
    }
    const ComplexMatrix xc = x.to_complex();
    const ComplexMatrix bc = b.to_complex();
    const Index n = x.rows();
    const Index m = x.cols();
    ComplexMatrix out(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            Complex acc(0.0, 0.0);
            for (Index a = 0; a < m; ++a) {
                for (Index c = 0; c < m; ++c) {
                    acc += xc(i, a) * bc(a, c) * std::conj(xc(j, c));
                }
            }
            out(i, j) = acc / static_cast<double>(m);
        }
    }
    if (x.is_real() && b.is_real()) {
        return RealMatrix(out.real());
    }
    return out;
}

} // namespace cwishart::reference
