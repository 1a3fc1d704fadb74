#pragma once

// Dense building blocks shared by the estimator and the Monte-Carlo loops.
// They work on Eigen expressions directly so callers can pass blocks of
// cached matrices without copying.

#include <complex>
#include <type_traits>

#include <Eigen/Dense>

namespace cwishart::kernels {

template <class S>
using Dense = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <class A, class B>
using Promoted = decltype(std::declval<A>() * std::declval<B>());

inline double conj_scalar(double v) noexcept { return v; }
inline std::complex<double> conj_scalar(std::complex<double> v) noexcept { return std::conj(v); }

/// X * T(omega) by the two-sided geometric recursion
///   U_b = omega U_{b-1} + x_b,   L_b = conj(omega) (x_{b+1} + L_{b+1}),
/// so that column b of the product is U_b + L_b. O(nm) work.
template <class Derived, class W>
Dense<Promoted<typename Derived::Scalar, W>> toeplitz_right(const Eigen::MatrixBase<Derived>& x, W omega) {
    using S = Promoted<typename Derived::Scalar, W>;
    const Eigen::Index n = x.rows();
    const Eigen::Index m = x.cols();
    Dense<S> y(n, m);
    Eigen::Matrix<S, Eigen::Dynamic, 1> acc = Eigen::Matrix<S, Eigen::Dynamic, 1>::Zero(n);
    for (Eigen::Index b = 0; b < m; ++b) {
        acc = omega * acc + x.col(b).template cast<S>();
        y.col(b) = acc;
    }
    acc.setZero();
    const W lower = conj_scalar(omega);
    for (Eigen::Index b = m - 2; b >= 0; --b) {
        acc = lower * (acc + x.col(b + 1).template cast<S>());
        y.col(b) += acc;
    }
    return y;
}

/// (XB) X^H / m given the product XB. Real X gives X^T.
template <class DerivedXB, class DerivedX>
Dense<Promoted<typename DerivedXB::Scalar, typename DerivedX::Scalar>>
finish_sandwich(const Eigen::MatrixBase<DerivedXB>& xb, const Eigen::MatrixBase<DerivedX>& x) {
    using S = Promoted<typename DerivedXB::Scalar, typename DerivedX::Scalar>;
    const double inv_m = 1.0 / static_cast<double>(x.cols());
    Dense<S> out;
    if constexpr (std::is_same_v<typename DerivedXB::Scalar, typename DerivedX::Scalar>) {
        out.noalias() = xb * x.adjoint();
    } else {
        out.noalias() = xb.template cast<S>() * x.template cast<S>().adjoint();
    }
    out *= inv_m;
    return out;
}

/// X B X^H / m for a dense B.
template <class DerivedX, class DerivedB>
Dense<Promoted<typename DerivedX::Scalar, typename DerivedB::Scalar>>
dense_sandwich(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedB>& b) {
    using S = Promoted<typename DerivedX::Scalar, typename DerivedB::Scalar>;
    Dense<S> xb;
    if constexpr (std::is_same_v<typename DerivedX::Scalar, typename DerivedB::Scalar>) {
        xb.noalias() = x * b;
    } else {
        xb.noalias() = x.template cast<S>() * b.template cast<S>();
    }
    return finish_sandwich(xb, x);
}

} // namespace cwishart::kernels
