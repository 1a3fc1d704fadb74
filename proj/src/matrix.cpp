#include "cwishart/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace cwishart {

namespace {

void require_nonempty(const Matrix& a, const char* op) {
    if (a.empty()) {
        throw InvalidArgument(std::string(op) + ": empty matrix");
    }
}

void require_square(const Matrix& a, const char* op) {
    if (!a.is_square()) {
        throw InvalidArgument(std::string(op) + ": matrix is " + std::to_string(a.rows()) + "x" +
                              std::to_string(a.cols()) + ", expected square");
    }
}

// Mixed-field binary operations promote the real operand.
template <class Op>
Matrix binary(const Matrix& a, const Matrix& b, Op op) {
    if (a.is_real() && b.is_real()) {
        return Matrix(RealMatrix(op(a.real_values(), b.real_values())));
    }
    return Matrix(ComplexMatrix(op(a.to_complex(), b.to_complex())));
}

bool is_diagonal(const Matrix& a) {
    return a.visit([](const auto& m) {
        using Scalar = typename std::decay_t<decltype(m)>::Scalar;
        for (Index j = 0; j < m.cols(); ++j) {
            for (Index i = 0; i < m.rows(); ++i) {
                if (i != j && m(i, j) != Scalar(0)) {
                    return false;
                }
            }
        }
        return true;
    });
}

} // namespace

Matrix Matrix::zeros(Index rows, Index cols, Field field) {
    if (field == Field::real) {
        return RealMatrix::Zero(rows, cols);
    }
    return ComplexMatrix::Zero(rows, cols);
}

Index Matrix::rows() const noexcept {
    return std::visit([](const auto& m) { return m.rows(); }, data_);
}

Index Matrix::cols() const noexcept {
    return std::visit([](const auto& m) { return m.cols(); }, data_);
}

Complex Matrix::operator()(Index i, Index j) const {
    if (i < 0 || j < 0 || i >= rows() || j >= cols()) {
        throw InvalidArgument("Matrix: index out of range");
    }
    return std::visit([&](const auto& m) { return Complex(m(i, j)); }, data_);
}

const RealMatrix& Matrix::real_values() const {
    if (const auto* m = std::get_if<RealMatrix>(&data_)) {
        return *m;
    }
    throw InvalidArgument("Matrix: real storage requested from a complex matrix");
}

const ComplexMatrix& Matrix::complex_values() const {
    if (const auto* m = std::get_if<ComplexMatrix>(&data_)) {
        return *m;
    }
    throw InvalidArgument("Matrix: complex storage requested from a real matrix");
}

ComplexMatrix Matrix::to_complex() const {
    return std::visit([](const auto& m) -> ComplexMatrix { return m.template cast<Complex>(); }, data_);
}

Matrix Matrix::adjoint() const {
    return std::visit([](const auto& m) { return Matrix(m.adjoint().eval()); }, data_);
}

Matrix Matrix::transpose() const {
    return std::visit([](const auto& m) { return Matrix(m.transpose().eval()); }, data_);
}

Matrix Matrix::conjugate() const {
    return std::visit([](const auto& m) { return Matrix(m.conjugate().eval()); }, data_);
}

Matrix Matrix::block(Index row, Index col, Index nrows, Index ncols) const {
    if (row < 0 || col < 0 || nrows < 0 || ncols < 0 || row + nrows > rows() || col + ncols > cols()) {
        throw InvalidArgument("Matrix::block: out of range");
    }
    return std::visit([&](const auto& m) { return Matrix(m.block(row, col, nrows, ncols).eval()); }, data_);
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidArgument("Matrix +: dimension mismatch");
    }
    return binary(a, b, [](const auto& x, const auto& y) { return x + y; });
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidArgument("Matrix -: dimension mismatch");
    }
    return binary(a, b, [](const auto& x, const auto& y) { return x - y; });
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw InvalidArgument("Matrix *: inner dimensions " + std::to_string(a.cols()) + " and " +
                              std::to_string(b.rows()) + " differ");
    }
    return binary(a, b, [](const auto& x, const auto& y) { return x * y; });
}

Matrix operator*(double s, const Matrix& a) {
    return a.visit([s](const auto& m) { return Matrix((s * m).eval()); });
}

Matrix operator*(Complex s, const Matrix& a) {
    return Matrix(ComplexMatrix(s * a.to_complex()));
}

bool operator==(const Matrix& a, const Matrix& b) {
    return a.data_ == b.data_;
}

Matrix HermitianEigen::reconstruct() const {
    return eigenvectors.visit([&](const auto& v) {
        return Matrix((v * eigenvalues.asDiagonal() * v.adjoint()).eval());
    });
}

bool is_hermitian(const Matrix& a) {
    if (!a.is_square()) {
        return false;
    }
    return a.visit([](const auto& m) {
        const double asym = (m - m.adjoint()).norm();
        return asym <= kHermitianTolerance * std::max(1.0, m.norm());
    });
}

Matrix hermitian_part(const Matrix& a) {
    require_square(a, "hermitian_part");
    if (!is_hermitian(a)) {
        throw InvalidArgument("hermitian_part: matrix is not Hermitian within tolerance");
    }
    return a.visit([](const auto& m) { return Matrix((0.5 * (m + m.adjoint())).eval()); });
}

HermitianEigen hermitian_eigen(const Matrix& a) {
    require_nonempty(a, "hermitian_eigen");
    const Matrix h = hermitian_part(a);
    return h.visit([](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        Eigen::SelfAdjointEigenSolver<M> solver(m);
        if (solver.info() != Eigen::Success) {
            throw InvalidArgument("hermitian_eigen: eigensolver failed to converge");
        }
        return HermitianEigen{solver.eigenvalues(), Matrix(M(solver.eigenvectors()))};
    });
}

double spectral_norm(const Matrix& a) {
    require_nonempty(a, "spectral_norm");
    if (is_hermitian(a)) {
        const RealVector ev = hermitian_eigen(a).eigenvalues;
        return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    }
    // Gram matrix on the smaller side has the same nonzero spectrum.
    return a.visit([](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        const M gram = m.rows() < m.cols() ? M(m * m.adjoint()) : M(m.adjoint() * m);
        Eigen::SelfAdjointEigenSolver<M> solver(gram, Eigen::EigenvaluesOnly);
        return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
    });
}

double frobenius_norm(const Matrix& a) {
    require_nonempty(a, "frobenius_norm");
    return a.visit([](const auto& m) { return m.norm(); });
}

Complex trace(const Matrix& a) {
    require_square(a, "trace");
    return a.visit([](const auto& m) { return Complex(m.trace()); });
}

Matrix psd_sqrt(const Matrix& s) {
    require_nonempty(s, "psd_sqrt");
    require_square(s, "psd_sqrt");
    if (!is_hermitian(s)) {
        throw NotPsdError("psd_sqrt: matrix is not Hermitian");
    }
    if (is_diagonal(s)) {
        return s.visit([](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            M root = M::Zero(m.rows(), m.cols());
            for (Index i = 0; i < m.rows(); ++i) {
                const double d = std::real(m(i, i));
                if (d < -kPsdTolerance) {
                    throw NotPsdError("psd_sqrt: negative eigenvalue " + std::to_string(d));
                }
                root(i, i) = std::sqrt(std::max(0.0, d));
            }
            return Matrix(std::move(root));
        });
    }
    HermitianEigen eig = hermitian_eigen(s);
    for (Index i = 0; i < eig.eigenvalues.size(); ++i) {
        double& l = eig.eigenvalues(i);
        if (l < -kPsdTolerance) {
            throw NotPsdError("psd_sqrt: negative eigenvalue " + std::to_string(l));
        }
        l = std::sqrt(std::max(0.0, l));
    }
    return hermitian_part(eig.reconstruct());
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
    auto kron = [](const auto& x, const auto& y) {
        using M = std::decay_t<decltype(x)>;
        M out(x.rows() * y.rows(), x.cols() * y.cols());
        for (Index j = 0; j < x.cols(); ++j) {
            for (Index i = 0; i < x.rows(); ++i) {
                out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
            }
        }
        return Matrix(std::move(out));
    };
    if (a.is_real() && b.is_real()) {
        return kron(a.real_values(), b.real_values());
    }
    return kron(a.to_complex(), b.to_complex());
}

Matrix vec(const Matrix& a) {
    // Eigen storage is column-major, so reshaping is column stacking.
    return a.visit([](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        return Matrix(M(m.reshaped(m.size(), 1)));
    });
}

} // namespace cwishart
