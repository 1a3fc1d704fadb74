#pragma once

#include <complex>
#include <utility>
#include <variant>

#include <Eigen/Dense>

#include "cwishart/errors.hpp"

namespace cwishart {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

enum class Field { real, complex };

/**
 * Dense matrix over R or C.
 *
 * The field flag is carried by the storage itself: a real matrix has no
 * imaginary parts to get wrong. Mixed-field arithmetic promotes to complex.
 * Values are immutable through the public interface; build a new Matrix to
 * change entries.
 */
class Matrix {
  public:
    Matrix() = default;
    Matrix(RealMatrix values) : data_(std::move(values)) {}       // NOLINT(google-explicit-constructor)
    Matrix(ComplexMatrix values) : data_(std::move(values)) {}    // NOLINT(google-explicit-constructor)

    /// Evaluates any real or complex Eigen expression.
    template <class Derived>
    Matrix(const Eigen::MatrixBase<Derived>& e)   // NOLINT(google-explicit-constructor)
        : data_(evaluate(e)) {}

    static Matrix identity(Index n) { return RealMatrix::Identity(n, n); }
    static Matrix zeros(Index rows, Index cols, Field field = Field::real);
    static Matrix diagonal(const RealVector& d) { return RealMatrix(d.asDiagonal()); }

    Index rows() const noexcept;
    Index cols() const noexcept;
    bool empty() const noexcept { return rows() == 0 || cols() == 0; }
    bool is_square() const noexcept { return rows() == cols(); }
    Field field() const noexcept { return data_.index() == 0 ? Field::real : Field::complex; }
    bool is_real() const noexcept { return field() == Field::real; }

    Complex operator()(Index i, Index j) const;

    /// Storage access; throws InvalidArgument when the field does not match.
    const RealMatrix& real_values() const;
    const ComplexMatrix& complex_values() const;
    ComplexMatrix to_complex() const;

    template <class Visitor>
    decltype(auto) visit(Visitor&& visitor) const {
        return std::visit(std::forward<Visitor>(visitor), data_);
    }

    Matrix adjoint() const;
    Matrix transpose() const;
    Matrix conjugate() const;
    Matrix block(Index row, Index col, Index rows, Index cols) const;

    friend Matrix operator+(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);
    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator*(double s, const Matrix& a);
    friend Matrix operator*(Complex s, const Matrix& a);

    /// Exact entrywise equality, including the field flag.
    friend bool operator==(const Matrix& a, const Matrix& b);

  private:
    template <class Derived>
    static std::variant<RealMatrix, ComplexMatrix> evaluate(const Eigen::MatrixBase<Derived>& e) {
        if constexpr (std::is_same_v<typename Derived::Scalar, double>) {
            return RealMatrix(e);
        } else {
            return ComplexMatrix(e);
        }
    }

    std::variant<RealMatrix, ComplexMatrix> data_;
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
struct HermitianEigen {
    RealVector eigenvalues;
    Matrix eigenvectors;

    Matrix reconstruct() const;
};

/// Accepted as Hermitian when ||A - A^H||_F <= 1e-10 * max(1, ||A||_F).
inline constexpr double kHermitianTolerance = 1e-10;
/// Eigenvalues in [-kPsdTolerance, 0) are clamped to zero by psd_sqrt.
inline constexpr double kPsdTolerance = 1e-10;

bool is_hermitian(const Matrix& a);

/// (A + A^H)/2; throws InvalidArgument if A is not Hermitian within tolerance.
Matrix hermitian_part(const Matrix& a);

HermitianEigen hermitian_eigen(const Matrix& a);

/// Largest singular value.
double spectral_norm(const Matrix& a);
double frobenius_norm(const Matrix& a);
Complex trace(const Matrix& a);

/// Hermitian square root of a PSD matrix. Diagonal input is handled entrywise.
Matrix psd_sqrt(const Matrix& s);

Matrix kronecker(const Matrix& a, const Matrix& b);

/// Column-stacking vectorization as an (rows*cols) x 1 matrix.
Matrix vec(const Matrix& a);

} // namespace cwishart
