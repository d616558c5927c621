#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddestab {

struct ShapeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/**
 * Dense row-major matrix over double or std::complex<double>.
 *
 * Construction from explicit entries rejects NaN/Inf. Arithmetic results are
 * not re-validated; use all_finite() where divergence matters.
 */
template <typename Scalar>
class DenseMatrix {
 public:
  using value_type = Scalar;

  DenseMatrix() = default;

  /// Zero matrix of the given shape.
  DenseMatrix(std::size_t rows, std::size_t cols);

  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<Scalar> entries);

  /// Nested-list literal, e.g. {{1, 2}, {3, 4}}.
  DenseMatrix(std::initializer_list<std::initializer_list<Scalar>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const Scalar> diag);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  Scalar& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * cols_ + c];
  }

  [[nodiscard]] std::span<Scalar> data() noexcept { return data_; }
  [[nodiscard]] std::span<const Scalar> data() const noexcept { return data_; }

  [[nodiscard]] bool all_finite() const noexcept;
  void set_zero() noexcept;

  DenseMatrix& operator+=(const DenseMatrix& rhs);
  DenseMatrix& operator-=(const DenseMatrix& rhs);
  DenseMatrix& operator*=(Scalar k) noexcept;

  /// this += k * rhs
  DenseMatrix& add_scaled(const DenseMatrix& rhs, Scalar k);

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

using Matrix = DenseMatrix<double>;
using ComplexMatrix = DenseMatrix<std::complex<double>>;

extern template class DenseMatrix<double>;
extern template class DenseMatrix<std::complex<double>>;

[[nodiscard]] double frobenius_norm(const Matrix& m) noexcept;
[[nodiscard]] double frobenius_norm(const ComplexMatrix& m) noexcept;

[[nodiscard]] Matrix mat_add(const Matrix& a, const Matrix& b);
[[nodiscard]] Matrix mat_sub(const Matrix& a, const Matrix& b);
[[nodiscard]] Matrix mat_mul(const Matrix& a, const Matrix& b);
[[nodiscard]] ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b);
[[nodiscard]] Matrix scaled(const Matrix& a, double k);

/// out = a * b without allocating; out must already have the result shape.
void mat_mul_into(const Matrix& a, const Matrix& b, Matrix& out);
/// out += k * (a * b)
void mat_mul_add_into(const Matrix& a, const Matrix& b, double k, Matrix& out);

inline constexpr double kDefaultPivotTol = 1e-12;

/**
 * Inverse by LU factorization with partial pivoting.
 *
 * Singular when some pivot magnitude drops below
 * rel_pivot_tol * max|M_ij| (taken over the input).
 */
[[nodiscard]] Matrix lu_invert(const Matrix& m, double rel_pivot_tol = kDefaultPivotTol);

/// Determinant via complex LU with partial pivoting. Exact zero pivots give 0.
[[nodiscard]] std::complex<double> complex_det(const ComplexMatrix& m);

[[nodiscard]] ComplexMatrix to_complex(const Matrix& m);

[[nodiscard]] std::string describe_shape(std::size_t rows, std::size_t cols);

}  // namespace ddestab
