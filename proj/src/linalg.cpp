#include "ddestab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace ddestab {

namespace {

bool finite(double v) noexcept { return std::isfinite(v); }
bool finite(const std::complex<double>& v) noexcept {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

template <typename Scalar>
void require_same_shape(const DenseMatrix<Scalar>& a, const DenseMatrix<Scalar>& b,
                        const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeMismatch(std::string(op) + ": " + describe_shape(a.rows(), a.cols()) + " vs " +
                        describe_shape(b.rows(), b.cols()));
  }
}

template <typename Scalar>
void require_square(const DenseMatrix<Scalar>& m, const char* op) {
  if (!m.square() || m.empty()) {
    throw ShapeMismatch(std::string(op) + ": expected a square matrix, got " +
                        describe_shape(m.rows(), m.cols()));
  }
}

template <typename Scalar>
DenseMatrix<Scalar> multiply(const DenseMatrix<Scalar>& a, const DenseMatrix<Scalar>& b) {
  if (a.cols() != b.rows()) {
    throw ShapeMismatch("mat_mul: " + describe_shape(a.rows(), a.cols()) + " times " +
                        describe_shape(b.rows(), b.cols()));
  }
  DenseMatrix<Scalar> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Scalar aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

}  // namespace

std::string describe_shape(std::size_t rows, std::size_t cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

template <typename Scalar>
DenseMatrix<Scalar>::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Scalar{}) {
  if (rows == 0 || cols == 0) {
    throw ShapeMismatch("matrix dimensions must be positive, got " + describe_shape(rows, cols));
  }
}

template <typename Scalar>
DenseMatrix<Scalar>::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<Scalar> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) {
    throw ShapeMismatch("matrix dimensions must be positive, got " + describe_shape(rows, cols));
  }
  if (data_.size() != rows * cols) {
    throw ShapeMismatch("entry count " + std::to_string(data_.size()) + " does not match " +
                        describe_shape(rows, cols));
  }
  if (!all_finite()) {
    throw std::invalid_argument("matrix entries must be finite");
  }
}

template <typename Scalar>
DenseMatrix<Scalar>::DenseMatrix(std::initializer_list<std::initializer_list<Scalar>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  if (rows_ == 0 || cols_ == 0) {
    throw ShapeMismatch("matrix literal must be non-empty");
  }
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) {
      throw ShapeMismatch("ragged matrix literal");
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }
  if (!all_finite()) {
    throw std::invalid_argument("matrix entries must be finite");
  }
}

template <typename Scalar>
DenseMatrix<Scalar> DenseMatrix<Scalar>::identity(std::size_t n) {
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    out(i, i) = Scalar{1};
  }
  return out;
}

template <typename Scalar>
DenseMatrix<Scalar> DenseMatrix<Scalar>::diagonal(std::span<const Scalar> diag) {
  DenseMatrix out(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    out(i, i) = diag[i];
  }
  if (!out.all_finite()) {
    throw std::invalid_argument("matrix entries must be finite");
  }
  return out;
}

template <typename Scalar>
bool DenseMatrix<Scalar>::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& v) { return finite(v); });
}

template <typename Scalar>
void DenseMatrix<Scalar>::set_zero() noexcept {
  std::fill(data_.begin(), data_.end(), Scalar{});
}

template <typename Scalar>
DenseMatrix<Scalar>& DenseMatrix<Scalar>::operator+=(const DenseMatrix& rhs) {
  require_same_shape(*this, rhs, "add");
  for (std::size_t i = 0; i < data_.size(); ++i) {
    data_[i] += rhs.data_[i];
  }
  return *this;
}

template <typename Scalar>
DenseMatrix<Scalar>& DenseMatrix<Scalar>::operator-=(const DenseMatrix& rhs) {
  require_same_shape(*this, rhs, "subtract");
  for (std::size_t i = 0; i < data_.size(); ++i) {
    data_[i] -= rhs.data_[i];
  }
  return *this;
}

template <typename Scalar>
DenseMatrix<Scalar>& DenseMatrix<Scalar>::operator*=(Scalar k) noexcept {
  for (auto& v : data_) {
    v *= k;
  }
  return *this;
}

template <typename Scalar>
DenseMatrix<Scalar>& DenseMatrix<Scalar>::add_scaled(const DenseMatrix& rhs, Scalar k) {
  require_same_shape(*this, rhs, "add_scaled");
  for (std::size_t i = 0; i < data_.size(); ++i) {
    data_[i] += k * rhs.data_[i];
  }
  return *this;
}

template class DenseMatrix<double>;
template class DenseMatrix<std::complex<double>>;

double frobenius_norm(const Matrix& m) noexcept {
  double sum = 0.0;
  for (double v : m.data()) {
    sum += v * v;
  }
  return std::sqrt(sum);
}

double frobenius_norm(const ComplexMatrix& m) noexcept {
  double sum = 0.0;
  for (const auto& v : m.data()) {
    sum += std::norm(v);
  }
  return std::sqrt(sum);
}

Matrix mat_add(const Matrix& a, const Matrix& b) {
  Matrix out = a;
  out += b;
  return out;
}

Matrix mat_sub(const Matrix& a, const Matrix& b) {
  Matrix out = a;
  out -= b;
  return out;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) { return multiply(a, b); }

ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b) { return multiply(a, b); }

Matrix scaled(const Matrix& a, double k) {
  Matrix out = a;
  out *= k;
  return out;
}

void mat_mul_into(const Matrix& a, const Matrix& b, Matrix& out) {
  out.set_zero();
  mat_mul_add_into(a, b, 1.0, out);
}

void mat_mul_add_into(const Matrix& a, const Matrix& b, double k, Matrix& out) {
  if (a.cols() != b.rows() || out.rows() != a.rows() || out.cols() != b.cols()) {
    throw ShapeMismatch("mat_mul_add_into: " + describe_shape(a.rows(), a.cols()) + " times " +
                        describe_shape(b.rows(), b.cols()) + " into " +
                        describe_shape(out.rows(), out.cols()));
  }
  const std::size_t inner = a.cols();
  const std::size_t cols = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < inner; ++p) {
        acc += a(i, p) * b(p, j);
      }
      out(i, j) += k * acc;
    }
  }
}

Matrix lu_invert(const Matrix& m, double rel_pivot_tol) {
  require_square(m, "lu_invert");
  if (!(rel_pivot_tol > 0.0)) {
    throw std::invalid_argument("lu_invert: rel_pivot_tol must be positive");
  }
  const std::size_t n = m.rows();

  double max_entry = 0.0;
  for (double v : m.data()) {
    max_entry = std::max(max_entry, std::abs(v));
  }
  const double threshold = rel_pivot_tol * max_entry;
  if (max_entry == 0.0) {
    throw SingularError("lu_invert: zero matrix");
  }

  Matrix lu = m;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot_row = col;
    double pivot_mag = std::abs(lu(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(lu(r, col)) > pivot_mag) {
        pivot_mag = std::abs(lu(r, col));
        pivot_row = r;
      }
    }
    if (pivot_mag < threshold || pivot_mag == 0.0) {
      throw SingularError("lu_invert: pivot " + std::to_string(col) + " below tolerance");
    }
    if (pivot_row != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(lu(col, c), lu(pivot_row, c));
      }
      std::swap(perm[col], perm[pivot_row]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = lu(r, col) / lu(col, col);
      lu(r, col) = factor;
      for (std::size_t c = col + 1; c < n; ++c) {
        lu(r, c) -= factor * lu(col, c);
      }
    }
  }

  // Solve L U x = P e_k column by column.
  Matrix inv(n, n);
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      double v = perm[i] == k ? 1.0 : 0.0;
      for (std::size_t p = 0; p < i; ++p) {
        v -= lu(i, p) * x[p];
      }
      x[i] = v;
    }
    for (std::size_t i = n; i-- > 0;) {
      double v = x[i];
      for (std::size_t p = i + 1; p < n; ++p) {
        v -= lu(i, p) * x[p];
      }
      x[i] = v / lu(i, i);
    }
    for (std::size_t i = 0; i < n; ++i) {
      inv(i, k) = x[i];
    }
  }
  return inv;
}

std::complex<double> complex_det(const ComplexMatrix& m) {
  require_square(m, "complex_det");
  const std::size_t n = m.rows();
  ComplexMatrix lu = m;
  std::complex<double> det{1.0, 0.0};

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot_row = col;
    double pivot_mag = std::abs(lu(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(lu(r, col)) > pivot_mag) {
        pivot_mag = std::abs(lu(r, col));
        pivot_row = r;
      }
    }
    if (pivot_mag == 0.0) {
      return {0.0, 0.0};
    }
    if (pivot_row != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(lu(col, c), lu(pivot_row, c));
      }
      det = -det;
    }
    const std::complex<double> pivot = lu(col, col);
    det *= pivot;
    for (std::size_t r = col + 1; r < n; ++r) {
      const std::complex<double> factor = lu(r, col) / pivot;
      for (std::size_t c = col + 1; c < n; ++c) {
        lu(r, c) -= factor * lu(col, c);
      }
    }
  }
  return det;
}

ComplexMatrix to_complex(const Matrix& m) {
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.data().size(); ++i) {
    out.data()[i] = m.data()[i];
  }
  return out;
}

}  // namespace ddestab
