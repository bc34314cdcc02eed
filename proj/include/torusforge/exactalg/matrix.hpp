#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <optional>
#include <type_traits>
#include <vector>

#include "torusforge/error.hpp"
#include "torusforge/exactalg/numbers.hpp"
#include "torusforge/exactalg/polynomial.hpp"
#include "torusforge/exactalg/real.hpp"

namespace torusforge::exactalg {

/// Dense row-major matrix.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  const std::vector<T>& data() const { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_, data_.empty() ? T() : data_.front());
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorKind::InvalidInput, "matrix shape mismatch in product");
    Matrix r(a.rows_, b.cols_, a.zero_like());
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }
  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    Matrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += b.data_[i];
    return r;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    Matrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] -= b.data_[i];
    return r;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  T zero_like() const {
    if constexpr (std::is_same_v<T, Real>) {
      return Real(data_.empty() ? 64 : data_.front().precision());
    } else {
      return T(0);
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RationalMatrix = Matrix<Rational>;
using IntegerMatrix = Matrix<Integer>;
using RealMatrix = Matrix<Real>;

RationalMatrix identity_rational(std::size_t n);
IntegerMatrix identity_integer(std::size_t n);
RealMatrix identity_real(std::size_t n, mpfr_prec_t bits);

RationalMatrix to_rational(const IntegerMatrix& m);
RealMatrix to_real(const RationalMatrix& m, mpfr_prec_t bits);
RealMatrix to_real(const IntegerMatrix& m, mpfr_prec_t bits);

/// Reduced row echelon form over Q; returns pivot columns.
std::vector<std::size_t> row_reduce(RationalMatrix& m);
std::size_t rank(RationalMatrix m);
/// Basis of the right kernel {x : m x = 0}, one vector per free column.
std::vector<std::vector<Rational>> kernel_basis(RationalMatrix m);
/// Some x with m x = rhs, or nullopt when inconsistent.
std::optional<std::vector<Rational>> solve(const RationalMatrix& m, const std::vector<Rational>& rhs);

Rational determinant(RationalMatrix m);
/// Exact determinant of an integer matrix by fraction-free elimination.
Integer determinant(const IntegerMatrix& m);

/// det(xI - m) by Faddeev-LeVerrier in exact arithmetic.
RatPolynomial characteristic_polynomial(const RationalMatrix& m);

RealMatrix inverse(const RealMatrix& m);
Real sup_norm(const RealMatrix& m);

nlohmann::json to_json(const IntegerMatrix& m);
nlohmann::json to_json(const RationalMatrix& m);
/// Reals as hex-float strings.
nlohmann::json to_json(const RealMatrix& m);

}  // namespace torusforge::exactalg
