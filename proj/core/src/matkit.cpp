#include "polarform/matkit.hpp"

#include <cmath>

#include "polarform/errors.hpp"

namespace polarform {

double wrap_phase(double radians) noexcept {
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a value just below a multiple of 2pi can round up to 2pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double angle(Complex z) noexcept {
  if (z.real() == 0.0 && z.imag() == 0.0) return 0.0;
  return wrap_phase(std::arg(z));
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw InvalidInput("CMatrix: entry count does not match rows*cols");
  }
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  entries_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw InvalidInput("CMatrix: ragged initializer");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const double> values) {
  CMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

bool CMatrix::is_finite() const noexcept {
  for (const auto& z : entries_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols_ != b.rows_) throw InvalidInput("CMatrix product: inner dimensions differ");
  CMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InvalidInput("CMatrix sum: shape mismatch");
  CMatrix out = a;
  for (std::size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] += b.entries_[i];
  return out;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InvalidInput("CMatrix difference: shape mismatch");
  CMatrix out = a;
  for (std::size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] -= b.entries_[i];
  return out;
}

CMatrix operator*(Complex s, const CMatrix& a) {
  CMatrix out = a;
  for (auto& z : out.entries_) z *= s;
  return out;
}

double frobenius_norm(const CMatrix& a) { return std::sqrt(gram_trace(a)); }

double gram_trace(const CMatrix& a) {
  if (!a.is_finite()) throw InvalidInput("gram_trace: non-finite entry");
  double sum = 0.0;
  for (const auto& z : a.entries()) sum += std::norm(z);
  return sum;
}

bool Mat2::is_finite() const noexcept {
  for (const Complex* z : {&a00, &a01, &a10, &a11}) {
    if (!std::isfinite(z->real()) || !std::isfinite(z->imag())) return false;
  }
  return true;
}

CMatrix to_cmatrix(const Mat2& m) { return CMatrix{{m.a00, m.a01}, {m.a10, m.a11}}; }

Mat2 to_mat2(const CMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw InvalidInput("to_mat2: expected a 2x2 matrix");
  return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
}

}  // namespace polarform
