#pragma once

// Small dense complex linear algebra for the polarized channel models.
// Everything here is sized for M, N <= 16, i.e. matrices of at most 32x32.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace polarform {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Phase of z in [0, 2pi), with the convention angle(0) = 0.
double angle(Complex z) noexcept;

/// Reduces an arbitrary phase into [0, 2pi).
double wrap_phase(double radians) noexcept;

/// Dense row-major complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  std::span<const Complex> entries() const noexcept { return entries_; }
  std::span<Complex> entries() noexcept { return entries_; }

  bool is_finite() const noexcept;
  CMatrix adjoint() const;

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator+(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator-(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator*(Complex s, const CMatrix& a);
  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

double frobenius_norm(const CMatrix& a);

/// Fixed 2-vector: a Jones/polarization vector or a PFV.
using Vec2 = std::array<Complex, 2>;

/// Fixed 2x2 complex matrix, row-major. Used for the per-antenna-pair
/// polarized blocks, where a heap-backed CMatrix would dominate runtime.
struct Mat2 {
  Complex a00{}, a01{}, a10{}, a11{};

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  Mat2 adjoint() const { return {std::conj(a00), std::conj(a10), std::conj(a01), std::conj(a11)}; }
  Complex trace() const { return a00 + a11; }
  Complex det() const { return a00 * a11 - a01 * a10; }
  bool is_finite() const noexcept;

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a00 * y.a00 + x.a01 * y.a10, x.a00 * y.a01 + x.a01 * y.a11,
            x.a10 * y.a00 + x.a11 * y.a10, x.a10 * y.a01 + x.a11 * y.a11};
  }
  friend Mat2 operator+(const Mat2& x, const Mat2& y) {
    return {x.a00 + y.a00, x.a01 + y.a01, x.a10 + y.a10, x.a11 + y.a11};
  }
  friend Mat2 operator*(Complex s, const Mat2& x) {
    return {s * x.a00, s * x.a01, s * x.a10, s * x.a11};
  }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

inline Vec2 operator*(const Mat2& m, const Vec2& v) {
  return {m.a00 * v[0] + m.a01 * v[1], m.a10 * v[0] + m.a11 * v[1]};
}

/// u^H v
inline Complex inner(const Vec2& u, const Vec2& v) {
  return std::conj(u[0]) * v[0] + std::conj(u[1]) * v[1];
}

inline double squared_norm(const Vec2& v) { return std::norm(v[0]) + std::norm(v[1]); }

/// u u^H
inline Mat2 outer(const Vec2& u) {
  const Complex off = u[1] * std::conj(u[0]);
  return {std::norm(u[0]), std::conj(off), off, std::norm(u[1])};
}

CMatrix to_cmatrix(const Mat2& m);
Mat2 to_mat2(const CMatrix& m);

/// Truncated SVD a = U diag(s) V^H keeping singular values above
/// kRankTolerance * s_max.
struct SvdResult {
  CMatrix left_vectors;                // rows(a) x S
  std::vector<double> singular_values;  // descending, length S
  CMatrix right_vectors;               // cols(a) x S

  std::size_t rank() const noexcept { return singular_values.size(); }
};

inline constexpr double kRankTolerance = 1e-12;

/// One-sided Jacobi SVD. Throws InvalidInput on non-finite or empty input.
/// A zero matrix yields S = 0.
SvdResult svd(const CMatrix& a);

/// Truncated singular values only (same rank rule as svd).
std::vector<double> singular_values(const CMatrix& a);

/// Tr(A A^H), the squared Frobenius norm.
double gram_trace(const CMatrix& a);

/// Deterministic CSCG sampler. A source is single-owner; derive one per
/// Monte-Carlo realization with `child`.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t master_seed);

  /// Independent stream keyed by (master_seed, stream_index).
  static GaussianSource child(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const noexcept { return master_seed_; }

  /// One CN(0, variance) draw.
  Complex next(double variance);

 private:
  std::uint64_t master_seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer; also used to derive child seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// rows x cols matrix with i.i.d. CN(0, variance) entries.
/// Throws InvalidParameter when variance <= 0.
CMatrix sample_cscg(GaussianSource& src, std::size_t rows, std::size_t cols, double variance);

}  // namespace polarform
