#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "polarform/errors.hpp"
#include "polarform/matkit.hpp"

namespace polarform {
namespace {

constexpr int kMaxSweeps = 80;
constexpr double kOrthogonalityTol = 1e-15;

// Column-major work buffer for the Hestenes iteration.
struct Columns {
  std::size_t rows;
  std::size_t cols;
  std::vector<Complex> data;

  Complex* col(std::size_t j) { return data.data() + j * rows; }
};

// Orthogonalizes the columns of `a` (rows >= cols) in place while applying
// the same unitary column operations to `v`, which starts as the identity.
void hestenes(Columns& a, Columns* v) {
  const std::size_t n = a.cols;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        Complex* ai = a.col(i);
        Complex* aj = a.col(j);
        double alpha = 0.0, beta = 0.0;
        Complex gamma{};
        for (std::size_t r = 0; r < a.rows; ++r) {
          alpha += std::norm(ai[r]);
          beta += std::norm(aj[r]);
          gamma += std::conj(ai[r]) * aj[r];
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= kOrthogonalityTol * std::sqrt(alpha * beta)) continue;
        rotated = true;

        // Rotate aj by e^{-j arg(gamma)} so that ai^H aj is real, then apply a
        // real Jacobi rotation that zeroes it.
        const Complex phase = std::conj(gamma) / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;

        for (std::size_t r = 0; r < a.rows; ++r) {
          const Complex x = ai[r];
          const Complex y = aj[r] * phase;
          ai[r] = c * x - s * y;
          aj[r] = s * x + c * y;
        }
        if (v == nullptr) continue;
        Complex* vi = v->col(i);
        Complex* vj = v->col(j);
        for (std::size_t r = 0; r < v->rows; ++r) {
          const Complex x = vi[r];
          const Complex y = vj[r] * phase;
          vi[r] = c * x - s * y;
          vj[r] = s * x + c * y;
        }
      }
    }
    if (!rotated) return;
  }
}

Columns to_tall_columns(const CMatrix& a) {
  const bool tall = a.rows() >= a.cols();
  const std::size_t rows = tall ? a.rows() : a.cols();
  const std::size_t cols = tall ? a.cols() : a.rows();
  Columns work{rows, cols, std::vector<Complex>(rows * cols)};
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (tall) {
        work.col(c)[r] = a(r, c);
      } else {
        work.col(r)[c] = std::conj(a(r, c));
      }
    }
  }
  return work;
}

void check_input(const CMatrix& a, const char* who) {
  if (a.rows() == 0 || a.cols() == 0) throw InvalidInput(std::string(who) + ": empty matrix");
  if (!a.is_finite()) throw InvalidInput(std::string(who) + ": non-finite entry");
}

// SVD of a tall (rows >= cols) matrix given column-major.
SvdResult tall_svd(Columns a) {
  const std::size_t m = a.rows;
  const std::size_t n = a.cols;
  Columns v{n, n, std::vector<Complex>(n * n)};
  for (std::size_t i = 0; i < n; ++i) v.col(i)[i] = 1.0;

  hestenes(a, &v);

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    const Complex* aj = a.col(j);
    for (std::size_t r = 0; r < m; ++r) sum += std::norm(aj[r]);
    norms[j] = std::sqrt(sum);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  SvdResult out;
  const double largest = n ? norms[order[0]] : 0.0;
  if (largest == 0.0) {
    out.left_vectors = CMatrix(m, 0);
    out.right_vectors = CMatrix(n, 0);
    return out;
  }
  std::size_t rank = 0;
  while (rank < n && norms[order[rank]] > kRankTolerance * largest) ++rank;

  out.singular_values.resize(rank);
  out.left_vectors = CMatrix(m, rank);
  out.right_vectors = CMatrix(n, rank);
  for (std::size_t k = 0; k < rank; ++k) {
    const std::size_t j = order[k];
    const double sigma = norms[j];
    out.singular_values[k] = sigma;
    const Complex* aj = a.col(j);
    const Complex* vj = v.col(j);
    for (std::size_t r = 0; r < m; ++r) out.left_vectors(r, k) = aj[r] / sigma;
    for (std::size_t r = 0; r < n; ++r) out.right_vectors(r, k) = vj[r];
  }
  return out;
}

}  // namespace

SvdResult svd(const CMatrix& a) {
  check_input(a, "svd");
  // Work on a (tall) or a^H (wide) so the Jacobi pass sees more rows than columns.
  SvdResult res = tall_svd(to_tall_columns(a));
  if (a.rows() < a.cols()) std::swap(res.left_vectors, res.right_vectors);
  return res;
}

std::vector<double> singular_values(const CMatrix& a) {
  check_input(a, "singular_values");
  Columns work = to_tall_columns(a);
  hestenes(work, nullptr);
  std::vector<double> norms(work.cols);
  for (std::size_t j = 0; j < work.cols; ++j) {
    double sum = 0.0;
    const Complex* aj = work.col(j);
    for (std::size_t r = 0; r < work.rows; ++r) sum += std::norm(aj[r]);
    norms[j] = std::sqrt(sum);
  }
  std::sort(norms.begin(), norms.end(), std::greater<>());
  if (norms.empty() || norms.front() == 0.0) return {};
  std::size_t rank = 0;
  while (rank < norms.size() && norms[rank] > kRankTolerance * norms.front()) ++rank;
  norms.resize(rank);
  return norms;
}

}  // namespace polarform
