#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "polarform/errors.hpp"
#include "polarform/matkit.hpp"

using namespace polarform;

TEST_CASE("angle uses the zero convention and wraps into [0, 2pi)") {
  CHECK(angle(Complex{}) == 0.0);
  CHECK(angle({1.0, 0.0}) == 0.0);
  CHECK(angle({0.0, -1.0}) == doctest::Approx(1.5 * kPi));
  CHECK(wrap_phase(-kPi / 2) == doctest::Approx(1.5 * kPi));
  CHECK(wrap_phase(kTwoPi) == 0.0);
  CHECK(wrap_phase(5 * kTwoPi + 0.25) == doctest::Approx(0.25));
}

TEST_CASE("svd of identity and diagonal matrices") {
  auto id = svd(CMatrix::identity(2));
  REQUIRE(id.rank() == 2);
  CHECK(id.singular_values[0] == doctest::Approx(1.0));
  CHECK(id.singular_values[1] == doctest::Approx(1.0));

  const double d[] = {3.0, 4.0};
  auto s = singular_values(CMatrix::diagonal(d));
  REQUIRE(s.size() == 2);
  CHECK(s[0] == doctest::Approx(4.0));
  CHECK(s[1] == doctest::Approx(3.0));
}

TEST_CASE("svd reconstructs random tall, wide and square matrices") {
  for (auto [r, c] : {std::pair{3, 2}, {2, 3}, {4, 4}, {8, 5}, {1, 6}}) {
    for (int trial = 0; trial < 20; ++trial) {
      const CMatrix a = oracle::random_matrix(r, c);
      const SvdResult res = svd(a);
      CMatrix us = res.left_vectors;
      for (std::size_t i = 0; i < us.rows(); ++i) {
        for (std::size_t k = 0; k < res.rank(); ++k) us(i, k) *= res.singular_values[k];
      }
      const CMatrix back = us * res.right_vectors.adjoint();
      CHECK(oracle::max_abs_diff(back, a) <= 1e-10);

      // Orthonormal singular vectors, descending values.
      const CMatrix uhu = res.left_vectors.adjoint() * res.left_vectors;
      const CMatrix vhv = res.right_vectors.adjoint() * res.right_vectors;
      CHECK(oracle::max_abs_diff(uhu, CMatrix::identity(res.rank())) <= 1e-10);
      CHECK(oracle::max_abs_diff(vhv, CMatrix::identity(res.rank())) <= 1e-10);
      for (std::size_t k = 1; k < res.rank(); ++k) {
        CHECK(res.singular_values[k] <= res.singular_values[k - 1]);
      }
      const auto values = singular_values(a);
      REQUIRE(values.size() == res.rank());
      for (std::size_t k = 0; k < values.size(); ++k) {
        CHECK(values[k] == doctest::Approx(res.singular_values[k]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("svd truncates rank-deficient input") {
  CMatrix u = oracle::random_matrix(4, 1);
  CMatrix v = oracle::random_matrix(1, 3);
  const SvdResult res = svd(u * v);
  CHECK(res.rank() == 1);
  CHECK(res.left_vectors.cols() == 1);
  CHECK(res.right_vectors.rows() == 3);
  CHECK(svd(CMatrix(3, 2)).rank() == 0);
}

TEST_CASE("svd rejects empty and non-finite input") {
  CHECK_THROWS_AS(svd(CMatrix{}), InvalidInput);
  CMatrix bad(2, 2);
  bad(1, 0) = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(svd(bad), InvalidInput);
  CHECK_THROWS_AS(singular_values(bad), InvalidInput);
}

TEST_CASE("gram_trace equals the squared singular values") {
  CHECK(gram_trace(CMatrix::identity(2)) == doctest::Approx(2.0));
  CHECK(gram_trace(CMatrix(3, 3)) == 0.0);
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix a = oracle::random_matrix(4, 3);
    double sum = 0.0;
    for (double s : svd(a).singular_values) sum += s * s;
    CHECK(std::abs(gram_trace(a) - sum) <= 1e-10);
  }
  CMatrix bad(1, 1);
  bad(0, 0) = Complex(INFINITY, 0.0);
  CHECK_THROWS_AS(gram_trace(bad), InvalidInput);
}

TEST_CASE("CMatrix arithmetic") {
  const CMatrix a{{1.0, Complex(0, 1)}, {2.0, 3.0}};
  const CMatrix b{{0.0, 1.0}, {1.0, 0.0}};
  const CMatrix ab = a * b;
  CHECK(ab(0, 0) == Complex(0, 1));
  CHECK(ab(1, 1) == Complex(2, 0));
  CHECK(a.adjoint()(1, 0) == Complex(0, -1));
  CHECK((a + b - b) == a);
  CHECK(frobenius_norm(CMatrix::identity(4)) == doctest::Approx(2.0));
  CHECK(to_mat2(to_cmatrix(Mat2{1.0, 2.0, 3.0, 4.0})) == Mat2{1.0, 2.0, 3.0, 4.0});
}

TEST_CASE("GaussianSource is deterministic per seed and stream") {
  GaussianSource a(42), b(42);
  CHECK(sample_cscg(a, 2, 2, 1.0) == sample_cscg(b, 2, 2, 1.0));

  auto c1 = GaussianSource::child(42, 3);
  auto c2 = GaussianSource::child(42, 3);
  auto c3 = GaussianSource::child(42, 4);
  auto c4 = GaussianSource::child(43, 3);
  const Complex x1 = c1.next(1.0);
  CHECK(x1 == c2.next(1.0));
  CHECK(x1 != c3.next(1.0));
  CHECK(x1 != c4.next(1.0));
}

TEST_CASE("sample_cscg has the requested second moment") {
  GaussianSource src(7);
  const CMatrix s = sample_cscg(src, 1000, 100, 1.0);
  double power = 0.0;
  Complex mean{};
  for (Complex z : s.entries()) {
    power += std::norm(z);
    mean += z;
  }
  power /= 1e5;
  CHECK(power >= 0.99);
  CHECK(power <= 1.01);
  CHECK(std::abs(mean / 1e5) < 0.01);

  CHECK_THROWS_AS(sample_cscg(src, 2, 2, 0.0), InvalidParameter);
  CHECK_THROWS_AS(sample_cscg(src, 2, 2, -1.0), InvalidParameter);
}
