#include "polarform/channel.hpp"

#include <cmath>
#include <string>

#include "polarform/errors.hpp"

namespace polarform {
namespace {

constexpr double kHermitianTol = 1e-12;

void require_unit_interval(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw InvalidParameter(std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
  }
}

void require_correlation(Complex nu, const char* name) {
  if (!std::isfinite(nu.real()) || !std::isfinite(nu.imag()) || std::abs(nu) > 1.0) {
    throw InvalidParameter(std::string(name) + " must satisfy |nu| <= 1");
  }
}

PolarizedChannel sandwich(const PolarizedChannel& p, const Mat2& left, const Mat2& right) {
  PolarizedChannel out(p.m_rx(), p.n_tx());
  for (std::size_t m = 0; m < p.m_rx(); ++m)
    for (std::size_t n = 0; n < p.n_tx(); ++n) out.block(m, n) = left * p.block(m, n) * right;
  return out;
}

}  // namespace

void ChannelParams::validate() const {
  if (m_rx < 1) throw InvalidParameter("m_rx must be at least 1");
  if (n_tx < 1) throw InvalidParameter("n_tx must be at least 1");
  require_unit_interval(chi, "chi");
  require_unit_interval(mu_t, "mu_t");
  require_unit_interval(mu_r, "mu_r");
  require_correlation(nu_t, "nu_t");
  require_correlation(nu_r, "nu_r");
}

PolarizedChannel::PolarizedChannel(std::size_t m_rx, std::size_t n_tx)
    : m_rx_(m_rx), n_tx_(n_tx), blocks_(m_rx * n_tx) {}

PolarizedChannel::PolarizedChannel(std::size_t m_rx, std::size_t n_tx, std::vector<Mat2> blocks)
    : m_rx_(m_rx), n_tx_(n_tx), blocks_(std::move(blocks)) {
  if (blocks_.size() != m_rx_ * n_tx_) throw InvalidInput("PolarizedChannel: block count mismatch");
  for (const auto& b : blocks_) {
    if (!b.is_finite()) throw InvalidInput("PolarizedChannel: non-finite block entry");
  }
}

CMatrix PolarizedChannel::full_matrix() const {
  CMatrix out(2 * m_rx_, 2 * n_tx_);
  for (std::size_t m = 0; m < m_rx_; ++m) {
    for (std::size_t n = 0; n < n_tx_; ++n) {
      const Mat2& b = block(m, n);
      out(2 * m, 2 * n) = b.a00;
      out(2 * m, 2 * n + 1) = b.a01;
      out(2 * m + 1, 2 * n) = b.a10;
      out(2 * m + 1, 2 * n + 1) = b.a11;
    }
  }
  return out;
}

PolarizedChannel PolarizedChannel::reciprocal() const {
  PolarizedChannel out(n_tx_, m_rx_);
  for (std::size_t m = 0; m < m_rx_; ++m)
    for (std::size_t n = 0; n < n_tx_; ++n) out.block(n, m) = block(m, n).adjoint();
  return out;
}

Mat2 depolarization_mask(double chi) {
  const double s = 1.0 / std::sqrt(chi + 1.0);
  const double x = std::sqrt(chi) * s;
  return {s, x, x, s};
}

Mat2 xpi_coupling(double mu) {
  const double s = 1.0 / std::sqrt(mu + 1.0);
  const double x = std::sqrt(mu) * s;
  return {s, x, x, s};
}

Mat2 correlation_matrix(Complex nu) {
  const double s = 1.0 / std::sqrt(std::norm(nu) + 1.0);
  return {s, s * std::conj(nu), s * nu, s};
}

PolarizedChannel generate(const ChannelParams& params, GaussianSource& src) {
  params.validate();
  const Mat2 mask = depolarization_mask(params.chi);
  PolarizedChannel p(params.m_rx, params.n_tx);
  for (std::size_t m = 0; m < params.m_rx; ++m) {
    for (std::size_t n = 0; n < params.n_tx; ++n) {
      Mat2& b = p.block(m, n);
      b.a00 = mask.a00 * src.next(1.0);
      b.a01 = mask.a01 * src.next(1.0);
      b.a10 = mask.a10 * src.next(1.0);
      b.a11 = mask.a11 * src.next(1.0);
    }
  }
  if (params.mu_t > 0.0 || params.mu_r > 0.0) p = apply_xpi(p, params.mu_t, params.mu_r);
  if (params.nu_t != Complex{} || params.nu_r != Complex{}) {
    p = apply_correlation(p, params.nu_t, params.nu_r);
  }
  return p;
}

PolarizedChannel apply_xpi(const PolarizedChannel& p, double mu_t, double mu_r) {
  require_unit_interval(mu_t, "mu_t");
  require_unit_interval(mu_r, "mu_r");
  return sandwich(p, psd_sqrt_2x2(xpi_coupling(mu_r)), psd_sqrt_2x2(xpi_coupling(mu_t)));
}

PolarizedChannel apply_correlation(const PolarizedChannel& p, Complex nu_t, Complex nu_r) {
  require_correlation(nu_t, "nu_t");
  require_correlation(nu_r, "nu_r");
  return sandwich(p, psd_sqrt_2x2(correlation_matrix(nu_r)),
                  psd_sqrt_2x2(correlation_matrix(nu_t)));
}

Mat2 psd_sqrt_2x2(const Mat2& w) {
  if (!w.is_finite()) throw InvalidInput("psd_sqrt_2x2: non-finite entry");
  const double scale = std::max(1.0, std::sqrt(std::norm(w.a00) + std::norm(w.a01) +
                                               std::norm(w.a10) + std::norm(w.a11)));
  const double tol = kHermitianTol * scale;
  if (std::abs(w.a00.imag()) > tol || std::abs(w.a11.imag()) > tol ||
      std::abs(w.a01 - std::conj(w.a10)) > tol) {
    throw InvalidInput("psd_sqrt_2x2: matrix is not Hermitian");
  }
  const double a = w.a00.real();
  const double d = w.a11.real();
  const Complex c = 0.5 * (w.a10 + std::conj(w.a01));
  const double tr = a + d;
  const double det = a * d - std::norm(c);
  const double disc = std::sqrt(std::max(0.0, 0.25 * (a - d) * (a - d) + std::norm(c)));
  if (0.5 * tr - disc < -tol) throw InvalidInput("psd_sqrt_2x2: matrix is indefinite");

  // Cayley-Hamilton: for PSD W with s = sqrt(det W) and t = sqrt(tr W + 2 s),
  // sqrt(W) = (W + s I) / t.
  const double s = std::sqrt(std::max(0.0, det));
  const double t2 = tr + 2.0 * s;
  if (t2 <= 0.0) return {};
  const double t = std::sqrt(t2);
  return {(a + s) / t, std::conj(c) / t, c / t, (d + s) / t};
}

CMatrix psd_sqrt_2x2(const CMatrix& w) { return to_cmatrix(psd_sqrt_2x2(to_mat2(w))); }

}  // namespace polarform
