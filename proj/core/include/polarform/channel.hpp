#pragma once

// Polarized Rayleigh channel realizations: each transmit/receive antenna
// pair is a 2x2 block P_mn = Psi(chi) .* H_iid, optionally followed by
// antenna cross-polar leakage (XPI) and polarized correlation.

#include <cstddef>
#include <vector>

#include "polarform/matkit.hpp"

namespace polarform {

struct ChannelParams {
  std::size_t m_rx = 1;
  std::size_t n_tx = 1;
  double chi = 0.2;   // inverse XPD
  double mu_t = 0.0;  // inverse XPI, transmit
  double mu_r = 0.0;  // inverse XPI, receive
  Complex nu_t{};     // polarized correlation coefficient, transmit
  Complex nu_r{};     // polarized correlation coefficient, receive

  /// Throws InvalidParameter naming the first violated bound.
  void validate() const;
};

/// M x N grid of 2x2 blocks; block(m, n) couples transmit antenna n to
/// receive antenna m. Rows of a block index the receive V/H element, columns
/// the transmit V/H element.
class PolarizedChannel {
 public:
  PolarizedChannel() = default;
  PolarizedChannel(std::size_t m_rx, std::size_t n_tx);
  PolarizedChannel(std::size_t m_rx, std::size_t n_tx, std::vector<Mat2> blocks);

  std::size_t m_rx() const noexcept { return m_rx_; }
  std::size_t n_tx() const noexcept { return n_tx_; }

  Mat2& block(std::size_t m, std::size_t n) { return blocks_[m * n_tx_ + n]; }
  const Mat2& block(std::size_t m, std::size_t n) const { return blocks_[m * n_tx_ + n]; }
  const std::vector<Mat2>& blocks() const noexcept { return blocks_; }

  /// The full 2M x 2N matrix P.
  CMatrix full_matrix() const;

  /// Channel with every block replaced by its conjugate transpose and the
  /// antenna roles swapped (reverse link).
  PolarizedChannel reciprocal() const;

 private:
  std::size_t m_rx_ = 0;
  std::size_t n_tx_ = 0;
  std::vector<Mat2> blocks_;
};

/// Depolarization mask (1/sqrt(chi+1)) [[1, sqrt(chi)], [sqrt(chi), 1]].
Mat2 depolarization_mask(double chi);

/// XPI coupling matrix (1/sqrt(mu+1)) [[1, sqrt(mu)], [sqrt(mu), 1]].
Mat2 xpi_coupling(double mu);

/// Correlation matrix (1/sqrt(|nu|^2+1)) [[1, conj(nu)], [nu, 1]].
Mat2 correlation_matrix(Complex nu);

/// Draws one realization: base blocks, then XPI (if mu > 0), then
/// correlation (if nu != 0).
PolarizedChannel generate(const ChannelParams& params, GaussianSource& src);

/// Blocks become X_r^{1/2} P_mn X_t^{1/2}.
PolarizedChannel apply_xpi(const PolarizedChannel& p, double mu_t, double mu_r);

/// Blocks become C_r^{1/2} P_mn C_t^{1/2}.
PolarizedChannel apply_correlation(const PolarizedChannel& p, Complex nu_t, Complex nu_r);

/// Hermitian PSD square root of a 2x2 matrix. Throws InvalidInput when w is
/// not Hermitian (1e-12) or has an eigenvalue below -1e-12.
Mat2 psd_sqrt_2x2(const Mat2& w);
CMatrix psd_sqrt_2x2(const CMatrix& w);

}  // namespace polarform
