#include "polarform/polarforming.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polarform/errors.hpp"

namespace polarform {
namespace {

constexpr double kPhaseKernelHermitianTol = 1e-10;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// p^H W p with p = [1, e^{j psi}]: a + d + 2 Re(c e^{-j psi}), c = [W]_21.
double quadratic_form(const Mat2& w, const Vec2& v) {
  const Vec2 wv = w * v;
  return inner(v, wv).real();
}

std::vector<Vec2> tx_vectors(const std::vector<double>& theta) {
  std::vector<Vec2> out;
  out.reserve(theta.size());
  for (double t : theta) out.push_back(pfv_tx(t));
  return out;
}

std::vector<Vec2> rx_vectors(const std::vector<double>& phi) {
  std::vector<Vec2> out;
  out.reserve(phi.size());
  for (double f : phi) out.push_back(pfv_rx(f));
  return out;
}

double gram(const PolarizedChannel& p, const PhaseConfig& cfg) {
  return gram_trace(effective_channel(p, cfg).h);
}

// A_m = sum_n P_mn f_n f_n^H P_mn^H
Mat2 receive_form(const PolarizedChannel& p, std::size_t m, std::span<const Vec2> tx) {
  Mat2 acc{};
  for (std::size_t n = 0; n < p.n_tx(); ++n) acc = acc + outer(p.block(m, n) * tx[n]);
  return acc;
}

// B_n = sum_m P_mn^H g_m g_m^H P_mn
Mat2 transmit_form(const PolarizedChannel& p, std::size_t n, std::span<const Vec2> rx) {
  Mat2 acc{};
  for (std::size_t m = 0; m < p.m_rx(); ++m) acc = acc + outer(p.block(m, n).adjoint() * rx[m]);
  return acc;
}

CMatrix mrt_covariance(const CMatrix& h_row, double p_total) {
  // h_row is 1 x N; Q = h h^H / ||h||^2 * P_t with h = h_row^H.
  const double g = gram_trace(h_row);
  const std::size_t n = h_row.cols();
  CMatrix q(n, n);
  if (g == 0.0) return q;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q(i, j) = std::conj(h_row(0, i)) * h_row(0, j) * (p_total / g);
  return q;
}

double single_stream_rate(const CMatrix& h, double snr_linear) {
  return std::log2(1.0 + snr_linear * gram_trace(h));
}

void notify(const OptimizeOptions& opts, const PolarizedChannel& p, const PhaseConfig& cfg) {
  if (opts.on_coordinate_update) opts.on_coordinate_update(gram(p, cfg));
}

// Single-stream alternation on an M = 1 channel.
OptimizeResult optimize_miso(const PolarizedChannel& p, double snr_linear, const OptimizeOptions& opts) {
  const std::size_t n_tx = p.n_tx();
  PhaseConfig cfg = PhaseConfig::zeros(1, n_tx);
  notify(opts, p, cfg);

  OptimizeResult res;
  double rate = single_stream_rate(effective_channel(p, cfg).h, snr_linear);
  res.trace.push_back(rate);

  for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
    res.iterations = it;
    const std::vector<Vec2> tx = tx_vectors(cfg.theta());
    cfg.set_phi(0, phase_argmax(receive_form(p, 0, tx)));
    notify(opts, p, cfg);

    const Vec2 g = pfv_rx(cfg.phi()[0]);
    for (std::size_t n = 0; n < n_tx; ++n) {
      cfg.set_theta(n, phase_argmax(outer(p.block(0, n).adjoint() * g)));
      notify(opts, p, cfg);
    }

    const double next = single_stream_rate(effective_channel(p, cfg).h, snr_linear);
    res.trace.push_back(next);
    const bool converged = relative_increase(rate, next) < opts.epsilon;
    rate = next;
    if (converged) break;
  }

  const EffectiveChannel h = effective_channel(p, cfg);
  res.config = cfg;
  res.rate_bits = rate;
  res.covariance = mrt_covariance(h.h, snr_linear);
  return res;
}

}  // namespace

PhaseConfig::PhaseConfig(std::vector<double> theta, std::vector<double> phi)
    : theta_(std::move(theta)), phi_(std::move(phi)) {
  for (double& t : theta_) t = wrap_phase(t);
  for (double& f : phi_) f = wrap_phase(f);
}

PhaseConfig PhaseConfig::zeros(std::size_t m_rx, std::size_t n_tx) {
  return PhaseConfig(std::vector<double>(n_tx, 0.0), std::vector<double>(m_rx, 0.0));
}

Vec2 pfv_tx(double theta) {
  return {Complex(kInvSqrt2, 0.0), kInvSqrt2 * std::polar(1.0, wrap_phase(theta))};
}

Vec2 pfv_rx(double phi) { return {Complex(1.0, 0.0), std::polar(1.0, wrap_phase(phi))}; }

EffectiveChannel effective_channel(const PolarizedChannel& p, std::span<const Vec2> tx,
                                   std::span<const Vec2> rx) {
  if (tx.size() != p.n_tx() || rx.size() != p.m_rx()) {
    throw InvalidInput("effective_channel: polarization vector count does not match the channel");
  }
  CMatrix h(p.m_rx(), p.n_tx());
  for (std::size_t m = 0; m < p.m_rx(); ++m)
    for (std::size_t n = 0; n < p.n_tx(); ++n) h(m, n) = inner(rx[m], p.block(m, n) * tx[n]);
  return {std::move(h)};
}

EffectiveChannel effective_channel(const PolarizedChannel& p, const PhaseConfig& cfg) {
  if (cfg.theta().size() != p.n_tx() || cfg.phi().size() != p.m_rx()) {
    throw InvalidInput("effective_channel: phase configuration is " +
                       std::to_string(cfg.phi().size()) + "x" + std::to_string(cfg.theta().size()) +
                       ", channel is " + std::to_string(p.m_rx()) + "x" + std::to_string(p.n_tx()));
  }
  const std::vector<Vec2> tx = tx_vectors(cfg.theta());
  const std::vector<Vec2> rx = rx_vectors(cfg.phi());
  return effective_channel(p, tx, rx);
}

double siso_optimal_phase(const Vec2& b) { return wrap_phase(angle(b[1]) - angle(b[0])); }

double phase_argmax(const Mat2& w) {
  const double scale = std::max(1.0, std::sqrt(std::norm(w.a00) + std::norm(w.a01) +
                                               std::norm(w.a10) + std::norm(w.a11)));
  const double tol = kPhaseKernelHermitianTol * scale;
  if (!w.is_finite() || std::abs(w.a00.imag()) > tol || std::abs(w.a11.imag()) > tol ||
      std::abs(w.a01 - std::conj(w.a10)) > tol) {
    throw InvalidInput("phase_argmax: matrix is not Hermitian");
  }
  return angle(w.a10);
}

double phase_objective(const Mat2& w, double psi) { return quadratic_form(w, pfv_rx(psi)); }

PhaseConfig optimize_single_sided(const PolarizedChannel& p, const FixedEnd& fixed) {
  if (fixed.side == Side::kReceive) {
    if (p.m_rx() != 1) throw InvalidInput("optimize_single_sided: fixed receiver needs M = 1");
    std::vector<double> theta(p.n_tx());
    for (std::size_t n = 0; n < p.n_tx(); ++n) {
      theta[n] = phase_argmax(outer(p.block(0, n).adjoint() * fixed.vector));
    }
    return PhaseConfig(std::move(theta), {});
  }
  if (p.n_tx() != 1) throw InvalidInput("optimize_single_sided: fixed transmitter needs N = 1");
  std::vector<double> phi(p.m_rx());
  for (std::size_t m = 0; m < p.m_rx(); ++m) {
    phi[m] = phase_argmax(outer(p.block(m, 0) * fixed.vector));
  }
  return PhaseConfig({}, std::move(phi));
}

CapacityResult mimo_capacity(const EffectiveChannel& h, double p_total, double noise) {
  CapacityResult out;
  out.covariance = CMatrix(h.h.cols(), h.h.cols());
  const SvdResult dec = svd(h.h);
  if (dec.rank() == 0) return out;

  WaterFillResult wf = water_fill(dec.singular_values, p_total, noise);
  // Q = V diag(p) V^H
  const CMatrix& v = dec.right_vectors;
  for (std::size_t i = 0; i < v.rows(); ++i) {
    for (std::size_t j = 0; j < v.rows(); ++j) {
      Complex acc{};
      for (std::size_t s = 0; s < dec.rank(); ++s) acc += v(i, s) * wf.powers[s] * std::conj(v(j, s));
      out.covariance(i, j) = acc;
    }
  }
  out.capacity_bits = wf.capacity_bits;
  out.singular_values = dec.singular_values;
  out.water_fill = std::move(wf);
  return out;
}

double capacity_bits(const CMatrix& h, double p_total, double noise) {
  const std::vector<double> sv = singular_values(h);
  if (sv.empty()) return 0.0;
  return water_fill(sv, p_total, noise).capacity_bits;
}

double capacity_upper_bound(const EffectiveChannel& h, double noise, const WaterFillResult& wf) {
  const std::size_t streams = wf.powers.size();
  if (streams == 0 || !(wf.water_level > 0.0)) throw InvalidInput("capacity_upper_bound: empty water-filling result");
  if (!(noise > 0.0)) throw InvalidParameter("capacity_upper_bound: noise power must be positive");
  const double s = static_cast<double>(streams);
  const double energy = gram_trace(h.h);
  return s * std::log2(energy * wf.water_level / (s * noise) +
                       static_cast<double>(wf.inactive_count) / s);
}

double relative_increase(double prev, double curr) noexcept {
  return (curr - prev) / std::max(prev, 1e-12);
}

OptimizeResult optimize_miso_simo(const PolarizedChannel& p, double snr_linear, const OptimizeOptions& opts) {
  if (p.m_rx() > 1 && p.n_tx() > 1) {
    throw UnsupportedConfiguration("optimize_miso_simo: needs a single-antenna transmitter or receiver");
  }
  if (p.m_rx() == 1) return optimize_miso(p, snr_linear, opts);

  // SIMO: the MISO recursion on the reverse link, whose transmit phases are
  // our receive phases. |h| is unchanged entry by entry.
  OptimizeResult res = optimize_miso(p.reciprocal(), snr_linear, opts);
  res.config = PhaseConfig(res.config.phi(), res.config.theta());
  res.covariance = CMatrix{{Complex(snr_linear, 0.0)}};
  return res;
}

OptimizeResult optimize_mimo(const PolarizedChannel& p, double snr_linear, const OptimizeOptions& opts) {
  const std::size_t m_rx = p.m_rx();
  const std::size_t n_tx = p.n_tx();
  if (m_rx < 1 || n_tx < 1) throw InvalidInput("optimize_mimo: empty channel");

  PhaseConfig best = PhaseConfig::zeros(m_rx, n_tx);
  notify(opts, p, best);
  CapacityResult best_cap = mimo_capacity(effective_channel(p, best), snr_linear, 1.0);

  OptimizeResult res;
  res.trace.push_back(best_cap.capacity_bits);

  for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
    res.iterations = it;
    PhaseConfig cand = best;

    std::vector<Vec2> tx = tx_vectors(cand.theta());
    for (std::size_t m = 0; m < m_rx; ++m) {
      cand.set_phi(m, phase_argmax(receive_form(p, m, tx)));
      notify(opts, p, cand);
    }
    std::vector<Vec2> rx = rx_vectors(cand.phi());
    for (std::size_t n = 0; n < n_tx; ++n) {
      cand.set_theta(n, phase_argmax(transmit_form(p, n, rx)));
      notify(opts, p, cand);
    }

    CapacityResult cand_cap = mimo_capacity(effective_channel(p, cand), snr_linear, 1.0);
    if (relative_increase(best_cap.capacity_bits, cand_cap.capacity_bits) < opts.epsilon) break;
    best = std::move(cand);
    best_cap = std::move(cand_cap);
    res.trace.push_back(best_cap.capacity_bits);
  }

  res.config = std::move(best);
  res.rate_bits = best_cap.capacity_bits;
  res.covariance = std::move(best_cap.covariance);
  return res;
}

OptimizeResult optimize_polarforming(const PolarizedChannel& p, double snr_linear, const OptimizeOptions& opts) {
  if (p.m_rx() == 1 || p.n_tx() == 1) return optimize_miso_simo(p, snr_linear, opts);
  return optimize_mimo(p, snr_linear, opts);
}

}  // namespace polarform
