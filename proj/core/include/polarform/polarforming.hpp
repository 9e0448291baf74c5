#pragma once

// Polarforming: per-antenna phase shifters between the V and H elements of
// each antenna, optimized jointly with the transmit covariance.
//
// Transmit antenna n radiates with f(theta_n) = [1, e^{j theta_n}]^T / sqrt(2),
// receive antenna m combines with g(phi_m) = [1, e^{j phi_m}]^T, and the
// effective M x N channel is h_mn = g(phi_m)^H P_mn f(theta_n).

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "polarform/channel.hpp"
#include "polarform/matkit.hpp"

namespace polarform {

/// Transmit/receive phase-shift vectors. Phases are kept in [0, 2pi).
class PhaseConfig {
 public:
  PhaseConfig() = default;
  PhaseConfig(std::vector<double> theta, std::vector<double> phi);

  /// All-zero phases for an M x N link.
  static PhaseConfig zeros(std::size_t m_rx, std::size_t n_tx);

  const std::vector<double>& theta() const noexcept { return theta_; }
  const std::vector<double>& phi() const noexcept { return phi_; }

  void set_theta(std::size_t n, double radians) { theta_.at(n) = wrap_phase(radians); }
  void set_phi(std::size_t m, double radians) { phi_.at(m) = wrap_phase(radians); }

  friend bool operator==(const PhaseConfig&, const PhaseConfig&) = default;

 private:
  std::vector<double> theta_;  // N transmit phases
  std::vector<double> phi_;    // M receive phases
};

Vec2 pfv_tx(double theta);
Vec2 pfv_rx(double phi);

/// M x N effective channel seen by the RF chains.
struct EffectiveChannel {
  CMatrix h;
};

EffectiveChannel effective_channel(const PolarizedChannel& p, const PhaseConfig& cfg);

/// Effective channel for arbitrary per-antenna polarization vectors:
/// h_mn = rx[m]^H P_mn tx[n]. Shared by the fixed-polarization baselines.
EffectiveChannel effective_channel(const PolarizedChannel& p, std::span<const Vec2> tx,
                                   std::span<const Vec2> rx);

/// phi* = angle(b2) - angle(b1) in [0, 2pi); maximizes |g(phi)^H b|^2.
double siso_optimal_phase(const Vec2& b);

/// argmax over psi of p(psi)^H W p(psi), p(psi) = [1, e^{j psi}]^T, for a
/// Hermitian 2x2 W: psi* = angle([W]_21). Throws InvalidInput if W is not
/// Hermitian within 1e-10.
double phase_argmax(const Mat2& w);

/// p(psi)^H W p(psi) for Hermitian W.
double phase_objective(const Mat2& w, double psi);

enum class Side { kTransmit, kReceive };

/// One end held at a fixed polarization vector while the other end's
/// phases are optimized.
struct FixedEnd {
  Side side;  // which end is fixed
  Vec2 vector;
};

/// Closed-form single-sided polarforming. With a fixed single-antenna
/// receiver (M = 1, side = kReceive) returns the optimal transmit phases;
/// with a fixed single-antenna transmitter (N = 1, side = kTransmit) the
/// optimal receive phases. The fixed end's phase vector is left empty.
PhaseConfig optimize_single_sided(const PolarizedChannel& p, const FixedEnd& fixed);

/// Water-filling over eigenmodes with gains lambda_s^2 / noise.
struct WaterFillResult {
  std::vector<double> powers;  // p_s, one per singular value
  double water_level = 0.0;    // 1 / p0
  std::size_t inactive_count = 0;
  double capacity_bits = 0.0;

  double p0() const { return 1.0 / water_level; }
};

/// `singular_values` sorted descending with the first strictly positive.
/// Throws InvalidInput for empty/all-zero values, InvalidParameter for
/// non-positive power or noise.
WaterFillResult water_fill(std::span<const double> singular_values, double p_total, double noise);

struct CapacityResult {
  double capacity_bits = 0.0;
  CMatrix covariance;  // N x N optimal Q
  std::vector<double> singular_values;
  std::optional<WaterFillResult> water_fill;  // empty for a zero channel
};

/// Capacity-achieving covariance Q = V diag(p) V^H and its rate.
/// A zero channel yields capacity 0 and Q = 0.
CapacityResult mimo_capacity(const EffectiveChannel& h, double p_total, double noise);

/// Water-filling capacity alone (no covariance assembly).
double capacity_bits(const CMatrix& h, double p_total, double noise);

/// S log2( Tr(H H^H) / (S p0 noise) + S_bar / S ), S = wf.powers.size().
double capacity_upper_bound(const EffectiveChannel& h, double noise, const WaterFillResult& wf);

struct OptimizeOptions {
  double epsilon = 1e-3;         // relative capacity increase threshold
  std::size_t max_iterations = 20;
  // Called with Tr(H H^H) after every single-phase update (and once at the
  // initial point). Used to audit coordinate-ascent monotonicity.
  std::function<void(double)> on_coordinate_update;
};

struct OptimizeResult {
  PhaseConfig config;
  CMatrix covariance;  // Q, N x N
  double rate_bits = 0.0;
  // trace[0] is the all-zero-phase rate; trace[i] the rate after iteration i
  // (accepted iterates only, so trace.back() == rate_bits).
  std::vector<double> trace;
  std::size_t iterations = 0;  // iterations executed, including a rejected one
};

/// Alternating optimization for min(M, N) == 1 with MRT (MISO) or full
/// power (SIMO). SIMO runs the MISO recursion on the reciprocal channel.
/// Throws UnsupportedConfiguration when both M > 1 and N > 1.
OptimizeResult optimize_miso_simo(const PolarizedChannel& p, double snr_linear,
                                  const OptimizeOptions& opts = {});

/// Alternating maximization of Tr(H H^H) with per-iteration water-filling;
/// on insufficient capacity increase, returns the previous iterate.
OptimizeResult optimize_mimo(const PolarizedChannel& p, double snr_linear,
                             const OptimizeOptions& opts = {});

/// optimize_miso_simo when min(M, N) == 1, otherwise optimize_mimo.
OptimizeResult optimize_polarforming(const PolarizedChannel& p, double snr_linear,
                                     const OptimizeOptions& opts = {});

/// Relative increase (curr - prev) / max(prev, 1e-12).
double relative_increase(double prev, double curr) noexcept;

}  // namespace polarform
