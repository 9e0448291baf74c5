#include "polarform/baselines.hpp"

#include <array>
#include <cmath>

#include "polarform/errors.hpp"

namespace polarform {
namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
constexpr Complex kJ{0.0, 1.0};

const std::array<Vec2, 2>& spra_tx_states() {
  static const std::array<Vec2, 2> states{Vec2{kInvSqrt2, kInvSqrt2 * kJ},
                                          Vec2{kInvSqrt2, -kInvSqrt2 * kJ}};
  return states;
}

const std::array<Vec2, 2>& spra_rx_states() {
  static const std::array<Vec2, 2> states{Vec2{1.0, kJ}, Vec2{1.0, -kJ}};
  return states;
}

Vec2 linear(double angle) { return {std::cos(angle), std::sin(angle)}; }

double wrap_half_turn(double radians) {
  double r = std::fmod(radians, kPi);
  if (r < 0.0) r += kPi;
  if (r >= kPi) r = 0.0;
  return r;
}

struct EndVectors {
  std::vector<Vec2> tx;
  std::vector<Vec2> rx;
};

// Holds the polarization vectors of both ends, with a fixed end (if any)
// broadcast to all its antennas.
EndVectors initial_vectors(const PolarizedChannel& p, const std::optional<FixedEnd>& fixed,
                           const Vec2& tx0, const Vec2& rx0) {
  EndVectors v{std::vector<Vec2>(p.n_tx(), tx0), std::vector<Vec2>(p.m_rx(), rx0)};
  if (fixed) {
    auto& target = fixed->side == Side::kTransmit ? v.tx : v.rx;
    for (auto& x : target) x = fixed->vector;
  }
  return v;
}

bool adapts(const std::optional<FixedEnd>& fixed, Side side) {
  return !fixed || fixed->side != side;
}

double rate_of(const PolarizedChannel& p, const EndVectors& v, double p_total, double noise) {
  return capacity_bits(effective_channel(p, v.tx, v.rx).h, p_total, noise);
}

struct SpraSearchState {
  const PolarizedChannel& p;
  double p_total;
  double noise;
  bool tx_adapts;
  bool rx_adapts;
  EndVectors vectors;
  std::vector<std::uint8_t> tx_states;
  std::vector<std::uint8_t> rx_states;

  // Antennas that switch, transmit first.
  std::size_t switch_count() const {
    return (tx_adapts ? p.n_tx() : 0) + (rx_adapts ? p.m_rx() : 0);
  }

  void set(std::size_t k, std::uint8_t state) {
    if (tx_adapts && k < p.n_tx()) {
      tx_states[k] = state;
      vectors.tx[k] = spra_tx_states()[state];
      return;
    }
    const std::size_t m = tx_adapts ? k - p.n_tx() : k;
    rx_states[m] = state;
    vectors.rx[m] = spra_rx_states()[state];
  }

  std::uint8_t get(std::size_t k) const {
    if (tx_adapts && k < p.n_tx()) return tx_states[k];
    return rx_states[tx_adapts ? k - p.n_tx() : k];
  }

  double rate() const { return rate_of(p, vectors, p_total, noise); }
};

SpraResult spra_exhaustive(SpraSearchState st) {
  const std::size_t k = st.switch_count();
  SpraResult best{st.tx_states, st.rx_states, -1.0};
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    for (std::size_t i = 0; i < k; ++i) st.set(i, static_cast<std::uint8_t>((mask >> i) & 1U));
    const double r = st.rate();
    if (r > best.capacity_bits) best = {st.tx_states, st.rx_states, r};
  }
  return best;
}

SpraResult spra_coordinate_ascent(SpraSearchState st) {
  constexpr int kMaxSweeps = 20;
  const std::size_t k = st.switch_count();
  double current = st.rate();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool flipped = false;
    for (std::size_t i = 0; i < k; ++i) {
      const std::uint8_t old = st.get(i);
      st.set(i, static_cast<std::uint8_t>(1U - old));
      const double r = st.rate();
      if (r > current) {
        current = r;
        flipped = true;
      } else {
        st.set(i, old);
      }
    }
    if (!flipped) break;
  }
  return {st.tx_states, st.rx_states, current};
}

}  // namespace

std::string_view to_string(SchemeId id) noexcept {
  switch (id) {
    case SchemeId::kPolarforming: return "POLARFORMING";
    case SchemeId::kDpa: return "DPA";
    case SchemeId::kSpra: return "SPRA";
    case SchemeId::kPaa: return "PAA";
    case SchemeId::kCpa: return "CPA";
    case SchemeId::kLpa: return "LPA";
  }
  return "UNKNOWN";
}

std::optional<SchemeId> parse_scheme(std::string_view tag) noexcept {
  for (SchemeId id : {SchemeId::kPolarforming, SchemeId::kDpa, SchemeId::kSpra, SchemeId::kPaa,
                      SchemeId::kCpa, SchemeId::kLpa}) {
    if (tag == to_string(id)) return id;
  }
  return std::nullopt;
}

PolarizationVectorPair cpa_pair() { return {spra_tx_states()[0], spra_rx_states()[0]}; }

PolarizationVectorPair lpa_pair() { return {Vec2{1.0, 0.0}, Vec2{1.0, 0.0}}; }

double dpa_capacity(const PolarizedChannel& p, double p_total, double noise) {
  return capacity_bits(p.full_matrix(), p_total, noise);
}

double fpa_rate(const PolarizedChannel& p, const PolarizationVectorPair& pair, double p_total,
                double noise) {
  if (std::abs(squared_norm(pair.p_tx) - 1.0) > 1e-12) {
    throw InvalidInput("fpa_rate: transmit polarization vector must have unit norm");
  }
  const EndVectors v{std::vector<Vec2>(p.n_tx(), pair.p_tx), std::vector<Vec2>(p.m_rx(), pair.p_rx)};
  return rate_of(p, v, p_total, noise);
}

SpraResult spra_optimize(const PolarizedChannel& p, double p_total, double noise, SpraSearch search,
                         const std::optional<FixedEnd>& fixed) {
  SpraSearchState st{p,
                     p_total,
                     noise,
                     adapts(fixed, Side::kTransmit),
                     adapts(fixed, Side::kReceive),
                     initial_vectors(p, fixed, spra_tx_states()[0], spra_rx_states()[0]),
                     std::vector<std::uint8_t>(p.n_tx(), 0),
                     std::vector<std::uint8_t>(p.m_rx(), 0)};
  if (search == SpraSearch::kAuto) {
    search = st.switch_count() <= kSpraExhaustiveLimit ? SpraSearch::kExhaustive
                                                       : SpraSearch::kCoordinateAscent;
  }
  return search == SpraSearch::kExhaustive ? spra_exhaustive(std::move(st))
                                           : spra_coordinate_ascent(std::move(st));
}

double paa_angle_argmax(const Mat2& w) {
  // [c, s] Re(W) [c, s]^T = (a+d)/2 + (a-d)/2 cos 2b + Re(w21) sin 2b
  const double a = w.a00.real();
  const double d = w.a11.real();
  const double c = 0.5 * (w.a10.real() + w.a01.real());
  return wrap_half_turn(0.5 * std::atan2(2.0 * c, a - d));
}

PaaResult paa_optimize(const PolarizedChannel& p, double p_total, double noise,
                       const std::optional<FixedEnd>& fixed, double epsilon,
                       std::size_t max_iterations) {
  const bool tx_adapts = adapts(fixed, Side::kTransmit);
  const bool rx_adapts = adapts(fixed, Side::kReceive);

  PaaResult best;
  best.tx_angles.assign(tx_adapts ? p.n_tx() : 0, 0.0);
  best.rx_angles.assign(rx_adapts ? p.m_rx() : 0, 0.0);
  EndVectors best_vectors = initial_vectors(p, fixed, linear(0.0), linear(0.0));
  best.capacity_bits = rate_of(p, best_vectors, p_total, noise);

  for (std::size_t it = 1; it <= max_iterations; ++it) {
    best.iterations = it;
    PaaResult cand = best;
    EndVectors v = best_vectors;
    if (rx_adapts) {
      for (std::size_t m = 0; m < p.m_rx(); ++m) {
        Mat2 form{};
        for (std::size_t n = 0; n < p.n_tx(); ++n) form = form + outer(p.block(m, n) * v.tx[n]);
        cand.rx_angles[m] = paa_angle_argmax(form);
        v.rx[m] = linear(cand.rx_angles[m]);
      }
    }
    if (tx_adapts) {
      for (std::size_t n = 0; n < p.n_tx(); ++n) {
        Mat2 form{};
        for (std::size_t m = 0; m < p.m_rx(); ++m) form = form + outer(p.block(m, n).adjoint() * v.rx[m]);
        cand.tx_angles[n] = paa_angle_argmax(form);
        v.tx[n] = linear(cand.tx_angles[n]);
      }
    }
    cand.capacity_bits = rate_of(p, v, p_total, noise);
    if (relative_increase(best.capacity_bits, cand.capacity_bits) < epsilon) break;
    best = std::move(cand);
    best_vectors = std::move(v);
  }
  return best;
}

double scheme_rate(SchemeId scheme, const PolarizedChannel& p, double snr_linear,
                   const std::optional<FixedEnd>& fixed) {
  constexpr double kNoise = 1.0;
  switch (scheme) {
    case SchemeId::kPolarforming: {
      if (!fixed) return optimize_polarforming(p, snr_linear).rate_bits;
      const PhaseConfig cfg = optimize_single_sided(p, *fixed);
      EndVectors v = initial_vectors(p, fixed, Vec2{}, Vec2{});
      if (fixed->side == Side::kReceive) {
        for (std::size_t n = 0; n < p.n_tx(); ++n) v.tx[n] = pfv_tx(cfg.theta()[n]);
      } else {
        for (std::size_t m = 0; m < p.m_rx(); ++m) v.rx[m] = pfv_rx(cfg.phi()[m]);
      }
      return rate_of(p, v, snr_linear, kNoise);
    }
    case SchemeId::kDpa:
      if (fixed) throw UnsupportedConfiguration("DPA has no single-sided variant");
      return dpa_capacity(p, snr_linear, kNoise);
    case SchemeId::kSpra:
      return spra_optimize(p, snr_linear, kNoise, SpraSearch::kAuto, fixed).capacity_bits;
    case SchemeId::kPaa:
      return paa_optimize(p, snr_linear, kNoise, fixed).capacity_bits;
    case SchemeId::kCpa:
    case SchemeId::kLpa: {
      const PolarizationVectorPair pair = scheme == SchemeId::kCpa ? cpa_pair() : lpa_pair();
      const EndVectors v = initial_vectors(p, fixed, pair.p_tx, pair.p_rx);
      return rate_of(p, v, snr_linear, kNoise);
    }
  }
  throw InvalidInput("scheme_rate: unknown scheme");
}

}  // namespace polarform
