#pragma once

// Benchmark antenna schemes evaluated on the same polarized channel:
// dual-polarized antennas (DPA), switchable PRAs (SPRA), polarization-agile
// antennas (PAA), and fixed circular (CPA) / linear (LPA) polarization.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "polarform/channel.hpp"
#include "polarform/polarforming.hpp"

namespace polarform {

enum class SchemeId : std::uint8_t { kPolarforming, kDpa, kSpra, kPaa, kCpa, kLpa };

std::string_view to_string(SchemeId id) noexcept;
/// Accepts the canonical upper-case tag. Returns nullopt when unknown.
std::optional<SchemeId> parse_scheme(std::string_view tag) noexcept;

/// Transmit vector normalized to unit power; receive vector unnormalized.
struct PolarizationVectorPair {
  Vec2 p_tx;
  Vec2 p_rx;
};

/// Left-handed circular at both ends.
PolarizationVectorPair cpa_pair();
/// Vertical at both ends.
PolarizationVectorPair lpa_pair();

/// The full 2M x 2N channel with 2M receive chains, each with noise `noise`.
double dpa_capacity(const PolarizedChannel& p, double p_total, double noise);

/// Same fixed pair at every antenna. Throws InvalidInput if |p_tx| != 1.
double fpa_rate(const PolarizedChannel& p, const PolarizationVectorPair& pair, double p_total,
                double noise);

enum class SpraSearch { kAuto, kExhaustive, kCoordinateAscent };

/// Per-antenna state: 0 = left-handed circular, 1 = right-handed circular.
struct SpraResult {
  std::vector<std::uint8_t> tx_states;
  std::vector<std::uint8_t> rx_states;
  double capacity_bits = 0.0;
};

inline constexpr std::size_t kSpraExhaustiveLimit = 12;

/// kAuto enumerates all 2^(M+N) states when M + N <= 12, otherwise runs
/// coordinate ascent from all-LHCP. With `fixed`, that end is held at the
/// given vector and only the other end switches.
SpraResult spra_optimize(const PolarizedChannel& p, double p_total, double noise,
                         SpraSearch search = SpraSearch::kAuto,
                         const std::optional<FixedEnd>& fixed = std::nullopt);

struct PaaResult {
  std::vector<double> tx_angles;  // alpha_n in [0, pi)
  std::vector<double> rx_angles;  // beta_m in [0, pi)
  double capacity_bits = 0.0;
  std::size_t iterations = 0;
};

/// argmax over beta of [cos b, sin b] Re(W) [cos b, sin b]^T, in [0, pi).
double paa_angle_argmax(const Mat2& w);

/// Alternating closed-form angle updates from alpha = beta = 0. Stops on a
/// relative capacity increase below epsilon (keeping the previous iterate)
/// or after max_iterations.
PaaResult paa_optimize(const PolarizedChannel& p, double p_total, double noise,
                       const std::optional<FixedEnd>& fixed = std::nullopt,
                       double epsilon = 1e-3, std::size_t max_iterations = 20);

/// Rate of `scheme` on `p`, optionally with one end held fixed. The
/// polarforming scheme dispatches to the single-sided closed form when an
/// end is fixed, and to the alternating optimizers otherwise.
double scheme_rate(SchemeId scheme, const PolarizedChannel& p, double snr_linear,
                   const std::optional<FixedEnd>& fixed = std::nullopt);

}  // namespace polarform
