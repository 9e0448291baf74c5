#include <cmath>

#include "polarform/errors.hpp"
#include "polarform/polarforming.hpp"

namespace polarform {

WaterFillResult water_fill(std::span<const double> singular_values, double p_total, double noise) {
  if (singular_values.empty()) throw InvalidInput("water_fill: no singular values");
  if (!(singular_values.front() > 0.0)) throw InvalidInput("water_fill: largest singular value must be positive");
  for (std::size_t s = 1; s < singular_values.size(); ++s) {
    if (!(singular_values[s] >= 0.0) || singular_values[s] > singular_values[s - 1]) {
      throw InvalidInput("water_fill: singular values must be non-negative and descending");
    }
  }
  if (!(p_total > 0.0)) throw InvalidParameter("water_fill: total power must be positive");
  if (!(noise > 0.0)) throw InvalidParameter("water_fill: noise power must be positive");

  const std::size_t total = singular_values.size();
  // Inverse gains noise / lambda^2; zero singular values never activate.
  std::vector<double> floor(total);
  std::size_t active = 0;
  for (std::size_t s = 0; s < total; ++s) {
    const double l2 = singular_values[s] * singular_values[s];
    floor[s] = l2 > 0.0 ? noise / l2 : INFINITY;
    if (l2 > 0.0) active = s + 1;
  }

  // Activate everything, solve for the level, drop the weakest stream while
  // it would receive non-positive power.
  double level = 0.0;
  while (true) {
    double sum = p_total;
    for (std::size_t s = 0; s < active; ++s) sum += floor[s];
    level = sum / static_cast<double>(active);
    if (active == 1 || level - floor[active - 1] > 0.0) break;
    --active;
  }

  WaterFillResult out;
  out.powers.assign(total, 0.0);
  out.water_level = level;
  out.inactive_count = total - active;
  for (std::size_t s = 0; s < active; ++s) {
    out.powers[s] = level - floor[s];
    out.capacity_bits += std::log2(1.0 + out.powers[s] / floor[s]);
  }
  return out;
}

}  // namespace polarform
