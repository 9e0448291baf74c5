#include <cmath>

#include "polarform/errors.hpp"
#include "polarform/matkit.hpp"

namespace polarform {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

GaussianSource::GaussianSource(std::uint64_t master_seed)
    : master_seed_(master_seed), engine_(mix64(master_seed)) {}

GaussianSource GaussianSource::child(std::uint64_t master_seed, std::uint64_t stream_index) {
  GaussianSource src(master_seed);
  src.engine_.seed(mix64(mix64(master_seed) ^ mix64(stream_index + 0x632be59bd9b4e019ULL)));
  return src;
}

Complex GaussianSource::next(double variance) {
  const double scale = std::sqrt(variance / 2.0);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {scale * re, scale * im};
}

CMatrix sample_cscg(GaussianSource& src, std::size_t rows, std::size_t cols, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw InvalidParameter("sample_cscg: variance must be positive");
  }
  CMatrix out(rows, cols);
  for (auto& z : out.entries()) z = src.next(variance);
  return out;
}

}  // namespace polarform
