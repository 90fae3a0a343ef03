#include "spinchain/generator.hpp"

#include <algorithm>
#include <cmath>

#include "spinchain/errors.hpp"

namespace spinchain {

RotatingGenerator::RotatingGenerator(const ChainParams& params, double drive_frequency,
                                     double rabi)
    : length_(params.length), rabi_(rabi) {
  params.validate();
  if (length_ > kMaxStateLength) {
    throw InputError("state vectors support at most " + std::to_string(kMaxStateLength) +
                     " spins");
  }
  if (!std::isfinite(drive_frequency) || !std::isfinite(rabi) || rabi < 0.0) {
    throw InputError("generator needs a finite frequency and non-negative Rabi frequency");
  }
  const std::size_t n = std::size_t{1} << length_;
  diagonal_.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    diagonal_[p] = rotating_diagonal(BasisState{p}, drive_frequency, params);
  }
}

void RotatingGenerator::apply(std::span<const Complex> in, std::span<Complex> out) const {
  const std::size_t n = diagonal_.size();
  const double off = off_diagonal();
  for (std::size_t p = 0; p < n; ++p) out[p] = diagonal_[p] * in[p];
  for (int k = 0; k < length_; ++k) {
    const std::size_t stride = std::size_t{1} << k;
    for (std::size_t base = 0; base < n; base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; ++i) {
        out[i] += off * in[i + stride];
        out[i + stride] += off * in[i];
      }
    }
  }
}

std::pair<double, double> RotatingGenerator::spectral_bounds() const {
  const auto [lo, hi] = std::minmax_element(diagonal_.begin(), diagonal_.end());
  const double radius = length_ * std::abs(off_diagonal());
  return {*lo - radius, *hi + radius};
}

}  // namespace spinchain
