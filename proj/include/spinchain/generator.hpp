#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "spinchain/chain.hpp"

namespace spinchain {

using Complex = std::complex<double>;

// Largest chain for which 2^L amplitude vectors are allocated.
inline constexpr int kMaxStateLength = 26;

// Matrix-free rotating-frame generator of one pulse:
//   diagonal    rotating_diagonal(p, nu)
//   off-diagonal -rabi/2 between every pair of states one spin flip apart.
// The generator is real symmetric.
class RotatingGenerator {
 public:
  RotatingGenerator(const ChainParams& params, double drive_frequency, double rabi);

  int length() const { return length_; }
  std::size_t dimension() const { return diagonal_.size(); }
  std::span<const double> diagonal() const { return diagonal_; }
  double off_diagonal() const { return -0.5 * rabi_; }

  // out = H * in. The spans must not alias.
  void apply(std::span<const Complex> in, std::span<Complex> out) const;

  // Gershgorin interval containing the spectrum.
  std::pair<double, double> spectral_bounds() const;

 private:
  int length_;
  double rabi_;
  std::vector<double> diagonal_;
};

}  // namespace spinchain
