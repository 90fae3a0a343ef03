#pragma once

// Static description of an Ising-coupled spin-1/2 chain in a field gradient.
//
// Conventions (hbar = 1, all frequencies angular):
//   H0 = -sum_k omega_k I^z_k - 2J sum_{k=0}^{L-2} I^z_k I^z_{k+1}
//   omega_k = omega0 + k * gradient
// A basis state is an L-bit mask; bit k set means spin k is in |1>, for which
// sigma_k = -1. Bit k clear means |0>, sigma_k = +1.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace spinchain {

// Masks are stored in 64 bits; the exact evolver has a much lower limit.
inline constexpr int kMaxMaskLength = 63;

struct ChainParams {
  int length = 10;
  double coupling = 1.0;    // J
  double gradient = 100.0;  // frequency step between neighbouring spins
  double omega0 = 0.0;      // frequency of spin 0

  double larmor(int k) const { return omega0 + k * gradient; }

  // 2J / gradient. Perturbative estimates assume this is small.
  double validity_ratio() const { return 2.0 * coupling / gradient; }

  // Throws InputError unless length >= 1, coupling > 0, gradient > 0 and all
  // values are finite.
  void validate() const;
};

class BasisState {
 public:
  constexpr BasisState() = default;
  constexpr explicit BasisState(std::uint64_t bits) : bits_(bits) {}

  static constexpr BasisState ground() { return BasisState{}; }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool bit(int k) const { return ((bits_ >> k) & 1u) != 0; }
  constexpr int sigma(int k) const { return bit(k) ? -1 : 1; }
  constexpr BasisState toggled(int k) const {
    return BasisState{bits_ ^ (std::uint64_t{1} << k)};
  }
  constexpr BasisState with_bit(int k, bool value) const {
    const std::uint64_t m = std::uint64_t{1} << k;
    return BasisState{value ? (bits_ | m) : (bits_ & ~m)};
  }

  // Throws InputError if the mask does not fit an L-spin chain.
  void check(int length) const;

  friend constexpr bool operator==(BasisState, BasisState) = default;

 private:
  std::uint64_t bits_ = 0;
};

// Mask with exactly the listed spins set.
BasisState basis_from_spins(std::initializer_list<int> spins);

// S_p = sum_k sigma_k = L - 2 popcount(p).
int spin_sum(BasisState p, int length);

// Binary string with spin L-1 leftmost.
std::string to_binary(BasisState p, int length);

// Diagonal energy E_p of H0 (open chain).
double energy(BasisState p, const ChainParams& params);

// Frequency of the |0> -> |1> flip of spin k with the other spins as in p:
// omega_k + J (sigma_{k-1} + sigma_{k+1}); a missing neighbour contributes 0.
// Equals E(p with bit k set) - E(p with bit k clear).
double transition_frequency(BasisState p, int k, const ChainParams& params);

// The L states reached by a single spin flip, in ascending spin order.
std::vector<BasisState> flip_neighbors(BasisState p, int length);

// Diagonal element of the rotating-frame generator for drive frequency nu:
// E_p + (nu/2) S_p, evaluated as -1/2 sum (omega_k - nu) sigma_k + Ising term
// so that a large omega0 cancels before rounding.
double rotating_diagonal(BasisState p, double drive_frequency, const ChainParams& params);

}  // namespace spinchain
