#pragma once

// Analytic error budget of the remote CONTROL-NOT protocol.
//
// Two error channels are modelled:
//   near-resonant  - a pi pulse detuned by Delta from a transition of the
//                    other branch excites it with probability epsilon;
//   non-resonant   - a pulse addressing spin k_n flips spin k' with
//                    probability (Omega / (2 |k_n - k'| gradient))^2.
// mu_k sums the latter over all k' != k. The gate success probability is a
// product of (1 - mu - epsilon) factors, one per pulse and branch.

#include <array>
#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "spinchain/chain.hpp"

namespace spinchain {

// (Omega / lambda)^2 sin^2(lambda tau / 2), lambda = sqrt(Delta^2 + Omega^2).
double epsilon(double rabi, double detuning, double duration);

// Rabi frequency Delta / sqrt(4k^2 - 1): a pi pulse of this amplitude,
// detuned by Delta, performs exactly k full rotations on the detuned
// transition, so epsilon vanishes.
double two_pi_k_rabi(double detuning, int k);

// Uniform per-pulse near-resonant error: epsilon(Omega, 2J, pi / Omega).
double default_epsilon(double rabi, double coupling);

// Probability of flipping spin `other` while driving spin `resonant`.
double p_nonres(double rabi, int resonant_spin, int other_spin, double gradient);

// Sum of p_nonres over every other spin of an L-spin chain.
double mu(int resonant_spin, double rabi, double gradient, int length);

struct ErrorBudget {
  int length = 0;
  double rabi = 0.0;
  double gradient = 0.0;
  double coupling = 0.0;
  std::vector<double> mu;  // mu[k] for k = 0 .. L-1
  double epsilon = 0.0;
  double p_success = 1.0;
  double p_unwanted = 0.0;
  double validity_ratio = 0.0;  // 2J / gradient
  // Change in p_unwanted if the ground-free term used the pulse-target
  // multiset (mu_{L-1} once, mu_0 once) instead of mu_0 twice.
  double multiset_delta = 0.0;

  double mu_end() const { return mu.empty() ? 0.0 : mu.back(); }
};

// Gate success estimate for the 2L-2 pulse protocol:
//   P = 1/2 (1-mu_{L-1}) (1-mu_{L-2}-eps) (1-4mu_{L-2}-eps) (1-mu_0-eps)
//           prod_{i=1}^{L-3} (1-mu_i-eps)^2
//     + 1/2 (1-mu_{L-2}) (1-4mu_{L-2}) prod_{i=0}^{L-3} (1-mu_i)^2
// The mu are computed with the base Rabi frequency; the 4 mu_{L-2} factors
// carry the doubled amplitude of the fourth pulse. p_unwanted = 1 - P is
// accumulated in log space so it keeps full relative precision for long
// chains. Needs L >= 4; throws ValidityError if any factor is negative.
ErrorBudget gate_success_estimate(int length, double rabi, double gradient, double coupling,
                                  std::optional<double> eps = std::nullopt);

// key=value lines; mu_<k> for every spin.
void write_budget(std::ostream& os, const ErrorBudget& budget);

// ---- First-order perturbed eigenvectors of the blocked generator ----------

struct Component {
  BasisState state;
  std::complex<double> amplitude;
};

// Eigenvector of one 2x2 block (p, p ^ bit k) of the rotating-frame
// generator, together with its eigenvalue.
struct BlockEigenstate {
  std::array<Component, 2> components;
  double energy = 0.0;
};

// Coupling v_qp between the state being corrected and an eigenstate of
// another block.
struct OutsideCoupling {
  BlockEigenstate state;
  double coupling = 0.0;
};

// Both eigenstates of the block containing p for a pulse (nu, Omega) that
// addresses spin k; the first has the lower energy.
std::array<BlockEigenstate, 2> block_eigenstates(BasisState p, int resonant_spin,
                                                 double drive_frequency, double rabi,
                                                 const ChainParams& params);

// psi_q = psi0_q + sum_p v_qp / (E_q - E_p) psi0_p.
// Components of equal basis states are merged; order follows first
// appearance. Throws SingularityError naming the state whose denominator
// vanishes.
std::vector<Component> perturbed_eigenvector(const BlockEigenstate& unperturbed,
                                             std::span<const OutsideCoupling> couplings);

// Block eigenstate that contains |q> with the larger weight, corrected to
// first order by the drive on every non-resonant spin.
std::vector<Component> perturbed_block_state(BasisState q, int resonant_spin,
                                             double drive_frequency, double rabi,
                                             const ChainParams& params);

// Small-mixing form of the near-resonant eigenstate:
// [1 - Omega^2 / (8 Delta^2)] |p> + (Omega / (2 Delta)) |p'>.
std::array<double, 2> near_resonant_weights(double rabi, double detuning);

}  // namespace spinchain
