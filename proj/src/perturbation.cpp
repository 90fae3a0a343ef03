#include "spinchain/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <ostream>

#include "spinchain/errors.hpp"

namespace spinchain {

double epsilon(double rabi, double detuning, double duration) {
  if (!(rabi > 0.0) || !std::isfinite(rabi)) throw InputError("epsilon: Rabi frequency must be positive");
  if (!(duration > 0.0) || !std::isfinite(duration)) throw InputError("epsilon: duration must be positive");
  if (!std::isfinite(detuning)) throw InputError("epsilon: detuning must be finite");
  const double lambda = std::hypot(detuning, rabi);
  const double s = std::sin(0.5 * lambda * duration);
  const double ratio = rabi / lambda;
  return ratio * ratio * s * s;
}

double two_pi_k_rabi(double detuning, int k) {
  if (k < 1) throw InputError("two_pi_k_rabi: k must be a positive integer");
  if (!(detuning > 0.0) || !std::isfinite(detuning)) {
    throw InputError("two_pi_k_rabi: detuning must be positive");
  }
  const double kk = static_cast<double>(k);
  return detuning / std::sqrt(4.0 * kk * kk - 1.0);
}

double default_epsilon(double rabi, double coupling) {
  return epsilon(rabi, 2.0 * coupling, std::numbers::pi / rabi);
}

double p_nonres(double rabi, int resonant_spin, int other_spin, double gradient) {
  if (other_spin == resonant_spin) {
    throw InputError("p_nonres: spin " + std::to_string(other_spin) + " is the resonant spin");
  }
  if (!(gradient > 0.0)) throw InputError("p_nonres: gradient must be positive");
  const double distance = std::abs(resonant_spin - other_spin);
  const double x = rabi / (2.0 * distance * gradient);
  return x * x;
}

double mu(int resonant_spin, double rabi, double gradient, int length) {
  if (length < 1) throw InputError("mu: chain length must be positive");
  if (resonant_spin < 0 || resonant_spin >= length) {
    throw InputError("mu: resonant spin out of range");
  }
  double sum = 0.0;
  for (int other = 0; other < length; ++other) {
    if (other != resonant_spin) sum += p_nonres(rabi, resonant_spin, other, gradient);
  }
  return sum;
}

namespace {

// Accumulates log of a product of (1 - x) factors.
class LogProduct {
 public:
  void times(double x, int power = 1) {
    const double factor = 1.0 - x;
    if (factor < 0.0) {
      throw ValidityError("gate estimate factor 1 - " + std::to_string(x) +
                              " is negative; parameters are outside the perturbative regime",
                          factor);
    }
    log_ += power * std::log1p(-x);
  }
  // 1 - product, accurate when the product is close to 1.
  double complement() const { return -std::expm1(log_); }

 private:
  double log_ = 0.0;
};

}  // namespace

ErrorBudget gate_success_estimate(int length, double rabi, double gradient, double coupling,
                                  std::optional<double> eps) {
  if (length < 4) throw InputError("gate estimate needs at least 4 spins");
  if (!(rabi > 0.0) || !std::isfinite(rabi)) throw InputError("Rabi frequency must be positive");
  if (!(gradient > 0.0) || !std::isfinite(gradient)) throw InputError("gradient must be positive");
  if (!(coupling > 0.0) || !std::isfinite(coupling)) throw InputError("coupling must be positive");

  ErrorBudget b;
  b.length = length;
  b.rabi = rabi;
  b.gradient = gradient;
  b.coupling = coupling;
  b.validity_ratio = 2.0 * coupling / gradient;
  b.epsilon = eps ? *eps : default_epsilon(rabi, coupling);
  if (!(b.epsilon >= 0.0 && b.epsilon <= 1.0)) throw InputError("epsilon must lie in [0, 1]");

  b.mu.resize(static_cast<std::size_t>(length));
  for (int k = 0; k < length; ++k) b.mu[static_cast<std::size_t>(k)] = mu(k, rabi, gradient, length);

  const auto m = [&](int k) { return b.mu[static_cast<std::size_t>(k)]; };
  const int L = length;
  const double e = b.epsilon;

  LogProduct ground;
  ground.times(m(L - 1));
  ground.times(m(L - 2) + e);
  ground.times(4.0 * m(L - 2) + e);
  ground.times(m(0) + e);
  for (int i = 1; i <= L - 3; ++i) ground.times(m(i) + e, 2);

  LogProduct excited;
  excited.times(m(L - 2));
  excited.times(4.0 * m(L - 2));
  for (int i = 0; i <= L - 3; ++i) excited.times(m(i), 2);

  b.p_unwanted = 0.5 * ground.complement() + 0.5 * excited.complement();
  b.p_success = 1.0 - b.p_unwanted;

  LogProduct targets;
  targets.times(m(L - 1));
  targets.times(m(L - 2));
  targets.times(4.0 * m(L - 2));
  targets.times(m(0));
  for (int i = 1; i <= L - 3; ++i) targets.times(m(i), 2);
  b.multiset_delta = 0.5 * (targets.complement() - excited.complement());
  return b;
}

void write_budget(std::ostream& os, const ErrorBudget& b) {
  char line[128];
  auto kv = [&](const char* key, double v) {
    std::snprintf(line, sizeof line, "%s=%.17e\n", key, v);
    os << line;
  };
  os << "length=" << b.length << '\n';
  kv("rabi", b.rabi);
  kv("gradient", b.gradient);
  kv("coupling", b.coupling);
  kv("epsilon", b.epsilon);
  kv("validity_ratio", b.validity_ratio);
  kv("p_success", b.p_success);
  kv("p_unwanted", b.p_unwanted);
  kv("mu_end", b.mu_end());
  kv("multiset_delta", b.multiset_delta);
  for (std::size_t k = 0; k < b.mu.size(); ++k) {
    std::snprintf(line, sizeof line, "mu_%zu=%.17e\n", k, b.mu[k]);
    os << line;
  }
}

std::array<BlockEigenstate, 2> block_eigenstates(BasisState p, int resonant_spin,
                                                 double drive_frequency, double rabi,
                                                 const ChainParams& params) {
  params.validate();
  if (resonant_spin < 0 || resonant_spin >= params.length) {
    throw InputError("resonant spin out of range");
  }
  const BasisState lo_state = p.with_bit(resonant_spin, false);
  const BasisState hi_state = p.with_bit(resonant_spin, true);
  const double a = rotating_diagonal(lo_state, drive_frequency, params);
  const double c = rotating_diagonal(hi_state, drive_frequency, params);
  const double off = -0.5 * rabi;

  // Rotation that diagonalizes [[a, off], [off, c]].
  const double theta = 0.5 * std::atan2(2.0 * off, a - c);
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  BlockEigenstate first{{Component{lo_state, cs}, Component{hi_state, sn}},
                        a * cs * cs + 2.0 * off * cs * sn + c * sn * sn};
  BlockEigenstate second{{Component{lo_state, -sn}, Component{hi_state, cs}},
                         a * sn * sn - 2.0 * off * cs * sn + c * cs * cs};
  if (second.energy < first.energy) std::swap(first, second);
  return {first, second};
}

std::vector<Component> perturbed_eigenvector(const BlockEigenstate& unperturbed,
                                             std::span<const OutsideCoupling> couplings) {
  std::vector<Component> out(unperturbed.components.begin(), unperturbed.components.end());
  auto add = [&](BasisState s, std::complex<double> amp) {
    for (auto& c : out) {
      if (c.state == s) {
        c.amplitude += amp;
        return;
      }
    }
    out.push_back({s, amp});
  };
  for (const auto& oc : couplings) {
    if (oc.coupling == 0.0) continue;
    const double denom = unperturbed.energy - oc.state.energy;
    const double scale = std::max({1.0, std::abs(unperturbed.energy), std::abs(oc.state.energy)});
    if (std::abs(denom) <= 1e-14 * scale) {
      throw SingularityError("perturbed_eigenvector: vanishing energy denominator for state " +
                             std::to_string(oc.state.components[0].state.bits()));
    }
    const double weight = oc.coupling / denom;
    for (const auto& c : oc.state.components) add(c.state, weight * c.amplitude);
  }
  return out;
}

std::vector<Component> perturbed_block_state(BasisState q, int resonant_spin,
                                             double drive_frequency, double rabi,
                                             const ChainParams& params) {
  q.check(params.length);
  const auto own = block_eigenstates(q, resonant_spin, drive_frequency, rabi, params);
  auto weight_on_q = [&](const BlockEigenstate& e) {
    for (const auto& c : e.components) {
      if (c.state == q) return std::norm(c.amplitude);
    }
    return 0.0;
  };
  const BlockEigenstate& psi0 = weight_on_q(own[1]) > weight_on_q(own[0]) ? own[1] : own[0];

  std::vector<OutsideCoupling> couplings;
  for (int other = 0; other < params.length; ++other) {
    if (other == resonant_spin) continue;
    const BasisState image = q.toggled(other);
    for (const auto& target : block_eigenstates(image, resonant_spin, drive_frequency, rabi, params)) {
      // <target| -Omega/2 sigma^x_other |psi0>
      double v = 0.0;
      for (const auto& src : psi0.components) {
        const BasisState flipped = src.state.toggled(other);
        for (const auto& dst : target.components) {
          if (dst.state == flipped) v += -0.5 * rabi * std::real(std::conj(dst.amplitude) * src.amplitude);
        }
      }
      couplings.push_back({target, v});
    }
  }
  return perturbed_eigenvector(psi0, couplings);
}

std::array<double, 2> near_resonant_weights(double rabi, double detuning) {
  if (!(detuning != 0.0)) throw InputError("near-resonant form needs a non-zero detuning");
  const double r = rabi / detuning;
  return {1.0 - r * r / 8.0, r / 2.0};
}

}  // namespace spinchain
