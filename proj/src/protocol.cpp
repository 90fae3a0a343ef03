#include "spinchain/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "spinchain/errors.hpp"

namespace spinchain {

double angle_value(PulseAngle a) {
  return a == PulseAngle::half_pi ? std::numbers::pi / 2.0 : std::numbers::pi;
}

Pulse make_pulse(double rabi, double frequency, double phase, PulseAngle angle,
                 std::optional<int> resonant_spin) {
  if (!std::isfinite(rabi) || rabi <= 0.0) {
    throw InputError("pulse Rabi frequency must be positive and finite");
  }
  if (!std::isfinite(frequency) || !std::isfinite(phase)) {
    throw InputError("pulse frequency and phase must be finite");
  }
  Pulse p;
  p.rabi = rabi;
  p.frequency = frequency;
  p.phase = phase;
  p.angle = angle;
  p.duration = angle_value(angle) / rabi;
  p.resonant_spin = resonant_spin;
  return p;
}

double PulseSequence::total_duration() const {
  double t = 0.0;
  for (const auto& p : pulses) t += p.duration;
  return t;
}

namespace {

// Two transition frequencies are treated as equal below this scale; they are
// produced by the same arithmetic, so this only absorbs rounding.
bool at_resonance(double detuning, double frequency) {
  return detuning <= 1e-9 * std::max(1.0, std::abs(frequency));
}

}  // namespace

PulseSequence build_remote_cn_sequence(const ChainParams& params, double rabi, double phase) {
  params.validate();
  const int L = params.length;
  if (L < 3) throw InputError("remote CONTROL-NOT protocol needs at least 3 spins");
  if (L > kMaxMaskLength) throw InputError("chain too long for basis masks");
  if (!std::isfinite(rabi) || rabi <= 0.0) throw InputError("Rabi frequency must be positive");
  if (!std::isfinite(phase)) throw InputError("phase must be finite");

  PulseSequence seq;
  seq.params = params;
  if (rabi >= params.gradient) {
    seq.warnings.push_back("rabi frequency " + std::to_string(rabi) +
                           " is not below the gradient " + std::to_string(params.gradient) +
                           "; single-spin addressing fails");
  }
  if (rabi >= 2.0 * params.coupling) {
    seq.warnings.push_back("rabi frequency is not below 2J; near-resonant errors are large");
  }

  const BasisState ground = BasisState::ground();
  BasisState branch = BasisState::ground();

  Pulse first = make_pulse(rabi, transition_frequency(branch, L - 1, params), phase,
                           PulseAngle::half_pi, L - 1);
  first.branch_note = "both";
  seq.pulses.push_back(first);
  branch = branch.toggled(L - 1);

  auto flip = [&](int k) {
    const double nu = transition_frequency(branch, k, params);
    const double ground_detuning = std::abs(transition_frequency(ground, k, params) - nu);
    // Ground-branch detunings are Ising shifts, i.e. whole multiples of 2J.
    const long multiple = std::lround(ground_detuning / (2.0 * params.coupling));
    Pulse p = make_pulse(rabi * static_cast<double>(std::max(1L, multiple)), nu, phase,
                         PulseAngle::pi, k);
    p.branch_note = branch.bit(k) ? "excited:unflip" : "excited:flip";
    seq.pulses.push_back(p);
    branch = branch.toggled(k);
  };

  flip(L - 2);
  for (int k = L - 3; k >= 0; --k) {
    flip(k);
    flip(k + 1);
  }

  if (branch != basis_from_spins({L - 1, 0})) {
    throw Error("internal: protocol did not end in |10...01>");
  }
  return seq;
}

DetuningProfile detuning_profile(const PulseSequence& seq, BasisState branch) {
  const ChainParams& params = seq.params;
  branch.check(params.length);
  DetuningProfile out;
  int index = 0;
  for (const auto& pulse : seq.pulses) {
    ++index;
    if (!pulse.resonant_spin) {
      throw InputError("pulse " + std::to_string(index) + " carries no resonant spin");
    }
    const int k = *pulse.resonant_spin;
    const double delta = std::abs(transition_frequency(branch, k, params) - pulse.frequency);
    out.entries.push_back({index, k, delta});
    if (pulse.angle == PulseAngle::pi && at_resonance(delta, pulse.frequency)) {
      branch = branch.toggled(k);
    }
  }
  out.final_branch = branch;
  return out;
}

void write_sequence_table(std::ostream& os, const PulseSequence& seq) {
  os << "# index spin rabi frequency phase duration angle\n";
  char line[256];
  int index = 0;
  for (const auto& p : seq.pulses) {
    ++index;
    std::snprintf(line, sizeof line, "%3d %3d %.17e %.17e %.17e %.17e %s\n", index,
                  p.resonant_spin.value_or(-1), p.rabi, p.frequency, p.phase, p.duration,
                  p.angle == PulseAngle::half_pi ? "pi/2" : "pi");
    os << line;
  }
}

}  // namespace spinchain
