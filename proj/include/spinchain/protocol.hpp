#pragma once

// Rectangular rf pulses and the 2L-2 pulse sequence that maps
// (|0...0> + i|10...0>)/sqrt2 onto an entangled state of the two end spins.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spinchain/chain.hpp"

namespace spinchain {

enum class PulseAngle { half_pi, pi };

double angle_value(PulseAngle a);

struct Pulse {
  double rabi = 0.0;       // Omega_n
  double frequency = 0.0;  // nu_n (rotating-frame frequency; may be <= 0 when omega0 is small)
  double phase = 0.0;      // phi_n
  double duration = 0.0;   // tau_n = angle / Omega_n
  PulseAngle angle = PulseAngle::pi;
  std::optional<int> resonant_spin;
  std::string branch_note;

  double nominal_angle() const { return angle_value(angle); }
};

// Builds a rectangular pulse with duration angle / rabi. Throws InputError
// for non-positive or non-finite rabi and non-finite frequency/phase.
Pulse make_pulse(double rabi, double frequency, double phase, PulseAngle angle,
                 std::optional<int> resonant_spin = std::nullopt);

struct PulseSequence {
  ChainParams params;
  std::vector<Pulse> pulses;
  // Non-fatal validity diagnostics, e.g. rabi >= gradient.
  std::vector<std::string> warnings;

  double total_duration() const;
};

// Remote CONTROL-NOT protocol between spins L-1 and 0.
//
// A pi/2 pulse on spin L-1 is followed by pi pulses tuned to the branch that
// starts in |10...0>: flip L-2, then for k = L-3 down to 0 flip k and unflip
// k+1. Every pi pulse is resonant on that branch and detuned by 2J (or 4J for
// the unflip of spin L-2) on the ground branch; its Rabi frequency is scaled
// by detuning / 2J so that all pulses share the same near-resonant error.
//
// Requires L >= 3 and L <= kMaxMaskLength.
PulseSequence build_remote_cn_sequence(const ChainParams& params, double rabi, double phase = 0.0);

struct DetuningEntry {
  int index = 0;  // 1-based pulse number
  int spin = 0;
  double detuning = 0.0;
};

struct DetuningProfile {
  std::vector<DetuningEntry> entries;
  BasisState final_branch;
};

// Replays the sequence on a classical branch mask. Each pi pulse at exact
// resonance toggles its spin; detuned pulses and pi/2 pulses leave the mask
// unchanged.
DetuningProfile detuning_profile(const PulseSequence& seq, BasisState branch);

// Whitespace-aligned table: index spin rabi frequency phase duration angle.
void write_sequence_table(std::ostream& os, const PulseSequence& seq);

}  // namespace spinchain
