#pragma once

// State-vector propagation through rectangular pulses.
//
// During pulse n the lab-frame amplitude of basis state p is
//   C_p(t) = A_p(t) exp(-i chi_p t + i xi_p),
//   chi_p = -(nu_n / 2) S_p,  xi_p = (phi_n / 2) S_p,
// with t the global time. In that frame the generator is time independent
// (see RotatingGenerator), so each pulse is one exponential action.

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "spinchain/chain.hpp"
#include "spinchain/generator.hpp"
#include "spinchain/protocol.hpp"

namespace spinchain {

struct Frame {
  double frequency = 0.0;
  double phase = 0.0;
};

class StateVector {
 public:
  // Basis state |initial> of an L-spin chain, in the given frame at time 0.
  StateVector(int length, BasisState initial, Frame frame = {});
  // Takes ownership of 2^L amplitudes. Throws InputError on size mismatch.
  StateVector(int length, std::vector<Complex> amplitudes, Frame frame = {}, double time = 0.0);

  int length() const { return length_; }
  std::size_t dimension() const { return amplitudes_.size(); }

  std::span<const Complex> amplitudes() const { return amplitudes_; }
  std::span<Complex> amplitudes() { return amplitudes_; }
  Complex amplitude(BasisState p) const;
  double probability(BasisState p) const;
  double norm() const;

  const Frame& frame() const { return frame_; }
  void set_frame(Frame f) { frame_ = f; }
  double time() const { return time_; }
  void advance_time(double dt) { time_ += dt; }

 private:
  int length_;
  std::vector<Complex> amplitudes_;
  Frame frame_;
  double time_ = 0.0;
};

struct ExactOptions {
  double tolerance = 1e-10;  // 2-norm error bound per pulse
  // Budget of generator applications per pulse.
  std::size_t max_applications = 200'000'000;
};

// exp(-i H tau) applied by a Chebyshev expansion of the matrix-free generator.
// The truncation error bound is rigorous (Bessel tail). Throws
// ConvergenceError when the budget cannot meet the tolerance and
// NumericalError on non-finite output.
StateVector propagate_pulse_exact(StateVector state, const Pulse& pulse,
                                  const ChainParams& params, const ExactOptions& opts = {});

// 2x2 block approximation: only the resonant spin of the pulse is driven;
// each pair (p, p ^ bit k) evolves under its closed-form two-level propagator.
// A pulse without a resonant spin tag is assigned the spin whose bare
// frequency omega_k is closest to nu.
StateVector propagate_pulse_blocked(StateVector state, const Pulse& pulse,
                                    const ChainParams& params);

// Multiplies each amplitude by the phase that keeps the lab-frame amplitude
// continuous when the frame switches to that of `next` at the state's time.
StateVector frame_rejoin(StateVector state, const Frame& next);
StateVector frame_rejoin(StateVector state, const Pulse& next);

enum class Method { exact, blocked };

// Starts from |initial> in the first pulse's frame at t = 0 and applies every
// pulse back to back.
StateVector run_sequence(BasisState initial, const PulseSequence& seq, Method method,
                         const ExactOptions& opts = {});

// Reference propagator for small chains (L <= 6): builds the dense generator
// from Kronecker products of Pauli matrices and exponentiates it through a
// full symmetric eigendecomposition.
StateVector dense_oracle_propagate(StateVector state, const Pulse& pulse,
                                   const ChainParams& params);

inline constexpr int kMaxOracleLength = 6;

// One line per basis state: bits (spin L-1 first), re, im, probability;
// sorted by descending probability, ties by mask. States below
// min_probability are skipped.
void write_state_dump(std::ostream& os, const StateVector& state, double min_probability = 0.0);

}  // namespace spinchain
