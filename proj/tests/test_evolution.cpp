#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "spinchain/detail/bessel.hpp"
#include "spinchain/errors.hpp"
#include "spinchain/evolution.hpp"
#include "spinchain/harness.hpp"
#include "spinchain/perturbation.hpp"

using namespace spinchain;

namespace {

double max_diff(const StateVector& a, const StateVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    m = std::max(m, std::abs(a.amplitudes()[i] - b.amplitudes()[i]));
  }
  return m;
}

StateVector random_state(int length, std::mt19937_64& rng, Frame frame = {}, double time = 0.0) {
  std::normal_distribution<double> g;
  std::vector<Complex> v(std::size_t{1} << length);
  double s = 0.0;
  for (auto& a : v) {
    a = {g(rng), g(rng)};
    s += std::norm(a);
  }
  for (auto& a : v) a /= std::sqrt(s);
  return StateVector(length, std::move(v), frame, time);
}

// Lab-frame amplitude C_p = A_p exp(i (nu/2) S_p t + i (phi/2) S_p).
Complex lab_amplitude(const StateVector& s, std::size_t p) {
  const double S = spin_sum(BasisState{p}, s.length());
  return s.amplitudes()[p] *
         std::polar(1.0, 0.5 * s.frame().frequency * S * s.time() + 0.5 * s.frame().phase * S);
}

}  // namespace

TEST_CASE("Bessel sequence against the standard library") {
  for (double x : {0.5, 3.0, 17.0, 150.0, 1999.0}) {
    const auto j = detail::bessel_j_sequence(x, 60);
    for (int k = 0; k < 60; ++k) {
      CHECK(j[static_cast<std::size_t>(k)] ==
            doctest::Approx(std::cyl_bessel_j(static_cast<double>(k), x)).epsilon(1e-9).scale(1e-12));
    }
  }
  CHECK(detail::bessel_j_sequence(0.0, 3)[0] == 1.0);
  CHECK_THROWS_AS(detail::bessel_j_sequence(-1.0, 3), InputError);
}

TEST_CASE("Chebyshev truncation bound") {
  const auto t = detail::chebyshev_truncation(100.0, 1e-12);
  CHECK(t.tail <= 1e-12);
  CHECK(t.order > 100);
  CHECK(t.order < 200);
  CHECK(t.coefficients.size() == static_cast<std::size_t>(t.order) + 1);
}

TEST_CASE("single spin follows the detuned Rabi formula") {
  const ChainParams c{1, 1.0, 1.0, 7.0};
  for (double detuning : {0.0, 0.3, 2.0}) {
    for (double rabi : {0.15, 0.4}) {
      Pulse p = make_pulse(rabi, 7.0 - detuning, 0.0, PulseAngle::pi, 0);
      p.duration = 3.7;
      const StateVector out = propagate_pulse_exact(StateVector(1, BasisState{}), p, c);
      const double expected = detuning == 0.0 ? std::pow(std::sin(0.5 * rabi * 3.7), 2)
                                              : epsilon(rabi, detuning, 3.7);
      CHECK(out.probability(BasisState{1}) == doctest::Approx(expected).epsilon(1e-10).scale(1e-12));
      const StateVector blocked = propagate_pulse_blocked(StateVector(1, BasisState{}), p, c);
      CHECK(max_diff(out, blocked) < 1e-10);
    }
  }
}

TEST_CASE("exact propagation matches the dense oracle") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int L = 2; L <= 5; ++L) {
    const ChainParams c{L, 1.0, 12.0, 3.0};
    for (int trial = 0; trial < 5; ++trial) {
      const int k = static_cast<int>(u(rng) * L);
      Pulse p = make_pulse(0.05 + u(rng), c.larmor(k) + 4.0 * (u(rng) - 0.5), 0.0, PulseAngle::pi, k);
      p.duration = 20.0 * u(rng);
      const StateVector in = random_state(L, rng);
      const StateVector a = propagate_pulse_exact(in, p, c);
      const StateVector b = dense_oracle_propagate(in, p, c);
      CHECK(max_diff(a, b) < 1e-9);
      CHECK(a.time() == doctest::Approx(p.duration));
    }
  }
}

TEST_CASE("long pulses are split into substeps") {
  const ChainParams c{3, 1.0, 400.0, 0.0};
  Pulse p = make_pulse(0.2, c.larmor(1), 0.0, PulseAngle::pi, 1);
  p.duration = 40.0;  // spectral radius * duration well above one expansion
  std::mt19937_64 rng(3);
  const StateVector in = random_state(3, rng);
  CHECK(max_diff(propagate_pulse_exact(in, p, c), dense_oracle_propagate(in, p, c)) < 1e-9);
}

TEST_CASE("full sequence: exact vs oracle with frame changes") {
  const ChainParams c{4, 1.0, 15.0, 0.0};
  const PulseSequence seq = build_remote_cn_sequence(c, 0.3, 0.4);
  StateVector ref(4, BasisState{}, Frame{seq.pulses[0].frequency, seq.pulses[0].phase});
  for (const auto& p : seq.pulses) ref = dense_oracle_propagate(frame_rejoin(ref, p), p, c);
  const StateVector exact = run_sequence(BasisState{}, seq, Method::exact);
  CHECK(max_diff(exact, ref) < 1e-8);
  CHECK(exact.norm() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("blocked propagation approaches exact for a large gradient") {
  const ChainParams c{4, 1.0, 2000.0, 0.0};
  const double rabi = two_pi_k_rabi(2.0, 3);
  const PulseSequence seq = build_remote_cn_sequence(c, rabi);
  const StateVector e = run_sequence(BasisState{}, seq, Method::exact);
  const StateVector b = run_sequence(BasisState{}, seq, Method::blocked);
  CHECK(std::abs(unwanted_probability(e) - unwanted_probability(b)) < 1e-6);
  // The split between the two wanted states still carries first-order
  // off-resonant shifts, of relative size ~ rabi / gradient.
  for (std::size_t i = 0; i < e.dimension(); ++i) {
    CHECK(std::abs(e.probability(BasisState{i}) - b.probability(BasisState{i})) < 5e-4);
  }
  CHECK(b.norm() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("ideal protocol creates the entangled end-spin state") {
  // 2pi k pulses and a huge gradient: only the intended transitions occur.
  const ChainParams c{5, 1.0, 1e6, 0.0};
  const PulseSequence seq = build_remote_cn_sequence(c, two_pi_k_rabi(2.0, 2));
  const StateVector s = run_sequence(BasisState{}, seq, Method::blocked);
  CHECK(s.probability(BasisState{}) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(s.probability(basis_from_spins({4, 0})) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("frame rejoin keeps the lab-frame amplitude") {
  std::mt19937_64 rng(11);
  const StateVector s = random_state(4, rng, Frame{3.0, 0.2}, 1.7);
  const StateVector r = frame_rejoin(s, Frame{-5.5, 1.1});
  for (std::size_t p = 0; p < s.dimension(); ++p) {
    CHECK(std::abs(lab_amplitude(s, p) - lab_amplitude(r, p)) < 1e-13);
    CHECK(std::abs(s.amplitudes()[p]) == doctest::Approx(std::abs(r.amplitudes()[p])).epsilon(1e-15));
  }
  CHECK(r.frame().frequency == -5.5);
  CHECK(r.time() == 1.7);
}

TEST_CASE("frame rejoin composes") {
  std::mt19937_64 rng(5);
  const StateVector s = random_state(3, rng, Frame{1.0, 0.0}, 4.2);
  const Frame b{2.5, 0.7}, c{-1.0, 0.3};
  const StateVector two = frame_rejoin(frame_rejoin(s, b), c);
  const StateVector one = frame_rejoin(s, c);
  CHECK(max_diff(two, one) < 1e-13);
  CHECK(max_diff(frame_rejoin(s, s.frame()), s) == 0.0);
}

TEST_CASE("evolution errors") {
  const ChainParams c{3, 1.0, 10.0, 0.0};
  const Pulse p = make_pulse(0.2, 10.0, 0.0, PulseAngle::pi, 1);
  CHECK_THROWS_AS(propagate_pulse_exact(StateVector(4, BasisState{}), p, c), InputError);
  CHECK_THROWS_AS(propagate_pulse_exact(StateVector(3, BasisState{}), p, c, ExactOptions{1e-10, 5}),
                  ConvergenceError);
  CHECK_THROWS_AS(propagate_pulse_exact(StateVector(3, BasisState{}), p, c, ExactOptions{0.0}),
                  InputError);
  CHECK_THROWS_AS(dense_oracle_propagate(StateVector(7, BasisState{}), p, ChainParams{7, 1, 10, 0}),
                  InputError);
  CHECK_THROWS_AS(StateVector(3, std::vector<Complex>(7)), InputError);
  CHECK_THROWS_AS(StateVector(3, BasisState{8}), InputError);
  CHECK_THROWS_AS(StateVector(27, BasisState{}), InputError);
  try {
    propagate_pulse_exact(StateVector(3, BasisState{}), p, c, ExactOptions{1e-10, 5});
  } catch (const ConvergenceError& e) {
    CHECK(e.achieved_residual() > 1e-10);
  }
}

TEST_CASE("state dump ordering") {
  std::vector<Complex> v{{0.0, 0.0}, {0.6, 0.0}, {0.0, 0.8}, {0.0, 0.0}};
  const StateVector s(2, std::move(v));
  std::ostringstream os;
  write_state_dump(os, s, 1e-3);
  std::istringstream is(os.str());
  std::string bits;
  double re = 0, im = 0, prob = 0;
  is >> bits >> re >> im >> prob;
  CHECK(bits == "10");
  CHECK(im == doctest::Approx(0.8));
  CHECK(prob == doctest::Approx(0.64));
  is >> bits >> re >> im >> prob;
  CHECK(bits == "01");
  CHECK_FALSE(static_cast<bool>(is >> bits));
}
