#include "spinchain/evolution.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include "spinchain/detail/bessel.hpp"
#include "spinchain/errors.hpp"

namespace spinchain {

namespace {

std::size_t checked_dimension(int length) {
  if (length < 1 || length > kMaxStateLength) {
    throw InputError("state vectors support 1.." + std::to_string(kMaxStateLength) +
                     " spins, got " + std::to_string(length));
  }
  return std::size_t{1} << length;
}

void check_frame_params(const StateVector& state, const ChainParams& params) {
  params.validate();
  if (params.length != state.length()) {
    throw InputError("state has " + std::to_string(state.length()) + " spins but chain has " +
                     std::to_string(params.length));
  }
}

void check_finite(std::span<const Complex> v, const char* where) {
  for (const auto& a : v) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw NumericalError(std::string(where) + ": non-finite amplitude");
    }
  }
}

// Largest Bessel argument handled in one Chebyshev expansion. Longer pulses
// are split into equal substeps.
constexpr double kMaxChebyshevArgument = 2000.0;

}  // namespace

StateVector::StateVector(int length, BasisState initial, Frame frame)
    : length_(length), amplitudes_(checked_dimension(length)), frame_(frame) {
  initial.check(length);
  amplitudes_[initial.bits()] = 1.0;
}

StateVector::StateVector(int length, std::vector<Complex> amplitudes, Frame frame, double time)
    : length_(length), amplitudes_(std::move(amplitudes)), frame_(frame), time_(time) {
  if (amplitudes_.size() != checked_dimension(length)) {
    throw InputError("amplitude vector size does not match 2^L");
  }
}

Complex StateVector::amplitude(BasisState p) const {
  p.check(length_);
  return amplitudes_[p.bits()];
}

double StateVector::probability(BasisState p) const { return std::norm(amplitude(p)); }

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return std::sqrt(s);
}

StateVector propagate_pulse_exact(StateVector state, const Pulse& pulse,
                                  const ChainParams& params, const ExactOptions& opts) {
  check_frame_params(state, params);
  if (!(opts.tolerance > 0.0)) throw InputError("tolerance must be positive");
  if (!(pulse.duration >= 0.0) || !std::isfinite(pulse.duration)) {
    throw InputError("pulse duration must be finite and non-negative");
  }
  if (pulse.duration == 0.0) return state;

  const RotatingGenerator gen(params, pulse.frequency, pulse.rabi);
  const auto [lo, hi] = gen.spectral_bounds();
  const double center = 0.5 * (hi + lo);
  const double radius = std::max(0.5 * (hi - lo), 1e-300);

  const double total_arg = radius * pulse.duration;
  const auto steps =
      static_cast<std::size_t>(std::max(1.0, std::ceil(total_arg / kMaxChebyshevArgument)));
  const double dt = pulse.duration / static_cast<double>(steps);
  const double scale = std::max(1.0, state.norm());
  const double step_tol = opts.tolerance / (static_cast<double>(steps) * scale);

  const detail::ChebyshevTruncation trunc = detail::chebyshev_truncation(radius * dt, step_tol);
  const std::size_t applications = steps * static_cast<std::size_t>(trunc.order);
  if (trunc.tail > step_tol || applications > opts.max_applications) {
    const auto affordable = static_cast<int>(
        std::min<std::size_t>(opts.max_applications / steps, static_cast<std::size_t>(trunc.order)));
    const double achievable = detail::chebyshev_tail(radius * dt, affordable) *
                              static_cast<double>(steps) * scale;
    throw ConvergenceError("exact propagation needs " + std::to_string(applications) +
                               " generator applications (budget " +
                               std::to_string(opts.max_applications) + "), achievable error " +
                               std::to_string(achievable),
                           achievable);
  }

  // Scaled generator G = (H - center) / radius has spectrum in [-1, 1].
  const std::size_t n = gen.dimension();
  std::vector<double> diag2(n);
  for (std::size_t p = 0; p < n; ++p) diag2[p] = 2.0 * (gen.diagonal()[p] - center) / radius;
  const double off2 = 2.0 * gen.off_diagonal() / radius;
  const int L = gen.length();

  // prev <- 2 G cur - prev
  auto recur = [&](const Complex* cur, Complex* prev) {
    for (std::size_t p = 0; p < n; ++p) prev[p] = diag2[p] * cur[p] - prev[p];
    for (int k = 0; k < L; ++k) {
      const std::size_t stride = std::size_t{1} << k;
      for (std::size_t base = 0; base < n; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
          prev[i] += off2 * cur[i + stride];
          prev[i + stride] += off2 * cur[i];
        }
      }
    }
  };

  std::vector<Complex> t0(n), t1(n), acc(n);
  const Complex step_phase = std::polar(1.0, -center * dt);
  auto amps = state.amplitudes();
  for (std::size_t s = 0; s < steps; ++s) {
    std::copy(amps.begin(), amps.end(), t0.begin());
    const auto& c = trunc.coefficients;
    for (std::size_t p = 0; p < n; ++p) acc[p] = c[0] * t0[p];
    if (trunc.order >= 1) {
      // T_1 = G v, built as half of (2 G v - 0).
      std::fill(t1.begin(), t1.end(), Complex{});
      recur(t0.data(), t1.data());
      for (std::size_t p = 0; p < n; ++p) t1[p] *= 0.5;
      // Coefficient 2 (-i)^1 J_1
      const double c1 = 2.0 * c[1];
      for (std::size_t p = 0; p < n; ++p) acc[p] += Complex(c1 * t1[p].imag(), -c1 * t1[p].real());
    }
    Complex* prev = t0.data();
    Complex* cur = t1.data();
    for (int k = 2; k <= trunc.order; ++k) {
      recur(cur, prev);
      std::swap(prev, cur);
      const double ck = 2.0 * c[static_cast<std::size_t>(k)];
      // (-i)^k cycles through 1, -i, -1, i.
      switch (k & 3) {
        case 0:
          for (std::size_t p = 0; p < n; ++p) acc[p] += ck * cur[p];
          break;
        case 1:
          for (std::size_t p = 0; p < n; ++p) acc[p] += Complex(ck * cur[p].imag(), -ck * cur[p].real());
          break;
        case 2:
          for (std::size_t p = 0; p < n; ++p) acc[p] -= ck * cur[p];
          break;
        default:
          for (std::size_t p = 0; p < n; ++p) acc[p] += Complex(-ck * cur[p].imag(), ck * cur[p].real());
          break;
      }
    }
    for (std::size_t p = 0; p < n; ++p) amps[p] = step_phase * acc[p];
  }
  check_finite(amps, "propagate_pulse_exact");
  state.advance_time(pulse.duration);
  return state;
}

namespace {

int nearest_spin(double frequency, const ChainParams& params) {
  int best = 0;
  for (int k = 1; k < params.length; ++k) {
    if (std::abs(frequency - params.larmor(k)) < std::abs(frequency - params.larmor(best))) best = k;
  }
  return best;
}

}  // namespace

StateVector propagate_pulse_blocked(StateVector state, const Pulse& pulse,
                                    const ChainParams& params) {
  check_frame_params(state, params);
  const int k = pulse.resonant_spin.value_or(nearest_spin(pulse.frequency, params));
  if (k < 0 || k >= params.length) throw InputError("resonant spin out of range");

  const std::size_t n = state.dimension();
  const std::size_t bit = std::size_t{1} << k;
  const double tau = pulse.duration;
  const double omega = pulse.rabi;
  auto amps = state.amplitudes();
  for (std::size_t p = 0; p < n; ++p) {
    if ((p & bit) != 0) continue;
    const std::size_t q = p | bit;
    const double d0 = rotating_diagonal(BasisState{p}, pulse.frequency, params);
    const double d1 = rotating_diagonal(BasisState{q}, pulse.frequency, params);
    // H = m + (delta/2) sz - (omega/2) sx on (p, q)
    const double mean = 0.5 * (d0 + d1);
    const double delta = d0 - d1;
    const double lambda = std::hypot(delta, omega);
    const double c = std::cos(0.5 * lambda * tau);
    const double s = lambda > 0.0 ? std::sin(0.5 * lambda * tau) / lambda : 0.5 * tau;
    const Complex common = std::polar(1.0, -mean * tau);
    const Complex upp = common * Complex(c, -s * delta);
    const Complex uqq = common * Complex(c, s * delta);
    const Complex upq = common * Complex(0.0, s * omega);
    const Complex ap = amps[p];
    const Complex aq = amps[q];
    amps[p] = upp * ap + upq * aq;
    amps[q] = upq * ap + uqq * aq;
  }
  check_finite(amps, "propagate_pulse_blocked");
  state.advance_time(tau);
  return state;
}

StateVector frame_rejoin(StateVector state, const Frame& next) {
  const Frame current = state.frame();
  const double dnu = next.frequency - current.frequency;
  const double dphi = next.phase - current.phase;
  if (dnu == 0.0 && dphi == 0.0) {
    state.set_frame(next);
    return state;
  }
  // exp(i (chi' - chi) t - i (xi' - xi)) with chi = -(nu/2) S, xi = (phi/2) S
  const double per_unit_s = -0.5 * dnu * state.time() - 0.5 * dphi;
  const int L = state.length();
  // S_p takes L + 1 values; tabulate the phase factors.
  std::vector<Complex> factor(static_cast<std::size_t>(L) + 1);
  for (int ones = 0; ones <= L; ++ones) {
    factor[static_cast<std::size_t>(ones)] = std::polar(1.0, per_unit_s * (L - 2 * ones));
  }
  auto amps = state.amplitudes();
  for (std::size_t p = 0; p < amps.size(); ++p) {
    amps[p] *= factor[static_cast<std::size_t>(std::popcount(p))];
  }
  state.set_frame(next);
  return state;
}

StateVector frame_rejoin(StateVector state, const Pulse& next) {
  return frame_rejoin(std::move(state), Frame{next.frequency, next.phase});
}

StateVector run_sequence(BasisState initial, const PulseSequence& seq, Method method,
                         const ExactOptions& opts) {
  const ChainParams& params = seq.params;
  params.validate();
  Frame start;
  if (!seq.pulses.empty()) start = Frame{seq.pulses.front().frequency, seq.pulses.front().phase};
  StateVector state(params.length, initial, start);
  for (const auto& pulse : seq.pulses) {
    state = frame_rejoin(std::move(state), pulse);
    state = method == Method::exact ? propagate_pulse_exact(std::move(state), pulse, params, opts)
                                    : propagate_pulse_blocked(std::move(state), pulse, params);
  }
  return state;
}

void write_state_dump(std::ostream& os, const StateVector& state, double min_probability) {
  const auto amps = state.amplitudes();
  std::vector<std::size_t> order(amps.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::norm(amps[a]) > std::norm(amps[b]);
  });
  char line[256];
  for (std::size_t p : order) {
    const double prob = std::norm(amps[p]);
    if (prob < min_probability) break;
    std::snprintf(line, sizeof line, "%s %.17e %.17e %.17e\n",
                  to_binary(BasisState{p}, state.length()).c_str(), amps[p].real(),
                  amps[p].imag(), prob);
    os << line;
  }
}

}  // namespace spinchain
