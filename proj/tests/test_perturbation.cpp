#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spinchain/detail/dense.hpp"
#include "spinchain/errors.hpp"
#include "spinchain/perturbation.hpp"

using namespace spinchain;

TEST_CASE("epsilon") {
  // Resonant pi pulse transfers everything.
  CHECK(epsilon(0.3, 0.0, std::numbers::pi / 0.3) == doctest::Approx(1.0));
  // Far detuned: bounded by (Omega / Delta)^2.
  CHECK(epsilon(0.01, 10.0, 123.0) <= 1e-6);
  CHECK(default_epsilon(0.15, 1.0) == doctest::Approx(0.0039).epsilon(0.03));
  CHECK_THROWS_AS(epsilon(0.0, 1.0, 1.0), InputError);
  CHECK_THROWS_AS(epsilon(1.0, 1.0, -1.0), InputError);
}

TEST_CASE("2 pi k Rabi frequencies") {
  CHECK(two_pi_k_rabi(2.0, 1) == doctest::Approx(2.0 / std::sqrt(3.0)));
  CHECK(two_pi_k_rabi(2.0, 8) == doctest::Approx(2.0 / std::sqrt(255.0)));
  for (int k = 1; k <= 10; ++k) {
    const double r = two_pi_k_rabi(2.0, k);
    CHECK(epsilon(r, 2.0, std::numbers::pi / r) < 1e-12);
  }
  CHECK_THROWS_AS(two_pi_k_rabi(2.0, 0), InputError);
  CHECK_THROWS_AS(two_pi_k_rabi(-2.0, 1), InputError);
}

TEST_CASE("non-resonant probabilities") {
  CHECK(p_nonres(0.2, 3, 5, 100.0) == doctest::Approx(std::pow(0.2 / 400.0, 2)));
  CHECK_THROWS_AS(p_nonres(0.2, 3, 3, 100.0), InputError);
  double sum = 0.0;
  for (int d = 1; d <= 9; ++d) sum += std::pow(0.2 / (2.0 * d * 100.0), 2);
  CHECK(mu(0, 0.2, 100.0, 10) == doctest::Approx(sum));
  CHECK(mu(9, 0.2, 100.0, 10) == doctest::Approx(sum));
  // Interior spins have neighbours on both sides.
  CHECK(mu(4, 0.2, 100.0, 10) > mu(0, 0.2, 100.0, 10));
  CHECK_THROWS_AS(mu(10, 0.2, 100.0, 10), InputError);
}

TEST_CASE("gate estimate for a short chain") {
  const double rabi = 0.2, grad = 30.0, eps = 0.01;
  const ErrorBudget b = gate_success_estimate(5, rabi, grad, 1.0, eps);
  auto m = [&](int k) { return mu(k, rabi, grad, 5); };
  const double ground = (1 - m(4)) * (1 - m(3) - eps) * (1 - 4 * m(3) - eps) * (1 - m(0) - eps) *
                        std::pow(1 - m(1) - eps, 2) * std::pow(1 - m(2) - eps, 2);
  const double excited =
      (1 - m(3)) * (1 - 4 * m(3)) * std::pow(1 - m(0), 2) * std::pow(1 - m(1), 2) * std::pow(1 - m(2), 2);
  CHECK(b.p_success == doctest::Approx(0.5 * ground + 0.5 * excited).epsilon(1e-14));
  CHECK(b.p_unwanted == doctest::Approx(1.0 - 0.5 * ground - 0.5 * excited).epsilon(1e-12));
  CHECK(b.mu.size() == 5);
  CHECK(b.mu_end() == doctest::Approx(m(4)));
  CHECK(b.validity_ratio == doctest::Approx(2.0 / 30.0));
  // mu_{L-1} and mu_0 swapped for one mu_0 in the excited branch.
  const double alt = (1 - m(4)) * (1 - m(3)) * (1 - 4 * m(3)) * (1 - m(0)) * std::pow(1 - m(1), 2) *
                     std::pow(1 - m(2), 2);
  CHECK(b.multiset_delta == doctest::Approx(0.5 * (excited - alt)).epsilon(1e-6));
}

TEST_CASE("gate estimate errors") {
  CHECK_THROWS_AS(gate_success_estimate(3, 0.1, 100.0, 1.0), InputError);
  CHECK_THROWS_AS(gate_success_estimate(10, 50.0, 10.0, 1.0), ValidityError);
  CHECK_THROWS_AS(gate_success_estimate(10, 0.1, 100.0, 1.0, 1.5), InputError);
  try {
    gate_success_estimate(10, 50.0, 10.0, 1.0);
  } catch (const ValidityError& e) {
    CHECK(e.offending_value() < 0.0);
  }
}

TEST_CASE("budget record") {
  std::ostringstream os;
  write_budget(os, gate_success_estimate(4, 0.1, 100.0, 1.0));
  const std::string s = os.str();
  CHECK(s.find("length=4\n") != std::string::npos);
  CHECK(s.find("p_unwanted=") != std::string::npos);
  CHECK(s.find("mu_3=") != std::string::npos);
}

TEST_CASE("block eigenstates diagonalize the pair") {
  const ChainParams c{3, 1.0, 50.0, 0.0};
  const double nu = transition_frequency(basis_from_spins({2}), 1, c);
  const auto states = block_eigenstates(BasisState{}, 1, nu, 0.3, c);
  CHECK(states[0].energy < states[1].energy);
  const double a = rotating_diagonal(BasisState{}, nu, c);
  const double d = rotating_diagonal(basis_from_spins({1}), nu, c);
  CHECK(states[0].energy + states[1].energy == doctest::Approx(a + d));
  CHECK(states[0].energy * states[1].energy == doctest::Approx(a * d - 0.0225));
}

TEST_CASE("small-mixing weights of a detuned pair") {
  const ChainParams c{3, 1.0, 50.0, 0.0};
  const double nu = transition_frequency(basis_from_spins({2}), 1, c);
  const double rabi = 0.02;
  const auto states = block_eigenstates(BasisState{}, 1, nu, rabi, c);
  const double delta = rotating_diagonal(BasisState{}, nu, c) -
                       rotating_diagonal(basis_from_spins({1}), nu, c);
  const auto w = near_resonant_weights(rabi, delta);
  const auto& lo = std::abs(states[0].components[0].amplitude) > 0.5 ? states[0] : states[1];
  // Both forms agree up to terms of order (rabi / delta)^3.
  CHECK(std::abs(lo.components[0].amplitude) == doctest::Approx(w[0]).epsilon(1e-7));
  CHECK(std::abs(lo.components[1].amplitude) == doctest::Approx(std::abs(w[1])).epsilon(1e-4));
}

TEST_CASE("perturbed state approaches the exact eigenvector") {
  // Drive spin 1 on the branch with spin 2 flipped; the ground block is
  // detuned by 2J and the other spins by about the gradient.
  const ChainParams c{3, 1.0, 1e4, 0.0};
  const double rabi = 0.1;
  const double nu = transition_frequency(basis_from_spins({2}), 1, c);
  const auto approx = perturbed_block_state(BasisState{}, 1, nu, rabi, c);

  const Pulse pulse = make_pulse(rabi, nu, 0.0, PulseAngle::pi, 1);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(detail::dense_generator(pulse, c));
  Eigen::Index best = 0;
  for (Eigen::Index i = 0; i < 8; ++i) {
    if (std::abs(eig.eigenvectors()(0, i)) > std::abs(eig.eigenvectors()(0, best))) best = i;
  }
  Eigen::VectorXd exact = eig.eigenvectors().col(best);
  if (exact(0) < 0) exact = -exact;

  double sign = 0.0;
  for (const auto& comp : approx) {
    if (comp.state == BasisState{}) sign = comp.amplitude.real() > 0 ? 1.0 : -1.0;
  }
  REQUIRE(sign != 0.0);
  int outside = 0;
  for (const auto& comp : approx) {
    const double a = sign * comp.amplitude.real();
    const double e = exact(static_cast<Eigen::Index>(comp.state.bits()));
    if (comp.state.bit(0) || comp.state.bit(2)) {
      ++outside;
      if (std::abs(e) > 1e-9) CHECK(a / e == doctest::Approx(1.0).epsilon(0.01));
    } else {
      CHECK(a == doctest::Approx(e).epsilon(1e-6));
    }
  }
  CHECK(outside >= 2);
}

TEST_CASE("vanishing denominators are reported") {
  const BlockEigenstate s{{Component{BasisState{0}, 1.0}, Component{BasisState{1}, 0.0}}, 2.0};
  const OutsideCoupling oc{BlockEigenstate{{Component{BasisState{2}, 1.0}, Component{BasisState{3}, 0.0}}, 2.0},
                           0.1};
  CHECK_THROWS_AS(perturbed_eigenvector(s, std::span<const OutsideCoupling>(&oc, 1)), SingularityError);
  const OutsideCoupling ok{BlockEigenstate{{Component{BasisState{2}, 1.0}, Component{BasisState{3}, 0.0}}, 1.0},
                           0.1};
  const auto v = perturbed_eigenvector(s, std::span<const OutsideCoupling>(&ok, 1));
  REQUIRE(v.size() == 4);
  CHECK(v[2].amplitude.real() == doctest::Approx(0.1));
  CHECK_THROWS_AS(near_resonant_weights(0.1, 0.0), InputError);
}

TEST_CASE("longer chains accumulate more error") {
  double previous = 0.0;
  for (int L = 4; L <= 60; ++L) {
    const double p = gate_success_estimate(L, 0.12, 100.0, 1.0, 0.002).p_unwanted;
    CHECK(p > previous);
    previous = p;
  }
}

TEST_CASE("outside weights approach the non-resonant probability") {
  // Ground state while spin 1 of a 4-spin chain is driven on the other branch.
  for (double grad : {1e3, 1e4}) {
    const ChainParams c{4, 1.0, grad, 0.0};
    const double rabi = 0.1;
    const double nu = transition_frequency(basis_from_spins({2}), 1, c);
    const auto v = perturbed_block_state(BasisState{}, 1, nu, rabi, c);
    for (int other : {0, 2, 3}) {
      double w = 0.0;
      for (const auto& comp : v) {
        if (comp.state == BasisState{}.toggled(other)) w = std::norm(comp.amplitude);
      }
      const double ratio = w / p_nonres(rabi, 1, other, grad);
      if (grad == 1e4) CHECK(ratio == doctest::Approx(1.0).epsilon(0.01));
      else CHECK(ratio == doctest::Approx(1.0).epsilon(0.1));
    }
  }
}

TEST_CASE("resonant block splits evenly") {
  const ChainParams c{3, 1.0, 100.0, 0.0};
  const double nu = transition_frequency(BasisState{}, 1, c);
  for (const auto& s : block_eigenstates(BasisState{}, 1, nu, 0.2, c)) {
    CHECK(std::norm(s.components[0].amplitude) == doctest::Approx(0.5));
    CHECK(std::norm(s.components[1].amplitude) == doctest::Approx(0.5));
  }
}

TEST_CASE("analytic estimate scaling and limits") {
  const double rabi = two_pi_k_rabi(2.0, 8);
  // epsilon = 0: P(c dw) = P(dw) / c^2 to first order.
  const double p1 = gate_success_estimate(10, rabi, 1e2, 1.0, 0.0).p_unwanted;
  const double p2 = gate_success_estimate(10, rabi, 1e4, 1.0, 0.0).p_unwanted;
  CHECK(std::log(p2 / p1) / std::log(100.0) == doctest::Approx(-2.0).epsilon(0.01));
  // mu -> 0 with eps = 0.0039: 1 - (1 - eps)^17 / 2 - 1/2.
  CHECK(gate_success_estimate(10, 0.15, 1e12, 1.0, 0.0039).p_unwanted ==
        doctest::Approx(0.5 - 0.5 * std::pow(1 - 0.0039, 17)).epsilon(1e-9));
  CHECK(gate_success_estimate(10, 0.15, 1e12, 1.0, 0.0039).p_unwanted == doctest::Approx(0.0324).epsilon(0.01));
  CHECK(gate_success_estimate(10, rabi, 1e15, 1.0, 0.0).p_unwanted < 1e-20);
  // Non-increasing success in epsilon and in every mu (smaller gradient).
  double last = 1.0;
  for (double e : {0.0, 0.001, 0.01, 0.05}) {
    const double p = gate_success_estimate(10, 0.1, 100.0, 1.0, e).p_success;
    CHECK(p <= last);
    last = p;
  }
  last = 0.0;
  for (double g : {20.0, 50.0, 100.0, 400.0}) {
    const double p = gate_success_estimate(10, 0.1, g, 1.0, 0.0).p_success;
    CHECK(p >= last);
    last = p;
  }
}

TEST_CASE("mu symmetry and the two-spin case") {
  CHECK(mu(1, 0.2, 50.0, 2) == doctest::Approx(std::pow(0.2 / 100.0, 2)));
  for (int L = 2; L <= 12; ++L) CHECK(mu(0, 0.3, 20.0, L) == doctest::Approx(mu(L - 1, 0.3, 20.0, L)));
}
