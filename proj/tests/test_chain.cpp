#include "doctest.h"

#include <cmath>

#include "spinchain/chain.hpp"
#include "spinchain/errors.hpp"

using namespace spinchain;

namespace {

// E_p straight from the spin values.
double reference_energy(BasisState p, const ChainParams& c) {
  double e = 0.0;
  for (int k = 0; k < c.length; ++k) e -= 0.5 * c.larmor(k) * p.sigma(k);
  for (int k = 0; k + 1 < c.length; ++k) e -= 0.5 * c.coupling * p.sigma(k) * p.sigma(k + 1);
  return e;
}

}  // namespace

TEST_CASE("basis masks") {
  const BasisState s = basis_from_spins({0, 3});
  CHECK(s.bits() == 0b1001u);
  CHECK(s.sigma(0) == -1);
  CHECK(s.sigma(1) == 1);
  CHECK(s.toggled(1).bits() == 0b1011u);
  CHECK(s.with_bit(3, false).bits() == 1u);
  CHECK(spin_sum(s, 5) == 1);
  CHECK(to_binary(s, 5) == "01001");
  CHECK_THROWS_AS(s.check(3), InputError);
  CHECK_NOTHROW(s.check(4));
}

TEST_CASE("energy matches direct evaluation") {
  const ChainParams c{6, 1.3, 37.0, 12.5};
  for (std::uint64_t p = 0; p < 64; ++p) {
    CHECK(energy(BasisState{p}, c) == doctest::Approx(reference_energy(BasisState{p}, c)).epsilon(1e-13));
  }
}

TEST_CASE("transition frequency is the energy gap") {
  const ChainParams c{5, 0.7, 20.0, 3.0};
  for (std::uint64_t p = 0; p < 32; ++p) {
    for (int k = 0; k < 5; ++k) {
      const BasisState b{p};
      const double gap = energy(b.with_bit(k, true), c) - energy(b.with_bit(k, false), c);
      CHECK(transition_frequency(b, k, c) == doctest::Approx(gap).epsilon(1e-12));
    }
  }
  // Ground state, interior spin: omega_k + 2J.
  CHECK(transition_frequency(BasisState{}, 2, c) == doctest::Approx(c.larmor(2) + 2 * 0.7));
  // End spin with its only neighbour flipped: omega_0 - J.
  CHECK(transition_frequency(basis_from_spins({1}), 0, c) == doctest::Approx(3.0 - 0.7));
}

TEST_CASE("transition frequency can be negative for small omega0") {
  const ChainParams c{4, 1.0, 100.0, 0.0};
  CHECK(transition_frequency(basis_from_spins({1}), 0, c) == doctest::Approx(-1.0));
}

TEST_CASE("flip neighbours") {
  const auto n = flip_neighbors(BasisState{0b101}, 3);
  REQUIRE(n.size() == 3);
  CHECK(n[0].bits() == 0b100u);
  CHECK(n[1].bits() == 0b111u);
  CHECK(n[2].bits() == 0b001u);
}

TEST_CASE("rotating diagonal adds the frame term") {
  const ChainParams c{5, 1.0, 10.0, 4.0};
  const double nu = 31.7;
  for (std::uint64_t p = 0; p < 32; ++p) {
    const BasisState b{p};
    CHECK(rotating_diagonal(b, nu, c) ==
          doctest::Approx(energy(b, c) + 0.5 * nu * spin_sum(b, 5)).epsilon(1e-12));
  }
}

TEST_CASE("rotating diagonal does not depend on a common frequency offset") {
  const ChainParams a{4, 1.0, 50.0, 0.0};
  const ChainParams b{4, 1.0, 50.0, 1e5};
  for (std::uint64_t p = 0; p < 16; ++p) {
    CHECK(rotating_diagonal(BasisState{p}, 51.0, a) ==
          doctest::Approx(rotating_diagonal(BasisState{p}, 51.0 + 1e5, b)).epsilon(1e-12));
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((ChainParams{0, 1, 100, 0}.validate()), InputError);
  CHECK_THROWS_AS((ChainParams{10, 0, 100, 0}.validate()), InputError);
  CHECK_THROWS_AS((ChainParams{10, 1, -1, 0}.validate()), InputError);
  CHECK_THROWS_AS((ChainParams{10, 1, 100, NAN}.validate()), InputError);
  CHECK_NOTHROW((ChainParams{}.validate()));
  CHECK(ChainParams{}.validity_ratio() == doctest::Approx(0.02));
}
