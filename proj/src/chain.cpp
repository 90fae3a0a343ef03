#include "spinchain/chain.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "spinchain/errors.hpp"

namespace spinchain {

void ChainParams::validate() const {
  if (length < 1) {
    throw InputError("chain length must be positive, got " + std::to_string(length));
  }
  if (!std::isfinite(coupling) || coupling <= 0.0) {
    throw InputError("coupling J must be positive and finite");
  }
  if (!std::isfinite(gradient) || gradient <= 0.0) {
    throw InputError("gradient must be positive and finite");
  }
  if (!std::isfinite(omega0)) {
    throw InputError("omega0 must be finite");
  }
}

void BasisState::check(int length) const {
  if (length < 1 || length > kMaxMaskLength) {
    throw InputError("basis masks support 1.." + std::to_string(kMaxMaskLength) +
                     " spins, got " + std::to_string(length));
  }
  if ((bits_ >> length) != 0) {
    std::ostringstream os;
    os << "basis mask 0x" << std::hex << bits_ << std::dec << " out of range for " << length
       << " spins";
    throw InputError(os.str());
  }
}

BasisState basis_from_spins(std::initializer_list<int> spins) {
  BasisState p;
  for (int k : spins) {
    if (k < 0 || k >= kMaxMaskLength) {
      throw InputError("spin index out of range: " + std::to_string(k));
    }
    p = p.with_bit(k, true);
  }
  return p;
}

int spin_sum(BasisState p, int length) {
  return length - 2 * std::popcount(p.bits());
}

std::string to_binary(BasisState p, int length) {
  std::string s(static_cast<std::size_t>(length), '0');
  for (int k = 0; k < length; ++k) {
    if (p.bit(k)) s[static_cast<std::size_t>(length - 1 - k)] = '1';
  }
  return s;
}

namespace {

void check_spin(int k, int length) {
  if (k < 0 || k >= length) {
    throw InputError("spin index " + std::to_string(k) + " out of range for " +
                     std::to_string(length) + " spins");
  }
}

double ising_term(BasisState p, const ChainParams& params) {
  int bonds = 0;
  for (int k = 0; k + 1 < params.length; ++k) bonds += p.sigma(k) * p.sigma(k + 1);
  return -0.5 * params.coupling * bonds;
}

}  // namespace

double energy(BasisState p, const ChainParams& params) {
  p.check(params.length);
  double zeeman = 0.0;
  for (int k = 0; k < params.length; ++k) zeeman += params.larmor(k) * p.sigma(k);
  return -0.5 * zeeman + ising_term(p, params);
}

double transition_frequency(BasisState p, int k, const ChainParams& params) {
  p.check(params.length);
  check_spin(k, params.length);
  int neighbours = 0;
  if (k > 0) neighbours += p.sigma(k - 1);
  if (k + 1 < params.length) neighbours += p.sigma(k + 1);
  return params.larmor(k) + params.coupling * neighbours;
}

std::vector<BasisState> flip_neighbors(BasisState p, int length) {
  p.check(length);
  std::vector<BasisState> out;
  out.reserve(static_cast<std::size_t>(length));
  for (int k = 0; k < length; ++k) out.push_back(p.toggled(k));
  return out;
}

double rotating_diagonal(BasisState p, double drive_frequency, const ChainParams& params) {
  p.check(params.length);
  const double offset = params.omega0 - drive_frequency;
  double zeeman = 0.0;
  for (int k = 0; k < params.length; ++k) {
    zeeman += (offset + k * params.gradient) * p.sigma(k);
  }
  return -0.5 * zeeman + ising_term(p, params);
}

}  // namespace spinchain
