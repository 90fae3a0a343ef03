#pragma once

#include <Eigen/Dense>

#include "spinchain/chain.hpp"
#include "spinchain/protocol.hpp"

namespace spinchain::detail {

// Dense rotating-frame generator of one pulse assembled from Kronecker
// products of Pauli matrices. Chains up to kMaxOracleLength spins.
Eigen::MatrixXd dense_generator(const Pulse& pulse, const ChainParams& params);

}  // namespace spinchain::detail
