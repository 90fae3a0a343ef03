#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "spinchain/detail/dense.hpp"
#include "spinchain/errors.hpp"
#include "spinchain/evolution.hpp"

namespace spinchain {

namespace {

using Matrix = Eigen::MatrixXd;

// Operator acting as `op` on spin k and as identity elsewhere. Spin k is bit k
// of the basis index, so spin L-1 is the leftmost Kronecker factor.
Matrix single_site(const Matrix& op, int k, int length) {
  Matrix out = Matrix::Identity(1, 1);
  for (int site = length - 1; site >= 0; --site) {
    const Matrix factor = site == k ? op : Matrix::Identity(2, 2);
    out = Eigen::kroneckerProduct(out, factor).eval();
  }
  return out;
}

}  // namespace

namespace detail {

Eigen::MatrixXd dense_generator(const Pulse& pulse, const ChainParams& params) {
  params.validate();
  const int L = params.length;
  if (L > kMaxOracleLength) {
    throw InputError("dense oracle refuses chains longer than " +
                     std::to_string(kMaxOracleLength) + " spins");
  }
  Matrix sz(2, 2), sx(2, 2);
  sz << 1, 0, 0, -1;  // |0> has sigma = +1
  sx << 0, 1, 1, 0;

  const Eigen::Index n = Eigen::Index{1} << L;
  Matrix h = Matrix::Zero(n, n);
  std::vector<Matrix> z(static_cast<std::size_t>(L));
  for (int k = 0; k < L; ++k) {
    z[static_cast<std::size_t>(k)] = single_site(sz, k, L);
    const double detuning = params.larmor(k) - pulse.frequency;
    h += -0.5 * detuning * z[static_cast<std::size_t>(k)];
    h += -0.5 * pulse.rabi * single_site(sx, k, L);
  }
  for (int k = 0; k + 1 < L; ++k) {
    h += -0.5 * params.coupling * z[static_cast<std::size_t>(k)] * z[static_cast<std::size_t>(k + 1)];
  }
  return h;
}

}  // namespace detail

StateVector dense_oracle_propagate(StateVector state, const Pulse& pulse,
                                   const ChainParams& params) {
  const Matrix h = detail::dense_generator(pulse, params);
  if (state.length() != params.length) throw InputError("state and chain lengths differ");
  const Eigen::Index n = h.rows();

  const Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  if (eig.info() != Eigen::Success) throw NumericalError("dense oracle: eigensolver failed");

  Eigen::VectorXcd v(n);
  const auto amps = state.amplitudes();
  for (Eigen::Index p = 0; p < n; ++p) v[p] = amps[static_cast<std::size_t>(p)];
  const Eigen::MatrixXcd vecs = eig.eigenvectors().cast<Complex>();
  Eigen::VectorXcd coeff = vecs.adjoint() * v;
  for (Eigen::Index i = 0; i < n; ++i) {
    coeff[i] *= std::polar(1.0, -eig.eigenvalues()[i] * pulse.duration);
  }
  const Eigen::VectorXcd out = vecs * coeff;

  auto dst = state.amplitudes();
  for (Eigen::Index p = 0; p < n; ++p) dst[static_cast<std::size_t>(p)] = out[p];
  state.advance_time(pulse.duration);
  return state;
}

}  // namespace spinchain
