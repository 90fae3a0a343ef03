#pragma once

#include <vector>

namespace spinchain::detail {

// J_0(x) .. J_count-1(x) for x >= 0 by Miller's backward recurrence,
// normalized with J_0 + 2 sum J_2k = 1.
std::vector<double> bessel_j_sequence(double x, int count);

// Smallest order past which the Chebyshev expansion of exp(-i x t), t in
// [-1, 1], may be truncated with error below tol. Returns the order and the
// tail bound 2 sum_{k > order} |J_k(x)|.
struct ChebyshevTruncation {
  int order = 0;
  double tail = 0.0;
  std::vector<double> coefficients;  // J_0 .. J_order
};

ChebyshevTruncation chebyshev_truncation(double x, double tol);

// 2 sum_{k > order} |J_k(x)|: error bound of an expansion truncated at order.
double chebyshev_tail(double x, int order);

}  // namespace spinchain::detail
