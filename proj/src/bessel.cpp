#include "spinchain/detail/bessel.hpp"

#include <algorithm>
#include <cmath>

#include "spinchain/errors.hpp"

namespace spinchain::detail {

namespace {

// Order beyond which J_k(x) is negligible at double precision. The decay past
// k = x sets in over a width ~ x^(1/3).
int negligible_order(double x) {
  return static_cast<int>(std::ceil(x + 15.0 * std::cbrt(x) + 60.0));
}

}  // namespace

std::vector<double> bessel_j_sequence(double x, int count) {
  if (!(x >= 0.0) || !std::isfinite(x) || count < 1) {
    throw InputError("bessel_j_sequence: need finite x >= 0 and count >= 1");
  }
  std::vector<double> out(static_cast<std::size_t>(count), 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  int start = std::max(count + 20, negligible_order(x));
  if (start % 2 != 0) ++start;

  std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
  j[static_cast<std::size_t>(start) + 1] = 0.0;
  j[static_cast<std::size_t>(start)] = 1e-280;
  const double inv_x = 1.0 / x;
  for (int k = start; k >= 1; --k) {
    const auto uk = static_cast<std::size_t>(k);
    j[uk - 1] = 2.0 * k * inv_x * j[uk] - j[uk + 1];
    if (std::abs(j[uk - 1]) > 1e250) {
      for (std::size_t m = uk - 1; m <= static_cast<std::size_t>(start); ++m) j[m] *= 1e-250;
    }
  }
  double norm = j[0];
  for (std::size_t k = 2; k <= static_cast<std::size_t>(start); k += 2) norm += 2.0 * j[k];
  for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = j[static_cast<std::size_t>(k)] / norm;
  return out;
}

ChebyshevTruncation chebyshev_truncation(double x, double tol) {
  const int full = negligible_order(x);
  std::vector<double> j = bessel_j_sequence(x, full + 1);
  // tail[k] = 2 sum_{m > k} |J_m|
  std::vector<double> tail(j.size(), 0.0);
  for (int k = full - 1; k >= 0; --k) {
    const auto uk = static_cast<std::size_t>(k);
    tail[uk] = tail[uk + 1] + 2.0 * std::abs(j[uk + 1]);
  }
  int order = 0;
  while (order < full && tail[static_cast<std::size_t>(order)] > tol) ++order;
  ChebyshevTruncation t;
  t.order = order;
  t.tail = tail[static_cast<std::size_t>(order)];
  t.coefficients.assign(j.begin(), j.begin() + order + 1);
  return t;
}

double chebyshev_tail(double x, int order) {
  const int full = negligible_order(x);
  if (order >= full) return 0.0;
  const std::vector<double> j = bessel_j_sequence(x, full + 1);
  double tail = 0.0;
  for (int k = full; k > std::max(order, -1); --k) tail += 2.0 * std::abs(j[static_cast<std::size_t>(k)]);
  return tail;
}

}  // namespace spinchain::detail
