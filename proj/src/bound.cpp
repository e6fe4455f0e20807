#include "specbound/bound.hpp"

#include <cmath>
#include <limits>

#include "specbound/errors.hpp"

namespace specbound {

double phi(double w, const NormSequence& z) {
  if (!(w >= 0.0) || w >= 2.0) {
    throw DomainError("phi is defined for 0 <= w < 2");
  }
  const double x = 0.5 * w;
  double power = 1.0;
  double sum = 1.0;
  for (double zj : z.z) {
    power *= x;
    sum += power * zj;
  }
  power *= x;
  sum += power / (1.0 - x);
  return 1.0 - x * sum;
}

RootBracket critical_bracket(const NormSequence& z, double tol) {
  if (!(tol > 0.0)) throw DomainError("root tolerance must be positive");
  if (z.z.empty()) throw DomainError("norm sequence is empty");
  RootBracket b{0.0, std::nextafter(2.0, 0.0)};
  if (!(phi(b.lo, z) > 0.0) || !(phi(b.hi, z) < 0.0)) {
    throw ToleranceError("phi does not change sign on (0, 2)");
  }
  // z_j <= 1 gives phi(1) >= 0, hence w_c >= 1.
  if (phi(1.0, z) >= 0.0) b.lo = 1.0;
  while (b.hi - b.lo > tol) {
    const double mid = 0.5 * (b.lo + b.hi);
    if (mid <= b.lo || mid >= b.hi) break;
    if (phi(mid, z) >= 0.0) {
      b.lo = mid;
    } else {
      b.hi = mid;
    }
  }
  if (!(phi(b.lo, z) >= 0.0 && phi(b.hi, z) < 0.0)) {
    throw ToleranceError("bisection lost its bracket");
  }
  return b;
}

double critical_w(const NormSequence& z, double tol) {
  return critical_bracket(z, tol).lo;
}

BoundReport support_bound(const VarianceMatrix& s, std::size_t J, double tol) {
  BoundReport r;
  r.n = s.size();
  r.J = J;
  r.tol = tol;
  r.z = norm_sequence(s, J);
  r.norm_s = r.z.norm_s;
  r.bracket = critical_bracket(r.z, tol);
  r.w_c = r.bracket.lo;
  r.trivial_bound = 2.0 * std::sqrt(r.norm_s);
  r.improved_bound = r.trivial_bound / r.w_c;
  return r;
}

}  // namespace specbound
