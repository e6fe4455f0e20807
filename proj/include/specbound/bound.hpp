#pragma once

#include <cstddef>

#include "specbound/variance_matrix.hpp"

namespace specbound {

inline constexpr double kDefaultRootTol = 1e-12;

// phi_J(w) = 1 - (w/2) (1 + sum_{j<=J} (w/2)^j z_j + sum_{j>J} (w/2)^j),
// with the geometric tail summed in closed form. Requires 0 <= w < 2.
double phi(double w, const NormSequence& z);

struct RootBracket {
  double lo = 0.0;  // phi(lo) >= 0
  double hi = 0.0;  // phi(hi) < 0
};

// Smallest positive root of phi by bisection on (0, 2). phi is strictly
// decreasing there, so the root is unique. The bracket's lower end is returned
// as w_c, which keeps 2 ||S||^{1/2} / w_c an upper bound on the exact value.
RootBracket critical_bracket(const NormSequence& z, double tol = kDefaultRootTol);
double critical_w(const NormSequence& z, double tol = kDefaultRootTol);

struct BoundReport {
  std::size_t n = 0;
  std::size_t J = 0;
  double norm_s = 0.0;
  double w_c = 1.0;
  RootBracket bracket;
  double trivial_bound = 0.0;   // 2 ||S||^{1/2}
  double improved_bound = 0.0;  // trivial_bound / w_c
  NormSequence z;
  double tol = kDefaultRootTol;
};

// Terms z_j with (w_c/2)^j below machine epsilon do not move w_c, so J around
// log(eps)/log(w_c/2) (about 50 when w_c is near 1) is enough in practice.
BoundReport support_bound(const VarianceMatrix& s, std::size_t J,
                          double tol = kDefaultRootTol);

}  // namespace specbound
