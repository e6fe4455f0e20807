#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "specbound/variance_matrix.hpp"

namespace specbound {

using cdouble = std::complex<double>;

struct QveOptions {
  double tol = 1e-10;           // sup-norm of the fixed-point defect
  long max_iter = 2'000'000;
};

// Solution of -1/m_x = z + sum_y S_xy m_y in the upper half plane.
struct SpectralProbe {
  cdouble z;
  std::vector<cdouble> m;
  long iterations = 0;
  double residual = 0.0;  // sup_x |m_x + 1/(z + (S m)_x)|
  bool damped = false;    // damping kicked in after an oscillating residual

  cdouble average() const;
};

// Fixed-point iteration m <- -1/(z + S m) from m = -1/z, or from `initial`
// when given (used for warm starts along a grid). Switches to 1/2-damping for
// the rest of the run if the residual ever grows. The returned m has a defect
// of at most tol. Throws DomainError if Im z <= 0 and NoConvergence after
// max_iter sweeps.
SpectralProbe solve_qve(const VarianceMatrix& s, cdouble z, const QveOptions& opts = {},
                        std::span<const cdouble> initial = {});

// (1/(pi N)) sum_x Im m_x(tau + i eta).
double density(const VarianceMatrix& s, double tau, double eta, const QveOptions& opts = {});

struct DensityPoint {
  double tau = 0.0;
  double density = 0.0;
};

// Densities along `taus` in the given order, warm-starting each probe from the
// previous solution.
std::vector<DensityPoint> density_scan(const VarianceMatrix& s, std::span<const double> taus,
                                       double eta, const QveOptions& opts = {});

struct SupportOptions {
  double eta = 1e-3;
  double grid_step = 1e-3;
  double threshold = 1e-2;
  QveOptions qve{};
};

struct SupportEstimate {
  double tau = 0.0;     // largest grid point with density above threshold
  bool found = false;   // false: density never exceeded the threshold
  double scan_max = 0.0;
  std::vector<DensityPoint> visited;  // probes evaluated, in ascending tau
};

// Scans tau = k * grid_step on [0, 2 ||S||^{1/2} + 1] from the top down and
// stops at the first grid point whose smoothed density exceeds the threshold.
// rho is even, so negative tau is never scanned. A zero matrix has its whole
// spectrum at 0 and reports found = false.
SupportEstimate estimate_support(const VarianceMatrix& s, const SupportOptions& opts = {});

// c_{x,k} = mu_{x,2k}: even moments of the measures rho_x.
class MomentTable {
 public:
  MomentTable(std::size_t n, std::size_t kmax);

  std::size_t n() const noexcept { return n_; }
  std::size_t kmax() const noexcept { return kmax_; }
  double operator()(std::size_t x, std::size_t k) const { return c_[k * n_ + x]; }
  double& at(std::size_t x, std::size_t k) { return c_[k * n_ + x]; }

 private:
  std::size_t n_;
  std::size_t kmax_;
  std::vector<double> c_;
};

// c_{x,0} = 1, c_{x,k} = sum_y S_xy sum_{n<k} c_{x,k-n-1} c_{y,n}.
// Throws OverflowGuard when a moment leaves the double range; rescale S.
MomentTable moment_recursion(const VarianceMatrix& s, std::size_t kmax);

// max_x c_{x,kmax}^{1/(2 kmax)}. A finite-k proxy for max supp rho that
// approaches it from below.
double support_from_moments(const MomentTable& table, std::size_t kmax);

}  // namespace specbound
