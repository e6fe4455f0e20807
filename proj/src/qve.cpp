#include "specbound/qve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "specbound/errors.hpp"

namespace specbound {

namespace {

void multiply_complex(const VarianceMatrix& s, std::span<const cdouble> in,
                      std::span<cdouble> out) {
  const std::size_t n = s.size();
  for (std::size_t x = 0; x < n; ++x) {
    const auto row = s.row(x);
    // four independent accumulators so the loop pipelines
    double re[4] = {}, im[4] = {};
    std::size_t y = 0;
    for (; y + 4 <= n; y += 4) {
      for (std::size_t l = 0; l < 4; ++l) {
        re[l] += row[y + l] * in[y + l].real();
        im[l] += row[y + l] * in[y + l].imag();
      }
    }
    for (; y < n; ++y) {
      re[0] += row[y] * in[y].real();
      im[0] += row[y] * in[y].imag();
    }
    out[x] = {(re[0] + re[1]) + (re[2] + re[3]), (im[0] + im[1]) + (im[2] + im[3])};
  }
}

double average_im(std::span<const cdouble> m) {
  double acc = 0.0;
  for (const cdouble& v : m) acc += v.imag();
  return acc / static_cast<double>(m.size());
}

}  // namespace

cdouble SpectralProbe::average() const {
  cdouble acc{0.0, 0.0};
  for (const cdouble& v : m) acc += v;
  return acc / static_cast<double>(m.size());
}

SpectralProbe solve_qve(const VarianceMatrix& s, cdouble z, const QveOptions& opts,
                        std::span<const cdouble> initial) {
  if (!(z.imag() > 0.0)) throw DomainError("spectral parameter must satisfy Im z > 0");
  if (!(opts.tol > 0.0)) throw DomainError("QVE tolerance must be positive");
  const std::size_t n = s.size();

  SpectralProbe probe;
  probe.z = z;
  if (initial.size() == n) {
    probe.m.assign(initial.begin(), initial.end());
  } else {
    probe.m.assign(n, -1.0 / z);
  }

  std::vector<cdouble> sm(n), next(n);
  double previous = std::numeric_limits<double>::infinity();
  for (long it = 0; it < opts.max_iter; ++it) {
    multiply_complex(s, probe.m, sm);
    double residual = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      next[x] = -1.0 / (z + sm[x]);
      residual = std::max(residual, std::abs(probe.m[x] - next[x]));
    }
    if (!std::isfinite(residual)) {
      throw NoConvergence("QVE iteration produced a non-finite residual", residual, it);
    }
    probe.iterations = it;
    probe.residual = residual;
    if (residual <= opts.tol) return probe;

    if (residual > previous) probe.damped = true;
    previous = residual;
    if (probe.damped) {
      for (std::size_t x = 0; x < n; ++x) probe.m[x] = 0.5 * (probe.m[x] + next[x]);
    } else {
      probe.m.swap(next);
    }
  }
  throw NoConvergence("QVE fixed-point iteration did not reach tolerance", probe.residual,
                      opts.max_iter);
}

double density(const VarianceMatrix& s, double tau, double eta, const QveOptions& opts) {
  if (!(eta > 0.0)) throw DomainError("eta must be positive");
  const SpectralProbe p = solve_qve(s, {tau, eta}, opts);
  return average_im(p.m) / std::numbers::pi;
}

std::vector<DensityPoint> density_scan(const VarianceMatrix& s, std::span<const double> taus,
                                       double eta, const QveOptions& opts) {
  if (!(eta > 0.0)) throw DomainError("eta must be positive");
  std::vector<DensityPoint> out;
  out.reserve(taus.size());
  std::vector<cdouble> warm;
  for (double tau : taus) {
    SpectralProbe p = solve_qve(s, {tau, eta}, opts, warm);
    out.push_back({tau, average_im(p.m) / std::numbers::pi});
    warm = std::move(p.m);
  }
  return out;
}

SupportEstimate estimate_support(const VarianceMatrix& s, const SupportOptions& opts) {
  if (!(opts.eta > 0.0) || !(opts.grid_step > 0.0) || !(opts.threshold > 0.0)) {
    throw DomainError("eta, grid_step and threshold must be positive");
  }
  SupportEstimate est;
  const double norm = inf_norm(s);
  if (norm == 0.0) return est;

  est.scan_max = 2.0 * std::sqrt(norm) + 1.0;
  const auto top = static_cast<long>(std::floor(est.scan_max / opts.grid_step + 1e-9));
  std::vector<cdouble> warm;
  for (long k = top; k >= 0; --k) {
    const double tau = static_cast<double>(k) * opts.grid_step;
    SpectralProbe p = solve_qve(s, {tau, opts.eta}, opts.qve, warm);
    const double rho = average_im(p.m) / std::numbers::pi;
    est.visited.push_back({tau, rho});
    warm = std::move(p.m);
    if (rho > opts.threshold) {
      est.tau = tau;
      est.found = true;
      break;
    }
  }
  std::reverse(est.visited.begin(), est.visited.end());
  return est;
}

MomentTable::MomentTable(std::size_t n, std::size_t kmax)
    : n_(n), kmax_(kmax), c_(n * (kmax + 1), 0.0) {}

MomentTable moment_recursion(const VarianceMatrix& s, std::size_t kmax) {
  const std::size_t n = s.size();
  MomentTable table(n, kmax);
  // sc[k][x] = (S c_{.,k})_x, filled as each order becomes available.
  std::vector<std::vector<double>> sc;
  sc.reserve(kmax + 1);
  std::vector<double> column(n);
  for (std::size_t k = 0; k <= kmax; ++k) {
    for (std::size_t x = 0; x < n; ++x) {
      double c = 1.0;
      if (k > 0) {
        c = 0.0;
        for (std::size_t m = 0; m < k; ++m) c += table(x, k - m - 1) * sc[m][x];
      }
      if (!std::isfinite(c) || c > 1e300) {
        throw OverflowGuard("moment c_{" + std::to_string(x) + "," + std::to_string(k) +
                            "} overflows; rescale S");
      }
      table.at(x, k) = c;
      column[x] = c;
    }
    std::vector<double> next(n);
    s.multiply(column, next);
    sc.push_back(std::move(next));
  }
  return table;
}

double support_from_moments(const MomentTable& table, std::size_t kmax) {
  if (kmax == 0 || kmax > table.kmax()) {
    throw DomainError("support_from_moments needs 1 <= kmax <= table.kmax()");
  }
  double best = 0.0;
  for (std::size_t x = 0; x < table.n(); ++x) {
    best = std::max(best, std::pow(table(x, kmax), 1.0 / (2.0 * static_cast<double>(kmax))));
  }
  return best;
}

}  // namespace specbound
