#include "specbound/monte_carlo.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <type_traits>

#include "specbound/errors.hpp"
#include "specbound/parallel.hpp"

namespace specbound {

std::string to_string(Ensemble e) {
  return e == Ensemble::real_symmetric ? "real-symmetric" : "complex-hermitian";
}

Ensemble parse_ensemble(const std::string& name) {
  if (name == "real-symmetric" || name == "real") return Ensemble::real_symmetric;
  if (name == "complex-hermitian" || name == "complex") return Ensemble::complex_hermitian;
  throw InputError("unknown ensemble '" + name + "'");
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

RealMatrix sample_real_symmetric(const VarianceMatrix& s, std::mt19937_64& rng) {
  const std::size_t n = s.size();
  RealMatrix h{n, std::vector<double>(n * n, 0.0)};
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x; y < n; ++y) {
      const double v = normal(rng) * std::sqrt(s(x, y));
      h(x, y) = v;
      h(y, x) = v;
    }
  }
  return h;
}

ComplexMatrix sample_complex_hermitian(const VarianceMatrix& s, std::mt19937_64& rng) {
  const std::size_t n = s.size();
  ComplexMatrix h{n, std::vector<std::complex<double>>(n * n)};
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t x = 0; x < n; ++x) {
    h(x, x) = normal(rng) * std::sqrt(s(x, x));
    for (std::size_t y = x + 1; y < n; ++y) {
      const double sd = std::sqrt(0.5 * s(x, y));
      const double re = normal(rng) * sd;
      const double im = normal(rng) * sd;
      h(x, y) = {re, im};
      h(y, x) = {re, -im};
    }
  }
  return h;
}

namespace {

double squared_norm(double v) { return v * v; }
double squared_norm(const std::complex<double>& v) { return std::norm(v); }

template <typename T>
void random_fill(std::vector<T>& v, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& e : v) {
    if constexpr (std::is_same_v<T, double>) {
      e = normal(rng);
    } else {
      const double re = normal(rng);
      e = T(re, normal(rng));
    }
  }
}

template <typename T>
double normalize(std::vector<T>& v) {
  double sq = 0.0;
  for (const auto& e : v) sq += squared_norm(e);
  const double norm = std::sqrt(sq);
  if (norm > 0.0) {
    for (auto& e : v) e /= norm;
  }
  return norm;
}

template <typename T>
void apply(const DenseMatrix<T>& h, const std::vector<T>& in, std::vector<T>& out) {
  for (std::size_t i = 0; i < h.n; ++i) {
    const T* row = h.data.data() + i * h.n;
    T acc{};
    for (std::size_t j = 0; j < h.n; ++j) acc += row[j] * in[j];
    out[i] = acc;
  }
}

template <typename T>
SpectralRadius power_iteration(const DenseMatrix<T>& h, std::mt19937_64& rng, double tol,
                               long max_iter) {
  if (!(tol > 0.0)) throw DomainError("power iteration tolerance must be positive");
  SpectralRadius result;
  if (h.n == 0) {
    result.converged = true;
    return result;
  }
  std::vector<T> v(h.n), hv(h.n), hhv(h.n);
  random_fill(v, rng);
  if (normalize(v) == 0.0) v[0] = T(1.0);

  double previous = -1.0;
  for (long it = 1; it <= max_iter; ++it) {
    apply(h, v, hv);
    double rq = 0.0;  // v^* H^2 v for unit v
    for (const auto& e : hv) rq += squared_norm(e);
    result.iterations = it;
    result.value = std::sqrt(rq);
    if (rq == 0.0 || (previous >= 0.0 && std::abs(rq - previous) < tol * rq)) {
      result.converged = true;
      return result;
    }
    previous = rq;
    apply(h, hv, hhv);
    if (normalize(hhv) == 0.0) {
      result.converged = true;
      return result;
    }
    v.swap(hhv);
  }
  return result;
}

}  // namespace

SpectralRadius spectral_radius(const RealMatrix& h, std::mt19937_64& rng, double tol,
                               long max_iter) {
  return power_iteration(h, rng, tol, max_iter);
}

SpectralRadius spectral_radius(const ComplexMatrix& h, std::mt19937_64& rng, double tol,
                               long max_iter) {
  return power_iteration(h, rng, tol, max_iter);
}

McResult mc_experiment(const VarianceMatrix& s, const McConfig& cfg) {
  if (cfg.trials == 0) throw InputError("trials must be at least 1");
  if (!(cfg.power_tol > 0.0)) throw InputError("power_tol must be positive");
  const auto start = std::chrono::steady_clock::now();

  std::vector<SpectralRadius> radii(cfg.trials);
  parallel_for(cfg.trials, [&](std::size_t trial) {
    std::mt19937_64 rng = trial_rng(cfg.seed, trial);
    if (cfg.ensemble == Ensemble::real_symmetric) {
      const RealMatrix h = sample_real_symmetric(s, rng);
      radii[trial] = spectral_radius(h, rng, cfg.power_tol, cfg.power_max_iter);
    } else {
      const ComplexMatrix h = sample_complex_hermitian(s, rng);
      radii[trial] = spectral_radius(h, rng, cfg.power_tol, cfg.power_max_iter);
    }
  });

  McResult result;
  result.config = cfg;
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    if (radii[trial].converged) {
      result.per_trial.push_back(radii[trial].value);
    } else {
      result.failed_trials.push_back(trial);
    }
  }
  const auto count = static_cast<double>(result.per_trial.size());
  if (!result.per_trial.empty()) {
    result.mean = std::accumulate(result.per_trial.begin(), result.per_trial.end(), 0.0) / count;
  }
  if (result.per_trial.size() >= 2) {
    double sq = 0.0;
    for (double v : result.per_trial) sq += (v - result.mean) * (v - result.mean);
    result.std = std::sqrt(sq / (count - 1.0));
  } else {
    result.std_defined = false;
  }
  result.elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace specbound
