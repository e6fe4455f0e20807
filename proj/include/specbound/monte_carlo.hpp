#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "specbound/variance_matrix.hpp"

namespace specbound {

enum class Ensemble { real_symmetric, complex_hermitian };

std::string to_string(Ensemble e);
Ensemble parse_ensemble(const std::string& name);

struct McConfig {
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  Ensemble ensemble = Ensemble::real_symmetric;
  double power_tol = 1e-12;
  long power_max_iter = 200'000;
};

// Dense n x n matrix, row-major.
template <typename T>
struct DenseMatrix {
  std::size_t n = 0;
  std::vector<T> data;

  T& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

using RealMatrix = DenseMatrix<double>;
using ComplexMatrix = DenseMatrix<std::complex<double>>;

// Per-trial stream derived from (seed, trial) so results do not depend on the
// order in which trials run.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

// H_xy = H_yx ~ N(0, S_xy), independent for x <= y.
RealMatrix sample_real_symmetric(const VarianceMatrix& s, std::mt19937_64& rng);

// Off-diagonal real and imaginary parts ~ N(0, S_xy/2); diagonal real N(0, S_xx).
ComplexMatrix sample_complex_hermitian(const VarianceMatrix& s, std::mt19937_64& rng);

struct SpectralRadius {
  double value = 0.0;
  long iterations = 0;
  bool converged = false;
};

// |lambda|_max by power iteration on v -> H(Hv), which merges the nearly
// degenerate +-lambda pair at the spectral edge into one dominant eigenvalue
// of H^2. Stops when successive Rayleigh quotients agree to power_tol
// relatively; a run that hits max_iter returns its last estimate unconverged.
SpectralRadius spectral_radius(const RealMatrix& h, std::mt19937_64& rng, double tol = 1e-12,
                               long max_iter = 200'000);
SpectralRadius spectral_radius(const ComplexMatrix& h, std::mt19937_64& rng,
                               double tol = 1e-12, long max_iter = 200'000);

struct McResult {
  McConfig config;
  std::vector<double> per_trial;  // converged trials, ordered by trial index
  std::vector<std::size_t> failed_trials;
  double mean = 0.0;
  double std = 0.0;         // sample standard deviation (n - 1)
  bool std_defined = true;  // false with fewer than two converged trials
  double elapsed = 0.0;     // seconds
};

McResult mc_experiment(const VarianceMatrix& s, const McConfig& cfg);

}  // namespace specbound
