// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "specbound/bound.hpp"
#include "specbound/combinatorics.hpp"
#include "specbound/errors.hpp"
#include "specbound/monte_carlo.hpp"
#include "specbound/qve.hpp"

using namespace specbound;

namespace {

// Tolerances and windows
constexpr double kTrivialTarget = 4.316, kTrivialTol = 0.01;
constexpr double kWcTarget = 1.115, kWcTol = 0.005;
constexpr double kImprovedTarget = 3.870, kImprovedTol = 0.01;
constexpr double kBoundSeconds = 10.0;
constexpr double kMcMeanLo = 3.54, kMcMeanHi = 3.82;
constexpr double kMcStdLo = 0.01, kMcStdHi = 0.12;
constexpr double kMcSeconds = 120.0;
constexpr double kWignerQveTol = 0.05, kWignerMcTol = 0.08, kMomentTol = 1e-10;
constexpr double kRelTol = 1e-10;
constexpr double kPbotTol = 1e-14;
constexpr double kPoleTol = 1e-9;
constexpr double kRoundoffUlps = 64.0;  // float evaluation on top of the exact tail bound

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void report(int id, const std::string& name, const std::function<void(Outcome&)>& body) {
  Outcome o;
  o.detail.precision(10);
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  if (!o.pass) ++failures;
  std::printf("%s  %d. %s:%s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.str().c_str());
  std::fflush(stdout);
}

struct SeededProfile {
  std::size_t n;
  std::uint64_t seed;
};

const SeededProfile kOracleProfiles[] = {{4, 101}, {6, 202}, {8, 303}, {4, 404}, {6, 505}};

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

int main() {
  const auto exp500 = profiles::exponential(500);
  const auto wigner500 = profiles::wigner(500);

  report(1, "exponential profile N=500, J=50 bound pipeline", [&](Outcome& o) {
    const auto t0 = Clock::now();
    const auto r = support_bound(exp500, 50);
    const double elapsed = seconds_since(t0);
    o.detail << " trivial=" << r.trivial_bound << " w_c=" << r.w_c
             << " improved=" << r.improved_bound << " time=" << elapsed << "s";
    o.require(std::abs(r.trivial_bound - kTrivialTarget) <= kTrivialTol, "trivial 4.316 +- 0.01");
    o.require(std::abs(r.w_c - kWcTarget) <= kWcTol, "w_c 1.115 +- 0.005");
    o.require(std::abs(r.improved_bound - kImprovedTarget) <= kImprovedTol,
              "improved 3.870 +- 0.01");
    o.require(elapsed < kBoundSeconds, "runtime < 10 s");

    // Diagnostic only: the same root with every z_j (j >= 2) moved one index up.
    NormSequence shifted = r.z;
    for (std::size_t j = 1; j + 1 < shifted.z.size(); ++j) shifted.z[j] = r.z.z[j + 1];
    const double w_shift = critical_w(shifted);
    o.detail << " (diagnostic: shifted-index w_c=" << w_shift
             << " improved=" << r.trivial_bound / w_shift << ")";
  });

  report(2, "exponential profile Monte-Carlo window", [&](Outcome& o) {
    McConfig cfg;
    cfg.trials = 10;
    cfg.ensemble = Ensemble::real_symmetric;
    const auto t0 = Clock::now();
    const auto r = mc_experiment(exp500, cfg);
    const double elapsed = seconds_since(t0);
    o.detail << " mean=" << r.mean << " std=" << r.std << " failures=" << r.failed_trials.size()
             << " time=" << elapsed << "s";
    o.require(r.mean >= kMcMeanLo && r.mean <= kMcMeanHi, "mean in [3.54, 3.82]");
    o.require(r.std >= kMcStdLo && r.std <= kMcStdHi, "std in [0.01, 0.12]");
    o.require(r.failed_trials.empty(), "all trials converged");
    o.require(elapsed < kMcSeconds, "runtime < 2 min");
  });

  report(3, "Wigner N=500 sanity chain", [&](Outcome& o) {
    const auto b = support_bound(wigner500, 50);
    const auto q = estimate_support(wigner500);
    McConfig cfg;
    cfg.trials = 10;
    const auto mc = mc_experiment(wigner500, cfg);
    const double proxy = support_from_moments(moment_recursion(wigner500, 20), 20);
    const double catalan_root = std::pow(double(catalan(20)), 1.0 / 40.0);
    o.detail << " improved=" << b.improved_bound << " qve=" << q.tau << " mc=" << mc.mean
             << " moment=" << proxy;
    o.require(std::abs(b.improved_bound - 2.0) <= 2.0 * b.tol, "improved = 2 up to root tol");
    o.require(q.found && std::abs(q.tau - 2.0) <= kWignerQveTol, "qve 2 +- 0.05");
    o.require(std::abs(mc.mean - 2.0) <= kWignerMcTol, "mc 2 +- 0.08");
    o.require(std::abs(proxy - catalan_root) <= kMomentTol, "moment proxy Catalan(20)^(1/40)");
  });

  report(4, "tree sums equal the moment recursion", [&](Outcome& o) {
    std::size_t compared = 0, bad = 0;
    for (const auto& p : kOracleProfiles) {
      const auto s = profiles::random_uniform(p.n, p.seed);
      const auto table = moment_recursion(s, 6);
      for (std::size_t k = 0; k <= 6; ++k) {
        const auto sums = tree_sums(s, k);
        for (std::size_t x = 0; x < p.n; ++x, ++compared)
          if (!close_rel(sums[x], table(x, k), kRelTol)) ++bad;
      }
    }
    o.detail << " compared=" << compared << " exceptions=" << bad;
    o.require(bad == 0, "zero exceptions");
  });

  report(5, "chopping bounds and split monotonicity", [&](Outcome& o) {
    std::size_t checks = 0, violations = 0;
    for (const auto& p : kOracleProfiles) {
      const auto s = profiles::random_uniform(p.n, p.seed);
      for (std::size_t k = 0; k <= 6; ++k) {
        const auto rep = chopping_bound_check(s, k);
        checks += rep.checks;
        violations += rep.violations.size();
      }
    }
    o.detail << " checks=" << checks << " violations=" << violations;
    o.require(checks > 0 && violations == 0, "zero violations");
  });

  report(6, "Markov-chain exactness", [&](Outcome& o) {
    std::size_t transitions = 0, transition_bad = 0;
    for (std::int64_t k = 1; k <= 6; ++k) {
      const auto paths = enumerate_dyck(std::size_t(k));
      for (std::int64_t t = 0; t < 2 * k; ++t)
        for (std::int64_t h = 0; h <= std::min(t, 2 * k - t); ++h) {
          const auto c = transition_count(paths, std::size_t(t), int(h));
          if (c.through == 0) continue;
          ++transitions;
          if (dyck_transition_prob_exact(t, h, k) !=
              Rational(std::int64_t(c.up), std::int64_t(c.through)))
            ++transition_bad;
        }
    }
    std::size_t pbot = 0, pbot_bad = 0;
    for (std::size_t n = 1; n <= 10; ++n) {
      for (int h = 0; h <= int(n) + 1; ++h) {
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
          std::vector<int> omega(n);
          int height = h;
          bool legal = true;
          for (std::size_t i = 0; i < n; ++i) {
            if (height < 0) legal = false;
            omega[i] = (mask >> i) & 1u ? 1 : -1;
            height += omega[i];
          }
          if (!legal) continue;
          ++pbot;
          const auto p = pbot_probability(h, omega);
          if (std::abs(p.product - p.closed_form) > kPbotTol) ++pbot_bad;
        }
      }
    }
    o.detail << " transitions=" << transitions << " mismatches=" << transition_bad
             << " pbot_inputs=" << pbot << " mismatches=" << pbot_bad;
    o.require(transition_bad == 0, "exact transition probabilities");
    o.require(pbot_bad == 0, "product form == closed form");
  });

  report(7, "generating-function consistency", [&](Outcome& o) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_excess = -1.0, worst_pole = 0.0;
    const std::size_t n_max = 20;
    for (int cfg = 0; cfg < 10; ++cfg) {
      NormSequence z{1.0, {1.0}};
      const std::size_t J = 1 + rng() % 6;
      for (std::size_t j = 2; j <= J; ++j) z.z.push_back(u(rng));
      const double w = 0.05 + 0.65 * u(rng);
      const double closed = stopped_walk_generating_function(z, w);
      const double series = stopped_walk_series(z, w, n_max);
      const double tail = std::pow(w, double(n_max + 1)) +
                          kRoundoffUlps * std::numeric_limits<double>::epsilon() * std::abs(closed);
      worst_excess = std::max(worst_excess, std::abs(closed - series) - tail);
      worst_pole = std::max(worst_pole, std::abs(stopped_walk_pole(z) - critical_w(z)));
    }
    o.detail << " worst |closed-series|-tail=" << worst_excess << " worst pole gap=" << worst_pole;
    o.require(worst_excess <= 0.0, "within the geometric tail");
    o.require(worst_pole <= kPoleTol, "pole == w_c to 1e-9");
  });

  report(8, "ordering invariant on test profiles", [&](Outcome& o) {
    struct Named {
      std::string name;
      VarianceMatrix s;
    };
    std::vector<double> band(300 * 300);
    for (std::size_t i = 0; i < 300; ++i)
      for (std::size_t j = 0; j < 300; ++j)
        band[i * 300 + j] = (std::abs(double(i) - double(j)) < 30 ? 1.0 : 0.1) / 300.0;
    const std::vector<Named> cases = {
        {"wigner500", wigner500},
        {"expprofile500", exp500},
        {"random300", profiles::random_uniform(300, 11).scaled(1.0 / 300.0)},
        {"band300", VarianceMatrix(300, band)}};
    const SupportOptions opts;
    for (const auto& c : cases) {
      const auto b = support_bound(c.s, 50);
      const auto q = estimate_support(c.s, opts);
      McConfig cfg;
      cfg.trials = 10;
      const auto mc = mc_experiment(c.s, cfg);
      const bool ok = mc.mean - 3.0 * mc.std <= q.tau + opts.grid_step &&
                      q.tau <= b.improved_bound + opts.grid_step &&
                      b.improved_bound <= b.trivial_bound;
      o.detail << " " << c.name << "{mc=" << mc.mean << "+-" << mc.std << " qve=" << q.tau
               << " improved=" << b.improved_bound << " trivial=" << b.trivial_bound << "}";
      o.require(ok, c.name);
    }
  });

  report(9, "improved bound monotone in J", [&](Outcome& o) {
    double previous = 0.0;
    bool nonincreasing = true, strict = false;
    for (std::size_t J : {1, 2, 5, 10, 25, 50}) {
      const double v = support_bound(exp500, J).improved_bound;
      o.detail << " J" << J << "=" << v;
      if (J > 1) {
        nonincreasing = nonincreasing && v <= previous;
        strict = strict || v < previous;
      }
      previous = v;
    }
    o.require(nonincreasing, "nonincreasing");
    o.require(strict, "strict decrease somewhere");
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
