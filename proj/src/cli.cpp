#include "specbound/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "specbound/bound.hpp"
#include "specbound/combinatorics.hpp"
#include "specbound/errors.hpp"
#include "specbound/json_io.hpp"
#include "specbound/monte_carlo.hpp"
#include "specbound/parallel.hpp"
#include "specbound/qve.hpp"

namespace specbound {

namespace {

struct SourceOptions {
  std::string profile;
  std::string matrix;
  std::size_t n = 100;
  std::uint64_t profile_seed = 7;
  bool repair = false;
};

struct ResolvedMatrix {
  VarianceMatrix s;
  Json description;
  bool gram = false;
};

void add_source_options(CLI::App* cmd, SourceOptions& src) {
  cmd->add_option("--profile", src.profile,
                  "built-in profile: wigner, expprofile, random, gram:<path>");
  cmd->add_option("--matrix", src.matrix, "matrix file (plain or csv)");
  cmd->add_option("--n", src.n, "dimension for built-in profiles")->check(CLI::PositiveNumber);
  cmd->add_option("--profile-seed", src.profile_seed, "seed for the random profile");
  cmd->add_flag("--repair", src.repair, "symmetrize and clamp invalid matrix files");
}

ResolvedMatrix resolve(const SourceOptions& src, std::ostream& diag) {
  if (!src.profile.empty() && !src.matrix.empty()) {
    throw InputError("give either --profile or --matrix, not both");
  }
  const Validation mode = src.repair ? Validation::repair : Validation::strict;
  if (!src.matrix.empty()) {
    VarianceMatrix s = load_variance_matrix(src.matrix, mode);
    for (const auto& msg : s.repairs()) diag << "warning: " << msg << '\n';
    Json d{{"kind", "file"}, {"path", src.matrix}, {"repair", src.repair}, {"n", s.size()}};
    return {std::move(s), std::move(d), false};
  }
  if (src.profile.empty()) throw InputError("no matrix source: use --profile or --matrix");
  if (src.profile == "wigner") {
    return {profiles::wigner(src.n), Json{{"kind", "profile"}, {"name", "wigner"}, {"n", src.n}},
            false};
  }
  if (src.profile == "expprofile") {
    return {profiles::exponential(src.n),
            Json{{"kind", "profile"}, {"name", "expprofile"}, {"n", src.n}}, false};
  }
  if (src.profile == "random") {
    return {profiles::random_uniform(src.n, src.profile_seed),
            Json{{"kind", "profile"},
                 {"name", "random"},
                 {"n", src.n},
                 {"profile_seed", src.profile_seed}},
            false};
  }
  if (src.profile.rfind("gram:", 0) == 0) {
    const std::string path = src.profile.substr(5);
    const RectMatrix rect = load_rect_matrix(path);
    VarianceMatrix s = gram_linearize(rect);
    Json d{{"kind", "gram"},
           {"path", path},
           {"rows", rect.rows},
           {"cols", rect.cols},
           {"n", s.size()}};
    return {std::move(s), std::move(d), true};
  }
  throw InputError("unknown profile '" + src.profile + "'");
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

class Manifest {
 public:
  Manifest() : started_(utc_timestamp()),
        clock_(std::chrono::steady_clock::now()) {}

  Json finish(const std::string& command, Json parameters, Json source) const {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_).count();
    return Json{{"command", command},
                {"tool_version", kToolVersion},
                {"parameters", std::move(parameters)},
                {"source", std::move(source)},
                {"threads", thread_budget()},
                {"started_at", started_},
                {"wall_clock_seconds", elapsed}};
  }

 private:
  std::string started_;
  std::chrono::steady_clock::time_point clock_;
};

struct BoundOptions {
  std::size_t J = 50;
  double tol = kDefaultRootTol;
};

struct QveCliOptions {
  SupportOptions support;
  std::string csv;
  bool scan_all = false;
};

struct OracleOptions {
  std::size_t k = 5;
};

struct ReportOptions {
  std::size_t kmax = 100;
};

void add_bound_options(CLI::App* cmd, BoundOptions& o) {
  cmd->add_option("--j", o.J, "number of norm ratios z_j")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", o.tol, "bisection tolerance for w_c")->check(CLI::PositiveNumber);
}

void add_qve_options(CLI::App* cmd, QveCliOptions& o) {
  cmd->add_option("--eta", o.support.eta, "imaginary part of the probes")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--grid-step", o.support.grid_step, "tau grid spacing")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threshold", o.support.threshold, "density threshold for the edge")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--qve-tol", o.support.qve.tol, "fixed-point tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", o.support.qve.max_iter, "fixed-point iteration cap")
      ->check(CLI::PositiveNumber);
}

void add_mc_options(CLI::App* cmd, McConfig& c, std::string& ensemble) {
  cmd->add_option("--trials", c.trials, "number of sampled matrices");
  cmd->add_option("--seed", c.seed, "base seed; trial t uses the stream (seed, t)");
  cmd->add_option("--ensemble", ensemble, "real-symmetric or complex-hermitian");
  cmd->add_option("--power-tol", c.power_tol, "relative Rayleigh quotient tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--power-max-iter", c.power_max_iter, "power iteration cap")
      ->check(CLI::PositiveNumber);
}

Json bound_parameters(const BoundOptions& o) { return Json{{"J", o.J}, {"tol", o.tol}}; }

Json qve_parameters(const QveCliOptions& o) {
  return Json{{"eta", o.support.eta},
              {"grid_step", o.support.grid_step},
              {"threshold", o.support.threshold},
              {"qve_tol", o.support.qve.tol},
              {"max_iter", o.support.qve.max_iter}};
}

Json mc_parameters(const McConfig& c) {
  return Json{{"trials", c.trials},
              {"seed", c.seed},
              {"ensemble", to_string(c.ensemble)},
              {"power_tol", c.power_tol},
              {"power_max_iter", c.power_max_iter}};
}

void merge(Json& into, const Json& from) {
  for (auto it = from.begin(); it != from.end(); ++it) into[it.key()] = it.value();
}

void write_csv(const std::string& path, const std::vector<DensityPoint>& points) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write csv '" + path + "'");
  f << "tau,density\n" << std::setprecision(17);
  for (const auto& p : points) f << p.tau << ',' << p.density << '\n';
}

Json run_bound(const ResolvedMatrix& m, const BoundOptions& o, std::ostream& summary) {
  const BoundReport r = support_bound(m.s, o.J, o.tol);
  summary << std::setprecision(6) << "n = " << r.n << ", J = " << r.J << "\n"
          << "  ||S||          = " << r.norm_s << "\n"
          << "  w_c            = " << r.w_c << "\n"
          << "  trivial bound  = " << r.trivial_bound << "\n"
          << "  improved bound = " << r.improved_bound << "\n";
  Json j = r;
  if (m.gram) {
    j["gram_note"] = "bounds refer to the linearized matrix; square them to bound XX^*";
    j["gram_trivial_bound"] = r.trivial_bound * r.trivial_bound;
    j["gram_improved_bound"] = r.improved_bound * r.improved_bound;
  }
  return j;
}

Json run_qve(const ResolvedMatrix& m, const QveCliOptions& o, std::ostream& summary) {
  const SupportEstimate est = estimate_support(m.s, o.support);
  if (!o.csv.empty()) {
    if (o.scan_all && est.scan_max > 0.0) {
      std::vector<double> taus;
      const auto top = static_cast<long>(std::floor(est.scan_max / o.support.grid_step + 1e-9));
      for (long k = 0; k <= top; ++k) taus.push_back(static_cast<double>(k) * o.support.grid_step);
      write_csv(o.csv, density_scan(m.s, taus, o.support.eta, o.support.qve));
    } else {
      write_csv(o.csv, est.visited);
    }
  }
  summary << std::setprecision(6);
  if (est.found) {
    summary << "estimated max supp rho = " << est.tau << "\n";
  } else {
    summary << "density never exceeded the threshold; support reported as 0\n";
  }
  Json j = est;
  j["csv"] = o.csv;
  return j;
}

Json run_mc(const ResolvedMatrix& m, const McConfig& c, std::ostream& summary) {
  const McResult r = mc_experiment(m.s, c);
  summary << std::setprecision(6) << "|lambda|_max over " << r.per_trial.size()
          << " trials: mean = " << r.mean << ", std = " << r.std
          << (r.std_defined ? "" : " (undefined)") << ", failures = " << r.failed_trials.size()
          << "\n";
  return r;
}

Json run_oracle(const ResolvedMatrix& m, const OracleOptions& o, std::ostream& summary) {
  const std::size_t k = o.k;
  if (k > 10) throw SizeGuard("oracle enumeration supports k <= 10");

  ChoppingReport chopping = chopping_bound_check(m.s, k);
  std::vector<OracleViolation> violations = chopping.violations;

  // Tree sums against the moment recursion, every order up to k.
  const MomentTable table = moment_recursion(m.s, k);
  std::vector<std::vector<double>> sums_by_order;
  for (std::size_t order = 0; order <= k; ++order) {
    const std::vector<double> sums = tree_sums(m.s, order);
    for (std::size_t x = 0; x < sums.size(); ++x) {
      const double c = table(x, order);
      if (std::abs(sums[x] - c) > 1e-10 * std::max(std::abs(c), std::abs(sums[x]))) {
        violations.push_back({"tree sum == c_{x,k}",
                              "k=" + std::to_string(order) + " x=" + std::to_string(x), sums[x],
                              c});
      }
    }
    sums_by_order.push_back(sums);
  }
  std::vector<std::vector<double>> recursion;
  for (std::size_t order = 0; order <= k; ++order) {
    std::vector<double> col;
    for (std::size_t x = 0; x < table.n(); ++x) col.push_back(table(x, order));
    recursion.push_back(std::move(col));
  }

  // Transition probabilities as exact rationals.
  std::size_t transition_checks = 0;
  if (k >= 1) {
    const std::vector<DyckPath> paths = enumerate_dyck(k);
    for (std::size_t t = 0; t < 2 * k; ++t) {
      for (std::size_t h = 0; h <= std::min(t, 2 * k - t); ++h) {
        const ConditionalCount c = transition_count(paths, t, static_cast<int>(h));
        if (c.through == 0) continue;
        ++transition_checks;
        const Rational expected(static_cast<std::int64_t>(c.up),
                                static_cast<std::int64_t>(c.through));
        const Rational formula = dyck_transition_prob_exact(
            static_cast<std::int64_t>(t), static_cast<std::int64_t>(h),
            static_cast<std::int64_t>(k));
        if (expected != formula) {
          violations.push_back({"p_{t,h} == conditional count",
                                "t=" + std::to_string(t) + " h=" + std::to_string(h),
                                boost::rational_cast<double>(formula),
                                boost::rational_cast<double>(expected)});
        }
      }
    }
  }

  summary << "k = " << k << ": " << chopping.n_trees << " trees, " << violations.size()
          << " violations\n";
  Json j{{"k", k},
         {"n_trees", chopping.n_trees},
         {"violations", violations},
         {"max_slack", chopping.max_slack},
         {"chopping_checks", chopping.checks},
         {"transition_checks", transition_checks},
         {"tree_sums", sums_by_order},
         {"recursion", recursion}};
  return j;
}

Json run_report(const ResolvedMatrix& m, const BoundOptions& bo, const QveCliOptions& qo,
                const McConfig& mc, const ReportOptions& ro, std::ostream& summary) {
  const BoundReport bound = support_bound(m.s, bo.J, bo.tol);
  const SupportEstimate qve = estimate_support(m.s, qo.support);
  const MomentTable table = moment_recursion(m.s, ro.kmax);
  const double proxy = ro.kmax >= 1 ? support_from_moments(table, ro.kmax) : 0.0;
  const McResult sample = mc_experiment(m.s, mc);

  const double step = qo.support.grid_step;
  const bool ordering = sample.mean - 3.0 * sample.std <= qve.tau + step &&
                        qve.tau <= bound.improved_bound + step &&
                        bound.improved_bound <= bound.trivial_bound;
  summary << std::setprecision(6) << "  mc mean +- std     = " << sample.mean << " +- "
          << sample.std << "\n"
          << "  moment proxy (k=" << ro.kmax << ") = " << proxy << "\n"
          << "  qve support        = " << qve.tau << (qve.found ? "" : " (not found)") << "\n"
          << "  improved bound     = " << bound.improved_bound << "  (w_c = " << bound.w_c
          << ")\n"
          << "  trivial bound      = " << bound.trivial_bound << "\n"
          << "  ordering " << (ordering ? "holds" : "VIOLATED") << "\n";

  Json j{{"trivial_bound", bound.trivial_bound},
         {"improved_bound", bound.improved_bound},
         {"w_c", bound.w_c},
         {"qve_support", qve.tau},
         {"qve_found", qve.found},
         {"moment_proxy", proxy},
         {"moment_kmax", ro.kmax},
         {"mc_mean", sample.mean},
         {"mc_std", sample.std},
         {"mc_failures", sample.failed_trials.size()},
         {"ordering_holds", ordering},
         {"bound", bound},
         {"qve", qve},
         {"mc", sample}};
  if (m.gram) {
    j["gram_note"] = "all values refer to the linearized matrix; square them for XX^*";
    j["gram_improved_bound"] = bound.improved_bound * bound.improved_bound;
    j["gram_trivial_bound"] = bound.trivial_bound * bound.trivial_bound;
  }
  return j;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Support bounds for Wigner-type random matrices"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  SourceOptions src;
  BoundOptions bound_opts;
  QveCliOptions qve_opts;
  McConfig mc_cfg;
  std::string ensemble = "real-symmetric";
  OracleOptions oracle_opts;
  ReportOptions report_opts;
  std::string out_path;

  auto* bound = app.add_subcommand("bound", "support bound from norms of powers of S");
  auto* qve = app.add_subcommand("qve", "numerical support estimate from the density of states");
  auto* mc = app.add_subcommand("mc", "Monte-Carlo largest eigenvalue");
  auto* oracle = app.add_subcommand("oracle", "exhaustive tree and Dyck path checks");
  auto* report = app.add_subcommand("report", "all estimates side by side");

  for (auto* cmd : {bound, qve, mc, oracle, report}) {
    add_source_options(cmd, src);
    cmd->add_option("--out", out_path, "write the JSON report to this file");
  }
  add_bound_options(bound, bound_opts);
  add_qve_options(qve, qve_opts);
  qve->add_option("--csv", qve_opts.csv, "write (tau, density) rows here");
  qve->add_flag("--scan-all", qve_opts.scan_all, "csv covers the full grid, not just the edge scan");
  add_mc_options(mc, mc_cfg, ensemble);
  oracle->add_option("--k", oracle_opts.k, "number of tree edges");
  add_bound_options(report, bound_opts);
  add_qve_options(report, qve_opts);
  add_mc_options(report, mc_cfg, ensemble);
  report->add_option("--kmax", report_opts.kmax, "order of the moment proxy")
      ->check(CLI::PositiveNumber);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  const bool to_file = !out_path.empty();
  std::ostream& summary = to_file ? out : err;
  try {
    mc_cfg.ensemble = parse_ensemble(ensemble);
    if (oracle->parsed() && src.profile.empty() && src.matrix.empty()) {
      src.profile = "random";
      if (oracle->count("--n") == 0) src.n = 6;
    }
    const Manifest manifest;
    const ResolvedMatrix m = resolve(src, err);

    Json result;
    Json params;
    std::string name;
    if (bound->parsed()) {
      name = "bound";
      params = bound_parameters(bound_opts);
      result = run_bound(m, bound_opts, summary);
    } else if (qve->parsed()) {
      name = "qve";
      params = qve_parameters(qve_opts);
      params["csv"] = qve_opts.csv;
      params["scan_all"] = qve_opts.scan_all;
      result = run_qve(m, qve_opts, summary);
    } else if (mc->parsed()) {
      name = "mc";
      if (mc_cfg.trials == 0) throw InputError("--trials must be at least 1");
      params = mc_parameters(mc_cfg);
      result = run_mc(m, mc_cfg, summary);
    } else if (oracle->parsed()) {
      name = "oracle";
      params = Json{{"k", oracle_opts.k}};
      result = run_oracle(m, oracle_opts, summary);
    } else {
      name = "report";
      if (mc_cfg.trials == 0) throw InputError("--trials must be at least 1");
      params = bound_parameters(bound_opts);
      merge(params, qve_parameters(qve_opts));
      merge(params, mc_parameters(mc_cfg));
      params["kmax"] = report_opts.kmax;
      result = run_report(m, bound_opts, qve_opts, mc_cfg, report_opts, summary);
    }
    result["manifest"] = manifest.finish(name, params, m.description);

    const std::string text = result.dump(2);
    if (to_file) {
      std::ofstream f(out_path);
      if (!f) throw InputError("cannot write '" + out_path + "'");
      f << text << '\n';
    } else {
      out << text << '\n';
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace specbound
