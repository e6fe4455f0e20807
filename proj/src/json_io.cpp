#include "specbound/json_io.hpp"

namespace specbound {

void to_json(Json& j, const BoundReport& r) {
  j = Json{{"n", r.n},
           {"J", r.J},
           {"norm_s", r.norm_s},
           {"w_c", r.w_c},
           {"trivial_bound", r.trivial_bound},
           {"improved_bound", r.improved_bound},
           {"z", r.z.z},
           {"tol", r.tol},
           {"w_c_bracket", {r.bracket.lo, r.bracket.hi}}};
}

void to_json(Json& j, const McResult& r) {
  j = Json{{"trials", r.config.trials},
           {"seed", r.config.seed},
           {"ensemble", to_string(r.config.ensemble)},
           {"per_trial", r.per_trial},
           {"mean", r.mean},
           {"std", r.std},
           {"std_defined", r.std_defined},
           {"failures", r.failed_trials.size()},
           {"failed_trials", r.failed_trials},
           {"power_tol", r.config.power_tol},
           {"power_max_iter", r.config.power_max_iter},
           {"elapsed", r.elapsed}};
}

void to_json(Json& j, const SupportEstimate& e) {
  j = Json{{"support", e.tau},
           {"found", e.found},
           {"scan_max", e.scan_max},
           {"probes", e.visited.size()}};
}

void to_json(Json& j, const SpectralProbe& p) {
  Json m = Json::array();
  for (const auto& v : p.m) m.push_back({v.real(), v.imag()});
  j = Json{{"z", {p.z.real(), p.z.imag()}},
           {"m", m},
           {"iterations", p.iterations},
           {"residual", p.residual},
           {"damped", p.damped}};
}

void to_json(Json& j, const OracleViolation& v) {
  j = Json{{"check", v.check}, {"path", v.path}, {"lhs", v.lhs}, {"rhs", v.rhs}};
}

void to_json(Json& j, const ChoppingReport& r) {
  j = Json{{"k", r.k},
           {"n_trees", r.n_trees},
           {"checks", r.checks},
           {"violations", r.violations},
           {"max_slack", r.max_slack}};
}

}  // namespace specbound
