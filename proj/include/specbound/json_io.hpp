#pragma once

#include <json.hpp>

#include "specbound/bound.hpp"
#include "specbound/combinatorics.hpp"
#include "specbound/monte_carlo.hpp"
#include "specbound/qve.hpp"

namespace specbound {

using Json = nlohmann::ordered_json;

// {n, J, norm_s, w_c, trivial_bound, improved_bound, z[], tol, bracket}
void to_json(Json& j, const BoundReport& r);

// {trials, seed, ensemble, per_trial[], mean, std, failures, ...}
void to_json(Json& j, const McResult& r);

// {tau, found, eta-independent scan metadata}; visited points are omitted.
void to_json(Json& j, const SupportEstimate& e);

void to_json(Json& j, const SpectralProbe& p);

void to_json(Json& j, const OracleViolation& v);

// {k, n_trees, violations[], max_slack, checks}
void to_json(Json& j, const ChoppingReport& r);

}  // namespace specbound
