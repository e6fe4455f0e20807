#include "specbound/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "specbound/bound.hpp"
#include "specbound/errors.hpp"

namespace specbound {

DyckPath::DyckPath(std::vector<int> steps) : steps_(std::move(steps)) {
  int height = 0;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (steps_[i] != 1 && steps_[i] != -1) {
      throw DomainError("Dyck path steps must be +1 or -1");
    }
    height += steps_[i];
    if (height < 0) {
      throw DomainError("Dyck path goes below zero at step " + std::to_string(i));
    }
  }
  if (height != 0) throw DomainError("Dyck path does not return to zero");
}

DyckPath DyckPath::from_brackets(std::string_view brackets) {
  std::vector<int> steps;
  steps.reserve(brackets.size());
  for (char c : brackets) {
    if (c == '(') {
      steps.push_back(1);
    } else if (c == ')') {
      steps.push_back(-1);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "' in bracket string");
    }
  }
  return DyckPath(std::move(steps));
}

std::vector<int> DyckPath::heights() const {
  std::vector<int> h(steps_.size() + 1, 0);
  for (std::size_t i = 0; i < steps_.size(); ++i) h[i + 1] = h[i] + steps_[i];
  return h;
}

std::string DyckPath::brackets() const {
  std::string out;
  out.reserve(steps_.size());
  for (int s : steps_) out.push_back(s > 0 ? '(' : ')');
  return out;
}

std::size_t PlaneForest::edge_count() const {
  std::size_t edges = 0;
  for (const auto& c : children) edges += c.size();
  return edges;
}

int PlaneForest::add_vertex(int parent_vertex, int level_value) {
  const int id = static_cast<int>(parent.size());
  parent.push_back(parent_vertex);
  children.emplace_back();
  level.push_back(level_value);
  if (parent_vertex < 0) {
    roots.push_back(id);
  } else {
    children.at(parent_vertex).push_back(id);
  }
  return id;
}

std::vector<std::string> PlaneForest::component_brackets() const {
  std::vector<std::string> out;
  out.reserve(roots.size());
  for (int r : roots) out.push_back(component_path(*this, r).brackets());
  return out;
}

std::uint64_t catalan(std::size_t k) {
  std::uint64_t c = 1;
  for (std::size_t i = 0; i < k; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

std::vector<DyckPath> enumerate_dyck(std::size_t k) {
  if (k > 10) throw SizeGuard("enumerate_dyck supports k <= 10");
  std::vector<DyckPath> out;
  out.reserve(catalan(k));
  std::vector<int> steps;
  steps.reserve(2 * k);
  std::function<void(std::size_t, std::size_t)> grow = [&](std::size_t open, std::size_t close) {
    if (close == k) {
      out.emplace_back(steps);
      return;
    }
    if (open < k) {
      steps.push_back(1);
      grow(open + 1, close);
      steps.pop_back();
    }
    if (close < open) {
      steps.push_back(-1);
      grow(open, close + 1);
      steps.pop_back();
    }
  };
  grow(0, 0);
  return out;
}

PlaneTree path_to_tree(const DyckPath& path) {
  PlaneTree tree;
  int current = tree.add_vertex(-1, 0);
  for (int step : path.steps()) {
    if (step > 0) {
      current = tree.add_vertex(current, tree.level[current] + 1);
    } else {
      current = tree.parent[current];
    }
  }
  return tree;
}

DyckPath component_path(const PlaneForest& forest, int root) {
  std::vector<int> steps;
  std::function<void(int)> walk = [&](int v) {
    for (int c : forest.children.at(v)) {
      steps.push_back(1);
      walk(c);
      steps.push_back(-1);
    }
  };
  walk(root);
  return DyckPath(std::move(steps));
}

DyckPath tree_to_path(const PlaneTree& tree) {
  if (tree.roots.size() != 1) {
    throw InputError("tree_to_path needs a single-component tree");
  }
  return component_path(tree, tree.roots.front());
}

std::vector<double> rooted_values(const VarianceMatrix& s, const PlaneForest& forest, int root) {
  const std::size_t n = s.size();
  std::function<std::vector<double>(int)> contract = [&](int v) {
    std::vector<double> w(n, 1.0), tmp(n);
    for (int c : forest.children.at(v)) {
      const std::vector<double> wc = contract(c);
      s.multiply(wc, tmp);
      for (std::size_t x = 0; x < n; ++x) w[x] *= tmp[x];
    }
    return w;
  };
  return contract(root);
}

double tree_val(const VarianceMatrix& s, const PlaneTree& tree, std::size_t x) {
  if (tree.roots.size() != 1) throw InputError("tree_val needs a single-component tree");
  if (x >= s.size()) throw DomainError("root label out of range");
  return rooted_values(s, tree, tree.roots.front())[x];
}

double tree_val_naive(const VarianceMatrix& s, const PlaneTree& tree, std::size_t x) {
  if (tree.roots.size() != 1) throw InputError("tree_val needs a single-component tree");
  if (x >= s.size()) throw DomainError("root label out of range");
  const std::size_t n = s.size();
  const std::size_t free = tree.vertex_count() - 1;
  const double terms = std::pow(static_cast<double>(n), static_cast<double>(free));
  if (terms > 1e7) throw SizeGuard("naive labeling sum exceeds 1e7 terms");

  const int root = tree.roots.front();
  std::vector<int> others;
  for (int v = 0; v < static_cast<int>(tree.vertex_count()); ++v) {
    if (v != root) others.push_back(v);
  }
  std::vector<std::size_t> label(tree.vertex_count(), 0);
  label[root] = x;
  double total = 0.0;
  while (true) {
    double product = 1.0;
    for (int v : others) product *= s(label[tree.parent[v]], label[v]);
    total += product;
    std::size_t i = 0;
    for (; i < others.size(); ++i) {
      if (++label[others[i]] < n) break;
      label[others[i]] = 0;
    }
    if (i == others.size()) break;
  }
  return total;
}

double forest_val(const VarianceMatrix& s, const PlaneForest& forest) {
  double value = 1.0;
  for (int r : forest.roots) {
    const std::vector<double> w = rooted_values(s, forest, r);
    value *= *std::max_element(w.begin(), w.end());
  }
  return value;
}

PlaneForest split_vertex(const PlaneForest& forest, int v, SplitMode mode) {
  if (v < 0 || v >= static_cast<int>(forest.vertex_count())) {
    throw InvalidVertex("vertex " + std::to_string(v) + " does not exist");
  }
  const auto& kids = forest.children[v];
  if (kids.empty()) throw InvalidVertex("vertex " + std::to_string(v) + " is a leaf");
  if (forest.is_root(v) && kids.size() == 1) {
    throw InvalidVertex("vertex " + std::to_string(v) + " is a root with one child");
  }

  PlaneForest out = forest;
  std::vector<int> keep, detach;
  switch (mode) {
    case SplitMode::complete:
      detach = kids;
      break;
    case SplitMode::leftmost:
      keep = {kids.front()};
      detach.assign(kids.begin() + 1, kids.end());
      break;
    case SplitMode::rightmost:
      keep = {kids.back()};
      detach.assign(kids.begin(), kids.end() - 1);
      break;
  }
  out.children[v] = keep;
  for (int c : detach) {
    const int copy = out.add_vertex(-1, forest.level[v]);
    out.children[copy].push_back(c);
    out.parent[c] = copy;
  }
  return out;
}

PlaneForest chop_all(const PlaneForest& forest, SplitMode mode) {
  if (mode == SplitMode::complete) {
    throw DomainError("chop_all uses almost-complete (leftmost or rightmost) splits");
  }
  PlaneForest out = forest;
  const int original = static_cast<int>(forest.vertex_count());
  for (int v = 0; v < original; ++v) {
    if (out.children[v].size() >= 2) out = split_vertex(out, v, mode);
  }
  return out;
}

RunStats run_statistics(std::span<const int> steps, std::size_t J) {
  if (J == 0) throw DomainError("run_statistics requires J >= 1");
  RunStats stats;
  stats.up.assign(J, 0);
  stats.down.assign(J, 0);
  std::size_t i = 0;
  while (i < steps.size()) {
    std::size_t j = i;
    while (j < steps.size() && steps[j] == steps[i]) ++j;
    const std::size_t len = j - i;
    auto& bucket = steps[i] > 0 ? stats.up : stats.down;
    auto& overflow = steps[i] > 0 ? stats.up_overflow : stats.down_overflow;
    if (len <= J) {
      ++bucket[len - 1];
    } else {
      overflow.push_back(len);
    }
    i = j;
  }
  return stats;
}

double z_power(std::span<const std::size_t> counts, const NormSequence& z) {
  double w = 1.0;
  const std::size_t limit = std::min(counts.size(), z.J());
  for (std::size_t j = 1; j <= limit; ++j) {
    if (counts[j - 1] > 0) w *= std::pow(z[j], static_cast<double>(counts[j - 1]));
  }
  return w;
}

std::vector<double> tree_sums(const VarianceMatrix& s, std::size_t k) {
  std::vector<double> sums(s.size(), 0.0);
  for (const DyckPath& p : enumerate_dyck(k)) {
    const PlaneTree t = path_to_tree(p);
    const std::vector<double> w = rooted_values(s, t, t.roots.front());
    for (std::size_t x = 0; x < sums.size(); ++x) sums[x] += w[x];
  }
  return sums;
}

ChoppingReport chopping_bound_check(const VarianceMatrix& s, std::size_t k) {
  constexpr double kRel = 1e-12;
  constexpr double kIdentityRel = 1e-10;
  ChoppingReport report;
  report.k = k;
  const NormSequence z = norm_sequence(s, std::max<std::size_t>(k, 1));
  const double scale = std::pow(z.norm_s, static_cast<double>(k));

  auto inequality = [&](const std::string& check, const std::string& path, double lhs,
                        double rhs) {
    ++report.checks;
    if (rhs > 0.0) report.max_slack = std::max(report.max_slack, lhs / rhs - 1.0);
    if (lhs > rhs * (1.0 + kRel)) report.violations.push_back({check, path, lhs, rhs});
  };
  auto identity = [&](const std::string& check, const std::string& path, double lhs,
                      double rhs) {
    ++report.checks;
    if (std::abs(lhs - rhs) > kIdentityRel * std::max(std::abs(lhs), std::abs(rhs))) {
      report.violations.push_back({check, path, lhs, rhs});
    }
  };

  for (const DyckPath& p : enumerate_dyck(k)) {
    ++report.n_trees;
    const std::string name = p.brackets();
    const PlaneTree tree = path_to_tree(p);
    const double val = forest_val(s, tree);
    const RunStats runs = run_statistics(p.steps(), std::max<std::size_t>(k, 1));
    const double bound_up = scale * z_power(runs.up, z);
    const double bound_down = scale * z_power(runs.down, z);
    inequality("val <= ||S||^k z^U", name, val, bound_up);
    inequality("val <= ||S||^k z^D", name, val, bound_down);
    identity("val(leftmost chop) == ||S||^k z^U", name,
             forest_val(s, chop_all(tree, SplitMode::leftmost)), bound_up);
    identity("val(rightmost chop) == ||S||^k z^D", name,
             forest_val(s, chop_all(tree, SplitMode::rightmost)), bound_down);

    for (int v = 0; v < static_cast<int>(tree.vertex_count()); ++v) {
      const auto c = tree.children[v].size();
      if (c == 0 || (tree.is_root(v) && c == 1)) continue;
      for (SplitMode mode : {SplitMode::complete, SplitMode::leftmost, SplitMode::rightmost}) {
        inequality("val monotone under split", name + " @" + std::to_string(v), val,
                   forest_val(s, split_vertex(tree, v, mode)));
      }
    }
    // Successive splits along a full chop.
    for (SplitMode mode : {SplitMode::leftmost, SplitMode::rightmost}) {
      PlaneForest f = tree;
      double previous = val;
      for (int v = 0; v < static_cast<int>(tree.vertex_count()); ++v) {
        if (f.children[v].size() < 2) continue;
        f = split_vertex(f, v, mode);
        const double next = forest_val(s, f);
        inequality("val monotone along chop", name + " @" + std::to_string(v), previous, next);
        previous = next;
      }
    }
  }
  return report;
}

Rational dyck_transition_prob_exact(std::int64_t t, std::int64_t h, std::int64_t k) {
  if (t < 0 || h < 0 || h > t || h > 2 * k - t || t >= 2 * k) {
    throw DomainError("(t, h) lies outside the Dyck triangle");
  }
  return Rational(1, 2) * Rational(h + 2, h + 1) * Rational(2 * k - t - h, 2 * k - t);
}

double dyck_transition_prob(std::int64_t t, std::int64_t h, std::int64_t k) {
  return boost::rational_cast<double>(dyck_transition_prob_exact(t, h, k));
}

ConditionalCount transition_count(std::span<const DyckPath> paths, std::size_t t, int h) {
  ConditionalCount count;
  for (const DyckPath& p : paths) {
    const auto steps = p.steps();
    if (t >= steps.size()) continue;
    int height = 0;
    for (std::size_t i = 0; i < t; ++i) height += steps[i];
    if (height != h) continue;
    ++count.through;
    if (steps[t] > 0) ++count.up;
  }
  return count;
}

PbotProbability pbot_probability(int h, std::span<const int> omega) {
  if (h < 0) throw DomainError("starting height must be nonnegative");
  PbotProbability out;
  double product = 1.0;
  int height = h;
  int delta = 0;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (omega[i] != 1 && omega[i] != -1) throw DomainError("omega entries must be +-1");
    if (height < 0) {
      throw DomainError("height becomes negative before step " + std::to_string(i + 1));
    }
    const double up = 0.5 * (height + 2.0) / (height + 1.0);
    product *= omega[i] > 0 ? up : 1.0 - up;
    height += omega[i];
    delta += omega[i];
  }
  out.product = product;
  out.closed_form = std::ldexp(1.0, -static_cast<int>(omega.size())) * (h + 1.0 + delta) /
                    (h + 1.0);
  if (std::abs(out.product - out.closed_form) > 1e-14) {
    throw NumericError("P^bot product and closed form disagree");
  }
  return out;
}

namespace {

// A(w) = sum_{j<=J} (w/2)^j z_j + sum_{j>J} (w/2)^j and its w-derivative.
struct RunWeight {
  double value = 0.0;
  double derivative = 0.0;
};

RunWeight run_weight(const NormSequence& z, double w) {
  const double x = 0.5 * w;
  RunWeight a;
  double power = 1.0;  // x^{j-1}
  for (std::size_t j = 1; j <= z.J(); ++j) {
    a.derivative += static_cast<double>(j) * power * z[j];
    power *= x;
    a.value += power * z[j];
  }
  // power == x^J; tail x^{J+1}/(1-x).
  const double J = static_cast<double>(z.J());
  a.value += power * x / (1.0 - x);
  a.derivative += ((J + 1.0) * power * (1.0 - x) + power * x) / ((1.0 - x) * (1.0 - x));
  a.derivative *= 0.5;
  return a;
}

double up_run_weight(std::uint32_t mask, std::size_t n, const NormSequence& z) {
  double weight = 1.0;
  std::size_t run = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    const bool up = i < n && ((mask >> i) & 1U);
    if (up) {
      ++run;
    } else if (run > 0) {
      if (run <= z.J()) weight *= z[run];
      run = 0;
    }
  }
  return weight;
}

std::vector<std::size_t> run_vector(std::uint32_t mask, std::size_t n, bool up) {
  std::vector<std::size_t> counts(n, 0);
  std::size_t run = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    const bool match = i < n && (((mask >> i) & 1U) != 0) == up;
    if (match) {
      ++run;
    } else if (run > 0) {
      ++counts[run - 1];
      run = 0;
    }
  }
  return counts;
}

}  // namespace

double stopped_walk_generating_function(const NormSequence& z, double w) {
  if (!(w >= 0.0) || w >= critical_w(z)) {
    throw DomainError("generating function needs 0 <= w < w_c");
  }
  const RunWeight a = run_weight(z, w);
  return (1.0 - w) * (1.0 + a.value) / phi(w, z);
}

double up_run_expectation(const NormSequence& z, std::size_t n) {
  if (n > 22) throw SizeGuard("walk enumeration supports n <= 22");
  const std::uint32_t count = 1U << n;
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < count; ++mask) total += up_run_weight(mask, n, z);
  return total / static_cast<double>(count);
}

double stopped_walk_series(const NormSequence& z, double w, std::size_t n_max) {
  double total = 0.0;
  double power = 1.0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    total += power * up_run_expectation(z, n);
    power *= w;
  }
  return (1.0 - w) * total;
}

double stopped_walk_pole(const NormSequence& z, double tol) {
  // 1/G(w) = 1/(1 + A(w)) - w/2 is decreasing on (0, 2).
  auto reciprocal = [&](double w) {
    const RunWeight a = run_weight(z, w);
    return std::pair{1.0 / (1.0 + a.value) - 0.5 * w,
                     -a.derivative / ((1.0 + a.value) * (1.0 + a.value)) - 0.5};
  };
  double lo = 0.0, hi = std::nextafter(2.0, 0.0);
  double w = 1.0;
  for (int it = 0; it < 500; ++it) {
    const auto [r, dr] = reciprocal(w);
    if (r == 0.0) return w;
    if (r > 0.0) {
      lo = w;
    } else {
      hi = w;
    }
    double next = w - r / dr;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - w) <= tol * std::max(1.0, w) || hi - lo <= tol) return next;
    w = next;
  }
  throw NoConvergence("pole search did not converge", hi - lo, 500);
}

RunHistograms run_histograms(std::size_t n) {
  if (n > 22) throw SizeGuard("walk enumeration supports n <= 22");
  RunHistograms h;
  const std::uint32_t count = 1U << n;
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    ++h.up[run_vector(mask, n, true)];
    ++h.down[run_vector(mask, n, false)];
  }
  return h;
}

}  // namespace specbound
