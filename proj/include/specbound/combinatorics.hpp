#pragma once

#include <boost/rational.hpp>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "specbound/variance_matrix.hpp"

namespace specbound {

// Nonnegative +-1 lattice path from height 0 back to 0; "(" is an up-step.
class DyckPath {
 public:
  DyckPath() = default;
  explicit DyckPath(std::vector<int> steps);
  static DyckPath from_brackets(std::string_view brackets);

  std::span<const int> steps() const noexcept { return steps_; }
  std::size_t semilength() const noexcept { return steps_.size() / 2; }
  std::vector<int> heights() const;
  std::string brackets() const;

  friend bool operator==(const DyckPath&, const DyckPath&) = default;

 private:
  std::vector<int> steps_;
};

// Ordered (planar) rooted forest. parent[v] == -1 marks a component root;
// roots are stored explicitly because splitting creates roots at arbitrary
// levels. A single-component forest is a plane tree.
struct PlaneForest {
  std::vector<int> parent;
  std::vector<std::vector<int>> children;  // left to right
  std::vector<int> level;                  // drawing height; copies share v's level
  std::vector<int> roots;                  // component roots in creation order

  std::size_t vertex_count() const noexcept { return parent.size(); }
  std::size_t edge_count() const;
  bool is_root(int v) const { return parent.at(v) < 0; }
  int add_vertex(int parent_vertex, int level_value);

  // Bracket string of every component, in root order.
  std::vector<std::string> component_brackets() const;
};

using PlaneTree = PlaneForest;

// All of D_{2k} in lexicographic order ('(' < ')'). Throws SizeGuard for k > 10.
std::vector<DyckPath> enumerate_dyck(std::size_t k);

std::uint64_t catalan(std::size_t k);

// Boundary-walk bijection between plane trees with k edges and D_{2k}.
// Vertices are numbered in order of first visit; vertex 0 is the root.
PlaneTree path_to_tree(const DyckPath& path);
DyckPath tree_to_path(const PlaneTree& tree);
DyckPath component_path(const PlaneForest& forest, int root);

// Labels of the component rooted at `root`, contracted from the leaves:
// result[x] = sum over labelings of non-root vertices with the root fixed to x
// of prod_e S_{x_{e-} x_{e+}}.
std::vector<double> rooted_values(const VarianceMatrix& s, const PlaneForest& forest, int root);

double tree_val(const VarianceMatrix& s, const PlaneTree& tree, std::size_t x);

// Same quantity by enumerating all N^{|V|-1} labelings. Throws SizeGuard when
// that exceeds 10^7 terms.
double tree_val_naive(const VarianceMatrix& s, const PlaneTree& tree, std::size_t x);

// Product over components of max over the root label.
double forest_val(const VarianceMatrix& s, const PlaneForest& forest);

enum class SplitMode { complete, leftmost, rightmost };

// Complete: every child edge moves to its own new root copy of v.
// Leftmost/rightmost: that child stays with v and the others move to copies.
// Throws InvalidVertex for leaves and for roots with a single child.
PlaneForest split_vertex(const PlaneForest& forest, int v, SplitMode mode);

// Almost-complete split of every vertex with two or more children. The result
// is linear; leftmost chains follow up-runs, rightmost chains follow down-runs.
PlaneForest chop_all(const PlaneForest& forest, SplitMode mode);

struct RunStats {
  std::vector<std::size_t> up;    // up[j-1]: number of up-runs of length j <= J
  std::vector<std::size_t> down;  // down[j-1]
  std::vector<std::size_t> up_overflow;    // lengths of up-runs longer than J
  std::vector<std::size_t> down_overflow;  // lengths of down-runs longer than J
};

RunStats run_statistics(std::span<const int> steps, std::size_t J);

// z^T = prod_j z_j^{T_j}. Runs longer than the sequence carry weight 1,
// matching the tail of phi_J which has no z factor.
double z_power(std::span<const std::size_t> counts, const NormSequence& z);

// Sum of val_x over all trees with k edges, for every x.
std::vector<double> tree_sums(const VarianceMatrix& s, std::size_t k);

struct OracleViolation {
  std::string check;
  std::string path;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ChoppingReport {
  std::size_t k = 0;
  std::size_t n_trees = 0;
  std::size_t checks = 0;
  std::vector<OracleViolation> violations;
  double max_slack = -1.0;  // largest lhs/rhs - 1 over inequality checks
};

// For every tree with k edges: val <= ||S||^k z^U and val <= ||S||^k z^D,
// the fully chopped forests attain exactly those right-hand sides, and val
// never decreases under any single split of any vertex in any mode.
ChoppingReport chopping_bound_check(const VarianceMatrix& s, std::size_t k);

using Rational = boost::rational<std::int64_t>;

// Probability that a uniform Dyck path of length 2k steps up at (t, h):
// (1/2) (h+2)/(h+1) (2k-t-h)/(2k-t). Throws DomainError outside
// {0 <= h <= t, h <= 2k - t, t < 2k}.
Rational dyck_transition_prob_exact(std::int64_t t, std::int64_t h, std::int64_t k);
double dyck_transition_prob(std::int64_t t, std::int64_t h, std::int64_t k);

struct ConditionalCount {
  std::uint64_t through = 0;  // paths with pi(t) = h
  std::uint64_t up = 0;       // of those, paths with pi(t+1) = h+1
};

ConditionalCount transition_count(std::span<const DyckPath> paths, std::size_t t, int h);

struct PbotProbability {
  double product = 0.0;      // prod_i p_i^bot or (1 - p_i^bot) along omega
  double closed_form = 0.0;  // (1/2)^n (h + 1 + sum omega) / (h + 1)
};

// Throws DomainError if h < 0, omega has a non +-1 entry, or an intermediate
// height h_0..h_{n-1} is negative. The final height may be -1 (probability 0).
PbotProbability pbot_probability(int h, std::span<const int> omega);

// Closed form (1-w)(1 + A(w)) / phi_J(w) with
// A(w) = sum_{j<=J} (w/2)^j z_j + sum_{j>J} (w/2)^j.
// Throws DomainError unless 0 <= w < critical_w(z).
double stopped_walk_generating_function(const NormSequence& z, double w);

// E_{1/2} z^{U(pi^(n))} over all 2^n simple random walks of length n (n <= 24).
double up_run_expectation(const NormSequence& z, std::size_t n);

// (1-w) sum_{n<=n_max} w^n E_{1/2} z^{U(pi^(n))}; differs from the closed form
// by at most w^{n_max+1} for 0 <= w < 1.
double stopped_walk_series(const NormSequence& z, double w, std::size_t n_max);

// Smallest positive pole of the walk generating function (1 + A)/phi_J, found
// by safeguarded Newton iteration on its reciprocal.
double stopped_walk_pole(const NormSequence& z, double tol = 1e-14);

using RunHistogram = std::map<std::vector<std::size_t>, std::uint64_t>;

struct RunHistograms {
  RunHistogram up;
  RunHistogram down;
};

// Histograms of the full U and D vectors (runs of length <= n) over all 2^n
// simple random walks.
RunHistograms run_histograms(std::size_t n);

}  // namespace specbound
