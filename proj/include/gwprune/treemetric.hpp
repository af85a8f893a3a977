#pragma once

// Distances between rooted real trees.
//
// half_distortion computes min over root-paired correspondences of
// max |d(x,x') - d'(y,y')| / 2, where the correspondence runs over each
// tree's candidate point set: its vertices plus the points at height
// k * mesh along every edge.  The candidate set is intrinsic to each tree
// (it never depends on the partner), so the computed values obey the
// triangle inequality exactly; they upper-bound the true half-distortion
// and agree with it on aligned trees.  Exact search is branch-and-bound;
// when a budget is exceeded only (lower, upper) bounds are reported.

#include <utility>
#include <vector>

#include "gwprune/realtree.hpp"

namespace gwprune {

struct HalfDistortionOptions {
  double mesh = 1.0;                   // candidate grid spacing along heights
  int candidate_budget = 26;           // max candidates per tree for exact mode
  long long node_budget = 4000000;     // branch-and-bound state budget
};

struct MetricResult {
  double value = 0.0;   // = upper when not exact
  bool exact = false;
  double lower = 0.0;
  double upper = 0.0;
  long long nodes_used = 0;
};

MetricResult half_distortion(const RealTree& a, const RealTree& b,
                             const HalfDistortionOptions& opts = {});

// A cadlag tree-valued path given by its jumps: (time, state) pairs with
// strictly increasing times, first entry at time 0.
using TreePath = std::vector<std::pair<double, RealTree>>;

// Upper bound on the Skorohod-type distance between two paths: minimum over
// monotone alignments of jumps of
//   max( max |log slope|, int_0^horizon e^{-u} (running max of state
//        half-distortion upper bounds, capped at 1) du ).
// The integral is truncated at the horizon (paths are compared there only).
double skorohod_upper(const TreePath& a, const TreePath& b, double horizon);

// functional summary on an a-grid: [Gamma, n_root, D, kk] followed by
// (L(a), Z(a), total branch points below a) for each grid level
std::vector<double> summary(const RealTree& t, const std::vector<double>& grid);

}  // namespace gwprune
