#pragma once

// Pruning mark processes on real trees and the cut operation F(theta).
// Marks live on edges: `edge` is the id of the node below which... precisely,
// the node whose parent edge carries the mark; `offset` is measured up from
// the parent endpoint.  Kinds:
//   Edge     - removes the entire marked edge (bottom cut) once fired
//   Skeleton - cuts at the marked point, keeping the point itself
//   Branch   - sits at the top vertex of the edge; cutting removes the
//              subtrees above that vertex but keeps the vertex

#include <iosfwd>
#include <vector>

#include "gwprune/prunetime.hpp"
#include "gwprune/realtree.hpp"

namespace gwprune {

enum class MarkKind { Edge, Skeleton, Branch };

struct Mark {
  int edge = 0;        // node id whose parent edge carries the mark
  double offset = 0.0; // distance up from the parent endpoint
  double time = 0.0;
  MarkKind kind = MarkKind::Edge;
};

struct MarkSet {
  std::vector<Mark> marks;
};

// one Exp(1) time per edge (edge-pruning / AP regime)
MarkSet mark_edges(const RealTree& t, RngStream& rng);

// one Exp(m-1) time per branch point with m >= 2 subtrees above it (root
// excluded); pruning-at-branch-points regime
MarkSet mark_branchpoints(const RealTree& t, RngStream& rng);

// one H_{n(v)-1} time per non-root, non-leaf vertex (unit-edge trees with
// integer skeleton); finite times only are stored
MarkSet mark_H(const RealTree& t, const PruneTimeFamily& H, RngStream& rng);

// continuum bundle: Poisson skeleton marks with cumulative intensity
// hbar1 per unit length on (0, theta_max], plus one H_m branch time per
// branch point (root excluded)
MarkSet mark_Hbar(const RealTree& t, const PruneLawBundle& bundle, RngStream& rng);

// F(theta): applies every mark with time <= theta.  Ties and co-located
// marks are resolved by (edge id, offset) order, which is immaterial for the
// result but keeps the operation deterministic.
RealTree cut(const RealTree& t, const MarkSet& marks, double theta);

// times in (0, horizon] at which the cut tree actually changes (the mark's
// location is still connected to the root just before it fires)
std::vector<double> jump_times(const RealTree& t, const MarkSet& marks, double horizon);

// N: all marks with location below level a and time <= theta
long long count_N(const RealTree& t, const MarkSet& marks, double a, double theta);
// M: as N, but only marks whose location is root-connected when they fire
long long count_M(const RealTree& t, const MarkSet& marks, double a, double theta);

// space/time rescaled view of a pruning process
struct ScaledProcess {
  const RealTree* tree = nullptr;
  const MarkSet* marks = nullptr;
  double space_scale = 1.0;  // lengths are divided by this
  double time_scale = 1.0;   // theta arguments are multiplied by this

  RealTree at(double theta) const;
};

// serialization: one "MARK edge offset time kind" line per mark, kinds
// edge|skeleton|branch; appended after tree lines by the CLI
void write_marks(std::ostream& os, const MarkSet& m);
MarkSet read_marks(std::istream& is);

}  // namespace gwprune
