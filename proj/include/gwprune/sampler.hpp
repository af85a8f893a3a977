#pragma once

// Samplers for Galton-Watson real trees and forests.  A forest is the
// concatenation of mu-many independent trees at the root, so the root of the
// returned RealTree has one child per progenitor.

#include <vector>

#include "gwprune/mechanism.hpp"
#include "gwprune/offspring.hpp"
#include "gwprune/realtree.hpp"
#include "gwprune/rng.hpp"

namespace gwprune {

struct Caps {
  long long max_nodes = 10000000;
  double max_height = -1.0;  // < 0 means unbounded
};

// Unit-edge GW(xi; mu)-real forest: root, mu-many progenitors at height 1,
// offspring law xi below each individual.
RealTree gw_unit(const OffspringLaw& xi, const OffspringLaw& mu, const Caps& caps,
                 RngStream& rng);

// Exponential-edge GW(xi, c; mu)-real forest: same genealogy, iid Exp(c)
// edge lengths; xi must have no single-child class.
RealTree gw_exp(const OffspringLaw& xi, double c, const OffspringLaw& mu, const Caps& caps,
                RngStream& rng);

struct KestenTree {
  RealTree tree;
  std::vector<int> spine;  // node ids along the spine, root first
};

// Kesten tree of a critical unit-edge GW(xi): spine of unit edges up to
// spine_height, an independent GW(xi; mu*)-forest grafted at each integer
// spine height, mu*(i) = (i+1) xi(i+1).
KestenTree kesten_unit(const OffspringLaw& xi, int spine_height, const Caps& caps,
                       RngStream& rng);

// Exponential-edge Kesten tree: graft points form a Poisson(c) process along
// the half-line truncated at spine_height.
KestenTree kesten_exp(const OffspringLaw& xi, double c, double spine_height, const Caps& caps,
                      RngStream& rng);

// (psi; delta_x)-Levy forest erased at level h, via its GW representation.
RealTree levy_erased(const Mechanism& mech, double h, double x, const Caps& caps,
                     RngStream& rng);

// Width decoration of an erased Levy forest (rho = delta_x): Poisson atoms
// along the skeleton with intensity int x e^{-x eta(h)} pi(dx) per unit
// length, one width per branch point, and the deterministic root width x.
struct WidthMark {
  int node = -1;        // -1 marks the root width entry
  double offset = 0.0;  // distance from the parent endpoint (skeleton atoms)
  double width = 0.0;
  bool at_vertex = false;
};
// Stable tails are sampled above the documented width cutoff `stable_cutoff`
// (their intensity is not integrable at 0+); atom families are exact.
std::vector<WidthMark> width_marks(const Mechanism& mech, double h, double x,
                                   const RealTree& tree, RngStream& rng,
                                   double stable_cutoff = 1e-4);

// draws from an offspring law (truncated tail never sampled)
long long sample_offspring(const OffspringLaw& xi, RngStream& rng);

}  // namespace gwprune
