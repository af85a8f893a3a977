#pragma once

// Finite rooted real trees encoded as parent/edge-length arrays.  Node 0 is
// always the root (parent -1, len 0); nodes[i].len is the length of the edge
// from the parent down at nodes[i].  Trees may carry capping flags when a
// sampler hit its node or height budget.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace gwprune {

struct RealTree {
  struct Node {
    int parent = -1;
    double len = 0.0;
  };
  std::vector<Node> nodes;
  bool height_capped = false;
  bool node_capped = false;

  RealTree() { nodes.push_back({}); }
  int size() const { return static_cast<int>(nodes.size()); }
  // appends a child of `parent` with edge length `len`, returns its id
  int add(int parent, double len) {
    nodes.push_back({parent, len});
    return static_cast<int>(nodes.size()) - 1;
  }
};

std::vector<std::vector<int>> children_of(const RealTree& t);
std::vector<double> heights_of(const RealTree& t);

// total height Gamma(T)
double gamma_height(const RealTree& t);

// n(root, T): number of connected components of T minus the root
int n_root(const RealTree& t);

struct FirstBranch {
  double D = 0.0;   // distance to the first leaf or branch point off the root
  int kk = 0;       // subtree count above it (0 for a leaf or by convention)
  int n_root = 0;   // root degree, callers can detect the multi-tree convention
};
FirstBranch first_branch(const RealTree& t);

// subtree below / above level a (Blw keeps the level-a points as leaves;
// Abv roots every component of {d > a} at a fresh common root)
RealTree blw(const RealTree& t, double a);
RealTree abv(const RealTree& t, double a);

enum class EraseMode {
  Contract,        // suppress degree-2 vertices created by the erasure
  PreserveSkeleton // keep every surviving original vertex (unit-edge trees)
};

// h-erasure R^h: keeps the points whose subtree reaches at least h above
// them (root always kept, ties at h kept).  In PreserveSkeleton mode the
// optional out-parameter receives, for each node of the result, the id of
// the original node it came from (-1 for stub leaves cut mid-edge).
RealTree erase(const RealTree& t, double h, EraseMode mode = EraseMode::Contract,
               std::vector<int>* origin = nullptr);

// concatenation at the root: the roots of all inputs are identified
RealTree concat(const std::vector<RealTree>& trees);

// merge unbranched vertex chains (sums edge lengths); root kept
RealTree contract(const RealTree& t);

struct LevelStats {
  double L = 0.0;             // total length below the level
  std::map<int, int> V;       // V[i] = branch points below the level with i subtrees above, i >= 2
  long long Z = 0;            // number of points exactly at the level
};
LevelStats level_stats(const RealTree& t, double a);

// canonical string key: contraction-insensitive callers should contract
// first; equal keys <=> equal rooted trees up to child order
std::string canonical_key(const RealTree& t);

// file format: header "TREE n=<count> caps=<flags>" then one line per node
// "id parent len", root parent "-", lengths with 17 significant digits
void write_tree(std::ostream& os, const RealTree& t);
RealTree read_tree(std::istream& is);

}  // namespace gwprune
