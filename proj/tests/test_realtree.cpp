#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "gwprune/realtree.hpp"

using namespace gwprune;

namespace {

RealTree segment(double len) {
  RealTree t;
  t.add(0, len);
  return t;
}

// root --(stem)--> branch point, then `arms` equal arms of length `arm`
RealTree ytree(double stem, double arm, int arms = 2) {
  RealTree t;
  int b = t.add(0, stem);
  for (int i = 0; i < arms; ++i) t.add(b, arm);
  return t;
}

}  // namespace

TEST_CASE("heights, total height, root degree") {
  RealTree y = ytree(1.0, 2.0);
  auto h = heights_of(y);
  REQUIRE(h.size() == 4);
  CHECK(h[0] == 0.0);
  CHECK(h[1] == doctest::Approx(1.0));
  CHECK(h[2] == doctest::Approx(3.0));
  CHECK(gamma_height(y) == doctest::Approx(3.0));
  CHECK(n_root(y) == 1);

  RealTree f = concat({segment(1.0), segment(2.5), ytree(0.5, 0.5)});
  CHECK(n_root(f) == 3);
  CHECK(gamma_height(f) == doctest::Approx(2.5));
}

TEST_CASE("first branch point off the root") {
  FirstBranch fs = first_branch(segment(2.0));
  CHECK(fs.D == doctest::Approx(2.0));
  CHECK(fs.kk == 0);

  FirstBranch fy = first_branch(ytree(1.5, 1.0, 3));
  CHECK(fy.D == doctest::Approx(1.5));
  CHECK(fy.kk == 3);
  CHECK(fy.n_root == 1);
}

TEST_CASE("below and above a level") {
  RealTree y = ytree(1.0, 2.0);
  RealTree lo = blw(y, 2.0);
  CHECK(gamma_height(lo) == doctest::Approx(2.0));
  CHECK(n_root(lo) == 1);

  RealTree hi = abv(y, 2.0);
  CHECK(n_root(hi) == 2);       // both arms cross the level
  CHECK(gamma_height(hi) == doctest::Approx(1.0));

  // level above the branch point in one arm only
  RealTree t;
  int b = t.add(0, 1.0);
  t.add(b, 3.0);
  t.add(b, 0.5);
  CHECK(n_root(abv(t, 2.0)) == 1);
  CHECK(gamma_height(blw(t, 2.0)) == doctest::Approx(2.0));
}

TEST_CASE("erasure of segments and Y-trees") {
  CHECK(gamma_height(erase(segment(3.0), 1.0)) == doctest::Approx(2.0));
  // erasing past the total height leaves the bare root
  CHECK(erase(segment(3.0), 5.0).size() == 1);

  RealTree y = ytree(1.0, 2.0);
  RealTree e = erase(y, 0.5);
  CHECK(gamma_height(e) == doctest::Approx(2.5));
  CHECK(n_root(e) == 1);
  FirstBranch fb = first_branch(e);
  CHECK(fb.D == doctest::Approx(1.0));  // branch point survives in place
  CHECK(fb.kk == 2);

  // arms reach exactly h above the branch point: ties kept, arms gone
  RealTree e2 = erase(y, 2.0);
  CHECK(gamma_height(e2) == doctest::Approx(1.0));
  CHECK(first_branch(e2).kk == 0);

  // semigroup on the metric tree: R^{h2} R^{h1} = R^{h1+h2}
  RealTree t;
  int a = t.add(0, 1.0);
  int b = t.add(a, 1.0);
  t.add(b, 2.0);
  t.add(b, 1.5);
  t.add(a, 0.5);
  RealTree two_step = erase(erase(t, 0.75), 0.75);
  RealTree one_step = erase(t, 1.5);
  CHECK(canonical_key(contract(two_step)) == canonical_key(contract(one_step)));
}

TEST_CASE("erasure with skeleton preserved reports origins") {
  RealTree t;  // unit-edge tree: root -> a -> {b, c}, b -> d
  int a = t.add(0, 1.0);
  int b = t.add(a, 1.0);
  int c = t.add(a, 1.0);
  int d = t.add(b, 1.0);
  (void)c;
  std::vector<int> origin;
  RealTree e = erase(t, 1.0, EraseMode::PreserveSkeleton, &origin);
  REQUIRE(e.size() == static_cast<int>(origin.size()));
  std::set<int> orig(origin.begin(), origin.end());
  CHECK(orig.count(a) == 1);
  CHECK(orig.count(b) == 1);   // b has a unit subtree (d) above it
  CHECK(orig.count(c) == 0);   // c is a leaf, erased
  CHECK(orig.count(d) == 0);
  CHECK(gamma_height(e) == doctest::Approx(2.0));
}

TEST_CASE("contract merges unbranched chains") {
  RealTree t;
  int a = t.add(0, 1.0);
  int b = t.add(a, 2.0);
  t.add(b, 0.5);
  t.add(b, 0.25);
  RealTree c = contract(t);
  CHECK(c.size() == 4);  // root, branch point, two leaves
  CHECK(first_branch(c).D == doctest::Approx(3.0));
}

TEST_CASE("level statistics") {
  RealTree t;
  int a = t.add(0, 1.0);   // branch point at height 1, three subtrees
  int b = t.add(a, 2.0);   // crosses level 2.5
  t.add(a, 1.0);           // leaf at height 2
  t.add(a, 3.0);           // crosses level 2.5
  t.add(b, 1.0);           // above the level entirely
  LevelStats ls = level_stats(t, 2.5);
  CHECK(ls.Z == 2);
  CHECK(ls.L == doctest::Approx(1.0 + 1.5 + 1.0 + 1.5));
  REQUIRE(ls.V.count(3) == 1);
  CHECK(ls.V.at(3) == 1);
  CHECK(ls.V.size() == 1);  // the height-3 branch point lies above the level
}

TEST_CASE("canonical key is child-order invariant") {
  RealTree t1;
  int a = t1.add(0, 1.0);
  t1.add(a, 2.0);
  t1.add(a, 0.5);
  RealTree t2;
  int b = t2.add(0, 1.0);
  t2.add(b, 0.5);
  t2.add(b, 2.0);
  CHECK(canonical_key(t1) == canonical_key(t2));
  RealTree t3 = ytree(1.0, 2.0);
  CHECK(canonical_key(t1) != canonical_key(t3));
}

TEST_CASE("tree serialization round trip") {
  RealTree t = ytree(0.125, 1.0 / 3.0, 3);
  t.height_capped = true;
  std::stringstream ss;
  write_tree(ss, t);
  RealTree back = read_tree(ss);
  REQUIRE(back.size() == t.size());
  CHECK(back.height_capped);
  CHECK_FALSE(back.node_capped);
  for (int i = 0; i < t.size(); ++i) {
    CHECK(back.nodes[i].parent == t.nodes[i].parent);
    CHECK(back.nodes[i].len == t.nodes[i].len);
  }
}
