#include <cmath>
#include <sstream>

#include "doctest.h"
#include "gwprune/prune.hpp"
#include "gwprune/realtree.hpp"
#include "gwprune/rng.hpp"

using namespace gwprune;

namespace {

// root -> a -> b -> c, unit edges, plus a sibling leaf under a
struct Chain {
  RealTree t;
  int a, b, c, s;
  Chain() {
    a = t.add(0, 1.0);
    b = t.add(a, 1.0);
    c = t.add(b, 1.0);
    s = t.add(a, 1.0);
  }
};

}  // namespace

TEST_CASE("cut semantics by mark kind") {
  Chain ch;
  SUBCASE("edge marks remove the whole marked edge") {
    MarkSet m;
    m.marks.push_back({ch.b, 0.5, 0.7, MarkKind::Edge});
    CHECK(cut(ch.t, m, 0.5).size() == ch.t.size());
    RealTree after = cut(ch.t, m, 1.0);
    CHECK(after.size() == 3);  // root, a, s
    CHECK(gamma_height(after) == doctest::Approx(2.0));
  }
  SUBCASE("skeleton marks keep the marked point") {
    MarkSet m;
    m.marks.push_back({ch.b, 0.25, 0.7, MarkKind::Skeleton});
    RealTree after = cut(ch.t, m, 1.0);
    CHECK(gamma_height(after) == doctest::Approx(2.0));  // the s-leaf path survives
    // the cut point at height 1.25 survives as a leaf on the a->b edge
    bool stub = false;
    auto h = heights_of(after);
    for (int v = 1; v < after.size(); ++v)
      if (std::abs(h[v] - 1.25) < 1e-12) stub = true;
    CHECK(stub);
  }
  SUBCASE("branch marks keep the vertex, drop the subtrees above it") {
    MarkSet m;
    m.marks.push_back({ch.a, 1.0, 0.7, MarkKind::Branch});
    RealTree after = cut(ch.t, m, 1.0);
    CHECK(after.size() == 2);
    CHECK(gamma_height(after) == doctest::Approx(1.0));
  }
}

TEST_CASE("mark counting and effective jumps") {
  Chain ch;
  MarkSet m;
  m.marks.push_back({ch.a, 1.0, 0.2, MarkKind::Branch});  // disconnects b and c
  m.marks.push_back({ch.c, 1.0, 0.5, MarkKind::Branch});  // fires in a detached part
  CHECK(count_N(ch.t, m, 10.0, 1.0) == 2);
  CHECK(count_M(ch.t, m, 10.0, 1.0) == 1);
  CHECK(count_N(ch.t, m, 10.0, 0.3) == 1);
  CHECK(count_N(ch.t, m, 1.5, 1.0) == 1);  // only the mark at height 1 lies below 1.5
  auto jumps = jump_times(ch.t, m, 1.0);
  REQUIRE(jumps.size() == 1);
  CHECK(jumps[0] == doctest::Approx(0.2));
}

TEST_CASE("mark generators place the right marks") {
  Chain ch;
  RngStream rng(5, 0);
  MarkSet me = mark_edges(ch.t, rng);
  CHECK(me.marks.size() == static_cast<std::size_t>(ch.t.size() - 1));
  for (const auto& mk : me.marks) CHECK(mk.kind == MarkKind::Edge);

  MarkSet mb = mark_branchpoints(ch.t, rng);
  REQUIRE(mb.marks.size() == 1);  // only `a` has >= 2 subtrees above it
  CHECK(mb.marks[0].edge == ch.a);
  CHECK(mb.marks[0].kind == MarkKind::Branch);
  CHECK(std::isfinite(mb.marks[0].time));

  // class-m times at every non-root internal vertex
  MarkSet mh = mark_H(ch.t, PruneTimeFamily::equal_rate(1.0), rng);
  CHECK(mh.marks.size() == 2);  // a (class 2) and b (class 1)

  // rate check: Exp(1) at a (class 2) under branch_points has mean 1
  double s = 0.0;
  int n = 20000;
  for (int i = 0; i < n; ++i) {
    MarkSet mm = mark_branchpoints(ch.t, rng);
    s += mm.marks[0].time;
  }
  CHECK(std::abs(s / n - 1.0) < 0.03);
}

TEST_CASE("scaled process view") {
  Chain ch;
  MarkSet m;
  m.marks.push_back({ch.a, 1.0, 0.6, MarkKind::Branch});
  ScaledProcess sp{&ch.t, &m, 2.0, 3.0};
  // at(theta) cuts at theta * time_scale and divides lengths by space_scale
  RealTree before = sp.at(0.1);
  CHECK(gamma_height(before) == doctest::Approx(1.5));
  RealTree after = sp.at(0.25);
  CHECK(gamma_height(after) == doctest::Approx(0.5));
}

TEST_CASE("mark serialization round trip") {
  MarkSet m;
  m.marks.push_back({3, 0.25, 1.5, MarkKind::Edge});
  m.marks.push_back({1, 0.0, 0.125, MarkKind::Branch});
  m.marks.push_back({2, 0.75, 2.0, MarkKind::Skeleton});
  std::stringstream ss;
  write_marks(ss, m);
  MarkSet back = read_marks(ss);
  REQUIRE(back.marks.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.marks[i].edge == m.marks[i].edge);
    CHECK(back.marks[i].offset == m.marks[i].offset);
    CHECK(back.marks[i].time == m.marks[i].time);
    CHECK(back.marks[i].kind == m.marks[i].kind);
  }
}
