#include <cmath>

#include "doctest.h"
#include "gwprune/mechanism.hpp"
#include "gwprune/realtree.hpp"
#include "gwprune/sampler.hpp"

using namespace gwprune;

TEST_CASE("samplers are stream deterministic") {
  OffspringLaw bin = binary_law(0.5);
  Caps caps;
  caps.max_height = 20.0;
  RngStream r1(7, 3), r2(7, 3), r3(7, 4);
  RealTree a = gw_unit(bin, delta_law(2), caps, r1);
  RealTree b = gw_unit(bin, delta_law(2), caps, r2);
  RealTree c = gw_unit(bin, delta_law(2), caps, r3);
  CHECK(canonical_key(a) == canonical_key(b));
  // different streams almost surely differ for a forest this size
  CHECK(canonical_key(a) != canonical_key(c));
}

TEST_CASE("unit-edge binary forest structure and height law") {
  OffspringLaw bin = binary_law(0.5);
  Caps caps;
  caps.max_height = 30.0;
  int n = 20000, le2 = 0;
  RngStream rng(11, 0);
  for (int i = 0; i < n; ++i) {
    RealTree t = gw_unit(bin, delta_law(1), caps, rng);
    auto ch = children_of(t);
    REQUIRE(ch[0].size() == 1);  // one progenitor
    CHECK(t.nodes[ch[0][0]].len == 1.0);
    for (int v = 1; v < t.size(); ++v) {
      CHECK(t.nodes[v].len == 1.0);
      if (!t.height_capped) CHECK((ch[v].size() == 0 || ch[v].size() == 2));
    }
    if (gamma_height(t) <= 2.0) ++le2;
  }
  // P(Gamma <= 2) = g(g(0)) = 5/8; 3 sigma ~ 0.0103
  CHECK(std::abs(le2 / static_cast<double>(n) - 0.625) < 0.015);
}

TEST_CASE("exponential-edge forest has Exp(c) lengths") {
  OffspringLaw bin = binary_law(0.5);
  Caps caps;
  caps.max_height = 50.0;
  RngStream rng(13, 0);
  double sum = 0.0;
  long long cnt = 0;
  for (int i = 0; i < 4000; ++i) {
    RealTree t = gw_exp(bin, 2.0, delta_law(1), caps, rng);
    for (int v = 1; v < t.size(); ++v) {
      sum += t.nodes[v].len;
      ++cnt;
    }
  }
  CHECK(cnt > 4000);
  CHECK(std::abs(sum / cnt - 0.5) < 0.03);
}

TEST_CASE("Kesten tree of the critical binary law") {
  // mu*(i) = (i+1) xi(i+1) = delta_1: exactly one graft progenitor per
  // integer spine height, so interior spine vertices have two children.
  OffspringLaw bin = binary_law(0.5);
  Caps caps;
  caps.max_height = 40.0;
  RngStream rng(17, 0);
  int S = 8;
  KestenTree k = kesten_unit(bin, S, caps, rng);
  REQUIRE(static_cast<int>(k.spine.size()) == S + 1);
  CHECK(k.spine[0] == 0);
  auto ch = children_of(k.tree);
  auto h = heights_of(k.tree);
  for (int j = 1; j <= S; ++j) {
    CHECK(h[k.spine[j]] == doctest::Approx(static_cast<double>(j)));
    if (j < S) CHECK(ch[k.spine[j]].size() == 2);
  }
  CHECK(ch[k.spine[S]].size() == 1);
  CHECK(gamma_height(k.tree) >= static_cast<double>(S));
}

TEST_CASE("erased Levy forest, quadratic mechanism") {
  // psi = u^2, h = 1, x = 1: the progenitor count is Poisson(1).
  Mechanism quad = Mechanism::quadratic(1.0);
  Caps caps;
  caps.max_height = 60.0;
  RngStream rng(19, 0);
  int n = 8000, empty = 0;
  double roots = 0.0;
  for (int i = 0; i < n; ++i) {
    RealTree t = levy_erased(quad, 1.0, 1.0, caps, rng);
    int nr = n_root(t);
    roots += nr;
    if (nr == 0) ++empty;
  }
  CHECK(std::abs(roots / n - 1.0) < 0.04);
  CHECK(std::abs(empty / static_cast<double>(n) - std::exp(-1.0)) < 0.02);
}

TEST_CASE("offspring sampling matches the law") {
  OffspringLaw tern;
  tern.p = {2.0 / 3.0, 0.0, 0.0, 1.0 / 3.0};
  RngStream rng(23, 0);
  long long c0 = 0, c3 = 0;
  int n = 30000;
  for (int i = 0; i < n; ++i) {
    long long k = sample_offspring(tern, rng);
    REQUIRE((k == 0 || k == 3));
    (k == 0 ? c0 : c3)++;
  }
  CHECK(std::abs(c0 / static_cast<double>(n) - 2.0 / 3.0) < 0.01);
}

TEST_CASE("width marks carry the root width and atom sizes") {
  Mechanism atom(0.0, 0.5, {{2.0, 0.25}});
  Caps caps;
  caps.max_height = 40.0;
  RngStream rng(29, 0);
  RealTree t = levy_erased(atom, 1.0, 2.0, caps, rng);
  auto marks = width_marks(atom, 1.0, 2.0, t, rng);
  REQUIRE(!marks.empty());
  CHECK(marks[0].node == -1);
  CHECK(marks[0].width == doctest::Approx(2.0));
  for (std::size_t i = 1; i < marks.size(); ++i) {
    CHECK(marks[i].width > 0.0);
    if (!marks[i].at_vertex) CHECK(marks[i].width == doctest::Approx(2.0));
  }
}
