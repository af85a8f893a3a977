#include <cmath>

#include "doctest.h"
#include "gwprune/offspring.hpp"
#include "gwprune/realtree.hpp"
#include "gwprune/sampler.hpp"
#include "gwprune/treemetric.hpp"

using namespace gwprune;

namespace {

RealTree segment(double len) {
  RealTree t;
  t.add(0, len);
  return t;
}

RealTree ytree(double stem, double arm) {
  RealTree t;
  int b = t.add(0, stem);
  t.add(b, arm);
  t.add(b, arm);
  return t;
}

}  // namespace

TEST_CASE("half distortion on hand trees") {
  HalfDistortionOptions opts;
  opts.mesh = 0.5;

  MetricResult same = half_distortion(ytree(1.0, 1.0), ytree(1.0, 1.0), opts);
  CHECK(same.exact);
  CHECK(same.value == doctest::Approx(0.0));

  MetricResult segs = half_distortion(segment(1.0), segment(2.0), opts);
  CHECK(segs.exact);
  CHECK(segs.value == doctest::Approx(0.5));

  // Y(1,1) vs segment(2): the optimal correspondence sends one tip to the
  // segment's endpoint and the other to its midpoint, paying 1/2.
  MetricResult ys = half_distortion(ytree(1.0, 1.0), segment(2.0), opts);
  CHECK(ys.exact);
  CHECK(ys.value == doctest::Approx(0.5));

  // symmetry
  MetricResult sy = half_distortion(segment(2.0), ytree(1.0, 1.0), opts);
  CHECK(sy.value == doctest::Approx(ys.value));
}

TEST_CASE("erasure moves a tree by at most h") {
  OffspringLaw bin = binary_law(0.5);
  Caps caps;
  caps.max_height = 8.0;
  caps.max_nodes = 4000;
  RngStream rng(31, 0);
  for (int i = 0; i < 200; ++i) {
    RealTree t = gw_unit(bin, delta_law(1), caps, rng);
    if (t.size() > 24) continue;  // keep the exact search cheap
    RealTree e = erase(t, 1.0);
    MetricResult r = half_distortion(t, e);
    CHECK(r.upper <= 1.0 + 1e-9);
  }
}

TEST_CASE("triangle inequality on the computed values") {
  OffspringLaw bin = binary_law(0.5);
  Caps caps;
  caps.max_height = 5.0;
  caps.max_nodes = 64;
  RngStream rng(37, 0);
  for (int i = 0; i < 100; ++i) {
    RealTree a = gw_unit(bin, delta_law(1), caps, rng);
    RealTree b = gw_unit(bin, delta_law(1), caps, rng);
    RealTree c = gw_unit(bin, delta_law(1), caps, rng);
    if (a.size() > 16 || b.size() > 16 || c.size() > 16) continue;
    double ab = half_distortion(a, b).value;
    double bc = half_distortion(b, c).value;
    double ac = half_distortion(a, c).value;
    CHECK(ac <= ab + bc + 1e-9);
  }
}

TEST_CASE("skorohod upper bound") {
  TreePath p1{{0.0, segment(1.0)}, {0.5, segment(2.0)}};
  TreePath p2{{0.0, segment(1.0)}, {0.5, segment(2.0)}};
  CHECK(skorohod_upper(p1, p2, 2.0) == doctest::Approx(0.0));
  TreePath p3{{0.0, segment(1.0)}, {0.6, segment(3.0)}};
  double d = skorohod_upper(p1, p3, 2.0);
  CHECK(d >= 0.0);
  CHECK(d > 0.01);
}

TEST_CASE("functional summary layout") {
  RealTree y = ytree(1.0, 1.0);
  std::vector<double> grid{0.5, 1.5};
  std::vector<double> s = summary(y, grid);
  REQUIRE(s.size() == 4 + 3 * grid.size());
  CHECK(s[0] == doctest::Approx(2.0));   // Gamma
  CHECK(s[1] == doctest::Approx(1.0));   // n_root
  CHECK(s[2] == doctest::Approx(1.0));   // D
  CHECK(s[3] == doctest::Approx(2.0));   // kk
  CHECK(s[4] == doctest::Approx(0.5));   // L(0.5)
  CHECK(s[5] == doctest::Approx(1.0));   // Z(0.5)
  CHECK(s[7] == doctest::Approx(2.0));   // L(1.5) = 1 + 2 * 0.5
  CHECK(s[8] == doctest::Approx(2.0));   // Z(1.5)
}
