#include <cmath>
#include <sstream>

#include "doctest.h"
#include "gwprune/mechanism.hpp"

using namespace gwprune;

TEST_CASE("psi evaluation and derivatives") {
  Mechanism quad = Mechanism::quadratic(1.0);
  CHECK(quad.psi(3.0) == doctest::Approx(9.0));
  CHECK(quad.psi_deriv(1, 3.0) == doctest::Approx(6.0));
  CHECK(quad.psi_deriv(2, 3.0) == doctest::Approx(2.0));
  CHECK(quad.psi_deriv(3, 3.0) == doctest::Approx(0.0));
  CHECK(quad.psi_deriv(1, 0.0) == doctest::Approx(0.0));

  Mechanism st = Mechanism::stable(1.5);
  CHECK(st.psi(4.0) == doctest::Approx(8.0).epsilon(1e-10));
  CHECK(st.psi_deriv(1, 4.0) == doctest::Approx(1.5 * 2.0).epsilon(1e-10));
  CHECK(st.psi_deriv(2, 4.0) == doctest::Approx(0.375).epsilon(1e-10));
  // (-1)^m psi^{(m)} >= 0 for m >= 2 on a genuine branching mechanism
  CHECK(st.psi_deriv(3, 4.0) < 0.0);

  Mechanism atom(0.5, 0.0, {{2.0, 1.5}});
  double u = 0.7;
  CHECK(atom.psi(u) ==
        doctest::Approx(0.5 * u + 1.5 * (std::exp(-2.0 * u) - 1.0)).epsilon(1e-12));
  CHECK(atom.psi_deriv(2, u) == doctest::Approx(1.5 * 4.0 * std::exp(-2.0 * u)).epsilon(1e-12));
}

TEST_CASE("eta solves the grey integral equation") {
  CHECK(Mechanism::quadratic(1.0).eta(1.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(Mechanism::quadratic(1.0).eta(0.25) == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(Mechanism::stable(1.5).eta(1.0) == doctest::Approx(4.0).epsilon(1e-8));
  // psi(u) = u + u^2: int_v^inf du/(u(1+u)) = log(1 + 1/v) = h
  Mechanism mixed(1.0, 1.0, {});
  CHECK(mixed.eta(1.0) == doctest::Approx(1.0 / (std::exp(1.0) - 1.0)).epsilon(1e-9));
}

TEST_CASE("erased Levy forest law, quadratic") {
  ErasedLevyLaw el = Mechanism::quadratic(1.0).erased_law(1.0, 1.5);
  CHECK(el.eta == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(el.c == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(el.xi.mass(0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(el.xi.mass(1) == doctest::Approx(0.0));
  CHECK(el.xi.mass(2) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(el.mu_mean == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(el.mu.mean() == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("erased Levy forest law, stable 3/2") {
  ErasedLevyLaw el = Mechanism::stable(1.5).erased_law(1.0, 1.0);
  CHECK(el.eta == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(el.c == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(el.xi.mass(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
  CHECK(el.xi.mass(1) == doctest::Approx(0.0));
  CHECK(el.xi.mass(2) == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(el.xi.mass(3) == doctest::Approx(1.0 / 24.0).epsilon(1e-8));
  // xi is a proper law: the full series sums to 1
  CHECK(el.xi.total() + el.xi.truncated_mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("domain family at u0 = n") {
  Mechanism mixed(1.0, 1.0, {});
  DomainFamily fam = mixed.domain_family(10);
  CHECK(fam.gamma == doctest::Approx(21.0).epsilon(1e-12));
  CHECK(fam.xi.mass(0) == doctest::Approx(110.0 / 210.0).epsilon(1e-12));
  CHECK(fam.xi.mass(1) == doctest::Approx(0.0));
  CHECK(fam.xi.mass(2) == doctest::Approx(100.0 / 210.0).epsilon(1e-12));
  // quadratic case is exactly binary with gamma = 2n
  DomainFamily fq = Mechanism::quadratic(1.0).domain_family(7);
  CHECK(fq.gamma == doctest::Approx(14.0));
  CHECK(fq.xi.mass(0) == doctest::Approx(0.5));
  CHECK(fq.xi.mass(2) == doctest::Approx(0.5));
}

TEST_CASE("q0 and its inverse") {
  Mechanism quad = Mechanism::quadratic(1.0);
  CHECK(quad.q0(0.0) == doctest::Approx(0.0));
  CHECK(quad.q0(-0.5) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(quad.q0(-2.0) == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(quad.q0_inverse(1.0) == doctest::Approx(-0.5).epsilon(1e-9));
  Mechanism mixed(1.0, 1.0, {});
  double th = -0.75;
  double q = mixed.q0(th);
  CHECK(mixed.psi(th + q) == doctest::Approx(mixed.psi(th)).epsilon(1e-9));
  CHECK(q > 0.0);
}

TEST_CASE("shifted and tilted mechanisms") {
  Mechanism st = Mechanism::stable(1.5);
  Mechanism sh = st.shifted(0.8);
  for (double u : {0.0, 0.3, 2.0})
    CHECK(sh.psi(u) == doctest::Approx(st.psi(0.8 + u) - st.psi(0.8)).epsilon(1e-10));
  CHECK(sh.psi_deriv(2, 0.3) == doctest::Approx(st.psi_deriv(2, 1.1)).epsilon(1e-10));
  Mechanism ti = st.tilted(0.8);
  for (double u : {0.0, 0.5, 2.0})
    CHECK(ti.psi(u) == doctest::Approx(st.psi(u) + 0.8 * u).epsilon(1e-10));
}

TEST_CASE("mechanism conditions") {
  MechanismConditions cq = Mechanism::quadratic(1.0).check_conditions();
  CHECK(cq.grey);
  CHECK(cq.conservative);
  CHECK(cq.criticality == Criticality::Critical);

  // psi(u) = u: not grey, subcritical drift > 0
  MechanismConditions cl = Mechanism(1.0, 0.0, {}).check_conditions();
  CHECK_FALSE(cl.grey);
  CHECK(cl.criticality == Criticality::Subcritical);

  MechanismConditions cs = Mechanism(-0.5, 1.0, {}).check_conditions();
  CHECK(cs.criticality == Criticality::Supercritical);
}

TEST_CASE("branch-point prune bundle of the erased forest") {
  // psi = u^2, h = 1: eta = 1, hbar1(theta) = psi'(1+theta) - psi'(1) = 2 theta,
  // class-2 branch times survive forever in the quadratic case.
  PruneLawBundle b = Mechanism::quadratic(1.0).ad_prune_law(1.0);
  CHECK(b.hbar1(0.0) == doctest::Approx(0.0));
  CHECK(b.hbar1(0.7) == doctest::Approx(1.4).epsilon(1e-9));
  CHECK(b.hm_survival(2, 3.0) == doctest::Approx(1.0).epsilon(1e-12));
  // stable 3/2: H_m survival = psi^{(m)}(eta+theta)/psi^{(m)}(eta), decreasing
  PruneLawBundle bs = Mechanism::stable(1.5).ad_prune_law(1.0);
  Mechanism st = Mechanism::stable(1.5);
  double s2 = bs.hm_survival(2, 1.0);
  CHECK(s2 == doctest::Approx(st.psi_deriv(2, 5.0) / st.psi_deriv(2, 4.0)).epsilon(1e-10));
  CHECK(s2 < 1.0);
  CHECK(bs.hm_survival(3, 1.0) ==
        doctest::Approx(st.psi_deriv(3, 5.0) / st.psi_deriv(3, 4.0)).epsilon(1e-10));
}

TEST_CASE("mechanism serialization round trip") {
  Mechanism m(0.25, 0.5, {{1.0, 2.0}, {3.0, 0.125}}, StableTail{1.75, 0.3});
  m.label = "mixed-example";
  std::stringstream ss;
  write_mechanism(ss, m);
  Mechanism back = read_mechanism(ss);
  CHECK(back.alpha() == m.alpha());
  CHECK(back.beta() == m.beta());
  REQUIRE(back.atoms().size() == 2);
  CHECK(back.atoms()[1].r == 3.0);
  REQUIRE(back.stable_tail().has_value());
  CHECK(back.stable_tail()->index == 1.75);
  CHECK(back.label == m.label);
  for (double u : {0.1, 1.0, 5.0}) CHECK(back.psi(u) == doctest::Approx(m.psi(u)).epsilon(1e-14));
}
