#pragma once

// Offspring distributions on {0,1,2,...} with finite (possibly truncated)
// support, their generating-function calculus, and the transform laws for
// h-erasure and theta-pruning of Galton-Watson real trees/forests.

#include <iosfwd>
#include <vector>

#include "gwprune/prunetime.hpp"

namespace gwprune {

struct OffspringLaw {
  std::vector<double> p;        // p[k] = mass at k
  double truncated_mass = 0.0;  // mass beyond the stored support (reported, not folded)

  double mass(std::size_t k) const { return k < p.size() ? p[k] : 0.0; }
  std::size_t max_k() const { return p.empty() ? 0 : p.size() - 1; }
  double total() const;
  double mean() const;

  // drop (exact) zero tail entries, keep at least index 0
  void trim();
};

// convenience constructors
OffspringLaw binary_law(double p0);            // mass p0 at 0, 1-p0 at 2
OffspringLaw delta_law(std::size_t k);         // point mass at k
OffspringLaw poisson_law(double mean, double tail_tol = 1e-12);

// g(s) and the m-th derivative g^{(m)}(s); exact finite sums.
double pgf_eval(const OffspringLaw& xi, double s);
double pgf_deriv(const OffspringLaw& xi, int m, double s);

// smallest fixed point of g on [0,1]
double extinction(const OffspringLaw& xi);

// P(Gamma <= h) for the unit-edge GW tree: h-fold iterate of g started at 0.
double height_cdf(const OffspringLaw& xi, int h);

// P(Gamma <= h) for the exponential-edge GW(xi, c) tree, by inverting
// h = int_0^u ds / (c (g(s) - s)).
double height_cdf_cont(const OffspringLaw& xi, double c, double h);

// coefficients of s -> g(a + b s); requires a >= 0, b >= 0 (a + b <= 1 for a
// proper law, but affine recompositions with a + b > 1 are allowed as long as
// the result has non-negative masses, which is checked by callers that need it).
OffspringLaw compose_affine(const OffspringLaw& xi, double a, double b);

struct ErasedDiscrete {
  OffspringLaw xi;
  OffspringLaw mu;   // root law after erasure
  double p;          // Q(Gamma <= h) used in the transform
};
ErasedDiscrete erase_discrete(const OffspringLaw& xi, const OffspringLaw& mu, int h);

struct ErasedCont {
  OffspringLaw xi;
  OffspringLaw mu;
  double c;          // branching rate after erasure
  double p;
};
ErasedCont erase_cont(const OffspringLaw& xi, double c, const OffspringLaw& mu, double h);

// One-dimensional marginal of the pruned tree at time theta.
// Unit-edge case: xi^theta(i) = xi(i) S_i(theta) for i >= 1, the cut mass
// joins class 0.
OffspringLaw pruned_law(const OffspringLaw& xi, const PruneTimeFamily& H, double theta);

struct PrunedCont {
  OffspringLaw xi;
  double c;
};
// Exponential-edge case driven by a continuum bundle; single-child classes
// are excluded (xi^theta(1) = 0) and the skeleton mass joins class 0.
PrunedCont pruned_law_cont(const OffspringLaw& xi, double c, const PruneLawBundle& bundle,
                           double theta);

struct ErasedPruneDiscrete {
  OffspringLaw xi;       // law of the pruned h-erased tree at time theta
  double p;              // Q(Gamma <= h)
  // survival functions of the induced pruning times on the erased tree
  double h1_survival(double theta) const;
  double hm_survival(int m, double theta) const;
  PruneTimeFamily family(double theta_max = 50.0) const;
 private:
  friend ErasedPruneDiscrete erased_prune_law_discrete(const OffspringLaw&, int, double);
  OffspringLaw base_;
};
// Pruning-at-branch-points of GW(xi), intersected with the h-erasure.
// theta may be negative (the ascension extension); the result is validated
// to be a proper law.
ErasedPruneDiscrete erased_prune_law_discrete(const OffspringLaw& xi, int h, double theta);

// mu(i) = (i+1) xi(i+1); requires xi critical to 1e-9.
OffspringLaw size_biased_root(const OffspringLaw& xi);

// law of T - theta' given T > theta'
PruneTime post_shift(const PruneTime& t, double theta_prime);

// serialization: header line "OFFSPRING truncated_mass=<v>" then "k p" lines
// with strictly increasing k, 17 significant digits.
void write_law(std::ostream& os, const OffspringLaw& xi);
OffspringLaw read_law(std::istream& is);

}  // namespace gwprune
