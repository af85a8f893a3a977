#pragma once

// Branching mechanisms psi(u) = alpha u + beta u^2 + integral part, with the
// Levy measure restricted to finitely many atoms plus an optional stable tail
// of index a in (1,2) whose integral contribution is exactly scale * u^a.
// Shifted mechanisms psi(theta0 + u) - psi(theta0) are represented through an
// offset on the base triple (the triple itself is not canonical under shifts;
// only psi values are contractual).

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gwprune/offspring.hpp"
#include "gwprune/prunetime.hpp"

namespace gwprune {

struct LevyAtom {
  double r;     // jump size, > 0
  double mass;  // pi({r}), > 0
};

struct StableTail {
  double index;  // a in (1,2)
  double scale;  // contribution scale * u^a
};

enum class Criticality { Subcritical, Critical, Supercritical };

struct MechanismConditions {
  bool grey = false;          // int^inf du/psi < infinity
  bool conservative = false;  // int_{0+} du/psi diverges
  Criticality criticality = Criticality::Critical;
  double psi_prime_at_zero = 0.0;
};

struct ErasedLevyLaw {
  OffspringLaw xi;
  double c = 0.0;        // branching rate psi'(eta(h))
  double eta = 0.0;      // eta(h)
  double mu_mean = 0.0;  // root law is Poisson(x * eta(h)) for rho = delta_x
  OffspringLaw mu;       // the Poisson law, truncated
};

struct DomainFamily {
  OffspringLaw xi;
  double gamma = 0.0;  // time scale psi'(n)
  long long n = 0;
};

class Mechanism {
 public:
  Mechanism() = default;
  Mechanism(double alpha, double beta, std::vector<LevyAtom> atoms,
            std::optional<StableTail> stable = std::nullopt);

  static Mechanism quadratic(double beta = 1.0) { return Mechanism(0.0, beta, {}); }
  static Mechanism stable(double index, double scale = 1.0) {
    return Mechanism(0.0, 0.0, {}, StableTail{index, scale});
  }

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  const std::vector<LevyAtom>& atoms() const { return atoms_; }
  const std::optional<StableTail>& stable_tail() const { return stable_; }
  double shift_offset() const { return shift_; }

  double psi(double u) const;
  double psi_deriv(int m, double u) const;  // m >= 1; m = 1 accepts u = 0 exactly

  // int_v^inf du/psi(u); +infinity when the Grey condition fails
  double grey_integral(double v) const;
  // eta(h): unique v with grey_integral(v) = h; bracketed bisection to 1e-12
  double eta(double h) const;

  // largest q >= 0 with psi(theta + q) = psi(theta)
  double q0(double theta) const;
  // theta <= 0 with q0(theta) = w
  double q0_inverse(double w) const;

  Mechanism shifted(double theta) const;  // u -> psi(theta+u) - psi(theta)
  Mechanism tilted(double theta) const;   // u -> psi(u) + theta u

  MechanismConditions check_conditions() const;

  ErasedLevyLaw erased_law(double h, double x) const;
  PruneLawBundle ad_prune_law(double h) const;
  DomainFamily domain_family(long long n) const;

  std::string label;

 private:
  // base triple evaluation (ignores shift_)
  double base_psi(double u) const;
  double base_deriv(int m, double u) const;
  // offspring masses xi(m) = u0^{m-1} (-1)^m psi^{(m)}(u0) / (psi'(u0) m!)
  OffspringLaw law_at(double u0) const;

  double alpha_ = 0.0;
  double beta_ = 0.0;
  std::vector<LevyAtom> atoms_;
  std::optional<StableTail> stable_;
  double shift_ = 0.0;
};

// key=value serialization; lines alpha=, beta=, atom=r,mass (repeatable),
// stable=index,scale, shift=, label=
void write_mechanism(std::ostream& os, const Mechanism& m);
Mechanism read_mechanism(std::istream& is);

}  // namespace gwprune
