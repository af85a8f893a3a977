#pragma once

// Verification harness: executable oracles for the distributional identities
// (pruned marginals, erased pruning times, counting laws, Kesten commutation)
// and the deterministic limit experiments (height, ascension, generating
// function limits, one-dimensional invariance-principle marginals).

#include <cstdint>
#include <string>
#include <vector>

#include "gwprune/mechanism.hpp"
#include "gwprune/offspring.hpp"
#include "gwprune/prunetime.hpp"
#include "gwprune/stats.hpp"

namespace gwprune {

struct VerifyOptions {
  std::uint64_t seed = 42;
  long long N = 10000;
  int workers = 1;
  double significance = 0.001;
};

// H-pruning marginal vs direct GW(xi^theta) sampling, chi-square on the
// joint (first-branch degree, height ∧ 10) histogram.  theta_sim and
// theta_law normally agree; passing theta_law != theta_sim gives the power
// companion (the comparison must then fail).
TestReport check_prune_marginal(const OffspringLaw& xi, const PruneTimeFamily& H,
                                double theta_sim, double theta_law,
                                const VerifyOptions& opt, const std::string& name);

// Branch-point pruning intersected with the h-erasure: collects the induced
// pruning times at erased-tree vertices, one KS test per vertex class
// against the analytic mixed-exponential laws.  power_rate > 0 replaces the
// analytic reference by Exp(power_rate) (power companion).
std::vector<TestReport> check_erased_prune_times(const OffspringLaw& xi, int h,
                                                 const VerifyOptions& opt,
                                                 const std::string& name_prefix,
                                                 double power_rate = 0.0);

enum class CountingRegime { Branch, Edge };

// Counting process N_{a,theta} of mark points below level a: two-sample test
// of direct mark simulation against per-forest conditional resampling
// (Poisson skeleton counts plus per-branch-point time draws), stratified
// exactly by conditioning on the simulated forest.  oracle_scale != 1
// perturbs the oracle intensities (power companion).
TestReport check_counting_law(const Mechanism& mech, double h, double x, double a,
                              double theta1, double theta2, CountingRegime regime,
                              double oracle_scale, const VerifyOptions& opt,
                              const std::string& name);

// |w_n(floor(gamma_n h))^{floor(nx)} - e^{-x eta(h)}|, deterministic.
TestReport experiment_height(const Mechanism& mech, long long n, double h, double x,
                             double tol, const std::string& name);

// Ascension-time limit: deterministic |q_n(theta)^{floor(nx)} - e^{-x q0(theta)}|
// followed by a Monte-Carlo extinction-fraction check of the same forest
// probability (within 3 binomial sigma).  Requires theta < 0.
std::vector<TestReport> experiment_ascension(const Mechanism& mech, long long n,
                                             double theta, double x, double det_tol,
                                             const VerifyOptions& opt,
                                             const std::string& name_prefix);

enum class PruneRegime { Branch, Edge, EqualRate };

// One-dimensional invariance-principle marginal: the h-erased pruned discrete
// forest at scale n (exact transformed offspring laws, lengths /gamma_n)
// against the analytic continuum limit law, two-sample chi-square on the
// (tree count, height bin, branch-point count) functional.  theta_limit
// normally equals theta; a mismatch gives the power companion.
TestReport experiment_marginal_convergence(const Mechanism& mech, long long n, double h,
                                           double x, double theta, double theta_limit,
                                           PruneRegime regime, const VerifyOptions& opt,
                                           const std::string& name);

// Erasure/Kesten commutation: summary functionals below level a of
// erase(kesten(xi), h) vs kesten(xi^h) at matched spine truncation.
TestReport check_kesten(const OffspringLaw& xi, int h, int spine_height, double a,
                        const VerifyOptions& opt, const std::string& name);

// Deterministic generating-function limits of the domain family at scale n:
// (i) n gamma_n (g(s_n) - s_n) -> psi(r), (ii) gamma_n (1 - g'(s_n)) -> psi'(r),
// (iii) (gamma_n / n^{m-1}) g^{(m)}(s_n) -> (-1)^m psi^{(m)}(r),
// (iv) -n log q_{xi_n} -> q0, with s_n = e^{-r/n}.
std::vector<TestReport> limit_checks(const Mechanism& mech, long long n, double tol,
                                     const std::string& name_prefix);

// Named bundles used by the CLI: "height", "ascension", "prune", "erased",
// "counting", "marginal", "kesten", "limits", or "all".
std::vector<TestReport> run_suite(const std::string& suite, std::uint64_t seed, int workers);

}  // namespace gwprune
