#pragma once

// Small numerical toolbox shared by the library: adaptive Simpson quadrature,
// bracketed bisection, and the special functions needed for p-values.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace gwprune::num {

// Adaptive Simpson on [a,b].  rel/abs tolerances per the library-wide
// quadrature contract (1e-10 relative / 1e-14 absolute by default).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 1e-14, int max_depth = 60);

// Bisection for a continuous monotone-sign-change f on [lo,hi]; requires
// f(lo), f(hi) of opposite sign.  Returns midpoint once |hi-lo| <= x_tol.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double x_tol = 1e-12, int max_iter = 200);

// Regularized upper incomplete gamma Q(a, x) = Gamma(a,x)/Gamma(a).
double gamma_q(double a, double x);

// Survival function of the Kolmogorov distribution: Q(lambda) = P(K > lambda).
double kolmogorov_sf(double lambda);

// log(n!) via lgamma
inline double log_factorial(double n) { return std::lgamma(n + 1.0); }

}  // namespace gwprune::num
