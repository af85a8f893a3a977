#include "gwprune/prunetime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gwprune {

PruneTime PruneTime::tabulated(const std::function<double(double)>& survival,
                               double theta_max) {
  PruneTime t;
  t.kind_ = Kind::Tabulated;
  t.theta_max_ = theta_max;
  const int n = 1024;
  t.grid_.resize(n);
  t.surv_.resize(n);
  // log-spaced on (0, theta_max]: theta_i = theta_max * exp(-L * (1 - i/(n-1)))
  const double span = std::log(1e6);  // lowest grid point at theta_max * 1e-6
  double prev = 1.0;
  for (int i = 0; i < n; ++i) {
    double th = theta_max * std::exp(-span * (1.0 - static_cast<double>(i) / (n - 1)));
    double s = survival(th);
    if (s > prev) s = prev;  // enforce monotonicity against round-off
    if (s < 0.0) s = 0.0;
    t.grid_[i] = th;
    t.surv_[i] = s;
    prev = s;
  }
  return t;
}

double PruneTime::survival(double theta) const {
  if (theta <= 0.0) return 1.0;
  switch (kind_) {
    case Kind::Exponential:
      return std::exp(-rate_ * theta);
    case Kind::PointMassAtInfinity:
      return 1.0;
    case Kind::Tabulated: {
      if (theta >= grid_.back()) return surv_.back();
      if (theta <= grid_.front()) {
        // interpolate down to S(0)=1
        double w = theta / grid_.front();
        return 1.0 + w * (surv_.front() - 1.0);
      }
      auto it = std::lower_bound(grid_.begin(), grid_.end(), theta);
      std::size_t j = static_cast<std::size_t>(it - grid_.begin());
      double t0 = grid_[j - 1], t1 = grid_[j];
      double w = (theta - t0) / (t1 - t0);
      return surv_[j - 1] + w * (surv_[j] - surv_[j - 1]);
    }
  }
  return 1.0;
}

double PruneTime::mass_at_infinity() const {
  switch (kind_) {
    case Kind::Exponential: return 0.0;
    case Kind::PointMassAtInfinity: return 1.0;
    case Kind::Tabulated: return surv_.back();
  }
  return 0.0;
}

double PruneTime::sample(RngStream& rng) const {
  switch (kind_) {
    case Kind::Exponential:
      return rng.exponential(rate_);
    case Kind::PointMassAtInfinity:
      return std::numeric_limits<double>::infinity();
    case Kind::Tabulated: {
      double u = rng.uniform();  // target survival level
      if (u < surv_.back()) return std::numeric_limits<double>::infinity();
      if (u >= 1.0) return grid_.front() * 1e-12;
      // find theta with survival(theta) = u by inverse interpolation
      if (u >= surv_.front()) {
        double w = (1.0 - u) / std::max(1.0 - surv_.front(), 1e-300);
        return grid_.front() * w;
      }
      // surv_ is non-increasing: binary search for the bracketing segment
      std::size_t lo = 0, hi = surv_.size() - 1;
      while (lo + 1 < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (surv_[mid] > u) lo = mid; else hi = mid;
      }
      double s0 = surv_[lo], s1 = surv_[hi];
      double w = s0 > s1 ? (s0 - u) / (s0 - s1) : 0.5;
      return grid_[lo] + w * (grid_[hi] - grid_[lo]);
    }
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace gwprune
