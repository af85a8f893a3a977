#pragma once

// Distributions of pruning times on (0, infinity], indexed by vertex class
// (number of subtrees above the vertex).  A PruneTime is one class's law;
// PruneTimeFamily maps class index m >= 1 to a law.  PruneLawBundle carries
// the continuum skeleton/branch mark data: the cumulative skeleton intensity
// Hbar1 and the per-class survival functions for branch-point times.

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "gwprune/rng.hpp"

namespace gwprune {

class PruneTime {
 public:
  enum class Kind { Exponential, PointMassAtInfinity, Tabulated };

  static PruneTime exponential(double rate) {
    PruneTime t;
    t.kind_ = Kind::Exponential;
    t.rate_ = rate;
    return t;
  }
  static PruneTime never() {
    PruneTime t;
    t.kind_ = Kind::PointMassAtInfinity;
    return t;
  }
  // Tabulate an analytic survival function S (non-increasing, S(0+)=1) on
  // 1024 log-spaced points of (0, theta_max]; beyond theta_max the remaining
  // mass is treated as sitting at infinity for sampling purposes.
  static PruneTime tabulated(const std::function<double(double)>& survival,
                             double theta_max = 50.0);

  Kind kind() const { return kind_; }

  double survival(double theta) const;            // P(T > theta), theta >= 0
  double cdf(double theta) const { return 1.0 - survival(theta); }
  double mass_at_infinity() const;

  // Draws from the law; may return +infinity.
  double sample(RngStream& rng) const;

 private:
  Kind kind_ = Kind::PointMassAtInfinity;
  double rate_ = 0.0;
  double theta_max_ = 50.0;
  std::vector<double> grid_;      // log-spaced thetas
  std::vector<double> surv_;      // survival at grid_
};

class PruneTimeFamily {
 public:
  PruneTimeFamily() = default;
  explicit PruneTimeFamily(std::function<PruneTime(int)> maker)
      : maker_(std::move(maker)) {}

  void set(int m, PruneTime t) { explicit_[m] = std::move(t); }

  const PruneTime& at(int m) const {
    if (m < 1) throw std::invalid_argument("PruneTimeFamily: class index must be >= 1");
    auto it = explicit_.find(m);
    if (it != explicit_.end()) return it->second;
    if (!maker_) throw std::out_of_range("PruneTimeFamily: no law for class " + std::to_string(m));
    auto [jt, ok] = explicit_.emplace(m, maker_(m));
    return jt->second;
  }

  // Equal-rate family: every class gets Exp(rate).
  static PruneTimeFamily equal_rate(double rate) {
    return PruneTimeFamily([rate](int) { return PruneTime::exponential(rate); });
  }
  // Pruning at branch points: class 1 never cut, class m >= 2 at rate m-1.
  static PruneTimeFamily branch_points() {
    return PruneTimeFamily([](int m) {
      return m >= 2 ? PruneTime::exponential(static_cast<double>(m - 1)) : PruneTime::never();
    });
  }

 private:
  std::function<PruneTime(int)> maker_;
  mutable std::map<int, PruneTime> explicit_;
};

// Continuum pruning data: skeleton marks fall as a Poisson process with
// cumulative intensity hbar1(theta) per unit length; every branch point with
// m >= 2 subtrees above it carries one time with survival hm_survival(m, .).
struct PruneLawBundle {
  std::function<double(double)> hbar1;                    // cumulative, hbar1(0)=0
  std::function<double(int, double)> hm_survival;          // m >= 2
  double theta_max = 50.0;

  // Edge-pruning (AP) bundle: Lebesgue skeleton intensity, no branch marks.
  static PruneLawBundle ap() {
    PruneLawBundle b;
    b.hbar1 = [](double t) { return t; };
    b.hm_survival = [](int, double) { return 1.0; };
    return b;
  }
};

}  // namespace gwprune
