#pragma once

// Counter-based splittable random stream.
//
// Every consumer gets its own (seed, stream_id) pair; draws are produced by
// running SplitMix64 over an incrementing counter whose origin mixes seed and
// stream.  All variate transforms below are hand-rolled so that output is
// bit-for-bit identical across platforms (std::*_distribution is not).

#include <cstdint>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace gwprune {

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) {
    // two mixing rounds keep streams with nearby ids decorrelated
    counter_ = mix_(seed + 0x9e3779b97f4a7c15ULL * (stream_id + 1));
    counter_ = mix_(counter_ ^ (stream_id * 0xbf58476d1ce4e5b9ULL + 0x94d049bb133111ebULL));
  }

  std::uint64_t next_u64() { return mix_(counter_ += 0x9e3779b97f4a7c15ULL); }

  // uniform on (0,1), never returns 0 or 1
  double uniform() {
    double u = (next_u64() >> 11) * 0x1.0p-53;
    return u > 0.0 ? u : 0x1.0p-53;
  }

  double exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
    return -std::log(uniform()) / rate;
  }

  // geometric on {1,2,...} with P(k) = (1-q)^{k-1} q, i.e. failure prob q... careful:
  // geometric1(q) returns k with P(k) = q^{k-1} (1-q); q in [0,1).
  long long geometric1(double q) {
    if (q <= 0.0) return 1;
    if (q >= 1.0) throw std::invalid_argument("geometric1: q must be < 1");
    double u = uniform();
    return 1 + static_cast<long long>(std::floor(std::log(u) / std::log(q)));
  }

  double normal() {
    if (have_spare_) { have_spare_ = false; return spare_; }
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Gamma(shape, 1) by Marsaglia-Tsang; shape boost for shape < 1.
  double gamma(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be > 0");
    if (shape < 1.0) {
      double u = uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double beta(double a, double b) {
    double x = gamma(a);
    double y = gamma(b);
    return x / (x + y);
  }

  long long poisson(double mean) {
    if (mean < 0.0) throw std::invalid_argument("poisson: mean must be >= 0");
    if (mean == 0.0) return 0;
    if (mean <= 30.0) {
      double l = std::exp(-mean), p = 1.0;
      long long k = 0;
      do { ++k; p *= uniform(); } while (p > l);
      return k - 1;
    }
    // split recursively; each half is again Poisson
    return poisson(mean * 0.5) + poisson(mean * 0.5);
  }

  // Exact Binomial(n, p) via the order-statistic (beta) recursion: O(log n)
  // gamma draws, no approximation.
  long long binomial(long long n, double p) {
    if (n < 0) throw std::invalid_argument("binomial: n must be >= 0");
    if (p <= 0.0) return 0;
    if (p >= 1.0) return n;
    if (n >= 64 && n * p * (1.0 - p) >= 16.0) return binomial_by_inversion_(n, p);
    long long acc = 0;
    while (n >= 64) {
      long long m = (n + 1) / 2;
      double b = beta(static_cast<double>(m), static_cast<double>(n - m + 1));
      if (p < b) {
        n = m - 1;
        p = p / b;
      } else {
        acc += m;
        n = n - m;
        p = (p - b) / (1.0 - b);
      }
    }
    for (long long i = 0; i < n; ++i)
      if (uniform() < p) ++acc;
    return acc;
  }

  // index into a cdf table (non-decreasing, last entry ~1)
  std::size_t discrete_cdf(const std::vector<double>& cdf) {
    double u = uniform();
    std::size_t lo = 0, hi = cdf.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (cdf[mid] < u) lo = mid + 1; else hi = mid;
    }
    return lo < cdf.size() ? lo : cdf.size() - 1;
  }

 private:
  // Inversion around the mode: one uniform, outward pmf sweep via the
  // ratio recurrences.  Used when the distribution is wide enough that the
  // expected sweep length O(sqrt(n p (1-p))) beats the splitting recursion.
  long long binomial_by_inversion_(long long n, double p) {
    const long long mode = static_cast<long long>((static_cast<double>(n) + 1.0) * p);
    const double lpm = std::lgamma(static_cast<double>(n) + 1.0) -
                       std::lgamma(static_cast<double>(mode) + 1.0) -
                       std::lgamma(static_cast<double>(n - mode) + 1.0) +
                       static_cast<double>(mode) * std::log(p) +
                       static_cast<double>(n - mode) * std::log1p(-p);
    const double r = p / (1.0 - p);
    double u = uniform();
    double pm = std::exp(lpm);
    if (u < pm) return mode;
    u -= pm;
    long long lo = mode, hi = mode;
    double plo = pm, phi = pm;
    while (lo > 0 || hi < n) {
      double next_lo = lo > 0 ? plo * (static_cast<double>(lo) /
                                       (static_cast<double>(n - lo + 1) * r))
                              : -1.0;
      double next_hi = hi < n ? phi * (static_cast<double>(n - hi) * r /
                                       static_cast<double>(hi + 1))
                              : -1.0;
      if (next_hi > next_lo) {
        ++hi;
        phi = next_hi;
        if (u < phi) return hi;
        u -= phi;
      } else {
        --lo;
        plo = next_lo;
        if (u < plo) return lo;
        u -= plo;
      }
    }
    return mode;  // unreachable up to rounding residue ~1e-15
  }

  static std::uint64_t mix_(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gwprune
