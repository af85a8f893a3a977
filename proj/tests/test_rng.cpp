#include <cmath>
#include <vector>

#include "doctest.h"
#include "gwprune/rng.hpp"
#include "gwprune/stats.hpp"

using namespace gwprune;

TEST_CASE("streams are deterministic and independent") {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  bool same = true, diff = false;
  for (int i = 0; i < 100; ++i) {
    auto x = a.next_u64(), y = b.next_u64(), z = c.next_u64();
    same = same && (x == y);
    diff = diff || (x != z);
  }
  CHECK(same);
  CHECK(diff);
}

TEST_CASE("uniform lies in (0,1) and has the right first moments") {
  RngStream r(1, 0);
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double u = r.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.005);
  CHECK(std::abs(sum2 / n - 1.0 / 3.0) < 0.005);
}

TEST_CASE("exponential and gamma means") {
  RngStream r(2, 0);
  double se = 0.0, sg = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    se += r.exponential(2.0);
    sg += r.gamma(3.5);
  }
  CHECK(std::abs(se / n - 0.5) < 0.01);
  CHECK(std::abs(sg / n - 3.5) < 0.05);
}

namespace {
std::vector<double> binom_pmf(long long n, double p) {
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  for (long long k = 0; k <= n; ++k)
    out[static_cast<std::size_t>(k)] =
        std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                 k * std::log(p) + (n - k) * std::log1p(-p));
  return out;
}
}  // namespace

TEST_CASE("binomial matches the exact pmf on both sampling paths") {
  for (auto [n, p] : {std::pair<long long, double>{10, 0.3}, {500, 0.4}, {20000, 0.5}}) {
    RngStream r(3, static_cast<std::uint64_t>(n));
    auto pmf = binom_pmf(n, p);
    std::vector<long long> counts(pmf.size(), 0);
    const int reps = 40000;
    for (int i = 0; i < reps; ++i) {
      long long k = r.binomial(n, p);
      REQUIRE(k >= 0);
      REQUIRE(k <= n);
      counts[static_cast<std::size_t>(k)]++;
    }
    Chi2Result c = chi2_test(counts, pmf);
    CHECK(c.p_value > 1e-4);
  }
}

TEST_CASE("poisson mean and variance") {
  RngStream r(4, 0);
  double s = 0.0, s2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double k = static_cast<double>(r.poisson(4.2));
    s += k;
    s2 += k * k;
  }
  double mean = s / n;
  CHECK(std::abs(mean - 4.2) < 0.05);
  CHECK(std::abs(s2 / n - mean * mean - 4.2) < 0.2);
}

TEST_CASE("geometric1 has pmf q^{k-1}(1-q)") {
  RngStream r(5, 0);
  const double q = 0.7;
  double s = 0.0;
  long long ones = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    long long k = r.geometric1(q);
    REQUIRE(k >= 1);
    s += static_cast<double>(k);
    if (k == 1) ++ones;
  }
  CHECK(std::abs(s / n - 1.0 / (1.0 - q)) < 0.05);
  CHECK(std::abs(static_cast<double>(ones) / n - (1.0 - q)) < 0.01);
}
