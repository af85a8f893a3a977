#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "gwprune/numeric.hpp"
#include "gwprune/rng.hpp"
#include "gwprune/stats.hpp"

using namespace gwprune;

TEST_CASE("one-sample KS accepts its own quantiles") {
  // exact plotting-position quantiles of Exp(1) keep D at ~1/(2n)
  int n = 1000;
  std::vector<double> s;
  for (int i = 1; i <= n; ++i) s.push_back(-std::log(1.0 - (i - 0.5) / n));
  KsResult r = ks_test(s, [](double x) { return 1.0 - std::exp(-x); });
  CHECK(r.statistic <= 0.5 / n + 1e-12);
  CHECK(r.p_value > 0.999);
}

TEST_CASE("one-sample KS rejects the wrong rate") {
  RngStream rng(3, 0);
  std::vector<double> s;
  for (int i = 0; i < 100000; ++i) s.push_back(rng.exponential(2.0));
  KsResult r = ks_test(s, [](double x) { return 1.0 - std::exp(-x); });
  CHECK(r.p_value < 1e-6);
  KsResult ok = ks_test(s, [](double x) { return 1.0 - std::exp(-2.0 * x); });
  CHECK(ok.p_value > 1e-3);
}

TEST_CASE("two-sample KS") {
  RngStream rng(4, 0);
  std::vector<double> a, b, c;
  for (int i = 0; i < 20000; ++i) {
    a.push_back(rng.exponential(1.0));
    b.push_back(rng.exponential(1.0));
    c.push_back(rng.exponential(1.4));
  }
  CHECK(ks_test(a, b).p_value > 1e-3);
  CHECK(ks_test(a, c).p_value < 1e-6);
}

TEST_CASE("chi-square goodness of fit, fair coin oracle") {
  Chi2Result r = chi2_test({50010, 49990}, {0.5, 0.5});
  CHECK(r.dof == 1);
  CHECK(r.statistic == doctest::Approx(0.004).epsilon(1e-9));
  CHECK(r.p_value == doctest::Approx(num::gamma_q(0.5, 0.002)).epsilon(1e-9));
  CHECK(r.p_value > 0.9);
}

TEST_CASE("chi-square pools sparse cells") {
  // expecteds 0.5 each in the tail cells must be pooled, not divided by
  std::vector<long long> counts{400, 350, 250, 1, 0, 1};
  std::vector<double> probs{0.4, 0.35, 0.248, 0.0005, 0.0005, 0.001};
  Chi2Result r = chi2_test(counts, probs);
  CHECK(std::isfinite(r.statistic));
  CHECK(r.dof >= 1);
  CHECK(r.p_value > 1e-6);
}

TEST_CASE("two-sample chi-square on keyed histograms") {
  RngStream rng(6, 0);
  std::map<long long, long long> h1, h2, h3;
  for (int i = 0; i < 40000; ++i) {
    h1[rng.poisson(3.0)]++;
    h2[rng.poisson(3.0)]++;
    h3[rng.poisson(3.6)]++;
  }
  CHECK(chi2_two_sample(h1, h2).p_value > 1e-3);
  CHECK(chi2_two_sample(h1, h3).p_value < 1e-6);
}

TEST_CASE("csv report format") {
  std::vector<TestReport> reps;
  TestReport t;
  t.name = "example";
  t.n = 100;
  t.N = 5;
  t.statistic = 0.25;
  t.p_or_err = 0.5;
  t.threshold = 0.001;
  t.pass = true;
  t.seed = 42;
  t.seconds = 0.0;
  reps.push_back(t);
  std::stringstream ss;
  write_csv(ss, reps);
  std::string header, line;
  std::getline(ss, header);
  std::getline(ss, line);
  CHECK(header == "name,n,N,statistic,p_or_err,threshold,verdict,seed,seconds");
  CHECK(line.rfind("example,100,5,0.25,0.5,0.001,pass,42,0", 0) == 0);
}
