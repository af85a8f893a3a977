#pragma once

// Statistical tests and reporting used by the verification experiments.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace gwprune {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// one-sample KS against a continuous CDF
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);
// two-sample KS
KsResult ks_test(std::vector<double> s1, std::vector<double> s2);

struct Chi2Result {
  double statistic = 0.0;
  double p_value = 1.0;
  int dof = 0;
};

// goodness of fit of counts against probabilities (adjacent cells pooled
// until every expected count is >= 5)
Chi2Result chi2_test(const std::vector<long long>& counts, const std::vector<double>& probs);

// two-sample chi-square on keyed histograms (cells pooled the same way)
Chi2Result chi2_two_sample(const std::map<long long, long long>& h1,
                           const std::map<long long, long long>& h2);

struct TestReport {
  std::string name;
  long long n = 0;        // structural scale (lattice size etc.), 0 where not applicable
  long long N = 0;        // replicates
  double statistic = 0.0;
  double p_or_err = 0.0;  // p-value for statistical checks, |error| for deterministic ones
  double threshold = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  double seconds = 0.0;
};

// columns: name,n,N,statistic,p_or_err,threshold,verdict,seed,seconds
void write_csv(std::ostream& os, const std::vector<TestReport>& reports);

}  // namespace gwprune
