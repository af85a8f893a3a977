#include "gwprune/stats.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gwprune/numeric.hpp"

namespace gwprune {

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_test: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  const double rn = std::sqrt(n);
  KsResult out;
  out.statistic = d;
  out.p_value = num::kolmogorov_sf((rn + 0.12 + 0.11 / rn) * d);
  return out;
}

KsResult ks_test(std::vector<double> s1, std::vector<double> s2) {
  if (s1.empty() || s2.empty()) throw std::invalid_argument("ks_test: empty sample");
  std::sort(s1.begin(), s1.end());
  std::sort(s2.begin(), s2.end());
  const double n1 = static_cast<double>(s1.size());
  const double n2 = static_cast<double>(s2.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < s1.size() && j < s2.size()) {
    const double x = std::min(s1[i], s2[j]);
    while (i < s1.size() && s1[i] <= x) ++i;
    while (j < s2.size() && s2[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  const double ne = std::sqrt(n1 * n2 / (n1 + n2));
  KsResult out;
  out.statistic = d;
  out.p_value = num::kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d);
  return out;
}

namespace {

// Pool adjacent cells until each pooled expected count reaches the floor;
// a trailing underweight cell is merged backwards into its predecessor.
struct Pooled {
  std::vector<double> obs1, obs2, exp1, exp2;
};

Pooled pool_cells(const std::vector<double>& o1, const std::vector<double>& o2,
                  const std::vector<double>& e1, const std::vector<double>& e2,
                  double floor_e) {
  Pooled p;
  double a1 = 0, a2 = 0, b1 = 0, b2 = 0;
  for (std::size_t i = 0; i < o1.size(); ++i) {
    a1 += o1[i];
    a2 += o2[i];
    b1 += e1[i];
    b2 += e2[i];
    if (b1 >= floor_e && b2 >= floor_e) {
      p.obs1.push_back(a1);
      p.obs2.push_back(a2);
      p.exp1.push_back(b1);
      p.exp2.push_back(b2);
      a1 = a2 = b1 = b2 = 0;
    }
  }
  if (b1 > 0 || b2 > 0) {
    if (p.exp1.empty()) {
      p.obs1.push_back(a1);
      p.obs2.push_back(a2);
      p.exp1.push_back(b1);
      p.exp2.push_back(b2);
    } else {
      p.obs1.back() += a1;
      p.obs2.back() += a2;
      p.exp1.back() += b1;
      p.exp2.back() += b2;
    }
  }
  return p;
}

}  // namespace

Chi2Result chi2_test(const std::vector<long long>& counts, const std::vector<double>& probs) {
  if (counts.size() != probs.size()) throw std::invalid_argument("chi2_test: size mismatch");
  double total = 0.0;
  for (long long c : counts) total += static_cast<double>(c);
  std::vector<double> obs(counts.begin(), counts.end());
  std::vector<double> expd(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) expd[i] = probs[i] * total;
  std::vector<double> zero(obs.size(), 0.0);
  std::vector<double> big(obs.size(), 1e300);  // second row unused, never blocks pooling
  Pooled p = pool_cells(obs, zero, expd, big, 5.0);

  Chi2Result out;
  out.dof = static_cast<int>(p.obs1.size()) - 1;
  if (out.dof < 1) return out;
  for (std::size_t i = 0; i < p.obs1.size(); ++i) {
    if (p.exp1[i] <= 0) continue;
    const double d = p.obs1[i] - p.exp1[i];
    out.statistic += d * d / p.exp1[i];
  }
  out.p_value = num::gamma_q(0.5 * out.dof, 0.5 * out.statistic);
  return out;
}

Chi2Result chi2_two_sample(const std::map<long long, long long>& h1,
                           const std::map<long long, long long>& h2) {
  std::vector<long long> keys;
  for (const auto& kv : h1) keys.push_back(kv.first);
  for (const auto& kv : h2) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  double n1 = 0, n2 = 0;
  for (const auto& kv : h1) n1 += static_cast<double>(kv.second);
  for (const auto& kv : h2) n2 += static_cast<double>(kv.second);
  if (n1 <= 0 || n2 <= 0) throw std::invalid_argument("chi2_two_sample: empty histogram");

  std::vector<double> o1, o2, e1, e2;
  for (long long k : keys) {
    auto it1 = h1.find(k);
    auto it2 = h2.find(k);
    const double c1 = it1 == h1.end() ? 0.0 : static_cast<double>(it1->second);
    const double c2 = it2 == h2.end() ? 0.0 : static_cast<double>(it2->second);
    o1.push_back(c1);
    o2.push_back(c2);
    const double pooled = (c1 + c2) / (n1 + n2);
    e1.push_back(pooled * n1);
    e2.push_back(pooled * n2);
  }
  Pooled p = pool_cells(o1, o2, e1, e2, 5.0);

  Chi2Result out;
  out.dof = static_cast<int>(p.obs1.size()) - 1;
  if (out.dof < 1) return out;
  for (std::size_t i = 0; i < p.obs1.size(); ++i) {
    const double tot = p.obs1[i] + p.obs2[i];
    if (tot <= 0) continue;
    const double ex1 = tot * n1 / (n1 + n2);
    const double ex2 = tot * n2 / (n1 + n2);
    const double d1 = p.obs1[i] - ex1;
    const double d2 = p.obs2[i] - ex2;
    out.statistic += d1 * d1 / ex1 + d2 * d2 / ex2;
  }
  out.p_value = num::gamma_q(0.5 * out.dof, 0.5 * out.statistic);
  return out;
}

void write_csv(std::ostream& os, const std::vector<TestReport>& reports) {
  os << "name,n,N,statistic,p_or_err,threshold,verdict,seed,seconds\n";
  auto num17 = [](double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
  };
  for (const TestReport& r : reports) {
    os << r.name << ',' << r.n << ',' << r.N << ',' << num17(r.statistic) << ','
       << num17(r.p_or_err) << ',' << num17(r.threshold) << ','
       << (r.pass ? "pass" : "fail") << ',' << r.seed << ',' << num17(r.seconds) << '\n';
  }
}

}  // namespace gwprune
