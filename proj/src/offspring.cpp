#include "gwprune/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gwprune/numeric.hpp"

namespace gwprune {

namespace {
constexpr std::size_t kComposeSupportCap = 20000;  // O(K^2) re-expansion guard

void require_law(const std::vector<double>& p, double truncated, const char* who) {
  double sum = truncated;
  for (double v : p) {
    if (v < -1e-12) throw std::runtime_error(std::string(who) + ": negative mass");
    sum += v;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw std::runtime_error(std::string(who) + ": masses sum to " + std::to_string(sum));
}
}  // namespace

double OffspringLaw::total() const {
  double s = truncated_mass;
  for (double v : p) s += v;
  return s;
}

double OffspringLaw::mean() const {
  double m = 0.0;
  for (std::size_t k = 1; k < p.size(); ++k) m += static_cast<double>(k) * p[k];
  return m;
}

void OffspringLaw::trim() {
  while (p.size() > 1 && p.back() == 0.0) p.pop_back();
}

OffspringLaw binary_law(double p0) {
  OffspringLaw xi;
  xi.p = {p0, 0.0, 1.0 - p0};
  return xi;
}

OffspringLaw delta_law(std::size_t k) {
  OffspringLaw xi;
  xi.p.assign(k + 1, 0.0);
  xi.p[k] = 1.0;
  return xi;
}

OffspringLaw poisson_law(double mean, double tail_tol) {
  OffspringLaw xi;
  double term = std::exp(-mean), cum = 0.0;
  std::size_t k = 0;
  for (;;) {
    xi.p.push_back(term);
    cum += term;
    if (1.0 - cum <= tail_tol || k > 1000000) break;
    ++k;
    term *= mean / static_cast<double>(k);
  }
  xi.truncated_mass = std::max(0.0, 1.0 - cum);
  return xi;
}

double pgf_eval(const OffspringLaw& xi, double s) {
  // Horner from the top coefficient
  double acc = 0.0;
  for (std::size_t i = xi.p.size(); i-- > 0;) acc = acc * s + xi.p[i];
  return acc;
}

double pgf_deriv(const OffspringLaw& xi, int m, double s) {
  if (m < 0) throw std::invalid_argument("pgf_deriv: m must be >= 0");
  if (m == 0) return pgf_eval(xi, s);
  double acc = 0.0;
  for (std::size_t i = xi.p.size(); i-- > static_cast<std::size_t>(m);) {
    // falling factorial i (i-1) ... (i-m+1)
    double ff = 1.0;
    for (int j = 0; j < m; ++j) ff *= static_cast<double>(i - j);
    acc = acc * s + ff * xi.p[i];
  }
  return acc;  // Horner for sum_{k>=m} p_k k!/(k-m)! s^{k-m}
}

double extinction(const OffspringLaw& xi) {
  if (xi.p.empty()) throw std::invalid_argument("extinction: empty law");
  if (xi.mean() <= 1.0 + 1e-12) return 1.0;
  auto f = [&xi](double s) { return pgf_eval(xi, s) - s; };
  // f(0) = xi(0) >= 0; supercritical => f < 0 just below 1
  double hi = 1.0 - 1e-9;
  while (f(hi) >= 0.0 && hi > 0.5) hi = 1.0 - 2.0 * (1.0 - hi);
  if (f(hi) >= 0.0) throw std::runtime_error("extinction: failed to bracket root");
  return num::bisect(f, 0.0, hi, 1e-15);
}

double height_cdf(const OffspringLaw& xi, int h) {
  if (h < 0) throw std::invalid_argument("height_cdf: h must be >= 0");
  double u = 0.0;
  for (int j = 0; j < h; ++j) u = pgf_eval(xi, u);
  return u;
}

double height_cdf_cont(const OffspringLaw& xi, double c, double h) {
  if (!(c > 0.0) || !(h > 0.0)) throw std::invalid_argument("height_cdf_cont: bad c or h");
  double q = extinction(xi);
  auto integrand = [&](double s) { return 1.0 / (c * (pgf_eval(xi, s) - s)); };
  auto F = [&](double u) { return num::integrate(integrand, 0.0, u); };
  // F is increasing, F(0)=0, F(u) -> infinity as u -> q
  double hi = q * 0.5;
  for (int i = 0; i < 200 && F(hi) < h; ++i) hi = q - 0.5 * (q - hi);
  if (F(hi) < h) throw std::runtime_error("height_cdf_cont: failed to bracket");
  return num::bisect([&](double u) { return F(u) - h; }, 0.0, hi, 1e-13);
}

OffspringLaw compose_affine(const OffspringLaw& xi, double a, double b) {
  if (xi.p.size() > kComposeSupportCap)
    throw std::runtime_error("compose_affine: support too large for exact re-expansion");
  OffspringLaw out;
  out.p.assign(xi.p.size(), 0.0);
  out.truncated_mass = xi.truncated_mass;
  for (std::size_t k = 0; k < xi.p.size(); ++k) {
    double pk = xi.p[k];
    if (pk == 0.0) continue;
    if (a == 0.0) {
      // only the j=k term survives
      out.p[k] += pk * std::pow(b, static_cast<double>(k));
      continue;
    }
    // term(j) = C(k,j) a^{k-j} b^j, built multiplicatively
    double term = std::pow(a, static_cast<double>(k));
    for (std::size_t j = 0; j <= k; ++j) {
      out.p[j] += pk * term;
      if (j < k) term *= (static_cast<double>(k - j) / static_cast<double>(j + 1)) * (b / a);
    }
  }
  return out;
}

ErasedDiscrete erase_discrete(const OffspringLaw& xi, const OffspringLaw& mu, int h) {
  double p = height_cdf(xi, h);
  if (p >= 1.0 - 1e-15) throw std::runtime_error("erase_discrete: erasure level swallows the tree");
  OffspringLaw A = compose_affine(xi, p, 1.0 - p);
  ErasedDiscrete out;
  out.p = p;
  out.xi.p.assign(A.p.size(), 0.0);
  out.xi.truncated_mass = A.truncated_mass / (1.0 - p);
  out.xi.p[0] = (A.p[0] - p) / (1.0 - p);
  for (std::size_t j = 1; j < A.p.size(); ++j) out.xi.p[j] = A.p[j] / (1.0 - p);
  if (out.xi.p[0] < 0.0 && out.xi.p[0] > -1e-12) out.xi.p[0] = 0.0;
  out.xi.trim();
  out.mu = compose_affine(mu, p, 1.0 - p);
  out.mu.trim();
  require_law(out.xi.p, out.xi.truncated_mass, "erase_discrete");
  return out;
}

ErasedCont erase_cont(const OffspringLaw& xi, double c, const OffspringLaw& mu, double h) {
  double p = height_cdf_cont(xi, c, h);
  double gp1 = pgf_deriv(xi, 1, p);
  double denom = (1.0 - p) * (1.0 - gp1);
  if (!(denom > 0.0)) throw std::runtime_error("erase_cont: degenerate transform");
  OffspringLaw A = compose_affine(xi, p, 1.0 - p);
  ErasedCont out;
  out.p = p;
  out.c = c * (1.0 - gp1);
  out.xi.p.assign(std::max<std::size_t>(A.p.size(), 2), 0.0);
  out.xi.truncated_mass = A.truncated_mass / denom;
  out.xi.p[0] = (A.p[0] - p) / denom;
  double r1 = 1.0 + (A.p[1] - (1.0 - p)) / denom;  // analytically zero
  out.xi.p[1] = std::fabs(r1) < 1e-9 ? 0.0 : r1;
  for (std::size_t j = 2; j < A.p.size(); ++j) out.xi.p[j] = A.p[j] / denom;
  out.xi.trim();
  out.mu = compose_affine(mu, p, 1.0 - p);
  out.mu.trim();
  require_law(out.xi.p, out.xi.truncated_mass, "erase_cont");
  return out;
}

OffspringLaw pruned_law(const OffspringLaw& xi, const PruneTimeFamily& H, double theta) {
  if (theta < 0.0) throw std::invalid_argument("pruned_law: theta must be >= 0");
  OffspringLaw out;
  out.p.assign(xi.p.size(), 0.0);
  out.truncated_mass = xi.truncated_mass;
  out.p[0] = xi.mass(0);
  for (std::size_t i = 1; i < xi.p.size(); ++i) {
    if (xi.p[i] == 0.0) continue;
    double s = H.at(static_cast<int>(i)).survival(theta);
    out.p[i] = xi.p[i] * s;
    out.p[0] += xi.p[i] * (1.0 - s);
  }
  out.trim();
  return out;
}

PrunedCont pruned_law_cont(const OffspringLaw& xi, double c, const PruneLawBundle& bundle,
                           double theta) {
  if (theta < 0.0) throw std::invalid_argument("pruned_law_cont: theta must be >= 0");
  if (xi.mass(1) > 1e-12)
    throw std::invalid_argument("pruned_law_cont: xi must have no single-child class");
  double hb = bundle.hbar1(theta);
  PrunedCont out;
  out.c = c + hb;
  out.xi.p.assign(std::max<std::size_t>(xi.p.size(), 2), 0.0);
  out.xi.truncated_mass = xi.truncated_mass * c / out.c;
  double mass0 = c * xi.mass(0) + hb;  // skeleton cut leaves a bare segment
  for (std::size_t i = 2; i < xi.p.size(); ++i) {
    if (xi.p[i] == 0.0) continue;
    double s = bundle.hm_survival(static_cast<int>(i), theta);
    out.xi.p[i] = c * xi.p[i] * s / out.c;
    mass0 += c * xi.p[i] * (1.0 - s);
  }
  out.xi.p[0] = mass0 / out.c;
  out.xi.p[1] = 0.0;
  out.xi.trim();
  require_law(out.xi.p, out.xi.truncated_mass, "pruned_law_cont");
  return out;
}

double ErasedPruneDiscrete::h1_survival(double theta) const {
  double d = pgf_deriv(base_, 1, p);
  if (d <= 0.0) return 1.0;  // class never occurs
  return pgf_deriv(base_, 1, p * std::exp(-theta)) / d;
}

double ErasedPruneDiscrete::hm_survival(int m, double theta) const {
  if (m == 1) return h1_survival(theta);
  double d = pgf_deriv(base_, m, p);
  if (d <= 0.0) return 1.0;  // class never occurs
  return std::exp(-static_cast<double>(m - 1) * theta) *
         pgf_deriv(base_, m, p * std::exp(-theta)) / d;
}

PruneTimeFamily ErasedPruneDiscrete::family(double theta_max) const {
  ErasedPruneDiscrete self = *this;
  return PruneTimeFamily([self, theta_max](int m) {
    if (m == 1 && pgf_deriv(self.base_, 1, self.p) <= 0.0) return PruneTime::never();
    if (m >= 2 && pgf_deriv(self.base_, m, self.p) <= 0.0) return PruneTime::never();
    return PruneTime::tabulated(
        [self, m](double th) { return self.hm_survival(m, th); }, theta_max);
  });
}

ErasedPruneDiscrete erased_prune_law_discrete(const OffspringLaw& xi, int h, double theta) {
  double p = height_cdf(xi, h);
  if (p >= 1.0 - 1e-15) throw std::runtime_error("erased_prune_law_discrete: p too close to 1");
  double e = std::exp(-theta);
  OffspringLaw A = compose_affine(xi, p * e, (1.0 - p) * e);
  ErasedPruneDiscrete out;
  out.p = p;
  out.base_ = xi;
  double denom = (1.0 - p) * e;
  out.xi.p.assign(A.p.size(), 0.0);
  out.xi.truncated_mass = A.truncated_mass / denom;
  out.xi.p[0] = (A.p[0] - p * e - pgf_eval(xi, e) + e) / denom;
  for (std::size_t j = 1; j < A.p.size(); ++j) out.xi.p[j] = A.p[j] / denom;
  if (out.xi.p[0] < 0.0 && out.xi.p[0] > -1e-12) out.xi.p[0] = 0.0;
  out.xi.trim();
  require_law(out.xi.p, out.xi.truncated_mass, "erased_prune_law_discrete");
  return out;
}

OffspringLaw size_biased_root(const OffspringLaw& xi) {
  if (std::fabs(xi.mean() - 1.0) > 1e-9)
    throw std::invalid_argument("size_biased_root: law must be critical");
  OffspringLaw mu;
  if (xi.p.size() <= 1) throw std::invalid_argument("size_biased_root: trivial law");
  mu.p.assign(xi.p.size() - 1, 0.0);
  for (std::size_t i = 0; i + 1 < xi.p.size(); ++i)
    mu.p[i] = static_cast<double>(i + 1) * xi.p[i + 1];
  mu.trim();
  return mu;
}

PruneTime post_shift(const PruneTime& t, double theta_prime) {
  if (theta_prime <= 0.0) return t;
  switch (t.kind()) {
    case PruneTime::Kind::Exponential:
    case PruneTime::Kind::PointMassAtInfinity:
      return t;  // memoryless / degenerate
    case PruneTime::Kind::Tabulated: {
      double s0 = t.survival(theta_prime);
      if (s0 <= 0.0) return PruneTime::never();
      return PruneTime::tabulated(
          [t, theta_prime, s0](double th) { return t.survival(theta_prime + th) / s0; });
    }
  }
  return t;
}

void write_law(std::ostream& os, const OffspringLaw& xi) {
  std::ostringstream buf;
  buf.precision(17);
  buf << "OFFSPRING truncated_mass=" << xi.truncated_mass << "\n";
  for (std::size_t k = 0; k < xi.p.size(); ++k)
    if (xi.p[k] != 0.0 || k == 0) buf << k << " " << xi.p[k] << "\n";
  os << buf.str();
}

OffspringLaw read_law(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind("OFFSPRING", 0) != 0)
    throw std::runtime_error("read_law: missing OFFSPRING header");
  OffspringLaw xi;
  auto pos = header.find("truncated_mass=");
  if (pos != std::string::npos)
    xi.truncated_mass = std::stod(header.substr(pos + 15));
  std::string line;
  long long last_k = -1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    long long k;
    double p;
    if (!(ls >> k >> p)) throw std::runtime_error("read_law: bad line: " + line);
    if (k <= last_k) throw std::runtime_error("read_law: indices must be strictly increasing");
    last_k = k;
    if (static_cast<std::size_t>(k) >= xi.p.size()) xi.p.resize(k + 1, 0.0);
    xi.p[k] = p;
  }
  if (xi.p.empty()) throw std::runtime_error("read_law: no masses");
  return xi;
}

}  // namespace gwprune
