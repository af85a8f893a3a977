#include "gwprune/mechanism.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gwprune/numeric.hpp"

namespace gwprune {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMassCap = 1000000;        // PMF truncation index cap
constexpr double kMassTailTol = 1e-12;           // stop once cumulative >= 1 - tol
}  // namespace

Mechanism::Mechanism(double alpha, double beta, std::vector<LevyAtom> atoms,
                     std::optional<StableTail> stable)
    : alpha_(alpha), beta_(beta), atoms_(std::move(atoms)), stable_(stable) {
  if (beta_ < 0.0) throw std::invalid_argument("Mechanism: beta must be >= 0");
  for (const auto& a : atoms_)
    if (!(a.r > 0.0) || !(a.mass > 0.0))
      throw std::invalid_argument("Mechanism: atoms need r > 0, mass > 0");
  if (stable_ && (!(stable_->index > 1.0) || !(stable_->index < 2.0) || !(stable_->scale > 0.0)))
    throw std::invalid_argument("Mechanism: stable tail needs index in (1,2), scale > 0");
}

double Mechanism::base_psi(double u) const {
  double v = alpha_ * u + beta_ * u * u;
  for (const auto& a : atoms_) {
    double comp = a.r < 1.0 ? u * a.r : 0.0;
    v += a.mass * (std::exp(-u * a.r) - 1.0 + comp);
  }
  if (stable_) {
    if (u < 0.0)
      throw std::domain_error("Mechanism: stable tail not finite at negative arguments");
    v += stable_->scale * std::pow(u, stable_->index);
  }
  return v;
}

double Mechanism::base_deriv(int m, double u) const {
  if (m < 1) throw std::invalid_argument("psi_deriv: m must be >= 1");
  double v = 0.0;
  if (m == 1) v += alpha_ + 2.0 * beta_ * u;
  if (m == 2) v += 2.0 * beta_;
  for (const auto& a : atoms_) {
    double t = a.mass * std::pow(-a.r, static_cast<double>(m)) * std::exp(-u * a.r);
    if (m == 1 && a.r < 1.0) t += a.mass * a.r;
    v += t;
  }
  if (stable_) {
    if (u < 0.0)
      throw std::domain_error("Mechanism: stable tail not finite at negative arguments");
    double a = stable_->index;
    double coef = stable_->scale;
    for (int j = 0; j < m; ++j) coef *= (a - static_cast<double>(j));
    // a in (1,2): u^{a-m} -> 0 as u -> 0+ for m = 1, diverges for m >= 2
    if (u == 0.0) {
      if (m == 1)
        coef = 0.0;
      else
        throw std::domain_error("psi_deriv: stable tail derivative diverges at 0");
    } else {
      coef *= std::pow(u, a - static_cast<double>(m));
    }
    v += coef;
  }
  return v;
}

double Mechanism::psi(double u) const {
  if (shift_ == 0.0) return base_psi(u);
  return base_psi(shift_ + u) - base_psi(shift_);
}

double Mechanism::psi_deriv(int m, double u) const { return base_deriv(m, shift_ + u); }

double Mechanism::grey_integral(double v) const {
  if (!(v > 0.0)) throw std::invalid_argument("grey_integral: v must be > 0");
  if (psi(v) <= 0.0) return kInf;
  auto f = [this](double u) { return 1.0 / psi(u); };
  double total = 0.0, prev_panel = kInf;
  double lo = v;
  int stale = 0;
  for (int k = 0; k < 400; ++k) {
    double hi = lo * 2.0;
    double panel = num::integrate(f, lo, hi);
    total += panel;
    if (panel <= 1e-14 * (total + 1.0)) {
      // geometric remainder estimate from the observed decay
      double rho = prev_panel > 0.0 && prev_panel < kInf ? panel / prev_panel : 0.5;
      if (rho < 1.0) total += panel * rho / (1.0 - rho);
      return total;
    }
    if (panel >= prev_panel) {
      if (++stale >= 40) return kInf;  // Grey condition fails
    } else {
      stale = 0;
    }
    prev_panel = panel;
    lo = hi;
  }
  return kInf;
}

double Mechanism::eta(double h) const {
  if (!(h > 0.0)) throw std::invalid_argument("eta: h must be > 0");
  double v = 1.0;
  double g = grey_integral(v);
  if (g == kInf && psi(v) > 0.0)
    throw std::runtime_error("eta: Grey condition fails, eta undefined");
  if (g > h) {
    double lo = v;
    while (grey_integral(v *= 2.0) > h) {
      lo = v;
      if (v > 1e300) throw std::runtime_error("eta: failed to bracket");
    }
    return num::bisect([&](double u) { return (psi(u) <= 0.0 ? kInf : grey_integral(u)) - h; },
                       lo, v, 1e-12);
  }
  double hi = v;
  while (true) {
    v *= 0.5;
    double gv = psi(v) <= 0.0 ? kInf : grey_integral(v);
    if (gv > h) break;
    hi = v;
    if (v < 1e-300) throw std::runtime_error("eta: failed to bracket");
  }
  // predicate bisection: grey_integral may be infinite at the low end
  double lo = v;
  while (hi - lo > 1e-12 * std::max(1.0, hi)) {
    double mid = 0.5 * (lo + hi);
    double gm = psi(mid) <= 0.0 ? kInf : grey_integral(mid);
    if (gm > h) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double Mechanism::q0(double theta) const {
  if (stable_ && shift_ + theta < 0.0)
    throw std::domain_error("q0: theta outside the finiteness domain of psi");
  double target = psi(theta);
  // locate the convexity minimum u* (psi' is increasing)
  double lo = theta, hi = std::max(theta, 0.0) + 1.0;
  while (psi_deriv(1, hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("q0: psi' never becomes positive");
  }
  double ustar;
  if (psi_deriv(1, lo) >= 0.0) {
    ustar = lo;
  } else {
    ustar = num::bisect([&](double u) { return psi_deriv(1, u); }, lo, hi, 1e-13);
  }
  if (theta >= ustar) return 0.0;
  // find u >= ustar with psi(u) = psi(theta)
  double uhi = std::max(ustar, 1.0);
  while (psi(uhi) < target) {
    uhi *= 2.0;
    if (uhi > 1e300) throw std::runtime_error("q0: failed to bracket");
  }
  if (psi(ustar) >= target) return 0.0;
  double u = num::bisect([&](double v) { return psi(v) - target; }, ustar, uhi, 1e-12);
  return std::max(0.0, u - theta);
}

double Mechanism::q0_inverse(double w) const {
  if (w < 0.0) throw std::invalid_argument("q0_inverse: w must be >= 0");
  if (w == 0.0) return 0.0;
  // q0 is decreasing on (-inf, 0]
  double lo = -1.0;
  while (q0(lo) < w) {
    lo *= 2.0;
    if (lo < -1e300) throw std::runtime_error("q0_inverse: failed to bracket");
  }
  return num::bisect([&](double th) { return q0(th) - w; }, lo, 0.0, 1e-12);
}

Mechanism Mechanism::shifted(double theta) const {
  Mechanism m = *this;
  m.shift_ = shift_ + theta;
  if (stable_ && m.shift_ < 0.0)
    throw std::domain_error("shifted: offset outside the finiteness domain");
  return m;
}

Mechanism Mechanism::tilted(double theta) const {
  Mechanism m = *this;
  m.alpha_ += theta;  // drift change commutes with the shift representation
  return m;
}

MechanismConditions Mechanism::check_conditions() const {
  MechanismConditions out;
  out.psi_prime_at_zero = psi_deriv(1, 0.0);
  if (out.psi_prime_at_zero > 1e-10)
    out.criticality = Criticality::Subcritical;
  else if (out.psi_prime_at_zero < -1e-10)
    out.criticality = Criticality::Supercritical;
  else
    out.criticality = Criticality::Critical;
  out.grey = std::isfinite(grey_integral(std::max(1.0, q0(0.0) + 1.0)));
  // conservativity: int_{0+} du/|psi| must diverge; scan shrinking panels
  {
    auto f = [this](double u) {
      double p = psi(u);
      return p == 0.0 ? kInf : 1.0 / std::fabs(p);
    };
    double hi = 0.5, total = 0.0, prev = -1.0;
    bool diverges = false;
    for (int k = 0; k < 80; ++k) {
      double lo = hi * 0.5;
      double panel;
      try {
        panel = num::integrate(f, lo, hi);
      } catch (...) {
        panel = kInf;
      }
      if (!std::isfinite(panel)) { diverges = true; break; }
      total += panel;
      if (prev >= 0.0 && panel >= prev * 0.999) { diverges = true; break; }
      if (panel <= 1e-14 * (total + 1.0)) break;  // integral converges
      prev = panel;
      hi = lo;
    }
    out.conservative = diverges;
  }
  return out;
}

OffspringLaw Mechanism::law_at(double u0) const {
  // xi(m) = u0^{m-1} (-1)^m psi^{(m)}(u0) / (c m!) for m >= 2, xi(0) = psi(u0)/(u0 c)
  double c = psi_deriv(1, u0);
  if (!(c > 0.0)) throw std::runtime_error("law_at: psi'(u0) must be > 0");
  double U = shift_ + u0;  // base-triple evaluation point
  OffspringLaw xi;
  xi.p.assign(3, 0.0);
  xi.p[0] = psi(u0) / (u0 * c);
  if (xi.p[0] < 0.0 && xi.p[0] > -1e-14) xi.p[0] = 0.0;
  // per-source running terms t(m) = contribution to xi(m), updated multiplicatively
  struct Src { double t; double ratio_num; bool stable; };
  std::vector<Src> srcs;
  for (const auto& a : atoms_) {
    double t2 = a.mass * a.r * a.r * std::exp(-a.r * U) * u0 / (2.0 * c);
    if (t2 > 0.0) srcs.push_back({t2, a.r * u0, false});
  }
  double stable_t = 0.0, stable_a = 0.0, stable_ru = 0.0;
  if (stable_) {
    stable_a = stable_->index;
    stable_t = stable_->scale * stable_a * (stable_a - 1.0) * std::pow(U, stable_a - 2.0) *
               u0 / (2.0 * c);
    stable_ru = u0 / U;
  }
  double beta_term = beta_ * u0 / c;
  double cum = xi.p[0];
  std::size_t m = 2;
  for (;;) {
    double tm = beta_term;
    beta_term = 0.0;  // quadratic part only feeds m = 2
    for (auto& s : srcs) tm += s.t;
    tm += stable_t;
    if (m >= xi.p.size()) xi.p.resize(m + 1, 0.0);
    xi.p[m] = tm;
    cum += tm;
    if (1.0 - cum <= kMassTailTol || m >= kMassCap) break;
    bool alive = stable_t > 1e-320;
    for (auto& s : srcs) {
      s.t *= s.ratio_num / static_cast<double>(m + 1);
      if (s.t > 1e-320) alive = true;
    }
    if (stable_) stable_t *= (static_cast<double>(m) - stable_a) / static_cast<double>(m + 1) * stable_ru;
    if (!alive && beta_term == 0.0) break;
    ++m;
  }
  xi.truncated_mass = std::max(0.0, 1.0 - cum);
  xi.trim();
  return xi;
}

ErasedLevyLaw Mechanism::erased_law(double h, double x) const {
  ErasedLevyLaw out;
  out.eta = eta(h);
  out.c = psi_deriv(1, out.eta);
  out.xi = law_at(out.eta);
  out.mu_mean = x * out.eta;
  out.mu = poisson_law(out.mu_mean);
  return out;
}

PruneLawBundle Mechanism::ad_prune_law(double h) const {
  double et = eta(h);
  double c = psi_deriv(1, et);
  Mechanism self = *this;
  PruneLawBundle b;
  b.hbar1 = [self, et, c](double theta) {
    return self.psi_deriv(1, et + theta) - c;
  };
  b.hm_survival = [self, et](int m, double theta) {
    double d = self.psi_deriv(m, et);
    if (d == 0.0) return 1.0;  // class never occurs (e.g. quadratic, m >= 3)
    return self.psi_deriv(m, et + theta) / d;
  };
  return b;
}

DomainFamily Mechanism::domain_family(long long n) const {
  if (n < 1) throw std::invalid_argument("domain_family: n must be >= 1");
  DomainFamily out;
  out.n = n;
  out.gamma = psi_deriv(1, static_cast<double>(n));
  out.xi = law_at(static_cast<double>(n));
  return out;
}

void write_mechanism(std::ostream& os, const Mechanism& m) {
  std::ostringstream buf;
  buf.precision(17);
  buf << "MECHANISM\n";
  buf << "alpha=" << m.alpha() << "\n";
  buf << "beta=" << m.beta() << "\n";
  for (const auto& a : m.atoms()) buf << "atom=" << a.r << "," << a.mass << "\n";
  if (m.stable_tail())
    buf << "stable=" << m.stable_tail()->index << "," << m.stable_tail()->scale << "\n";
  if (m.shift_offset() != 0.0) buf << "shift=" << m.shift_offset() << "\n";
  if (!m.label.empty()) buf << "label=" << m.label << "\n";
  os << buf.str();
}

Mechanism read_mechanism(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "MECHANISM")
    throw std::runtime_error("read_mechanism: missing MECHANISM header");
  double alpha = 0.0, beta = 0.0, shift = 0.0;
  std::vector<LevyAtom> atoms;
  std::optional<StableTail> stable;
  std::string label;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("read_mechanism: bad line: " + line);
    std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    if (key == "alpha") alpha = std::stod(val);
    else if (key == "beta") beta = std::stod(val);
    else if (key == "shift") shift = std::stod(val);
    else if (key == "label") label = val;
    else if (key == "atom") {
      auto comma = val.find(',');
      if (comma == std::string::npos) throw std::runtime_error("read_mechanism: bad atom: " + val);
      atoms.push_back({std::stod(val.substr(0, comma)), std::stod(val.substr(comma + 1))});
    } else if (key == "stable") {
      auto comma = val.find(',');
      if (comma == std::string::npos) throw std::runtime_error("read_mechanism: bad stable: " + val);
      stable = StableTail{std::stod(val.substr(0, comma)), std::stod(val.substr(comma + 1))};
    } else {
      throw std::runtime_error("read_mechanism: unknown key: " + key);
    }
  }
  Mechanism m(alpha, beta, std::move(atoms), stable);
  if (shift != 0.0) m = m.shifted(shift);
  m.label = label;
  return m;
}

}  // namespace gwprune
