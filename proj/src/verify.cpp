#include "gwprune/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gwprune/prune.hpp"
#include "gwprune/realtree.hpp"
#include "gwprune/sampler.hpp"

namespace gwprune {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

// Replicate fan-out: replicate i always uses streams derived from i, so the
// aggregate is independent of the worker count; per-worker locals are merged
// in worker-index order.
template <typename Local, typename Body>
std::vector<Local> fan_out(long long N, int workers, const Body& body) {
  if (workers < 1) workers = 1;
  std::vector<Local> locals(static_cast<std::size_t>(workers));
  if (workers == 1) {
    for (long long i = 0; i < N; ++i) body(i, locals[0]);
    return locals;
  }
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w]() {
      long long lo = N * w / workers;
      long long hi = N * (w + 1) / workers;
      for (long long i = lo; i < hi; ++i) body(i, locals[static_cast<std::size_t>(w)]);
    });
  }
  for (auto& t : threads) t.join();
  return locals;
}

using Hist = std::map<long long, long long>;

void merge_hist(Hist& into, const Hist& from) {
  for (const auto& kv : from) into[kv.first] += kv.second;
}

TestReport chi2_report(const std::string& name, long long n, long long N,
                       const Chi2Result& c, const VerifyOptions& opt, const Timer& tm) {
  TestReport r;
  r.name = name;
  r.n = n;
  r.N = N;
  r.statistic = c.statistic;
  r.p_or_err = c.p_value;
  r.threshold = opt.significance;
  r.pass = c.p_value >= opt.significance;
  r.seed = opt.seed;
  r.seconds = tm.elapsed();
  return r;
}

long long count_branch_vertices(const RealTree& t) {
  auto ch = children_of(t);
  long long v = 0;
  for (int i = 1; i < t.size(); ++i)
    if (ch[static_cast<std::size_t>(i)].size() >= 2) ++v;
  return v;
}

// (first-branch degree, height ∧ 10) cell of a unit-edge tree
long long marginal_key(const RealTree& t) {
  FirstBranch fb = first_branch(t);
  long long g = std::llround(gamma_height(t));
  return std::min<long long>(fb.kk, 10) * 16 + std::min<long long>(g, 10);
}

}  // namespace

TestReport check_prune_marginal(const OffspringLaw& xi, const PruneTimeFamily& H,
                                double theta_sim, double theta_law,
                                const VerifyOptions& opt, const std::string& name) {
  Timer tm;
  Caps caps;
  caps.max_height = 12.0;  // the functional truncates heights at 10 on both sides
  OffspringLaw law = pruned_law(xi, H, theta_law);
  OffspringLaw mu = delta_law(1);

  struct Local {
    Hist direct, pruned;
  };
  auto locals = fan_out<Local>(opt.N, opt.workers, [&](long long i, Local& loc) {
    RngStream ra(opt.seed, static_cast<std::uint64_t>(2 * i));
    RealTree t = gw_unit(xi, mu, caps, ra);
    MarkSet marks = mark_H(t, H, ra);
    RealTree tc = cut(t, marks, theta_sim);
    loc.pruned[marginal_key(tc)]++;
    RngStream rb(opt.seed, static_cast<std::uint64_t>(2 * i + 1));
    RealTree td = gw_unit(law, mu, caps, rb);
    loc.direct[marginal_key(td)]++;
  });
  Hist pruned, direct;
  for (const auto& loc : locals) {
    merge_hist(pruned, loc.pruned);
    merge_hist(direct, loc.direct);
  }
  return chi2_report(name, 0, opt.N, chi2_two_sample(pruned, direct), opt, tm);
}

std::vector<TestReport> check_erased_prune_times(const OffspringLaw& xi, int h,
                                                 const VerifyOptions& opt,
                                                 const std::string& name_prefix,
                                                 double power_rate) {
  Timer tm;
  Caps caps;
  caps.max_height = 12.0;
  const double max_collect = caps.max_height - h - 1;  // keep-decisions complete below this
  OffspringLaw mu = delta_law(1);

  using ClassSamples = std::map<int, std::vector<double>>;
  auto locals = fan_out<ClassSamples>(opt.N, opt.workers, [&](long long i, ClassSamples& loc) {
    RngStream rng(opt.seed, static_cast<std::uint64_t>(i));
    RealTree t = gw_unit(xi, mu, caps, rng);
    MarkSet marks = mark_branchpoints(t, rng);
    std::vector<double> vtime(static_cast<std::size_t>(t.size()), kInf);
    for (const Mark& m : marks.marks) vtime[static_cast<std::size_t>(m.edge)] = m.time;

    std::vector<int> origin;
    RealTree e = erase(t, static_cast<double>(h), EraseMode::PreserveSkeleton, &origin);
    auto hts = heights_of(e);
    auto ch = children_of(e);
    for (int j = 1; j < e.size(); ++j) {
      if (hts[static_cast<std::size_t>(j)] > max_collect) continue;
      int m = static_cast<int>(ch[static_cast<std::size_t>(j)].size());
      if (m < 1) continue;
      loc[m].push_back(vtime[static_cast<std::size_t>(origin[static_cast<std::size_t>(j)])]);
    }
  });
  ClassSamples all;
  for (auto& loc : locals)
    for (auto& kv : loc) {
      auto& dst = all[kv.first];
      dst.insert(dst.end(), kv.second.begin(), kv.second.end());
    }

  ErasedPruneDiscrete law = erased_prune_law_discrete(xi, h, 0.0);
  std::vector<TestReport> out;
  for (auto& kv : all) {
    const int m = kv.first;
    std::vector<double> finite;
    finite.reserve(kv.second.size());
    for (double v : kv.second)
      if (std::isfinite(v)) finite.push_back(v);
    if (finite.size() < 100) continue;
    double s_inf = m == 1 ? law.h1_survival(40.0) : law.hm_survival(m, 40.0);
    if (s_inf < 1e-12) s_inf = 0.0;
    auto cdf = [&, m, s_inf](double theta) {
      if (power_rate > 0.0) return -std::expm1(-power_rate * theta);
      double s = m == 1 ? law.h1_survival(theta) : law.hm_survival(m, theta);
      return (1.0 - s) / (1.0 - s_inf);
    };
    KsResult ks = ks_test(finite, cdf);
    TestReport r;
    r.name = name_prefix + "_class" + std::to_string(m);
    r.n = m;
    r.N = static_cast<long long>(finite.size());
    r.statistic = ks.statistic;
    r.p_or_err = ks.p_value;
    r.threshold = opt.significance;
    r.pass = ks.p_value >= opt.significance;
    r.seed = opt.seed;
    r.seconds = tm.elapsed();
    out.push_back(std::move(r));
  }
  if (out.empty()) throw std::runtime_error("check_erased_prune_times: no class reached 100 samples");
  return out;
}

TestReport check_counting_law(const Mechanism& mech, double h, double x, double a,
                              double theta1, double theta2, CountingRegime regime,
                              double oracle_scale, const VerifyOptions& opt,
                              const std::string& name) {
  Timer tm;
  ErasedLevyLaw el = mech.erased_law(h, x);
  PruneLawBundle bundle =
      regime == CountingRegime::Branch ? mech.ad_prune_law(h) : PruneLawBundle::ap();
  bundle.theta_max = theta2;
  Caps caps;
  caps.max_height = a;  // structure below the counting level is complete

  auto cell = [](long long n1, long long inc) {
    return std::min<long long>(n1, 12) * 16 + std::min<long long>(inc, 12);
  };
  struct Local {
    Hist direct, oracle;
  };
  auto locals = fan_out<Local>(opt.N, opt.workers, [&](long long i, Local& loc) {
    RngStream ra(opt.seed, static_cast<std::uint64_t>(2 * i));
    RealTree f = gw_exp(el.xi, el.c, el.mu, caps, ra);
    MarkSet marks = mark_Hbar(f, bundle, ra);
    long long n1 = count_N(f, marks, a, theta1);
    long long n2 = count_N(f, marks, a, theta2);
    loc.direct[cell(n1, n2 - n1)]++;

    // conditional resampling given (L_a, V_{a,i}) of the same forest
    RngStream rb(opt.seed, static_cast<std::uint64_t>(2 * i + 1));
    LevelStats ls = level_stats(f, a);
    long long o1 = rb.poisson(ls.L * bundle.hbar1(theta1) * oracle_scale);
    long long oinc = rb.poisson(ls.L * (bundle.hbar1(theta2) - bundle.hbar1(theta1)) * oracle_scale);
    for (const auto& vi : ls.V) {
      double f1 = std::min(1.0, (1.0 - bundle.hm_survival(vi.first, theta1)) * oracle_scale);
      double f2 = std::min(1.0, (1.0 - bundle.hm_survival(vi.first, theta2)) * oracle_scale);
      for (int k = 0; k < vi.second; ++k) {
        double u = rb.uniform();
        if (u < f1)
          ++o1;
        else if (u < f2)
          ++oinc;
      }
    }
    loc.oracle[cell(o1, oinc)]++;
  });
  Hist direct, oracle;
  for (const auto& loc : locals) {
    merge_hist(direct, loc.direct);
    merge_hist(oracle, loc.oracle);
  }
  return chi2_report(name, 0, opt.N, chi2_two_sample(direct, oracle), opt, tm);
}

TestReport experiment_height(const Mechanism& mech, long long n, double h, double x,
                             double tol, const std::string& name) {
  Timer tm;
  DomainFamily fam = mech.domain_family(n);
  long long iters = static_cast<long long>(std::floor(fam.gamma * h));
  double w = 0.0;
  for (long long k = 0; k < iters; ++k) w = pgf_eval(fam.xi, w);
  double value = std::pow(w, static_cast<double>(static_cast<long long>(std::floor(n * x))));
  double target = std::exp(-x * mech.eta(h));
  TestReport r;
  r.name = name;
  r.n = n;
  r.N = 0;
  r.statistic = value;
  r.p_or_err = std::abs(value - target);
  r.threshold = tol;
  r.pass = r.p_or_err <= tol;
  r.seconds = tm.elapsed();
  return r;
}

std::vector<TestReport> experiment_ascension(const Mechanism& mech, long long n,
                                             double theta, double x, double det_tol,
                                             const VerifyOptions& opt,
                                             const std::string& name_prefix) {
  if (!(theta < 0.0)) throw std::invalid_argument("experiment_ascension: theta must be < 0");
  Timer tm;
  DomainFamily fam = mech.domain_family(n);
  OffspringLaw law = erased_prune_law_discrete(fam.xi, 0, theta / static_cast<double>(n)).xi;
  double q = extinction(law);
  long long nx = static_cast<long long>(std::floor(n * x));
  double value = std::pow(q, static_cast<double>(nx));
  double target = std::exp(-x * mech.q0(theta));

  std::vector<TestReport> out;
  {
    TestReport r;
    r.name = name_prefix + "_deterministic";
    r.n = n;
    r.N = 0;
    r.statistic = value;
    r.p_or_err = std::abs(value - target);
    r.threshold = det_tol;
    r.pass = r.p_or_err <= det_tol;
    r.seed = opt.seed;
    r.seconds = tm.elapsed();
    out.push_back(r);
  }

  // Monte-Carlo extinction fraction of the forest of floor(nx) progenitors.
  // Survival is declared at population z_cap with q^z_cap <= 1e-8, so the
  // classification bias is negligible against the 3-sigma band.
  long long z_cap = 1000000;
  if (q < 1.0) {
    double zc = std::log(1e-8) / std::log(q);
    z_cap = std::min<long long>(1000000, std::max<long long>(10000, static_cast<long long>(zc) + 1));
  }
  std::vector<std::pair<long long, double>> classes;  // (k, mass), k >= 1
  for (std::size_t k = 1; k < law.p.size(); ++k)
    if (law.p[k] > 0.0) classes.emplace_back(static_cast<long long>(k), law.p[k]);

  auto locals = fan_out<long long>(opt.N, opt.workers, [&](long long i, long long& extinct) {
    RngStream rng(opt.seed, static_cast<std::uint64_t>(i) + 1000000);
    long long z = nx;
    for (long long gen = 0; gen < 10000000 && z > 0 && z < z_cap; ++gen) {
      long long next = 0;
      long long remaining = z;
      double mass = 1.0;
      for (const auto& kc : classes) {
        if (remaining <= 0) break;
        long long c = rng.binomial(remaining, std::min(1.0, kc.second / mass));
        next += kc.first * c;
        remaining -= c;
        mass -= kc.second;
      }
      z = next;
    }
    if (z == 0) ++extinct;
  });
  long long extinct = 0;
  for (long long e : locals) extinct += e;
  double frac = static_cast<double>(extinct) / static_cast<double>(opt.N);
  double sigma = std::sqrt(std::max(value * (1.0 - value), 1e-12) / static_cast<double>(opt.N));

  TestReport r;
  r.name = name_prefix + "_montecarlo";
  r.n = n;
  r.N = opt.N;
  r.statistic = frac;
  r.p_or_err = std::abs(frac - value);
  r.threshold = 3.0 * sigma;
  r.pass = r.p_or_err <= r.threshold;
  r.seed = opt.seed;
  r.seconds = tm.elapsed();
  out.push_back(r);
  return out;
}

namespace {

// Sparse simulation of a near-critical unit-edge GW(law) tree: single-child
// chains are drawn as geometric lengths instead of materialised, so the cost
// is proportional to the contracted tree.  Returns false on budget breach.
bool sparse_tree(const OffspringLaw& law, double xi1, const std::vector<double>& cond_cdf,
                 const std::vector<long long>& cond_val, RngStream& rng,
                 long long* max_depth, long long* branch_count, long long budget) {
  std::vector<long long> stack;
  stack.push_back(0);
  long long used = 0;
  while (!stack.empty()) {
    if (++used > budget) return false;
    long long d = stack.back();
    stack.pop_back();
    long long v = d + rng.geometric1(xi1);
    long long k = cond_val[rng.discrete_cdf(cond_cdf)];
    if (k == 0) {
      *max_depth = std::max(*max_depth, v);
      continue;
    }
    ++*branch_count;
    for (long long c = 0; c < k; ++c) stack.push_back(v);
  }
  (void)law;
  return true;
}

long long functional_cell(long long n_root, double gamma, long long branches, bool overflow) {
  if (overflow) return 99999;
  static const double edges[] = {0.125, 0.3, 0.55, 0.85, 1.25, 1.8, 2.6};
  long long g = 0;
  while (g < 7 && gamma > edges[g]) ++g;
  return std::min<long long>(n_root, 6) * 100 + g * 10 + std::min<long long>(branches, 5);
}

}  // namespace

TestReport experiment_marginal_convergence(const Mechanism& mech, long long n, double h,
                                           double x, double theta, double theta_limit,
                                           PruneRegime regime, const VerifyOptions& opt,
                                           const std::string& name) {
  Timer tm;
  DomainFamily fam = mech.domain_family(n);
  const double gamma = fam.gamma;
  const int hn = static_cast<int>(std::llround(gamma * h));
  const long long nx = static_cast<long long>(std::floor(n * x));
  ErasedDiscrete ed = erase_discrete(fam.xi, delta_law(1), hn);

  // exact one-dimensional marginal of the h-erased pruned discrete forest
  OffspringLaw dlaw;
  double root_p = 1.0 - ed.p;
  switch (regime) {
    case PruneRegime::Branch:
      dlaw = erased_prune_law_discrete(fam.xi, hn, theta / static_cast<double>(n)).xi;
      break;
    case PruneRegime::Edge: {
      double e = std::exp(-theta / gamma);
      dlaw = compose_affine(ed.xi, 1.0 - e, e);
      root_p *= e;
      break;
    }
    case PruneRegime::EqualRate:
      dlaw = pruned_law(ed.xi, PruneTimeFamily::equal_rate(1.0), theta / gamma);
      break;
  }
  dlaw.trim();
  const double xi1 = dlaw.mass(1);
  std::vector<double> cond_cdf;
  std::vector<long long> cond_val;
  {
    double acc = 0.0;
    double norm = 1.0 - xi1;
    for (std::size_t k = 0; k < dlaw.p.size(); ++k) {
      if (k == 1 || dlaw.p[k] <= 0.0) continue;
      acc += dlaw.p[k] / norm;
      cond_cdf.push_back(acc);
      cond_val.push_back(static_cast<long long>(k));
    }
  }

  // analytic continuum limit law
  ErasedLevyLaw el = mech.erased_law(h, x);
  PruneLawBundle bundle =
      regime == PruneRegime::Branch ? mech.ad_prune_law(h) : PruneLawBundle::ap();
  PrunedCont pl = pruned_law_cont(el.xi, el.c, bundle, theta_limit);
  Caps caps;
  caps.max_nodes = 2000000;

  struct Local {
    Hist discrete, limit;
  };
  auto locals = fan_out<Local>(opt.N, opt.workers, [&](long long i, Local& loc) {
    RngStream ra(opt.seed, static_cast<std::uint64_t>(2 * i));
    long long roots = ra.binomial(nx, root_p);
    long long max_depth = 0, branches = 0;
    bool ok = true;
    for (long long t = 0; t < roots && ok; ++t)
      ok = sparse_tree(dlaw, xi1, cond_cdf, cond_val, ra, &max_depth, &branches, 5000000);
    loc.discrete[functional_cell(roots, static_cast<double>(max_depth) / gamma, branches, !ok)]++;

    RngStream rb(opt.seed, static_cast<std::uint64_t>(2 * i + 1));
    RealTree f = gw_exp(pl.xi, pl.c, el.mu, caps, rb);
    loc.limit[functional_cell(n_root(f), gamma_height(f), count_branch_vertices(f),
                              f.node_capped)]++;
  });
  Hist discrete, limit;
  for (const auto& loc : locals) {
    merge_hist(discrete, loc.discrete);
    merge_hist(limit, loc.limit);
  }
  return chi2_report(name, n, opt.N, chi2_two_sample(discrete, limit), opt, tm);
}

TestReport check_kesten(const OffspringLaw& xi, int h, int spine_height, double a,
                        const VerifyOptions& opt, const std::string& name) {
  if (!(a + h + 1 <= spine_height))
    throw std::invalid_argument("check_kesten: need a + h + 1 <= spine_height");
  Timer tm;
  OffspringLaw exh = erase_discrete(xi, delta_law(1), h).xi;
  Caps caps1;
  caps1.max_height = static_cast<double>(spine_height);
  Caps caps2;
  caps2.max_height = static_cast<double>(spine_height - h);

  auto kesten_cell = [&](const RealTree& t) {
    LevelStats ls = level_stats(t, a);
    long long vtot = 0;
    for (const auto& kv : ls.V) vtot += kv.second;
    long long lbin = std::min<long long>(std::max<long long>(std::llround(ls.L - a), 0), 29) / 3;
    return lbin * 100 + std::min<long long>(ls.Z, 5) * 10 + std::min<long long>(vtot, 5);
  };

  struct Local {
    Hist erased, direct;
  };
  auto locals = fan_out<Local>(opt.N, opt.workers, [&](long long i, Local& loc) {
    RngStream ra(opt.seed, static_cast<std::uint64_t>(2 * i));
    KestenTree k1 = kesten_unit(xi, spine_height, caps1, ra);
    RealTree e = erase(k1.tree, static_cast<double>(h), EraseMode::Contract);
    loc.erased[kesten_cell(e)]++;

    RngStream rb(opt.seed, static_cast<std::uint64_t>(2 * i + 1));
    KestenTree k2 = kesten_unit(exh, spine_height - h, caps2, rb);
    loc.direct[kesten_cell(k2.tree)]++;
  });
  Hist erased, direct;
  for (const auto& loc : locals) {
    merge_hist(erased, loc.erased);
    merge_hist(direct, loc.direct);
  }
  return chi2_report(name, h, opt.N, chi2_two_sample(erased, direct), opt, tm);
}

namespace {

// (g(s) - s) / (1 - s) evaluated without cancellation at s = e^{-r/n}:
// 1 - sum_k p_k e_k(s) with e_k(s) = (1 - s^k)/(1 - s), using
// sum_{j=1}^{k-1} s^j = s (1 - s^{k-1}) / (1 - s) and expm1 for the powers.
// The truncated tail (k beyond the stored support) has e_k ~ 1/(1-s).
double pgf_gap_ratio(const OffspringLaw& xi, double r_over_n) {
  const double one_minus_s = -std::expm1(-r_over_n);
  const double s = 1.0 - one_minus_s;
  double sum = 0.0;
  for (std::size_t k = 2; k < xi.p.size(); ++k) {
    if (xi.p[k] == 0.0) continue;
    sum += xi.p[k] * (-std::expm1(-static_cast<double>(k - 1) * r_over_n));
  }
  return xi.mass(0) - s * sum / one_minus_s - xi.truncated_mass * s / one_minus_s;
}

}  // namespace

std::vector<TestReport> limit_checks(const Mechanism& mech, long long n, double tol,
                                     const std::string& name_prefix) {
  Timer tm;
  DomainFamily fam = mech.domain_family(n);
  const double gamma = fam.gamma;
  const double nn = static_cast<double>(n);
  std::vector<TestReport> out;
  auto push = [&](const std::string& name, double value, double target) {
    TestReport r;
    r.name = name;
    r.n = n;
    r.N = 0;
    r.statistic = value;
    r.p_or_err = std::abs(value - target);
    r.threshold = tol;
    r.pass = r.p_or_err <= tol;
    r.seconds = tm.elapsed();
    out.push_back(r);
  };

  const double mean_total = 1.0 - mech.psi_deriv(1, 0.0) / gamma;
  double partial_mean = 0.0;
  for (std::size_t k = 1; k < fam.xi.p.size(); ++k)
    partial_mean += static_cast<double>(k) * fam.xi.p[k];
  const double tail_mean = mean_total - partial_mean;

  for (double r : {0.5, 1.0, 2.0}) {
    const double r_over_n = r / nn;
    const double one_minus_s = -std::expm1(-r_over_n);
    const double s = 1.0 - one_minus_s;
    // (i)
    double vi = nn * gamma * one_minus_s * pgf_gap_ratio(fam.xi, r_over_n);
    push(name_prefix + "_i_r" + std::to_string(r), vi, mech.psi(r));
    // (ii): 1 - g'(s) = sum_k k p_k (1 - s^{k-1}) + (1 - mean), with the
    // truncated tail contributing its mean (s^{k-1} vanishes there)
    double acc = 0.0;
    for (std::size_t k = 2; k < fam.xi.p.size(); ++k) {
      if (fam.xi.p[k] == 0.0) continue;
      acc += static_cast<double>(k) * fam.xi.p[k] *
             (-std::expm1(-static_cast<double>(k - 1) * r_over_n));
    }
    double vii = gamma * (acc + tail_mean + (1.0 - mean_total));
    push(name_prefix + "_ii_r" + std::to_string(r), vii, mech.psi_deriv(1, r));
    (void)s;
  }
  // (iii)
  for (int m : {2, 3}) {
    for (double r : {0.5, 1.0, 2.0, 4.0}) {
      double sm = std::exp(-r / nn);
      double viii = gamma / std::pow(nn, m - 1) * pgf_deriv(fam.xi, m, sm);
      double target = (m % 2 == 0 ? 1.0 : -1.0) * mech.psi_deriv(m, r);
      push(name_prefix + "_iii_m" + std::to_string(m) + "_r" + std::to_string(r), viii, target);
    }
  }
  // (iv)
  double q = extinction(fam.xi);
  push(name_prefix + "_iv", -nn * std::log(q), mech.q0(0.0));
  return out;
}

std::vector<TestReport> run_suite(const std::string& suite, std::uint64_t seed, int workers) {
  auto want = [&](const std::string& s) { return suite == "all" || suite == s; };
  std::vector<TestReport> out;
  auto add = [&](const std::vector<TestReport>& rs) {
    out.insert(out.end(), rs.begin(), rs.end());
  };
  Mechanism quad = Mechanism::quadratic(1.0);
  Mechanism stab = Mechanism::stable(1.5);
  Mechanism mixed(1.0, 1.0, {});
  bool any = false;

  if (want("height")) {
    any = true;
    out.push_back(experiment_height(quad, 1000, 1.0, 1.0, 0.01, "height_quadratic"));
    // the stable error decays like log(n)/gamma_n; 20000 is the first scale
    // inside the 0.01 band
    out.push_back(experiment_height(stab, 20000, 1.0, 1.0, 0.01, "height_stable32"));
  }
  if (want("ascension")) {
    any = true;
    VerifyOptions o{seed, 10000, workers, 0.001};
    add(experiment_ascension(quad, 1000, -0.5, 1.0, 0.01, o, "ascension"));
  }
  if (want("prune")) {
    any = true;
    VerifyOptions o{seed, 100000, workers, 0.001 / 2};
    out.push_back(check_prune_marginal(binary_law(0.5), PruneTimeFamily::branch_points(),
                                       std::log(2.0), std::log(2.0), o, "prune_marginal_ln2"));
    out.push_back(check_prune_marginal(binary_law(0.5), PruneTimeFamily::branch_points(), 1.0,
                                       1.0, o, "prune_marginal_1"));
  }
  if (want("erased")) {
    any = true;
    VerifyOptions o{seed, 10000, workers, 0.001 / 4};
    add(check_erased_prune_times(binary_law(0.5), 1, o, "erased_prune_binary"));
    OffspringLaw ternary;
    ternary.p = {2.0 / 3.0, 0.0, 0.0, 1.0 / 3.0};
    add(check_erased_prune_times(ternary, 1, o, "erased_prune_ternary"));
  }
  if (want("counting")) {
    any = true;
    VerifyOptions o{seed, 10000, workers, 0.001 / 2};
    out.push_back(check_counting_law(quad, 1.0, 1.0, 0.5, 0.5, 1.0, CountingRegime::Branch,
                                     1.0, o, "counting_branch"));
    out.push_back(check_counting_law(quad, 1.0, 1.0, 0.5, 0.5, 1.0, CountingRegime::Edge, 1.0,
                                     o, "counting_edge"));
  }
  if (want("marginal")) {
    any = true;
    VerifyOptions o{seed, 10000, workers, 0.001 / 3};
    out.push_back(experiment_marginal_convergence(quad, 500, 1.0, 1.0, 1.0, 1.0,
                                                  PruneRegime::Branch, o, "marginal_branch"));
    out.push_back(experiment_marginal_convergence(quad, 500, 1.0, 1.0, 1.0, 1.0,
                                                  PruneRegime::Edge, o, "marginal_edge"));
    out.push_back(experiment_marginal_convergence(quad, 500, 1.0, 1.0, 1.0, 1.0,
                                                  PruneRegime::EqualRate, o, "marginal_equalrate"));
  }
  if (want("kesten")) {
    any = true;
    VerifyOptions o{seed, 10000, workers, 0.001};
    out.push_back(check_kesten(binary_law(0.5), 1, 12, 8.0, o, "kesten_commute"));
  }
  if (want("limits")) {
    any = true;
    add(limit_checks(quad, 10000, 1e-3, "limits_quadratic"));
    add(limit_checks(stab, 10000, 1e-3, "limits_stable32"));
    add(limit_checks(mixed, 10000, 1e-3, "limits_mixed"));
  }
  if (!any) throw std::invalid_argument("run_suite: unknown suite '" + suite + "'");
  for (TestReport& r : out) r.seed = seed;
  return out;
}

}  // namespace gwprune
