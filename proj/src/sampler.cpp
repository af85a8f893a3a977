#include "gwprune/sampler.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace gwprune {

namespace {

std::vector<double> build_cdf(const OffspringLaw& xi) {
  std::vector<double> cdf(xi.p.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < xi.p.size(); ++k) {
    acc += xi.p[k];
    cdf[k] = acc;
  }
  return cdf;
}

struct GrowJob {
  int node;
  double height;
};

// grows GW offspring below every seed node already in the tree
void grow(RealTree& t, std::vector<GrowJob> frontier, const std::vector<double>& cdf,
          bool unit_edges, double c, const Caps& caps, RngStream& rng) {
  std::deque<GrowJob> queue(frontier.begin(), frontier.end());
  while (!queue.empty()) {
    GrowJob job = queue.front();
    queue.pop_front();
    if (caps.max_height >= 0.0 && job.height >= caps.max_height) {
      t.height_capped = true;
      continue;
    }
    long long k = static_cast<long long>(rng.discrete_cdf(cdf));
    for (long long i = 0; i < k; ++i) {
      if (t.size() >= caps.max_nodes) {
        t.node_capped = true;
        return;
      }
      double len = unit_edges ? 1.0 : rng.exponential(c);
      int id = t.add(job.node, len);
      queue.push_back({id, job.height + len});
    }
  }
}

RealTree gw_forest(const OffspringLaw& xi, const OffspringLaw& mu, bool unit_edges, double c,
                   const Caps& caps, RngStream& rng) {
  if (!unit_edges && xi.mass(1) > 1e-12)
    throw std::invalid_argument("gw_exp: xi must have no single-child class");
  auto cdf = build_cdf(xi);
  auto mu_cdf = build_cdf(mu);
  RealTree t;
  long long ell = static_cast<long long>(rng.discrete_cdf(mu_cdf));
  std::vector<GrowJob> progenitors;
  for (long long i = 0; i < ell; ++i) {
    if (t.size() >= caps.max_nodes) {
      t.node_capped = true;
      break;
    }
    double len = unit_edges ? 1.0 : rng.exponential(c);
    int id = t.add(0, len);
    progenitors.push_back({id, len});
  }
  grow(t, std::move(progenitors), cdf, unit_edges, c, caps, rng);
  return t;
}

}  // namespace

long long sample_offspring(const OffspringLaw& xi, RngStream& rng) {
  auto cdf = build_cdf(xi);
  return static_cast<long long>(rng.discrete_cdf(cdf));
}

RealTree gw_unit(const OffspringLaw& xi, const OffspringLaw& mu, const Caps& caps,
                 RngStream& rng) {
  return gw_forest(xi, mu, true, 0.0, caps, rng);
}

RealTree gw_exp(const OffspringLaw& xi, double c, const OffspringLaw& mu, const Caps& caps,
                RngStream& rng) {
  if (!(c > 0.0)) throw std::invalid_argument("gw_exp: c must be > 0");
  return gw_forest(xi, mu, false, c, caps, rng);
}

KestenTree kesten_unit(const OffspringLaw& xi, int spine_height, const Caps& caps,
                       RngStream& rng) {
  if (spine_height < 1) throw std::invalid_argument("kesten_unit: spine_height must be >= 1");
  OffspringLaw mu_star = size_biased_root(xi);
  auto xi_cdf = build_cdf(xi);
  auto mu_cdf = build_cdf(mu_star);
  KestenTree out;
  RealTree& t = out.tree;
  out.spine.push_back(0);
  int prev = 0;
  for (int j = 1; j <= spine_height; ++j) {
    prev = t.add(prev, 1.0);
    out.spine.push_back(prev);
  }
  // graft an independent GW(xi; mu*)-forest at every positive spine height
  for (int j = 1; j <= spine_height; ++j) {
    int v = out.spine[j];
    long long ell = static_cast<long long>(rng.discrete_cdf(mu_cdf));
    std::vector<GrowJob> seeds;
    for (long long i = 0; i < ell; ++i) {
      if (t.size() >= caps.max_nodes) { t.node_capped = true; break; }
      int id = t.add(v, 1.0);
      seeds.push_back({id, static_cast<double>(j) + 1.0});
    }
    grow(t, std::move(seeds), xi_cdf, true, 0.0, caps, rng);
  }
  return out;
}

KestenTree kesten_exp(const OffspringLaw& xi, double c, double spine_height, const Caps& caps,
                      RngStream& rng) {
  if (!(c > 0.0) || !(spine_height > 0.0))
    throw std::invalid_argument("kesten_exp: need c > 0 and spine_height > 0");
  OffspringLaw mu_star = size_biased_root(xi);
  auto xi_cdf = build_cdf(xi);
  auto mu_cdf = build_cdf(mu_star);
  KestenTree out;
  RealTree& t = out.tree;
  out.spine.push_back(0);
  int prev = 0;
  double pos = 0.0;
  std::vector<std::pair<int, double>> grafts;  // (spine node, height)
  for (;;) {
    double step = rng.exponential(c);
    if (pos + step > spine_height) {
      prev = t.add(prev, spine_height - pos);
      out.spine.push_back(prev);
      break;
    }
    pos += step;
    prev = t.add(prev, step);
    out.spine.push_back(prev);
    grafts.emplace_back(prev, pos);
  }
  for (auto [v, height] : grafts) {
    long long ell = static_cast<long long>(rng.discrete_cdf(mu_cdf));
    std::vector<GrowJob> seeds;
    for (long long i = 0; i < ell; ++i) {
      if (t.size() >= caps.max_nodes) { t.node_capped = true; break; }
      double len = rng.exponential(c);
      int id = t.add(v, len);
      seeds.push_back({id, height + len});
    }
    grow(t, std::move(seeds), xi_cdf, false, c, caps, rng);
  }
  return out;
}

RealTree levy_erased(const Mechanism& mech, double h, double x, const Caps& caps,
                     RngStream& rng) {
  ErasedLevyLaw law = mech.erased_law(h, x);
  auto cdf = build_cdf(law.xi);
  RealTree t;
  long long ell = rng.poisson(law.mu_mean);  // exact Poisson root law
  std::vector<GrowJob> progenitors;
  for (long long i = 0; i < ell; ++i) {
    if (t.size() >= caps.max_nodes) { t.node_capped = true; break; }
    double len = rng.exponential(law.c);
    int id = t.add(0, len);
    progenitors.push_back({id, len});
  }
  grow(t, std::move(progenitors), cdf, false, law.c, caps, rng);
  return t;
}

std::vector<WidthMark> width_marks(const Mechanism& mech, double h, double x,
                                   const RealTree& tree, RngStream& rng,
                                   double stable_cutoff) {
  double eta = mech.eta(h);
  double expo = eta + mech.shift_offset();  // exponent tilting the base measure
  std::vector<WidthMark> out;
  // root width: rho = delta_x makes the size-biased tilt degenerate at x
  out.push_back({-1, 0.0, x, true});

  // skeleton atoms: discrete component from the atom family ...
  std::vector<double> atom_rate;
  double atom_total = 0.0;
  for (const auto& a : mech.atoms()) {
    double w = a.mass * a.r * std::exp(-a.r * expo);
    atom_rate.push_back(w);
    atom_total += w;
  }
  // ... plus a tabulated stable component above the width cutoff
  std::vector<double> st_grid, st_cum;
  double st_total = 0.0;
  if (mech.stable_tail()) {
    double a = mech.stable_tail()->index;
    double cpi = mech.stable_tail()->scale * a * (a - 1.0) / std::tgamma(2.0 - a);
    double xmax = std::max(stable_cutoff * 10.0, 60.0 / expo);
    const int ng = 512;
    double lo = std::log(stable_cutoff), hispan = std::log(xmax) - lo;
    st_grid.resize(ng);
    st_cum.resize(ng);
    double prev_x = stable_cutoff, prev_f = cpi * std::pow(prev_x, -a) * std::exp(-prev_x * expo);
    double acc = 0.0;
    st_grid[0] = prev_x;
    st_cum[0] = 0.0;
    for (int i = 1; i < ng; ++i) {
      double xx = std::exp(lo + hispan * i / (ng - 1));
      double f = cpi * std::pow(xx, -a) * std::exp(-xx * expo);
      acc += 0.5 * (prev_f + f) * (xx - prev_x);  // trapezoid on the density
      st_grid[i] = xx;
      st_cum[i] = acc;
      prev_x = xx;
      prev_f = f;
    }
    st_total = acc;
  }
  double rate = atom_total + st_total;
  auto heights = heights_of(tree);
  if (rate > 0.0) {
    for (std::size_t v = 1; v < tree.nodes.size(); ++v) {
      double len = tree.nodes[v].len;
      long long nmk = rng.poisson(len * rate);
      for (long long i = 0; i < nmk; ++i) {
        double off = rng.uniform() * len;
        double u = rng.uniform() * rate;
        double w;
        if (u < atom_total) {
          std::size_t j = 0;
          while (j + 1 < atom_rate.size() && u >= atom_rate[j]) u -= atom_rate[j++];
          w = mech.atoms()[j].r;
        } else {
          double target = (u - atom_total);
          std::size_t lo2 = 0, hi2 = st_cum.size() - 1;
          while (lo2 + 1 < hi2) {
            std::size_t mid = (lo2 + hi2) / 2;
            if (st_cum[mid] < target) lo2 = mid; else hi2 = mid;
          }
          double seg = st_cum[hi2] - st_cum[lo2];
          double wgt = seg > 0.0 ? (target - st_cum[lo2]) / seg : 0.5;
          w = st_grid[lo2] + wgt * (st_grid[hi2] - st_grid[lo2]);
        }
        out.push_back({static_cast<int>(v), off, w, false});
      }
    }
  }
  // branch-point widths: weight 2 beta at width 0 (m = 2 only), atom weights
  // mass r^m e^{-r expo}, stable component Gamma(m - a, expo)
  auto ch = children_of(tree);
  for (std::size_t v = 1; v < tree.nodes.size(); ++v) {
    int m = static_cast<int>(ch[v].size());
    if (m < 2) continue;
    double w_beta = m == 2 ? 2.0 * mech.beta() : 0.0;
    std::vector<double> wa;
    double w_atoms = 0.0;
    for (const auto& a : mech.atoms()) {
      double w = a.mass * std::pow(a.r, static_cast<double>(m)) * std::exp(-a.r * expo);
      wa.push_back(w);
      w_atoms += w;
    }
    double w_st = 0.0, st_shape = 0.0;
    if (mech.stable_tail()) {
      double a = mech.stable_tail()->index;
      double cpi = mech.stable_tail()->scale * a * (a - 1.0) / std::tgamma(2.0 - a);
      st_shape = static_cast<double>(m) - a;
      w_st = cpi * std::tgamma(st_shape) * std::pow(expo, -st_shape);
    }
    double total = w_beta + w_atoms + w_st;
    if (!(total > 0.0))
      throw std::runtime_error("width_marks: branch point of impossible multiplicity");
    double u = rng.uniform() * total;
    double w;
    if (u < w_beta) {
      w = 0.0;
    } else if (u < w_beta + w_atoms) {
      u -= w_beta;
      std::size_t j = 0;
      while (j + 1 < wa.size() && u >= wa[j]) u -= wa[j++];
      w = mech.atoms()[j].r;
    } else {
      w = rng.gamma(st_shape) / expo;
    }
    out.push_back({static_cast<int>(v), 0.0, w, true});
  }
  return out;
}

}  // namespace gwprune
