#include "gwprune/treemetric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gwprune {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// subdivide every edge at heights that are multiples of mesh; the returned
// tree's node set is the candidate set
RealTree subdivide(const RealTree& t, double mesh) {
  if (!(mesh > 0.0)) return t;
  auto h = heights_of(t);
  RealTree out;
  std::vector<int> map(t.nodes.size(), -1);
  map[0] = 0;
  for (std::size_t v = 1; v < t.nodes.size(); ++v) {
    int p = t.nodes[v].parent;
    double lo = h[p], hi = h[v];
    int attach = map[p];
    double prev = lo;
    // first multiple strictly above lo
    double m = std::floor(lo / mesh + 1e-12) * mesh;
    while (m <= lo + mesh * 1e-12) m += mesh;
    for (; m < hi - mesh * 1e-12; m += mesh) {
      attach = out.add(attach, m - prev);
      prev = m;
    }
    map[v] = out.add(attach, hi - prev);
  }
  return out;
}

struct Candidates {
  std::vector<double> h;                 // heights
  std::vector<std::vector<double>> d;    // pairwise distances
  int n = 0;
};

Candidates make_candidates(const RealTree& t) {
  Candidates c;
  c.n = t.size();
  c.h = heights_of(t);
  std::vector<int> depth(t.nodes.size(), 0);
  for (std::size_t v = 1; v < t.nodes.size(); ++v)
    depth[v] = depth[t.nodes[v].parent] + 1;
  c.d.assign(c.n, std::vector<double>(c.n, 0.0));
  for (int i = 0; i < c.n; ++i)
    for (int j = i + 1; j < c.n; ++j) {
      int a = i, b = j;
      while (depth[a] > depth[b]) a = t.nodes[a].parent;
      while (depth[b] > depth[a]) b = t.nodes[b].parent;
      while (a != b) {
        a = t.nodes[a].parent;
        b = t.nodes[b].parent;
      }
      double dist = c.h[i] + c.h[j] - 2.0 * c.h[a];
      c.d[i][j] = c.d[j][i] = dist;
    }
  return c;
}

struct Search {
  const Candidates& A;
  const Candidates& B;
  long long budget;
  long long used = 0;
  double best = kInf;  // best (full) distortion found
  std::vector<int> order_a;      // assignment order over A's candidates
  std::vector<int> fa;           // fa[a-candidate] = partner in B
  std::vector<int> uncovered;    // B candidates to cover in phase 2
  std::vector<int> gb;           // gb[k] partner in A of uncovered[k]

  Search(const Candidates& a, const Candidates& b, long long budget_)
      : A(a), B(b), budget(budget_), fa(a.n, -1) {
    order_a.resize(A.n);
    std::iota(order_a.begin(), order_a.end(), 0);
    std::sort(order_a.begin(), order_a.end(), [&](int x, int y) {
      if (x == 0) return true;
      if (y == 0) return false;
      return A.h[x] > A.h[y];
    });
  }

  // distortion contribution of pairing (x in A, y in B) against already
  // fixed pairs; returns max mismatch
  double pair_cost_f(int x, int y, int upto) const {
    double worst = 0.0;
    for (int k = 0; k < upto; ++k) {
      int x2 = order_a[k];
      double m = std::fabs(A.d[x][x2] - B.d[y][fa[x2]]);
      if (m > worst) worst = m;
    }
    return worst;
  }

  void phase2(std::size_t k, double cur) {
    if (cur >= best) return;
    if (++used > budget) return;
    if (k == uncovered.size()) {
      best = cur;
      return;
    }
    int y = uncovered[k];
    for (int x = 0; x < A.n; ++x) {
      double worst = cur;
      // against f pairs
      for (int i = 0; i < A.n && worst < best; ++i) {
        double m = std::fabs(A.d[x][i] - B.d[y][fa[i]]);
        if (m > worst) worst = m;
      }
      // against earlier g pairs
      for (std::size_t j = 0; j < k && worst < best; ++j) {
        double m = std::fabs(A.d[x][gb[j]] - B.d[y][uncovered[j]]);
        if (m > worst) worst = m;
      }
      if (worst < best) {
        gb[k] = x;
        phase2(k + 1, worst);
      }
    }
  }

  void phase1(int idx, double cur) {
    if (cur >= best) return;
    if (++used > budget) return;
    if (idx == A.n) {
      // cover the B candidates missed by f
      std::vector<char> covered(B.n, 0);
      for (int i = 0; i < A.n; ++i) covered[fa[i]] = 1;
      uncovered.clear();
      for (int y = 0; y < B.n; ++y)
        if (!covered[y]) uncovered.push_back(y);
      std::sort(uncovered.begin(), uncovered.end(),
                [&](int u, int v) { return B.h[u] > B.h[v]; });
      gb.assign(uncovered.size(), -1);
      if (uncovered.empty()) {
        best = cur;
      } else {
        phase2(0, cur);
      }
      return;
    }
    int x = order_a[idx];
    if (x == 0) {  // roots are paired
      double c = pair_cost_f(0, 0, idx);
      double nxt = std::max(cur, c);
      fa[0] = 0;
      phase1(idx + 1, nxt);
      return;
    }
    // try partners in order of height affinity for better pruning
    std::vector<int> cands(B.n);
    std::iota(cands.begin(), cands.end(), 0);
    std::sort(cands.begin(), cands.end(), [&](int u, int v) {
      return std::fabs(B.h[u] - A.h[x]) < std::fabs(B.h[v] - A.h[x]);
    });
    for (int y : cands) {
      double c = pair_cost_f(x, y, idx);
      double nxt = std::max(cur, c);
      if (nxt >= best) continue;
      fa[x] = y;
      phase1(idx + 1, nxt);
      if (used > budget) return;
    }
  }
};

// greedy correspondence (height matching) evaluated exactly, for the initial
// incumbent and for the bounds-only fallback
double greedy_distortion(const Candidates& A, const Candidates& B) {
  std::vector<std::pair<int, int>> pairs;
  pairs.emplace_back(0, 0);
  auto nearest = [](const Candidates& from, int x, const Candidates& to) {
    int bestj = 0;
    double bestd = kInf;
    for (int j = 0; j < to.n; ++j) {
      double m = std::fabs(to.h[j] - from.h[x]);
      if (m < bestd) { bestd = m; bestj = j; }
    }
    return bestj;
  };
  for (int x = 1; x < A.n; ++x) pairs.emplace_back(x, nearest(A, x, B));
  for (int y = 1; y < B.n; ++y) pairs.emplace_back(nearest(B, y, A), y);
  double worst = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j) {
      double m = std::fabs(A.d[pairs[i].first][pairs[j].first] -
                           B.d[pairs[i].second][pairs[j].second]);
      if (m > worst) worst = m;
    }
  return worst;
}

}  // namespace

MetricResult half_distortion(const RealTree& a, const RealTree& b,
                             const HalfDistortionOptions& opts) {
  RealTree sa = subdivide(a, opts.mesh);
  RealTree sb = subdivide(b, opts.mesh);
  Candidates A = make_candidates(sa);
  Candidates B = make_candidates(sb);
  MetricResult out;
  double ga = *std::max_element(A.h.begin(), A.h.end());
  double gb = *std::max_element(B.h.begin(), B.h.end());
  out.lower = 0.5 * std::fabs(ga - gb);
  double greedy = greedy_distortion(A, B);
  if (A.n > opts.candidate_budget || B.n > opts.candidate_budget) {
    out.exact = false;
    out.upper = 0.5 * greedy;
    out.value = out.upper;
    return out;
  }
  Search s(A, B, opts.node_budget);
  s.best = greedy + 1e-12;
  s.phase1(0, 0.0);
  out.nodes_used = s.used;
  if (s.used > opts.node_budget) {
    out.exact = false;
    out.upper = 0.5 * std::min(greedy, s.best);
    out.value = out.upper;
    return out;
  }
  out.exact = true;
  out.value = 0.5 * s.best;
  out.upper = out.value;
  out.lower = out.value;
  return out;
}

namespace {

double state_diff(const RealTree& x, const RealTree& y) {
  HalfDistortionOptions o;
  o.mesh = 0.5;
  MetricResult r = half_distortion(x, y, o);
  return std::min(1.0, r.upper);
}

struct AlignResult {
  double cost = kInf;
};

// evaluate one monotone matching given anchor pairs (times in both paths)
double eval_alignment(const TreePath& a, const TreePath& b, double horizon,
                      const std::vector<std::pair<double, double>>& anchors,
                      std::vector<std::vector<double>>& diff_cache,
                      const std::vector<std::size_t>& ia,
                      const std::vector<std::size_t>& ib) {
  // slope cost
  double gamma = 0.0;
  for (std::size_t k = 0; k + 1 < anchors.size(); ++k) {
    double du = anchors[k + 1].first - anchors[k].first;
    double dw = anchors[k + 1].second - anchors[k].second;
    if (!(du > 0.0) || !(dw > 0.0)) return kInf;
    gamma = std::max(gamma, std::fabs(std::log(dw / du)));
  }
  // value cost: integrate e^{-u} * running max of state diffs under the
  // piecewise-linear time change through the anchors
  auto lambda_of = [&](double u) {
    std::size_t k = 0;
    while (k + 1 < anchors.size() && anchors[k + 1].first <= u) ++k;
    if (k + 1 >= anchors.size()) return u;
    double du = anchors[k + 1].first - anchors[k].first;
    double dw = anchors[k + 1].second - anchors[k].second;
    return anchors[k].second + (u - anchors[k].first) * dw / du;
  };
  // event times in path-a time: a's own jumps plus preimages of b's jumps
  std::vector<double> events{0.0};
  for (const auto& [t, s] : a)
    if (t > 0.0 && t < horizon) events.push_back(t);
  for (const auto& [t, s] : b) {
    if (t <= 0.0 || t >= horizon) continue;
    // invert lambda at t
    std::size_t k = 0;
    while (k + 1 < anchors.size() && anchors[k + 1].second <= t) ++k;
    double du = anchors[k + 1].first - anchors[k].first;
    double dw = anchors[k + 1].second - anchors[k].second;
    events.push_back(anchors[k].first + (t - anchors[k].second) * du / dw);
  }
  events.push_back(horizon);
  std::sort(events.begin(), events.end());
  auto state_at = [](const TreePath& p, double t) {
    std::size_t i = 0;
    while (i + 1 < p.size() && p[i + 1].first <= t + 1e-12) ++i;
    return i;
  };
  double running = 0.0, integral = 0.0;
  for (std::size_t e = 0; e + 1 < events.size(); ++e) {
    double u0 = events[e], u1 = events[e + 1];
    if (u1 - u0 <= 1e-15) continue;
    double mid = 0.5 * (u0 + u1);
    std::size_t si = state_at(a, mid);
    std::size_t sj = state_at(b, lambda_of(mid));
    double& dc = diff_cache[si][sj];
    if (dc < 0.0) dc = state_diff(a[si].second, b[sj].second);
    running = std::max(running, dc);
    integral += running * (std::exp(-u0) - std::exp(-u1));
  }
  (void)ia; (void)ib;
  return std::max(gamma, integral);
}

void enumerate_matchings(const std::vector<double>& ju, const std::vector<double>& jw,
                         std::size_t i, std::size_t j,
                         std::vector<std::pair<double, double>>& anchors, double horizon,
                         const TreePath& a, const TreePath& b,
                         std::vector<std::vector<double>>& diff_cache, double& best) {
  if (i == ju.size() || j == jw.size()) {
    anchors.push_back({horizon, horizon});
    std::vector<std::size_t> dummy;
    double c = eval_alignment(a, b, horizon, anchors, diff_cache, dummy, dummy);
    anchors.pop_back();
    best = std::min(best, c);
    return;
  }
  // skip a-jump i
  enumerate_matchings(ju, jw, i + 1, j, anchors, horizon, a, b, diff_cache, best);
  // match i with some j' >= j
  for (std::size_t j2 = j; j2 < jw.size(); ++j2) {
    anchors.push_back({ju[i], jw[j2]});
    enumerate_matchings(ju, jw, i + 1, j2 + 1, anchors, horizon, a, b, diff_cache, best);
    anchors.pop_back();
  }
}

}  // namespace

double skorohod_upper(const TreePath& a, const TreePath& b, double horizon) {
  if (a.empty() || b.empty()) throw std::invalid_argument("skorohod_upper: empty path");
  if (a.front().first != 0.0 || b.front().first != 0.0)
    throw std::invalid_argument("skorohod_upper: paths must start at time 0");
  std::vector<double> ju, jw;
  for (std::size_t i = 1; i < a.size(); ++i)
    if (a[i].first < horizon) ju.push_back(a[i].first);
  for (std::size_t j = 1; j < b.size(); ++j)
    if (b[j].first < horizon) jw.push_back(b[j].first);
  std::vector<std::vector<double>> diff_cache(a.size(), std::vector<double>(b.size(), -1.0));
  std::vector<std::pair<double, double>> anchors{{0.0, 0.0}};
  double best = kInf;
  if (ju.size() + jw.size() <= 12) {
    enumerate_matchings(ju, jw, 0, 0, anchors, horizon, a, b, diff_cache, best);
  } else {
    // large paths: identity alignment only
    anchors.push_back({horizon, horizon});
    std::vector<std::size_t> dummy;
    best = eval_alignment(a, b, horizon, anchors, diff_cache, dummy, dummy);
  }
  return best;
}

std::vector<double> summary(const RealTree& t, const std::vector<double>& grid) {
  std::vector<double> out;
  out.push_back(gamma_height(t));
  out.push_back(static_cast<double>(n_root(t)));
  FirstBranch fb = first_branch(t);
  out.push_back(fb.D);
  out.push_back(static_cast<double>(fb.kk));
  for (double a : grid) {
    LevelStats ls = level_stats(t, a);
    long long vtot = 0;
    for (auto& [deg, cnt] : ls.V) vtot += cnt;
    out.push_back(ls.L);
    out.push_back(static_cast<double>(ls.Z));
    out.push_back(static_cast<double>(vtot));
  }
  return out;
}

}  // namespace gwprune
