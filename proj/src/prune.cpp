#include "gwprune/prune.hpp"

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
constexpr double kInf = std::numeric_limits<double>::infinity();

void sort_marks(std::vector<Mark>& ms) {
  std::sort(ms.begin(), ms.end(), [](const Mark& a, const Mark& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.edge != b.edge) return a.edge < b.edge;
    return a.offset < b.offset;
  });
}

// incremental cut state used by jump_times / count_M
struct CutState {
  const RealTree& t;
  std::vector<char> edge_removed;
  std::vector<double> stub_off;  // lowest skeleton cut per edge
  std::vector<char> branch_fired;
  std::vector<std::vector<int>> ch;

  explicit CutState(const RealTree& tree)
      : t(tree),
        edge_removed(tree.nodes.size(), 0),
        stub_off(tree.nodes.size(), kInf),
        branch_fired(tree.nodes.size(), 0),
        ch(children_of(tree)) {}

  bool node_connected(int v) const {
    while (v != 0) {
      if (edge_removed[v] || stub_off[v] < kInf) return false;
      int p = t.nodes[v].parent;
      if (branch_fired[p]) return false;
      v = p;
    }
    return true;
  }

  // returns true when applying the mark changes the tree, and applies it
  bool fire(const Mark& m) {
    switch (m.kind) {
      case MarkKind::Edge: {
        if (edge_removed[m.edge] || !node_connected(t.nodes[m.edge].parent)) return false;
        edge_removed[m.edge] = 1;
        return true;
      }
      case MarkKind::Skeleton: {
        if (edge_removed[m.edge] || m.offset >= stub_off[m.edge]) return false;
        if (!node_connected(t.nodes[m.edge].parent)) return false;
        stub_off[m.edge] = m.offset;
        return true;
      }
      case MarkKind::Branch: {
        if (!node_connected(m.edge)) return false;
        bool any_child = false;
        for (int c : ch[m.edge])
          if (!edge_removed[c]) { any_child = true; break; }
        if (!any_child) return false;
        branch_fired[m.edge] = 1;
        return true;
      }
    }
    return false;
  }
};

}  // namespace

MarkSet mark_edges(const RealTree& t, RngStream& rng) {
  MarkSet m;
  for (int v = 1; v < t.size(); ++v)
    m.marks.push_back({v, 0.0, rng.exponential(1.0), MarkKind::Edge});
  return m;
}

MarkSet mark_branchpoints(const RealTree& t, RngStream& rng) {
  auto ch = children_of(t);
  MarkSet m;
  for (int v = 1; v < t.size(); ++v) {
    int deg = static_cast<int>(ch[v].size());
    if (deg >= 2)
      m.marks.push_back({v, t.nodes[v].len, rng.exponential(static_cast<double>(deg - 1)),
                         MarkKind::Branch});
  }
  return m;
}

MarkSet mark_H(const RealTree& t, const PruneTimeFamily& H, RngStream& rng) {
  auto ch = children_of(t);
  MarkSet m;
  for (int v = 1; v < t.size(); ++v) {
    int deg = static_cast<int>(ch[v].size());
    if (deg < 1) continue;
    double time = H.at(deg).sample(rng);
    if (std::isfinite(time))
      m.marks.push_back({v, t.nodes[v].len, time, MarkKind::Branch});
  }
  return m;
}

MarkSet mark_Hbar(const RealTree& t, const PruneLawBundle& bundle, RngStream& rng) {
  auto ch = children_of(t);
  MarkSet m;
  double total = bundle.hbar1(bundle.theta_max);
  for (int v = 1; v < t.size(); ++v) {
    double len = t.nodes[v].len;
    if (total > 0.0) {
      long long k = rng.poisson(len * total);
      for (long long i = 0; i < k; ++i) {
        double off = rng.uniform() * len;
        double target = rng.uniform() * total;
        double time = num::bisect(
            [&](double th) { return bundle.hbar1(th) - target; }, 0.0, bundle.theta_max, 1e-12);
        m.marks.push_back({v, off, time, MarkKind::Skeleton});
      }
    }
    int deg = static_cast<int>(ch[v].size());
    if (deg >= 2) {
      PruneTime law = PruneTime::tabulated(
          [&bundle, deg](double th) { return bundle.hm_survival(deg, th); }, bundle.theta_max);
      double time = law.sample(rng);
      if (std::isfinite(time))
        m.marks.push_back({v, len, time, MarkKind::Branch});
    }
  }
  return m;
}

RealTree cut(const RealTree& t, const MarkSet& marks, double theta) {
  std::vector<char> edge_cut(t.nodes.size(), 0);
  std::vector<double> stub(t.nodes.size(), kInf);
  std::vector<char> branch(t.nodes.size(), 0);
  for (const auto& m : marks.marks) {
    if (m.time > theta) continue;
    switch (m.kind) {
      case MarkKind::Edge: edge_cut[m.edge] = 1; break;
      case MarkKind::Skeleton: stub[m.edge] = std::min(stub[m.edge], m.offset); break;
      case MarkKind::Branch: branch[m.edge] = 1; break;
    }
  }
  RealTree out;
  out.height_capped = t.height_capped;
  out.node_capped = t.node_capped;
  std::vector<int> map(t.nodes.size(), -1);
  map[0] = 0;
  std::vector<char> blocked(t.nodes.size(), 0);  // children not to be copied
  for (std::size_t v = 1; v < t.nodes.size(); ++v) {
    int p = t.nodes[v].parent;
    if (map[p] < 0 || blocked[p]) continue;
    if (edge_cut[v]) continue;
    if (stub[v] < kInf) {
      if (stub[v] > 0.0) out.add(map[p], stub[v]);
      continue;
    }
    map[v] = out.add(map[p], t.nodes[v].len);
    if (branch[v]) blocked[v] = 1;
  }
  return out;
}

std::vector<double> jump_times(const RealTree& t, const MarkSet& marks, double horizon) {
  std::vector<Mark> ms = marks.marks;
  sort_marks(ms);
  CutState st(t);
  std::vector<double> out;
  for (const auto& m : ms) {
    if (m.time > horizon) break;
    if (st.fire(m)) out.push_back(m.time);
  }
  return out;
}

namespace {
bool mark_below(const RealTree& t, const std::vector<double>& h, const Mark& m, double a) {
  switch (m.kind) {
    case MarkKind::Edge: return h[m.edge] <= a;  // whole edge below the level
    case MarkKind::Skeleton: return h[t.nodes[m.edge].parent] + m.offset <= a;
    case MarkKind::Branch: return h[m.edge] <= a;
  }
  return false;
}
}  // namespace

long long count_N(const RealTree& t, const MarkSet& marks, double a, double theta) {
  auto h = heights_of(t);
  long long n = 0;
  for (const auto& m : marks.marks)
    if (m.time <= theta && mark_below(t, h, m, a)) ++n;
  return n;
}

long long count_M(const RealTree& t, const MarkSet& marks, double a, double theta) {
  auto h = heights_of(t);
  std::vector<Mark> ms = marks.marks;
  sort_marks(ms);
  CutState st(t);
  long long n = 0;
  for (const auto& m : ms) {
    if (m.time > theta) break;
    bool below = mark_below(t, h, m, a);
    if (st.fire(m) && below) ++n;
  }
  return n;
}

RealTree ScaledProcess::at(double theta) const {
  RealTree c = cut(*tree, *marks, theta * time_scale);
  for (auto& n : c.nodes) n.len /= space_scale;
  return c;
}

void write_marks(std::ostream& os, const MarkSet& m) {
  std::ostringstream buf;
  buf.precision(17);
  for (const auto& mk : m.marks) {
    const char* kind = mk.kind == MarkKind::Edge ? "edge"
                       : mk.kind == MarkKind::Skeleton ? "skeleton" : "branch";
    buf << "MARK " << mk.edge << " " << mk.offset << " " << mk.time << " " << kind << "\n";
  }
  os << buf.str();
}

MarkSet read_marks(std::istream& is) {
  MarkSet out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("MARK ", 0) != 0) continue;
    std::istringstream ls(line.substr(5));
    Mark m;
    std::string kind;
    if (!(ls >> m.edge >> m.offset >> m.time >> kind))
      throw std::runtime_error("read_marks: bad line: " + line);
    if (kind == "edge") m.kind = MarkKind::Edge;
    else if (kind == "skeleton") m.kind = MarkKind::Skeleton;
    else if (kind == "branch") m.kind = MarkKind::Branch;
    else throw std::runtime_error("read_marks: unknown kind: " + kind);
    out.marks.push_back(m);
  }
  return out;
}

}  // namespace gwprune
