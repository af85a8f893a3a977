#include "gwprune/realtree.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gwprune {

std::vector<std::vector<int>> children_of(const RealTree& t) {
  std::vector<std::vector<int>> ch(t.nodes.size());
  for (std::size_t i = 1; i < t.nodes.size(); ++i) {
    int p = t.nodes[i].parent;
    if (p < 0 || p >= static_cast<int>(t.nodes.size()))
      throw std::runtime_error("RealTree: node " + std::to_string(i) + " has bad parent");
    ch[p].push_back(static_cast<int>(i));
  }
  return ch;
}

std::vector<double> heights_of(const RealTree& t) {
  std::vector<double> h(t.nodes.size(), 0.0);
  for (std::size_t i = 1; i < t.nodes.size(); ++i) {
    int p = t.nodes[i].parent;
    if (p >= static_cast<int>(i))
      throw std::runtime_error("RealTree: parents must precede children");
    h[i] = h[p] + t.nodes[i].len;
  }
  return h;
}

double gamma_height(const RealTree& t) {
  auto h = heights_of(t);
  return *std::max_element(h.begin(), h.end());
}

int n_root(const RealTree& t) {
  int c = 0;
  for (std::size_t i = 1; i < t.nodes.size(); ++i)
    if (t.nodes[i].parent == 0) ++c;
  return c;
}

FirstBranch first_branch(const RealTree& t) {
  auto ch = children_of(t);
  auto h = heights_of(t);
  FirstBranch out;
  out.n_root = static_cast<int>(ch[0].size());
  double best = std::numeric_limits<double>::infinity();
  int arg = -1;
  for (std::size_t v = 1; v < t.nodes.size(); ++v) {
    std::size_t deg = ch[v].size();
    if (deg == 1) continue;  // neither leaf nor branch point
    if (h[v] < best) {
      best = h[v];
      arg = static_cast<int>(v);
    }
  }
  if (arg < 0) {  // bare root
    out.D = 0.0;
    out.kk = 0;
    return out;
  }
  out.D = best;
  out.kk = out.n_root == 1 ? static_cast<int>(ch[arg].size()) : 0;
  return out;
}

RealTree blw(const RealTree& t, double a) {
  auto h = heights_of(t);
  RealTree out;
  out.height_capped = t.height_capped;
  out.node_capped = t.node_capped;
  std::vector<int> map(t.nodes.size(), -1);
  map[0] = 0;
  for (std::size_t v = 1; v < t.nodes.size(); ++v) {
    int p = t.nodes[v].parent;
    if (map[p] < 0) continue;  // parent already above the level
    if (h[v] <= a) {
      map[v] = out.add(map[p], t.nodes[v].len);
    } else if (h[p] < a) {
      out.add(map[p], a - h[p]);  // truncated edge, new leaf at the level
    }
  }
  return out;
}

RealTree abv(const RealTree& t, double a) {
  auto h = heights_of(t);
  RealTree out;
  out.height_capped = t.height_capped;
  out.node_capped = t.node_capped;
  std::vector<int> map(t.nodes.size(), -1);
  for (std::size_t v = 1; v < t.nodes.size(); ++v) {
    int p = t.nodes[v].parent;
    if (h[v] <= a) continue;
    if (h[p] <= a) {
      map[v] = out.add(0, h[v] - a);  // component entry point
    } else if (map[p] >= 0) {
      map[v] = out.add(map[p], t.nodes[v].len);
    }
  }
  return out;
}

RealTree contract(const RealTree& t) {
  auto ch = children_of(t);
  RealTree out;
  out.height_capped = t.height_capped;
  out.node_capped = t.node_capped;
  // stack of (original node, new parent, accumulated length)
  struct Item { int v; int np; double len; };
  std::vector<Item> stack;
  for (int c : ch[0]) stack.push_back({c, 0, t.nodes[c].len});
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    int v = it.v;
    double len = it.len;
    while (ch[v].size() == 1) {
      int c = ch[v][0];
      len += t.nodes[c].len;
      v = c;
    }
    int nv = out.add(it.np, len);
    for (int c : ch[v]) stack.push_back({c, nv, t.nodes[c].len});
  }
  return out;
}

RealTree erase(const RealTree& t, double h, EraseMode mode, std::vector<int>* origin) {
  if (h < 0.0) throw std::invalid_argument("erase: h must be >= 0");
  auto ch = children_of(t);
  // up[v] = height of the subtree above v
  std::vector<double> up(t.nodes.size(), 0.0);
  for (std::size_t v = t.nodes.size(); v-- > 1;) {
    double reach = t.nodes[v].len + up[v];
    int p = t.nodes[v].parent;
    if (reach > up[p]) up[p] = reach;
  }
  RealTree out;
  out.height_capped = t.height_capped;
  out.node_capped = t.node_capped;
  std::vector<int> org;
  org.push_back(0);
  std::vector<int> map(t.nodes.size(), -1);
  map[0] = 0;
  for (std::size_t v = 1; v < t.nodes.size(); ++v) {
    int p = t.nodes[v].parent;
    if (map[p] < 0) continue;
    if (up[v] >= h) {
      map[v] = out.add(map[p], t.nodes[v].len);
      org.push_back(static_cast<int>(v));
    } else {
      double stub = t.nodes[v].len + up[v] - h;
      if (stub > 0.0) {
        out.add(map[p], stub);
        org.push_back(-1);
      }
    }
  }
  if (mode == EraseMode::Contract) {
    out = contract(out);
    if (origin) origin->clear();
  } else if (origin) {
    *origin = std::move(org);
  }
  return out;
}

RealTree concat(const std::vector<RealTree>& trees) {
  RealTree out;
  for (const auto& t : trees) {
    out.height_capped = out.height_capped || t.height_capped;
    out.node_capped = out.node_capped || t.node_capped;
    std::vector<int> map(t.nodes.size(), -1);
    map[0] = 0;
    for (std::size_t v = 1; v < t.nodes.size(); ++v) {
      int p = t.nodes[v].parent;
      map[v] = out.add(map[p], t.nodes[v].len);
    }
  }
  return out;
}

LevelStats level_stats(const RealTree& t, double a) {
  auto ch = children_of(t);
  auto h = heights_of(t);
  LevelStats out;
  for (std::size_t v = 1; v < t.nodes.size(); ++v) {
    int p = t.nodes[v].parent;
    double lo = h[p], hi = h[v];
    double overlap = std::min(hi, a) - lo;
    if (overlap > 0.0) out.L += overlap;
    if (lo <= a && a < hi) ++out.Z;  // right-continuous level count
    if (ch[v].size() >= 2 && h[v] <= a) ++out.V[static_cast<int>(ch[v].size())];
  }
  return out;
}

std::string canonical_key(const RealTree& t) {
  auto ch = children_of(t);
  std::vector<std::string> key(t.nodes.size());
  // children precede parents in reverse index order
  for (std::size_t v = t.nodes.size(); v-- > 0;) {
    std::vector<std::string> parts;
    parts.reserve(ch[v].size());
    for (int c : ch[v]) parts.push_back(key[c]);
    std::sort(parts.begin(), parts.end());
    std::ostringstream os;
    os.precision(17);
    os << "(" << t.nodes[v].len << ":";
    for (const auto& s : parts) os << s;
    os << ")";
    key[v] = os.str();
  }
  return key[0];
}

void write_tree(std::ostream& os, const RealTree& t) {
  std::ostringstream buf;
  buf.precision(17);
  buf << "TREE n=" << t.nodes.size() << " caps=";
  if (!t.height_capped && !t.node_capped) buf << "-";
  else {
    if (t.height_capped) buf << "h";
    if (t.node_capped) buf << "n";
  }
  buf << "\n";
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    buf << i << " ";
    if (t.nodes[i].parent < 0) buf << "-";
    else buf << t.nodes[i].parent;
    buf << " " << t.nodes[i].len << "\n";
  }
  os << buf.str();
}

RealTree read_tree(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind("TREE ", 0) != 0)
    throw std::runtime_error("read_tree: missing TREE header");
  std::size_t n = 0;
  bool hcap = false, ncap = false;
  {
    std::istringstream hs(header.substr(5));
    std::string tok;
    while (hs >> tok) {
      if (tok.rfind("n=", 0) == 0) n = std::stoull(tok.substr(2));
      else if (tok.rfind("caps=", 0) == 0) {
        std::string c = tok.substr(5);
        hcap = c.find('h') != std::string::npos;
        ncap = c.find('n') != std::string::npos;
      }
    }
  }
  if (n == 0) throw std::runtime_error("read_tree: bad node count");
  RealTree t;
  t.nodes.assign(n, {});
  t.height_capped = hcap;
  t.node_capped = ncap;
  std::string line;
  std::size_t seen = 0;
  while (seen < n && std::getline(is, line)) {
    if (line.empty() || line.rfind("MARK", 0) == 0) continue;
    std::istringstream ls(line);
    std::size_t id;
    std::string parent;
    double len;
    if (!(ls >> id >> parent >> len)) throw std::runtime_error("read_tree: bad line: " + line);
    if (id >= n) throw std::runtime_error("read_tree: node id out of range");
    if (parent == "-") {
      if (id != 0) throw std::runtime_error("read_tree: only node 0 may be the root");
      t.nodes[id] = {-1, 0.0};
    } else {
      int p = std::stoi(parent);
      if (p < 0 || static_cast<std::size_t>(p) >= id)
        throw std::runtime_error("read_tree: parents must precede children (line: " + line + ")");
      t.nodes[id] = {p, len};
    }
    ++seen;
  }
  if (seen != n) throw std::runtime_error("read_tree: truncated node list");
  return t;
}

}  // namespace gwprune
