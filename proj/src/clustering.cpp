#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <unordered_set>

#include "epinet/netstat.hpp"
#include "epinet/random.hpp"

namespace epinet {

namespace {

/// Clusters as nodes: a[c] is the stub fraction d_c / 2m, link[c][d] the mixing entry m_cd
/// (half the between-edge fraction), self[c] the within fraction m_cc.
struct ClusterGraph {
  std::vector<double> a, self;
  std::vector<std::map<int, double>> link;
  std::vector<char> alive;
  std::vector<int> rep;  // union-find parent over cluster ids

  ClusterGraph(const Graph& g, const std::vector<int>& label, int J) : a(J, 0), self(J, 0), link(J), alive(J, 1), rep(J) {
    std::iota(rep.begin(), rep.end(), 0);
    const double w = 1.0 / static_cast<double>(g.edge_count());
    for (auto [u, v] : g.edges()) {
      int x = label[u], y = label[v];
      a[x] += w / 2;
      a[y] += w / 2;
      if (x == y) {
        self[x] += w;
      } else {
        link[x][y] += w / 2;
        link[y][x] += w / 2;
      }
    }
  }
  double gain(int x, int y) const {
    auto it = link[x].find(y);
    double m = it == link[x].end() ? 0.0 : it->second;
    return 2 * (m - a[x] * a[y]);
  }
  int find(int x) {
    while (rep[x] != x) x = rep[x] = rep[rep[x]];
    return x;
  }
  /// Merges y into x; returns the survivor.
  int merge(int x, int y) {
    if (link[x].size() < link[y].size() || (link[x].size() == link[y].size() && y < x)) std::swap(x, y);
    double mxy = link[x].count(y) ? link[x][y] : 0.0;
    self[x] += self[y] + 2 * mxy;
    a[x] += a[y];
    link[x].erase(y);
    for (auto [z, m] : link[y]) {
      if (z == x) continue;
      link[x][z] += m;
      link[z].erase(y);
      link[z][x] += m;
    }
    link[y].clear();
    alive[y] = 0;
    rep[y] = x;
    return x;
  }
  double Q() const {
    double q = 0;
    for (std::size_t c = 0; c < a.size(); ++c)
      if (alive[c]) q += self[c] - a[c] * a[c];
    return q;
  }
};

struct Candidate {
  double dq;
  int x, y;  // x < y
  bool operator<(const Candidate& o) const {  // max-heap on dq, then lowest pair
    if (dq != o.dq) return dq < o.dq;
    if (x != o.x) return x > o.x;
    return y > o.y;
  }
};

/// Greedy merges along links while the best gain is positive.
void agglomerate(ClusterGraph& cg) {
  std::priority_queue<Candidate> heap;
  const int J = static_cast<int>(cg.a.size());
  for (int x = 0; x < J; ++x)
    if (cg.alive[x])
      for (auto [y, m] : cg.link[x])
        if (x < y) heap.push({cg.gain(x, y), x, y});
  while (!heap.empty()) {
    Candidate c = heap.top();
    heap.pop();
    if (!cg.alive[c.x] || !cg.alive[c.y] || !cg.link[c.x].count(c.y)) continue;
    if (cg.gain(c.x, c.y) != c.dq) continue;  // stale
    if (c.dq <= 1e-14) break;
    int s = cg.merge(c.x, c.y);
    for (auto [z, m] : cg.link[s]) heap.push({cg.gain(std::min(s, z), std::max(s, z)), std::min(s, z), std::max(s, z)});
  }
}

std::vector<int> labels_of(ClusterGraph& cg, const std::vector<int>& base) {
  std::vector<int> out(base.size());
  for (std::size_t u = 0; u < base.size(); ++u) out[u] = cg.find(base[u]);
  return out;
}

/// Single-vertex moves to a neighbouring cluster while any move raises Q.
bool refine_moves(const Graph& g, const Adjacency& adj, std::vector<int>& label, int J, Rng& rng) {
  const double m = static_cast<double>(g.edge_count());
  std::vector<double> dsum(J, 0);
  for (int u = 0; u < g.vertex_count(); ++u) dsum[label[u]] += adj.degree(u);
  std::vector<int> order(g.vertex_count());
  std::iota(order.begin(), order.end(), 0);
  bool changed = false;
  for (int pass = 0; pass < 100; ++pass) {
    epinet::shuffle(order.begin(), order.end(), rng);
    bool moved = false;
    for (int v : order) {
      std::map<int, double> links;
      for (const int* w = adj.begin(v); w != adj.end(v); ++w)
        if (*w != v) links[label[*w]] += 1;
      const int A = label[v];
      const double dv = adj.degree(v), lA = links.count(A) ? links[A] : 0.0;
      double best = 1e-12;
      int target = -1;
      for (auto [B, lB] : links) {
        if (B == A) continue;
        double dq = (lB - lA) / m - dv * (dsum[B] - dsum[A] + dv) / (2 * m * m);
        if (dq > best) {
          best = dq;
          target = B;
        }
      }
      if (target >= 0) {
        dsum[A] -= dv;
        dsum[target] += dv;
        label[v] = target;
        moved = changed = true;
      }
    }
    if (!moved) break;
  }
  return changed;
}

/// Splits every cluster into its connected pieces.
std::vector<int> split_disconnected(const Adjacency& adj, const std::vector<int>& label) {
  const int n = static_cast<int>(label.size());
  std::vector<int> out(n, -1);
  std::vector<int> stack;
  int next = 0;
  for (int s = 0; s < n; ++s) {
    if (out[s] >= 0) continue;
    out[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (const int* w = adj.begin(u); w != adj.end(u); ++w)
        if (out[*w] < 0 && label[*w] == label[u]) {
          out[*w] = next;
          stack.push_back(*w);
        }
    }
    ++next;
  }
  return out;
}

std::uint64_t edge_key(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) | static_cast<std::uint32_t>(v);
}

}  // namespace

Partition cluster_modularity(const Graph& g, std::uint64_t seed) {
  const int n = g.vertex_count();
  std::vector<int> label(n);
  std::iota(label.begin(), label.end(), 0);
  if (g.edge_count() == 0) return Partition::canonical(label);
  Adjacency adj(g);
  Rng rng(seed);
  double best_q = -1;
  std::vector<int> best = label;
  for (int round = 0; round < 20; ++round) {
    Partition p = Partition::canonical(label);
    ClusterGraph cg(g, p.cluster, p.J);
    agglomerate(cg);
    label = labels_of(cg, p.cluster);
    p = Partition::canonical(label);
    label = p.cluster;
    refine_moves(g, adj, label, p.J, rng);
    label = Partition::canonical(split_disconnected(adj, label)).cluster;
    double q = modularity(g, Partition::canonical(label));
    if (q <= best_q + 1e-12) break;
    best_q = q;
    best = label;
  }
  return Partition::canonical(best);
}

Graph rewire(const Graph& g, std::size_t target, std::uint64_t seed, SwapReport* report) {
  if (g.edge_count() < 2) throw std::invalid_argument("rewire: need at least 2 edges");
  if (!g.is_simple()) throw std::invalid_argument("rewire: simple graph required");
  std::vector<Edge> e = g.edges();
  std::unordered_set<std::uint64_t> present;
  present.reserve(e.size() * 2);
  for (auto [u, v] : e) present.insert(edge_key(u, v));
  Rng rng(seed);
  SwapReport rep;
  const std::size_t budget = 100 * target + 1000;
  while (rep.accepted < target && rep.attempted < budget) {
    ++rep.attempted;
    auto i = below(rng, e.size()), j = below(rng, e.size());
    if (i == j) continue;
    auto [a, b] = e[i];
    auto [c, d] = e[j];
    if (bernoulli(rng, 0.5)) std::swap(c, d);
    // (a,b),(c,d) -> (a,d),(c,b)
    if (a == d || c == b) continue;
    auto k1 = edge_key(a, d), k2 = edge_key(c, b);
    if (k1 == k2 || present.count(k1) || present.count(k2)) continue;
    present.erase(edge_key(a, b));
    present.erase(edge_key(c, d));
    present.insert(k1);
    present.insert(k2);
    e[i] = {std::min(a, d), std::max(a, d)};
    e[j] = {std::min(c, b), std::max(c, b)};
    ++rep.accepted;
  }
  rep.exhausted = rep.accepted < target;
  if (report) *report = rep;
  Graph out(g.vertex_count());
  out.reserve(e.size());
  for (auto [u, v] : e) out.add_edge(u, v);
  out.types = g.types;
  out.households = g.households;
  return out;
}

NullModularity null_modularity(const Graph& g, int n_samples, std::uint64_t seed, double burn_in_factor) {
  if (n_samples < 1) throw std::invalid_argument("null_modularity: need at least one sample");
  if (g.edge_count() < 2) throw std::invalid_argument("null_modularity: need at least 2 edges");
  NullModularity nm;
  nm.burn_in_factor = burn_in_factor;
  const auto swaps = static_cast<std::size_t>(burn_in_factor * static_cast<double>(g.edge_count()));
  for (int s = 0; s < n_samples; ++s) {
    SwapReport rep;
    Graph r = rewire(g, swaps, replica_seed(seed, 2 * static_cast<std::uint64_t>(s)), &rep);
    nm.any_exhausted |= rep.exhausted;
    Partition p = cluster_modularity(r, replica_seed(seed, 2 * static_cast<std::uint64_t>(s) + 1));
    nm.q.push_back(modularity(r, p));
  }
  nm.max = *std::max_element(nm.q.begin(), nm.q.end());
  nm.min = *std::min_element(nm.q.begin(), nm.q.end());
  nm.mean = std::accumulate(nm.q.begin(), nm.q.end(), 0.0) / static_cast<double>(nm.q.size());
  return nm;
}

namespace {

void refine_node(const Graph& g, ClusterNode& node, std::uint64_t seed, int depth, int null_samples) {
  if (depth <= 0 || node.vertices.size() < 4) return;
  Graph sub = induced_subgraph(g, node.vertices);
  if (sub.edge_count() < 2) return;
  Partition part = cluster_modularity(sub, replica_seed(seed, 0));
  if (part.J <= 1) return;
  node.q_sub = modularity(sub, part);
  NullModularity null = null_modularity(sub, null_samples, replica_seed(seed, 1));
  node.null_max = null.max;
  node.significant = node.q_sub > null.max;
  if (!node.significant) return;
  node.children.resize(part.J);
  for (std::size_t i = 0; i < node.vertices.size(); ++i)
    node.children[part.cluster[i]].vertices.push_back(node.vertices[i]);
  for (std::size_t c = 0; c < node.children.size(); ++c)
    refine_node(g, node.children[c], replica_seed(seed, 2 + c), depth - 1, null_samples);
}

void collect(const ClusterNode& node, std::vector<int>& label, int& next) {
  if (node.children.empty()) {
    for (int u : node.vertices) label[u] = next;
    ++next;
    return;
  }
  for (const auto& c : node.children) collect(c, label, next);
}

}  // namespace

Hierarchy refine_hierarchically(const Graph& g, const Partition& p, std::uint64_t seed, int max_depth,
                                int null_samples) {
  if (static_cast<int>(p.cluster.size()) != g.vertex_count()) throw std::invalid_argument("partition size mismatch");
  Hierarchy h;
  h.roots.resize(p.J);
  for (int u = 0; u < g.vertex_count(); ++u) h.roots.at(p.cluster[u]).vertices.push_back(u);
  for (int c = 0; c < p.J; ++c) refine_node(g, h.roots[c], replica_seed(seed, static_cast<std::uint64_t>(c)), max_depth, null_samples);
  return h;
}

Partition Hierarchy::leaves() const {
  std::size_t n = 0;
  for (const auto& r : roots) n += r.vertices.size();
  std::vector<int> label(n, -1);
  int next = 0;
  for (const auto& r : roots) collect(r, label, next);
  return Partition::canonical(label);
}

CoarsenResult coarsen(const Graph& g, const Partition& p, double q_floor) {
  CoarsenResult res;
  res.partition = p;
  res.Q = modularity(g, p);
  if (q_floor > res.Q) {
    res.identity = true;
    return res;
  }
  ClusterGraph cg(g, p.cluster, p.J);
  while (true) {
    Candidate best{-std::numeric_limits<double>::infinity(), -1, -1};
    for (int x = 0; x < p.J; ++x) {
      if (!cg.alive[x]) continue;
      for (auto [y, m] : cg.link[x]) {
        if (y <= x) continue;
        Candidate c{cg.gain(x, y), x, y};
        if (best.x < 0 || best < c) best = c;
      }
    }
    if (best.x < 0 || res.Q + best.dq < q_floor) break;
    cg.merge(best.x, best.y);
    res.Q = cg.Q();
  }
  res.partition = Partition::canonical(labels_of(cg, p.cluster));
  res.Q = modularity(g, res.partition);
  return res;
}

}  // namespace epinet
