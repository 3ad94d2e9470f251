#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "epinet/netstat.hpp"

namespace epinet {

std::vector<std::vector<int>> components(const Graph& g) {
  const int n = g.vertex_count();
  Adjacency adj(g);
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> out;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    comp[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      out[id].push_back(u);
      for (const int* w = adj.begin(u); w != adj.end(u); ++w)
        if (comp[*w] < 0) {
          comp[*w] = id;
          stack.push_back(*w);
        }
    }
    std::sort(out[id].begin(), out[id].end());
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return out;
}

bool has_giant(const std::vector<std::vector<int>>& comps, double ratio) {
  if (comps.empty()) return false;
  if (comps.size() == 1) return true;
  return static_cast<double>(comps[0].size()) >= ratio * static_cast<double>(comps[1].size());
}

Graph induced_subgraph(const Graph& g, const std::vector<int>& vertices) {
  if (vertices.empty()) throw std::invalid_argument("induced_subgraph: empty vertex set");
  std::vector<int> local(g.vertex_count(), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<int>(i);
  Graph s(static_cast<int>(vertices.size()), g.allows_self_loops(), g.allows_multi_edges());
  for (auto [u, v] : g.edges())
    if (local[u] >= 0 && local[v] >= 0) s.add_edge(local[u], local[v]);
  for (int u : vertices) {
    if (!g.types.empty()) s.types.push_back(g.types[u]);
    if (!g.households.empty()) s.households.push_back(g.households[u]);
  }
  return s;
}

GeodesicStats geodesic_stats(const Graph& g) {
  const int n = g.vertex_count();
  Adjacency adj(g);
  GeodesicStats st;
  std::vector<int> dist(n, -1), queue(n);
  double inv_sum = 0, sum = 0;
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    int head = 0, tail = 0;
    queue[tail++] = s;
    dist[s] = 0;
    while (head < tail) {
      int u = queue[head++];
      for (const int* w = adj.begin(u); w != adj.end(u); ++w)
        if (dist[*w] < 0) {
          dist[*w] = dist[u] + 1;
          queue[tail++] = *w;
        }
    }
    for (int i = 1; i < tail; ++i) {
      int d = dist[queue[i]];
      inv_sum += 1.0 / d;
      sum += d;
      st.diameter = std::max(st.diameter, d);
    }
    st.connected_pairs += tail - 1;
  }
  const double nn = static_cast<double>(n);
  st.harmonic_mean = inv_sum > 0 ? nn * (nn - 1) / inv_sum : std::numeric_limits<double>::infinity();
  st.arithmetic_mean = sum / (nn * (nn + 1));
  st.connected_mean = st.connected_pairs > 0 ? sum / static_cast<double>(st.connected_pairs) : 0.0;
  return st;
}

LocalStructure local_structure(const Graph& g) {
  if (!g.is_simple()) throw std::invalid_argument("local_structure: simplify the multigraph first");
  const int n = g.vertex_count();
  Adjacency adj(g);
  std::vector<std::vector<int>> nb(n);
  for (int u = 0; u < n; ++u) {
    nb[u].assign(adj.begin(u), adj.end(u));
    std::sort(nb[u].begin(), nb[u].end());
  }
  LocalStructure ls;
  for (int u = 0; u < n; ++u) {
    long long d = static_cast<long long>(nb[u].size());
    ls.triple_count += d * (d - 1) / 2;
  }
  for (auto [u, v] : g.edges()) {
    // Common neighbours w > v close a triangle u < v < w exactly once.
    auto a = std::upper_bound(nb[u].begin(), nb[u].end(), v);
    auto b = std::upper_bound(nb[v].begin(), nb[v].end(), v);
    while (a != nb[u].end() && b != nb[v].end()) {
      if (*a < *b) ++a;
      else if (*b < *a) ++b;
      else ++ls.triangle_count, ++a, ++b;
    }
  }
  ls.clustering_coefficient = ls.triple_count > 0 ? 3.0 * ls.triangle_count / ls.triple_count : 0.0;

  // Articulation points: iterative lowpoint DFS.
  std::vector<int> disc(n, -1), low(n, 0), parent(n, -1), children(n, 0);
  std::vector<std::size_t> it(n, 0);
  std::vector<char> art(n, 0);
  int timer = 0;
  std::vector<int> stack;
  for (int r = 0; r < n; ++r) {
    if (disc[r] >= 0) continue;
    disc[r] = low[r] = timer++;
    stack.push_back(r);
    while (!stack.empty()) {
      int u = stack.back();
      if (it[u] < nb[u].size()) {
        int w = nb[u][it[u]++];
        if (disc[w] < 0) {
          parent[w] = u;
          ++children[u];
          disc[w] = low[w] = timer++;
          stack.push_back(w);
        } else if (w != parent[u]) {
          low[u] = std::min(low[u], disc[w]);
        }
      } else {
        stack.pop_back();
        int p = parent[u];
        if (p >= 0) {
          low[p] = std::min(low[p], low[u]);
          if (parent[p] >= 0 && low[u] >= disc[p]) art[p] = 1;
        }
      }
    }
    if (children[r] > 1) art[r] = 1;
  }
  for (int u = 0; u < n; ++u)
    if (art[u]) ls.articulation_points.push_back(u);
  return ls;
}

Partition Partition::canonical(const std::vector<int>& labels) {
  Partition p;
  p.cluster.resize(labels.size());
  std::unordered_map<int, int> id;
  for (std::size_t u = 0; u < labels.size(); ++u) {
    auto [pos, fresh] = id.emplace(labels[u], static_cast<int>(id.size()));
    p.cluster[u] = pos->second;
  }
  p.J = static_cast<int>(id.size());
  return p;
}

MixingMatrix mixing(const Graph& g, const Partition& p) {
  if (p.J <= 0) throw std::invalid_argument("mixing: partition has no clusters");
  if (static_cast<int>(p.cluster.size()) != g.vertex_count())
    throw std::invalid_argument("mixing: partition does not cover the vertices");
  if (g.edge_count() == 0) throw std::invalid_argument("mixing: graph has no edges");
  MixingMatrix mm;
  mm.M = Eigen::MatrixXd::Zero(p.J, p.J);
  const double w = 1.0 / static_cast<double>(g.edge_count());
  for (auto [u, v] : g.edges()) {
    int a = p.cluster[u], b = p.cluster[v];
    if (a < 0 || a >= p.J || b < 0 || b >= p.J) throw std::invalid_argument("mixing: cluster id out of range");
    if (a == b) {
      mm.M(a, a) += w;
    } else {
      mm.M(a, b) += w / 2;
      mm.M(b, a) += w / 2;
    }
  }
  mm.norm_m2 = (mm.M * mm.M).sum();
  mm.Q = mm.M.trace() - mm.norm_m2;
  mm.r = mm.norm_m2 < 1 ? mm.Q / (1 - mm.norm_m2) : std::numeric_limits<double>::quiet_NaN();
  return mm;
}

double modularity(const Graph& g, const Partition& p) { return mixing(g, p).Q; }

}  // namespace epinet
