#include "epinet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "epinet/random.hpp"

namespace epinet {

Graph::Graph(int n, bool allow_self_loops, bool allow_multi_edges)
    : n_(n), loops_(allow_self_loops), multi_(allow_multi_edges) {
  if (n <= 0) throw std::invalid_argument("graph needs N >= 1 vertices");
}

void Graph::add_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= n_ || v >= n_)
    throw std::out_of_range("edge (" + std::to_string(u) + "," + std::to_string(v) + ") outside 0.." +
                            std::to_string(n_ - 1));
  if (u == v && !loops_) throw std::invalid_argument("self-loop on a graph without self-loops");
  if (u > v) std::swap(u, v);
  edges_.emplace_back(u, v);
}

std::vector<int> Graph::degrees() const {
  std::vector<int> d(n_, 0);
  for (auto [u, v] : edges_) {
    ++d[u];
    ++d[v];
  }
  return d;
}

std::vector<Edge> Graph::canonical_edges() const {
  auto e = edges_;
  std::sort(e.begin(), e.end());
  return e;
}

bool Graph::is_simple() const {
  auto e = canonical_edges();
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i].first == e[i].second) return false;
    if (i > 0 && e[i] == e[i - 1]) return false;
  }
  return true;
}

void Graph::validate() const {
  auto e = canonical_edges();
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i].second >= n_) throw std::invalid_argument("edge endpoint out of range");
    if (!loops_ && e[i].first == e[i].second) throw std::invalid_argument("unexpected self-loop");
    if (!multi_ && i > 0 && e[i] == e[i - 1]) throw std::invalid_argument("unexpected multi-edge");
  }
  if (!types.empty() && static_cast<int>(types.size()) != n_) throw std::invalid_argument("types size mismatch");
  if (!households.empty() && static_cast<int>(households.size()) != n_)
    throw std::invalid_argument("households size mismatch");
}

Adjacency::Adjacency(const Graph& g) {
  const int n = g.vertex_count();
  offsets.assign(static_cast<std::size_t>(n) + 1, 0);
  for (auto [u, v] : g.edges()) {
    ++offsets[u + 1];
    ++offsets[v + 1];
  }
  for (int u = 0; u < n; ++u) offsets[u + 1] += offsets[u];
  targets.assign(offsets[n], 0);
  std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
  for (auto [u, v] : g.edges()) {
    targets[fill[u]++] = v;
    targets[fill[v]++] = u;
  }
}

namespace {

// Calls emit(v, w) for each pair w < v < n kept with probability p (geometric skipping).
template <class Emit>
void skip_triangle(int n, double p, Rng& rng, Emit emit) {
  if (p <= 0 || n < 2) return;
  if (p >= 1) {
    for (int v = 1; v < n; ++v)
      for (int w = 0; w < v; ++w) emit(v, w);
    return;
  }
  const double lq = std::log1p(-p);
  long long v = 1, w = -1;
  while (v < n) {
    double r = uniform01(rng);
    double jump = std::floor(std::log1p(-r) / lq);
    if (jump >= static_cast<double>(n) * n) return;
    w += 1 + static_cast<long long>(jump);
    while (w >= v && v < n) {
      w -= v;
      ++v;
    }
    if (v < n) emit(static_cast<int>(v), static_cast<int>(w));
  }
}

// Calls emit(a, b) for each (a, b) in [0,na) x [0,nb) kept with probability p.
template <class Emit>
void skip_rectangle(int na, int nb, double p, Rng& rng, Emit emit) {
  if (p <= 0 || na == 0 || nb == 0) return;
  const long long total = static_cast<long long>(na) * nb;
  if (p >= 1) {
    for (long long i = 0; i < total; ++i) emit(static_cast<int>(i / nb), static_cast<int>(i % nb));
    return;
  }
  const double lq = std::log1p(-p);
  long long i = -1;
  while (true) {
    double r = uniform01(rng);
    double jump = std::floor(std::log1p(-r) / lq);
    if (jump >= static_cast<double>(total)) break;
    i += 1 + static_cast<long long>(jump);
    if (i >= total) break;
    emit(static_cast<int>(i / nb), static_cast<int>(i % nb));
  }
}

void check_prob(double p, const char* what) {
  if (!(p >= 0 && p <= 1)) throw std::invalid_argument(std::string(what) + ": probability outside [0,1]");
}

std::vector<int> sample_degrees(int n, const DegreeDistribution& p, Rng& rng) {
  std::vector<int> ks;
  std::vector<double> w;
  for (const auto& [k, m] : p.measure().entries()) {
    ks.push_back(k);
    w.push_back(m);
  }
  AliasTable table(w);
  std::vector<int> d(n);
  for (auto& x : d) x = ks[table(rng)];
  return d;
}

Graph household_graph(const family::Household& h, std::uint64_t seed) {
  if (h.n <= 0) throw std::invalid_argument("household: N must be positive");
  if (h.sizes.measure()(0) > 0) throw std::invalid_argument("household sizes must be >= 1");
  Rng rng(seed);
  std::vector<int> ks;
  std::vector<double> w;
  for (const auto& [k, m] : h.sizes.measure().entries()) {
    ks.push_back(k);
    w.push_back(m);
  }
  AliasTable table(w);
  std::vector<int> house(h.n);
  int next = 0, hid = 0;
  while (next < h.n) {
    int size = std::min(ks[table(rng)], h.n - next);  // the last household is cut to fit N
    for (int i = 0; i < size; ++i) house[next + i] = hid;
    next += size;
    ++hid;
  }
  Graph g(h.n);
  for (int u = 0; u < h.n;) {
    int v = u;
    while (v < h.n && house[v] == house[u]) ++v;
    for (int a = u; a < v; ++a)
      for (int b = a + 1; b < v; ++b) g.add_edge(a, b);
    u = v;
  }
  if (h.global) {
    GeneratorSpec gs = *h.global;
    gs.seed = replica_seed(seed, 1);
    Graph global = generate(gs);
    if (global.vertex_count() != h.n) throw std::invalid_argument("household: global layer must have the same N");
    for (auto [u, v] : global.edges())
      if (u != v) g.add_edge(u, v);
    g = simplify(g);
    if (!global.types.empty()) g.types = global.types;
  }
  g.households = std::move(house);
  return g;
}

}  // namespace

Graph complete_graph(int n) {
  Graph g(n);
  g.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

Graph erdos_renyi(int n, double p, std::uint64_t seed) {
  check_prob(p, "erdos_renyi");
  Graph g(n);
  Rng rng(seed);
  skip_triangle(n, p, rng, [&](int v, int w) { g.add_edge(w, v); });
  return g;
}

Graph stochastic_block_model(int n, const Eigen::VectorXd& rho, const Eigen::MatrixXd& pi, std::uint64_t seed) {
  const auto K = rho.size();
  if (K == 0) throw std::invalid_argument("sbm: need at least one type");
  if (pi.rows() != K || pi.cols() != K) throw std::invalid_argument("sbm: pi must be K x K");
  if (((pi - pi.transpose()).array().abs() > 1e-12).any()) throw std::invalid_argument("sbm: pi not symmetric");
  for (Eigen::Index i = 0; i < K; ++i) {
    if (!(rho(i) >= 0)) throw std::invalid_argument("sbm: negative type fraction");
    for (Eigen::Index j = 0; j < K; ++j) check_prob(pi(i, j), "sbm");
  }
  if (std::abs(rho.sum() - 1.0) > 1e-9) throw std::invalid_argument("sbm: rho must sum to 1");
  Graph g(n);
  Rng rng(seed);
  AliasTable table(std::vector<double>(rho.data(), rho.data() + K));
  g.types.resize(n);
  std::vector<std::vector<int>> members(K);
  for (int u = 0; u < n; ++u) {
    auto t = table(rng);
    g.types[u] = static_cast<int>(t) + 1;
    members[t].push_back(u);
  }
  for (Eigen::Index a = 0; a < K; ++a) {
    const auto& A = members[a];
    skip_triangle(static_cast<int>(A.size()), pi(a, a), rng, [&](int v, int w) { g.add_edge(A[w], A[v]); });
    for (Eigen::Index b = a + 1; b < K; ++b) {
      const auto& B = members[b];
      skip_rectangle(static_cast<int>(A.size()), static_cast<int>(B.size()), pi(a, b), rng,
                     [&](int i, int j) { g.add_edge(A[i], B[j]); });
    }
  }
  return g;
}

Graph configuration_model(std::vector<int> degrees, std::uint64_t seed) {
  const int n = static_cast<int>(degrees.size());
  if (n == 0) throw std::invalid_argument("configuration model: empty degree sequence");
  Rng rng(seed);
  long long stubs = 0;
  for (int d : degrees) {
    if (d < 0) throw std::invalid_argument("configuration model: negative degree");
    stubs += d;
  }
  if (stubs % 2 != 0) {
    // Pick uniformly among vertices holding at least one stub.
    std::vector<int> holders;
    for (int u = 0; u < n; ++u)
      if (degrees[u] > 0) holders.push_back(u);
    --degrees[holders[below(rng, holders.size())]];
    --stubs;
  }
  std::vector<int> pool;
  pool.reserve(static_cast<std::size_t>(stubs));
  for (int u = 0; u < n; ++u) pool.insert(pool.end(), degrees[u], u);
  epinet::shuffle(pool.begin(), pool.end(), rng);
  Graph g(n, true, true);
  g.reserve(pool.size() / 2);
  for (std::size_t i = 0; i + 1 < pool.size(); i += 2) g.add_edge(pool[i], pool[i + 1]);
  return g;
}

Graph configuration_model(int n, const DegreeDistribution& p, std::uint64_t seed) {
  if (n <= 0) throw std::invalid_argument("configuration model: N must be positive");
  return configuration_model(sample_degrees(n, p, seed), replica_seed(seed, 0));
}

std::vector<int> sample_degrees(int n, const DegreeDistribution& p, std::uint64_t seed) {
  Rng rng(seed);
  return sample_degrees(n, p, rng);
}

Graph generate(const GeneratorSpec& spec) {
  return std::visit(
      [&](const auto& f) -> Graph {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, family::Complete>) {
          return complete_graph(f.n);
        } else if constexpr (std::is_same_v<F, family::ErdosRenyi>) {
          return erdos_renyi(f.n, f.p, spec.seed);
        } else if constexpr (std::is_same_v<F, family::Sbm>) {
          return stochastic_block_model(f.n, f.rho, f.pi, spec.seed);
        } else if constexpr (std::is_same_v<F, family::ConfigModel>) {
          if (!f.degrees.empty()) return configuration_model(f.degrees, spec.seed);
          if (!f.distribution) throw std::invalid_argument("configuration model: no degree source");
          return configuration_model(f.n, *f.distribution, spec.seed);
        } else {
          return household_graph(f, spec.seed);
        }
      },
      spec.family);
}

DegreeDistribution empirical_degree_distribution(const Graph& g) {
  DegreeMeasure::Map m;
  for (int d : g.degrees()) m[d] += 1.0;
  for (auto& [k, v] : m) v /= g.vertex_count();
  return DegreeDistribution::normalized(DegreeMeasure(std::move(m)));
}

Graph simplify(const Graph& g) {
  Graph s(g.vertex_count());
  auto e = g.canonical_edges();
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i].first == e[i].second) continue;
    if (i > 0 && e[i] == e[i - 1]) continue;
    s.add_edge(e[i].first, e[i].second);
  }
  s.types = g.types;
  s.households = g.households;
  return s;
}

double total_variation(const DegreeDistribution& a, const DegreeDistribution& b) {
  double s = 0;
  int kmax = std::max(a.max_degree(), b.max_degree());
  for (int k = 0; k <= kmax; ++k) s += std::abs(a(k) - b(k));
  return 0.5 * s;
}

}  // namespace epinet
