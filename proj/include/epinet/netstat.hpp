// Descriptive statistics and community structure of contact graphs.
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "epinet/graph.hpp"
#include "epinet/measures.hpp"

namespace epinet {

/// Vertex sets, largest first (ties: smallest vertex first); vertices sorted inside.
std::vector<std::vector<int>> components(const Graph& g);
/// First component at least `ratio` times the second (or the only one).
bool has_giant(const std::vector<std::vector<int>>& comps, double ratio = 10.0);
/// Subgraph on `vertices`, relabelled 0..n-1 in the given order; attributes carried.
Graph induced_subgraph(const Graph& g, const std::vector<int>& vertices);

struct GeodesicStats {
  double harmonic_mean = 0;     ///< n(n-1) / sum over ordered pairs u != v of 1/d (1/inf = 0)
  double arithmetic_mean = 0;   ///< sum of finite d over ordered pairs / (n(n+1))
  double connected_mean = 0;    ///< mean d over connected ordered pairs u != v
  int diameter = 0;             ///< longest finite geodesic
  long long connected_pairs = 0;
};
GeodesicStats geodesic_stats(const Graph& g);

struct LocalStructure {
  double clustering_coefficient = 0;  ///< 3 triangles / connected triples
  long long triangle_count = 0;
  long long triple_count = 0;
  std::vector<int> articulation_points;
};
/// Simple graphs only.
LocalStructure local_structure(const Graph& g);

struct Partition {
  std::vector<int> cluster;  ///< 0..J-1
  int J = 0;
  /// Renumbers clusters by first appearance in vertex order.
  static Partition canonical(const std::vector<int>& labels);
};

struct MixingMatrix {
  Eigen::MatrixXd M;   ///< symmetric edge fractions
  double Q = 0;
  double r = 0;        ///< NaN when ||M^2|| = 1
  double norm_m2 = 0;  ///< sum of the entries of M^2
};
MixingMatrix mixing(const Graph& g, const Partition& p);
double modularity(const Graph& g, const Partition& p);

/// Greedy agglomeration along edges, then vertex-move refinement; every cluster is
/// connected. Deterministic given the seed.
Partition cluster_modularity(const Graph& g, std::uint64_t seed);

/// Degree-preserving double-edge swaps without loops or multi-edges.
struct SwapReport {
  std::size_t accepted = 0;
  std::size_t attempted = 0;
  bool exhausted = false;  ///< attempt budget ran out before the target count
};
Graph rewire(const Graph& g, std::size_t accepted_swaps, std::uint64_t seed, SwapReport* report = nullptr);

struct NullModularity {
  std::vector<double> q;
  double max = 0;
  double min = 0;
  double mean = 0;
  double burn_in_factor = 20;  ///< accepted swaps per edge
  bool any_exhausted = false;
};
NullModularity null_modularity(const Graph& g, int n_samples, std::uint64_t seed, double burn_in_factor = 20);

struct ClusterNode {
  std::vector<int> vertices;  ///< ids in the original graph
  double q_sub = 0;           ///< modularity of the best split of this cluster
  double null_max = 0;
  bool significant = false;
  std::vector<ClusterNode> children;
};
struct Hierarchy {
  std::vector<ClusterNode> roots;
  Partition leaves() const;
};
Hierarchy refine_hierarchically(const Graph& g, const Partition& p, std::uint64_t seed, int max_depth = 3,
                                int null_samples = 20);

struct CoarsenResult {
  Partition partition;
  double Q = 0;
  bool identity = false;  ///< floor above the starting modularity
};
/// Merges adjacent clusters, smallest modularity loss first, while Q stays >= floor.
CoarsenResult coarsen(const Graph& g, const Partition& p, double q_floor);

struct TailFit {
  enum class Method { kl, hill };
  Method method = Method::kl;
  int k0 = 1;             ///< threshold degree
  std::size_t m = 0;      ///< Hill: number of order statistics
  double alpha_hat = 0;
  double divergence = 0;  ///< KL only
  bool degenerate = false;
  std::vector<std::pair<double, double>> scan;  ///< (k, alpha_k) or (m, alpha_m)
};

/// Minimises the KL divergence between the conditional tail and a zeta law.
TailFit fit_power_law_kl(const DegreeDistribution& p, int k0, bool with_scan = true);
double kl_divergence(const DegreeDistribution& p, int k0, double alpha);

/// Hill estimate of the pmf exponent from the m largest degrees, with the half-integer
/// threshold correction for integer data.
TailFit hill(std::vector<int> degrees, std::size_t m, bool with_scan = true);
/// Hill estimates at every tie boundary m_u = #{k >= u}.
std::vector<std::pair<double, double>> hill_scan(std::vector<int> degrees);
/// Threshold from the flattest part of the scan, among thresholds with at least
/// `min_tail` points (0 selects max(50, n/100)).
TailFit hill_plateau(const std::vector<int>& degrees, std::size_t min_tail = 0);

struct Layout {
  Eigen::MatrixX2d z;
  std::vector<double> energy;  ///< energy after each accepted step, starting point first
  int iterations = 0;
};
double layout_energy(const Graph& g, const Eigen::MatrixX2d& z, double delta);
Layout layout(const Graph& g, double delta, std::uint64_t seed, int max_iters = 2000);

}  // namespace epinet
