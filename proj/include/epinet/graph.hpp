// Graphs, random graph generators and the edge-list format.
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "epinet/measures.hpp"

namespace epinet {

using Edge = std::pair<int, int>;

/// Undirected (multi)graph. Edges are stored with u <= v; a self-loop adds 2 to the degree.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n, bool allow_self_loops = false, bool allow_multi_edges = false);

  int vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  bool allows_self_loops() const { return loops_; }
  bool allows_multi_edges() const { return multi_; }

  /// Appends an edge; bounds and self-loop policy are checked, multiplicity is not
  /// (see `validate`).
  void add_edge(int u, int v);
  void reserve(std::size_t m) { edges_.reserve(m); }

  std::vector<int> degrees() const;
  /// Sorted edge list, for bitwise comparisons.
  std::vector<Edge> canonical_edges() const;
  bool is_simple() const;
  /// Throws std::invalid_argument when the graph breaks its own flags.
  void validate() const;

  // Vertex attributes; empty when absent. Types are 1..K.
  std::vector<int> types;
  std::vector<int> households;

 private:
  int n_ = 0;
  bool loops_ = false, multi_ = false;
  std::vector<Edge> edges_;
};

/// Compressed adjacency lists: neighbours of u are targets[offsets[u] .. offsets[u+1]).
/// A self-loop lists u twice in its own row; parallel edges repeat.
struct Adjacency {
  std::vector<std::size_t> offsets;
  std::vector<int> targets;
  explicit Adjacency(const Graph& g);
  int degree(int u) const { return static_cast<int>(offsets[u + 1] - offsets[u]); }
  const int* begin(int u) const { return targets.data() + offsets[u]; }
  const int* end(int u) const { return targets.data() + offsets[u + 1]; }
};

struct GeneratorSpec;

namespace family {
struct Complete { int n = 0; };
struct ErdosRenyi { int n = 0; double p = 0; };
/// Types drawn i.i.d. from rho; pairs of types (a, b) linked with probability pi(a, b).
struct Sbm { int n = 0; Eigen::VectorXd rho; Eigen::MatrixXd pi; };
/// Explicit degree sequence (n = its length) or i.i.d. degrees from a distribution.
struct ConfigModel {
  int n = 0;
  std::vector<int> degrees;
  std::optional<DegreeDistribution> distribution;
};
/// Cliques on households with i.i.d. sizes, superposed with an independent global graph
/// on the same vertices (the union is kept simple).
struct Household {
  int n = 0;
  DegreeDistribution sizes;
  std::shared_ptr<const GeneratorSpec> global;
};
}  // namespace family

struct GeneratorSpec {
  std::variant<family::Complete, family::ErdosRenyi, family::Sbm, family::ConfigModel, family::Household> family;
  std::uint64_t seed = 0;
};

Graph generate(const GeneratorSpec& spec);

Graph complete_graph(int n);
Graph erdos_renyi(int n, double p, std::uint64_t seed);
Graph stochastic_block_model(int n, const Eigen::VectorXd& rho, const Eigen::MatrixXd& pi, std::uint64_t seed);
/// Configuration model from an explicit sequence. An odd stub sum is fixed by removing
/// one stub from a uniformly chosen vertex with positive degree.
Graph configuration_model(std::vector<int> degrees, std::uint64_t seed);
Graph configuration_model(int n, const DegreeDistribution& p, std::uint64_t seed);
/// The i.i.d. degree draws used by the distribution-driven configuration model.
std::vector<int> sample_degrees(int n, const DegreeDistribution& p, std::uint64_t seed);

DegreeDistribution empirical_degree_distribution(const Graph& g);
/// Drops self-loops and merges parallel edges; attributes are kept.
Graph simplify(const Graph& g);

/// Total variation distance between two distributions.
double total_variation(const DegreeDistribution& a, const DegreeDistribution& b);

// Edge-list format: optional '#' comment lines, `N <count>`, then `u v` per line.
Graph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const Graph& g);
/// Sidecar rows `vertex,type,household`; an optional header row is skipped. Empty
/// fields leave the attribute unset.
void read_attributes(std::istream& in, Graph& g);
void write_attributes(std::ostream& out, const Graph& g);

}  // namespace epinet
