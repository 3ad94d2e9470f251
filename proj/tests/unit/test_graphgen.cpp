#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "epinet/graph.hpp"
#include "epinet/netstat.hpp"

using namespace epinet;
using doctest::Approx;

TEST_CASE("Erdos-Renyi extremes") {
  auto k50 = erdos_renyi(50, 1.0, 3);
  CHECK(k50.edge_count() == 1225);
  CHECK(k50.is_simple());
  CHECK(k50.canonical_edges() == complete_graph(50).canonical_edges());
  CHECK(erdos_renyi(50, 0.0, 3).edge_count() == 0);
  CHECK_THROWS(erdos_renyi(0, 0.5, 1));
  CHECK_THROWS(erdos_renyi(10, 1.5, 1));
}

TEST_CASE("all-2 configuration model is a union of cycles") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto g = configuration_model(std::vector<int>(10, 2), seed);
    CHECK(g.degrees() == std::vector<int>(10, 2));
    CHECK(g.edge_count() == 10);
    // every component of a 2-regular multigraph has as many edges as vertices
    Graph s = g;
    for (const auto& c : components(s)) {
      std::size_t e = 0;
      for (auto [u, v] : g.edges())
        if (std::binary_search(c.begin(), c.end(), u)) ++e;
      CHECK(e == c.size());
    }
  }
}

TEST_CASE("configuration model keeps the degree sequence") {
  std::vector<int> d = {3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto g = configuration_model(d, seed);
    CHECK(g.degrees() == d);
    CHECK_NOTHROW(g.validate());
  }
}

TEST_CASE("odd stub sum loses one stub") {
  std::vector<int> d = {3, 2, 2, 2};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto out = configuration_model(d, seed).degrees();
    int diff = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(out[i] <= d[i]);
      diff += d[i] - out[i];
    }
    CHECK(diff == 1);
  }
}

TEST_CASE("determinism") {
  GeneratorSpec er{family::ErdosRenyi{300, 0.02}, 42};
  CHECK(generate(er).canonical_edges() == generate(er).canonical_edges());
  GeneratorSpec er2{family::ErdosRenyi{300, 0.02}, 43};
  CHECK(generate(er).canonical_edges() != generate(er2).canonical_edges());
  GeneratorSpec cm{family::ConfigModel{500, {}, poisson_distribution(4)}, 9};
  CHECK(generate(cm).canonical_edges() == generate(cm).canonical_edges());
  Eigen::Vector2d rho(0.3, 0.7);
  Eigen::Matrix2d pi;
  pi << 0.1, 0.02, 0.02, 0.05;
  GeneratorSpec sbm{family::Sbm{200, rho, pi}, 5};
  auto a = generate(sbm), b = generate(sbm);
  CHECK(a.canonical_edges() == b.canonical_edges());
  CHECK(a.types == b.types);
}

TEST_CASE("empirical degree distribution") {
  auto k4 = empirical_degree_distribution(complete_graph(4));
  CHECK(k4(3) == 1.0);
  Graph star(5);
  for (int v = 1; v < 5; ++v) star.add_edge(0, v);
  auto s = empirical_degree_distribution(star);
  CHECK(s(1) == Approx(0.8));
  CHECK(s(4) == Approx(0.2));
}

TEST_CASE("ER degree law approaches Poisson") {
  const int n = 10000;
  double tv = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    tv += total_variation(empirical_degree_distribution(erdos_renyi(n, 5.0 / n, seed)), poisson_distribution(5));
  CHECK(tv / 20 < 0.02);
}

TEST_CASE("simplify") {
  Graph loop(3, true, true);
  loop.add_edge(1, 1);
  CHECK(simplify(loop).edge_count() == 0);
  Graph dbl(3, true, true);
  dbl.add_edge(0, 2);
  dbl.add_edge(2, 0);
  auto s = simplify(dbl);
  CHECK(s.edge_count() == 1);
  CHECK(s.edges()[0] == Edge{0, 2});
  CHECK(s.is_simple());
  double removed = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto g = configuration_model(10000, poisson_distribution(5), seed);
    removed += 1.0 - static_cast<double>(simplify(g).edge_count()) / static_cast<double>(g.edge_count());
  }
  CHECK(removed / 10 < 0.01);
}

TEST_CASE("SBM with one type behaves like ER") {
  const int n = 200;
  const double p = 0.05;
  Eigen::VectorXd rho = Eigen::VectorXd::Ones(1);
  Eigen::MatrixXd pi = Eigen::MatrixXd::Constant(1, 1, p);
  double sum = 0, sum2 = 0;
  const int reps = 200;
  for (int s = 0; s < reps; ++s) {
    double m = static_cast<double>(stochastic_block_model(n, rho, pi, s).edge_count());
    sum += m;
    sum2 += m * m;
  }
  double mean = sum / reps, var = sum2 / reps - mean * mean;
  double expected = n * (n - 1) * p / 2;
  CHECK(std::abs(mean - expected) < 3 * std::sqrt(var / reps));
}

TEST_CASE("SBM bipartite when diagonal vanishes") {
  Eigen::Vector2d rho(0.5, 0.5);
  Eigen::Matrix2d pi;
  pi << 0, 0.3, 0.3, 0;
  auto g = stochastic_block_model(100, rho, pi, 8);
  CHECK(g.edge_count() > 0);
  for (auto [u, v] : g.edges()) CHECK(g.types[u] != g.types[v]);
  Eigen::Matrix2d asym;
  asym << 0, 0.3, 0.2, 0;
  CHECK_THROWS_WITH(stochastic_block_model(100, rho, asym, 1), doctest::Contains("symmetric"));
}

TEST_CASE("household generator") {
  DegreeDistribution sizes(DegreeMeasure({{1, 0.2}, {2, 0.3}, {3, 0.5}}));
  auto global = std::make_shared<GeneratorSpec>(GeneratorSpec{family::ErdosRenyi{300, 0.005}, 2});
  GeneratorSpec spec{family::Household{300, sizes, global}, 4};
  auto g = generate(spec);
  CHECK(g.is_simple());
  REQUIRE(g.households.size() == 300);
  std::map<int, int> count;
  for (int h : g.households) ++count[h];
  std::size_t within = 0;
  for (auto [u, v] : g.edges())
    if (g.households[u] == g.households[v]) ++within;
  std::size_t cliques = 0;
  for (auto [h, c] : count) {
    CHECK(c <= 3);
    cliques += static_cast<std::size_t>(c * (c - 1) / 2);
  }
  CHECK(within == cliques);
}

TEST_CASE("edge list round trip with attributes") {
  Eigen::Vector2d rho(0.5, 0.5);
  Eigen::Matrix2d pi;
  pi << 0.1, 0.05, 0.05, 0.1;
  auto g = stochastic_block_model(60, rho, pi, 3);
  std::stringstream e, a;
  write_edge_list(e, g);
  write_attributes(a, g);
  e.seekg(0);
  auto h = read_edge_list(e);
  read_attributes(a, h);
  CHECK(h.vertex_count() == 60);
  CHECK(h.canonical_edges() == g.canonical_edges());
  CHECK(h.types == g.types);
  std::istringstream bad("N 3\n0 1\n1 x\n");
  CHECK_THROWS_WITH(read_edge_list(bad), doctest::Contains("line 3"));
  std::istringstream oob("N 3\n0 5\n");
  CHECK_THROWS(read_edge_list(oob));
}
