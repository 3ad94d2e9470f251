// Small graph builders and comparison helpers shared by tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "epinet/graph.hpp"

namespace fixture {

inline epinet::Graph cliques(int count, int size) {
  epinet::Graph g(count * size);
  for (int c = 0; c < count; ++c)
    for (int i = 0; i < size; ++i)
      for (int j = i + 1; j < size; ++j) g.add_edge(c * size + i, c * size + j);
  return g;
}

/// Equal blocks with independent edges: probability p_in inside a block, p_out across.
inline epinet::Graph planted(int blocks, int size, double p_in, double p_out, std::uint64_t seed,
                             std::vector<int>* truth = nullptr) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  const int n = blocks * size;
  epinet::Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (u(rng) < (i / size == j / size ? p_in : p_out)) g.add_edge(i, j);
  if (truth) {
    truth->resize(n);
    for (int i = 0; i < n; ++i) (*truth)[i] = i / size;
  }
  return g;
}

/// Adjusted Rand index of two labelings.
inline double adjusted_rand(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<std::pair<int, int>, double> nij;
  std::map<int, double> ai, bj;
  for (std::size_t k = 0; k < a.size(); ++k) {
    nij[{a[k], b[k]}] += 1;
    ai[a[k]] += 1;
    bj[b[k]] += 1;
  }
  auto c2 = [](double x) { return x * (x - 1) / 2; };
  double sij = 0, sa = 0, sb = 0;
  for (auto& [k, v] : nij) sij += c2(v);
  for (auto& [k, v] : ai) sa += c2(v);
  for (auto& [k, v] : bj) sb += c2(v);
  double expected = sa * sb / c2(static_cast<double>(a.size()));
  double mx = 0.5 * (sa + sb);
  return mx == expected ? 1.0 : (sij - expected) / (mx - expected);
}

/// i.i.d. draws from p_k proportional to k^-alpha on 1..kmax, by inversion.
inline std::vector<int> zeta_sample(double alpha, int n, std::uint64_t seed, int kmax = 1000000) {
  std::vector<double> cdf(kmax);
  double s = 0;
  for (int k = 1; k <= kmax; ++k) cdf[k - 1] = s += std::pow(k, -alpha);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, s);
  std::vector<int> out(n);
  for (auto& x : out) x = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u(rng)) - cdf.begin()) + 1;
  return out;
}

}  // namespace fixture
