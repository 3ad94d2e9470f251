// Pinned random streams. The engine is std::mt19937_64; every variate below is
// derived from its raw 64-bit output so results do not depend on the standard
// library's distribution implementations.
#pragma once

#include <cmath>
#include <cstdint>
#include <iterator>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace epinet {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for replica `index` of a sweep started from `master`.
inline std::uint64_t replica_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Uniform on [0,1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform on (0,1].
inline double uniform_pos(Rng& rng) { return 1.0 - uniform01(rng); }

inline double exponential(Rng& rng, double rate) { return -std::log(uniform_pos(rng)) / rate; }

/// Uniform integer in [0, n). Lemire's multiply-shift with rejection.
inline std::uint64_t below(Rng& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("below: empty range");
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * n;
  auto lo = static_cast<std::uint64_t>(m);
  if (lo < n) {
    const std::uint64_t t = (0 - n) % n;
    while (lo < t) {
      m = static_cast<unsigned __int128>(rng()) * n;
      lo = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

template <class It>
void shuffle(It first, It last, Rng& rng) {
  auto n = static_cast<std::uint64_t>(std::distance(first, last));
  for (std::uint64_t i = n; i > 1; --i) {
    auto j = below(rng, i);
    using std::swap;
    swap(first[i - 1], first[j]);
  }
}

/// Poisson variate by sequential inversion; intended for moderate means.
inline long poisson(Rng& rng, double mean) {
  if (mean < 0) throw std::invalid_argument("poisson: negative mean");
  if (mean > 500) throw std::invalid_argument("poisson: mean too large for inversion");
  double u = uniform01(rng);
  double p = std::exp(-mean), c = p;
  long k = 0;
  while (u >= c) {
    ++k;
    p *= mean / static_cast<double>(k);
    c += p;
    if (p == 0.0 && c < u) break;  // numerical tail exhausted
  }
  return k;
}

/// Walker alias table over nonnegative weights.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(const std::vector<double>& w) {
    const std::size_t n = w.size();
    if (n == 0) throw std::invalid_argument("AliasTable: no weights");
    double total = 0;
    for (double x : w) {
      if (!(x >= 0)) throw std::invalid_argument("AliasTable: negative weight");
      total += x;
    }
    if (!(total > 0)) throw std::invalid_argument("AliasTable: zero total weight");
    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    std::vector<std::size_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = w[i] * static_cast<double>(n) / total;
      (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
      auto s = small.back(); small.pop_back();
      auto l = large.back(); large.pop_back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (auto i : large) prob_[i] = 1.0;
    for (auto i : small) prob_[i] = 1.0;
  }
  std::size_t operator()(Rng& rng) const {
    auto i = static_cast<std::size_t>(below(rng, prob_.size()));
    return uniform01(rng) < prob_[i] ? i : alias_[i];
  }
  std::size_t size() const { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

}  // namespace epinet
