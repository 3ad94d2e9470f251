#include "epinet/episim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "epinet/fenwick.hpp"
#include "epinet/random.hpp"

namespace epinet {

void EpidemicParams::validate() const {
  if (!(lambda >= 0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be >= 0");
  if (!(gamma > 0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be > 0");
  if (delta && !(*delta > 0)) throw std::invalid_argument("delta must be > 0");
  if (lambda_h && !(*lambda_h >= 0)) throw std::invalid_argument("lambda_h must be >= 0");
}

std::size_t EventLog::total_infected() const {
  std::size_t n = index_cases.size();
  for (const auto& e : events) n += e.kind == EventKind::infection;
  return n;
}

namespace {

enum : unsigned char { kS = 0, kE = 1, kI = 2, kR = 3 };

/// Vector with O(1) insert, erase and uniform pick.
class Bag {
 public:
  explicit Bag(int n) : pos_(n, -1) {}
  void insert(int u) {
    pos_[u] = static_cast<int>(items_.size());
    items_.push_back(u);
  }
  void erase(int u) {
    int p = pos_[u];
    int last = items_.back();
    items_[p] = last;
    pos_[last] = p;
    items_.pop_back();
    pos_[u] = -1;
  }
  std::size_t size() const { return items_.size(); }
  int pick(Rng& rng) const { return items_[below(rng, items_.size())]; }

 private:
  std::vector<int> pos_;
  std::vector<int> items_;
};

EventLog run(const Graph& g, const EpidemicParams& params, const std::vector<int>& initial, std::uint64_t seed,
             const SimOptions& opt, bool household) {
  params.validate();
  if (initial.empty()) throw std::invalid_argument("no index case");
  const int n = g.vertex_count();
  if (household) {
    if (static_cast<int>(g.households.size()) != n) throw std::invalid_argument("household ids missing");
    for (int h : g.households)
      if (h < 0) throw std::invalid_argument("household ids missing");
  }
  // Rate classes: 0 global, 1 household (only when the rates differ).
  const double lam_h = params.lambda_h.value_or(params.lambda);
  const bool two = household && lam_h != params.lambda;
  const int nclass = two ? 2 : 1;
  const double rate[2] = {params.lambda, lam_h};
  auto edge_class = [&](int u, int v) { return two && g.households[u] == g.households[v] ? 1 : 0; };

  Adjacency adj(g);
  std::vector<unsigned char> state(n, kS);
  std::vector<Fenwick<long long>> pressure(nclass, Fenwick<long long>(n));
  Bag exposed(n), infectious(n);
  Rng rng(seed);

  EventLog log;
  log.population = n;

  auto become_infectious = [&](int u) {
    state[u] = kI;
    infectious.insert(u);
    for (const int* w = adj.begin(u); w != adj.end(u); ++w)
      if (*w != u && state[*w] == kS) pressure[edge_class(u, *w)].add(*w, 1);
  };
  auto leave_infectious = [&](int u) {
    state[u] = kR;
    infectious.erase(u);
    for (const int* w = adj.begin(u); w != adj.end(u); ++w)
      if (*w != u && state[*w] == kS) pressure[edge_class(u, *w)].add(*w, -1);
  };

  for (int u : initial) {
    if (u < 0 || u >= n) throw std::out_of_range("initial infective outside the graph");
    if (state[u] != kS) throw std::invalid_argument("duplicate initial infective");
    state[u] = kI;  // marked up front so index cases never pressure one another
  }
  for (int u : initial) {
    infectious.insert(u);
    for (const int* w = adj.begin(u); w != adj.end(u); ++w)
      if (*w != u && state[*w] == kS) pressure[edge_class(u, *w)].add(*w, 1);
    log.index_cases.push_back(u);
  }

  std::size_t infected = initial.size();
  double t = 0;
  const double gamma = params.gamma;
  const double delta = params.delta.value_or(0.0);
  while (true) {
    if (infectious.size() == 0 && exposed.size() == 0) {
      log.stop = StopReason::extinct;
      break;
    }
    if (opt.infection_cap && infected >= opt.infection_cap) {
      log.stop = StopReason::infection_cap;
      break;
    }
    double r_inf[2] = {0, 0};
    for (int c = 0; c < nclass; ++c) r_inf[c] = rate[c] * static_cast<double>(pressure[c].total());
    const double r_act = delta * static_cast<double>(exposed.size());
    const double r_rem = gamma * static_cast<double>(infectious.size());
    const double total = r_inf[0] + r_inf[1] + r_act + r_rem;
    const double tn = t + exponential(rng, total);
    if (tn > opt.t_max) {
      t = opt.t_max;
      log.stop = StopReason::time_horizon;
      break;
    }
    if (tn == t && !log.events.empty()) log.tied.push_back(log.events.size());
    t = tn;
    double x = uniform01(rng) * total;
    int cls = -1;
    if (x < r_inf[0]) cls = 0;
    else if (x < r_inf[0] + r_inf[1]) cls = 1;
    if (cls >= 0) {
      auto& fw = pressure[cls];
      if (fw.total() <= 0) continue;  // rounding at a zero-rate boundary
      int v = static_cast<int>(fw.find(static_cast<long long>(below(rng, static_cast<std::uint64_t>(fw.total())))));
      // Infector: uniform over the infectious edge stubs of this class pointing at v.
      long long pick = static_cast<long long>(below(rng, static_cast<std::uint64_t>(fw[v])));
      int infector = -1;
      for (const int* w = adj.begin(v); w != adj.end(v); ++w) {
        if (*w != v && state[*w] == kI && edge_class(v, *w) == cls && pick-- == 0) {
          infector = *w;
          break;
        }
      }
      for (int c = 0; c < nclass; ++c) pressure[c].set(v, 0);
      ++infected;
      log.events.push_back({t, EventKind::infection, v, infector});
      if (params.delta) {
        state[v] = kE;
        exposed.insert(v);
      } else {
        become_infectious(v);
      }
    } else if (x < r_inf[0] + r_inf[1] + r_act) {
      int v = exposed.pick(rng);
      exposed.erase(v);
      become_infectious(v);
      log.events.push_back({t, EventKind::activation, v, -1});
    } else {
      if (infectious.size() == 0) continue;
      int v = infectious.pick(rng);
      leave_infectious(v);
      log.events.push_back({t, EventKind::removal, v, -1});
    }
  }
  log.horizon = t;
  return log;
}

}  // namespace

EventLog simulate_sir(const Graph& g, const EpidemicParams& params, const std::vector<int>& initial_infected,
                      std::uint64_t seed, const SimOptions& opt) {
  return run(g, params, initial_infected, seed, opt, false);
}

EventLog simulate_household_sir(const Graph& g, const EpidemicParams& params,
                                const std::vector<int>& initial_infected, std::uint64_t seed,
                                const SimOptions& opt) {
  return run(g, params, initial_infected, seed, opt, true);
}

InfectionForest infection_tree(const EventLog& log) {
  const int n = log.population;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  InfectionForest f;
  f.parent.assign(n, -1);
  f.infection_time.assign(n, nan);
  f.removal_time.assign(n, nan);
  f.children.assign(n, {});
  for (int u : log.index_cases) {
    f.roots.push_back(u);
    f.infection_time[u] = 0.0;
  }
  for (const auto& e : log.events) {
    if (e.kind == EventKind::infection) {
      f.infection_time[e.actor] = e.time;
      f.parent[e.actor] = e.infector;
      if (e.infector >= 0) f.children[e.infector].push_back(e.actor);
    } else if (e.kind == EventKind::removal) {
      f.removal_time[e.actor] = e.time;
    }
  }
  return f;
}

}  // namespace epinet
