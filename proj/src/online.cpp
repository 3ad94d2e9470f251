#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "epinet/episim.hpp"
#include "epinet/fenwick.hpp"
#include "epinet/random.hpp"

namespace epinet {

namespace {

std::vector<std::pair<int, long>> atoms(const DegreeMeasure& mu, const char* name) {
  if (!mu.integer_valued(1e-9)) throw std::invalid_argument(std::string(name) + " must be integer-valued");
  std::vector<std::pair<int, long>> out;
  for (const auto& [k, m] : mu.entries()) out.emplace_back(k, std::lround(m));
  return out;
}

struct Census {
  std::vector<long> s, is, rs;  // individuals per degree
  void move(std::vector<long>& h, int from, int to) {
    if (from >= 0) --h[from];
    if (to >= 0) ++h[to];
  }
};

DegreeMeasure to_measure(const std::vector<long>& h) {
  DegreeMeasure::Map m;
  for (std::size_t k = 0; k < h.size(); ++k)
    if (h[k] > 0) m[static_cast<int>(k)] = static_cast<double>(h[k]);
  return DegreeMeasure(std::move(m));
}

}  // namespace

OnlineResult simulate_cm_online(const DegreeMeasure& mu_s0, const DegreeMeasure& mu_is0,
                                const DegreeMeasure& mu_rs0, const EpidemicParams& params, std::uint64_t seed,
                                const OnlineOptions& opt) {
  params.validate();
  auto as = atoms(mu_s0, "mu_S"), ai = atoms(mu_is0, "mu_IS"), ar = atoms(mu_rs0, "mu_RS");
  long n_s = 0, n_i = 0, n_r = 0;
  long long NS = 0, NIS = 0, NRS = 0;
  int kmax = 0;
  for (auto [k, c] : as) n_s += c, NS += static_cast<long long>(k) * c, kmax = std::max(kmax, k);
  for (auto [k, c] : ai) n_i += c, NIS += static_cast<long long>(k) * c, kmax = std::max(kmax, k);
  for (auto [k, c] : ar) n_r += c, NRS += static_cast<long long>(k) * c, kmax = std::max(kmax, k);
  if (NIS + NRS > NS)
    throw std::invalid_argument("initial measures inconsistent: more IS and RS stubs than susceptible stubs");
  const long n = n_s + n_i + n_r;
  if (n <= 0) throw std::invalid_argument("empty population");
  if (!std::is_sorted(opt.sample_times.begin(), opt.sample_times.end()))
    throw std::invalid_argument("sample times must be sorted");

  Rng rng(seed);
  Census census{std::vector<long>(kmax + 1, 0), std::vector<long>(kmax + 1, 0), std::vector<long>(kmax + 1, 0)};
  std::vector<std::vector<int>> bucket(kmax + 1);
  std::vector<int> slot(n, -1);  // position of a susceptible in its bucket
  Fenwick<long long> sweight(kmax + 1), isw(n), rsw(n);
  std::vector<int> infectives;
  std::vector<int> ipos(n, -1);

  EventLog log;
  log.population = static_cast<int>(n);
  int id = 0;
  for (auto [k, c] : as)
    for (long i = 0; i < c; ++i, ++id) {
      slot[id] = static_cast<int>(bucket[k].size());
      bucket[k].push_back(id);
      ++census.s[k];
    }
  for (int k = 0; k <= kmax; ++k) sweight.set(k, static_cast<long long>(k) * static_cast<long long>(bucket[k].size()));
  for (auto [k, c] : ai)
    for (long i = 0; i < c; ++i, ++id) {
      isw.set(id, k);
      ipos[id] = static_cast<int>(infectives.size());
      infectives.push_back(id);
      ++census.is[k];
      log.index_cases.push_back(id);
    }
  for (auto [k, c] : ar)
    for (long i = 0; i < c; ++i, ++id) {
      rsw.set(id, k);
      ++census.rs[k];
    }
  long removed = n_r;

  MeasureTrajectory tr;
  std::size_t next_sample = 0;
  auto record = [&](double ts, bool clamped) {
    tr.times.push_back(ts);
    tr.mu_s.push_back(to_measure(census.s));
    tr.mu_is.push_back(to_measure(census.is));
    tr.mu_rs.push_back(to_measure(census.rs));
    long s = n - static_cast<long>(infectives.size()) - removed;
    tr.S.push_back(s);
    tr.I.push_back(static_cast<long>(infectives.size()));
    tr.R.push_back(removed);
    tr.NS.push_back(sweight.total());
    tr.NIS.push_back(isw.total());
    tr.NRS.push_back(rsw.total());
    tr.clamped.push_back(clamped);
  };
  auto check = [&]() {
    long long a = 0, b = 0;
    for (int v : infectives) a += isw[v];
    for (int k = 0; k <= kmax; ++k) b += static_cast<long long>(k) * census.is[k];
    if (a != isw.total() || b != isw.total())
      throw std::logic_error("online simulator: N^IS bookkeeping mismatch");
  };
  auto set_is = [&](int v, long long d) {
    census.move(census.is, static_cast<int>(isw[v]), static_cast<int>(d));
    isw.set(v, d);
  };

  double t = 0;
  std::size_t infected = static_cast<std::size_t>(n_i);
  const double lambda = params.lambda, gamma = params.gamma;
  while (true) {
    if (infectives.empty()) {
      log.stop = StopReason::extinct;
      break;
    }
    if (opt.epsilon && static_cast<double>(isw.total()) < *opt.epsilon * static_cast<double>(n)) {
      log.stop = StopReason::epsilon;
      break;
    }
    if (opt.infection_cap && infected >= opt.infection_cap) {
      log.stop = StopReason::infection_cap;
      break;
    }
    const double r_inf = lambda * static_cast<double>(isw.total());
    const double r_rem = gamma * static_cast<double>(infectives.size());
    const double total = r_inf + r_rem;
    const double tn = t + exponential(rng, total);
    while (next_sample < opt.sample_times.size() && opt.sample_times[next_sample] < std::min(tn, opt.t_max))
      record(opt.sample_times[next_sample++], false);
    if (tn > opt.t_max) {
      t = opt.t_max;
      log.stop = StopReason::time_horizon;
      break;
    }
    if (tn == t && !log.events.empty()) log.tied.push_back(log.events.size());
    t = tn;
    if (uniform01(rng) * total < r_inf) {
      const long long ns_old = sweight.total(), nis_old = isw.total(), nrs_old = rsw.total();
      // Firing stub and its owner.
      int infector = static_cast<int>(isw.find(static_cast<long long>(below(rng, static_cast<std::uint64_t>(nis_old)))));
      set_is(infector, isw[infector] - 1);
      // New infective, chosen proportionally to k mu_S(k).
      int k = static_cast<int>(sweight.find(static_cast<long long>(below(rng, static_cast<std::uint64_t>(ns_old)))));
      auto& bk = bucket[k];
      int x = bk[below(rng, bk.size())];
      bk[slot[x]] = bk.back();
      slot[bk.back()] = slot[x];
      bk.pop_back();
      slot[x] = -1;
      sweight.add(k, -k);
      --census.s[k];
      // Types of the other k-1 stubs: hypergeometric over the N^S - 1 other susceptible stubs.
      long long pool_i = nis_old - 1, pool_r = nrs_old, pool_s = ns_old - nis_old - nrs_old;
      long long j = 0, l = 0, m = 0;
      for (int d = 0; d < k - 1; ++d) {
        long long left = pool_i + pool_r + pool_s;
        if (left <= 0) throw std::logic_error("online simulator: stub pools exhausted");
        long long r = static_cast<long long>(below(rng, static_cast<std::uint64_t>(left)));
        if (r < pool_i) ++j, --pool_i;
        else if (r < pool_i + pool_r) ++l, --pool_r;
        else ++m, --pool_s;
      }
      for (long long a = 0; a < j; ++a) {
        int w = static_cast<int>(isw.find(static_cast<long long>(below(rng, static_cast<std::uint64_t>(isw.total())))));
        set_is(w, isw[w] - 1);
      }
      for (long long a = 0; a < l; ++a) {
        int w = static_cast<int>(rsw.find(static_cast<long long>(below(rng, static_cast<std::uint64_t>(rsw.total())))));
        census.move(census.rs, static_cast<int>(rsw[w]), static_cast<int>(rsw[w] - 1));
        rsw.add(w, -1);
      }
      // The m stubs left in the susceptible-susceptible pool may pair among themselves.
      long long unresolved = m, pool = ns_old - nis_old - nrs_old, loops = 0;
      while (unresolved > 0 && pool > 1) {
        if (unresolved > 1 && below(rng, static_cast<std::uint64_t>(pool - 1)) < static_cast<std::uint64_t>(unresolved - 1)) {
          ++loops;
          unresolved -= 2;
        } else {
          unresolved -= 1;
        }
        pool -= 2;
      }
      ipos[x] = static_cast<int>(infectives.size());
      infectives.push_back(x);
      census.move(census.is, -1, static_cast<int>(m - 2 * loops));
      isw.set(x, m - 2 * loops);
      ++infected;
      log.events.push_back({t, EventKind::infection, x, infector});
    } else {
      int v = infectives[below(rng, infectives.size())];
      int last = infectives.back();
      infectives[ipos[v]] = last;
      ipos[last] = ipos[v];
      infectives.pop_back();
      ipos[v] = -1;
      long long d = isw[v];
      census.move(census.is, static_cast<int>(d), -1);
      isw.set(v, 0);
      census.move(census.rs, -1, static_cast<int>(d));
      rsw.set(v, d);
      ++removed;
      log.events.push_back({t, EventKind::removal, v, -1});
    }
    if (opt.check_bookkeeping) check();
  }
  log.horizon = t;
  while (next_sample < opt.sample_times.size()) {
    double ts = opt.sample_times[next_sample++];
    record(ts, ts > t);
  }
  return {std::move(log), std::move(tr)};
}

}  // namespace epinet
