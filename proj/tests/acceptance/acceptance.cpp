// Acceptance run: one PASS/FAIL/SKIP line per criterion, exit status 1 on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <algorithm>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "epinet/branching.hpp"
#include "epinet/episim.hpp"
#include "epinet/graph.hpp"
#include "epinet/netstat.hpp"
#include "epinet/odelim.hpp"
#include "epinet/random.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace epinet;

namespace {

struct Outcome {
  enum { pass, fail, skip } status = pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome verdict(bool ok, std::string detail) { return {ok ? Outcome::pass : Outcome::fail, std::move(detail)}; }

// ------------------------------------------------------------------ 1

Outcome table_identities() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.05, 10);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    double lambda = u(rng), gamma = u(rng), kappa = u(rng);
    auto s = indicators(model::Cm{kappa, lambda, gamma});
    double scale = std::max(1.0, s.r0);
    worst = std::max(worst, std::abs(s.r0 - (gamma + s.alpha) / (gamma + s.alpha / kappa)) / scale);
    if (s.r0 > 1) {
      double a = s.alpha;
      worst = std::max(worst, std::abs(s.vc - (kappa - 1) / kappa * a / (a + gamma)));
      worst = std::max(worst, std::abs(s.vc - (1 - (lambda + gamma) / (kappa * lambda))));
    }
    auto c = indicators(model::Complete{lambda, gamma});
    Eigen::MatrixXd L(1, 1);
    L(0, 0) = lambda;
    auto k1 = indicators(model::Sbm{L, Eigen::VectorXd::Ones(1), gamma});
    worst = std::max({worst, std::abs(c.r0 - k1.r0), std::abs(c.alpha - k1.alpha), std::abs(c.vc - k1.vc)});
  }
  return verdict(worst < 1e-10, fmt("max discrepancy %.2e (tol 1e-10)", worst));
}

// ------------------------------------------------------------------ 2

Outcome poisson_limit() {
  const int n = 10000;
  auto target = poisson_distribution(5);
  double tv = 0;
  for (std::uint64_t s = 0; s < 20; ++s) tv += total_variation(empirical_degree_distribution(erdos_renyi(n, 5.0 / n, s)), target);
  tv /= 20;
  return verdict(tv < 0.02, fmt("mean TV %.4f (tol 0.02)", tv));
}

// ------------------------------------------------------------------ 3

Outcome extinction() {
  auto p = poisson_distribution(5);
  double z = extinction_probability(p, 1, 1);
  auto mc = oracle::birth_death_extinction(oracle::poisson_pmf(5, p.max_degree()), 1, 1, 100000, 303);
  double dev = std::abs(z - mc.p) / mc.se;
  double sub = extinction_probability(poisson_distribution(1.5), 1, 1);
  return verdict(dev < 3 && sub == 1.0,
                 fmt("z=%.5f MC=%.5f (%.2f se, tol 3); subcritical z=%.17g", z, mc.p, dev, sub));
}

// ------------------------------------------------------------------ 4, 6

struct OnlineBatch {
  std::vector<double> times;
  Eigen::VectorXd s, i;    ///< mean rescaled trajectory over non-extinct runs
  double final_size = 0;   ///< mean fraction ever infected, non-extinct runs
  int runs = 0;
};

/// Online CM runs with Poisson(5) degrees, lambda = gamma = 1 and 1% initial infectives,
/// until `wanted` runs reach 5% ever infected.
OnlineBatch online_batch(int n, int wanted, std::uint64_t seed, const std::vector<double>& times) {
  OnlineBatch b;
  b.times = times;
  b.s = Eigen::VectorXd::Zero(times.size());
  b.i = Eigen::VectorXd::Zero(times.size());
  auto p = poisson_distribution(5);
  const int i0 = n / 100;
  for (std::uint64_t r = 0; b.runs < wanted; ++r) {
    if (r > 10u * wanted) throw std::runtime_error("too many extinct runs");
    auto deg = sample_degrees(n, p, replica_seed(seed, 2 * r));
    DegreeMeasure ms, mi;
    for (int u = 0; u < n; ++u) (u < i0 ? mi : ms).add(deg[u], 1);
    OnlineOptions opt;
    opt.sample_times = times;
    auto out = simulate_cm_online(ms, mi, {}, {1, 1}, replica_seed(seed, 2 * r + 1), opt);
    double fs = static_cast<double>(out.log.total_infected()) / n;
    if (fs < 0.05) continue;
    ++b.runs;
    b.final_size += fs;
    for (std::size_t k = 0; k < times.size(); ++k) {
      b.s(k) += static_cast<double>(out.trajectory.S[k]) / n;
      b.i(k) += static_cast<double>(out.trajectory.I[k]) / n;
    }
  }
  b.s /= b.runs;
  b.i /= b.runs;
  b.final_size /= b.runs;
  return b;
}

OdeTrajectory volz_reference(const std::vector<double>& grid) {
  DegreeMeasure h = poisson_distribution(5).measure();
  h *= 0.99;
  return integrate_volz(h, 1, 1, 0.01 / 0.99, 1 - 0.01 / 0.99, 0.01, grid);
}

Outcome volz_convergence() {
  auto grid = uniform_grid(15, 150);
  auto v = volz_reference(grid);
  std::string detail;
  std::vector<double> d;
  for (int n : {1000, 10000, 100000}) {
    auto b = online_batch(n, 20, 404 + n, grid);
    d.push_back(std::max((b.s - v.col("s")).cwiseAbs().maxCoeff(), (b.i - v.col("i")).cwiseAbs().maxCoeff()));
    detail += fmt("N=%d sup %.4f; ", n, d.back());
  }
  bool ok = d[1] < 0.05 && d[0] > d[1] && d[1] > d[2];
  return verdict(ok, detail + "tol 0.05 at N=1e4, decreasing");
}

Outcome final_size() {
  auto mc = integrate_moment_closure(1, 1, 0.99, 0.01, 0.05, 5, uniform_grid(200, 400));
  double integrated = 0.99 - mc.col("s")(400);
  double root = final_size_moment_closure(1, 1, 0.99, 0.05, 5);
  auto grid = uniform_grid(60, 600);
  auto v = volz_reference(grid);
  double volz = 1 - v.col("s")(600);
  auto b = online_batch(10000, 20, 606, grid);
  double rel = std::abs(b.final_size - volz) / volz;
  bool ok = std::abs(integrated - root) < 1e-4 && rel < 0.02;
  return verdict(ok, fmt("closure |%.6f-%.6f| (tol 1e-4); online %.4f vs Volz %.4f, rel %.4f (tol 0.02)", integrated,
                         root, b.final_size, volz, rel));
}

// ------------------------------------------------------------------ 5

Outcome ode_web() {
  DegreeMeasure h = poisson_distribution(5).measure();
  h *= 0.95;
  const double pI = 0.05, pS = 0.95, i0 = 0.05;
  auto grid = uniform_grid(20, 400);
  auto v = integrate_volz(h, 1, 1, pI, pS, i0, grid);
  auto m = integrate_miller(h, 1, 1, 1.0, pI, i0, 0, grid);
  double miller = 0;
  for (const char* c : {"s", "i", "r", "theta"}) miller = std::max(miller, (v.col(c) - m.col(c)).cwiseAbs().maxCoeff());

  const int K = h.max_degree();
  Eigen::VectorXd IS0 = Eigen::VectorXd::Zero(K + 1);
  IS0(4) = 0.0125;  // 5% infectives with N^IS = p_I N^S
  IS0(5) = 0.0375;
  const double ns0 = pgf(h, 1.0, 1);
  const double scale = pI * ns0 / (4 * 0.0125 + 5 * 0.0375);
  IS0 *= scale;
  auto vb = integrate_volz(h, 1, 1, pI, pS, IS0.sum(), grid);
  auto bn = integrate_ball_neal(h.dense(K), IS0, Eigen::VectorXd::Zero(K + 1), 1, 1, K, grid);
  double marg = 0, edges = 0;
  for (std::size_t k = 0; k < bn.size(); ++k) {
    marg = std::max({marg, std::abs(bn.IS.row(k).sum() - vb.values(k, 1)), std::abs(bn.S.row(k).sum() - vb.values(k, 0))});
    edges = std::max({edges, std::abs(bn.NS(k) - vb.col("NS")(k)), std::abs(bn.NIS(k) - vb.col("NIS")(k)),
                      std::abs(bn.NRS(k) - vb.col("NRS")(k))});
  }
  auto g30 = uniform_grid(30, 300);
  auto km = integrate_km(2, 1, 0.99, 0.01, g30);
  auto mc = integrate_moment_closure(2.0 / 1000, 1, 0.99, 0.01, 0.01 * 1000, 1000, g30);
  double closure = std::max((mc.col("s") - km.col("s")).cwiseAbs().maxCoeff(), (mc.col("i") - km.col("i")).cwiseAbs().maxCoeff());
  bool ok = miller < 1e-6 && marg < 1e-4 && edges < 1e-6 && closure < 1e-2;
  return verdict(ok, fmt("Miller-Volz %.1e (1e-6), Ball-Neal marginals %.1e (1e-4), edge counts %.1e (1e-6), closure-KM %.1e (1e-2)",
                         miller, marg, edges, closure));
}

// ------------------------------------------------------------------ 7

Outcome ratios() {
  auto r = overestimation_ratios(1.0, 1.0, 20.0);
  bool ok = std::abs(r.r0 - 1.05) < 1e-12 && std::abs(r.vc - (1 + 1.0 / 19)) < 1e-12;
  std::string detail = fmt("Markov %.12f, %.12f; ", r.r0, r.vc);
  for (double a : {0.5, 1.0, 2.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double sd : {1.5, 1.0, 0.5, 0.0}) {
      auto g = overestimation_ratios(a, 20.0, sd > 0 ? InfectiousPeriod::gamma(1, sd) : InfectiousPeriod::deterministic(1));
      ok = ok && g.r0 < prev;
      prev = g.r0;
    }
    detail += fmt("alpha=%.1f ordered; ", a);
  }
  return verdict(ok, detail + "tol 1e-12");
}

// ------------------------------------------------------------------ 8

Outcome post_epsilon() {
  auto p = poisson_distribution(5);
  auto r = post_epsilon_degree_law(p, 0.1);
  auto sim = oracle::post_epsilon_simulation(oracle::poisson_pmf(5, p.max_degree()), 100000, 0.1, 808);
  double tv = 0;
  for (int k = 0; k <= p.max_degree(); ++k) tv += std::abs(sim[k] - r.law(k));
  tv /= 2;
  bool ok = tv < 0.03 && std::abs(r.z + std::log(0.9) / 5) < 1e-10 && std::isfinite(r.fifth_moment);
  return verdict(ok, fmt("z=%.10f, TV %.4f (tol 0.03), fifth moment %.1f", r.z, tv, r.fifth_moment));
}

// ------------------------------------------------------------------ 9

Outcome estimators() {
  // CM with Poisson(5) degrees, lambda = gamma = 1: kappa = 5, R0 = 2.5, alpha = 3
  const int n = 100000;
  const double kappa = 5, lambda = 1, gamma = 1;
  const auto theory = indicators(model::Cm{kappa, lambda, gamma});
  double r0_ratio = 0, alpha_ratio = 0, conv_ratio = 0;
  int runs = 0;
  for (std::uint64_t r = 0; runs < 50; ++r) {
    if (r > 500) throw std::runtime_error("too many extinct runs");
    Graph g = configuration_model(n, poisson_distribution(5), replica_seed(909, 2 * r));
    Rng pick(replica_seed(909, 2 * r + 1));
    auto log = simulate_sir(g, {lambda, gamma}, {static_cast<int>(below(pick, n))}, replica_seed(909, 3 * r + 7));
    if (log.total_infected() < 0.05 * n) continue;
    ++runs;
    // early phase: from 100 to 1% of the population ever infected
    double t_lo = 0, t_hi = 0;
    std::size_t cum = 1;
    for (const auto& e : log.events) {
      if (e.kind != EventKind::infection) continue;
      ++cum;
      if (cum == 100) t_lo = e.time;
      if (cum == static_cast<std::size_t>(n / 100)) {
        t_hi = e.time;
        break;
      }
    }
    double r0 = estimate_r0_offspring(infection_tree(log), t_hi);
    double a = estimate_alpha(log, t_lo, t_hi).alpha;
    r0_ratio += r0 / theory.r0;
    alpha_ratio += a / theory.alpha;
    conv_ratio += (gamma + a) / (gamma + a / kappa) / theory.r0;
  }
  r0_ratio /= runs;
  alpha_ratio /= runs;
  conv_ratio /= runs;
  bool ok = std::abs(r0_ratio - 1) < 0.10 && std::abs(alpha_ratio - 1) < 0.15 && std::abs(conv_ratio - 1) < 0.15;
  return verdict(ok, fmt("mean ratios: offspring R0 %.4f (tol 0.10), alpha %.4f and R0 from alpha %.4f (tol 0.15)",
                         r0_ratio, alpha_ratio, conv_ratio));
}

// ------------------------------------------------------------------ 10

Outcome clustering_significance() {
  std::vector<int> truth;
  Graph planted = fixture::planted(4, 100, 0.1, 0.005, 1010, &truth);
  double q = modularity(planted, cluster_modularity(planted, 1));
  auto null = null_modularity(planted, 100, 2);
  int inside = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    Graph g = simplify(configuration_model(400, poisson_distribution(5), replica_seed(1011, t)));
    double qo = modularity(g, cluster_modularity(g, replica_seed(1012, t)));
    auto nm = null_modularity(g, 100, replica_seed(1013, t));
    if (qo >= nm.min && qo <= nm.max) ++inside;
  }
  return verdict(q > null.max && inside >= 18,
                 fmt("planted Q %.4f vs null max %.4f; CM inside null range %d/20 (need 18)", q, null.max, inside));
}

// ------------------------------------------------------------------ 11

Outcome tail_fit() {
  auto sample = fixture::zeta_sample(3.0, 10000, 1111);
  auto h = hill_plateau(sample);
  DegreeMeasure counts;
  for (int k : sample) counts.add(k, 1);
  auto kl = fit_power_law_kl(DegreeDistribution::normalized(counts), 1, false);
  bool ok = h.alpha_hat >= 2.7 && h.alpha_hat <= 3.3 && kl.alpha_hat >= 2.7 && kl.alpha_hat <= 3.3 &&
            std::abs(h.alpha_hat - kl.alpha_hat) < 0.3;
  return verdict(ok, fmt("Hill %.4f, KL %.4f (both in [2.7, 3.3], gap < 0.3)", h.alpha_hat, kl.alpha_hat));
}

// ------------------------------------------------------------------ 12

Outcome contact_tracing_graph() {
  const char* path = std::getenv("EPINET_CONTACT_GRAPH");
  if (!path) return {Outcome::skip, "set EPINET_CONTACT_GRAPH (and EPINET_CONTACT_ATTRIBUTES) to run"};
  std::ifstream in(path);
  if (!in) return {Outcome::fail, std::string("cannot open ") + path};
  Graph full = simplify(read_edge_list(in));
  const char* attr = std::getenv("EPINET_CONTACT_ATTRIBUTES");
  if (attr) {
    std::ifstream a(attr);
    read_attributes(a, full);
  }
  auto comps = components(full);
  Graph g = induced_subgraph(full, comps[0]);
  auto geo = geodesic_stats(g);
  auto loc = local_structure(g);
  auto part = cluster_modularity(g, 1);
  double q = modularity(g, part);
  auto null = null_modularity(g, 100, 2);
  auto kl = fit_power_law_kl(empirical_degree_distribution(full), 7, false);
  bool ok = comps[0].size() == 2386 && std::abs(geo.harmonic_mean - 10.24) < 0.005 && geo.diameter == 26 &&
            loc.articulation_points.size() == 1157 && loc.triangle_count == 177 && q >= 0.80 && part.J >= 25 &&
            part.J <= 50 && null.max < 0.78 && std::abs(kl.alpha_hat - 3.06) <= 0.05;
  std::string detail = fmt("giant %zu, harmonic %.3f, diameter %d, articulation %zu, triangles %lld, Q %.4f, J %d, "
                           "null max %.4f, KL alpha %.3f",
                           comps[0].size(), geo.harmonic_mean, geo.diameter, loc.articulation_points.size(),
                           static_cast<long long>(loc.triangle_count), q, part.J, null.max, kl.alpha_hat);
  if (attr) {
    auto mx = mixing(g, Partition::canonical(g.types));
    ok = ok && std::abs(mx.r - 0.0512) < 5e-4;
    detail += fmt(", r %.4f", mx.r);
  } else {
    ok = false;
    detail += ", r not checked (no attribute file)";
  }
  return verdict(ok, detail);
}

// ------------------------------------------------------------------ 13

/// Every seeded operation serialised to one string.
std::string stochastic_outputs(std::uint64_t seed) {
  std::ostringstream out;
  out.precision(17);
  Graph er = erdos_renyi(300, 0.02, seed);
  write_edge_list(out, er);
  Eigen::MatrixXd pi(2, 2);
  pi << 0.1, 0.01, 0.01, 0.1;
  write_edge_list(out, stochastic_block_model(200, Eigen::Vector2d(0.5, 0.5), pi, seed));
  write_edge_list(out, configuration_model(300, poisson_distribution(4), seed));
  auto hh = std::make_shared<GeneratorSpec>(GeneratorSpec{family::ErdosRenyi{200, 0.01}, 0});
  Graph house = generate({family::Household{200, regular_distribution(3), hh}, seed});
  write_attributes(out, house);
  auto log = simulate_sir(er, {1.5, 1}, {0, 1}, seed);
  write_event_log(out, log);
  write_event_log(out, simulate_sir(er, {1.5, 1, 2.0}, {0}, seed));
  write_event_log(out, simulate_household_sir(house, {0.5, 1, std::nullopt, 3.0}, {0}, seed));
  DegreeMeasure ms, mi;
  for (int k : sample_degrees(1000, poisson_distribution(5), seed)) ms.add(k, 1);
  mi.add(5, 10);
  OnlineOptions opt;
  opt.sample_times = uniform_grid(10, 20);
  write_trajectory(out, simulate_cm_online(ms, mi, {}, {1, 1}, seed, opt).trajectory);
  write_trajectory(out, track_measures(log, er, uniform_grid(10, 20)));
  auto part = cluster_modularity(er, seed);
  for (int c : part.cluster) out << c << ' ';
  for (double q : null_modularity(er, 3, seed).q) out << q << ' ';
  write_edge_list(out, rewire(er, 500, seed));
  auto lay = layout(er, 1.0, seed, 50);
  out << lay.z << '\n';
  return out.str();
}

Outcome determinism() {
  std::string a = stochastic_outputs(1313), b = stochastic_outputs(1313), c = stochastic_outputs(1314);
  return verdict(a == b && a != c, fmt("%zu bytes identical across two runs; other seed differs: %s", a.size(),
                                       a != c ? "yes" : "no"));
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "indicator identities", 1, table_identities},
      {2, "Poisson degree limit", 10, poisson_limit},
      {3, "extinction probability", 60, extinction},
      {4, "Volz convergence", 300, volz_convergence},
      {5, "ODE consistency web", 30, ode_web},
      {6, "final size", 120, final_size},
      {7, "overestimation ratios", 5, ratios},
      {8, "post-epsilon degree law", 30, post_epsilon},
      {9, "estimators", 300, estimators},
      {10, "clustering significance", 300, clustering_significance},
      {11, "tail fitting", 5, tail_fit},
      {12, "contact-tracing graph", 600, contact_tracing_graph},
      {13, "determinism", 60, determinism},
  };
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Outcome::fail, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.status == Outcome::pass && secs > c.budget_s) {
      o.status = Outcome::fail;
      o.detail += fmt("; over the %.0f s budget", c.budget_s);
    }
    const char* tag = o.status == Outcome::pass ? "PASS" : o.status == Outcome::fail ? "FAIL" : "SKIP";
    std::printf("%s %2d %s (%.1f s): %s\n", tag, c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
    failures += o.status == Outcome::fail;
  }
  return failures ? 1 : 0;
}
