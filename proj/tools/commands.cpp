#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "epinet/branching.hpp"
#include "epinet/episim.hpp"
#include "epinet/graph.hpp"
#include "epinet/netstat.hpp"
#include "epinet/odelim.hpp"
#include "epinet/random.hpp"

namespace epinet::cli {

Format Common::fmt() const {
  if (format == "json") return Format::json;
  if (format == "text") return Format::text;
  return Format::csv;
}

namespace {

/// Writes to --out or stdout.
template <class F>
void with_output(const std::string& path, F f) {
  if (path.empty()) {
    f(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  f(out);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = std::stod(item, &used);
    if (used != item.size()) throw UsageError("bad number '" + item + "'");
    v.push_back(x);
  }
  return v;
}

Eigen::MatrixXd parse_matrix(const std::string& s) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(s);
  std::string row;
  while (std::getline(ss, row, ';')) rows.push_back(parse_list(row));
  if (rows.empty()) throw UsageError("empty matrix");
  Eigen::MatrixXd m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw UsageError("ragged matrix '" + s + "'");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()); }

int need_n(const std::optional<int>& n) {
  if (!n) throw UsageError("--n is required");
  if (*n <= 0) throw UsageError("--n must be positive");
  return *n;
}

Graph load_graph(const std::string& path, const std::string& attributes) {
  auto in = open_in(path);
  Graph g = read_edge_list(in);
  if (!attributes.empty()) {
    auto a = open_in(attributes);
    read_attributes(a, g);
  }
  return g;
}

Table key_values() { return Table{{"key", "value"}, {}}; }

}  // namespace

// ---------------------------------------------------------------- generate

void cmd_generate(const Common& c, const GenerateOptions& o) {
  GeneratorSpec spec;
  spec.seed = c.seed;
  if (o.family == "complete") {
    spec.family = family::Complete{need_n(o.n)};
  } else if (o.family == "er") {
    spec.family = family::ErdosRenyi{need_n(o.n), o.p};
  } else if (o.family == "sbm") {
    if (o.rho.empty() || o.pi.empty()) throw UsageError("sbm needs --rho and --pi");
    spec.family = family::Sbm{need_n(o.n), to_vector(parse_list(o.rho)), parse_matrix(o.pi)};
  } else if (o.family == "cm") {
    family::ConfigModel cm;
    if (!o.degrees_file.empty()) {
      auto in = open_in(o.degrees_file);
      for (int d; in >> d;) cm.degrees.push_back(d);
      cm.n = static_cast<int>(cm.degrees.size());
    } else {
      if (o.degree_dist.empty()) throw UsageError("cm needs --degree-dist or --degrees");
      cm.n = need_n(o.n);
      cm.distribution = parse_distribution(o.degree_dist);
    }
    spec.family = cm;
  } else {
    if (o.sizes.empty()) throw UsageError("household needs --sizes");
    int n = need_n(o.n);
    auto global = std::make_shared<GeneratorSpec>(GeneratorSpec{family::ErdosRenyi{n, o.global_p}, 0});
    spec.family = family::Household{n, parse_distribution(o.sizes), global};
  }
  Graph g = generate(spec);
  with_output(c.out, [&](std::ostream& out) {
    out << c.provenance.line() << '\n';
    write_edge_list(out, g);
  });
  if (!o.attributes.empty()) {
    std::ofstream a(o.attributes);
    if (!a) throw std::runtime_error("cannot write " + o.attributes);
    write_attributes(a, g);
  }
}

// ---------------------------------------------------------------- simulate

namespace {

struct ReplicaResult {
  std::uint64_t seed = 0;
  std::size_t final_size = 0;
  long peak = 0;
  StopReason stop = StopReason::extinct;
  MeasureTrajectory trajectory;
  double predicted_extinction = std::numeric_limits<double>::quiet_NaN();
};

const char* stop_name(StopReason s) {
  switch (s) {
    case StopReason::extinct: return "extinct";
    case StopReason::time_horizon: return "time_horizon";
    case StopReason::epsilon: return "epsilon";
    case StopReason::infection_cap: return "infection_cap";
  }
  return "?";
}

/// Peak of infected-not-removed (E and I together).
long peak_prevalence(const EventLog& log) {
  long cur = static_cast<long>(log.index_cases.size()), peak = cur;
  for (const auto& e : log.events) {
    if (e.kind == EventKind::infection) ++cur;
    else if (e.kind == EventKind::removal) --cur;
    peak = std::max(peak, cur);
  }
  return peak;
}

/// Extinction probability of the lineages of index cases with the given degrees.
double index_extinction(const std::vector<int>& degrees, double z, double lambda, double gamma) {
  double p = 1;
  for (int k : degrees) {
    // integral over the removal time, substituting u = exp(-gamma y)
    p *= boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double u) { return std::pow(z + std::pow(u, lambda / gamma) * (1 - z), k); }, 0.0, 1.0, 10, 1e-12);
  }
  return p;
}

void write_replica_files(const SimulateOptions& o, const Common& c, std::size_t r, const EventLog& log,
                         const MeasureTrajectory& tr) {
  if (o.out_dir.empty()) return;
  char name[64];
  std::snprintf(name, sizeof name, "traj_%04zu.csv", r);
  std::ofstream t(std::filesystem::path(o.out_dir) / name);
  if (!t) throw std::runtime_error("cannot write into " + o.out_dir);
  t << c.provenance.line() << '\n';
  write_trajectory(t, tr);
  if (o.events) {
    std::snprintf(name, sizeof name, "events_%04zu.csv", r);
    std::ofstream e(std::filesystem::path(o.out_dir) / name);
    e << c.provenance.line() << '\n';
    write_event_log(e, log);
  }
}

}  // namespace

void cmd_simulate(const Common& c, const SimulateOptions& o) {
  if (o.online == !o.graph.empty()) throw UsageError("give exactly one of --graph and --online");
  if (o.initial < 1) throw UsageError("--initial must be >= 1");
  EpidemicParams params{o.lambda, o.gamma, o.delta, o.lambda_h};
  params.validate();
  if (!o.out_dir.empty()) std::filesystem::create_directories(o.out_dir);

  std::vector<double> times;
  for (int k = 0; k <= o.steps; ++k) times.push_back(o.t_end * k / o.steps);

  Graph g;
  std::vector<int> degrees;  // online population
  std::optional<DegreeDistribution> law;
  int n = 0;
  if (o.online) {
    if (o.degree_dist.empty()) throw UsageError("--online needs --degree-dist");
    n = need_n(o.n);
    law = parse_distribution(o.degree_dist);
    degrees = sample_degrees(n, *law, replica_seed(c.seed, 0xD0));
  } else {
    g = load_graph(o.graph, o.attributes);
    n = g.vertex_count();
    law = o.degree_dist.empty() ? empirical_degree_distribution(g) : parse_distribution(o.degree_dist);
  }
  if (o.initial > n) throw UsageError("--initial exceeds the population");
  const bool household = o.lambda_h.has_value();
  double z = std::numeric_limits<double>::quiet_NaN();
  if (!household && law->mean() > 0) z = extinction_probability(*law, o.lambda, o.gamma);

  auto run = [&](std::size_t r) {
    ReplicaResult res;
    res.seed = replica_seed(c.seed, 2 * r);
    EventLog log;
    std::vector<int> index_degrees;
    if (o.online) {
      DegreeMeasure s, is;
      for (int u = 0; u < n; ++u) (u < o.initial ? is : s).add(degrees[u], 1);
      for (int u = 0; u < o.initial; ++u) index_degrees.push_back(degrees[u]);
      OnlineOptions opt;
      opt.t_max = o.t_max;
      opt.epsilon = o.epsilon;
      opt.sample_times = times;
      auto out = simulate_cm_online(s, is, {}, params, res.seed, opt);
      log = std::move(out.log);
      res.trajectory = std::move(out.trajectory);
    } else {
      std::vector<int> all(n);
      std::iota(all.begin(), all.end(), 0);
      Rng pick(replica_seed(c.seed, 2 * r + 1));
      epinet::shuffle(all.begin(), all.end(), pick);
      std::vector<int> initial(all.begin(), all.begin() + o.initial);
      SimOptions opt{o.t_max, 0};
      log = household ? simulate_household_sir(g, params, initial, res.seed, opt)
                      : simulate_sir(g, params, initial, res.seed, opt);
      res.trajectory = track_measures(log, g, times);
      auto deg = g.degrees();
      for (int u : initial) index_degrees.push_back(deg[u]);
    }
    if (!std::isnan(z)) res.predicted_extinction = index_extinction(index_degrees, z, o.lambda, o.gamma);
    res.final_size = log.total_infected();
    res.peak = peak_prevalence(log);
    res.stop = log.stop;
    write_replica_files(o, c, r, log, res.trajectory);
    return res;
  };

  const auto R = static_cast<std::size_t>(o.replicas);
  std::vector<ReplicaResult> results(R);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex fail_mu;
  auto worker = [&] {
    for (std::size_t r; (r = next++) < R;) {
      try {
        results[r] = run(r);
      } catch (...) {
        std::lock_guard lk(fail_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::min<int>(c.jobs, o.replicas); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  const double major_cut = o.major_fraction * n;
  std::size_t major = 0;
  double mean_final = 0, mean_major = 0, predicted = 0;
  std::vector<std::vector<double>> mean_traj(times.size(), std::vector<double>(6, 0.0));
  for (const auto& r : results) {
    mean_final += static_cast<double>(r.final_size);
    predicted += r.predicted_extinction;
    if (static_cast<double>(r.final_size) >= major_cut) {
      ++major;
      mean_major += static_cast<double>(r.final_size);
      const auto& t = r.trajectory;
      for (std::size_t k = 0; k < t.size(); ++k) {
        double v[6] = {double(t.S[k]), double(t.I[k]), double(t.R[k]), double(t.NS[k]), double(t.NIS[k]), double(t.NRS[k])};
        for (int j = 0; j < 6; ++j) mean_traj[k][j] += v[j];
      }
    }
  }

  if (!o.out_dir.empty()) {
    std::ofstream rep(std::filesystem::path(o.out_dir) / "replicas.csv");
    rep << c.provenance.line() << "\nreplica,seed,final_size,peak_infected,major,stop\n";
    for (std::size_t r = 0; r < R; ++r)
      rep << r << ',' << results[r].seed << ',' << results[r].final_size << ',' << results[r].peak << ','
          << (static_cast<double>(results[r].final_size) >= major_cut) << ',' << stop_name(results[r].stop) << '\n';
    if (major > 0) {
      std::ofstream m(std::filesystem::path(o.out_dir) / "mean_major.csv");
      m << c.provenance.line() << "\nt,S,I,R,NS,NIS,NRS\n" << std::setprecision(12);
      for (std::size_t k = 0; k < times.size(); ++k) {
        m << times[k];
        for (double v : mean_traj[k]) m << ',' << v / static_cast<double>(major);
        m << '\n';
      }
    }
  }

  Table t = key_values();
  t.add({"population", fmt(n)});
  t.add({"replicas", fmt(o.replicas)});
  t.add({"index_cases", fmt(o.initial)});
  t.add({"mean_final_size", fmt(mean_final / static_cast<double>(R))});
  t.add({"major_outbreaks", fmt(major)});
  t.add({"mean_final_size_major", fmt(major ? mean_major / static_cast<double>(major) : std::nan(""))});
  t.add({"extinction_fraction", fmt(1.0 - static_cast<double>(major) / static_cast<double>(R))});
  if (!std::isnan(z)) {
    t.add({"branching_z", fmt(z)});
    t.add({"branching_extinction_given_index", fmt(predicted / static_cast<double>(R))});
  }
  with_output(c.out, [&](std::ostream& out) { write_table(out, t, c.provenance, c.fmt()); });
}

// ---------------------------------------------------------------- ode

void cmd_ode(const Common& c, const OdeOptions& o) {
  auto grid = uniform_grid(o.t_end, o.steps);
  Table t;
  auto from_ode = [&](const OdeTrajectory& tr) {
    t.columns = {"t"};
    for (const auto& name : tr.names) t.columns.push_back(name);
    for (std::size_t k = 0; k < tr.size(); ++k) {
      std::vector<std::string> row{fmt(tr.t[k])};
      for (Eigen::Index j = 0; j < tr.values.cols(); ++j) row.push_back(fmt(tr.values(k, j)));
      t.add(row);
    }
  };
  auto need_law = [&] {
    if (o.degree_dist.empty()) throw UsageError("--system " + o.system + " needs --degree-dist");
    return parse_distribution(o.degree_dist);
  };
  if (o.system == "km") {
    from_ode(integrate_km(o.lambda_prime, o.gamma, o.s0, o.i0, grid));
  } else if (o.system == "mc") {
    double C = o.C ? *o.C : (o.degree_dist.empty() ? throw UsageError("mc needs --C or --degree-dist") : need_law().mean());
    from_ode(integrate_moment_closure(o.lambda, o.gamma, o.s0, o.i0, o.itilde0.value_or(C * o.i0), C, grid));
  } else {
    auto p = need_law();
    DegreeMeasure h = p.measure();
    h *= 1 - o.i0;
    // infectives drawn from the same law with all stubs towards susceptibles
    const double pI = o.p_i0.value_or(o.i0 / (1 - o.i0));
    const double pS = o.p_s0.value_or(1 - pI);
    if (o.system == "volz") {
      from_ode(integrate_volz(h, o.lambda, o.gamma, pI, pS, o.i0, grid));
    } else if (o.system == "miller") {
      MillerStart ms;
      ms.p_r0 = std::max(0.0, 1 - pI - pS);
      from_ode(integrate_miller(h, o.lambda, o.gamma, 1.0, pI, o.i0, 0.0, grid, ms));
    } else {
      const int K = p.max_degree();
      Eigen::VectorXd S0 = h.dense(K);
      Eigen::VectorXd IS0 = p.measure().dense(K) * o.i0;
      // rescale infectious stubs to N^IS = pI N^S
      const Eigen::VectorXd deg = Eigen::VectorXd::LinSpaced(K + 1, 0, K);
      IS0 *= pI * deg.dot(S0) / deg.dot(IS0);
      auto bn = integrate_ball_neal(S0, IS0, Eigen::VectorXd::Zero(K + 1), o.lambda, o.gamma, K, grid);
      t.columns = {"t", "s", "i", "r", "theta", "NS", "NIS", "NRS"};
      for (std::size_t k = 0; k < bn.size(); ++k) {
        double s = bn.S.row(k).sum(), i = bn.IS.row(k).sum();
        t.add({fmt(bn.t[k]), fmt(s), fmt(i), fmt(1 - s - i), fmt(bn.theta[k]), fmt(bn.NS(k)), fmt(bn.NIS(k)),
               fmt(bn.NRS(k))});
      }
    }
  }
  with_output(c.out, [&](std::ostream& out) { write_table(out, t, c.provenance, c.fmt()); });
}

// ---------------------------------------------------------------- indicators

namespace {

InfectiousPeriod parse_period(const std::string& s, double gamma) {
  if (s == "exp") return InfectiousPeriod::exponential(gamma);
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts[0] == "gamma" && parts.size() == 3) return InfectiousPeriod::gamma(std::stod(parts[1]), std::stod(parts[2]));
  if (parts[0] == "det" && parts.size() == 2) return InfectiousPeriod::deterministic(std::stod(parts[1]));
  throw UsageError("bad --period '" + s + "'");
}

}  // namespace

void cmd_indicators(const Common& c, const IndicatorOptions& o) {
  IndicatorSet s;
  double kappa = std::nan("");
  if (o.model == "complete") {
    s = indicators(model::Complete{o.lambda, o.gamma});
  } else if (o.model == "cm") {
    if (o.kappa) kappa = *o.kappa;
    else if (!o.degree_dist.empty()) kappa = mean_excess_degree(parse_distribution(o.degree_dist));
    else throw UsageError("cm needs --kappa or --degree-dist");
    s = indicators(model::Cm{kappa, o.lambda, o.gamma});
  } else {
    if (o.Lambda.empty() || o.rho.empty()) throw UsageError("sbm needs --Lambda and --rho");
    s = indicators(model::Sbm{parse_matrix(o.Lambda), to_vector(parse_list(o.rho)), o.gamma});
  }
  Table t{{"model", "alpha", "R0", "vc", "vc_needed", "ratio_R0", "ratio_vc"}, {}};
  std::string rr = "", rv = "";
  const double alpha = o.alpha.value_or(s.alpha);
  if (o.model == "cm" && alpha > 0 && kappa > 1) {
    Ratios r = o.period == "exp" ? overestimation_ratios(alpha, o.gamma, kappa)
                                 : overestimation_ratios(alpha, kappa, parse_period(o.period, o.gamma));
    rr = fmt(r.r0);
    rv = fmt(r.vc);
  }
  t.add({o.model, fmt(s.alpha), fmt(s.r0), fmt(s.vc), fmt(s.vc_needed), rr, rv});
  with_output(c.out, [&](std::ostream& out) { write_table(out, t, c.provenance, c.fmt()); });
}

// ---------------------------------------------------------------- analyze

namespace {

/// KL threshold whose estimate moves least against its neighbours, among thresholds with
/// at least max(50, n/100) vertices at or above them.
int flattest_k0(const TailFit& f, const DegreeDistribution& p, int n) {
  const double need = std::max(50.0, n / 100.0);
  std::vector<std::pair<double, double>> ok;
  for (auto [k, a] : f.scan) {
    double tail = 0;
    for (auto [d, m] : p.measure().entries())
      if (d >= k) tail += m * n;
    if (tail >= need) ok.emplace_back(k, a);
  }
  if (ok.size() < 3) return ok.empty() ? 1 : static_cast<int>(ok.front().first);
  std::size_t best = 1;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < ok.size(); ++i) {
    double d = std::abs(ok[i].second - ok[i - 1].second) + std::abs(ok[i].second - ok[i + 1].second);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return static_cast<int>(ok[best].first);
}

}  // namespace

void cmd_analyze(const Common& c, const AnalyzeOptions& o) {
  Graph full = simplify(load_graph(o.graph, o.attributes));
  auto comps = components(full);
  Table t = key_values();
  t.add({"vertices", fmt(full.vertex_count())});
  t.add({"edges", fmt(full.edge_count())});
  t.add({"components", fmt(comps.size())});
  t.add({"largest_component", fmt(comps[0].size())});
  t.add({"second_component", fmt(comps.size() > 1 ? comps[1].size() : std::size_t{0})});
  t.add({"has_giant", fmt(has_giant(comps))});
  Graph g = o.whole ? full : induced_subgraph(full, comps[0]);

  auto geo = geodesic_stats(g);
  t.add({"harmonic_mean_distance", fmt(geo.harmonic_mean)});
  t.add({"arithmetic_mean_distance", fmt(geo.arithmetic_mean)});
  t.add({"connected_mean_distance", fmt(geo.connected_mean)});
  t.add({"diameter", fmt(geo.diameter)});
  auto loc = local_structure(g);
  t.add({"clustering_coefficient", fmt(loc.clustering_coefficient)});
  t.add({"triangles", fmt(static_cast<long long>(loc.triangle_count))});
  t.add({"articulation_points", fmt(loc.articulation_points.size())});

  auto attribute_mixing = [&](const std::vector<int>& labels, const std::string& name) {
    if (labels.empty()) return;
    std::vector<int> l(labels);
    if (std::any_of(l.begin(), l.end(), [](int x) { return x < 0; })) return;
    if (g.edge_count() == 0) return;
    auto m = mixing(g, Partition::canonical(l));
    t.add({"mixing_Q_" + name, fmt(m.Q)});
    t.add({"assortativity_" + name, fmt(m.r)});
  };
  attribute_mixing(g.types, "type");
  attribute_mixing(g.households, "household");

  if (g.edge_count() >= 2) {
    auto part = cluster_modularity(g, replica_seed(c.seed, 1));
    double q = modularity(g, part);
    t.add({"modularity", fmt(q)});
    t.add({"clusters", fmt(part.J)});
    if (o.null_samples > 0) {
      auto null = null_modularity(g, o.null_samples, replica_seed(c.seed, 2));
      std::size_t above = std::count_if(null.q.begin(), null.q.end(), [&](double x) { return x >= q; });
      t.add({"null_mean", fmt(null.mean)});
      t.add({"null_max", fmt(null.max)});
      t.add({"null_pvalue", fmt((1.0 + above) / (1.0 + null.q.size()))});
      t.add({"null_exhausted", fmt(null.any_exhausted)});
    }
  }

  auto deg = full.degrees();
  auto p = empirical_degree_distribution(full);
  if (p.max_degree() >= 1) {
    auto scan = fit_power_law_kl(p, 1, true);
    int k0 = o.k0 ? *o.k0 : flattest_k0(scan, p, full.vertex_count());
    auto kl = fit_power_law_kl(p, k0, false);
    t.add({"kl_k0", fmt(kl.k0)});
    t.add({"kl_alpha", fmt(kl.alpha_hat)});
    t.add({"kl_divergence", fmt(kl.divergence)});
    t.add({"kl_degenerate", fmt(kl.degenerate)});
    try {
      auto h = hill_plateau(deg);
      t.add({"hill_m", fmt(h.m)});
      t.add({"hill_k0", fmt(h.k0)});
      t.add({"hill_alpha", fmt(h.alpha_hat)});
    } catch (const std::domain_error&) {
      t.add({"hill_alpha", "nan"});
    }
    t.add({"alpha_giant_component_threshold", fmt(3.4788)});
    t.add({"alpha_connected_threshold", fmt(2.0)});
  }

  if (!o.coords.empty()) {
    auto l = layout(g, o.delta, replica_seed(c.seed, 3), o.layout_iters);
    std::ofstream out(o.coords);
    if (!out) throw std::runtime_error("cannot write " + o.coords);
    out << c.provenance.line() << "\nvertex,x,y\n" << std::setprecision(10);
    std::vector<int> ids = o.whole ? std::vector<int>() : comps[0];
    for (int v = 0; v < g.vertex_count(); ++v)
      out << (o.whole ? v : ids[v]) << ',' << l.z(v, 0) << ',' << l.z(v, 1) << '\n';
  }
  with_output(c.out, [&](std::ostream& out) { write_table(out, t, c.provenance, c.fmt()); });
}

// ---------------------------------------------------------------- compare

namespace {

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  int col(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  }
};

Csv read_csv(const std::string& path) {
  auto in = open_in(path);
  Csv csv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (csv.header.empty()) {
      csv.header = cells;
      continue;
    }
    if (cells.size() != csv.header.size()) throw std::runtime_error(path + " line " + std::to_string(lineno) + ": wrong cell count");
    std::vector<double> row;
    for (const auto& cell : cells) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error(path + " line " + std::to_string(lineno) + ": not a number '" + cell + "'");
      }
    }
    csv.rows.push_back(row);
  }
  if (csv.col("t") < 0) throw std::runtime_error(path + ": no t column");
  return csv;
}

double interpolate(const Csv& c, int col, double t) {
  const int tc = c.col("t");
  auto it = std::lower_bound(c.rows.begin(), c.rows.end(), t, [&](const auto& r, double x) { return r[tc] < x; });
  if (it == c.rows.begin()) return (*it)[col];
  if (it == c.rows.end()) return c.rows.back()[col];
  const auto& b = *it;
  const auto& a = *(it - 1);
  double w = (t - a[tc]) / (b[tc] - a[tc]);
  return a[col] + w * (b[col] - a[col]);
}

}  // namespace

void cmd_compare(const Common& c, const CompareOptions& o) {
  Csv sim = read_csv(o.sim), ode = read_csv(o.ode);
  if (sim.rows.empty() || ode.rows.empty()) throw std::runtime_error("empty trajectory");
  const int ts = sim.col("t"), to = ode.col("t");
  const double lo = std::max(sim.rows.front()[ts], ode.rows.front()[to]);
  const double hi = std::min(sim.rows.back()[ts], ode.rows.back()[to]);
  if (lo > hi) throw std::runtime_error("disjoint time ranges");
  // Count columns are rescaled by the population S + I + R of each row when present.
  const int cs = sim.col("S"), ci = sim.col("I"), cr = sim.col("R");
  auto population = [&](const std::vector<double>& r) { return cs >= 0 && ci >= 0 && cr >= 0 ? r[cs] + r[ci] + r[cr] : 1.0; };
  Table t{{"sim", "ode", "sup", "l2", "pass"}, {}};
  std::stringstream ss(o.columns);
  for (std::string pair; std::getline(ss, pair, ',');) {
    auto colon = pair.find(':');
    if (colon == std::string::npos) throw UsageError("--columns expects sim:ode pairs");
    std::string a = pair.substr(0, colon), b = pair.substr(colon + 1);
    int ca = sim.col(a), cb = ode.col(b);
    if (ca < 0 || cb < 0) throw std::runtime_error("missing column " + (ca < 0 ? a : b));
    const bool counts = a == "S" || a == "I" || a == "R" || a == "NS" || a == "NIS" || a == "NRS";
    double sup = 0, integral = 0, span = 0, prev_t = 0, prev_d2 = 0;
    bool first = true;
    for (const auto& r : sim.rows) {
      double tt = r[ts];
      if (tt < lo || tt > hi) continue;
      double x = counts ? r[ca] / population(r) : r[ca];
      double d = x - interpolate(ode, cb, tt);
      sup = std::max(sup, std::abs(d));
      if (!first) {
        integral += 0.5 * (d * d + prev_d2) * (tt - prev_t);
        span += tt - prev_t;
      }
      first = false;
      prev_t = tt;
      prev_d2 = d * d;
    }
    double l2 = span > 0 ? std::sqrt(integral / span) : std::sqrt(prev_d2);
    t.add({a, b, fmt(sup), fmt(l2), fmt(sup <= o.threshold)});
  }
  with_output(c.out, [&](std::ostream& out) { write_table(out, t, c.provenance, c.fmt()); });
}

}  // namespace epinet::cli
