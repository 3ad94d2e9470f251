#include "epinet/branching.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace epinet {

namespace {

using boost::math::quadrature::gauss_kronrod;

IndicatorSet finish(double alpha, double r0) {
  IndicatorSet s{alpha, r0, 0.0, r0 > 1};
  if (r0 > 1) s.vc = 1.0 - 1.0 / r0;
  return s;
}

void check_rates(double lambda, double gamma) {
  if (!(gamma > 0)) throw std::invalid_argument("gamma must be > 0");
  if (!(lambda >= 0)) throw std::invalid_argument("lambda must be >= 0");
}

// Root of a decreasing function f on (lo, hi), both finite and bracketing.
template <class F>
double bracketed_root(F f, double lo, double hi) {
  boost::uintmax_t iters = 500;
  auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

IndicatorSet indicators(const model::Complete& m) {
  check_rates(m.lambda, m.gamma);
  return finish(m.lambda - m.gamma, m.lambda / m.gamma);
}

IndicatorSet indicators(const model::Cm& m) {
  check_rates(m.lambda, m.gamma);
  if (!(m.kappa > 0)) throw std::invalid_argument("kappa must be > 0");
  const double alpha = (m.kappa - 1) * m.lambda - m.gamma;
  const double r0 = m.kappa * m.lambda / (m.lambda + m.gamma);
  IndicatorSet s = finish(alpha, r0);
  if (r0 > 1) s.vc = 1.0 - (m.lambda + m.gamma) / (m.kappa * m.lambda);
  return s;
}

IndicatorSet indicators(const model::Sbm& m) {
  if (!(m.gamma > 0)) throw std::invalid_argument("gamma must be > 0");
  if (m.Lambda.rows() != m.Lambda.cols()) throw std::invalid_argument("Lambda must be square");
  if (m.rho.size() != m.Lambda.rows()) throw std::invalid_argument("rho and Lambda sizes differ");
  if ((m.Lambda.array() < 0).any()) throw std::invalid_argument("Lambda must be nonnegative");
  if ((m.rho.array() < 0).any() || std::abs(m.rho.sum() - 1) > 1e-9)
    throw std::invalid_argument("rho must be a distribution");
  // Next-generation matrix (lambda_ij rho_j) / gamma.
  Eigen::MatrixXd M = (m.Lambda.array().rowwise() * m.rho.transpose().array()).matrix() / m.gamma;
  const double rho_m = spectral_radius(M);
  return finish(m.gamma * (rho_m - 1), rho_m);
}

InfectiousPeriod InfectiousPeriod::exponential(double rate) {
  if (!(rate > 0)) throw std::invalid_argument("exponential period: rate must be > 0");
  InfectiousPeriod p;
  p.family_ = Family::exponential;
  p.mean_ = 1.0 / rate;
  p.sd_ = 1.0 / rate;
  return p;
}

InfectiousPeriod InfectiousPeriod::gamma(double mean, double sd) {
  if (!(mean > 0) || !(sd >= 0)) throw std::invalid_argument("gamma period: need mean > 0, sd >= 0");
  if (sd == 0) return deterministic(mean);
  InfectiousPeriod p;
  p.family_ = Family::gamma;
  p.mean_ = mean;
  p.sd_ = sd;
  return p;
}

InfectiousPeriod InfectiousPeriod::deterministic(double duration) {
  if (!(duration > 0)) throw std::invalid_argument("deterministic period: duration must be > 0");
  InfectiousPeriod p;
  p.family_ = Family::deterministic;
  p.mean_ = duration;
  p.sd_ = 0;
  return p;
}

double InfectiousPeriod::survival(double t) const {
  if (t < 0) return 1.0;
  switch (family_) {
    case Family::exponential: return std::exp(-t / mean_);
    case Family::deterministic: return t < mean_ ? 1.0 : 0.0;
    case Family::gamma: {
      const double shape = mean_ * mean_ / (sd_ * sd_), scale = sd_ * sd_ / mean_;
      return boost::math::gamma_q(shape, t / scale);
    }
  }
  return 0;
}

double InfectiousPeriod::decay_floor() const {
  switch (family_) {
    case Family::exponential: return -1.0 / mean_;
    case Family::deterministic: return -std::numeric_limits<double>::infinity();
    case Family::gamma: return -mean_ / (sd_ * sd_);  // -1/scale
  }
  return 0;
}

double InfectiousPeriod::discounted_survival(double s) const {
  if (!(s > decay_floor())) throw std::domain_error("discounted survival diverges at this rate");
  switch (family_) {
    case Family::exponential: return 1.0 / (s + 1.0 / mean_);
    case Family::deterministic: return s == 0 ? mean_ : -std::expm1(-s * mean_) / s;
    case Family::gamma: {
      // Upper limit where exp(-s t) survival(t) is below 1e-16 of its scale.
      const double shape = mean_ * mean_ / (sd_ * sd_), scale = sd_ * sd_ / mean_;
      const double decay = s + 1.0 / scale;  // asymptotic exponential rate of the integrand
      double T = std::max(mean_ + 60 * sd_, (40 + shape * std::log1p(shape)) / decay);
      auto f = [&](double t) { return std::exp(-s * t) * survival(t); };
      double err = 0;
      return gauss_kronrod<double, 61>::integrate(f, 0.0, T, 20, 1e-13, &err);
    }
  }
  return 0;
}

double extinction_probability(const DegreeDistribution& p, double lambda, double gamma) {
  check_rates(lambda, gamma);
  const double m = pgf_eval(p, 1.0, 1);
  if (!(m > 0)) throw std::domain_error("extinction probability: zero mean degree");
  const double kappa = mean_excess_degree(p);
  if (kappa * lambda / (lambda + gamma) <= 1) return 1.0;
  const double T = std::log(1e12) / gamma;
  auto F = [&](double z) {
    auto f = [&](double y) { return pgf_eval(p, z + std::exp(-lambda * y) * (1 - z), 1) * std::exp(-gamma * y); };
    double err = 0;
    return gamma / m * gauss_kronrod<double, 31>::integrate(f, 0.0, T, 15, 1e-14, &err);
  };
  double z = 0;
  for (int it = 0; it < 1000000; ++it) {
    double zn = std::min(F(z), 1.0);
    if (std::abs(zn - z) < 1e-12) return zn;
    z = zn;
  }
  throw std::runtime_error("extinction probability: fixed-point iteration did not converge");
}

GrowthRate growth_rate_general(double kappa, double lambda, const InfectiousPeriod& period) {
  if (!(kappa > 0) || !(lambda > 0)) throw std::invalid_argument("growth rate: need kappa > 0 and lambda > 0");
  GrowthRate g;
  g.r0 = kappa * lambda * period.discounted_survival(lambda);
  auto h = [&](double a) { return kappa * lambda * period.discounted_survival(a + lambda) - 1.0; };
  if (g.r0 == 1.0) return g;
  if (g.r0 > 1) {
    double hi = 1.0;
    while (h(hi) > 0) hi *= 2;
    g.alpha = bracketed_root(h, 0.0, hi);
  } else {
    g.subcritical = true;
    const double floor = period.decay_floor() - lambda;
    double lo = -1.0;
    if (std::isfinite(floor)) {
      lo = 0.5 * floor;
      while (h(lo) < 0 && floor - lo < 0) lo = 0.5 * (lo + floor);
    } else {
      while (h(lo) < 0) lo *= 2;
    }
    if (h(lo) < 0) throw std::runtime_error("growth rate: no negative root");
    g.alpha = bracketed_root(h, lo, 0.0);
  }
  return g;
}

Ratios overestimation_ratios(double alpha, double gamma, double kappa) {
  if (!(alpha > 0)) throw std::invalid_argument("overestimation ratios need alpha > 0");
  if (!(kappa > 1)) throw std::domain_error("control-effort ratio undefined for kappa <= 1");
  return {1.0 + alpha / (gamma * kappa), 1.0 + 1.0 / (kappa - 1.0)};
}

Ratios overestimation_ratios(double alpha, double kappa, const InfectiousPeriod& period) {
  if (!(alpha > 0)) throw std::invalid_argument("overestimation ratios need alpha > 0");
  if (!(kappa > 1)) throw std::domain_error("control-effort ratio undefined for kappa <= 1");
  // Homogeneous mixing: profile c * survival(t) with growth rate alpha.
  const double r_hom = period.mean() / period.discounted_survival(alpha);
  // Network: lambda solving kappa lambda D(alpha + lambda) = 1, then R0 = kappa lambda D(lambda).
  auto h = [&](double lam) { return kappa * lam * period.discounted_survival(alpha + lam) - 1.0; };
  double hi = 1.0;
  while (h(hi) < 0) hi *= 2;
  const double lam = bracketed_root([&](double x) { return -h(x); }, 0.0, hi);
  const double r_net = kappa * lam * period.discounted_survival(lam);
  return {r_hom / r_net, (1 - 1 / r_hom) / (1 - 1 / r_net)};
}

double seir_r0_from_alpha(double alpha_hat, double gamma, double delta) {
  if (!(gamma > 0) || !(delta > 0)) throw std::invalid_argument("gamma and delta must be > 0");
  return (1 + alpha_hat / delta) * (1 + alpha_hat / gamma);
}

AlphaEstimate estimate_alpha(const EventLog& log, double t0, double t1) {
  bool seir = std::any_of(log.events.begin(), log.events.end(),
                          [](const Event& e) { return e.kind == EventKind::activation; });
  const EventKind want = seir ? EventKind::activation : EventKind::infection;
  double cum = static_cast<double>(log.index_cases.size());
  std::vector<double> xs, ys;
  for (const auto& e : log.events) {
    if (e.kind != want) continue;
    cum += 1;
    if (e.time < t0 || e.time > t1) continue;
    xs.push_back(e.time);
    ys.push_back(std::log(cum));
  }
  if (xs.size() < 10) throw std::invalid_argument("estimate_alpha: fewer than 10 events in the window");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0)) throw std::invalid_argument("estimate_alpha: degenerate time window");
  AlphaEstimate a;
  a.alpha = sxy / sxx;
  double rss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - my - a.alpha * (xs[i] - mx);
    rss += r * r;
  }
  a.stderr_ = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
  a.events = xs.size();
  return a;
}

double estimate_r0_offspring(const InfectionForest& tree, double early_cutoff) {
  std::size_t cases = 0, offspring = 0;
  for (std::size_t u = 0; u < tree.parent.size(); ++u) {
    if (tree.parent[u] < 0) continue;  // index case or never infected
    if (!(tree.infection_time[u] <= early_cutoff)) continue;
    if (std::isnan(tree.removal_time[u])) continue;
    ++cases;
    offspring += tree.children[u].size();
  }
  if (cases < 10) throw std::invalid_argument("estimate_r0_offspring: fewer than 10 completed early cases");
  return static_cast<double>(offspring) / static_cast<double>(cases);
}

PostEpsilonLaw post_epsilon_degree_law(const DegreeDistribution& p, double eps) {
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("post-epsilon law: eps must lie in (0,1)");
  const double p0 = p(0);
  if (eps >= 1 - p0)
    throw std::domain_error("post-epsilon law: eps >= 1 - p_0; degree-0 individuals can never be reached, so a "
                            "fraction eps is unreachable");
  auto f = [&](double z) { return pgf_eval(p, 1 - z, 0) - (1 - eps); };
  double z = bracketed_root([&](double x) { return -f(x); }, 0.0, 1.0);
  DegreeMeasure::Map m;
  for (const auto& [k, pk] : p.measure().entries()) {
    double v = pk * std::pow(1 - z, k) / (1 - eps);
    if (v > 0) m[k] = v;
  }
  PostEpsilonLaw out{z, DegreeDistribution::normalized(DegreeMeasure(std::move(m))), 0};
  out.fifth_moment = out.law.measure().moment(5);
  return out;
}

}  // namespace epinet
