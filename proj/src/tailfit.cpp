#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "epinet/netstat.hpp"

namespace epinet {

namespace {

constexpr double kAlphaLo = 1.0 + 1e-6;
constexpr double kAlphaHi = 20.0;

/// sum_{k >= k0} k^-alpha
double tail_zeta(double alpha, int k0) {
  // Direct partial sum plus the Euler-Maclaurin remainder beyond K.
  const int K = k0 + 200;
  double s = 0;
  for (int k = k0; k < K; ++k) s += std::pow(k, -alpha);
  const double a = alpha, x = K;
  s += std::pow(x, 1 - a) / (a - 1) + 0.5 * std::pow(x, -a) + a / 12.0 * std::pow(x, -a - 1) -
       a * (a + 1) * (a + 2) / 720.0 * std::pow(x, -a - 3);
  return s;
}

double tail_mass(const DegreeDistribution& p, int k0) {
  double c = 0;
  for (auto [k, m] : p.measure().entries())
    if (k >= k0) c += m;
  return c;
}

TailFit fit_one(const DegreeDistribution& p, int k0) {
  TailFit f;
  f.method = TailFit::Method::kl;
  f.k0 = k0;
  auto [a, d] = boost::math::tools::brent_find_minima([&](double al) { return kl_divergence(p, k0, al); }, kAlphaLo,
                                                      kAlphaHi, 40);
  f.alpha_hat = a;
  f.divergence = d;
  f.degenerate = a > kAlphaHi - 1e-3;
  return f;
}

}  // namespace

double kl_divergence(const DegreeDistribution& p, int k0, double alpha) {
  if (k0 < 1) throw std::invalid_argument("kl: threshold must be >= 1");
  if (k0 > p.max_degree()) throw std::domain_error("divergence identically zero");
  const double c = tail_mass(p, k0);
  const double C = tail_zeta(alpha, k0);
  double s = 0;
  for (auto [k, m] : p.measure().entries()) {
    if (k < k0 || m <= 0) continue;
    const double q = m / c;
    s += q * (std::log(C * q) + alpha * std::log(static_cast<double>(k)));
  }
  return s;
}

TailFit fit_power_law_kl(const DegreeDistribution& p, int k0, bool with_scan) {
  if (k0 < 1) throw std::invalid_argument("kl: threshold must be >= 1");
  if (k0 > p.max_degree()) throw std::domain_error("divergence identically zero");
  if (tail_mass(p, k0) <= 0) throw std::domain_error("kl: no mass at or above the threshold");
  TailFit f = fit_one(p, k0);
  if (with_scan) {
    for (auto [k, m] : p.measure().entries()) {
      if (k < 1 || m <= 0) continue;
      f.scan.emplace_back(k, fit_one(p, k).alpha_hat);
    }
  }
  return f;
}

namespace {

/// Descending sort and prefix sums of log k.
struct SortedSample {
  std::vector<int> k;
  std::vector<double> log_prefix;  // log_prefix[m] = sum_{j < m} log k_(j)
  explicit SortedSample(std::vector<int> d) : k(std::move(d)) {
    std::sort(k.begin(), k.end(), std::greater<>());
    log_prefix.assign(k.size() + 1, 0);
    for (std::size_t j = 0; j < k.size(); ++j)
      log_prefix[j + 1] = log_prefix[j] + (k[j] > 0 ? std::log(static_cast<double>(k[j])) : 0.0);
  }
  double alpha(std::size_t m) const {
    const double u = k[m - 1] - 0.5;
    return 1.0 + static_cast<double>(m) / (log_prefix[m] - static_cast<double>(m) * std::log(u));
  }
};

std::vector<std::pair<double, double>> scan_of(const SortedSample& s) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t m = 1; m <= s.k.size(); ++m) {
    if (s.k[m - 1] < 1) break;
    if (m < s.k.size() && s.k[m] == s.k[m - 1]) continue;  // only at tie boundaries
    out.emplace_back(static_cast<double>(m), s.alpha(m));
  }
  return out;
}

}  // namespace

TailFit hill(std::vector<int> degrees, std::size_t m, bool with_scan) {
  if (m < 1 || m > degrees.size()) throw std::invalid_argument("hill: need 1 <= m <= n");
  SortedSample s(std::move(degrees));
  if (s.k[m - 1] < 1) throw std::invalid_argument("hill: k_(m) must be >= 1");
  TailFit f;
  f.method = TailFit::Method::hill;
  f.m = m;
  f.k0 = s.k[m - 1];
  f.alpha_hat = s.alpha(m);
  f.degenerate = s.k[0] == s.k[m - 1];
  if (with_scan) f.scan = scan_of(s);
  return f;
}

std::vector<std::pair<double, double>> hill_scan(std::vector<int> degrees) {
  return scan_of(SortedSample(std::move(degrees)));
}

TailFit hill_plateau(const std::vector<int>& degrees, std::size_t min_tail) {
  if (degrees.empty()) throw std::invalid_argument("hill: empty sample");
  if (min_tail == 0) min_tail = std::max<std::size_t>(50, degrees.size() / 100);
  auto scan = hill_scan(degrees);
  std::vector<std::pair<double, double>> ok;
  for (auto& pt : scan)
    if (pt.first >= static_cast<double>(min_tail)) ok.push_back(pt);
  if (ok.empty()) throw std::domain_error("hill: no threshold with enough tail points");
  std::size_t best = ok.size() - 1;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < ok.size(); ++i) {
    double d = std::abs(ok[i].second - ok[i - 1].second) + std::abs(ok[i].second - ok[i + 1].second);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return hill(degrees, static_cast<std::size_t>(ok[best].first), true);
}

}  // namespace epinet
