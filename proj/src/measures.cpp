#include "epinet/measures.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace epinet {

namespace {

void check_entry(int k, double m) {
  if (k < 0) throw std::invalid_argument("negative degree " + std::to_string(k));
  if (!(m >= 0) || !std::isfinite(m))
    throw std::invalid_argument("mass at degree " + std::to_string(k) + " must be finite and >= 0");
}

constexpr double kTail = 1e-12;

DegreeDistribution from_pmf(const std::vector<double>& pmf) {
  DegreeMeasure::Map m;
  for (std::size_t k = 0; k < pmf.size(); ++k)
    if (pmf[k] > 0) m[static_cast<int>(k)] = pmf[k];
  return DegreeDistribution::normalized(DegreeMeasure(std::move(m)));
}

}  // namespace

DegreeMeasure::DegreeMeasure(Map entries) {
  for (const auto& [k, m] : entries) {
    check_entry(k, m);
    if (m > 0) entries_[k] = m;
  }
}

DegreeMeasure DegreeMeasure::dirac(int k, double mass) {
  DegreeMeasure mu;
  mu.add(k, mass);
  return mu;
}

double DegreeMeasure::operator()(int k) const {
  auto it = entries_.find(k);
  return it == entries_.end() ? 0.0 : it->second;
}

double DegreeMeasure::total() const {
  return integrate([](int) { return 1.0; });
}

double DegreeMeasure::moment(int q) const {
  return integrate([q](int k) { return std::pow(static_cast<double>(k), q); });
}

DegreeMeasure& DegreeMeasure::add(int k, double mass) {
  check_entry(k, mass);
  if (mass > 0) entries_[k] += mass;
  return *this;
}

DegreeMeasure& DegreeMeasure::remove(int k, double mass) {
  check_entry(k, mass);
  if (mass == 0) return *this;
  auto it = entries_.find(k);
  double have = it == entries_.end() ? 0.0 : it->second;
  if (mass > have + 1e-12)
    throw std::domain_error("cannot remove mass " + std::to_string(mass) + " at degree " +
                            std::to_string(k) + " (present " + std::to_string(have) + ")");
  if (have - mass <= 1e-12)
    entries_.erase(it);
  else
    it->second = have - mass;
  return *this;
}

DegreeMeasure& DegreeMeasure::operator+=(const DegreeMeasure& o) {
  for (const auto& [k, m] : o.entries_) entries_[k] += m;
  return *this;
}

DegreeMeasure& DegreeMeasure::operator*=(double c) {
  if (!(c >= 0)) throw std::invalid_argument("negative scale factor");
  if (c == 0) {
    entries_.clear();
    return *this;
  }
  for (auto& [k, m] : entries_) m *= c;
  return *this;
}

bool DegreeMeasure::integer_valued(double tol) const {
  for (const auto& [k, m] : entries_)
    if (std::abs(m - std::round(m)) > tol) return false;
  return true;
}

Eigen::VectorXd DegreeMeasure::dense(int kmax) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(kmax + 1);
  for (const auto& [k, m] : entries_)
    if (k <= kmax) v(k) = m;
  return v;
}

DegreeMeasure DegreeMeasure::from_dense(const Eigen::Ref<const Eigen::VectorXd>& v) {
  Map m;
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (v(k) > 0) m[static_cast<int>(k)] = v(k);
  return DegreeMeasure(std::move(m));
}

DegreeMeasure operator+(DegreeMeasure a, const DegreeMeasure& b) { return a += b; }
DegreeMeasure operator*(double c, DegreeMeasure a) { return a *= c; }

DegreeDistribution::DegreeDistribution(DegreeMeasure m) : mu_(std::move(m)) {
  if (std::abs(mu_.total() - 1.0) > 1e-12)
    throw std::invalid_argument("degree distribution must have total mass 1 (got " +
                                std::to_string(mu_.total()) + ")");
  mean_ = mu_.moment(1);
  var_ = mu_.moment(2) - mean_ * mean_;
  if (var_ < 0) var_ = 0;
}

DegreeDistribution DegreeDistribution::normalized(const DegreeMeasure& m) {
  double t = m.total();
  if (!(t > 0)) throw std::invalid_argument("cannot normalize a zero measure");
  DegreeMeasure c = m;
  c *= 1.0 / t;
  // Absorb rounding so the total is 1 to machine precision.
  double resid = 1.0 - c.total();
  if (resid != 0.0 && !c.empty()) {
    auto big = c.entries().begin();
    for (auto it = c.entries().begin(); it != c.entries().end(); ++it)
      if (it->second > big->second) big = it;
    int k = big->first;
    double v = big->second + resid;
    DegreeMeasure::Map e = c.entries();
    e[k] = v;
    c = DegreeMeasure(std::move(e));
  }
  return DegreeDistribution(std::move(c));
}

DegreeDistribution poisson_distribution(double a) {
  if (!(a >= 0) || !std::isfinite(a)) throw std::invalid_argument("poisson: parameter must be >= 0");
  if (a == 0) return regular_distribution(0);
  std::vector<double> pmf;
  double cum = 0;
  for (int k = 0;; ++k) {
    double lp = -a + k * std::log(a) - std::lgamma(k + 1.0);
    double p = std::exp(lp);
    pmf.push_back(p);
    cum += p;
    if (k > a && 1.0 - cum < kTail) break;
  }
  return from_pmf(pmf);
}

DegreeDistribution geometric_distribution(double a) {
  if (!(a > 0 && a <= 1)) throw std::invalid_argument("geometric: parameter must be in (0,1]");
  std::vector<double> pmf;
  double tail = 1.0;  // P(K >= k)
  for (int k = 0; tail >= kTail; ++k) {
    pmf.push_back(a * std::pow(1 - a, k));
    tail = std::pow(1 - a, k + 1);
  }
  return from_pmf(pmf);
}

DegreeDistribution binomial_distribution(int n, double p) {
  if (n < 0 || !(p >= 0 && p <= 1)) throw std::invalid_argument("binomial: bad parameters");
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    if (p == 0) { pmf[k] = k == 0; continue; }
    if (p == 1) { pmf[k] = k == n; continue; }
    pmf[k] = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                      k * std::log(p) + (n - k) * std::log1p(-p));
  }
  return from_pmf(pmf);
}

DegreeDistribution power_law_distribution(double alpha, int kmin, int kmax) {
  if (kmin < 1 || kmax < kmin) throw std::invalid_argument("power law: need 1 <= kmin <= kmax");
  std::vector<double> pmf(static_cast<std::size_t>(kmax) + 1, 0.0);
  for (int k = kmin; k <= kmax; ++k) pmf[k] = std::pow(static_cast<double>(k), -alpha);
  return from_pmf(pmf);
}

DegreeDistribution regular_distribution(int d) {
  return DegreeDistribution(DegreeMeasure::dirac(d, 1.0));
}

double pgf(const DegreeMeasure& mu, double z, int order) {
  if (order < 0 || order > 2) throw std::invalid_argument("pgf: order must be 0, 1 or 2");
  if (!(z >= 0 && z <= 1)) throw std::invalid_argument("pgf: z must lie in [0,1]");
  double s = 0;
  for (const auto& [k, m] : mu.entries()) {
    if (k < order) continue;
    double c = order == 0 ? 1.0 : order == 1 ? k : static_cast<double>(k) * (k - 1);
    int e = k - order;
    s += m * c * (e == 0 ? 1.0 : std::pow(z, e));
  }
  return s;
}

double pgf_eval(const DegreeDistribution& p, double z, int order) {
  if (order == 0 && z == 1.0) return 1.0;
  return pgf(p.measure(), z, order);
}

DegreeDistribution size_biased(const DegreeDistribution& p) {
  if (!(p.mean() > 0)) throw std::domain_error("size-biasing undefined: zero mean degree");
  DegreeMeasure::Map q;
  for (const auto& [k, m] : p.measure().entries())
    if (k > 0) q[k] = k * m / p.mean();
  return DegreeDistribution::normalized(DegreeMeasure(std::move(q)));
}

double mean_excess_degree(const DegreeDistribution& p) {
  if (!(p.mean() > 0)) throw std::domain_error("mean excess degree undefined: zero mean degree");
  return pgf(p.measure(), 1.0, 2) / pgf(p.measure(), 1.0, 1);
}

DegreeMeasure read_measure(std::istream& in) {
  DegreeMeasure mu;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long k;
    double m;
    std::string first;
    if (!(ls >> first)) continue;  // blank
    ls.clear();
    ls.seekg(0);
    if (!(ls >> k) || !(ls >> m)) throw std::runtime_error("measure line " + std::to_string(lineno) + ": expected `degree mass`");
    std::string extra;
    if (ls >> extra) throw std::runtime_error("measure line " + std::to_string(lineno) + ": trailing text");
    if (k < 0 || k > std::numeric_limits<int>::max())
      throw std::runtime_error("measure line " + std::to_string(lineno) + ": bad degree");
    mu.add(static_cast<int>(k), m);
  }
  return mu;
}

void write_measure(std::ostream& out, const DegreeMeasure& mu) {
  auto old = out.precision(17);
  for (const auto& [k, m] : mu.entries()) out << k << ' ' << m << '\n';
  out.precision(old);
}

DegreeDistribution parse_distribution(const std::string& text) {
  std::vector<std::string> parts;
  {
    std::string cur;
    for (char c : text) {
      if (c == ':' && !(parts.size() == 1 && parts[0] == "file")) {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    parts.push_back(cur);
  }
  auto num = [&](std::size_t i) {
    if (i >= parts.size()) throw std::invalid_argument("distribution '" + text + "': missing parameter");
    std::size_t used = 0;
    double v = std::stod(parts[i], &used);
    if (used != parts[i].size()) throw std::invalid_argument("distribution '" + text + "': bad number");
    return v;
  };
  const std::string& f = parts[0];
  if (f == "poisson") return poisson_distribution(num(1));
  if (f == "geometric") return geometric_distribution(num(1));
  if (f == "binomial") return binomial_distribution(static_cast<int>(num(1)), num(2));
  if (f == "powerlaw") return power_law_distribution(num(1), static_cast<int>(num(2)), static_cast<int>(num(3)));
  if (f == "regular") return regular_distribution(static_cast<int>(num(1)));
  if (f == "file") {
    if (parts.size() < 2) throw std::invalid_argument("file: needs a path");
    std::ifstream in(parts[1]);
    if (!in) throw std::runtime_error("cannot open " + parts[1]);
    return DegreeDistribution::normalized(read_measure(in));
  }
  throw std::invalid_argument("unknown distribution family '" + f + "'");
}

}  // namespace epinet
