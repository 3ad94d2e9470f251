// Finite measures on the nonnegative integers and degree distributions.
#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <map>
#include <string>

namespace epinet {

/// Finite nonnegative measure on {0, 1, 2, ...} with finite support.
class DegreeMeasure {
 public:
  using Map = std::map<int, double>;

  DegreeMeasure() = default;
  explicit DegreeMeasure(Map entries);
  static DegreeMeasure dirac(int k, double mass = 1.0);

  const Map& entries() const { return entries_; }
  double operator()(int k) const;
  bool empty() const { return entries_.empty(); }
  int max_degree() const { return entries_.empty() ? -1 : entries_.rbegin()->first; }

  /// <mu, f>
  template <class F>
  double integrate(F f) const {
    double s = 0;
    for (const auto& [k, m] : entries_) s += f(k) * m;
    return s;
  }
  double total() const;
  /// <mu, chi^q>
  double moment(int q) const;

  DegreeMeasure& add(int k, double mass);
  /// Throws if more mass is removed than present (beyond 1e-12 slack).
  DegreeMeasure& remove(int k, double mass);
  DegreeMeasure& operator+=(const DegreeMeasure& o);
  DegreeMeasure& operator*=(double c);

  bool integer_valued(double tol = 1e-9) const;
  /// Masses at 0..kmax as a dense vector (mass above kmax dropped).
  Eigen::VectorXd dense(int kmax) const;
  static DegreeMeasure from_dense(const Eigen::Ref<const Eigen::VectorXd>& v);

  bool operator==(const DegreeMeasure&) const = default;

 private:
  Map entries_;
};

DegreeMeasure operator+(DegreeMeasure a, const DegreeMeasure& b);
DegreeMeasure operator*(double c, DegreeMeasure a);

/// Probability measure with cached mean and variance.
class DegreeDistribution {
 public:
  DegreeDistribution() = default;
  /// Requires total mass 1 within 1e-12.
  explicit DegreeDistribution(DegreeMeasure m);
  /// Rescales any nonzero finite measure to mass 1.
  static DegreeDistribution normalized(const DegreeMeasure& m);

  const DegreeMeasure& measure() const { return mu_; }
  double operator()(int k) const { return mu_(k); }
  double mean() const { return mean_; }
  double variance() const { return var_; }
  int max_degree() const { return mu_.max_degree(); }

 private:
  DegreeMeasure mu_;
  double mean_ = 0, var_ = 0;
};

// Parametric families, truncated where the remaining tail mass drops below 1e-12.
DegreeDistribution poisson_distribution(double a);
/// p_k = a (1-a)^k, k >= 0.
DegreeDistribution geometric_distribution(double a);
DegreeDistribution binomial_distribution(int n, double p);
/// p_k proportional to k^-alpha on kmin..kmax.
DegreeDistribution power_law_distribution(double alpha, int kmin, int kmax);
DegreeDistribution regular_distribution(int d);

/// g(z), g'(z) or g''(z) of a measure (not necessarily normalized).
double pgf(const DegreeMeasure& mu, double z, int order = 0);
double pgf_eval(const DegreeDistribution& p, double z, int order = 0);

DegreeDistribution size_biased(const DegreeDistribution& p);
/// kappa = g''(1) / g'(1)
double mean_excess_degree(const DegreeDistribution& p);

/// `degree mass` pairs, one per line; '#' starts a comment.
DegreeMeasure read_measure(std::istream& in);
void write_measure(std::ostream& out, const DegreeMeasure& mu);

/// Family strings: poisson:a, geometric:a, binomial:n:p, powerlaw:alpha:kmin:kmax,
/// regular:d, or file:<path> (measures text format, normalized).
DegreeDistribution parse_distribution(const std::string& text);

}  // namespace epinet
