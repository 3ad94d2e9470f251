// Branching-process indicators: R0, growth rate, control effort, extinction.
#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "epinet/episim.hpp"
#include "epinet/measures.hpp"

namespace epinet {

struct IndicatorSet {
  double alpha = 0;
  double r0 = 0;
  double vc = 0;          ///< clamped to 0 when r0 <= 1
  bool vc_needed = true;  ///< false when r0 <= 1
};

namespace model {
struct Complete { double lambda, gamma; };
struct Cm { double kappa, lambda, gamma; };
/// Lambda(i, j): rate from a type-j infective to a type-i susceptible; rho: type fractions.
struct Sbm { Eigen::MatrixXd Lambda; Eigen::VectorXd rho; double gamma; };
}  // namespace model

IndicatorSet indicators(const model::Complete& m);
IndicatorSet indicators(const model::Cm& m);
IndicatorSet indicators(const model::Sbm& m);

/// Spectral radius of a nonnegative square matrix: power iteration, falling back to a
/// full eigen decomposition when the iteration stalls (reducible or periodic input).
template <class Derived>
typename Derived::Scalar spectral_radius(const Eigen::MatrixBase<Derived>& A, double tol = 1e-12) {
  using Scalar = typename Derived::Scalar;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (A.rows() != A.cols()) throw std::invalid_argument("spectral_radius: matrix must be square");
  const Eigen::Index n = A.rows();
  if (n == 0) return Scalar(0);
  Vec x = Vec::Constant(n, Scalar(1) / Scalar(n));
  Scalar est = 0;
  for (int it = 0; it < 10000; ++it) {
    Vec y = A * x;
    Scalar s = y.sum();
    if (s <= Scalar(0)) break;
    y /= s;
    if ((y - x).cwiseAbs().maxCoeff() < tol && std::abs(s - est) <= tol * std::max(Scalar(1), s)) return s;
    x = y;
    est = s;
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense = A;
  Eigen::EigenSolver<decltype(dense)> es(dense, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Law of the infectious period.
class InfectiousPeriod {
 public:
  enum class Family { exponential, gamma, deterministic };
  static InfectiousPeriod exponential(double rate);
  /// sd = 0 gives the deterministic law.
  static InfectiousPeriod gamma(double mean, double sd);
  static InfectiousPeriod deterministic(double duration);

  Family family() const { return family_; }
  double mean() const { return mean_; }
  double sd() const { return sd_; }
  double survival(double t) const;
  /// Integral of exp(-s t) times the survival function over [0, inf); Gauss-Kronrod for
  /// gamma laws, closed forms otherwise. Needs s > decay_floor().
  double discounted_survival(double s) const;
  /// Infimum of s for which discounted_survival is finite.
  double decay_floor() const;

 private:
  Family family_ = Family::exponential;
  double mean_ = 1, sd_ = 1;
};

/// Smallest root of the extinction fixed-point equation; exactly 1 when R0 <= 1.
double extinction_probability(const DegreeDistribution& p, double lambda, double gamma);

struct GrowthRate {
  double r0 = 0;
  double alpha = 0;
  bool subcritical = false;
};
/// Infectivity profile kappa lambda exp(-lambda t) survival(t).
GrowthRate growth_rate_general(double kappa, double lambda, const InfectiousPeriod& period);

struct Ratios {
  double r0 = 1;
  double vc = 1;
};
/// Markov SIR: 1 + alpha/(gamma kappa) and 1 + 1/(kappa - 1).
Ratios overestimation_ratios(double alpha, double gamma, double kappa);
/// General period law, computed by inverting the growth equation.
Ratios overestimation_ratios(double alpha, double kappa, const InfectiousPeriod& period);

/// (1 + alpha/delta)(1 + alpha/gamma)
double seir_r0_from_alpha(double alpha_hat, double gamma, double delta);

struct AlphaEstimate {
  double alpha = 0;
  double stderr_ = 0;
  std::size_t events = 0;
};
/// Least-squares slope of log cumulative infections against time over [t0, t1]. Uses
/// activation times when the log has any (SEIR), infection times otherwise.
AlphaEstimate estimate_alpha(const EventLog& log, double t0, double t1);

/// Mean offspring count of non-index cases infected by early_cutoff and removed within the log.
double estimate_r0_offspring(const InfectionForest& tree, double early_cutoff);

struct PostEpsilonLaw {
  double z = 0;
  DegreeDistribution law;
  double fifth_moment = 0;
};
/// Degree law of the susceptibles left after a fraction eps has been reached through edges.
PostEpsilonLaw post_epsilon_degree_law(const DegreeDistribution& p, double eps);

}  // namespace epinet
