// Deterministic large-graph limits of the network epidemic.
#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "epinet/measures.hpp"

namespace epinet {

/// Time grid with one row of named columns per grid point.
struct OdeTrajectory {
  std::vector<double> t;
  std::vector<std::string> names;
  Eigen::MatrixXd values;  ///< rows: grid points, cols: names
  std::size_t steps = 0;   ///< accepted integrator steps
  bool degenerate = false; ///< nothing can happen (no infection pressure)

  Eigen::VectorXd col(const std::string& name) const;
  std::size_t size() const { return t.size(); }
};

struct OdeTolerance {
  double abs = 1e-10;
  double rel = 1e-8;
};

/// ds/dt = -lambda' s i, di/dt = lambda' s i - gamma i. Columns s, i, r.
OdeTrajectory integrate_km(double lambda_prime, double gamma, double s0, double i0, const std::vector<double>& grid,
                           OdeTolerance tol = {});

/// Pair closure with [ss] = C s^2. Columns s, i, r, itilde.
OdeTrajectory integrate_moment_closure(double lambda, double gamma, double s0, double i0, double itilde0, double C,
                                       const std::vector<double>& grid, OdeTolerance tol = {});

/// Smallest nonnegative root of z = s0 (1 - exp(-lambda/(lambda+gamma) (C z + itilde0))).
double final_size_moment_closure(double lambda, double gamma, double s0, double itilde0, double C);

struct MillerStart {
  double p_r0 = 0;              ///< fraction of non-transmitted edges with a removed alter
  std::optional<double> psi0;   ///< edge mass with a susceptible alter; default theta0 - phi0 - p_r0 theta0
};

/// theta dynamics with infection present at t = 0; s = h(theta), i and r carried as
/// states. h is the (unnormalised) generating function of the susceptible degree measure.
/// Columns s, i, r, theta, phi.
OdeTrajectory integrate_miller(const DegreeMeasure& h, double lambda, double gamma, double theta0, double phi0,
                               double i0, double r0, const std::vector<double>& grid, MillerStart start = {},
                               OdeTolerance tol = {});

/// Edge-based system in (theta, p_I, p_S, i) with theta(0) = 1. Total mass of h plus i0
/// plus the initial removed fraction is taken to be 1, so r = 1 - s - i.
/// Columns s, i, r, theta, pI, pS, pR, NS, NIS, NRS.
OdeTrajectory integrate_volz(const DegreeMeasure& h, double lambda, double gamma, double p_i0, double p_s0, double i0,
                             const std::vector<double>& grid, OdeTolerance tol = {});

/// Truncated countable system for the three degree measures.
struct BallNealTrajectory {
  std::vector<double> t;
  std::vector<double> theta;
  Eigen::MatrixXd S, IS, RS;  ///< rows: grid points, cols: degree 0..k_max
  bool halted = false;        ///< N^IS fell below the floor
  double halt_time = 0;
  std::size_t steps = 0;

  std::size_t size() const { return t.size(); }
  double NS(std::size_t row) const;
  double NIS(std::size_t row) const;
  double NRS(std::size_t row) const;
};

BallNealTrajectory integrate_ball_neal(const Eigen::VectorXd& mu_s0, const Eigen::VectorXd& mu_is0,
                                       const Eigen::VectorXd& mu_rs0, double lambda, double gamma, int k_max,
                                       const std::vector<double>& grid, double floor = 1e-10,
                                       OdeTolerance tol = {});

/// Lower bound for the time at which N^IS first drops below eps_prime.
double horizon_bound(const DegreeMeasure& mu_s0, double nis0, double eps_prime, double lambda, double gamma);

/// Evenly spaced grid with n+1 points on [0, t_end].
std::vector<double> uniform_grid(double t_end, int n);

}  // namespace epinet
