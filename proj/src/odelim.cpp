#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "epinet/odelim.hpp"
#include "ode_support.hpp"

namespace epinet {

Eigen::VectorXd OdeTrajectory::col(const std::string& name) const {
  for (std::size_t j = 0; j < names.size(); ++j)
    if (names[j] == name) return values.col(static_cast<Eigen::Index>(j));
  throw std::out_of_range("no column '" + name + "'");
}

std::vector<double> uniform_grid(double t_end, int n) {
  if (n < 1 || !(t_end > 0)) throw std::invalid_argument("uniform_grid: need n >= 1 and t_end > 0");
  std::vector<double> g(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) g[i] = t_end * i / n;
  return g;
}

namespace {

OdeTrajectory make(const std::vector<double>& grid, std::vector<std::string> names) {
  OdeTrajectory tr;
  tr.t = grid;
  tr.values.resize(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(names.size()));
  tr.names = std::move(names);
  return tr;
}

}  // namespace

OdeTrajectory integrate_km(double lp, double gamma, double s0, double i0, const std::vector<double>& grid,
                           OdeTolerance tol) {
  if (s0 < 0 || i0 < 0 || s0 + i0 > 1 + 1e-12) throw std::invalid_argument("integrate_km: need s0, i0 >= 0, s0+i0 <= 1");
  auto tr = make(grid, {"s", "i", "r"});
  Eigen::VectorXd x(2);
  x << s0, i0;
  tr.degenerate = i0 == 0;
  tr.steps = detail::integrate_grid(
      [&](const Eigen::VectorXd& y, Eigen::VectorXd& dy, double) {
        dy(0) = -lp * y(0) * y(1);
        dy(1) = lp * y(0) * y(1) - gamma * y(1);
      },
      x, grid, tol, [&](std::size_t row, const Eigen::VectorXd& y) {
        tr.values.row(row) << y(0), y(1), 1 - y(0) - y(1);
      });
  return tr;
}

OdeTrajectory integrate_moment_closure(double lambda, double gamma, double s0, double i0, double it0, double C,
                                       const std::vector<double>& grid, OdeTolerance tol) {
  if (!(C > 0) || it0 < 0) throw std::invalid_argument("moment closure: need C > 0 and itilde0 >= 0");
  auto tr = make(grid, {"s", "i", "r", "itilde"});
  Eigen::VectorXd x(3);
  x << s0, i0, it0;
  const double total = s0 + i0;  // r tracked relative to the initial removed mass
  tr.degenerate = it0 == 0;
  tr.steps = detail::integrate_grid(
      [&](const Eigen::VectorXd& y, Eigen::VectorXd& dy, double) {
        dy(0) = -lambda * y(0) * y(2);
        dy(1) = lambda * y(0) * y(2) - gamma * y(1);
        dy(2) = (C * lambda * y(0) - lambda - gamma) * y(2);
      },
      x, grid, tol, [&](std::size_t row, const Eigen::VectorXd& y) {
        tr.values.row(row) << y(0), y(1), (1 - total) + (total - y(0) - y(1)), y(2);
      });
  return tr;
}

double final_size_moment_closure(double lambda, double gamma, double s0, double it0, double C) {
  if (!(gamma > 0) || lambda < 0 || s0 < 0 || it0 < 0 || !(C > 0))
    throw std::invalid_argument("final_size_moment_closure: bad parameters");
  const double a = lambda / (lambda + gamma);
  auto F = [&](double z) { return s0 * (-std::expm1(-a * (C * z + it0))) - z; };
  if (F(0) <= 0) return 0.0;  // lambda = 0 or itilde0 = 0
  double lo = 0, hi = s0;     // F(lo) > 0 >= F(hi); F is concave so the root is unique
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    double mid = 0.5 * (lo + hi);
    (F(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

OdeTrajectory integrate_miller(const DegreeMeasure& h, double lambda, double gamma, double theta0, double phi0,
                               double i0, double r0, const std::vector<double>& grid, MillerStart start,
                               OdeTolerance tol) {
  if (!(theta0 > 0 && theta0 <= 1)) throw std::invalid_argument("miller: theta0 must lie in (0,1]");
  if (phi0 < 0) throw std::invalid_argument("miller: phi0 must be >= 0");
  const double h1_0 = pgf(h, theta0, 1);
  const double psi0 = start.psi0.value_or(theta0 - phi0 - start.p_r0 * theta0);
  if (psi0 < -1e-12) throw std::invalid_argument("miller: negative susceptible edge mass");
  if (!(h1_0 > 0) && psi0 > 0) throw std::invalid_argument("miller: no susceptible edges");
  auto dtheta = [&](double th) {
    double hs = h1_0 > 0 ? psi0 * pgf(h, th, 1) / h1_0 : 0.0;
    // -lambda phi written without dividing by lambda.
    return -lambda * th + lambda * hs + lambda * start.p_r0 * theta0 + gamma * (theta0 - th);
  };
  auto tr = make(grid, {"s", "i", "r", "theta", "phi"});
  Eigen::VectorXd x(3);
  x << theta0, i0, r0;
  tr.degenerate = dtheta(theta0) == 0.0;
  tr.steps = detail::integrate_grid(
      [&](const Eigen::VectorXd& y, Eigen::VectorXd& dy, double) {
        double th = std::clamp(y(0), 0.0, 1.0);
        double d = dtheta(th);
        dy(0) = d;
        dy(1) = -pgf(h, th, 1) * d - gamma * y(1);
        dy(2) = gamma * y(1);
      },
      x, grid, tol, [&](std::size_t row, const Eigen::VectorXd& y) {
        double th = std::clamp(y(0), 0.0, 1.0);
        double phi = lambda > 0 ? -dtheta(th) / lambda : phi0;
        tr.values.row(row) << pgf(h, th, 0), y(1), y(2), y(0), phi;
      });
  return tr;
}

OdeTrajectory integrate_volz(const DegreeMeasure& h, double lambda, double gamma, double p_i0, double p_s0, double i0,
                             const std::vector<double>& grid, OdeTolerance tol) {
  if (p_i0 < 0 || p_s0 < 0 || p_i0 + p_s0 > 1 + 1e-12) throw std::invalid_argument("volz: need p_I0 + p_S0 <= 1");
  auto tr = make(grid, {"s", "i", "r", "theta", "pI", "pS", "pR", "NS", "NIS", "NRS"});
  Eigen::VectorXd x(4);
  x << 1.0, p_i0, p_s0, i0;
  tr.degenerate = p_i0 == 0;
  auto ratio = [&](double th) {
    double h1 = pgf(h, th, 1);
    return h1 > 0 ? th * pgf(h, th, 2) / h1 : 0.0;
  };
  tr.steps = detail::integrate_grid(
      [&](const Eigen::VectorXd& y, Eigen::VectorXd& dy, double) {
        const double th = std::clamp(y(0), 0.0, 1.0), pI = y(1), pS = y(2);
        const double q = ratio(th);
        dy(0) = -lambda * pI * th;
        dy(1) = lambda * pI * pS * q - lambda * pI * (1 - pI) - gamma * pI;
        dy(2) = lambda * pI * pS * (1 - q);
        dy(3) = lambda * pI * th * pgf(h, th, 1) - gamma * y(3);
      },
      x, grid, tol, [&](std::size_t row, const Eigen::VectorXd& y) {
        const double th = std::clamp(y(0), 0.0, 1.0);
        const double s = pgf(h, th, 0), ns = th * pgf(h, th, 1);
        const double pR = 1 - y(1) - y(2);
        tr.values.row(row) << s, y(3), 1 - s - y(3), y(0), y(1), y(2), pR, ns, y(1) * ns, pR * ns;
      });
  return tr;
}

double horizon_bound(const DegreeMeasure& mu_s0, double nis0, double eps_prime, double lambda, double gamma) {
  if (!(eps_prime < nis0)) throw std::invalid_argument("horizon_bound: need eps' < N^IS_0");
  if (!(eps_prime >= 0)) throw std::invalid_argument("horizon_bound: eps' must be >= 0");
  const double m2 = mu_s0.moment(2);
  return (std::log(m2 + nis0) - std::log(m2 + eps_prime)) / std::max(gamma, lambda);
}

}  // namespace epinet
