#include <cmath>
#include <stdexcept>
#include <vector>

#include "epinet/odelim.hpp"
#include "ode_support.hpp"

namespace epinet {

namespace {

double edges(const Eigen::MatrixXd& m, std::size_t row) {
  double s = 0;
  for (Eigen::Index k = 0; k < m.cols(); ++k) s += static_cast<double>(k) * m(static_cast<Eigen::Index>(row), k);
  return s;
}

}  // namespace

double BallNealTrajectory::NS(std::size_t row) const { return edges(S, row); }
double BallNealTrajectory::NIS(std::size_t row) const { return edges(IS, row); }
double BallNealTrajectory::NRS(std::size_t row) const { return edges(RS, row); }

BallNealTrajectory integrate_ball_neal(const Eigen::VectorXd& s0_in, const Eigen::VectorXd& is0_in,
                                       const Eigen::VectorXd& rs0_in, double lambda, double gamma, int k_max,
                                       const std::vector<double>& grid, double floor, OdeTolerance tol) {
  if (k_max < 0) throw std::invalid_argument("ball_neal: k_max must be >= 0");
  const Eigen::Index K = k_max + 1;
  auto fit = [&](const Eigen::VectorXd& v, const char* name) {
    if ((v.array() < 0).any()) throw std::invalid_argument(std::string("ball_neal: negative mass in ") + name);
    for (Eigen::Index k = K; k < v.size(); ++k)
      if (v(k) != 0) throw std::invalid_argument(std::string("ball_neal: ") + name + " has mass above k_max");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(K);
    out.head(std::min(K, v.size())) = v.head(std::min(K, v.size()));
    return out;
  };
  const Eigen::VectorXd S0 = fit(s0_in, "mu_S"), IS0 = fit(is0_in, "mu_IS"), RS0 = fit(rs0_in, "mu_RS");
  const Eigen::VectorXd deg = Eigen::VectorXd::LinSpaced(K, 0.0, static_cast<double>(k_max));
  if (!(deg.dot(IS0) > 0)) throw std::invalid_argument("ball_neal: <mu_IS, chi> must be > 0");

  // log of binomial coefficients C(n, i) for n, i <= k_max.
  std::vector<double> lfact(static_cast<std::size_t>(K) + 1, 0.0);
  for (Eigen::Index n = 1; n <= K; ++n) lfact[n] = lfact[n - 1] + std::log(static_cast<double>(n));
  auto binom = [&](int n, int i, double p) {
    if (p <= 0) return i == 0 ? 1.0 : 0.0;
    if (p >= 1) return i == n ? 1.0 : 0.0;
    return std::exp(lfact[n] - lfact[i] - lfact[n - i] + i * std::log(p) + (n - i) * std::log1p(-p));
  };

  // State: theta, mu_IS(0..k_max), mu_RS(0..k_max).
  Eigen::VectorXd x(1 + 2 * K);
  x(0) = 1.0;
  x.segment(1, K) = IS0;
  x.segment(1 + K, K) = RS0;

  auto rhs = [&](const Eigen::VectorXd& y, Eigen::VectorXd& dy, double) {
    const double th = std::clamp(y(0), 0.0, 1.0);
    Eigen::VectorXd S(K);
    double pw = 1.0;
    for (Eigen::Index i = 0; i < K; ++i, pw *= th) S(i) = S0(i) * pw;
    const auto IS = y.segment(1, K);
    const auto RS = y.segment(1 + K, K);
    const double ns = deg.dot(S), nis = deg.dot(IS), nrs = deg.dot(RS);
    const double s2 = (deg.array() * (deg.array() - 1) * S.array()).sum();
    const double pI = ns > 0 ? nis / ns : 0.0, pR = ns > 0 ? nrs / ns : 0.0;
    const double pS = std::clamp(1 - pI - pR, 0.0, 1.0);
    dy(0) = -lambda * pI * th;
    const double is_rate = nis > floor * 1e-3 ? (lambda * pI * pI * s2 + lambda * pI * ns) / nis : 0.0;
    const double rs_rate = nrs > 0 ? lambda * pI * s2 * pR / nrs : 0.0;
    for (Eigen::Index i = 0; i < K; ++i) {
      double influx = 0;
      for (Eigen::Index k = i + 1; k < K; ++k)
        if (S(k) > 0) influx += static_cast<double>(k) * S(k) * binom(static_cast<int>(k - 1), static_cast<int>(i), pS);
      influx *= lambda * pI;
      const double up_is = i + 1 < K ? (i + 1) * IS(i + 1) : 0.0;
      const double up_rs = i + 1 < K ? (i + 1) * RS(i + 1) : 0.0;
      dy(1 + i) = -gamma * IS(i) + influx + is_rate * (up_is - static_cast<double>(i) * IS(i));
      dy(1 + K + i) = gamma * IS(i) + rs_rate * (up_rs - static_cast<double>(i) * RS(i));
    }
  };

  BallNealTrajectory tr;
  const auto rows = static_cast<Eigen::Index>(grid.size());
  tr.S.resize(rows, K);
  tr.IS.resize(rows, K);
  tr.RS.resize(rows, K);
  tr.t = grid;
  tr.theta.resize(grid.size());
  tr.steps = detail::integrate_grid(rhs, x, grid, tol, [&](std::size_t row, const Eigen::VectorXd& y) {
    const double th = std::clamp(y(0), 0.0, 1.0);
    tr.theta[row] = th;
    double pw = 1.0;
    for (Eigen::Index i = 0; i < K; ++i, pw *= th) tr.S(static_cast<Eigen::Index>(row), i) = S0(i) * pw;
    tr.IS.row(static_cast<Eigen::Index>(row)) = y.segment(1, K).cwiseMax(0.0).transpose();
    tr.RS.row(static_cast<Eigen::Index>(row)) = y.segment(1 + K, K).cwiseMax(0.0).transpose();
  });
  // Stop at the first grid point where N^IS is below the floor.
  for (std::size_t r = 0; r < grid.size(); ++r) {
    if (tr.NIS(r) < floor) {
      tr.halted = true;
      tr.halt_time = grid[r];
      const auto keep = static_cast<Eigen::Index>(r + 1);
      tr.t.resize(r + 1);
      tr.theta.resize(r + 1);
      tr.S.conservativeResize(keep, K);
      tr.IS.conservativeResize(keep, K);
      tr.RS.conservativeResize(keep, K);
      break;
    }
  }
  return tr;
}

}  // namespace epinet
