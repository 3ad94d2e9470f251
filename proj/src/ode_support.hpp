#pragma once

#include <Eigen/Core>
#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>
#include <stdexcept>
#include <vector>

#include "epinet/odelim.hpp"

namespace epinet::detail {

/// Dormand-Prince 5(4) with dense output; the state at every grid time is passed to
/// `store(row, x)`. Returns the accepted step count.
template <class Rhs, class Store>
std::size_t integrate_grid(Rhs rhs, Eigen::VectorXd x, const std::vector<double>& grid, OdeTolerance tol,
                           Store store) {
  namespace ode = boost::numeric::odeint;
  using State = Eigen::VectorXd;
  if (grid.empty()) throw std::invalid_argument("empty time grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("time grid must be strictly increasing");
  if (grid.size() == 1) {
    store(0, x);
    return 0;
  }
  auto stepper = ode::make_dense_output(
      tol.abs, tol.rel, ode::runge_kutta_dopri5<State, double, State, double, ode::vector_space_algebra>());
  std::size_t row = 0;
  auto sys = [&](const State& y, State& dy, double t) {
    dy.resize(y.size());
    rhs(y, dy, t);
  };
  double dt0 = std::min(1e-3, (grid.back() - grid.front()) / 100.0);
  return ode::integrate_times(stepper, sys, x, grid.begin(), grid.end(), dt0,
                              [&](const State& y, double) { store(row++, y); });
}

}  // namespace epinet::detail
