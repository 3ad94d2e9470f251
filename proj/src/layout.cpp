#include <cmath>
#include <stdexcept>

#include "epinet/netstat.hpp"
#include "epinet/random.hpp"

namespace epinet {

namespace {

void check(const Graph& g, const Eigen::MatrixX2d& z, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("layout: delta must be positive");
  if (z.rows() != g.vertex_count()) throw std::invalid_argument("layout: coordinate count mismatch");
}

/// Energy with the attraction summed edge by edge (multi-edges count a_ij times; loops ignored).
double energy(const Graph& g, const Eigen::MatrixX2d& z, double delta) {
  const int n = g.vertex_count();
  double e = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e -= delta * delta * std::log((z.row(i) - z.row(j)).norm());
  for (auto [u, v] : g.edges()) {
    if (u == v) continue;
    double r = (z.row(u) - z.row(v)).norm();
    e += r * r * r / (3 * delta);
  }
  return e;
}

Eigen::MatrixX2d gradient(const Graph& g, const Eigen::MatrixX2d& z, double delta) {
  const int n = g.vertex_count();
  Eigen::MatrixX2d gr = Eigen::MatrixX2d::Zero(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Eigen::RowVector2d d = z.row(i) - z.row(j);
      Eigen::RowVector2d f = -delta * delta * d / d.squaredNorm();
      gr.row(i) += f;
      gr.row(j) -= f;
    }
  for (auto [u, v] : g.edges()) {
    if (u == v) continue;
    Eigen::RowVector2d d = z.row(u) - z.row(v);
    Eigen::RowVector2d f = d.norm() * d / delta;
    gr.row(u) += f;
    gr.row(v) -= f;
  }
  return gr;
}

/// Nudges coincident points apart.
void jitter(Eigen::MatrixX2d& z, double delta, Rng& rng) {
  const int n = static_cast<int>(z.rows());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((z.row(i) - z.row(j)).norm() < 1e-12 * delta) {
        z(j, 0) += 1e-9 * delta * (uniform01(rng) - 0.5);
        z(j, 1) += 1e-9 * delta * (uniform01(rng) - 0.5);
      }
}

}  // namespace

double layout_energy(const Graph& g, const Eigen::MatrixX2d& z, double delta) {
  check(g, z, delta);
  return energy(g, z, delta);
}

Layout layout(const Graph& g, double delta, std::uint64_t seed, int max_iters) {
  if (!(delta > 0)) throw std::invalid_argument("layout: delta must be positive");
  const int n = g.vertex_count();
  Rng rng(seed);
  Layout out;
  out.z.resize(n, 2);
  const double side = delta * std::sqrt(static_cast<double>(std::max(n, 1)));
  for (int i = 0; i < n; ++i) {
    out.z(i, 0) = side * uniform01(rng);
    out.z(i, 1) = side * uniform01(rng);
  }
  jitter(out.z, delta, rng);
  if (n < 2) return out;
  double e = energy(g, out.z, delta);
  out.energy.push_back(e);
  double step = 0.1 * delta;
  for (out.iterations = 0; out.iterations < max_iters; ++out.iterations) {
    Eigen::MatrixX2d gr = gradient(g, out.z, delta);
    double gn = gr.norm();
    if (gn < 1e-10 * delta || step < 1e-12 * delta) break;
    Eigen::MatrixX2d trial = out.z - (step / gn) * gr;
    jitter(trial, delta, rng);
    double et = energy(g, trial, delta);
    if (et <= e) {
      out.z = std::move(trial);
      e = et;
      out.energy.push_back(e);
      step *= 1.1;
    } else {
      step *= 0.5;
    }
  }
  return out;
}

}  // namespace epinet
