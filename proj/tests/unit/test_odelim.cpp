#include <doctest.h>

#include <cmath>

#include "epinet/measures.hpp"
#include "epinet/odelim.hpp"
#include "oracles.hpp"

using namespace epinet;
using doctest::Approx;

namespace {

double sup_dist(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

/// Poisson(5) start with 5% infectives: susceptible measure 0.95 Poisson(5), p_I(0) = 0.05.
struct Start {
  DegreeMeasure h;
  double i0 = 0.05, pI0 = 0.05, pS0 = 0.95;
  Start() : h(poisson_distribution(5).measure()) { h *= 0.95; }
};

}  // namespace

TEST_CASE("KM trivial cases") {
  auto grid = uniform_grid(10, 100);
  auto dfe = integrate_km(2, 1, 0.9, 0.0, grid);
  CHECK(dfe.col("s").maxCoeff() == Approx(0.9));
  CHECK(dfe.col("s").minCoeff() == Approx(0.9));
  auto decay = integrate_km(0, 1, 0.6, 0.4, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(std::abs(decay.values(k, 1) - 0.4 * std::exp(-grid[k])) < 1e-6);
    CHECK(decay.values(k, 0) == Approx(0.6));
  }
}

TEST_CASE("KM final size") {
  auto tr = integrate_km(2, 1, 0.99, 0.01, uniform_grid(200, 200));
  double s_inf = tr.col("s")(200);
  double root = oracle::bisect([](double s) { return s - 0.99 * std::exp(-2 * (1 - s)); }, 1e-9, 0.5);
  CHECK(std::abs(s_inf - root) < 1e-5);
}

TEST_CASE("moment closure") {
  auto grid = uniform_grid(200, 400);
  auto none = integrate_moment_closure(1, 1, 0.99, 0.01, 0.0, 5, grid);
  CHECK(none.col("s").minCoeff() == Approx(0.99));
  auto tr = integrate_moment_closure(1, 1, 0.99, 0.01, 0.05, 5, grid);
  double z = 0.99 - tr.col("s")(400);
  double fixed = oracle::bisect(
      [](double z) { return z - 0.99 * (1 - std::exp(-0.5 * (5 * z + 0.05))); }, 1e-6, 0.99);
  CHECK(std::abs(z - fixed) < 1e-4);
  CHECK(std::abs(final_size_moment_closure(1, 1, 0.99, 0.05, 5) - z) < 1e-4);
  CHECK(final_size_moment_closure(0, 1, 0.99, 0.05, 5) == 0);
  CHECK(final_size_moment_closure(1, 1, 0.99, 0.0, 5) == 0);
}

TEST_CASE("moment closure tends to KM") {
  auto grid = uniform_grid(30, 300);
  auto km = integrate_km(2, 1, 0.99, 0.01, grid);
  double prev = 1e9;
  for (double C : {10.0, 100.0, 1000.0}) {
    auto mc = integrate_moment_closure(2 / C, 1, 0.99, 0.01, 0.01 * C, C, grid);
    double d = std::max(sup_dist(mc.col("s"), km.col("s")), sup_dist(mc.col("i"), km.col("i")));
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("Miller disease-free start is stationary") {
  auto p = poisson_distribution(5);
  auto tr = integrate_miller(p.measure(), 1, 1, 1.0, 0.0, 0, 0, uniform_grid(20, 50));
  CHECK(tr.degenerate);
  CHECK(tr.col("theta").minCoeff() == Approx(1.0).epsilon(1e-12));
  CHECK(integrate_miller(p.measure(), 0, 1, 0.9, 0.1, 0.05, 0, uniform_grid(5, 5)).col("theta").minCoeff() <= 0.9);
}

TEST_CASE("Miller equals Volz") {
  Start st;
  auto grid = uniform_grid(20, 400);
  auto v = integrate_volz(st.h, 1, 1, st.pI0, st.pS0, st.i0, grid);
  auto m = integrate_miller(st.h, 1, 1, 1.0, st.pI0, st.i0, 0, grid);
  for (const char* c : {"s", "i", "r", "theta"}) CHECK(sup_dist(v.col(c), m.col(c)) < 1e-6);
  for (std::size_t k = 0; k < grid.size(); ++k)
    CHECK(std::abs(m.values(k, 0) - pgf(st.h, m.values(k, 3))) < 1e-8);
  // start with removed edges already present
  auto v2 = integrate_volz(st.h, 1.5, 0.7, 0.05, 0.85, st.i0, grid);
  MillerStart ms;
  ms.p_r0 = 0.10;
  auto m2 = integrate_miller(st.h, 1.5, 0.7, 1.0, 0.05, st.i0, 0, grid, ms);
  for (const char* c : {"s", "i", "theta"}) CHECK(sup_dist(v2.col(c), m2.col(c)) < 1e-6);
}

TEST_CASE("Volz invariants") {
  Start st;
  auto grid = uniform_grid(30, 600);
  auto v = integrate_volz(st.h, 1, 1, st.pI0, st.pS0, st.i0, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double s = v.values(k, 0), i = v.values(k, 1), r = v.values(k, 2);
    CHECK(s + i + r == Approx(1).epsilon(1e-6));
    for (double x : {s, i, r}) CHECK((x >= -1e-9 && x <= 1 + 1e-9));
    double th = v.values(k, 3);
    CHECK(th > 0);
    CHECK(th <= 1);
    if (k > 0) CHECK(th <= v.values(k - 1, 3) + 1e-12);
    CHECK(v.values(k, 4) + v.values(k, 5) + v.values(k, 6) == Approx(1).epsilon(1e-6));
  }
  auto fine = integrate_volz(st.h, 1, 1, st.pI0, st.pS0, st.i0, {0.0, 1e-6});
  CHECK((fine.values(1, 3) - 1) / 1e-6 == Approx(-st.pI0).epsilon(1e-4));
  auto flat = integrate_volz(st.h, 1, 1, 0.0, 1.0, 0.0, grid);
  CHECK(flat.degenerate);
  CHECK(flat.col("s").minCoeff() == Approx(0.95));
  CHECK(flat.col("i").maxCoeff() == 0);
}

TEST_CASE("tolerance refinement changes little") {
  Start st;
  auto grid = uniform_grid(20, 40);
  auto a = integrate_volz(st.h, 1, 1, st.pI0, st.pS0, st.i0, grid);
  auto b = integrate_volz(st.h, 1, 1, st.pI0, st.pS0, st.i0, grid, OdeTolerance{1e-12, 1e-10});
  CHECK(sup_dist(a.col("i"), b.col("i")) < 1e-7);
  CHECK(b.steps > a.steps);
}

TEST_CASE("Ball-Neal against Volz") {
  Start st;
  const int K = st.h.max_degree();
  Eigen::VectorXd S0 = st.h.dense(K);
  // 5% infectives whose IS degrees average 4.75 so that N^IS = p_I N^S
  Eigen::VectorXd IS0 = Eigen::VectorXd::Zero(K + 1);
  IS0(4) = 0.0125;
  IS0(5) = 0.0375;
  Eigen::VectorXd RS0 = Eigen::VectorXd::Zero(K + 1);
  auto grid = uniform_grid(15, 150);
  auto bn = integrate_ball_neal(S0, IS0, RS0, 1, 1, K, grid);
  auto v = integrate_volz(st.h, 1, 1, st.pI0, st.pS0, st.i0, grid);
  REQUIRE(bn.size() == grid.size());
  for (std::size_t k = 0; k < bn.size(); ++k) {
    double th = bn.theta[k];
    CHECK(std::abs(bn.IS.row(k).sum() - v.values(k, 1)) < 1e-4);
    CHECK(std::abs(bn.NS(k) - th * pgf(st.h, th, 1)) < 1e-6);
    CHECK(std::abs(bn.NIS(k) - v.col("NIS")(k)) < 1e-6);
    CHECK(std::abs(bn.NRS(k) - v.col("NRS")(k)) < 1e-6);
    double total = bn.S.row(k).sum() + bn.IS.row(k).sum() + bn.RS.row(k).sum();
    CHECK(total == Approx(1.0).epsilon(1e-6));
    CHECK(bn.IS.row(k).minCoeff() >= -1e-12);
    CHECK(bn.RS.row(k).minCoeff() >= -1e-12);
  }
}

TEST_CASE("horizon bound") {
  auto p = poisson_distribution(5);
  DegreeMeasure s0 = p.measure();
  s0 *= 0.99;
  CHECK(horizon_bound(s0, 0.05, 0.05 - 1e-12, 1, 1) < 1e-9);
  double prev = 1e9;
  for (double e : {0.001, 0.01, 0.02, 0.04}) {
    double b = horizon_bound(s0, 0.05, e, 1, 1);
    CHECK(b < prev);
    prev = b;
  }
  CHECK_THROWS(horizon_bound(s0, 0.05, 0.05, 1, 1));
  const int K = p.max_degree();
  Eigen::VectorXd IS0 = Eigen::VectorXd::Zero(K + 1);
  IS0(5) = 0.01;
  auto bn = integrate_ball_neal(s0.dense(K), IS0, Eigen::VectorXd::Zero(K + 1), 1, 1, K, uniform_grid(60, 6000), 0.01);
  REQUIRE(bn.halted);
  CHECK(horizon_bound(s0, 0.05, 0.01, 1, 1) <= bn.halt_time);
}
