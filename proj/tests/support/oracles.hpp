// Reference computations used by the tests. These deliberately avoid the library.
#pragma once

#include <cstdint>
#include <vector>

namespace oracle {

/// Two-sample Kolmogorov-Smirnov p-value (asymptotic, Stephens' small-sample correction).
double ks_two_sample_p(std::vector<double> a, std::vector<double> b);

/// Anderson-Darling statistic A^2 against a fully specified Exponential(rate).
double anderson_darling_exponential(std::vector<double> x, double rate);

/// Extinction frequency of the branching process whose individuals carry a size-biased
/// excess degree from p, live Exp(gamma) and transmit along each excess edge after Exp(lambda).
/// A lineage reaching `cap` infections counts as surviving.
struct Frequency {
  double p;
  double se;
};
Frequency birth_death_extinction(const std::vector<double>& p, double lambda, double gamma, int replicas,
                                 std::uint64_t seed, int cap = 2000);

/// Final sizes (initial infectives included) of the mass-action SIR with pairwise rate lambda.
std::vector<double> mass_action_final_sizes(int n, int i0, double lambda, double gamma, int replicas,
                                            std::uint64_t seed);

/// Yule process event times (birth rate a per individual) starting from one individual.
std::vector<double> yule_times(double a, int events, std::uint64_t seed);

/// Degree histogram of the individuals left after the first floor(eps N) in the order of
/// Z_u = min of D_u uniforms; degrees i.i.d. from p. Returned normalised.
std::vector<double> post_epsilon_simulation(const std::vector<double>& p, int n, double eps, std::uint64_t seed);

/// Poisson(a) pmf on 0..kmax.
std::vector<double> poisson_pmf(double a, int kmax);

/// Solves f(x) = 0 on [a, b] by bisection; f(a), f(b) must differ in sign.
template <class F>
double bisect(F f, double a, double b, int iters = 200) {
  double fa = f(a);
  for (int i = 0; i < iters; ++i) {
    double m = 0.5 * (a + b), fm = f(m);
    if ((fm <= 0) == (fa <= 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// Classical fourth-order Runge-Kutta on a fixed step, for cross-checking.
template <class State, class Rhs>
State rk4(Rhs f, State x, double t0, double t1, int steps) {
  const double h = (t1 - t0) / steps;
  double t = t0;
  for (int s = 0; s < steps; ++s) {
    State k1 = f(t, x);
    State k2 = f(t + h / 2, x + (h / 2) * k1);
    State k3 = f(t + h / 2, x + (h / 2) * k2);
    State k4 = f(t + h, x + h * k3);
    x = x + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
  }
  return x;
}

}  // namespace oracle
