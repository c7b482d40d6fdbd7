#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mhdx/ode2.hpp"

using namespace mhdx;

namespace {
double fd2(const TimeProfile& p, double t, double h = 1e-3) {
  return (-p.eval(t - 2 * h) + 16 * p.eval(t - h) - 30 * p.eval(t) + 16 * p.eval(t + h) -
          p.eval(t + 2 * h)) /
         (12 * h * h);
}

// classical RK4 for A'' = lambda A + f
void rk4(double lambda, const TimeProfile& f, double a0, double ap0, double t1,
         int steps, double& a, double& ap) {
  a = a0;
  ap = ap0;
  double h = t1 / steps, t = 0.0;
  auto acc = [&](double tt, double aa) { return lambda * aa + f.eval(tt); };
  for (int i = 0; i < steps; ++i) {
    double k1a = ap, k1p = acc(t, a);
    double k2a = ap + 0.5 * h * k1p, k2p = acc(t + 0.5 * h, a + 0.5 * h * k1a);
    double k3a = ap + 0.5 * h * k2p, k3p = acc(t + 0.5 * h, a + 0.5 * h * k2a);
    double k4a = ap + h * k3p, k4p = acc(t + h, a + h * k3a);
    a += h / 6.0 * (k1a + 2 * k2a + 2 * k3a + k4a);
    ap += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    t += h;
  }
}
}  // namespace

TEST_CASE("basis branches and bare Wronskians") {
  OscBasis b0 = osc_basis(0.0);
  CHECK(b0.xi1.eval(3.7) == 1.0);
  CHECK(b0.xi2.eval(3.7) == doctest::Approx(3.7));
  auto w0 = wronskian_weights(b0, 1.5);
  CHECK(w0.W == doctest::Approx(1.0));
  CHECK(w0.W1 == doctest::Approx(-1.5));
  CHECK(w0.W2 == doctest::Approx(1.0));

  OscBasis bp = osc_basis(1.0);
  CHECK(bp.xi1.eval(0.0) == doctest::Approx(1.0));
  CHECK(bp.xi2.eval(0.0) == doctest::Approx(1.0));
  OscBasis b4 = osc_basis(4.0);
  CHECK(wronskian_weights(b4, 0.9).W == doctest::Approx(-4.0));

  OscBasis bn = osc_basis(-1.0);
  CHECK(bn.xi1.eval(M_PI) == doctest::Approx(-1.0));
  CHECK(std::abs(bn.xi2.eval(M_PI)) <= 1e-12);
  CHECK(wronskian_weights(bn, 0.0).W == doctest::Approx(1.0));
}

TEST_CASE("bare basis solves xi'' = lambda xi") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ut(-1.0, 1.0);
  for (double lambda : {2.3, -1.7, 0.0}) {
    OscBasis b = osc_basis(lambda);
    for (int i = 0; i < 10; ++i) {
      double t = ut(rng);
      CHECK(std::abs(fd2(b.xi1, t) - lambda * b.xi1.eval(t)) <= 1e-8 * (1 + std::abs(lambda)));
      CHECK(std::abs(fd2(b.xi2, t) - lambda * b.xi2.eval(t)) <= 1e-8 * (1 + std::abs(lambda)));
    }
  }
}

TEST_CASE("solve_forced closed-form examples") {
  OscBasis b0 = osc_basis(0.0);
  TimeProfile A = solve_forced(b0, constant(1.0), 0.0, 0.0);
  CHECK(A.eval(1.3) == doctest::Approx(1.3 * 1.3 / 2.0).epsilon(1e-10));

  TimeProfile Ah = solve_forced(osc_basis(-4.0), constant(0.0), 2.0, 3.0);
  CHECK(Ah.eval(0.5) ==
        doctest::Approx(2 * std::cos(1.0) + 3 * std::sin(1.0)).epsilon(1e-10));

  // resonant forcing check by FD
  OscBasis bn = osc_basis(-1.0);
  TimeProfile Ar = solve_forced(bn, pcos(tvar()), 0.0, 0.0);
  double t = M_PI / 2;
  CHECK(std::abs(fd2(Ar, t) + Ar.eval(t) - std::cos(t)) <= 1e-8);
}

TEST_CASE("forced solves: 200 seeded instances vs FD and RK") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ul(-4.0, 4.0), uc(-1.0, 1.0);
  for (int inst = 0; inst < 200; ++inst) {
    double lambda = ul(rng);
    if (inst % 10 == 0) lambda = 0.0;
    double l1 = uc(rng), l2 = uc(rng);
    TimeProfile f = poly({uc(rng), uc(rng)}) + trigexp(uc(rng), uc(rng), 2.0, 0.3, true);
    OscBasis b = osc_basis(lambda);
    TimeProfile A = solve_forced(b, f, l1, l2);
    // residual at random t
    for (int j = 0; j < 20; ++j) {
      double t = uc(rng);
      double res = fd2(A, t) - lambda * A.eval(t) - f.eval(t);
      CHECK(std::abs(res) <= 1e-6 * (1.0 + std::abs(f.eval(t))));
    }
    // RK comparison on [0,1]
    double a0 = l1 * b.xi1.eval(0.0) + l2 * b.xi2.eval(0.0);
    double ap0 = l1 * b.xi1.eval(0.0, 1) + l2 * b.xi2.eval(0.0, 1);
    double a, ap;
    rk4(lambda, f, a0, ap0, 1.0, 2000, a, ap);
    CHECK(std::abs(a - A.eval(1.0)) <= 1e-6 * (1.0 + std::abs(a)));
  }
}

TEST_CASE("zero branch matches tiny positive lambda") {
  TimeProfile f = poly({0.3, 0.5});
  TimeProfile A0 = solve_forced(osc_basis(0.0), f, 0.2, -0.4);
  TimeProfile Ae = solve_forced(osc_basis(1e-14), f, 0.2, -0.4);
  // lambda=1e-14 classifies as zero branch (band 1e-12)
  for (double t : {0.1, 0.5, 1.0}) CHECK(A0.eval(t) == doctest::Approx(Ae.eval(t)).epsilon(1e-9));
}

TEST_CASE("envelope basis") {
  // envelope e^{t}: xi = e^t * {cos t, sin t}; W = e^{2t} * 1
  TimeProfile env = pexp(tvar());
  OscBasis b = osc_basis(-1.0, env);
  auto w = wronskian_weights(b, 0.7);
  CHECK(w.W == doctest::Approx(std::exp(1.4)).epsilon(1e-10));
  // xi solves xi'' - 2 xi' + 2 xi = 0; VoP with full basis solves that ODE
  TimeProfile f = psin(tvar());
  TimeProfile A = solve_forced(b, f, 0.1, 0.2);
  for (double t : {-0.3, 0.4, 0.9}) {
    double res = fd2(A, t) - 2.0 * A.eval(t, 1) + 2.0 * A.eval(t) - f.eval(t);
    CHECK(std::abs(res) <= 1e-7);
  }
}
