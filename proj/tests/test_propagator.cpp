#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "tgp/errors.hpp"
#include "tgp/propagator.hpp"

using namespace tgp;

namespace {

const TruncatedBasis B = build_basis(2);

Mat pure(int m, int n) {
  const Vec v = basis_vector(B, m, n);
  return v * v.adjoint();
}

SystemParams sys(double delta, double Ec = 0.0) { return {1.0 - delta, 1.0, Ec, 0.028}; }

AccuracyConfig acc(double tau) {
  AccuracyConfig a;
  a.max_step = tau / 50;
  return a;
}

}  // namespace

TEST_CASE("time grid") {
  TimeGrid g{0, 10, 11};
  CHECK(g.at(3) == 3.0);
  CHECK(g.samples().back() == 10.0);
  TimeGrid fine{0, 10, 21};
  for (std::size_t i = 0; i < 11; ++i) CHECK(fine.at(2 * i) == g.at(i));
  CHECK_THROWS_AS((TimeGrid{0, 0, 10}.validate()), InvalidArgument);
  CHECK_THROWS_AS((TimeGrid{0, 1, 1}.validate()), InvalidArgument);
  CHECK_THROWS_AS((TimeGrid{2, 1, 5}.validate()), InvalidArgument);
}

TEST_CASE("resonant Rabi transfer against sin^2(gt)") {
  const double g = 0.028;
  const double tau = rabi_frequency(0, g).tau;
  TimeGrid grid{0, 5 * tau, 1001};
  const auto tr = evolve(pure(0, 1), sys(0), {}, DephasingOp::number, B, grid, acc(tau));
  double worst = 0, purity = 0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double want = std::pow(std::sin(g * tr.times[i]), 2);
    worst = std::max(worst, std::abs(tr.states[i](1, 1).real() - want));
    purity = std::max(purity, std::abs((tr.states[i] * tr.states[i]).trace().real() - 1.0));
  }
  CHECK(worst < 1e-8);
  CHECK(purity < 1e-8);
}

TEST_CASE("ground state is stationary") {
  TimeGrid grid{0, 500, 101};
  const auto tr = evolve(pure(0, 0), sys(0.017), {0.005, 0.005, 0.005}, DephasingOp::number, B,
                         grid, acc(100));
  for (const auto& r : tr.states) CHECK((r - pure(0, 0)).norm() == 0.0);
}

TEST_CASE("fig2 populations and coherence minimum") {
  const double tau = rabi_frequency(0.017, 0.028).tau;
  TimeGrid grid{0, 20 * tau, 4001};
  const auto tr = evolve(pure(0, 1), sys(0.017), {0.005, 0, 0}, DephasingOp::number, B, grid,
                         acc(tau));
  for (std::size_t i = 1; i < tr.size(); ++i)
    CHECK(tr.states[i](0, 0).real() >= tr.states[i - 1](0, 0).real() - 1e-12);
  CHECK(tr.states.back()(0, 0).real() > 0.95);
  // |rho_12| after its first rise: deepest point
  std::size_t p = 1;
  while (std::abs(tr.states[p + 1](1, 2)) >= std::abs(tr.states[p](1, 2))) ++p;
  std::size_t k = p;
  for (std::size_t i = p; i + 1 < tr.size(); ++i)
    if (std::abs(tr.states[i](1, 2)) < std::abs(tr.states[k](1, 2))) k = i;
  const double tk = tr.times[k] / tau;
  CHECK(tk > 6.0);
  CHECK(tk < 9.0);
  CHECK(std::abs(tr.states[k](1, 2)) < 0.01);
}

TEST_CASE("invariants on dissipative two-excitation runs") {
  for (auto baths : {BathParams{0.005, 0, 0}, BathParams{0, 0.005, 0}, BathParams{0.005, 0.005, 0.002}}) {
    const double tau = rabi_frequency(0.0017, 0.028).tau;
    TimeGrid grid{0, 40 * tau, 8001};
    const auto tr = evolve(pure(1, 1), sys(0.0017, 0.035), baths, DephasingOp::number, B, grid,
                           acc(tau));
    CHECK(tr.worst.trace_err < 1e-8);
    CHECK(tr.worst.herm_err < 1e-9);
    CHECK(tr.worst.min_eig > -1e-8);
    CHECK(tr.worst.offblock < 1e-10);
    CHECK(tr.worst.offblock == 0.0);
  }
}

TEST_CASE("literal dephasing operator stays trace preserving") {
  const double tau = rabi_frequency(0.017, 0.028).tau;
  TimeGrid grid{0, 5 * tau, 1001};
  const auto tr = evolve(pure(1, 0), sys(0.017), {0, 0, 0.002}, DephasingOp::literal_bdag_bdag,
                         B, grid, acc(tau));
  CHECK(tr.worst.trace_err < 1e-8);
  CHECK(tr.worst.min_eig > -1e-8);
}

TEST_CASE("tolerance halving and sampling independence") {
  const double tau = rabi_frequency(0.017, 0.028).tau;
  TimeGrid grid{0, 10 * tau, 2001}, fine{0, 10 * tau, 4001};
  const BathParams k{0.005, 0, 0};
  AccuracyConfig a = acc(tau), half = acc(tau);
  half.rtol /= 2;
  const auto t1 = evolve(pure(0, 1), sys(0.017), k, DephasingOp::number, B, grid, a);
  const auto t2 = evolve(pure(0, 1), sys(0.017), k, DephasingOp::number, B, grid, half);
  const auto t3 = evolve(pure(0, 1), sys(0.017), k, DephasingOp::number, B, fine, a);
  double d12 = 0, d13 = 0;
  for (std::size_t i = 0; i < t1.size(); ++i) {
    d12 = std::max(d12, (t1.states[i].diagonal() - t2.states[i].diagonal()).cwiseAbs().maxCoeff());
    d13 = std::max(d13, (t1.states[i] - t3.states[2 * i]).cwiseAbs().maxCoeff());
  }
  CHECK(d12 < 10 * a.rtol);
  CHECK(d13 == 0.0);
}

TEST_CASE("determinism") {
  const double tau = rabi_frequency(0.017, 0.028).tau;
  TimeGrid grid{0, 3 * tau, 601};
  const auto a = evolve(pure(0, 1), sys(0.017), {0.005, 0, 0}, DephasingOp::number, B, grid, acc(tau));
  const auto b = evolve(pure(0, 1), sys(0.017), {0.005, 0, 0}, DephasingOp::number, B, grid, acc(tau));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK((a.states[i] - b.states[i]).norm() == 0.0);
}

TEST_CASE("errors") {
  const double tau = 100;
  TimeGrid grid{0, 10 * tau, 101};
  Mat bad = pure(0, 1) * 2.0;
  CHECK_THROWS_AS(evolve(bad, sys(0.017), {}, DephasingOp::number, B, grid, acc(tau)), InvalidArgument);
  CHECK_THROWS_AS(evolve(pure(0, 1), sys(0.017), {}, DephasingOp::number, B, TimeGrid{0, 0, 5}, acc(tau)),
                  InvalidArgument);
  AccuracyConfig tiny = acc(tau);
  tiny.max_steps = 10;
  try {
    evolve(pure(0, 1), sys(0.017), {}, DephasingOp::number, B, grid, tiny);
    FAIL("expected integration failure");
  } catch (const IntegrationFailure& e) {
    CHECK(e.t_reached > 0);
    CHECK(e.t_reached < grid.t_end);
  }
}

TEST_CASE("steady_reached") {
  TimeGrid grid{0, 100, 101};
  const auto still = evolve(pure(0, 0), sys(0.017), {0.005, 0, 0}, DephasingOp::number, B, grid, acc(10));
  CHECK(steady_reached(still, 10, 1e-15));
  CHECK_THROWS_AS(steady_reached(still, 100, 1e-3), InvalidArgument);

  const double tau = rabi_frequency(0.017, 0.028).tau;
  TimeGrid g2{0, 5 * tau, 1001};
  const auto rabi = evolve(pure(0, 1), sys(0.017), {}, DephasingOp::number, B, g2, acc(tau));
  CHECK_FALSE(steady_reached(rabi, tau, 1e-3));

  TimeGrid g40{0, 40 * tau, 8001};
  const auto f2 = evolve(pure(0, 1), sys(0.017), {0.005, 0, 0}, DephasingOp::number, B, g40, acc(tau));
  CHECK(steady_reached(f2, 2 * tau, 1e-3));
}
