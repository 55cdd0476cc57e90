#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "tgp/analysis_bloch.hpp"
#include "tgp/errors.hpp"
#include "tgp/scenario.hpp"

using namespace tgp;

namespace {

const TruncatedBasis B = build_basis(2);
constexpr double kPi = 3.14159265358979323846;

std::vector<BlochPoint> circle(const Eigen::Vector3d& u, const Eigen::Vector3d& v, int n,
                               double turns) {
  std::vector<BlochPoint> p;
  for (int i = 0; i < n; ++i) {
    const double a = 2 * kPi * turns * i / (n - 1);
    const Eigen::Vector3d r = std::cos(a) * u + std::sin(a) * v;
    p.push_back({static_cast<double>(i), r.x(), r.y(), r.z()});
  }
  return p;
}

std::size_t argmax_abs(const MatrixElementSeries& s) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < s.values.size(); ++i)
    if (std::abs(s.values[i]) > std::abs(s.values[k])) k = i;
  return k;
}

}  // namespace

TEST_CASE("poles and equator") {
  const Vec up = basis_vector(B, 1, 0);
  const Vec down = basis_vector(B, 0, 1);
  auto s = bloch_of_branch(down);
  CHECK(s.x == 0.0);
  CHECK(s.y == 0.0);
  CHECK(s.z == -1.0);
  auto n = bloch_of_branch(up);
  CHECK(n.z == 1.0);
  auto e = bloch_of_branch((up + down).normalized(), 2.5);
  CHECK(e.x == doctest::Approx(1.0));
  CHECK(e.y == doctest::Approx(0.0));
  CHECK(e.z == doctest::Approx(0.0));
  CHECK(e.t == 2.5);
  auto iy = bloch_of_branch((up + cplx(0, 1) * down).normalized());
  CHECK(iy.y == doctest::Approx(1.0));
}

TEST_CASE("global phase does not move the point") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int rep = 0; rep < 100; ++rep) {
    Vec v = Vec::Zero(6);
    v(B.index_of(1, 0)) = cplx(nd(rng), nd(rng));
    v(B.index_of(0, 1)) = cplx(nd(rng), nd(rng));
    v.normalize();
    const auto a = bloch_of_branch(v);
    const auto b = bloch_of_branch(v * std::exp(cplx(0, u(rng))));
    CHECK((a.r() - b.r()).norm() < 1e-12);
    CHECK(a.r().norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("states outside the one-excitation block are rejected") {
  Vec v = basis_vector(B, 0, 1);
  v(B.index_of(1, 1)) = 1e-3;
  v.normalize();
  CHECK_THROWS_AS(bloch_of_branch(v), NotInBlock);
  CHECK_THROWS_AS(bloch_of_branch(basis_vector(B, 0, 0)), NotInBlock);
  Vec w = basis_vector(B, 0, 1);
  w(0) = 1e-8;
  CHECK_NOTHROW(bloch_of_branch(w.normalized()));
}

TEST_CASE("element series") {
  const auto b = run_scenario(find_preset("fig2").base);
  const auto p22 = element_series(b.traj, 2, 2);
  CHECK(p22.values.front() == cplx(1.0, 0.0));
  CHECK(p22.times.size() == b.traj.states.size());
  const auto p00 = element_series(b.traj, 0, 0);
  for (std::size_t i = 1; i < p00.values.size(); ++i)
    CHECK(p00.values[i].real() >= p00.values[i - 1].real() - 1e-10);
  CHECK(p00.values.back().real() > 0.9);
  const auto c12 = element_series(b.traj, 1, 2);
  const auto c21 = element_series(b.traj, 2, 1);
  for (std::size_t i = 0; i < c12.values.size(); ++i)
    CHECK(std::abs(c12.values[i] - std::conj(c21.values[i])) < 1e-10);
  CHECK_THROWS_AS(element_series(b.traj, 6, 0), InvalidArgument);
}

TEST_CASE("two-excitation coherences") {
  const auto b = run_scenario(find_preset("fig8").base);
  CHECK(element_series(b.traj, 4, 4).values.front().real() == 1.0);
  const auto c12 = element_series(b.traj, 1, 2);
  const auto c34 = element_series(b.traj, 3, 4);
  CHECK(c12.times[argmax_abs(c12)] > c34.times[argmax_abs(c34)]);
}

TEST_CASE("hemisphere crossings on synthetic paths") {
  std::vector<BlochPoint> still(50, BlochPoint{0, 0, 0, 1});
  for (std::size_t i = 0; i < still.size(); ++i) still[i].t = static_cast<double>(i);
  CHECK(hemisphere_crossings(still, Eigen::Vector3d::UnitZ()).empty());

  // meridian through both poles, one revolution
  const auto m = circle(Eigen::Vector3d::UnitZ(), Eigen::Vector3d::UnitX(), 401, 1.0);
  const auto c = hemisphere_crossings(m, Eigen::Vector3d::UnitZ());
  REQUIRE(c.size() == 2);
  CHECK(c[0] == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(c[1] == doctest::Approx(300.0).epsilon(1e-9));
  CHECK(hemisphere_crossings(circle(Eigen::Vector3d::UnitZ(), Eigen::Vector3d::UnitX(), 801,
                                    3.0),
                             Eigen::Vector3d::UnitZ())
            .size() == 6);
}

TEST_CASE("closed paths cross any great circle an even number of times") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (int rep = 0; rep < 50; ++rep) {
    // random smooth closed loop
    Eigen::Vector3d a(nd(rng), nd(rng), nd(rng)), b(nd(rng), nd(rng), nd(rng)),
        c(nd(rng), nd(rng), nd(rng));
    std::vector<BlochPoint> p;
    const int n = 500;
    for (int i = 0; i < n; ++i) {
      const double s = 2 * kPi * (i % (n - 1)) / (n - 1);
      Eigen::Vector3d r = a + std::cos(s) * b + std::sin(2 * s) * c;
      r.normalize();
      p.push_back({static_cast<double>(i), r.x(), r.y(), r.z()});
    }
    Eigen::Vector3d axis(nd(rng), nd(rng), nd(rng));
    axis.normalize();
    CHECK(hemisphere_crossings(p, axis).size() % 2 == 0);
  }
}

TEST_CASE("spiral axis of a uniform rotation") {
  // rotation about z at latitude 30 degrees
  std::vector<BlochPoint> p;
  for (int i = 0; i < 400; ++i) {
    const double a = 0.05 * i;
    p.push_back({0.05 * i, std::cos(a) * std::cos(kPi / 6), std::sin(a) * std::cos(kPi / 6),
                 std::sin(kPi / 6)});
  }
  const auto ax = spiral_axes(p, 100);
  REQUIRE(ax.size() == p.size());
  for (const auto& n : ax) CHECK(n.z() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(spiral_axis_crossings(p, 100).empty());
}

TEST_CASE("pure block branch stays on the sphere") {
  const auto b = run_scenario(find_preset("fig4").base);
  REQUIRE_FALSE(b.bloch.empty());
  CHECK(b.bloch.front().z == doctest::Approx(-1.0));
  double worst = 0;
  for (const auto& p : b.bloch) worst = std::max(worst, std::abs(p.r().norm() - 1.0));
  CHECK(worst < 1e-8);
}

TEST_CASE("winding switches side near the coherence minimum") {
  const auto b = run_scenario(find_preset("fig4").base);
  REQUIRE(b.events.rho12_min);
  const double tmin = b.events.rho12_min->t;
  CHECK(tmin > 6.0);
  CHECK(tmin < 9.0);
  // literal sign change of path . fitted axis comes early
  REQUIRE_FALSE(b.events.spiral_crossings.empty());
  CHECK(b.events.spiral_crossings.front() == doctest::Approx(3.8).epsilon(0.1));
  // enclosure of the antipode of the start point
  REQUIRE_FALSE(b.events.antipode_crossings.empty());
  const double ta = b.events.antipode_crossings.front();
  CHECK(ta > 6.0);
  CHECK(ta < 9.0);
  CHECK(std::abs(ta - tmin) < 0.5);
}

TEST_CASE("interior minimum") {
  std::vector<double> t, v;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(i);
    const double x = i / 100.0;
    // up to 1, down to 0.1 at 60, back up to 0.5
    v.push_back(x < 0.25 ? 4 * x : x < 0.6 ? 1 - 0.9 * (x - 0.25) / 0.35 : 0.1 + (x - 0.6));
  }
  const auto m = interior_minimum(t, v);
  REQUIRE(m);
  CHECK(m->index == 60);
  CHECK(m->t == 60.0);
  CHECK(m->value == doctest::Approx(0.1));

  std::vector<double> rise;
  for (double x : t) rise.push_back(x);
  CHECK_FALSE(interior_minimum(t, rise));
}
