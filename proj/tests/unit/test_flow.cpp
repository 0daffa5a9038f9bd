#include <doctest.h>

#include <cmath>
#include <random>

#include "common.hpp"
#include "nlpa/flow.hpp"
#include "nlpa/renormalization.hpp"

using namespace nlpa;
using namespace nlpa::test;

namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

double dist(const TranslationSurface& S, const SurfacePoint& a, const SurfacePoint& b) {
  return S.flat_distance(a, b).value;
}

}  // namespace

TEST_CASE("zero time gives the start point") {
  auto f = NonlinearMap::standard(torus(), kTorusBeta, kTorusAlpha);
  StableField F(f);
  Flow fl(F);
  SurfacePoint p = torus().surface->normalize({0.2, 0.3});
  Trajectory tr = fl.integrate(p, 0.0);
  CHECK(tr.x.size() == 1);
  CHECK(tr.status == TrajectoryStatus::Complete);
  CHECK(tr.end().u == p.u);
  CHECK(tr.end().s == p.s);
}

TEST_CASE("unperturbed flow is a straight translation") {
  std::mt19937_64 rng(11);
  for (const Preset* pr : {&torus(), &genus2()}) {
    auto f = NonlinearMap::standard(*pr, 0.0, pr == &torus() ? kTorusAlpha : kG2Alpha);
    StableField F(f);
    Flow fl(F);
    const auto& S = *pr->surface;
    std::uniform_real_distribution<double> T(-3.0, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 30; ++i) {
      SurfacePoint p = random_point(S, rng);
      double t = T(rng);
      if (S.distance_to_cones(p).value < 0.05) continue;
      try {
        worst = std::max(worst, dist(S, fl.flow(p, t), S.develop(p, {0.0, t})));
      } catch (const Error& e) {
        // the straight path may pass through a cone point
        CHECK((e.code() == ErrorCode::Captured || e.code() == ErrorCode::SingularHit));
      }
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("trajectory on the incoming separatrix is captured") {
  auto f = NonlinearMap::standard(genus2(), NonlinearMap::default_beta(genus2().phi.lambda()), kG2Alpha);
  StableField F(f);
  Flow fl(F);
  const auto& S = *genus2().surface;
  for (int sheet = 1; sheet <= 3; ++sheet) {
    SurfacePoint p = S.from_frame({0, sheet, {0.0, -0.01}, 0.0});
    Trajectory tr = fl.integrate(p, 1.0, false);
    CHECK(tr.status == TrajectoryStatus::Captured);
    CHECK(tr.cone == 0);
    // the field is (0, 1) on the axis
    CHECK(tr.t_end == doctest::Approx(0.01).epsilon(1e-6));
    CHECK_THROWS_AS(fl.flow(p, 1.0), Error);
  }
}

TEST_CASE("renormalization residual") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> T(-1.0, 1.0);
  {
    auto f = NonlinearMap::standard(torus(), 0.0, kTorusAlpha);
    StableField F(f);
    Flow fl(F);
    for (int i = 0; i < 10; ++i) CHECK(fl.renormalization_residual(random_point(*torus().surface, rng), T(rng)) <= 1e-12);
  }
  auto f = NonlinearMap::standard(torus(), kTorusBeta, kTorusAlpha);
  StableField F(f);
  Flow fl(F);
  SurfacePoint p = random_point(*torus().surface, rng);
  CHECK(fl.renormalization_residual(p, 0.0) == 0.0);
  double worst = 0.0;
  for (int i = 0; i < 8; ++i) worst = std::max(worst, fl.renormalization_residual(random_point(*torus().surface, rng), T(rng)));
  CHECK(worst <= 1e-6);
}

TEST_CASE("flow property") {
  auto f = NonlinearMap::standard(torus(), kTorusBeta, kTorusAlpha);
  StableField F(f);
  Flow fl(F);
  const auto& S = *torus().surface;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> T(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    SurfacePoint p = random_point(S, rng);
    double t = T(rng), s = T(rng);
    worst = std::max(worst, dist(S, fl.flow(p, t + s), fl.flow(fl.flow(p, s), t)));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("unperturbed first return on the torus is the rotation") {
  auto f = NonlinearMap::standard(torus(), 0.0, kTorusAlpha);
  StableField F(f);
  Flow fl(F);
  // base length and rotation number from the contracting eigenvector (1, -phi)
  const double L0 = 1.0 / std::sqrt(1.0 + kPhi * kPhi);
  const double rho = 2.0 - kPhi;
  Transversal g = base_transversal(torus(), L0);
  CHECK(g.length() == doctest::Approx(L0).epsilon(1e-15));
  double worst = 0.0, umax = 0.0;
  for (int i = 0; i < 40; ++i) {
    const double x = (i + 0.37) * L0 / 40;
    ReturnResult r = fl.first_return(g, x);
    REQUIRE(!r.captured);
    const double expect = std::fmod(x + (1.0 - rho) * L0, L0);
    worst = std::max(worst, std::abs(r.xi - expect));
    CHECK(r.time > 0.0);
    umax = std::max(umax, r.time);
  }
  CHECK(worst <= 1e-10);
  CHECK(umax < 3.0);
}

TEST_CASE("first return from a singular point is captured") {
  auto f = NonlinearMap::standard(genus2(), 0.0, kG2Alpha);
  StableField F(f);
  Flow fl(F);
  ExactIET T0 = build_exact_iet(genus2());
  Transversal g = base_transversal(genus2(), to_double(T0.total()));
  for (dd x : T0.discontinuities()) {
    ReturnResult r = fl.first_return(g, to_double(x));
    CHECK(r.captured);
    CHECK(r.cone == 0);
  }
}

TEST_CASE("return times are bounded and positive") {
  auto f = NonlinearMap::standard(torus(), kTorusBeta, kTorusAlpha);
  StableField F(f);
  Flow fl(F);
  Transversal g = base_transversal(torus(), to_double(torus().iet.base_length));
  double umax = 0.0;
  for (int i = 0; i < 25; ++i) {
    ReturnResult r = fl.first_return(g, (i + 0.5) * g.length() / 25);
    REQUIRE(!r.captured);
    CHECK(r.time > 0.0);
    umax = std::max(umax, r.time);
  }
  CHECK(umax < 10.0);
}
