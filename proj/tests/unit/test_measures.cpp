#include <doctest.h>

#include <cmath>
#include <memory>

#include "common.hpp"
#include "nlpa/errors.hpp"
#include "nlpa/measures.hpp"

using namespace nlpa;
using namespace nlpa::test;

namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

// Golden rotation as the return map of the unperturbed torus flow.
struct Rotation {
  NonlinearMap f = NonlinearMap::standard(torus(), 0.0, kTorusAlpha);
  StableField F{f};
  Flow flow{F};
  std::unique_ptr<GIET> T;

  Rotation() {
    GIETOptions o;
    o.separatrix.t_max = 40.0;
    T = std::make_unique<GIET>(GIET::sample(flow, torus(), o));
  }
};

Rotation& rotation() {
  static Rotation r;
  return r;
}

}  // namespace

TEST_CASE("compensated sum keeps small terms") {
  CompensatedSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1.0);
}

TEST_CASE("line fit") {
  auto fit = fit_line({0, 1, 2, 3}, {1, -1, -3, -5});
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-14));
  auto flat = fit_line({0, 1, 2, 3}, {1, 2, 1, 2});
  CHECK(flat.r2 < 0.5);
}

TEST_CASE("transversal measure") {
  const GIET& T = *rotation().T;
  auto one = empirical_nu(T, 0.1, 1);
  REQUIRE(one.size() == 1);
  CHECK(one.weights[0] == 1.0);
  CHECK(one.xi[0] == 0.1);
  auto nu = empirical_nu(T, 0.1, 5000);
  CHECK(nu.total_mass() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(empirical_nu(T, 0.1, 0), Error);
  CHECK_THROWS_AS(empirical_nu(T, 0.0, 10), Error);
}

TEST_CASE("Birkhoff averages of the golden rotation") {
  const GIET& T = *rotation().T;
  const double L = T.length();
  CHECK(L == doctest::Approx(1.0 / std::sqrt(1.0 + kPhi * kPhi)).epsilon(1e-12));
  auto a = birkhoff_averages(T, 0.1, 100000, {[L](double x) { return x / L; },
                                              [L](double x) { return std::cos(2.0 * M_PI * x / L); }});
  CHECK(std::abs(a[0] - 0.5) < 1e-3);
  CHECK(std::abs(a[1]) < 1e-3);
}

TEST_CASE("suspension of the transversal measure") {
  Rotation& r = rotation();
  auto nu = empirical_nu(*r.T, 0.1, 400);
  auto mu = suspend_mu(nu, *r.T, r.flow, 0.1, 4);
  CHECK(mu.size() > nu.size());
  CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
  // unperturbed: Lebesgue, so a bump integrates to its volume over the area
  const auto& S = *torus().surface;
  BumpObservable b{S.normalize({0.1, 0.2}), 0.2};
  const double leb = std::pow(16.0 / 15.0 * 0.2, 2) / S.area();
  CHECK(mu.integrate([&](const SurfacePoint& x) { return b(S, x); }) == doctest::Approx(leb).epsilon(0.1));
  CHECK_THROWS_AS(suspend_mu(nu, *r.T, r.flow, 0.0), Error);
}

TEST_CASE("bump observable") {
  const auto& S = *torus().surface;
  BumpObservable b{S.normalize({0.1, 0.2}), 0.05};
  CHECK(b(S, b.center) == 1.0);
  CHECK(b(S, S.normalize({0.1, 0.26})) == 0.0);
  CHECK(b(S, S.normalize({0.125, 0.2})) == doctest::Approx(0.5625));
}

TEST_CASE("correlations") {
  Rotation& r = rotation();
  auto nu = empirical_nu(*r.T, 0.1, 300);
  auto mu = suspend_mu(nu, *r.T, r.flow, 0.1, 4);
  auto one = [](const SurfacePoint&) { return 1.0; };
  auto zero = correlation_decay(r.f, mu, one, one, 3);
  for (double c : zero.C) CHECK(std::abs(c) < 1e-15);

  const auto& S = *torus().surface;
  BumpObservable b{S.normalize({0.1, 0.2}), 0.2};
  auto phi = [&](const SurfacePoint& x) { return b(S, x); };
  auto rep = correlation_decay(r.f, mu, phi, phi, 2);
  const double m = mu.integrate(phi);
  const double var = mu.integrate([&](const SurfacePoint& x) { return phi(x) * phi(x); }) - m * m;
  CHECK(rep.C[0] == doctest::Approx(var).epsilon(1e-10));
}

TEST_CASE("SRB pushforward") {
  Rotation& r = rotation();
  const auto& S = *torus().surface;
  const SurfacePoint p = S.normalize({0.05, 0.05});
  BumpObservable b{p, 0.3};
  CHECK_THROWS_AS(srb_pushforward(r.flow, p, 0.0, 100, {0}, {b}, {0.0}), Error);
  auto tab = srb_pushforward(r.flow, p, 0.1, 400, {0, 1}, {b}, {0.0});
  REQUIRE(tab.rows.size() == 2);
  // uniform on a vertical segment of half length 0.1 through the bump centre
  double expect = 0.0;
  for (int k = 0; k < 400; ++k) {
    const double t = -0.1 + (k + 0.5) * 0.2 / 400, y = t / 0.3;
    expect += (1.0 - y * y) * (1.0 - y * y) / 400;
  }
  CHECK(tab.rows[0].pushed[0] == doctest::Approx(expect).epsilon(1e-10));
  CHECK(tab.rows[0].diff[0] == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("entropy identity") {
  auto f0 = NonlinearMap::standard(torus(), 0.0, kTorusAlpha);
  StableField F0(f0);
  std::mt19937_64 rng(2);
  std::vector<SurfacePoint> pts;
  for (int i = 0; i < 50; ++i) pts.push_back(random_point(*torus().surface, rng));
  auto rep = entropy_check(F0, pts, 1e-12, 20);
  CHECK(rep.max_rel_error <= 1e-15);
  CHECK(rep.entropy == doctest::Approx(std::log(kPhi * kPhi)).epsilon(1e-15));
  CHECK(rep.unstable_average == doctest::Approx(std::log(kPhi * kPhi)).epsilon(1e-12));

  auto f = NonlinearMap::standard(torus(), kTorusBeta, kTorusAlpha);
  StableField F(f);
  auto rep2 = entropy_check(F, pts, 1e-12, 20);
  CHECK(rep2.max_rel_error <= 1e-8);
}
