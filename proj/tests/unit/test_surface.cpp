#include <doctest.h>

#include <cmath>
#include <random>

#include "nlpa/errors.hpp"
#include "nlpa/presets.hpp"

using namespace nlpa;

namespace {

const Preset& torus() {
  static const Preset p = preset_by_name("torus");
  return p;
}
const Preset& genus2() {
  static const Preset p = preset_by_name("genus2");
  return p;
}

// Uniform point of the polygon by rejection from its bounding box.
SurfacePoint random_point(const TranslationSurface& S, std::mt19937_64& rng) {
  double lo_u = 1e9, hi_u = -1e9, lo_s = 1e9, hi_s = -1e9;
  for (auto& v : S.vertices()) {
    lo_u = std::min(lo_u, v.u), hi_u = std::max(hi_u, v.u);
    lo_s = std::min(lo_s, v.s), hi_s = std::max(hi_s, v.s);
  }
  std::uniform_real_distribution<double> U(lo_u, hi_u), V(lo_s, hi_s);
  for (;;) {
    Vec2 x{U(rng), V(rng)};
    if (S.contains(x)) return S.normalize(x);
  }
}

}  // namespace

TEST_CASE("torus preset eigen-data") {
  // leading root of x^2 - 3x + 1
  CHECK(torus().phi.lambda() == doctest::Approx(2.6180339887498949).epsilon(1e-15));
  CHECK(torus().phi.power_applied() == 1);
  CHECK(torus().surface->area() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(torus().surface->cone_points().empty());
  auto o = torus().phi.eval_phi(SurfacePoint::at({0, 0}));
  CHECK(o.u == 0.0);
  CHECK(o.s == 0.0);
}

TEST_CASE("parabolic and non-unimodular matrices are rejected") {
  try {
    build_torus({{{1, 1}, {0, 1}}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonHyperbolicMatrix);
  }
  CHECK_THROWS_AS(build_torus({{{2, 1}, {1, 2}}}), Error);
}

TEST_CASE("negative trace needs the square") {
  Preset p = build_torus({{{-2, -1}, {-1, -1}}});
  CHECK(p.phi.power_applied() == 2);
  CHECK(p.phi.lambda() == doctest::Approx(std::pow(2.6180339887498949, 2)).epsilon(1e-14));
}

TEST_CASE("genus-2 preset structure") {
  const auto& S = *genus2().surface;
  REQUIRE(S.cone_points().size() == 1);
  CHECK(S.cone_points()[0].multiplicity == 3);
  int euler = 0;
  for (auto& c : S.cone_points()) euler += c.multiplicity - 1;
  CHECK(euler == 2 * S.genus() - 2);
  CHECK(S.area() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(S.delta_sigma() > 0.0);
  // Perron root of the loop matrix, from an independent power iteration
  CHECK(genus2().raw.lambda_raw() == doctest::Approx(8.7396813182204243427).epsilon(1e-15));
  CHECK(genus2().phi.power_applied() == 1);
  // angle cycle sums to 6 pi
  double total = 0.0;
  const auto& vc = S.vertex_classes()[S.cone_points()[0].vertex_class];
  CHECK(vc.corners.size() == 8);
  CHECK(vc.total_angle == doctest::Approx(6 * M_PI));
  (void)total;
}

TEST_CASE("gluing involution") {
  for (const Preset* p : {&torus(), &genus2()}) {
    const auto& S = *p->surface;
    const auto& pr = S.pairing();
    for (int i = 0; i < static_cast<int>(pr.size()); ++i) {
      CHECK(pr[pr[i]] == i);
      Vec2 back = S.offsets()[i] + S.offsets()[pr[i]];
      CHECK(norm(back) < 1e-15);
    }
  }
}

TEST_CASE("normalize is idempotent") {
  std::mt19937_64 rng(1);
  for (const Preset* p : {&torus(), &genus2()}) {
    const auto& S = *p->surface;
    std::uniform_real_distribution<double> D(-0.3, 0.3);
    for (int i = 0; i < 10000; ++i) {
      SurfacePoint a = random_point(S, rng);
      SurfacePoint b = S.normalize(a.pos());
      CHECK_EQ(a.u, b.u);
      CHECK_EQ(a.s, b.s);
      SurfacePoint c = S.develop(a, {D(rng), D(rng)});
      SurfacePoint d = S.normalize(c.pos());
      REQUIRE(c.u == d.u);
      REQUIRE(c.s == d.s);
    }
  }
}

TEST_CASE("edge points get one representative") {
  const auto& S = *genus2().surface;
  const auto& v = S.vertices();
  Vec2 mid = 0.5 * (v[1] + v[2]);
  SurfacePoint a = S.normalize(mid);
  SurfacePoint b = S.normalize(mid + S.offsets()[1]);
  CHECK(norm(a.pos() - b.pos()) <= 1e-15);
  CHECK(a.u < 0.5);  // the representative on the lower-left edge
  CHECK_THROWS_AS(S.normalize({5.0, 5.0}), Error);
}

TEST_CASE("flat distance") {
  std::mt19937_64 rng(2);
  const auto& S = *genus2().surface;
  SurfacePoint p = random_point(S, rng);
  CHECK(S.flat_distance(p, p).value == 0.0);
  SurfacePoint q = S.develop(p, {0.01, -0.02});
  auto d = S.flat_distance(p, q);
  CHECK(d.exact);
  CHECK(d.value == doctest::Approx(std::hypot(0.01, 0.02)).epsilon(1e-12));
  CHECK_THROWS_AS(S.flat_distance(p, torus().surface.operator*(), q), Error);

  // symmetry and triangle inequality inside a developed neighbourhood
  std::uniform_real_distribution<double> D(-0.05, 0.05);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    SurfacePoint a = random_point(S, rng);
    SurfacePoint b, c;
    try {
      b = S.develop(a, {D(rng), D(rng)});
      c = S.develop(a, {D(rng), D(rng)});
    } catch (const Error&) {
      continue;
    }
    auto ab = S.flat_distance(a, b), ba = S.flat_distance(b, a);
    auto bc = S.flat_distance(b, c), ac = S.flat_distance(a, c);
    if (!(ab.exact && bc.exact && ac.exact)) continue;
    CHECK(std::abs(ab.value - ba.value) <= 1e-12);
    CHECK(ac.value <= ab.value + bc.value + 1e-12);
    ++checked;
  }
  CHECK(checked > 200);
}

TEST_CASE("cone sector frames") {
  const auto& S = *genus2().surface;
  const double R = S.frame_radius();
  REQUIRE(R > 0.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(0.0, 6 * M_PI), rad(0.0, 0.95);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    ConeSectorFrame f;
    f.cone = 0;
    double th = ang(rng), r = R * rad(rng);
    f.sheet = static_cast<int>(th / (2 * M_PI)) + 1;
    f.local = {r * std::cos(th), r * std::sin(th)};
    SurfacePoint p = S.from_frame(f);
    ConeSectorFrame g = S.cone_sector_coords(p, 0);
    CHECK(g.sheet == f.sheet);
    SurfacePoint q = S.from_frame(g);
    worst = std::max(worst, norm(p.pos() - q.pos()) / std::max(1.0, norm(p.pos())));
    // radius is sheet independent
    CHECK(norm(g.local) == doctest::Approx(r).epsilon(1e-13));
  }
  CHECK(worst <= 1e-15);

  // walking once around the cone point advances the sheet cyclically
  int prev = S.cone_sector_coords(S.from_frame({0, 1, {0.5 * R, 0.0}, 0.0}), 0).sheet;
  int steps = 0;
  for (int k = 1; k <= 60; ++k) {
    double th = 6 * M_PI * k / 60.0;
    ConeSectorFrame f{0, static_cast<int>(std::fmod(th, 6 * M_PI) / (2 * M_PI)) + 1,
                      {0.5 * R * std::cos(th), 0.5 * R * std::sin(th)}, 0.0};
    int sh = S.cone_sector_coords(S.from_frame(f), 0).sheet;
    if (sh != prev) {
      CHECK(sh == prev % 3 + 1);
      ++steps;
    }
    prev = sh;
  }
  CHECK(steps == 3);

  auto at_sigma = S.cone_sector_coords(S.normalize(S.cone_points()[0].position), 0);
  CHECK(norm(at_sigma.local) == 0.0);
  CHECK_THROWS_AS(S.cone_sector_coords(S.normalize(0.5 * (S.vertices()[0] + S.vertices()[4])), 0), Error);
}

TEST_CASE("linear map: derivative, area, fixed cone point") {
  std::mt19937_64 rng(4);
  for (const Preset* pr : {&torus(), &genus2()}) {
    const auto& S = *pr->surface;
    const auto& phi = pr->phi;
    const double lam = phi.lambda();
    int ok = 0;
    for (int i = 0; i < 1000; ++i) {
      SurfacePoint p = random_point(S, rng);
      if (S.distance_to_cones(p).value < 1e-3) continue;
      const double h = 1e-7;
      try {
        SurfacePoint c = phi.eval_phi(p);
        SurfacePoint pu = phi.eval_phi(S.develop(p, {h, 0}));
        SurfacePoint ps = phi.eval_phi(S.develop(p, {0, h}));
        auto du = S.displacement(c, pu, 1e-3), ds = S.displacement(c, ps, 1e-3);
        REQUIRE(du);
        REQUIRE(ds);
        CHECK(std::abs(du->u / h - lam) <= 1e-9 * lam * 1e3);
        CHECK(std::abs(du->s) <= 1e-6);
        CHECK(std::abs(ds->s / h - 1.0 / lam) <= 1e-6);
        SurfacePoint back = phi.eval_phi_inverse(c);
        auto e = S.displacement(p, back, 1e-3);
        REQUIRE(e);
        CHECK(norm(*e) <= 1e-12);
        ++ok;
      } catch (const Error&) {
      }
    }
    CHECK(ok > 900);
    if (!S.cone_points().empty()) {
      SurfacePoint sg = S.normalize(S.cone_points()[0].position);
      SurfacePoint im = phi.eval_phi(sg);
      CHECK(im.u == sg.u);
      CHECK(im.s == sg.s);
    }
  }
}

TEST_CASE("linear map preserves triangle occupancy") {
  std::mt19937_64 rng(5);
  const auto& S = *genus2().surface;
  const auto& tris = S.triangles();
  std::vector<double> area(tris.size()), count(tris.size(), 0.0);
  for (std::size_t t = 0; t < tris.size(); ++t) {
    Vec2 a = S.vertices()[tris[t][0]], b = S.vertices()[tris[t][1]], c = S.vertices()[tris[t][2]];
    area[t] = 0.5 * cross(b - a, c - a);
  }
  const int n = 200000;
  int used = 0;
  for (int i = 0; i < n; ++i) {
    SurfacePoint p = random_point(S, rng);
    try {
      SurfacePoint q = genus2().phi.eval_phi(p);
      count[S.locate_triangle(q.pos())] += 1.0;
      ++used;
    } catch (const Error&) {
    }
  }
  for (std::size_t t = 0; t < tris.size(); ++t) {
    double frac = count[t] / used;
    double se = std::sqrt(area[t] * (1 - area[t]) / used);
    CHECK(std::abs(frac - area[t]) <= 3 * se + 1e-12);
  }
}

TEST_CASE("vertical segments are stretched by lambda") {
  const auto& S = *genus2().surface;
  const auto& phi = genus2().phi;
  SurfacePoint p = S.normalize({0.5, 0.05});
  SurfacePoint q = S.develop(p, {0.001, 0.0});
  auto d = S.displacement(phi.eval_phi(p), phi.eval_phi(q), 0.1);
  REQUIRE(d);
  CHECK(d->u == doctest::Approx(0.001 * phi.lambda()).epsilon(1e-10));
  CHECK(std::abs(d->s) <= 1e-14);
}

TEST_CASE("surface json round trip") {
  for (const Preset* pr : {&torus(), &genus2()}) {
    auto j = pr->surface->to_json();
    auto S2 = TranslationSurface::from_json(j);
    CHECK(S2.to_json() == j);
  }
}
