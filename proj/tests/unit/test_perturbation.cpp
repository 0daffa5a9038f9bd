#include <doctest.h>

#include <cmath>
#include <random>

#include "nlpa/errors.hpp"
#include "nlpa/perturbation.hpp"
#include "nlpa/presets.hpp"
#include "nlpa/stable_field.hpp"

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

// Point in the support disk of the first site, uniform in area.
SurfacePoint random_near_site(const NonlinearMap& f, std::mt19937_64& rng) {
  const auto& st = f.sites()[0];
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double r = st.support_radius() * std::sqrt(U(rng));
  int sheets = st.kind == SiteKind::Conical ? f.surface().cone_points()[0].multiplicity : 1;
  double th = 2 * M_PI * sheets * U(rng);
  return f.from_local(0, th, {r * std::cos(th), r * std::sin(th)});
}

constexpr double kG2Alpha = 0.02;

}  // namespace

TEST_CASE("bump kernels") {
  for (KernelKind kind : {KernelKind::C1, KernelKind::C2}) {
    BumpKernel K{kind};
    CHECK(K.k(0.0) == 1.0);
    CHECK(K.k(1.0) == 0.0);
    CHECK(K.k(-1.0) == 0.0);
    CHECK(K.k(0.3) == K.k(-0.3));
    for (double r = 0.0; r <= 1.0; r += 0.01) CHECK(K.dk(r) <= 0.0);
    const double h = 1e-6;
    for (double r = 0.05; r < 0.95; r += 0.1)
      CHECK(K.dk(r) == doctest::Approx((K.k(r + h) - K.k(r - h)) / (2 * h)).epsilon(1e-7));
  }
  // the smoother kernel has a vanishing second derivative at the edge
  CHECK(std::abs(BumpKernel{KernelKind::C2}.d2k(1.0 - 1e-9)) < 1e-6);
  CHECK(std::abs(BumpKernel{KernelKind::C1}.d2k(1.0 - 1e-9)) > 1.0);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(NonlinearMap::standard(torus(), -3.0, 0.1), Error);
  CHECK_THROWS_AS(NonlinearMap::standard(torus(), 0.5, 0.1), Error);
  CHECK_THROWS_AS(NonlinearMap::standard(torus(), -1.0, 0.6), Error);
  CHECK_THROWS_AS(NonlinearMap::standard(genus2(), -1.0, 0.3), Error);
  try {
    NonlinearMap::standard(torus(), -3.0, 0.1);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("(-2.61803") != std::string::npos);
  }
  CHECK(NonlinearMap::default_beta(torus().phi.lambda()) == doctest::Approx(-2.0450849718747371).epsilon(1e-15));
}

TEST_CASE("beta = 0 reduces to the linear map exactly") {
  std::mt19937_64 rng(11);
  for (const Preset* pr : {&torus(), &genus2()}) {
    NonlinearMap f = NonlinearMap::standard(*pr, 0.0, pr->id == "torus" ? 0.1 : kG2Alpha);
    for (int i = 0; i < 10000; ++i) {
      SurfacePoint p = random_point(*pr->surface, rng);
      SurfacePoint a = f.eval_f(p), b = pr->phi.eval_phi(p);
      REQUIRE(a.u == b.u);
      REQUIRE(a.s == b.s);
      SurfacePoint c = f.eval_f_inverse(a), d = pr->phi.eval_phi_inverse(a);
      REQUIRE(c.u == d.u);
      REQUIRE(c.s == d.s);
    }
  }
}

TEST_CASE("fixed points on the torus") {
  NonlinearMap f = NonlinearMap::standard(torus(), -2.0, 0.1);
  auto rec = f.fixed_points(0);
  // 50-digit bisection oracle
  CHECK(rec.t0 == doctest::Approx(0.031709033417319166821).epsilon(1e-14));
  CHECK(f.kernel().k(rec.t0 / 0.1) == doctest::Approx(0.8090169943749474241).epsilon(1e-14));
  CHECK(rec.m_u == doctest::Approx(1.7234938047918896962).epsilon(1e-12));
  REQUIRE(rec.p.size() == 2);
  for (auto& p : rec.p) {
    auto d = f.surface().flat_distance(f.eval_f(p), p);
    CHECK(d.value <= 1e-12);
  }
  NonlinearMap g = NonlinearMap::standard(torus(), -2.0, 0.1, KernelKind::C2);
  CHECK(g.fixed_points(0).t0 == doctest::Approx(0.026116563827873521463).epsilon(1e-14));
  CHECK(g.fixed_points(0).m_u == doctest::Approx(1.7106434339957912829).epsilon(1e-12));

  CHECK_THROWS_AS(NonlinearMap::standard(torus(), -0.1, 0.1).fixed_points(0), Error);
  // t0 shrinks to 0 as beta approaches 1 - lambda
  double lam = torus().phi.lambda();
  double t_near = NonlinearMap::standard(torus(), 1.0 - lam - 1e-8, 0.1).fixed_points(0).t0;
  CHECK(t_near < 1e-4);
}

TEST_CASE("fixed points at the cone point") {
  double lam = genus2().phi.lambda();
  double beta = NonlinearMap::default_beta(lam);
  NonlinearMap f = NonlinearMap::standard(genus2(), beta, kG2Alpha);
  auto rec = f.fixed_points(0);
  CHECK(rec.p.size() == 6);
  CHECK(rec.q.size() == 6);
  CHECK(rec.m_u > 1.0);
  for (auto& p : rec.p) {
    CHECK(f.surface().flat_distance(f.eval_f(p), p).value <= 1e-12);
    CHECK(f.surface().distance_to_cones(p).value == doctest::Approx(rec.t0).epsilon(1e-12));
  }
  // six distinct points
  for (std::size_t i = 0; i < rec.p.size(); ++i)
    for (std::size_t j = i + 1; j < rec.p.size(); ++j)
      CHECK(norm(rec.p[i].pos() - rec.p[j].pos()) > 1e-3);
}

TEST_CASE("cone point is fixed and inverse round trips") {
  std::mt19937_64 rng(12);
  for (const Preset* pr : {&torus(), &genus2()}) {
    const bool tor = pr->id == "torus";
    NonlinearMap f = NonlinearMap::standard(*pr, tor ? -2.0 : NonlinearMap::default_beta(pr->phi.lambda()),
                                            tor ? 0.1 : kG2Alpha);
    SurfacePoint c = pr->surface->normalize(pr->anchor);
    SurfacePoint fc = f.eval_f(c);
    CHECK(fc.u == c.u);
    CHECK(fc.s == c.s);
    SurfacePoint ic = f.eval_f_inverse(c);
    CHECK(norm(ic.pos() - c.pos()) == 0.0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      SurfacePoint p = (i % 2) ? random_point(*pr->surface, rng) : random_near_site(f, rng);
      SurfacePoint q = f.eval_f(p);
      SurfacePoint back = f.eval_f_inverse(q);
      auto d = pr->surface->flat_distance(p, back);
      worst = std::max(worst, d.value);
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("f agrees with phi outside the support disks") {
  std::mt19937_64 rng(13);
  NonlinearMap f = NonlinearMap::standard(genus2(), -8.0, kG2Alpha);
  int outside = 0;
  for (int i = 0; i < 5000; ++i) {
    SurfacePoint p = random_point(f.surface(), rng);
    if (f.locate(p)) continue;
    ++outside;
    SurfacePoint a = f.eval_f(p), b = f.phi().eval_phi(p);
    REQUIRE(a.u == b.u);
    REQUIRE(a.s == b.s);
    auto J = f.jacobian(p);
    CHECK(J.a == f.lambda());
    CHECK(J.b == 0.0);
  }
  CHECK(outside > 4000);
}

TEST_CASE("analytic Jacobian against central differences") {
  std::mt19937_64 rng(14);
  for (const Preset* pr : {&torus(), &genus2()}) {
    const bool tor = pr->id == "torus";
    NonlinearMap f = NonlinearMap::standard(*pr, tor ? -2.0 : -8.0, tor ? 0.1 : kG2Alpha);
    const auto& S = f.surface();
    const double h = 1e-6 * (tor ? 1.0 : 0.2);
    int n = 0;
    for (int i = 0; i < 1000; ++i) {
      SurfacePoint p = random_near_site(f, rng);
      auto L = f.locate(p);
      if (!L || L->r < 10 * h || L->r > f.sites()[0].support_radius() - 10 * h) continue;
      auto J = f.jacobian(p);
      auto fd = [&](Vec2 dir) {
        SurfacePoint a = f.eval_f(S.develop(p, h * dir)), b = f.eval_f(S.develop(p, -1.0 * (h * dir)));
        auto d = S.displacement(b, a, 0.1);
        REQUIRE(d);
        return (1.0 / (2 * h)) * *d;
      };
      Vec2 du = fd({1, 0}), ds = fd({0, 1});
      CHECK(std::abs(J.a - du.u) <= 1e-6 * (tor ? 1.0 : 5.0));
      CHECK(std::abs(J.b - ds.u) <= 1e-6 * (tor ? 1.0 : 5.0));
      CHECK(std::abs(ds.s - 1.0 / f.lambda()) <= 1e-6);
      CHECK(J.a > 0.0);
      ++n;
    }
    CHECK(n > 900);
  }
  // on the u-axis the shear entry vanishes and a has the closed form
  NonlinearMap f = NonlinearMap::standard(torus(), -2.0, 0.1);
  double u = 0.05;
  auto J = f.jacobian(f.surface().normalize({u, 0.0}));
  BumpKernel K{KernelKind::C1};
  CHECK(J.b == 0.0);
  CHECK(J.a == doctest::Approx(f.lambda() - 2.0 * K.k(u / 0.1) - 2.0 * u * K.dk(u / 0.1) / 0.1).epsilon(1e-14));
  NonlinearMap g = NonlinearMap::standard(genus2(), -8.0, kG2Alpha);
  CHECK_THROWS_AS(g.jacobian(g.surface().normalize(genus2().anchor)), Error);
}

TEST_CASE("regular-site literal quadratic law") {
  NonlinearMap f = NonlinearMap::standard(torus(), -2.0, 0.01, KernelKind::C1, RadialLaw::Quadratic);
  auto rec = f.fixed_points(0);
  CHECK(f.kernel().k(rec.t0 * rec.t0 / 0.01) == doctest::Approx(0.8090169943749474241).epsilon(1e-13));
  CHECK(f.surface().flat_distance(f.eval_f(rec.p[0]), rec.p[0]).value <= 1e-12);
  std::mt19937_64 rng(15);
  for (int i = 0; i < 1000; ++i) {
    SurfacePoint p = random_near_site(f, rng);
    CHECK(f.surface().flat_distance(f.eval_f_inverse(f.eval_f(p)), p).value <= 1e-10);
  }
}

TEST_CASE("injectivity probe") {
  std::mt19937_64 rng(16);
  NonlinearMap f = NonlinearMap::standard(torus(), -2.0, 0.1);
  for (int i = 0; i < 100000; ++i) {
    SurfacePoint p = random_near_site(f, rng), q = random_near_site(f, rng);
    if (p.u == q.u && p.s == q.s) continue;
    SurfacePoint a = f.eval_f(p), b = f.eval_f(q);
    REQUIRE((a.u != b.u || a.s != b.s));
  }
}

TEST_CASE("continuity across cone sectors") {
  NonlinearMap f = NonlinearMap::standard(genus2(), -8.0, kG2Alpha);
  const auto& S = f.surface();
  double worst = 0.0;
  // points on the rays between corner sectors, approached from both sides
  const auto& vc = S.vertex_classes()[S.cone_points()[0].vertex_class];
  for (std::size_t k = 0; k < vc.corners.size(); ++k) {
    double th = vc.offsets[k];
    for (double r : {0.003, 0.01, 0.017}) {
      double e = 1e-13;
      Vec2 a{r * std::cos(th - e), r * std::sin(th - e)}, b{r * std::cos(th + e), r * std::sin(th + e)};
      double tha = std::fmod(th - e + 6 * M_PI, 6 * M_PI), thb = std::fmod(th + e + 6 * M_PI, 6 * M_PI);
      SurfacePoint pa = f.from_local(0, tha, a), pb = f.from_local(0, thb, b);
      auto d = S.flat_distance(f.eval_f(pa), f.eval_f(pb));
      worst = std::max(worst, d.value);
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("open cover certificate") {
  NonlinearMap lin = NonlinearMap::standard(torus(), 0.0, 0.1);
  auto r0 = lin.certify_cover(10, 1);
  CHECK(r0.eta == doctest::Approx(torus().phi.lambda() - 1.0).epsilon(1e-10));
  NonlinearMap f = NonlinearMap::standard(torus(), -2.0, 0.1);
  auto r = f.certify_cover(1000000, 2);
  CHECK(r.eta > 0.0);
  CHECK(r.delta > 0.0);
  NonlinearMap weak = NonlinearMap::standard(torus(), -0.1, 0.1);
  try {
    weak.certify_cover(1000, 3);
    FAIL("expected CoverFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CoverFailure);
  }
}

TEST_CASE("shear series") {
  NonlinearMap lin = NonlinearMap::standard(torus(), 0.0, 0.1);
  StableField F0(lin);
  auto z = F0.shear_sum(torus().surface->normalize({0.2, 0.3}), 1e-12);
  CHECK(z.S == 0.0);
  CHECK(z.N == 0);

  NonlinearMap f = NonlinearMap::standard(torus(), -2.0, 0.1);
  StableField F(f);
  // 60-digit brute-force sums to depth 1000
  struct Ref {
    double u, s, S;
  } refs[] = {{0.2, 0.3, 0.0001655933899023225084},
              {0.03, 0.02, 0.26472796377730428957},
              {-0.05, 0.01, -0.10151782967587431765},
              {0.011, -0.07, -0.20063963403995098813}};
  for (auto& r : refs) {
    auto v = F.shear_sum(f.surface().normalize({r.u, r.s}), 1e-12);
    CHECK(std::abs(v.S - r.S) <= 1e-10);
    CHECK(v.tail <= 1e-12);
  }
  auto v = F.shear_sum(f.surface().normalize({0.2, 0.3}), 1e-12);
  auto rep = f.certify_cover(100000, 4);
  CHECK(std::abs(v.S) <= StableField::slope_bound(f.b_sup(), f.lambda(), 1.0 + rep.eta));

  // tighter tolerances never report a larger remainder
  double prev = 1.0;
  for (double tol : {1e-4, 1e-8, 1e-12, 1e-15}) {
    auto w = F.shear_sum(f.surface().normalize({0.03, 0.02}), tol);
    CHECK(w.tail <= prev);
    prev = w.tail;
  }
}

TEST_CASE("shear recursion and exact contraction") {
  std::mt19937_64 rng(17);
  for (const Preset* pr : {&torus(), &genus2()}) {
    const bool tor = pr->id == "torus";
    NonlinearMap f = NonlinearMap::standard(*pr, NonlinearMap::default_beta(pr->phi.lambda()), tor ? 0.1 : kG2Alpha);
    StableField F(f);
    double worst_rec = 0.0, worst_res = 0.0;
    for (int i = 0; i < 300; ++i) {
      SurfacePoint p = (i % 2) ? random_point(f.surface(), rng) : random_near_site(f, rng);
      if (f.surface().distance_to_cones(p).value < 1e-9) continue;
      double S0 = F.shear_sum(p, 1e-12).S;
      SurfacePoint fp = f.eval_f(p);
      double S1 = F.shear_sum(fp, 1e-12).S;
      auto J = f.jacobian(p);
      worst_rec = std::max(worst_rec, std::abs(S1 - f.lambda() * (J.a * S0 - J.b)));
      worst_res = std::max(worst_res, F.contraction_residual(p, 1e-12));
    }
    CHECK(worst_rec <= 1e-10);
    CHECK(worst_res <= 1e-10);
  }
}

TEST_CASE("stable vector at the fixed point is the contracting eigenvector") {
  NonlinearMap f = NonlinearMap::standard(torus(), -2.0, 0.1);
  StableField F(f);
  auto rec = f.fixed_points(0);
  auto v = F.eval_vs(rec.p[0], 1e-13);
  auto J = f.jacobian(rec.p[0]);
  // [[a, b], [0, 1/lambda]] (x, 1) = (1/lambda)(x, 1)  =>  x = b / (1/lambda - a)
  double x = J.b / (1.0 / f.lambda() - J.a);
  CHECK(std::abs(v.v.u - x) <= 1e-12);
  CHECK(v.v.s == 1.0);
  CHECK(F.contraction_residual(rec.p[0], 1e-13) <= 1e-12);
}

TEST_CASE("continuation in beta") {
  std::mt19937_64 rng(18);
  PerturbationSite st;
  st.alpha = 0.1;
  std::vector<SurfacePoint> pts;
  NonlinearMap f = NonlinearMap::standard(torus(), -2.0, 0.1);
  for (int i = 0; i < 200; ++i) pts.push_back(random_near_site(f, rng));
  auto same = continue_in_beta(torus().phi, st, KernelKind::C1, pts, {-1.5, -1.5, -1.5}, 1e-12);
  for (double d : same.deltas) CHECK(d == 0.0);
  auto zero = continue_in_beta(torus().phi, st, KernelKind::C1, pts, {0.0}, 1e-12);
  CHECK(zero.deltas.empty());

  // halving the step near beta0 scales the sup-delta roughly by one half
  const double b0 = -1.5, db = 0.02;
  auto coarse = continue_in_beta(torus().phi, st, KernelKind::C1, pts, {b0, b0 + db}, 1e-12);
  auto fine = continue_in_beta(torus().phi, st, KernelKind::C1, pts, {b0, b0 + db / 2}, 1e-12);
  double ratio = fine.deltas[0] / coarse.deltas[0];
  CHECK(ratio >= 0.3);
  CHECK(ratio <= 0.8);
}
