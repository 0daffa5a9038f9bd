#include "nlpa/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "nlpa/errors.hpp"
#include "nlpa/presets.hpp"

namespace nlpa {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;

std::string range_text(double lo, double hi, bool closed_hi) {
  std::ostringstream os;
  os.precision(10);
  os << "(" << lo << ", " << hi << (closed_hi ? "]" : ")");
  return os.str();
}
}  // namespace

double BumpKernel::k(double r) const {
  double x = 1.0 - r * r;
  if (x <= 0.0) return 0.0;
  return kind == KernelKind::C1 ? x * x : x * x * x;
}

double BumpKernel::dk(double r) const {
  double x = 1.0 - r * r;
  if (x <= 0.0) return 0.0;
  return kind == KernelKind::C1 ? -4.0 * r * x : -6.0 * r * x * x;
}

double BumpKernel::d2k(double r) const {
  double x = 1.0 - r * r;
  if (x <= 0.0) return 0.0;
  if (kind == KernelKind::C1) return -4.0 * x + 8.0 * r * r;
  return -6.0 * x * x + 24.0 * r * r * x;
}

double BumpKernel::max_abs_dk() const {
  // maxima at r = 1/sqrt(3) and r = 1/sqrt(5)
  return kind == KernelKind::C1 ? std::abs(dk(1.0 / std::sqrt(3.0))) : std::abs(dk(1.0 / std::sqrt(5.0)));
}

double BumpKernel::inverse(double c) const {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (k(mid) > c ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double PerturbationSite::support_radius() const {
  return law == RadialLaw::Linear ? alpha : std::sqrt(alpha);
}

double PerturbationSite::arg(double r) const { return law == RadialLaw::Linear ? r / alpha : r * r / alpha; }

double PerturbationSite::darg(double r) const { return law == RadialLaw::Linear ? 1.0 / alpha : 2.0 * r / alpha; }

NonlinearMap::NonlinearMap(LinearPA phi, BumpKernel kernel, std::vector<PerturbationSite> sites)
    : phi_(std::move(phi)), kernel_(kernel), sites_(std::move(sites)) {
  const TranslationSurface& S = phi_.surface();
  const double lam = phi_.lambda();
  if (phi_.half_turns() % 2 != 0 || (S.cone_points().size() > 0 && phi_.half_turns() != 0 &&
                                     phi_.half_turns() % (2 * S.cone_points()[0].multiplicity) != 0))
    throw Error(ErrorCode::InvalidParameter, "perturbation needs a map fixing every separatrix germ");
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    const auto& st = sites_[i];
    if (!(st.alpha > 0.0)) throw Error(ErrorCode::InvalidParameter, "alpha must be positive");
    if (!(st.beta > -lam && st.beta <= 0.0))
      throw Error(ErrorCode::InvalidParameter,
                  "beta outside the homeomorphism range " + range_text(-lam, 0.0, true));
    const double R = st.support_radius();
    if (st.kind == SiteKind::Conical) {
      if (st.cone < 0 || st.cone >= static_cast<int>(S.cone_points().size()))
        throw Error(ErrorCode::InvalidParameter, "conical site needs a cone point");
      if (!(R < 0.5 * S.delta_sigma()) || !(R * lam < S.frame_radius()))
        throw Error(ErrorCode::InvalidParameter,
                    "support radius must stay below delta_sigma / 2 = " + std::to_string(0.5 * S.delta_sigma()) +
                        " and inside the cone frame");
    } else {
      if (!S.is_lattice())
        throw Error(ErrorCode::InvalidParameter, "regular sites are supported on the lattice torus only");
      double syst = S.delta_sigma();
      double inr = 0.5 * syst;
      if (!(R < inr)) throw Error(ErrorCode::InvalidParameter, "support radius must stay below Syst / 2");
      SurfacePoint c = S.normalize(st.center);
      SurfacePoint fc = phi_.eval_phi(c);
      auto d = S.displacement(c, fc, 1.0);
      if (!d || norm(*d) > 1e-12) throw Error(ErrorCode::InvalidParameter, "regular site is not a fixed point");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (!sites_[j].enabled || !st.enabled) continue;
      auto d = S.flat_distance(S.normalize(st.center), S.normalize(sites_[j].center));
      if (d.value < R + sites_[j].support_radius())
        throw Error(ErrorCode::InvalidParameter, "support disks of distinct sites overlap");
    }
  }
}

double NonlinearMap::default_beta(double lambda) {
  return 0.5 * ((-lambda + 1.0 / (lambda * lambda)) + (1.0 - lambda));
}

NonlinearMap NonlinearMap::standard(const Preset& pr, double beta, double alpha, KernelKind kernel, RadialLaw law) {
  PerturbationSite st;
  st.center = pr.anchor;
  st.alpha = alpha;
  st.beta = beta;
  st.law = law;
  if (!pr.surface->cone_points().empty()) {
    st.kind = SiteKind::Conical;
    st.cone = 0;
  }
  return NonlinearMap(pr.phi, BumpKernel{kernel}, {st});
}

bool NonlinearMap::is_linear() const {
  for (const auto& st : sites_)
    if (st.enabled && st.beta != 0.0) return false;
  return true;
}

std::optional<SiteLocal> NonlinearMap::locate(const SurfacePoint& p) const {
  const TranslationSurface& S = surface();
  for (int i = 0; i < static_cast<int>(sites_.size()); ++i) {
    const auto& st = sites_[i];
    if (!st.enabled) continue;
    const double R = st.support_radius();
    if (st.kind == SiteKind::Regular) {
      Vec2 w = p.pos() - st.center;
      double r = norm(w);
      // canonical torus points are already centred at the origin
      if (r >= R && (st.center.u != 0.0 || st.center.s != 0.0)) {
        auto d = S.displacement(S.normalize(st.center), p, R);
        if (!d) continue;
        w = *d;
        r = norm(w);
      }
      if (r >= R) continue;
      return SiteLocal{i, w, 0.0, r};
    }
    auto f = S.nearest_cone_frame(p);
    if (!f || f->cone != st.cone) continue;
    double r = norm(f->local);
    if (r >= R) continue;
    return SiteLocal{i, f->local, f->theta, r};
  }
  return std::nullopt;
}

SurfacePoint NonlinearMap::from_local(int site, double theta, Vec2 w) const {
  const auto& st = sites_[site];
  const TranslationSurface& S = surface();
  if (st.kind == SiteKind::Regular) return S.normalize(st.center + w);
  if (w.u == 0.0 && w.s == 0.0) return S.normalize(S.cone_points()[st.cone].position);
  const double total = kTwoPi * S.cone_points()[st.cone].multiplicity;
  ConeSectorFrame f;
  f.cone = st.cone;
  double th = std::fmod(theta, total);
  f.sheet = static_cast<int>(std::floor(th / kTwoPi)) + 1;
  f.local = w;
  return S.from_frame(f);
}

SurfacePoint NonlinearMap::eval_f(const SurfacePoint& p) const {
  if (is_linear()) return phi_.eval_phi(p);
  auto L = locate(p);
  if (!L) return phi_.eval_phi(p);
  const auto& st = sites_[L->site];
  const double lam = lambda();
  const double factor = lam + st.beta * kernel_.k(st.arg(L->r));
  Vec2 w{factor * L->w.u, L->w.s / lam};
  if (st.kind == SiteKind::Regular) return surface().normalize(st.center + w);
  if (L->r == 0.0) return surface().normalize(surface().cone_points()[st.cone].position);
  return phi_.place_in_image_sheet(st.cone, L->theta, w);
}

SurfacePoint NonlinearMap::eval_f_step(const SurfacePoint& p, StepInfo& info) const {
  const double lam = lambda();
  info = StepInfo{{lam, 0.0, 1.0 / lam}, -1, std::numeric_limits<double>::infinity()};
  if (is_linear()) return phi_.eval_phi(p);
  auto L = locate(p);
  if (!L) return phi_.eval_phi(p);
  const auto& st = sites_[L->site];
  if (L->r == 0.0 && st.kind == SiteKind::Conical)
    throw Error(ErrorCode::AtConePoint, "Jacobian undefined at a cone point");
  info.jac = jacobian_local(L->site, L->w);
  info.site = L->site;
  info.r = L->r;
  const double factor = lam + st.beta * kernel_.k(st.arg(L->r));
  Vec2 w{factor * L->w.u, L->w.s / lam};
  if (st.kind == SiteKind::Regular) return surface().normalize(st.center + w);
  return phi_.place_in_image_sheet(st.cone, L->theta, w);
}

SurfacePoint NonlinearMap::eval_f_inverse(const SurfacePoint& q, double tol) const {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParameter, "tolerance must be positive");
  SurfacePoint p0 = phi_.eval_phi_inverse(q);
  if (is_linear()) return p0;
  auto L = locate(p0);
  if (!L) return p0;
  const auto& st = sites_[L->site];
  const double lam = lambda();
  const double s = L->w.s, u0 = L->w.u;
  if (u0 == 0.0) return p0;  // the s-axis is invariant
  const double sg = u0 > 0 ? 1.0 : -1.0;
  const double target = lam * std::abs(u0);
  auto F = [&](double x) {
    double r = std::hypot(x, s);
    return (lam + st.beta * kernel_.k(st.arg(r))) * x - target;
  };
  auto dF = [&](double x) {
    double r = std::hypot(x, s);
    double kk = kernel_.k(st.arg(r));
    double dk = r > 0 ? kernel_.dk(st.arg(r)) * st.darg(r) * x / r : 0.0;
    return lam + st.beta * kk + st.beta * dk * x;
  };
  double lo = std::abs(u0), hi = std::abs(u0) * lam / (lam + st.beta);
  double flo = F(lo), fhi = F(hi);
  if (flo > 0.0 || fhi < 0.0) {
    if (std::abs(flo) <= tol * target) hi = lo;
    else if (std::abs(fhi) <= tol * target) lo = hi;
    else throw Error(ErrorCode::RootBracketFailure, "no sign change on the inverse bracket");
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double fx = F(x);
    if (fx == 0.0) break;
    (fx < 0 ? lo : hi) = x;
    double d = dF(x);
    double nx = d > 0 ? x - fx / d : 0.5 * (lo + hi);
    if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
    if (std::abs(nx - x) <= 1e-17 * std::max(1.0, x) || hi - lo <= 4e-16 * hi) {
      x = nx;
      break;
    }
    x = nx;
  }
  if (std::abs(F(x)) > std::max(tol, 1e-15) * std::max(target, 1e-300) * 16)
    throw Error(ErrorCode::ToleranceNotMet, "inverse residual above tolerance");
  return from_local(L->site, L->theta, {sg * x, s});
}

Jacobian NonlinearMap::jacobian_local(int site, Vec2 w) const {
  const auto& st = sites_[site];
  const double lam = lambda();
  const double r = norm(w);
  if (r == 0.0) return {lam + st.beta * kernel_.k(0.0), 0.0, 1.0 / lam};
  const double x = st.arg(r);
  const double k = kernel_.k(x);
  // d k(arg(r)) / du = k'(x) arg'(r) u / r
  const double g = kernel_.dk(x) * st.darg(r) / r;
  return {lam + st.beta * k + st.beta * g * w.u * w.u, st.beta * g * w.u * w.s, 1.0 / lam};
}

Jacobian NonlinearMap::jacobian(const SurfacePoint& p) const {
  const double lam = lambda();
  const TranslationSurface& S = surface();
  if (!S.cone_points().empty()) {
    auto d = S.distance_to_cones(p);
    if (d.exact && d.value == 0.0) throw Error(ErrorCode::AtConePoint, "Jacobian undefined at a cone point");
  }
  if (is_linear()) return {lam, 0.0, 1.0 / lam};
  auto L = locate(p);
  if (!L) return {lam, 0.0, 1.0 / lam};
  return jacobian_local(L->site, L->w);
}

double NonlinearMap::lip_b() const {
  double m = 0.0;
  for (const auto& st : sites_) {
    if (!st.enabled) continue;
    double v = st.law == RadialLaw::Linear ? std::abs(st.beta) * kernel_.max_abs_dk() / (2.0 * st.alpha)
                                           : std::abs(st.beta) * kernel_.max_abs_dk() / std::sqrt(st.alpha);
    m = std::max(m, v);
  }
  return m;
}

double NonlinearMap::b_sup() const {
  double m = 0.0;
  for (const auto& st : sites_) {
    if (!st.enabled) continue;
    double v = st.law == RadialLaw::Linear ? std::abs(st.beta) * kernel_.max_abs_dk() / 2.0
                                           : std::abs(st.beta) * kernel_.max_abs_dk();
    m = std::max(m, v);
  }
  return m;
}

double NonlinearMap::a_inf() const {
  // beta <= 0 and k' <= 0 make the shear-free part the minimum
  double m = lambda();
  for (const auto& st : sites_)
    if (st.enabled) m = std::min(m, lambda() + st.beta);
  return m;
}

FixedPointRecord NonlinearMap::fixed_points(int site) const {
  const auto& st = sites_.at(site);
  const double lam = lambda();
  if (!(st.beta > -lam && st.beta < 1.0 - lam))
    throw Error(ErrorCode::NoRootInRange, "beta outside the attracting range " + range_text(-lam, 1.0 - lam, false));
  const double c = (1.0 - lam) / st.beta;
  const double x = kernel_.inverse(c);
  FixedPointRecord rec;
  rec.site = site;
  rec.t0 = st.law == RadialLaw::Linear ? st.alpha * x : std::sqrt(st.alpha * x);
  rec.m_u = jacobian_local(site, {rec.t0, 0.0}).a;
  if (!(rec.m_u > 1.0)) throw Error(ErrorCode::NoRootInRange, "fixed point is not expanding along u");
  const int sheets = st.kind == SiteKind::Conical ? surface().cone_points()[st.cone].multiplicity : 1;
  for (int j = 0; j < sheets; ++j) {
    double base = kTwoPi * j;
    rec.p.push_back(from_local(site, base, {rec.t0, 0.0}));
    rec.p.push_back(from_local(site, base + M_PI, {-rec.t0, 0.0}));
    rec.q.push_back(from_local(site, base + 0.5 * M_PI, {0.0, rec.t0}));
    rec.q.push_back(from_local(site, base + 1.5 * M_PI, {0.0, -rec.t0}));
  }
  return rec;
}

CoverReport NonlinearMap::certify_cover(std::size_t samples, std::uint64_t seed) const {
  CoverReport rep;
  const double lam = lambda();
  if (is_linear()) {
    const double margin = 1e-12;
    rep.min_a = lam;
    rep.eta = lam - 1.0 - margin;
    rep.delta = 0.0;
    rep.samples = 0;
    return rep;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  rep.min_a = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0.0;
  for (int i = 0; i < static_cast<int>(sites_.size()); ++i) {
    const auto& st = sites_[i];
    if (!st.enabled) continue;
    FixedPointRecord fp;
    try {
      fp = fixed_points(i);
    } catch (const Error& e) {
      throw Error(ErrorCode::CoverFailure, std::string("no attracting disk: ") + e.what());
    }
    const double R = st.support_radius(), t0 = fp.t0, eps = 0.1 * t0;
    // expansion on the annulus t0 <= r < R, away from the s-axis points at radius t0
    for (std::size_t n = 0; n < samples; ++n) {
      double r = std::sqrt(t0 * t0 + (R * R - t0 * t0) * U(rng));
      double th = kTwoPi * U(rng);
      Vec2 w{r * std::cos(th), r * std::sin(th)};
      if (norm(w - Vec2{0.0, t0}) < eps || norm(w - Vec2{0.0, -t0}) < eps) continue;
      double a = jacobian_local(i, w).a;
      if (a < rep.min_a) {
        rep.min_a = a;
        rep.worst_a_local = w;
      }
      ++rep.samples;
    }
    // radial contraction on the inner disk
    for (std::size_t n = 0; n < samples; ++n) {
      double r = 0.9 * t0 * std::sqrt(U(rng));
      double th = kTwoPi * U(rng);
      Vec2 w{r * std::cos(th), r * std::sin(th)};
      if (r == 0.0) continue;
      double factor = lam + st.beta * kernel_.k(st.arg(r));
      double ratio = norm(Vec2{factor * w.u, w.s / lam}) / r;
      if (ratio > rep.max_ratio) {
        rep.max_ratio = ratio;
        rep.worst_ratio_local = w;
      }
      ++rep.samples;
    }
  }
  rep.min_a = std::min(rep.min_a, lam);
  if (!(rep.min_a > 1.0)) {
    std::ostringstream os;
    os << "a = " << rep.min_a << " at local (" << rep.worst_a_local.u << ", " << rep.worst_a_local.s << ")";
    throw Error(ErrorCode::CoverFailure, os.str());
  }
  if (!(rep.max_ratio < 1.0)) {
    std::ostringstream os;
    os << "radial ratio " << rep.max_ratio << " at local (" << rep.worst_ratio_local.u << ", "
       << rep.worst_ratio_local.s << ")";
    throw Error(ErrorCode::CoverFailure, os.str());
  }
  rep.eta = 0.5 * (rep.min_a - 1.0);
  rep.delta = 0.5 * (1.0 - rep.max_ratio);
  return rep;
}

nlohmann::json NonlinearMap::to_json() const {
  nlohmann::json j;
  j["kernel"] = kernel_.kind == KernelKind::C1 ? "C1" : "C2";
  j["lambda"] = lambda();
  j["sites"] = nlohmann::json::array();
  for (const auto& st : sites_)
    j["sites"].push_back({{"kind", st.kind == SiteKind::Conical ? "conical" : "regular"},
                          {"cone", st.cone},
                          {"center", {st.center.u, st.center.s}},
                          {"alpha", st.alpha},
                          {"beta", st.beta},
                          {"enabled", st.enabled},
                          {"radial_law", st.law == RadialLaw::Linear ? "r/alpha" : "r^2/alpha"},
                          {"radius", "flat distance"}});
  return j;
}

}  // namespace nlpa
