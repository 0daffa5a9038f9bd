#include "nlpa/linear_map.hpp"

#include <cmath>
#include <numeric>

#include "nlpa/errors.hpp"

namespace nlpa {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;

double wrap(double x, double period) {
  double r = std::fmod(x, period);
  return r < 0 ? r + period : r;
}
}  // namespace

LinearPA::LinearPA(std::shared_ptr<const TranslationSurface> surface, double lambda_raw, int sign,
                   int sheet_shift, int power)
    : surface_(std::move(surface)), lambda_raw_(lambda_raw), sign_(sign), shift_(sheet_shift), power_(power) {
  if (!(lambda_raw > 1.0)) throw Error(ErrorCode::InvalidParameter, "dilation must exceed 1");
  if (power < 1) throw Error(ErrorCode::InvalidParameter, "power must be positive");
  lambda_ = std::pow(lambda_raw, power);
}

int LinearPA::half_turns() const { return power_ * (2 * shift_ + (sign_ < 0 ? 1 : 0)); }

SurfacePoint LinearPA::eval_phi(const SurfacePoint& p) const { return apply(p, false, -1); }

SurfacePoint LinearPA::eval_phi_inverse(const SurfacePoint& p) const { return apply(p, true, -1); }

SurfacePoint LinearPA::eval_via_corner(const SurfacePoint& p, int vertex, bool inverse) const {
  return apply(p, inverse, vertex);
}

SurfacePoint LinearPA::apply(const SurfacePoint& p, bool inverse, int vertex) const {
  const TranslationSurface& S = *surface_;
  const double lu = inverse ? 1.0 / lambda_ : lambda_;
  const double sg = (power_ % 2 == 1 && sign_ < 0) ? -1.0 : 1.0;
  if (S.is_lattice()) return S.normalize({sg * lu * p.u, sg * p.s / lu});

  if (vertex < 0) {
    int t = S.locate_triangle(p.pos());
    const auto& tri = S.triangles()[t];
    // prefer the corner the point is farthest from, for a well-conditioned angle
    double best = -1.0;
    for (int v : tri) {
      double d = norm(p.pos() - S.vertices()[v]);
      if (d == 0.0) return S.normalize(p.pos());  // vertices sit on the fixed cone point
      if (d > best) {
        best = d;
        vertex = v;
      }
    }
  }
  Vec2 w = p.pos() - S.vertices()[vertex];
  if (w.u == 0.0 && w.s == 0.0) return S.normalize(p.pos());
  const int cls = S.vertex_class_of(vertex);
  const double total = S.vertex_classes()[cls].total_angle;
  double theta = S.total_angle(vertex, w);
  const double H = M_PI * half_turns();
  double theta_img;
  Vec2 img;
  if (!inverse) {
    Vec2 dw{lu * w.u, w.s / lu};
    theta_img = kTwoPi * std::floor(theta / kTwoPi) + angle_of(dw) + H;
    img = sg * dw;
  } else {
    double psi = wrap(theta - H, total);
    Vec2 dw{lu * sg * w.u, sg * w.s / lu};
    theta_img = kTwoPi * std::floor(psi / kTwoPi) + angle_of(dw);
    img = dw;
  }
  theta_img = wrap(theta_img, total);
  int c = S.corner_at_angle(cls, theta_img);
  return S.develop_from_corner(c, img);
}

SurfacePoint LinearPA::place_in_image_sheet(int cone, double theta_src, Vec2 new_local) const {
  const TranslationSurface& S = *surface_;
  const auto& cp = S.cone_points().at(cone);
  const double total = S.vertex_classes()[cp.vertex_class].total_angle;
  double theta = kTwoPi * std::floor(theta_src / kTwoPi) + angle_of(new_local) + M_PI * half_turns();
  theta = wrap(theta, total);
  if (new_local.u == 0.0 && new_local.s == 0.0) return S.normalize(cp.position);
  int c = S.corner_at_angle(cp.vertex_class, theta);
  return S.develop_from_corner(c, new_local);
}

SurfacePoint LinearPA::place_in_source_sheet(int cone, double theta_img, Vec2 new_local) const {
  const TranslationSurface& S = *surface_;
  const auto& cp = S.cone_points().at(cone);
  const double total = S.vertex_classes()[cp.vertex_class].total_angle;
  double theta = kTwoPi * std::floor(wrap(theta_img - M_PI * half_turns(), total) / kTwoPi) + angle_of(new_local);
  theta = wrap(theta, total);
  if (new_local.u == 0.0 && new_local.s == 0.0) return S.normalize(cp.position);
  int c = S.corner_at_angle(cp.vertex_class, theta);
  return S.develop_from_corner(c, new_local);
}

std::vector<int> LinearPA::germ_permutation(int cone) const {
  const TranslationSurface& S = *surface_;
  int n = S.cone_points().at(cone).multiplicity;
  // outgoing +u germs sit at total angle 2 pi j; -u germs at 2 pi j + pi
  std::vector<int> perm(2 * n);
  int h = half_turns();
  for (int j = 0; j < 2 * n; ++j) perm[j] = ((j + h) % (2 * n) + 2 * n) % (2 * n);
  return perm;
}

LinearPA stabilizing_power(const LinearPA& raw) {
  const TranslationSurface& S = raw.surface();
  int max_n = 1;
  for (const auto& c : S.cone_points()) max_n = std::max(max_n, c.multiplicity);
  const int cones = std::max<int>(1, static_cast<int>(S.cone_points().size()));
  const int bound = 4 * max_n * cones;
  // the map fixes the distinguished points; it remains to fix every germ
  for (int n = 1; n <= bound; ++n) {
    LinearPA cand(raw.surface_ptr(), raw.lambda_raw(), raw.sign(), raw.sheet_shift(), raw.power_applied() * n);
    bool ok = true;
    if (S.is_lattice() || S.cone_points().empty()) {
      ok = cand.half_turns() % 2 == 0;
    } else {
      for (int k = 0; k < static_cast<int>(S.cone_points().size()) && ok; ++k) {
        auto perm = cand.germ_permutation(k);
        for (int j = 0; j < static_cast<int>(perm.size()); ++j)
          if (perm[j] != j) ok = false;
      }
    }
    if (ok) return cand;
  }
  throw Error(ErrorCode::PowerSearchExceeded, "no power up to the diagnostic bound fixes every germ");
}

}  // namespace nlpa
