#include "nlpa/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "nlpa/errors.hpp"

namespace nlpa {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap(double x, double period) {
  double r = std::fmod(x, period);
  return r < 0 ? r + period : r;
}

// Counterclockwise angle from a to b in [0, 2 pi).
double rel_angle(Vec2 a, Vec2 b) {
  double t = std::atan2(cross(a, b), dot(a, b));
  return t < 0 ? t + kTwoPi : t;
}

double segment_distance(Vec2 x, Vec2 a, Vec2 b) {
  Vec2 d = b - a;
  double t = std::clamp(dot(x - a, d) / dot(d, d), 0.0, 1.0);
  return norm(x - (a + t * d));
}

bool segments_cross(Vec2 p, Vec2 q, Vec2 a, Vec2 b) {
  double d1 = cross(q - p, a - p), d2 = cross(q - p, b - p);
  double d3 = cross(b - a, p - a), d4 = cross(b - a, q - a);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool lex_less(Vec2 a, Vec2 b) { return a.u < b.u || (a.u == b.u && a.s < b.s); }

}  // namespace

TranslationSurface TranslationSurface::from_polygon(std::string name, std::vector<Vec2> vertices,
                                                    std::vector<int> pair, int genus) {
  const int n = static_cast<int>(vertices.size());
  if (n < 3 || static_cast<int>(pair.size()) != n)
    throw Error(ErrorCode::InvalidParameter, "polygon needs matching vertex and pairing lists");
  TranslationSurface S;
  S.name_ = std::move(name);
  S.genus_ = genus;
  S.vertices_ = std::move(vertices);
  S.pair_ = std::move(pair);
  S.finalize();
  return S;
}

TranslationSurface TranslationSurface::from_lattice(std::string name, Vec2 e1, Vec2 e2) {
  if (cross(e1, e2) < 0) std::swap(e1, e2);
  TranslationSurface S;
  S.name_ = std::move(name);
  S.genus_ = 1;
  S.lattice_ = true;
  S.e1_ = e1;
  S.e2_ = e2;
  double det = cross(e1, e2);
  S.inv_[0] = e2.s / det;
  S.inv_[1] = -e2.u / det;
  S.inv_[2] = -e1.s / det;
  S.inv_[3] = e1.u / det;
  Vec2 h1 = 0.5 * e1, h2 = 0.5 * e2;
  S.vertices_ = {-h1 - h2, h1 - h2, h1 + h2, -h1 + h2};
  S.pair_ = {2, 3, 0, 1};
  S.finalize();
  return S;
}

void TranslationSurface::finalize() {
  const int n = static_cast<int>(vertices_.size());
  double scale = 0.0;
  for (auto& v : vertices_) scale = std::max(scale, norm(v));
  scale_eps_ = 1e-13 * std::max(scale, 1.0);
  offset_.assign(n, {});
  for (int i = 0; i < n; ++i) {
    int j = pair_[i];
    if (j < 0 || j >= n || pair_[j] != i || j == i)
      throw Error(ErrorCode::InvalidParameter, "edge pairing is not a fixed-point-free involution");
    Vec2 di = vertices_[(i + 1) % n] - vertices_[i];
    Vec2 dj = vertices_[(j + 1) % n] - vertices_[j];
    if (norm(di + dj) > 1e-9 * std::max(1.0, norm(di)))
      throw Error(ErrorCode::InvalidParameter, "glued edges are not translates");
    offset_[i] = vertices_[(j + 1) % n] - vertices_[i];
  }
  if (area() <= 0) throw Error(ErrorCode::InvalidParameter, "polygon must be counterclockwise");
  build_classes();
  build_triangulation();

  diameter_ = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) diameter_ = std::max(diameter_, norm(vertices_[i] - vertices_[j]));

  std::set<std::pair<double, double>> seen;
  translations_.clear();
  auto add = [&](Vec2 t) {
    auto key = std::make_pair(std::round(t.u * 1e9), std::round(t.s * 1e9));
    if (key == std::make_pair(0.0, 0.0) || seen.count(key)) return;
    seen.insert(key);
    translations_.push_back(t);
  };
  for (int i = 0; i < n; ++i) add(offset_[i]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) add(offset_[i] + offset_[j]);

  // delta_sigma: shortest saddle connection (visible vertex pairs) and shortest holonomy
  double sc = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (!classes_[class_of_[i]].singular) continue;
    for (int j = i + 1; j < n; ++j) {
      if (!classes_[class_of_[j]].singular) continue;
      bool visible = true;
      for (int e = 0; e < n && visible; ++e) {
        int e1 = (e + 1) % n;
        if (e == i || e == j || e1 == i || e1 == j) continue;
        if (segments_cross(vertices_[i], vertices_[j], vertices_[e], vertices_[e1])) visible = false;
      }
      if (visible) sc = std::min(sc, norm(vertices_[i] - vertices_[j]));
    }
  }
  double syst = std::numeric_limits<double>::infinity();
  if (lattice_) {
    for (int a = -2; a <= 2; ++a)
      for (int b = -2; b <= 2; ++b)
        if (a || b) syst = std::min(syst, norm(static_cast<double>(a) * e1_ + static_cast<double>(b) * e2_));
  } else {
    for (auto& t : translations_) syst = std::min(syst, norm(t));
  }
  delta_sigma_ = std::min(sc, syst);

  frame_radius_ = 0.0;
  if (!cones_.empty()) {
    double clear = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (!classes_[class_of_[i]].singular) continue;
      for (int e = 0; e < n; ++e) {
        int e1 = (e + 1) % n;
        if (e == i || e1 == i) continue;
        clear = std::min(clear, segment_distance(vertices_[i], vertices_[e], vertices_[e1]));
      }
    }
    frame_radius_ = std::min(0.5 * delta_sigma_, 0.95 * clear);
  }
}

void TranslationSurface::build_classes() {
  const int n = static_cast<int>(vertices_.size());
  corner_angle_.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    Vec2 out = vertices_[(i + 1) % n] - vertices_[i];
    Vec2 in = vertices_[(i + n - 1) % n] - vertices_[i];
    corner_angle_[i] = rel_angle(out, in);
  }
  class_of_.assign(n, -1);
  classes_.clear();
  cones_.clear();
  for (int start = 0; start < n; ++start) {
    if (class_of_[start] >= 0) continue;
    VertexClass vc;
    int c = start;
    Vec2 out0 = vertices_[(start + 1) % n] - vertices_[start];
    double off = std::atan2(out0.s, out0.u);
    do {
      class_of_[c] = static_cast<int>(classes_.size());
      vc.corners.push_back(c);
      vc.offsets.push_back(off);
      off += corner_angle_[c];
      c = pair_[(c + n - 1) % n];
    } while (c != start);
    vc.total_angle = off - vc.offsets.front();
    vc.multiplicity = static_cast<int>(std::lround(vc.total_angle / kTwoPi));
    vc.total_angle = kTwoPi * vc.multiplicity;
    vc.singular = vc.multiplicity >= 2;
    classes_.push_back(vc);
  }
  for (int k = 0; k < static_cast<int>(classes_.size()); ++k) {
    if (!classes_[k].singular) continue;
    ConePoint cp;
    cp.vertex_class = k;
    cp.multiplicity = classes_[k].multiplicity;
    cp.position = vertices_[classes_[k].corners.front()];
    for (int v : classes_[k].corners)
      if (lex_less(vertices_[v], cp.position)) cp.position = vertices_[v];
    cones_.push_back(cp);
  }
}

void TranslationSurface::build_triangulation() {
  const int n = static_cast<int>(vertices_.size());
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  triangles_.clear();
  auto inside_tri = [](Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
    // closed test: a vertex on a diagonal would make the diagonal pass through it
    const double eps = 1e-12;
    return cross(b - a, p - a) > -eps && cross(c - b, p - b) > -eps && cross(a - c, p - c) > -eps;
  };
  int guard = 0;
  while (idx.size() > 3 && guard++ < 10 * n * n) {
    const int m = static_cast<int>(idx.size());
    bool clipped = false;
    for (int k = 0; k < m; ++k) {
      int a = idx[(k + m - 1) % m], b = idx[k], c = idx[(k + 1) % m];
      if (cross(vertices_[b] - vertices_[a], vertices_[c] - vertices_[b]) <= 0) continue;
      bool ear = true;
      for (int q : idx) {
        if (q == a || q == b || q == c) continue;
        if (inside_tri(vertices_[q], vertices_[a], vertices_[b], vertices_[c])) {
          ear = false;
          break;
        }
      }
      if (!ear) continue;
      triangles_.push_back({a, b, c});
      idx.erase(idx.begin() + k);
      clipped = true;
      break;
    }
    if (!clipped) throw Error(ErrorCode::InvalidParameter, "polygon is not simple");
  }
  triangles_.push_back({idx[0], idx[1], idx[2]});
}

int TranslationSurface::locate_triangle(Vec2 x) const {
  int best = -1;
  double best_margin = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < static_cast<int>(triangles_.size()); ++t) {
    const auto& T = triangles_[t];
    Vec2 a = vertices_[T[0]], b = vertices_[T[1]], c = vertices_[T[2]];
    double m = std::min({cross(b - a, x - a) / norm(b - a), cross(c - b, x - b) / norm(c - b),
                         cross(a - c, x - c) / norm(a - c)});
    if (m > best_margin) {
      best_margin = m;
      best = t;
    }
  }
  return best;
}

double TranslationSurface::area() const {
  double a = 0.0;
  const int n = static_cast<int>(vertices_.size());
  for (int i = 0; i < n; ++i) a += cross(vertices_[i], vertices_[(i + 1) % n]);
  return 0.5 * a;
}

bool TranslationSurface::contains(Vec2 x) const {
  if (lattice_) {
    double c1 = inv_[0] * x.u + inv_[1] * x.s, c2 = inv_[2] * x.u + inv_[3] * x.s;
    return c1 >= -0.5 && c1 <= 0.5 && c2 >= -0.5 && c2 <= 0.5;
  }
  const int n = static_cast<int>(vertices_.size());
  bool in = false;
  for (int i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = vertices_[i];
    const Vec2& b = vertices_[j];
    if ((a.s > x.s) != (b.s > x.s)) {
      double xu = (b.u - a.u) * (x.s - a.s) / (b.s - a.s) + a.u;
      if (x.u < xu) in = !in;
    }
  }
  if (in) return true;
  // boundary points count as inside
  for (int i = 0; i < n; ++i)
    if (segment_distance(x, vertices_[i], vertices_[(i + 1) % n]) <= scale_eps_ * 1e-2) return true;
  return false;
}

SurfacePoint TranslationSurface::canonical(Vec2 x) const {
  const int n = static_cast<int>(vertices_.size());
  const double eps = scale_eps_ * 1e-2;
  for (int i = 0; i < n; ++i) {
    if (norm(x - vertices_[i]) <= eps) {
      const auto& vc = classes_[class_of_[i]];
      Vec2 best = vertices_[vc.corners.front()];
      for (int v : vc.corners)
        if (lex_less(vertices_[v], best)) best = vertices_[v];
      return SurfacePoint::at(best);
    }
  }
  Vec2 best = x;
  for (int i = 0; i < n; ++i) {
    if (segment_distance(x, vertices_[i], vertices_[(i + 1) % n]) <= eps) {
      Vec2 y = x + offset_[i];
      if (lex_less(y, best)) best = y;
    }
  }
  return SurfacePoint::at(best);
}

SurfacePoint TranslationSurface::normalize(Vec2 raw) const {
  if (!std::isfinite(raw.u) || !std::isfinite(raw.s))
    throw Error(ErrorCode::OutOfAtlas, "non-finite coordinates");
  if (lattice_) {
    double c1 = inv_[0] * raw.u + inv_[1] * raw.s, c2 = inv_[2] * raw.u + inv_[3] * raw.s;
    double k1 = std::floor(c1 + 0.5), k2 = std::floor(c2 + 0.5);
    if (k1 == 0.0 && k2 == 0.0) return SurfacePoint::at(raw);
    return SurfacePoint::at(raw - k1 * e1_ - k2 * e2_);
  }
  if (contains(raw)) return canonical(raw);
  const int n = static_cast<int>(vertices_.size());
  for (int i = 0; i < n; ++i) {
    Vec2 a = vertices_[i], d = vertices_[(i + 1) % n] - a;
    if (cross(d, raw - a) >= 0) continue;  // not beyond this edge
    Vec2 y = raw + offset_[i];
    if (contains(y)) return canonical(y);
  }
  throw Error(ErrorCode::OutOfAtlas, "point is more than one gluing step outside the polygon");
}

SurfacePoint TranslationSurface::develop_impl(Vec2 x, Vec2 w, int excl_a, int excl_b,
                                              std::vector<StraightPiece>* pieces) const {
  const int n = static_cast<int>(vertices_.size());
  for (int iter = 0; iter < 100000; ++iter) {
    double wn = norm(w);
    if (wn == 0.0) return normalize(x);
    double best_t = std::numeric_limits<double>::infinity(), best_sp = 0.0;
    int best_e = -1;
    for (int e = 0; e < n; ++e) {
      if (e == excl_a || e == excl_b) continue;
      const Vec2& a0 = vertices_[e];
      Vec2 d = vertices_[(e + 1) % n] - a0;
      double den = cross(w, d);
      if (den <= 0) continue;  // not leaving through this edge
      Vec2 a = a0 - x;
      double t = cross(a, d) / den;
      double sp = cross(a, w) / den;
      if (sp < -1e-12 || sp > 1.0 + 1e-12) continue;
      if (t * wn < -scale_eps_) continue;
      if (t < best_t) {
        best_t = t;
        best_e = e;
        best_sp = sp;
      }
    }
    if (best_e < 0 || best_t >= 1.0) {
      if (pieces) pieces->push_back({x, x + w});
      return normalize(x + w);
    }
    Vec2 d = vertices_[(best_e + 1) % n] - vertices_[best_e];
    double len = norm(d);
    if ((best_sp * len < 1e-12 && classes_[class_of_[best_e]].singular) ||
        ((1.0 - best_sp) * len < 1e-12 && classes_[class_of_[(best_e + 1) % n]].singular))
      throw Error(ErrorCode::SingularHit, "straight path runs into a cone point");
    Vec2 hit = vertices_[best_e] + std::clamp(best_sp, 0.0, 1.0) * d;
    if (pieces) pieces->push_back({x, hit});
    x = hit + offset_[best_e];
    w = (1.0 - std::max(best_t, 0.0)) * w;
    excl_a = pair_[best_e];
    excl_b = -1;
  }
  throw Error(ErrorCode::SingularHit, "development did not terminate");
}

SurfacePoint TranslationSurface::develop(const SurfacePoint& p, Vec2 w) const {
  if (lattice_) return normalize(p.pos() + w);
  return develop_impl(p.pos(), w, -1, -1, nullptr);
}

std::vector<StraightPiece> TranslationSurface::straight_pieces(const SurfacePoint& p, Vec2 w) const {
  std::vector<StraightPiece> out;
  develop_impl(p.pos(), w, -1, -1, &out);
  return out;
}

std::vector<StraightPiece> TranslationSurface::pieces_from_corner(int vertex, Vec2 w) const {
  const int n = static_cast<int>(vertices_.size());
  std::vector<StraightPiece> out;
  develop_impl(vertices_[vertex], w, vertex, (vertex + n - 1) % n, &out);
  return out;
}

SurfacePoint TranslationSurface::develop_from_corner(int vertex, Vec2 w) const {
  const int n = static_cast<int>(vertices_.size());
  if (lattice_) return normalize(vertices_[vertex] + w);
  return develop_impl(vertices_[vertex], w, vertex, (vertex + n - 1) % n, nullptr);
}

std::optional<Vec2> TranslationSurface::displacement(const SurfacePoint& p, const SurfacePoint& q,
                                                     double max_len) const {
  Vec2 d = q.pos() - p.pos();
  if (lattice_) {
    double c1 = inv_[0] * d.u + inv_[1] * d.s, c2 = inv_[2] * d.u + inv_[3] * d.s;
    c1 -= std::round(c1);
    c2 -= std::round(c2);
    Vec2 best = c1 * e1_ + c2 * e2_;
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b) {
        Vec2 c = best + static_cast<double>(a) * e1_ + static_cast<double>(b) * e2_;
        if (norm(c) < norm(best)) best = c;
      }
    if (norm(best) > max_len) return std::nullopt;
    return best;
  }
  std::vector<Vec2> cand;
  cand.reserve(translations_.size() + 1);
  if (norm(d) <= max_len) cand.push_back(d);
  for (auto& t : translations_)
    if (norm(d + t) <= max_len) cand.push_back(d + t);
  std::sort(cand.begin(), cand.end(), [](Vec2 a, Vec2 b) { return norm(a) < norm(b); });
  for (auto& w : cand) {
    try {
      SurfacePoint r = develop(p, w);
      if (norm(r.pos() - q.pos()) <= 1e-9) return w;
      // both points may sit on glued edges with different representatives
      SurfacePoint rq = normalize(q.pos());
      if (norm(r.pos() - rq.pos()) <= 1e-9) return w;
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

Distance TranslationSurface::flat_distance(const SurfacePoint& p, const SurfacePoint& q) const {
  if (p.u == q.u && p.s == q.s) return {0.0, true};
  auto fp = nearest_cone_frame(p);
  auto fq = nearest_cone_frame(q);
  if (fp && fq && fp->cone == fq->cone) {
    double total = kTwoPi * cones_[fp->cone].multiplicity;
    double dt = wrap(fp->theta - fq->theta, total);
    dt = std::min(dt, total - dt);
    double r1 = norm(fp->local), r2 = norm(fq->local);
    if (dt >= M_PI) return {r1 + r2, true};
    double h = std::sin(0.5 * dt);
    return {std::sqrt((r1 - r2) * (r1 - r2) + 4 * r1 * r2 * h * h), true};
  }
  if (auto w = displacement(p, q, 0.5 * delta_sigma_)) return {norm(*w), true};
  if (auto w = displacement(p, q, 3.0 * diameter_)) return {norm(*w), false};
  return {3.0 * diameter_, false};
}

Distance TranslationSurface::flat_distance(const SurfacePoint& p, const TranslationSurface& other,
                                           const SurfacePoint& q) const {
  if (&other != this) throw Error(ErrorCode::DifferentSurfaces, "points live on different surfaces");
  return flat_distance(p, q);
}

double TranslationSurface::total_angle(int vertex, Vec2 d) const {
  const int n = static_cast<int>(vertices_.size());
  const auto& vc = classes_[class_of_[vertex]];
  auto it = std::find(vc.corners.begin(), vc.corners.end(), vertex);
  double off = vc.offsets[it - vc.corners.begin()];
  Vec2 out = vertices_[(vertex + 1) % n] - vertices_[vertex];
  double rel = (d.u == 0 && d.s == 0) ? 0.0 : rel_angle(out, d);
  if (rel > corner_angle_[vertex] + 1e-9) rel = rel - kTwoPi < -1e-9 ? rel : 0.0;
  return wrap(off + rel, vc.total_angle);
}

int TranslationSurface::corner_at_angle(int vertex_class, double theta) const {
  const auto& vc = classes_[vertex_class];
  int best = vc.corners.front();
  double best_excess = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < vc.corners.size(); ++k) {
    double rel = wrap(theta - vc.offsets[k], vc.total_angle);
    double excess = rel - corner_angle_[vc.corners[k]];
    if (excess <= 0) return vc.corners[k];
    double back = vc.total_angle - rel;  // distance below the start ray
    double miss = std::min(excess, back);
    if (miss < best_excess) {
      best_excess = miss;
      best = vc.corners[k];
    }
  }
  return best;
}

std::optional<ConeSectorFrame> TranslationSurface::nearest_cone_frame(const SurfacePoint& p) const {
  if (cones_.empty()) return std::nullopt;
  std::optional<ConeSectorFrame> best;
  double best_r = frame_radius_;
  for (int k = 0; k < static_cast<int>(cones_.size()); ++k) {
    const auto& vc = classes_[cones_[k].vertex_class];
    for (int v : vc.corners) {
      Vec2 d = p.pos() - vertices_[v];
      double r = norm(d);
      if (r >= best_r && !(r == 0.0 && !best)) continue;
      ConeSectorFrame f;
      f.cone = k;
      f.local = d;
      f.theta = total_angle(v, d);
      f.sheet = static_cast<int>(std::floor(f.theta / kTwoPi)) + 1;
      if (f.sheet > vc.multiplicity) f.sheet = vc.multiplicity;
      best = f;
      best_r = r;
    }
  }
  return best;
}

ConeSectorFrame TranslationSurface::cone_sector_coords(const SurfacePoint& p, int cone) const {
  if (cone < 0 || cone >= static_cast<int>(cones_.size()))
    throw Error(ErrorCode::TooFarFromCone, "no such cone point");
  const auto& vc = classes_[cones_[cone].vertex_class];
  std::optional<ConeSectorFrame> best;
  double best_r = frame_radius_;
  for (int v : vc.corners) {
    Vec2 d = p.pos() - vertices_[v];
    double r = norm(d);
    if (r >= best_r && !(r == 0.0 && !best)) continue;
    ConeSectorFrame f;
    f.cone = cone;
    f.local = d;
    f.theta = total_angle(v, d);
    f.sheet = std::min(static_cast<int>(std::floor(f.theta / kTwoPi)) + 1, vc.multiplicity);
    best = f;
    best_r = r;
  }
  if (!best) throw Error(ErrorCode::TooFarFromCone, "point is outside the cone frame radius");
  return *best;
}

SurfacePoint TranslationSurface::from_frame(const ConeSectorFrame& f) const {
  const auto& vc = classes_[cones_.at(f.cone).vertex_class];
  if (norm(f.local) > frame_radius_)
    throw Error(ErrorCode::TooFarFromCone, "frame coordinates exceed the frame radius");
  double theta = kTwoPi * (f.sheet - 1) + ((f.local.u == 0 && f.local.s == 0) ? 0.0 : angle_of(f.local));
  int v = corner_at_angle(cones_[f.cone].vertex_class, wrap(theta, vc.total_angle));
  Vec2 x = vertices_[v] + f.local;
  if (contains(x)) return canonical(x);
  return develop_from_corner(v, f.local);
}

Distance TranslationSurface::distance_to_cones(const SurfacePoint& p) const {
  if (cones_.empty()) return {std::numeric_limits<double>::infinity(), true};
  if (auto f = nearest_cone_frame(p)) return {norm(f->local), true};
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : cones_)
    for (int v : classes_[c.vertex_class].corners) best = std::min(best, norm(p.pos() - vertices_[v]));
  return {best, false};
}

nlohmann::json TranslationSurface::to_json() const {
  nlohmann::json j;
  j["name"] = name_;
  j["genus"] = genus_;
  j["lattice"] = lattice_;
  if (lattice_) {
    j["e1"] = {e1_.u, e1_.s};
    j["e2"] = {e2_.u, e2_.s};
  }
  j["vertices"] = nlohmann::json::array();
  for (auto& v : vertices_) j["vertices"].push_back({v.u, v.s});
  j["pairing"] = pair_;
  j["offsets"] = nlohmann::json::array();
  for (auto& o : offset_) j["offsets"].push_back({o.u, o.s});
  j["cone_points"] = nlohmann::json::array();
  for (auto& c : cones_)
    j["cone_points"].push_back({{"position", {c.position.u, c.position.s}},
                                {"multiplicity", c.multiplicity},
                                {"corners", classes_[c.vertex_class].corners}});
  j["delta_sigma"] = delta_sigma_;
  j["area"] = area();
  return j;
}

TranslationSurface TranslationSurface::from_json(const nlohmann::json& j) {
  if (j.at("lattice").get<bool>()) {
    auto e1 = j.at("e1"), e2 = j.at("e2");
    return from_lattice(j.at("name"), {e1[0], e1[1]}, {e2[0], e2[1]});
  }
  std::vector<Vec2> v;
  for (auto& x : j.at("vertices")) v.push_back({x[0].get<double>(), x[1].get<double>()});
  return from_polygon(j.at("name"), v, j.at("pairing").get<std::vector<int>>(), j.at("genus"));
}

SurfacePoint uniform_point(const TranslationSurface& S, std::mt19937_64& rng) {
  double lo_u = 1e300, hi_u = -1e300, lo_s = 1e300, hi_s = -1e300;
  for (const Vec2& v : S.vertices()) {
    lo_u = std::min(lo_u, v.u), hi_u = std::max(hi_u, v.u);
    lo_s = std::min(lo_s, v.s), hi_s = std::max(hi_s, v.s);
  }
  std::uniform_real_distribution<double> U(lo_u, hi_u), V(lo_s, hi_s);
  for (;;) {
    Vec2 x{U(rng), V(rng)};
    if (S.contains(x)) return S.normalize(x);
  }
}

}  // namespace nlpa
