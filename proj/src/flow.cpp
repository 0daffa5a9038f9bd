#include "nlpa/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlpa/errors.hpp"

namespace nlpa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool recoverable(const Error& e) {
  return e.code() == ErrorCode::SingularHit || e.code() == ErrorCode::ConeCapture ||
         e.code() == ErrorCode::AtConePoint;
}

}  // namespace

Transversal Transversal::from_point(const TranslationSurface& S, const SurfacePoint& start, double length) {
  if (!(length > 0.0)) throw Error(ErrorCode::DegenerateSegment, "transversal length must be positive");
  Transversal g;
  g.S_ = &S;
  g.start_ = S.normalize(start.pos());
  g.length_ = length;
  g.pieces_ = S.straight_pieces(g.start_, {length, 0.0});
  double acc = 0.0;
  for (auto& p : g.pieces_) {
    g.xi0_.push_back(acc);
    acc += p.b.u - p.a.u;
  }
  return g;
}

Transversal Transversal::from_corner(const TranslationSurface& S, int vertex, double length) {
  if (!(length > 0.0)) throw Error(ErrorCode::DegenerateSegment, "transversal length must be positive");
  Transversal g;
  g.S_ = &S;
  g.corner_ = vertex;
  g.start_ = S.normalize(S.vertices()[vertex]);
  g.length_ = length;
  g.pieces_ = S.pieces_from_corner(vertex, {length, 0.0});
  double acc = 0.0;
  for (auto& p : g.pieces_) {
    g.xi0_.push_back(acc);
    acc += p.b.u - p.a.u;
  }
  return g;
}

Transversal Transversal::with_length(double length) const {
  return corner_ >= 0 ? from_corner(*S_, corner_, length) : from_point(*S_, start_, length);
}

SurfacePoint Transversal::point(double xi) const {
  if (xi == 0.0) return start_;
  if (corner_ >= 0) return S_->develop_from_corner(corner_, {xi, 0.0});
  return S_->develop(start_, {xi, 0.0});
}

std::optional<double> Transversal::parameter(const SurfacePoint& p, double eps) const {
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& q = pieces_[i];
    if (std::abs(p.s - q.a.s) > eps) continue;
    if (p.u < q.a.u - eps || p.u > q.b.u + eps) continue;
    double len = q.b.u - q.a.u;
    return xi0_[i] + std::clamp(p.u - q.a.u, 0.0, len);
  }
  return std::nullopt;
}

Flow::Flow(const StableField& field, FlowOptions opt) : field_(&field), opt_(opt) {
  if (!(opt_.tol > 0.0)) throw Error(ErrorCode::InvalidParameter, "integrator tolerance must be positive");
}

Vec2 Flow::vel(const SurfacePoint& p, int dir, IntegratorStats& st) const {
  ++st.field_evals;
  double S = field_->shear_sum(p, opt_.series_tol).S;
  return {-dir * S, static_cast<double>(dir)};
}

Vec2 Flow::velocity(const SurfacePoint& p) const {
  IntegratorStats st;
  return vel(p, 1, st);
}

Vec2 Flow::rk4(const SurfacePoint& x, Vec2 k1, double h, int dir, IntegratorStats& st) const {
  const TranslationSurface& S = map().surface();
  Vec2 k2 = vel(S.develop(x, (0.5 * h) * k1), dir, st);
  Vec2 k3 = vel(S.develop(x, (0.5 * h) * k2), dir, st);
  Vec2 k4 = vel(S.develop(x, h * k3), dir, st);
  return (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory Flow::run(const SurfacePoint& p, int dir, double t_max, const Transversal* g,
                     const CrossingHandler& on_cross, bool record) const {
  const TranslationSurface& S = map().surface();
  const bool cones = !S.cone_points().empty();
  auto dist = [&](const SurfacePoint& x) { return cones ? S.distance_to_cones(x).value : kInf; };
  auto nearest_cone = [&](const SurfacePoint& x) {
    auto f = S.nearest_cone_frame(x);
    return f ? f->cone : 0;
  };

  Trajectory tr;
  tr.start = p;
  tr.x.push_back(p);
  tr.t.push_back(0.0);
  SurfacePoint x = p;
  double t = 0.0, d = dist(x);
  if (d < opt_.eps_sing) {
    tr.status = TrajectoryStatus::Captured;
    tr.cone = nearest_cone(x);
    return tr;
  }
  if (t_max <= 0.0) return tr;

  Vec2 k1 = vel(x, dir, tr.stats);
  double h = opt_.h_max;
  const double tol = opt_.tol;
  for (long step = 0; step < opt_.max_steps; ++step) {
    double cap = std::min(opt_.h_max, t_max - t);
    if (cones) cap = std::min(cap, 0.5 * d / norm(k1));
    h = std::min(h, cap);
    if (h < opt_.h_min) {
      if (t_max - t < opt_.h_min) break;
      throw Error(ErrorCode::StepUnderflow, "step size fell below the minimum");
    }

    Vec2 full, half1, half2;
    SurfacePoint xa;
    try {
      full = rk4(x, k1, h, dir, tr.stats);
      half1 = rk4(x, k1, 0.5 * h, dir, tr.stats);
      xa = S.develop(x, half1);
      half2 = rk4(xa, vel(xa, dir, tr.stats), 0.5 * h, dir, tr.stats);
    } catch (const Error& e) {
      if (!recoverable(e)) throw;
      h *= 0.5;
      ++tr.stats.rejected;
      continue;
    }
    const Vec2 disp = half1 + half2;
    const double err = norm(disp - full);
    const double scale = std::max(1.0, norm(x.pos()));
    if (err > tol * scale) {
      h *= std::max(0.2, 0.9 * std::pow(tol * scale / err, 0.2));
      ++tr.stats.rejected;
      continue;
    }

    bool landing = false;
    if (g) {
      std::vector<StraightPiece> pieces;
      try {
        pieces = S.straight_pieces(x, disp);
      } catch (const Error& e) {
        if (!recoverable(e)) throw;
        h *= 0.5;
        ++tr.stats.rejected;
        continue;
      }
      double tau = kInf, acc = 0.0;
      const double margin = 1e-7 + 0.05 * norm(disp);
      for (const auto& pc : pieces) {
        const double ds = pc.b.s - pc.a.s;
        for (const auto& gp : g->pieces()) {
          const double off = gp.a.s - pc.a.s;
          // levels reached up to rounding still count as reached
          if (off * dir < 0.0 || std::abs(off) > std::abs(ds) + 1e-12 || ds == 0.0) continue;
          const double tt = acc + std::abs(off);
          if (tt <= 1e-12) continue;
          const double uc = pc.a.u + std::min(1.0, off / ds) * (pc.b.u - pc.a.u);
          if (uc < gp.a.u - margin || uc > gp.b.u + margin) continue;
          tau = std::min(tau, tt);
        }
        acc += std::abs(ds);
      }
      if (tau < h - 1e-12 * std::max(1.0, h)) {
        h = tau;
        continue;
      }
      landing = tau < kInf;
    }

    try {
      x = S.develop(xa, half2);
    } catch (const Error& e) {
      if (!recoverable(e)) throw;
      h *= 0.5;
      ++tr.stats.rejected;
      continue;
    }
    t += h;
    ++tr.stats.accepted;
    if (record) {
      tr.x.push_back(x);
      tr.t.push_back(dir * t);
    }
    d = dist(x);
    if (d < opt_.eps_sing) {
      tr.status = TrajectoryStatus::Captured;
      tr.cone = nearest_cone(x);
      tr.t_end = dir * t;
      if (!record) tr.x.push_back(x);
      return tr;
    }
    k1 = vel(x, dir, tr.stats);
    if (landing) {
      auto xi = g->parameter(x);
      if (xi && *xi >= 0.0 && *xi < g->length() && on_cross && on_cross({*xi, t}, x)) {
        tr.t_end = dir * t;
        if (!record) tr.x.push_back(x);
        return tr;
      }
    }
    if (t >= t_max) break;
    h = std::min(opt_.h_max, h * std::min(2.0, 0.9 * std::pow(tol * scale / std::max(err, 1e-300), 0.2)));
  }
  if (t < t_max && !(t_max - t < opt_.h_min)) {
    tr.status = TrajectoryStatus::Truncated;
    tr.reason = "step budget exhausted";
  }
  tr.t_end = dir * t;
  if (!record) tr.x.push_back(x);
  return tr;
}

Trajectory Flow::integrate(const SurfacePoint& p, double t_target, bool record) const {
  const int dir = t_target < 0.0 ? -1 : 1;
  return run(p, dir, std::abs(t_target), nullptr, {}, record);
}

SurfacePoint Flow::flow(const SurfacePoint& p, double t) const {
  Trajectory tr = integrate(p, t, false);
  if (tr.status == TrajectoryStatus::Captured)
    throw Error(ErrorCode::Captured, "trajectory reached a cone point at time " + std::to_string(tr.t_end));
  if (tr.status == TrajectoryStatus::Truncated) throw Error(ErrorCode::StepUnderflow, tr.reason);
  return tr.end();
}

double Flow::renormalization_residual(const SurfacePoint& p, double t) const {
  if (t == 0.0) return 0.0;
  const NonlinearMap& f = map();
  SurfacePoint a = f.eval_f(flow(p, f.lambda() * t));
  SurfacePoint b = flow(f.eval_f(p), t);
  return f.surface().flat_distance(a, b).value;
}

ReturnResult Flow::first_return(const Transversal& g, double xi, double budget) const {
  if (xi < 0.0 || xi >= g.length()) throw Error(ErrorCode::InvalidParameter, "parameter outside the transversal");
  ReturnResult out;
  bool hit = false;
  Trajectory tr = run(g.point(xi), 1, budget, &g,
                      [&](const Crossing& c, const SurfacePoint&) {
                        out.xi = c.xi;
                        out.time = c.t;
                        hit = true;
                        return true;
                      },
                      false);
  if (tr.status == TrajectoryStatus::Captured) {
    out.captured = true;
    out.cone = tr.cone;
    out.time = tr.t_end;
    return out;
  }
  if (!hit) throw Error(ErrorCode::NoReturnWithinBudget, "no return to the transversal within the time budget");
  return out;
}

std::vector<Crossing> Flow::crossings(const SurfacePoint& p, int dir, const Transversal& g, double t_max,
                                      int max_count, bool* captured) const {
  std::vector<Crossing> out;
  Trajectory tr = run(p, dir, t_max, &g,
                      [&](const Crossing& c, const SurfacePoint&) {
                        out.push_back(c);
                        return static_cast<int>(out.size()) >= max_count;
                      },
                      false);
  if (captured) *captured = tr.status == TrajectoryStatus::Captured;
  return out;
}

}  // namespace nlpa
