#include "nlpa/stable_field.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "nlpa/errors.hpp"

namespace nlpa {

StableField::StableField(const NonlinearMap& f) : f_(&f) {
  const double lam = f.lambda();
  rho_global_ = 1.0 / (lam * f.a_inf());
  for (int i = 0; i < static_cast<int>(f.sites().size()); ++i) {
    const auto& st = f.sites()[i];
    if (!st.enabled || st.beta == 0.0) continue;
    try {
      t0_ = f.fixed_points(i).t0;
    } catch (const Error&) {
      t0_ = 0.0;
    }
    break;
  }
}

double StableField::slope_bound(double b_sup, double lambda, double a_star) {
  double la = lambda * a_star;
  return b_sup * la / (la - 1.0);
}

ShearSum StableField::shear_sum(const SurfacePoint& p, double tol) const {
  const NonlinearMap& f = *f_;
  if (f.is_linear()) return {0.0, 0, 0.0};
  const double lam = f.lambda();
  const double bsup = f.b_sup(), lip = f.lip_b();
  const double inf = std::numeric_limits<double>::infinity();
  SurfacePoint x = p;
  double P = 1.0, S = 0.0, tail = inf;
  for (int i = 0; i < max_terms_; ++i) {
    StepInfo info;
    SurfacePoint next;
    try {
      next = f.eval_f_step(x, info);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::AtConePoint) throw Error(ErrorCode::ConeCapture, "orbit reached a cone point");
      throw;
    }
    P = (i == 0 ? 1.0 : P / lam) / info.jac.a;
    S += P * info.jac.b;

    // remainder after term i
    tail = inf;
    if (rho_global_ < 1.0) tail = std::abs(P) * bsup * rho_global_ / (1.0 - rho_global_);
    if (info.site >= 0 && t0_ > 0.0 && info.r < 0.9 * t0_) {
      const auto& st = f.sites()[info.site];
      double q = std::max(lam + st.beta * f.kernel().k(st.arg(info.r)), 1.0 / lam);
      double rq = rho_global_ * q;
      if (rq < 1.0) tail = std::min(tail, std::abs(P) * lip * info.r * rq / (1.0 - rq));
    }
    if (tail <= tol) return {S, i + 1, tail};
    x = next;
  }
  throw Error(ErrorCode::SeriesDivergence, "shear series not certified within the term budget");
}

StableVector StableField::eval_vs(const SurfacePoint& p, double tol) const {
  ShearSum r = shear_sum(p, tol);
  return {p, r.S, {-r.S, 1.0}, r.N, r.tail};
}

double StableField::contraction_residual(const SurfacePoint& p, double tol) const {
  const NonlinearMap& f = *f_;
  StepInfo info;
  SurfacePoint fp = f.eval_f_step(p, info);
  double S0 = shear_sum(p, tol).S;
  double S1 = shear_sum(fp, tol).S;
  Vec2 dfv{-info.jac.a * S0 + info.jac.b, info.jac.c};
  Vec2 target{-S1 / f.lambda(), 1.0 / f.lambda()};
  return norm(dfv - target);
}

double StableField::contraction_ratio(const SurfacePoint& p, double tol) const {
  const NonlinearMap& f = *f_;
  StepInfo info;
  SurfacePoint fp = f.eval_f_step(p, info);
  double S0 = shear_sum(p, tol).S;
  double S1 = shear_sum(fp, tol).S;
  Vec2 dfv{-info.jac.a * S0 + info.jac.b, info.jac.c};
  return f.lambda() * norm(dfv) / norm(Vec2{-S1, 1.0});
}

std::vector<double> StableField::partial_sums(const SurfacePoint& p, int n) const {
  const NonlinearMap& f = *f_;
  std::vector<double> out;
  SurfacePoint x = p;
  double P = 1.0, S = 0.0;
  for (int i = 0; i < n; ++i) {
    StepInfo info;
    SurfacePoint next = f.eval_f_step(x, info);
    P = (i == 0 ? 1.0 : P / f.lambda()) / info.jac.a;
    S += P * info.jac.b;
    out.push_back(S);
    x = next;
  }
  return out;
}

BetaContinuation continue_in_beta(const LinearPA& phi, const PerturbationSite& site_template, KernelKind kernel,
                                  const std::vector<SurfacePoint>& points, const std::vector<double>& betas,
                                  double tol) {
  BetaContinuation out;
  out.betas = betas;
  std::vector<std::vector<double>> values;
  for (double b : betas) {
    PerturbationSite st = site_template;
    st.beta = b;
    NonlinearMap f(phi, BumpKernel{kernel}, {st});
    StableField F(f);
    std::vector<double> row;
    row.reserve(points.size());
    for (const auto& p : points) row.push_back(F.shear_sum(p, tol).S);
    values.push_back(std::move(row));
  }
  for (std::size_t k = 1; k < values.size(); ++k) {
    double m = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) m = std::max(m, std::abs(values[k][i] - values[k - 1][i]));
    out.deltas.push_back(m);
  }
  return out;
}

void write_shear_csv(const std::string& path, const std::vector<SurfacePoint>& points,
                     const std::vector<ShearSum>& values, const std::string& header_comment) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::Io, "cannot write " + path);
  os.precision(17);
  if (!header_comment.empty()) os << "# " << header_comment << "\r\n";
  os << "u,s,S,N,tail_bound\r\n";
  for (std::size_t i = 0; i < points.size(); ++i)
    os << points[i].u << ',' << points[i].s << ',' << values[i].S << ',' << values[i].N << ',' << values[i].tail
       << "\r\n";
}

}  // namespace nlpa
