#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlpa/linear_map.hpp"

namespace nlpa {

struct Preset;

enum class KernelKind { C1, C2 };

// k(r) = (1 - r^2)^2 or (1 - r^2)^3 on [-1, 1], zero outside.
struct BumpKernel {
  KernelKind kind = KernelKind::C1;

  double k(double r) const;
  double dk(double r) const;
  double d2k(double r) const;
  double max_abs_dk() const;
  // argument x in (0, 1) with k(x) = c, by bisection
  double inverse(double c) const;
};

enum class SiteKind { Conical, Regular };
// Argument of the kernel: r / alpha, or r^2 / alpha (literal regular-point law).
enum class RadialLaw { Linear, Quadratic };

struct PerturbationSite {
  SiteKind kind = SiteKind::Regular;
  int cone = -1;        // conical sites
  Vec2 center;          // position of the fixed point in polygon coordinates
  double alpha = 0.1;
  double beta = 0.0;
  bool enabled = true;
  RadialLaw law = RadialLaw::Linear;

  double support_radius() const;
  double arg(double r) const;   // kernel argument
  double darg(double r) const;  // derivative of the argument in r
};

struct Jacobian {
  double a = 0.0;  // d f_u / d u
  double b = 0.0;  // d f_u / d s
  double c = 0.0;  // d f_s / d s = 1 / lambda
};

// Jacobian at p together with the site it was computed in.
struct StepInfo {
  Jacobian jac;
  int site = -1;
  double r = 0.0;  // distance to that site's centre
};

struct FixedPointRecord {
  int site = 0;
  double t0 = 0.0;
  std::vector<SurfacePoint> p;  // fixed points on the u-rays
  std::vector<SurfacePoint> q;  // points at the same radius on the s-rays
  double m_u = 0.0;
};

struct CoverReport {
  double eta = 0.0;
  double delta = 0.0;
  double min_a = 0.0;
  double max_ratio = 0.0;
  Vec2 worst_a_local;
  Vec2 worst_ratio_local;
  std::size_t samples = 0;
};

// Position of a point relative to the site whose support contains it.
struct SiteLocal {
  int site = -1;
  Vec2 w;              // local vector from the site centre
  double theta = 0.0;  // total angle (conical sites)
  double r = 0.0;
};

class NonlinearMap {
 public:
  NonlinearMap(LinearPA phi, BumpKernel kernel, std::vector<PerturbationSite> sites);

  // One site at the preset's anchor.
  static NonlinearMap standard(const Preset& pr, double beta, double alpha,
                               KernelKind kernel = KernelKind::C1, RadialLaw law = RadialLaw::Linear);
  static double default_beta(double lambda);

  const LinearPA& phi() const { return phi_; }
  const TranslationSurface& surface() const { return phi_.surface(); }
  double lambda() const { return phi_.lambda(); }
  const BumpKernel& kernel() const { return kernel_; }
  const std::vector<PerturbationSite>& sites() const { return sites_; }

  std::optional<SiteLocal> locate(const SurfacePoint& p) const;
  // Point at local vector w from a site, in the sheet of total angle theta.
  SurfacePoint from_local(int site, double theta, Vec2 w) const;

  SurfacePoint eval_f(const SurfacePoint& p) const;
  SurfacePoint eval_f_inverse(const SurfacePoint& q, double tol = 1e-14) const;
  Jacobian jacobian(const SurfacePoint& p) const;
  // f(p) and the Jacobian at p from a single site lookup
  SurfacePoint eval_f_step(const SurfacePoint& p, StepInfo& info) const;
  Jacobian jacobian_local(int site, Vec2 w) const;

  FixedPointRecord fixed_points(int site) const;
  CoverReport certify_cover(std::size_t samples, std::uint64_t seed) const;

  // sup |b| and inf a over the surface
  double b_sup() const;
  double a_inf() const;
  // |b(x)| <= lip_b() * d(x, site)
  double lip_b() const;
  bool is_linear() const;

  nlohmann::json to_json() const;

 private:
  LinearPA phi_;
  BumpKernel kernel_;
  std::vector<PerturbationSite> sites_;
};

}  // namespace nlpa
