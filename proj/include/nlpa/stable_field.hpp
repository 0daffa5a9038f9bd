#pragma once

#include <string>
#include <vector>

#include "nlpa/perturbation.hpp"

namespace nlpa {

struct ShearSum {
  double S = 0.0;
  int N = 0;            // number of terms summed
  double tail = 0.0;    // certified bound on the remainder
};

struct StableVector {
  SurfacePoint base;
  double S = 0.0;
  Vec2 v;               // (-S, 1)
  int N = 0;
  double tail = 0.0;
};

// The contracting field v^s = (-S, 1) with
//   S(x) = sum_i lambda^-i b(f^i x) prod_{j<=i} 1 / a(f^j x),
// which solves S(f x) = lambda (a(x) S(x) - b(x)).
class StableField {
 public:
  explicit StableField(const NonlinearMap& f);

  const NonlinearMap& map() const { return *f_; }

  ShearSum shear_sum(const SurfacePoint& p, double tol) const;
  StableVector eval_vs(const SurfacePoint& p, double tol) const;
  // || d_p f v^s(p) - lambda^-1 v^s(f p) ||
  double contraction_residual(const SurfacePoint& p, double tol) const;
  // lambda * ||d_p f v^s(p)|| / ||v^s(f p)||, equal to 1 exactly in theory
  double contraction_ratio(const SurfacePoint& p, double tol) const;
  // Partial sums B_0 .. B_{n-1} along the forward orbit.
  std::vector<double> partial_sums(const SurfacePoint& p, int n) const;
  // |S| <= sup|b| lambda a* / (lambda a* - 1) for the cover constant a* = 1 + eta
  static double slope_bound(double b_sup, double lambda, double a_star);

 private:
  const NonlinearMap* f_;
  double rho_global_ = 0.0;   // 1 / (lambda inf a)
  double t0_ = 0.0;           // attracting radius of the (first) site, 0 if none
  int max_terms_ = 20000;
};

struct BetaContinuation {
  std::vector<double> betas;
  std::vector<double> deltas;  // sup over the point set between consecutive betas
};

BetaContinuation continue_in_beta(const LinearPA& phi, const PerturbationSite& site_template, KernelKind kernel,
                                  const std::vector<SurfacePoint>& points, const std::vector<double>& betas,
                                  double tol);

void write_shear_csv(const std::string& path, const std::vector<SurfacePoint>& points,
                     const std::vector<ShearSum>& values, const std::string& header_comment);

}  // namespace nlpa
