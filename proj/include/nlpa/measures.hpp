#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nlpa/renormalization.hpp"

namespace nlpa {

// Weighted point sample on gamma (xi) or on the surface (points).
struct EmpiricalMeasure {
  enum class Ambient { Transversal, Surface };
  Ambient ambient = Ambient::Transversal;
  std::vector<double> xi;
  std::vector<SurfacePoint> points;
  std::vector<double> weights;
  std::vector<int> cluster;  // support point a surface sample was suspended from
  long orbit_length = 0;
  std::uint64_t seed = 0;

  std::size_t size() const { return weights.size(); }
  // compensated sum of weights * g
  double integrate(const std::function<double(double)>& g) const;
  double integrate(const std::function<double(const SurfacePoint&)>& g) const;
  double total_mass() const;
};

// Neumaier summation.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0, c_ = 0.0;
};

// Uniform weights on start, T(start), ..., T^{n-1}(start). Throws SingularOrbit
// when an iterate lands on a discontinuity.
EmpiricalMeasure empirical_nu(const GIET& T, double start, long n);

// (1/n) sum g_j(T^k x) for k < n, without storing the orbit.
std::vector<double> birkhoff_averages(const GIET& T, double start, long n,
                                      const std::vector<std::function<double(double)>>& g);

// ceil(u(x)/h_step) flow samples per support point, one in each of the equal
// time cells of [0, u(x)) at a seeded random position, weighted by
// nu(x) u(x) / count and normalized to mass 1.
EmpiricalMeasure suspend_mu(const EmpiricalMeasure& nu, const GIET& T, const Flow& flow, double h_step,
                            std::uint64_t seed = 1);

// Tensor bump (1 - (du/r)^2)^2 (1 - (ds/r)^2)^2 around a centre.
struct BumpObservable {
  SurfacePoint center;
  double radius = 0.05;
  double operator()(const TranslationSurface& S, const SurfacePoint& x) const;
};

// Bumps centred on well separated points of a measure sample, each farther
// than two radii from every cone point.
std::vector<BumpObservable> bumps_on_sample(const TranslationSurface& S, const EmpiricalMeasure& mu, int count,
                                            double radius, std::uint64_t seed);

struct SrbRow {
  int n = 0;
  std::vector<double> pushed;  // integral against f^-n_* nu_W per observable
  std::vector<double> diff;    // |pushed - mu integral|
  std::vector<double> stderr_; // Monte Carlo standard error of `pushed`
};

struct SrbTable {
  std::vector<double> mu_values;
  std::vector<SrbRow> rows;
  int samples = 0;
  double half_length = 0.0;
};

// nu_W uniform in flow time on W = h_[-L, L](p), pushed by f^-1.
SrbTable srb_pushforward(const Flow& flow, const SurfacePoint& p, double L, int samples,
                         const std::vector<int>& ns, const std::vector<BumpObservable>& obs,
                         const std::vector<double>& mu_values);

struct EntropyReport {
  double max_rel_error = 0.0;   // max |lambda ||df v|| / ||v o f|| - 1|
  double entropy = 0.0;         // log lambda
  double unstable_average = 0.0;  // (1/n) sum log a along backward orbits
  long samples = 0;
};

EntropyReport entropy_check(const StableField& field, const std::vector<SurfacePoint>& points, double tol,
                            int backward_steps = 200);

struct CorrelationReport {
  std::vector<double> C;       // C_0 .. C_N
  std::vector<double> stderr_; // standard error per n, treating each flow segment as one draw
  double slope = 0.0;          // fit of log |C_n| over n in [2, N]
  double intercept = 0.0;
  double r2 = 0.0;
};

// C_n = mu(phi o f^-n . psi) - mu(phi) mu(psi) on the measure sample.
CorrelationReport correlation_decay(const NonlinearMap& f, const EmpiricalMeasure& mu,
                                    const std::function<double(const SurfacePoint&)>& phi,
                                    const std::function<double(const SurfacePoint&)>& psi, int N);

// Least squares line y = a + b x with coefficient of determination.
struct LineFit {
  double intercept = 0.0, slope = 0.0, r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace nlpa
