#include "nlpa/measures.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace nlpa {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    c_ += (sum_ - t) + x;
  else
    c_ += (x - t) + sum_;
  sum_ = t;
}

double EmpiricalMeasure::integrate(const std::function<double(double)>& g) const {
  CompensatedSum s;
  for (std::size_t i = 0; i < weights.size(); ++i) s.add(weights[i] * g(xi[i]));
  return s.value();
}

double EmpiricalMeasure::integrate(const std::function<double(const SurfacePoint&)>& g) const {
  CompensatedSum s;
  for (std::size_t i = 0; i < weights.size(); ++i) s.add(weights[i] * g(points[i]));
  return s.value();
}

double EmpiricalMeasure::total_mass() const {
  CompensatedSum s;
  for (double w : weights) s.add(w);
  return s.value();
}

namespace {

void check_regular(const GIET& T, double x, long k) {
  const auto& d = T.discontinuities();
  if (x == 0.0 || std::binary_search(d.begin(), d.end(), x))
    throw Error(ErrorCode::SingularOrbit, "iterate " + std::to_string(k) + " lands on a discontinuity");
}

}  // namespace

EmpiricalMeasure empirical_nu(const GIET& T, double start, long n) {
  if (n <= 0) throw Error(ErrorCode::InvalidParameter, "orbit length must be positive");
  EmpiricalMeasure nu;
  nu.orbit_length = n;
  nu.xi.reserve(n);
  double x = start;
  for (long k = 0; k < n; ++k) {
    check_regular(T, x, k);
    nu.xi.push_back(x);
    x = T(x);
  }
  nu.weights.assign(n, 1.0 / n);
  return nu;
}

std::vector<double> birkhoff_averages(const GIET& T, double start, long n,
                                      const std::vector<std::function<double(double)>>& g) {
  std::vector<CompensatedSum> s(g.size());
  double x = start;
  for (long k = 0; k < n; ++k) {
    check_regular(T, x, k);
    for (std::size_t j = 0; j < g.size(); ++j) s[j].add(g[j](x));
    x = T(x);
  }
  std::vector<double> out;
  for (auto& v : s) out.push_back(v.value() / n);
  return out;
}

EmpiricalMeasure suspend_mu(const EmpiricalMeasure& nu, const GIET& T, const Flow& flow, double h_step,
                            std::uint64_t seed) {
  if (!(h_step > 0.0)) throw Error(ErrorCode::InvalidParameter, "suspension step must be positive");
  EmpiricalMeasure mu;
  mu.ambient = EmpiricalMeasure::Ambient::Surface;
  mu.orbit_length = nu.orbit_length;
  mu.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  const Transversal& g = T.transversal();
  std::vector<double> raw;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    const double u = T.return_time(nu.xi[i]);
    const int m = std::max(1, static_cast<int>(std::ceil(u / h_step)));
    const double dt = u / m;
    SurfacePoint x = g.point(nu.xi[i]);
    double t = 0.0;
    for (int k = 0; k < m; ++k) {
      // equal spacing resonates with the lattice once pushed by f
      const double tk = (k + jitter(rng)) * dt;
      x = flow.flow(x, tk - t);
      t = tk;
      mu.points.push_back(x);
      mu.cluster.push_back(static_cast<int>(i));
      raw.push_back(nu.weights[i] * dt);
    }
  }
  CompensatedSum total;
  for (double w : raw) total.add(w);
  const double C = total.value();
  for (double w : raw) mu.weights.push_back(w / C);
  return mu;
}

double BumpObservable::operator()(const TranslationSurface& S, const SurfacePoint& x) const {
  auto w = S.displacement(center, x, radius * 1.5);
  if (!w) return 0.0;
  const double a = w->u / radius, b = w->s / radius;
  if (std::abs(a) >= 1.0 || std::abs(b) >= 1.0) return 0.0;
  const double ka = 1.0 - a * a, kb = 1.0 - b * b;
  return ka * ka * kb * kb;
}

std::vector<BumpObservable> bumps_on_sample(const TranslationSurface& S, const EmpiricalMeasure& mu, int count,
                                            double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, mu.points.size() - 1);
  std::vector<BumpObservable> out;
  for (int tries = 0; static_cast<int>(out.size()) < count && tries < 100000; ++tries) {
    const SurfacePoint c = mu.points[pick(rng)];
    if (!S.cone_points().empty() && S.distance_to_cones(c).value < 2.0 * radius) continue;
    bool far = true;
    for (const auto& b : out) far = far && S.flat_distance(b.center, c).value > 2.0 * radius;
    if (far) out.push_back({c, radius});
  }
  if (static_cast<int>(out.size()) < count)
    throw Error(ErrorCode::InvalidParameter, "could not place the requested observables");
  return out;
}

SrbTable srb_pushforward(const Flow& flow, const SurfacePoint& p, double L, int samples,
                         const std::vector<int>& ns, const std::vector<BumpObservable>& obs,
                         const std::vector<double>& mu_values) {
  if (!(L > 0.0) || samples <= 0)
    throw Error(ErrorCode::DegenerateSegment, "the leaf segment W must have positive length");
  const NonlinearMap& f = flow.map();
  const auto& S = f.surface();
  SrbTable tab;
  tab.mu_values = mu_values;
  tab.samples = samples;
  tab.half_length = L;

  // nu_W: midpoints of `samples` equal pieces of [-L, L] in flow time
  std::vector<SurfacePoint> w(samples);
  const double dt = 2.0 * L / samples;
  const int mid = samples / 2;
  for (int dir : {-1, 1}) {
    SurfacePoint x = p;
    double t = 0.0;
    if (dir > 0)
      for (int i = mid; i < samples; ++i) {
        const double ti = -L + (i + 0.5) * dt;
        x = flow.flow(x, ti - t);
        t = ti;
        w[i] = x;
      }
    else
      for (int i = mid - 1; i >= 0; --i) {
        const double ti = -L + (i + 0.5) * dt;
        x = flow.flow(x, ti - t);
        t = ti;
        w[i] = x;
      }
  }

  int done = 0;
  for (int n : ns) {
    for (; done < n; ++done)
      for (auto& x : w) x = f.eval_f_inverse(x);
    SrbRow row;
    row.n = n;
    for (std::size_t j = 0; j < obs.size(); ++j) {
      CompensatedSum s, s2;
      for (const auto& x : w) {
        const double v = obs[j](S, x);
        s.add(v);
        s2.add(v * v);
      }
      const double m = s.value() / samples;
      const double var = std::max(0.0, s2.value() / samples - m * m);
      row.pushed.push_back(m);
      row.diff.push_back(std::abs(m - (j < mu_values.size() ? mu_values[j] : 0.0)));
      row.stderr_.push_back(std::sqrt(var / samples));
    }
    tab.rows.push_back(std::move(row));
  }
  return tab;
}

EntropyReport entropy_check(const StableField& field, const std::vector<SurfacePoint>& points, double tol,
                            int backward_steps) {
  EntropyReport rep;
  const NonlinearMap& f = field.map();
  rep.entropy = std::log(f.lambda());
  CompensatedSum ua;
  long count = 0;
  for (const auto& p : points) {
    rep.max_rel_error = std::max(rep.max_rel_error, std::abs(field.contraction_ratio(p, tol) - 1.0));
    ++rep.samples;
  }
  for (std::size_t i = 0; i < std::min<std::size_t>(points.size(), 20); ++i) {
    SurfacePoint x = points[i];
    for (int k = 0; k < backward_steps; ++k) {
      x = f.eval_f_inverse(x);
      ua.add(std::log(f.jacobian(x).a));
      ++count;
    }
  }
  rep.unstable_average = count ? ua.value() / count : 0.0;
  return rep;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit fit;
  const double n = static_cast<double>(x.size());
  if (x.size() < 2) return fit;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

CorrelationReport correlation_decay(const NonlinearMap& f, const EmpiricalMeasure& mu,
                                    const std::function<double(const SurfacePoint&)>& phi,
                                    const std::function<double(const SurfacePoint&)>& psi, int N) {
  CorrelationReport rep;
  const std::size_t m = mu.size();
  std::vector<double> ps(m);
  CompensatedSum mpsi;
  for (std::size_t i = 0; i < m; ++i) {
    ps[i] = psi(mu.points[i]);
    mpsi.add(mu.weights[i] * ps[i]);
  }
  const double mean_psi = mpsi.value();
  std::vector<SurfacePoint> x = mu.points;
  for (int n = 0; n <= N; ++n) {
    if (n > 0)
      for (auto& p : x) p = f.eval_f_inverse(p);
    CompensatedSum a, b;
    std::vector<double> ph(m);
    for (std::size_t i = 0; i < m; ++i) {
      ph[i] = phi(x[i]);
      a.add(mu.weights[i] * ph[i] * ps[i]);
      b.add(mu.weights[i] * ph[i]);
    }
    const double c = a.value() - b.value() * mean_psi;
    // samples of one cluster are dependent: sum their contributions first
    std::vector<double> per;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t k = mu.cluster.empty() ? i : static_cast<std::size_t>(mu.cluster[i]);
      if (k >= per.size()) per.resize(k + 1, 0.0);
      per[k] += mu.weights[i] * ((ph[i] - b.value()) * (ps[i] - mean_psi) - c);
    }
    CompensatedSum v;
    for (double z : per) v.add(z * z);
    rep.C.push_back(c);
    rep.stderr_.push_back(std::sqrt(v.value()));
  }
  std::vector<double> xs, ys;
  for (int n = 2; n <= N; ++n)
    if (rep.C[n] != 0.0) {
      xs.push_back(n);
      ys.push_back(std::log(std::abs(rep.C[n])));
    }
  const LineFit fit = fit_line(xs, ys);
  rep.slope = fit.slope;
  rep.intercept = fit.intercept;
  rep.r2 = fit.r2;
  return rep;
}

}  // namespace nlpa
