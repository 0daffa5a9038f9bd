#include "suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "nlpa/errors.hpp"
#include "output.hpp"

namespace nlpa::cli {

namespace {

std::string sci(double x, int digits = 3) {
  std::ostringstream o;
  o.precision(digits);
  o << std::scientific << x;
  return o.str();
}

std::string num(double x, int digits = 6) {
  std::ostringstream o;
  o.precision(digits);
  o << x;
  return o.str();
}

KernelKind parse_kernel(const std::string& k) {
  if (k == "C1") return KernelKind::C1;
  if (k == "C2") return KernelKind::C2;
  throw UsageError("kernel must be C1 or C2, got '" + k + "'");
}

}  // namespace

// ---------------------------------------------------------------- session

Session::Session(const Params& p) : params_(p) {
  const std::string& id = p.get("preset");
  if (id != "torus" && id != "genus2") throw UsageError("preset must be torus or genus2, got '" + id + "'");
  if (p.get("site") != "anchor") throw UsageError("site must be 'anchor'");
  preset_ = preset_by_name(id);
  const double lam = preset_.phi.lambda();
  beta_ = p.get("beta") == "auto" ? (torus() ? -2.0 : NonlinearMap::default_beta(lam)) : p.number("beta");
  alpha_ = p.get("alpha") == "auto" ? (torus() ? 0.1 : 0.02) : p.number("alpha");
  kernel_ = parse_kernel(p.get("kernel"));
  if (!(beta_ > -lam && beta_ <= 0.0))
    throw UsageError("beta = " + num(beta_) + " outside the homeomorphism range (-lambda, 0] = (" + num(-lam, 10) +
                     ", 0]");
  // remaining site checks (alpha against the systole) live in the map
  try {
    map(kernel_);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidParameter) throw UsageError(e.what());
    throw;
  }
}

double Session::separatrix_tmax() const {
  return params_.get("separatrix_tmax") == "auto" ? (torus() ? 2000.0 : 100.0) : params_.number("separatrix_tmax");
}

int Session::depth() const {
  return params_.get("depth") == "auto" ? (torus() ? 1000 : 100) : static_cast<int>(params_.integer("depth"));
}

long Session::points(long fallback) const {
  return params_.get("points") == "auto" ? fallback : params_.integer("points");
}

Window Session::window() const {
  const std::string& w = params_.get("window");
  if (w == "auto") return default_window(*preset_.surface);
  Window win;
  char c1 = 0, c2 = 0, c3 = 0;
  std::istringstream in(w);
  if (!(in >> win.u0 >> c1 >> win.u1 >> c2 >> win.s0 >> c3 >> win.s1) || c1 != ',' || c2 != ',' || c3 != ',' ||
      !(win.u0 < win.u1) || !(win.s0 < win.s1))
    throw UsageError("window must be u0,u1,s0,s1 with u0 < u1 and s0 < s1");
  return win;
}

Session::Dynamics& Session::dyn(KernelKind k) {
  Dynamics& d = dyn_[k];
  if (!d.f) {
    d.f = std::make_unique<NonlinearMap>(NonlinearMap::standard(preset_, beta_, alpha_, k));
    d.field = std::make_unique<StableField>(*d.f);
    FlowOptions fo;
    fo.tol = params_.number("tol");
    d.flow = std::make_unique<Flow>(*d.field, fo);
  }
  return d;
}

const NonlinearMap& Session::map(KernelKind k) { return *dyn(k).f; }
const StableField& Session::field(KernelKind k) { return *dyn(k).field; }
const Flow& Session::flow(KernelKind k) { return *dyn(k).flow; }

const NonlinearMap& Session::linear() {
  if (!linear_) linear_ = std::make_unique<NonlinearMap>(NonlinearMap::standard(preset_, 0.0, alpha_, kernel_));
  return *linear_;
}

const GIET& Session::giet(KernelKind k) {
  Dynamics& d = dyn(k);
  if (!d.giet) {
    GIETOptions o;
    o.separatrix.t_max = separatrix_tmax();
    d.giet = std::make_unique<GIET>(GIET::sample(*d.flow, preset_, o));
  }
  return *d.giet;
}

const EmpiricalMeasure& Session::mu() {
  if (!mu_) {
    const GIET& T = giet(KernelKind::C2);
    auto nu = empirical_nu(T, params_.number("nu_start"), params_.integer("nu_length"));
    mu_ = std::make_unique<EmpiricalMeasure>(suspend_mu(nu, T, flow(KernelKind::C2), params_.number("h_step"), seed()));
  }
  return *mu_;
}

const std::vector<BumpObservable>& Session::bumps() {
  if (bumps_.empty()) {
    bumps_ = bumps_on_sample(*preset_.surface, mu(), static_cast<int>(params_.integer("bumps")),
                             params_.number("bump_radius"), seed() + 2);
    for (const auto& b : bumps_)
      bump_values_.push_back(mu().integrate([&](const SurfacePoint& x) { return b(*preset_.surface, x); }));
  }
  return bumps_;
}

const std::vector<double>& Session::bump_values() {
  bumps();
  return bump_values_;
}

nlohmann::ordered_json Session::resolved() const {
  nlohmann::ordered_json j;
  j["preset"] = preset_.id;
  j["lambda"] = preset_.phi.lambda();
  j["beta"] = beta_;
  j["alpha"] = alpha_;
  j["kernel"] = kernel_ == KernelKind::C1 ? "C1" : "C2";
  j["site"] = preset_.surface->cone_points().empty() ? "regular" : "conical";
  j["separatrix_tmax"] = separatrix_tmax();
  j["depth"] = depth();
  return j;
}

// ---------------------------------------------------------------- reports

bool SuiteReport::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

nlohmann::ordered_json SuiteReport::to_json() const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["preset"] = preset;
  j["pass"] = pass();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["detail"] = c.detail;
    cj["data"] = c.data;
    arr.push_back(cj);
  }
  j["checks"] = arr;
  j["notes"] = notes;
  return j;
}

// ---------------------------------------------------------------- suites

namespace {

SuiteReport reduction(Session& s) {
  SuiteReport r;
  const auto& S = *s.preset().surface;
  const NonlinearMap& f0 = s.linear();
  std::mt19937_64 rng(s.seed());
  const long n = s.points(10000);
  double worst = 0.0;
  long identical = 0;
  for (long i = 0; i < n; ++i) {
    SurfacePoint p = uniform_point(S, rng);
    SurfacePoint a = f0.eval_f(p), b = f0.phi().eval_phi(p);
    if (a.chart == b.chart && a.u == b.u && a.s == b.s) ++identical;
    worst = std::max(worst, S.flat_distance(a, b).value);
  }
  Check c{"beta = 0 gives the linear map", worst <= 1e-14, "", {}};
  c.detail = "max d(f, phi) = " + sci(worst) + " over " + std::to_string(n) + " points, " + std::to_string(identical) +
             " bitwise identical";
  c.data["max_distance"] = worst;
  c.data["points"] = n;
  c.data["identical"] = identical;
  r.checks.push_back(c);
  return r;
}

SuiteReport commutation(Session& s) {
  SuiteReport r;
  const auto& S = *s.preset().surface;
  const Flow& fl = s.flow(s.kernel());
  std::mt19937_64 rng(s.seed() + 1);
  std::uniform_real_distribution<double> T(-1.0, 1.0);
  const long n = s.points(100);
  double worst = 0.0;
  long done = 0, captured = 0;
  while (done < n) {
    SurfacePoint p = uniform_point(S, rng);
    const double t = T(rng);
    try {
      worst = std::max(worst, fl.renormalization_residual(p, t));
      ++done;
    } catch (const Error& e) {
      // trajectories running into a cone point have no residual
      if (e.code() != ErrorCode::Captured && e.code() != ErrorCode::SingularHit) throw;
      if (++captured > 10 * n) throw;
    }
  }
  Check c{"f(h_{lambda t} p) = h_t(f p)", worst <= 1e-6, "", {}};
  c.detail = "max residual " + sci(worst) + " over " + std::to_string(n) + " pairs (|t| <= 1, tol " +
             s.params().get("tol") + "), " + std::to_string(captured) + " captured draws replaced";
  c.data["max_residual"] = worst;
  c.data["pairs"] = n;
  c.data["captured"] = captured;
  r.checks.push_back(c);
  return r;
}

SuiteReport contraction(Session& s) {
  SuiteReport r;
  const auto& S = *s.preset().surface;
  std::mt19937_64 rng(s.seed() + 2);
  std::vector<SurfacePoint> pts;
  const long n = s.points(1000);
  for (long i = 0; i < n; ++i) pts.push_back(uniform_point(S, rng));
  const double tol = s.params().number("series_tol");
  auto rep = entropy_check(s.field(s.kernel()), pts, tol);
  Check c{"lambda ||df v|| / ||v o f|| = 1", rep.max_rel_error <= 1e-8, "", {}};
  c.detail = "max relative error " + sci(rep.max_rel_error) + " over " + std::to_string(rep.samples) +
             " points (series tol " + s.params().get("series_tol") + ")";
  c.data["max_rel_error"] = rep.max_rel_error;
  c.data["points"] = rep.samples;
  r.checks.push_back(c);

  Check e{"entropy log lambda", true, "", {}};
  e.detail = "log lambda = " + num(rep.entropy, 12) + ", mean log a along backward orbits " + num(rep.unstable_average, 8);
  if (s.torus()) {
    const double ref = 0.9624236501;
    const double rel = std::abs(rep.entropy - ref) / ref;
    e.pass = rel <= 1e-8 && rep.max_rel_error <= 1e-8;
    e.detail += ", relative to 0.9624236501: " + sci(rel);
    e.data["reference"] = ref;
  } else {
    e.pass = rep.max_rel_error <= 1e-8;
  }
  e.data["entropy"] = rep.entropy;
  e.data["unstable_average"] = rep.unstable_average;
  r.checks.push_back(e);
  return r;
}

SuiteReport fixed_points(Session& s) {
  SuiteReport r;
  const NonlinearMap& f = s.map(s.kernel());
  const auto& S = f.surface();
  const auto fp = f.fixed_points(0);
  const auto& st = f.sites()[0];

  double worst = 0.0;
  for (const auto& p : fp.p) worst = std::max(worst, S.flat_distance(f.eval_f(p), p).value);
  Check a{"f(p_i) = p_i", worst <= 1e-12, "", {}};
  a.detail = std::to_string(fp.p.size()) + " fixed points at t0 = " + num(fp.t0, 12) + ", max d(f p, p) = " + sci(worst);
  a.data["t0"] = fp.t0;
  a.data["max_distance"] = worst;
  r.checks.push_back(a);

  const double formula = 1.0 + st.beta * fp.t0 * f.kernel().dk(fp.t0 / st.alpha) / st.alpha;
  Check m{"multiplier exceeds 1", formula > 1.0 && std::abs(formula - fp.m_u) <= 1e-12 * formula, "", {}};
  m.detail = "1 + beta t0 k'(t0/alpha)/alpha = " + num(formula, 12) + ", Jacobian " + num(fp.m_u, 12);
  m.data["multiplier"] = formula;
  m.data["jacobian"] = fp.m_u;
  r.checks.push_back(m);

  // the classifier accepts this ball on sight, so follow each orbit to the centre instead
  const double R = 0.9 * fp.t0;
  const int n = static_cast<int>(s.points(1000));
  const int budget = static_cast<int>(s.params().integer("max_iter"));
  const int mult = st.kind == SiteKind::Conical ? S.cone_points()[st.cone].multiplicity : 1;
  std::mt19937_64 rng(s.seed() + 3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int basin = 0, worst_iter = 0;
  for (int i = 0; i < n; ++i) {
    const double rad = R * std::sqrt(U(rng));
    const double th = 2.0 * M_PI * mult * U(rng);
    SurfacePoint x = f.from_local(0, th, {rad * std::cos(th), rad * std::sin(th)});
    for (int k = 1; k <= budget; ++k) {
      x = f.eval_f(x);
      auto loc = f.locate(x);
      if (!loc || loc->site != 0 || loc->r > rad + 1e-15) break;  // left the ball it started in
      if (loc->r < 1e-10) {
        ++basin, worst_iter = std::max(worst_iter, k);
        break;
      }
    }
  }
  Check b{"B(center, 0.9 t0) lies in the basin", basin == n, "", {}};
  b.detail = std::to_string(basin) + "/" + std::to_string(n) + " sampled orbits reach the centre within 1e-10, at most " +
             std::to_string(worst_iter) + " iterations";
  b.data["basin"] = basin;
  b.data["samples"] = n;
  r.checks.push_back(b);
  return r;
}

SuiteReport rauzy(Session& s) {
  SuiteReport r;
  const int M = static_cast<int>(s.params().integer("steps"));
  const int m_min = static_cast<int>(s.params().integer("min_agreement"));
  const GIET& T = s.giet(s.kernel());
  FlowOptions fo = s.flow(s.kernel()).options();
  fo.tol = s.params().number("check_tol");
  Flow tight(s.field(s.kernel()), fo);
  SeparatrixOptions so;
  so.t_max = s.separatrix_tmax();
  const SeparatrixData check = trace_separatrices(tight, s.preset(), so);
  const RauzyRun run = rauzy_induct(T.separatrices(), M, 1e-9, &check);
  ExactIET T0 = build_exact_iet(s.preset());
  const std::string p0 = rauzy_induct(T0, M);
  const auto cmp = compare_paths(run.path, p0, m_min);
  Check c{"Rauzy paths of T and T0 agree", cmp.pass, "", {}};
  c.detail = "common prefix " + std::to_string(cmp.agreement) + " (need " + std::to_string(m_min) + "), T: " +
             run.path + (run.stop.empty() ? "" : " [" + run.stop + "]") + ", T0: " + p0.substr(0, run.path.size() + 4);
  c.data["agreement"] = cmp.agreement;
  c.data["path"] = run.path;
  c.data["path_T0"] = p0;
  c.data["stop"] = run.stop;
  r.checks.push_back(c);
  return r;
}

SuiteReport ergodicity(Session& s) {
  SuiteReport r;
  const GIET& T = s.giet(s.kernel());
  const double L = T.length();
  std::vector<std::function<double(double)>> g = {[L](double x) { return x / L; },
                                                   [L](double x) { return std::cos(2.0 * M_PI * x / L); },
                                                   [&T](double x) { return T.return_time(x); }};
  const long n = s.params().integer("birkhoff_n");
  const int starts = static_cast<int>(s.params().integer("starts"));
  std::mt19937_64 rng(s.seed() + 4);
  std::uniform_real_distribution<double> U(0.0, L);
  std::vector<double> lo(g.size(), INFINITY), hi(g.size(), -INFINITY);
  auto rows = nlohmann::ordered_json::array();
  for (int k = 0; k < starts; ++k) {
    const double x0 = U(rng);
    auto a = birkhoff_averages(T, x0, n, g);
    for (std::size_t j = 0; j < g.size(); ++j) lo[j] = std::min(lo[j], a[j]), hi[j] = std::max(hi[j], a[j]);
    rows.push_back({{"start", x0}, {"averages", a}});
  }
  double spread = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) spread = std::max(spread, hi[j] - lo[j]);
  Check c{"Birkhoff averages agree across starts", spread <= 1e-3, "", {}};
  c.detail = std::to_string(starts) + " starts x " + std::to_string(n) + " iterates, spreads " + sci(hi[0] - lo[0]) +
             " " + sci(hi[1] - lo[1]) + " " + sci(hi[2] - lo[2]) + " (x/L, cos, return time)";
  c.data["spread"] = spread;
  c.data["starts"] = rows;
  r.checks.push_back(c);
  return r;
}

SuiteReport wandering(Session& s) {
  SuiteReport r;
  const GIET& T = s.giet(s.kernel());
  const int N = static_cast<int>(s.params().integer("wander_iterates"));
  auto om = omega_and_wandering(T, s.flow(s.kernel()), s.depth(), N, s.seed() + 5);
  const auto& w = om.wandering;
  const bool ok = w.b > w.a && w.disjoint && !w.captured && w.iterates >= N && w.total_length < T.length();
  Check c{"principal gap wanders", ok, "", {}};
  c.detail = "J = (" + num(w.a, 8) + ", " + num(w.b, 8) + "), " + std::to_string(w.iterates) + " images " +
             (w.disjoint ? "pairwise disjoint" : "overlapping at n = " + std::to_string(w.first_overlap)) +
             ", sum |T^n J| = " + num(w.total_length, 6) + " vs |gamma| = " + num(T.length(), 6);
  c.data["J"] = {w.a, w.b};
  c.data["iterates"] = w.iterates;
  c.data["disjoint"] = w.disjoint;
  c.data["total_length"] = w.total_length;
  c.data["length"] = T.length();
  c.data["depth"] = om.depth;
  r.checks.push_back(c);
  double od = 0.0;
  for (double d : om.omega_distance) od = std::max(od, d);
  r.notes.push_back("orbit tails stay within " + sci(od) + " of the depth-" + std::to_string(om.depth) +
                    " singular sample");
  return r;
}

std::vector<Polyline> fixed_point_leaves(Session& s, const NonlinearMap& f) {
  std::vector<Polyline> leaves;
  for (const auto& p : f.fixed_points(0).p)
    leaves.push_back(trace_stable_leaf(s.flow(s.kernel()), p, s.params().number("leaf_budget")));
  return leaves;
}

SuiteReport attractor(Session& s) {
  SuiteReport r;
  const NonlinearMap& f = s.map(s.kernel());
  BasinClassifier cls(f);
  const int res = static_cast<int>(s.params().integer("resolution"));
  const int iters = static_cast<int>(s.params().integer("max_iter"));
  RasterImage img = raster_K(cls, s.window(), res, res, iters);
  const double und = img.undecided_fraction();
  Check a{"undecided fraction in (0, 1)", und > 0.0 && und < 1.0, "", {}};
  a.detail = "undecided fraction " + num(und, 6) + " at " + std::to_string(res) + "^2, " + std::to_string(iters) +
             " iterations";
  a.data["undecided_fraction"] = und;
  r.checks.push_back(a);

  auto ei = empty_interior(img);
  Check b{"empty interior", ei.violations == 0 && ei.tested > 0, "", {}};
  b.detail = std::to_string(ei.violations) + " violations among " + std::to_string(ei.tested) + " probes";
  b.data["violations"] = ei.violations;
  b.data["tested"] = ei.tested;
  r.checks.push_back(b);

  auto leaves = fixed_point_leaves(s, f);
  auto cn = connectivity(img, leaves);
  Check c{"leaf closure matches the undecided set", std::isfinite(cn.hausdorff_px) && cn.hausdorff_px <= 2.0, "", {}};
  c.detail = "Hausdorff distance " + (std::isfinite(cn.hausdorff_px) ? num(cn.hausdorff_px, 4) : "inf") +
             " px (leaf to K " + num(cn.leaf_to_k_px, 4) + ", K to leaf " + num(cn.k_to_leaf_px, 4) + ")";
  c.data["hausdorff_px"] = std::isfinite(cn.hausdorff_px) ? nlohmann::ordered_json(cn.hausdorff_px) : nullptr;
  r.checks.push_back(c);

  // the same picture at small budgets, where the slow part of the basin is still open
  for (int it : {30, 100, 1000}) {
    RasterImage small = raster_K(cls, s.window(), 128, 128, it);
    r.notes.push_back("undecided fraction at 128^2 with " + std::to_string(it) + " iterations: " +
                      num(small.undecided_fraction(), 4));
  }
  return r;
}

SuiteReport srb(Session& s) {
  SuiteReport r;
  const NonlinearMap& f = s.map(KernelKind::C2);
  const auto& obs = s.bumps();
  const auto& mv = s.bump_values();
  const int nmax = static_cast<int>(s.params().integer("n"));
  std::vector<int> ns;
  for (int n : {0, 5, 10, 20, 30})
    if (n < nmax) ns.push_back(n);
  ns.push_back(nmax);
  auto tab = srb_pushforward(s.flow(KernelKind::C2), f.fixed_points(0).p[0], s.params().number("srb_half_length"),
                             static_cast<int>(s.params().integer("srb_samples")), ns, obs, mv);
  const SrbRow& last = tab.rows.back();
  const double worst = *std::max_element(last.diff.begin(), last.diff.end());
  Check a{"pushforwards reach mu", worst <= 1e-2, "", {}};
  a.detail = "max difference " + sci(worst) + " at n = " + std::to_string(last.n) + " over " +
             std::to_string(obs.size()) + " observables (" + std::to_string(tab.samples) + " samples)";
  a.data["max_difference"] = worst;
  r.checks.push_back(a);

  // monotone up to Monte Carlo noise: an increase must stay within 3 joint standard errors
  bool trend = true, strict = true;
  std::string worst_step;
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < tab.rows.size(); ++k) {
    const auto& row = tab.rows[k];
    rows.push_back({{"n", row.n}, {"diff", row.diff}, {"stderr", row.stderr_}});
    if (k == 0 || row.n < 5) continue;
    const auto& prev = tab.rows[k - 1];
    if (prev.n < 5) continue;
    for (std::size_t j = 0; j < row.diff.size(); ++j) {
      const double rise = row.diff[j] - prev.diff[j];
      const double se = std::hypot(row.stderr_[j], prev.stderr_[j]);
      if (rise > 0.0) strict = false;
      if (rise > 3.0 * se) {
        trend = false;
        worst_step = "observable " + std::to_string(j) + " rises " + sci(rise) + " from n = " +
                     std::to_string(prev.n) + " to " + std::to_string(row.n);
      }
    }
  }
  Check b{"differences non-increasing over n >= 5", trend, "", {}};
  b.detail = trend ? std::string("no increase beyond 3 standard errors") + (strict ? ", strictly monotone" : "")
                   : worst_step;
  b.data["strictly_monotone"] = strict;
  b.data["rows"] = rows;
  r.checks.push_back(b);
  return r;
}

SuiteReport mixing(Session& s) {
  SuiteReport r;
  const auto& S = *s.preset().surface;
  const auto& obs = s.bumps();
  auto phi = [&](const SurfacePoint& x) { return obs[0](S, x); };
  const int N = std::min<int>(20, static_cast<int>(s.params().integer("n")));
  auto rep = correlation_decay(s.map(KernelKind::C2), s.mu(), phi, phi, N);
  Check c{"log |C_n| decays linearly", rep.slope < 0.0 && rep.r2 >= 0.8, "", {}};
  c.detail = "slope " + num(rep.slope, 4) + ", R^2 " + num(rep.r2, 4) + " over n in [2, " + std::to_string(N) + "]";
  c.data["C"] = rep.C;
  c.data["stderr"] = rep.stderr_;
  c.data["slope"] = rep.slope;
  c.data["r2"] = rep.r2;
  r.checks.push_back(c);

  std::ostringstream o;
  o << "C_n:";
  for (int n = 0; n <= N; ++n) o << " " << sci(rep.C[n], 2);
  r.notes.push_back(o.str());
  std::vector<double> xs, ys;
  for (int n = 0; n <= N; ++n)
    if (std::abs(rep.C[n]) > 3.0 * rep.stderr_[n]) xs.push_back(n), ys.push_back(std::log(std::abs(rep.C[n])));
  if (xs.size() >= 2) {
    auto fit = fit_line(xs, ys);
    r.notes.push_back("fit over the " + std::to_string(xs.size()) + " lags with |C_n| > 3 SE: slope " +
                      num(fit.slope, 4) + ", R^2 " + num(fit.r2, 4));
  }
  return r;
}

SuiteReport support(Session& s) {
  SuiteReport r;
  const EmpiricalMeasure& mu = s.mu();
  BasinClassifier cls(s.map(KernelKind::C2));
  const long M = std::min<long>(s.params().integer("support_samples"), static_cast<long>(mu.size()));
  const int iters = static_cast<int>(s.params().integer("max_iter"));
  const std::size_t stride = mu.size() / M;
  long und = 0;
  double mean_entry = 0.0;
  long entered = 0;
  for (long i = 0; i < M; ++i) {
    auto v = cls.classify(mu.points[i * stride], iters);
    if (!v.basin)
      ++und;
    else
      mean_entry += v.iterations, ++entered;
  }
  const double frac = double(und) / double(M);
  Check c{"mu-samples lie in K", frac >= 0.99, "", {}};
  c.detail = num(100.0 * frac, 4) + "% of " + std::to_string(M) + " samples undecided at " + std::to_string(iters) +
             " iterations";
  if (entered) c.detail += ", the rest enter the ball after " + num(mean_entry / entered, 4) + " iterations on average";
  c.data["undecided_fraction"] = frac;
  c.data["samples"] = M;
  r.checks.push_back(c);
  return r;
}

using SuiteFn = SuiteReport (*)(Session&);

const std::vector<std::pair<std::string, SuiteFn>>& table() {
  static const std::vector<std::pair<std::string, SuiteFn>> t = {
      {"reduction", reduction}, {"commutation", commutation}, {"contraction", contraction},
      {"fixed-points", fixed_points}, {"rauzy", rauzy}, {"ergodicity", ergodicity},
      {"wandering", wandering}, {"attractor", attractor}, {"srb", srb},
      {"mixing", mixing}, {"support", support},
  };
  return t;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [n, _] : table()) v.push_back(n);
    return v;
  }();
  return names;
}

SuiteReport run_suite(const std::string& name, Session& s) {
  for (const auto& [n, fn] : table())
    if (n == name) {
      SuiteReport r = fn(s);
      r.suite = name;
      r.preset = s.preset().id;
      return r;
    }
  throw UsageError("unknown suite '" + name + "'");
}

}  // namespace nlpa::cli
