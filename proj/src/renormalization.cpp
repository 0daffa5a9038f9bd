#include "nlpa/renormalization.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <tuple>

namespace nlpa {

namespace {

int anchor_cone(const Preset& pr) {
  const auto& S = *pr.surface;
  for (int i = 0; i < static_cast<int>(S.cone_points().size()); ++i)
    if (norm(S.cone_points()[i].position - pr.anchor) < 1e-12) return i;
  return -1;
}

int anchor_vertex(const Preset& pr) {
  const auto& V = pr.surface->vertices();
  for (int i = 0; i < static_cast<int>(V.size()); ++i)
    if (norm(V[i] - pr.anchor) < 1e-12) return i;
  return -1;
}

// first crossing of each list, ordered by position; returns list indices
std::vector<int> rank_lists(const std::vector<std::vector<Crossing>>& lists) {
  std::vector<int> idx;
  for (int j = 0; j < static_cast<int>(lists.size()); ++j)
    if (!lists[j].empty()) idx.push_back(j);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return lists[a][0].xi < lists[b][0].xi; });
  return idx;
}

// first crossing below L in each list, or -1 when the list runs out
double first_below(const std::vector<std::vector<Crossing>>& lists, double L, bool& exhausted) {
  double m = -1.0;
  for (const auto& c : lists) {
    bool found = false;
    for (const auto& x : c)
      if (x.xi < L && x.xi > 0.0) {
        m = std::max(m, x.xi);
        found = true;
        break;
      }
    if (!found) exhausted = true;
  }
  return m;
}

}  // namespace

ExactIET build_exact_iet(const Preset& pr) {
  if (pr.iet.top.empty() || pr.iet.lengths.size() != pr.iet.top.size())
    throw Error(ErrorCode::MissingPresetData, "preset '" + pr.id + "' has no interval exchange data");
  ExactIET T;
  T.top = pr.iet.top;
  T.bottom = pr.iet.bottom;
  T.lengths = pr.iet.lengths;
  return T;
}

Transversal base_transversal(const Preset& pr, double length) {
  const auto& S = *pr.surface;
  if (S.is_lattice()) return Transversal::from_point(S, S.normalize(pr.anchor), length);
  const int v = anchor_vertex(pr);
  if (v < 0) throw Error(ErrorCode::MissingPresetData, "perturbation site is not a polygon corner");
  return Transversal::from_corner(S, v, length);
}

SeparatrixData trace_separatrices(const Flow& flow, const Preset& pr, const SeparatrixOptions& opt) {
  const auto& S = *pr.surface;
  const double L0 = to_double(pr.iet.base_length);
  const Transversal g = base_transversal(pr, opt.extension * L0);
  const int cone = anchor_cone(pr);
  const int n = cone >= 0 ? S.cone_points()[cone].multiplicity : 1;

  SeparatrixData out;
  out.t_max = opt.t_max;
  out.incoming.resize(n);
  out.outgoing.resize(n);
  for (int j = 0; j < n; ++j)
    for (int dir : {-1, 1}) {
      SurfacePoint st = S.normalize(pr.anchor);
      double t_shift = 0.0;
      if (cone >= 0) {
        st = S.from_frame({cone, j + 1, {0.0, dir * opt.germ_offset}, 0.0});
        t_shift = opt.germ_offset;  // the field is exactly (0, 1) on the axis near the site
      }
      auto c = flow.crossings(st, dir, g, opt.t_max, 1 << 30);
      for (auto& x : c) x.t += t_shift;
      (dir < 0 ? out.incoming : out.outgoing)[j] = std::move(c);
    }

  // right end: incoming crossing nearest the unperturbed length
  double best = INFINITY;
  for (const auto& c : out.incoming)
    for (std::size_t k = 0; k < std::min<std::size_t>(3, c.size()); ++k)
      if (std::abs(c[k].xi - L0) < std::abs(best - L0)) best = c[k].xi;
  if (!std::isfinite(best) || std::abs(best - L0) > 0.1 * L0)
    throw Error(ErrorCode::NoReturnWithinBudget, "no separatrix crossing near the end of the base segment");
  out.length = best;
  auto trim = [&](std::vector<std::vector<Crossing>>& lists) {
    for (auto& c : lists) std::erase_if(c, [&](const Crossing& x) { return !(x.xi < best); });
  };
  trim(out.incoming);
  trim(out.outgoing);
  return out;
}

RauzyRun rauzy_induct(const SeparatrixData& sep, int M, double margin_min, const SeparatrixData* check) {
  RauzyRun run;
  double L = sep.length, Lc = check ? check->length : 0.0;
  for (int step = 0; step < M; ++step) {
    bool ex = false;
    const double xt = first_below(sep.incoming, L, ex);
    const double yb = first_below(sep.outgoing, L, ex);
    if (ex || xt < 0.0 || yb < 0.0) {
      run.stop = "separatrix data exhausted at step " + std::to_string(step);
      break;
    }
    const char k = xt < yb ? 't' : 'b';
    double margin = std::abs(xt - yb), need = margin_min;
    if (check) {
      bool exc = false;
      const double xc = first_below(check->incoming, Lc, exc);
      const double yc = first_below(check->outgoing, Lc, exc);
      if (exc || xc < 0.0 || yc < 0.0) {
        run.stop = "check data exhausted at step " + std::to_string(step);
        break;
      }
      if ((xc < yc ? 't' : 'b') != k) {
        run.stop = "tolerance check disagrees at step " + std::to_string(step);
        break;
      }
      need = std::max(need, 10.0 * std::max(std::abs(xt - xc), std::abs(yb - yc)));
      Lc = std::max(xc, yc);
    }
    if (margin < need) {
      run.stop = "margin exhausted at step " + std::to_string(step);
      break;
    }
    run.path += k;
    run.margins.push_back(margin);
    run.lengths.push_back(L);
    L = std::max(xt, yb);
  }
  return run;
}

// ---------------------------------------------------------------------------

GIET GIET::sample(const Flow& flow, const Preset& pr, const GIETOptions& opt) {
  GIET T;
  T.sep_ = trace_separatrices(flow, pr, opt.separatrix);
  const int d = static_cast<int>(pr.iet.top.size());
  const double L = T.sep_.length;
  for (const auto& c : T.sep_.incoming)
    if (!c.empty()) T.disc_.push_back(c.front().xi);
  for (const auto& c : T.sep_.outgoing)
    if (!c.empty()) T.disc_inv_.push_back(c.front().xi);
  std::sort(T.disc_.begin(), T.disc_.end());
  std::sort(T.disc_inv_.begin(), T.disc_inv_.end());
  if (static_cast<int>(T.disc_.size()) != d - 1 || static_cast<int>(T.disc_inv_.size()) != d - 1)
    throw Error(ErrorCode::NonMonotoneBranch, "separatrices give " + std::to_string(T.disc_.size()) +
                                                  " discontinuities, expected " + std::to_string(d - 1));

  std::vector<double> a{0.0}, b{0.0};
  a.insert(a.end(), T.disc_.begin(), T.disc_.end());
  b.insert(b.end(), T.disc_inv_.begin(), T.disc_inv_.end());
  a.push_back(L);
  b.push_back(L);

  T.gamma_ = base_transversal(pr, L);
  const Transversal& g = T.gamma_;
  auto ret = [&](double x) {
    ReturnResult r = flow.first_return(g, x, opt.return_budget);
    if (r.captured)
      throw Error(ErrorCode::NonMonotoneBranch, "interior sample " + std::to_string(x) + " reached a cone point");
    return r;
  };

  // combinatorics from the images of the midpoints
  T.top_ = pr.iet.top;
  T.bottom_.assign(d, -1);
  T.image_branch_.assign(d, -1);
  for (int i = 0; i < d; ++i) {
    const double y = ret(0.5 * (a[i] + a[i + 1])).xi;
    const int k = static_cast<int>(std::upper_bound(b.begin(), b.end(), y) - b.begin()) - 1;
    if (k < 0 || k >= d || T.bottom_[k] >= 0)
      throw Error(ErrorCode::NonMonotoneBranch, "branch images overlap");
    T.bottom_[k] = T.top_[i];
    T.image_branch_[k] = i;
  }

  for (int i = 0; i < d; ++i) {
    const int k = static_cast<int>(std::find(T.image_branch_.begin(), T.image_branch_.end(), i) -
                                   T.image_branch_.begin());
    BranchTable br;
    br.letter = T.top_[i];
    br.x0 = a[i];
    br.x1 = a[i + 1];
    br.y0 = b[k];
    br.y1 = b[k + 1];

    std::map<double, std::pair<double, double>> nodes;  // x -> (y, u)
    const double w = br.x1 - br.x0;
    for (int m = 1; m <= opt.initial_points; ++m) {
      const double x = br.x0 + w * m / (opt.initial_points + 1);
      auto r = ret(x);
      nodes[x] = {r.xi, r.time};
    }
    nodes[br.x0] = {br.y0, NAN};
    nodes[br.x1] = {br.y1, NAN};

    std::vector<std::pair<double, double>> todo;
    for (auto it = nodes.begin(); std::next(it) != nodes.end(); ++it) todo.push_back({it->first, std::next(it)->first});
    const double min_w = opt.min_width * L;
    while (!todo.empty() && static_cast<int>(nodes.size()) < opt.max_points) {
      auto [xl, xr] = todo.back();
      todo.pop_back();
      if (xr - xl < min_w) continue;
      const double xm = 0.5 * (xl + xr);
      auto r = ret(xm);
      const double chord = 0.5 * (nodes[xl].first + nodes[xr].first);
      nodes[xm] = {r.xi, r.time};
      if (std::abs(r.xi - chord) > opt.table_tol) {
        todo.push_back({xl, xm});
        todo.push_back({xm, xr});
      }
    }
    for (const auto& [x, yu] : nodes) {
      br.x.push_back(x);
      br.y.push_back(yu.first);
      br.u.push_back(yu.second);
    }
    const std::size_t n = br.x.size();
    br.u.front() = br.u[1];
    br.u.back() = br.u[n - 2];
    for (std::size_t m = 1; m < n; ++m)
      if (!(br.y[m] > br.y[m - 1]))
        throw Error(ErrorCode::NonMonotoneBranch,
                    "branch " + std::to_string(i) + " decreases near " + std::to_string(br.x[m]));
    T.interp_.push_back({boost::math::interpolators::pchip<std::vector<double>>(std::vector<double>(br.x),
                                                                                 std::vector<double>(br.y)),
                         boost::math::interpolators::pchip<std::vector<double>>(std::vector<double>(br.y),
                                                                                 std::vector<double>(br.x))});
    T.branches_.push_back(std::move(br));
  }
  return T;
}

std::size_t GIET::table_points() const {
  std::size_t n = 0;
  for (const auto& b : branches_) n += b.x.size();
  return n;
}

int GIET::branch_at(double x) const {
  const int k = static_cast<int>(std::upper_bound(disc_.begin(), disc_.end(), x) - disc_.begin());
  return std::clamp(k, 0, d() - 1);
}

double GIET::operator()(double x) const {
  const int i = branch_at(x);
  const auto& br = branches_[i];
  return std::clamp(interp_[i].fwd(std::clamp(x, br.x0, br.x1)), br.y0, br.y1);
}

double GIET::inverse(double y) const {
  int k = static_cast<int>(std::upper_bound(disc_inv_.begin(), disc_inv_.end(), y) - disc_inv_.begin());
  k = std::clamp(k, 0, d() - 1);
  const int i = image_branch_[k];
  const auto& br = branches_[i];
  return std::clamp(interp_[i].inv(std::clamp(y, br.y0, br.y1)), br.x0, br.x1);
}

double GIET::return_time(double x) const {
  const auto& br = branches_[branch_at(x)];
  auto it = std::upper_bound(br.x.begin(), br.x.end(), x);
  std::size_t k = std::clamp<std::size_t>(it - br.x.begin(), 1, br.x.size() - 1);
  const double w = (x - br.x[k - 1]) / (br.x[k] - br.x[k - 1]);
  return br.u[k - 1] + w * (br.u[k] - br.u[k - 1]);
}

// ---------------------------------------------------------------------------

PathComparison compare_paths(const std::string& a, const std::string& b, int m_min) {
  PathComparison c;
  const std::size_t n = std::min(a.size(), b.size());
  while (c.agreement < static_cast<int>(n) && a[c.agreement] == b[c.agreement]) ++c.agreement;
  c.pass = c.agreement >= m_min;
  if (c.agreement < static_cast<int>(n))
    c.diagnostic = "paths differ at step " + std::to_string(c.agreement) + " ('" + a[c.agreement] + "' vs '" +
                   b[c.agreement] + "')";
  else if (!c.pass)
    c.diagnostic = "only " + std::to_string(n) + " comparable steps";
  return c;
}

std::vector<OrbitPoint> singular_orbits(const SeparatrixData& sep, int depth) {
  std::vector<OrbitPoint> out;
  for (int kind = 0; kind < 2; ++kind) {
    const auto& lists = kind == 0 ? sep.incoming : sep.outgoing;
    const auto order = rank_lists(lists);
    for (int r = 0; r < static_cast<int>(order.size()); ++r) {
      const auto& c = lists[order[r]];
      for (int k = 0; k < std::min<int>(depth, c.size()); ++k) out.push_back({c[k].xi, kind, r, k + 1});
    }
  }
  return out;
}

std::vector<OrbitPoint> singular_orbits(const ExactIET& T0, int depth) {
  std::vector<OrbitPoint> out;
  const auto dt = T0.discontinuities(), di = T0.inverse_discontinuities();
  for (int r = 0; r < static_cast<int>(dt.size()); ++r) {
    dd x = dt[r];
    for (int k = 1; k <= depth; ++k, x = T0.inverse(x)) out.push_back({to_double(x), 0, r, k});
  }
  for (int r = 0; r < static_cast<int>(di.size()); ++r) {
    dd x = di[r];
    for (int k = 1; k <= depth; ++k, x = T0(x)) out.push_back({to_double(x), 1, r, k});
  }
  return out;
}

double Semiconjugacy::operator()(double x) const {
  for (const auto& [a, b] : gaps)
    if (x >= a && x < b) {
      auto it = std::lower_bound(xs.begin(), xs.end(), a);
      return hs[it - xs.begin()];
    }
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t k = std::clamp<std::size_t>(it - xs.begin(), 1, xs.size() - 1);
  const double w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return hs[k - 1] + std::clamp(w, 0.0, 1.0) * (hs[k] - hs[k - 1]);
}

Semiconjugacy approximate_semiconjugacy(const GIET& T, const ExactIET& T0, int depth, int agreement, int grid,
                                        double gap_ratio) {
  if (depth > agreement)
    throw Error(ErrorCode::DepthExceedsAgreement, "depth " + std::to_string(depth) + " exceeds the path agreement " +
                                                      std::to_string(agreement));
  Semiconjugacy h;
  h.depth = depth;
  std::map<std::tuple<int, int, int>, double> target;
  for (const auto& p : singular_orbits(T0, depth)) target[{p.kind, p.rank, p.depth}] = p.xi;
  std::vector<std::pair<double, double>> pairs{{0.0, 0.0}, {T.length(), to_double(T0.total())}};
  for (const auto& p : singular_orbits(T.separatrices(), depth)) {
    auto it = target.find({p.kind, p.rank, p.depth});
    if (it != target.end()) pairs.push_back({p.xi, it->second});
  }
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [x, y] : pairs) {
    h.xs.push_back(x);
    h.hs.push_back(y);
  }
  for (std::size_t k = 1; k < pairs.size(); ++k) {
    const double dx = h.xs[k] - h.xs[k - 1], dy = h.hs[k] - h.hs[k - 1];
    if (!(dy > 0.0)) h.monotone = false;
    h.max_cell = std::max(h.max_cell, dy);
    if (dx > gap_ratio * std::max(dy, 0.0) * T.length() / to_double(T0.total()))
      h.gaps.push_back({h.xs[k - 1], h.xs[k]});
  }
  const double L = T.length();
  for (int i = 0; i < grid; ++i) {
    const double x = (i + 0.5) * L / grid;
    const double lhs = h(T(x));
    const double rhs = to_double(T0(dd(h(x))));
    h.defect = std::max(h.defect, std::abs(lhs - rhs));
  }
  return h;
}

OmegaApproximation omega_and_wandering(const GIET& T, const Flow& flow, int depth, int N, std::uint64_t seed,
                                       int starts, int orbit) {
  OmegaApproximation om;
  om.depth = depth;
  const double L = T.length();
  om.sample = {0.0, L};
  for (const auto& p : singular_orbits(T.separatrices(), depth)) om.sample.push_back(p.xi);
  std::sort(om.sample.begin(), om.sample.end());
  om.sample.erase(std::unique(om.sample.begin(), om.sample.end()), om.sample.end());
  for (std::size_t k = 1; k < om.sample.size(); ++k) om.gaps.push_back({om.sample[k - 1], om.sample[k]});
  std::stable_sort(om.gaps.begin(), om.gaps.end(),
                   [](const auto& p, const auto& q) { return p.second - p.first > q.second - q.first; });

  auto& w = om.wandering;
  if (!om.gaps.empty()) {
    std::tie(w.a, w.b) = om.gaps.front();
    const double inset = 1e-4 * (w.b - w.a);
    w.a_in = w.a + inset;
    w.b_in = w.b - inset;
    const Transversal& g = T.transversal();
    std::vector<std::pair<double, double>> images;
    double xa = w.a_in, xb = w.b_in;
    for (int n = 1; n <= N; ++n) {
      auto ra = flow.first_return(g, xa), rb = flow.first_return(g, xb);
      if (ra.captured || rb.captured) {
        w.captured = true;
        break;
      }
      xa = ra.xi;
      xb = rb.xi;
      if (!(xb > xa)) {
        w.first_overlap = n;
        break;
      }
      images.push_back({xa, xb});
      w.iterates = n;
      w.total_length += xb - xa;
    }
    w.disjoint = !w.captured && w.first_overlap < 0 && w.iterates == N;
    if (w.disjoint) {
      images.push_back({w.a_in, w.b_in});
      std::vector<std::pair<double, double>> s = images;
      std::sort(s.begin(), s.end());
      for (std::size_t k = 1; k < s.size(); ++k)
        if (s[k].first <= s[k - 1].second) {
          w.disjoint = false;
          break;
        }
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, L);
  for (int s = 0; s < starts; ++s) {
    double x = U(rng);
    double worst = 0.0;
    for (int n = 0; n < orbit; ++n) {
      x = T(x);
      if (n >= orbit - 100) {
        auto it = std::lower_bound(om.sample.begin(), om.sample.end(), x);
        double dist = INFINITY;
        if (it != om.sample.end()) dist = *it - x;
        if (it != om.sample.begin()) dist = std::min(dist, x - *std::prev(it));
        worst = std::max(worst, dist);
      }
    }
    om.omega_distance.push_back(worst);
  }
  return om;
}

}  // namespace nlpa
