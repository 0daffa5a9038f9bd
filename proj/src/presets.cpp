#include "nlpa/presets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlpa/errors.hpp"

namespace nlpa {

namespace {

struct DVec {
  dd u, s;
};

Vec2 to_vec(const DVec& v) { return {to_double(v.u), to_double(v.s)}; }

// Ascending search over small integer combinations of a lattice basis.
template <class F>
void for_lattice(int radius, F&& f) {
  for (int i = -radius; i <= radius; ++i)
    for (int j = -radius; j <= radius; ++j)
      if (i || j) f(i, j);
}

}  // namespace

void rauzy_move(std::vector<int>& top, std::vector<int>& bottom, char kind) {
  const int at = top.back(), ab = bottom.back();
  if (kind == 't') {
    bottom.pop_back();
    auto it = std::find(bottom.begin(), bottom.end(), at);
    bottom.insert(it + 1, ab);
  } else if (kind == 'b') {
    top.pop_back();
    auto it = std::find(top.begin(), top.end(), ab);
    top.insert(it + 1, at);
  } else {
    throw Error(ErrorCode::InvalidParameter, "Rauzy move must be 't' or 'b'");
  }
}

std::vector<std::vector<long long>> rauzy_loop_matrix(std::vector<int> top, std::vector<int> bottom,
                                                      const std::string& word) {
  const int d = static_cast<int>(top.size());
  std::vector<std::vector<long long>> B(d, std::vector<long long>(d, 0));
  for (int i = 0; i < d; ++i) B[i][i] = 1;
  for (char k : word) {
    const int at = top.back(), ab = bottom.back();
    // B <- B * E, where E adds one column to another
    if (k == 't')
      for (int i = 0; i < d; ++i) B[i][ab] += B[i][at];
    else
      for (int i = 0; i < d; ++i) B[i][at] += B[i][ab];
    rauzy_move(top, bottom, k);
  }
  return B;
}

Preset build_torus(const IntMatrix2& m) {
  const long long a = m[0][0], b = m[0][1], c = m[1][0], d = m[1][1];
  if (a * d - b * c != 1) throw Error(ErrorCode::InvalidParameter, "matrix must have determinant 1");
  const long long tr = a + d;
  if (std::llabs(tr) <= 2) throw Error(ErrorCode::NonHyperbolicMatrix, "|trace| must exceed 2");
  const int sign = tr > 0 ? 1 : -1;
  const dd T(static_cast<double>(std::llabs(tr)));
  const dd lam = (T + sqrt(T * T - dd(4.0))) / dd(2.0);
  const dd mu = sign > 0 ? lam : -lam;

  // rows of the change of basis are left eigenvectors
  DVec lu{dd(static_cast<double>(c)), mu - dd(static_cast<double>(a))};
  DVec ls{dd(static_cast<double>(c)), dd(1.0) / mu - dd(static_cast<double>(a))};
  dd det = lu.u * ls.s - lu.s * ls.u;
  dd sc = sqrt(abs(det));
  lu = {lu.u / sc, lu.s / sc};
  ls = {ls.u / sc, ls.s / sc};
  if (det < dd(0.0)) ls = {-ls.u, -ls.s};
  dd nu = sqrt(lu.u * lu.u + lu.s * lu.s), ns = sqrt(ls.u * ls.u + ls.s * ls.s);
  dd x = sqrt(ns / nu);
  lu = {lu.u * x, lu.s * x};
  ls = {ls.u / x, ls.s / x};
  auto P = [&](long long i, long long j) {
    dd di(static_cast<double>(i)), dj(static_cast<double>(j));
    return DVec{lu.u * di + lu.s * dj, ls.u * di + ls.s * dj};
  };

  // Lagrange reduction of the integer basis
  std::array<long long, 2> n1{1, 0}, n2{0, 1};
  auto len2 = [&](const std::array<long long, 2>& n) {
    Vec2 v = to_vec(P(n[0], n[1]));
    return dot(v, v);
  };
  for (int it = 0; it < 100; ++it) {
    if (len2(n2) < len2(n1)) std::swap(n1, n2);
    Vec2 v1 = to_vec(P(n1[0], n1[1])), v2 = to_vec(P(n2[0], n2[1]));
    long long q = std::llround(dot(v1, v2) / dot(v1, v1));
    if (q == 0) break;
    n2 = {n2[0] - q * n1[0], n2[1] - q * n1[1]};
  }
  Vec2 e1 = to_vec(P(n1[0], n1[1])), e2 = to_vec(P(n2[0], n2[1]));

  Preset pr;
  pr.id = "torus";
  pr.surface = std::make_shared<const TranslationSurface>(TranslationSurface::from_lattice("torus", e1, e2));
  pr.raw = LinearPA(pr.surface, to_double(lam), sign);
  pr.phi = stabilizing_power(pr.raw);
  pr.anchor = {0.0, 0.0};
  pr.matrix = {{a, b}, {c, d}};

  // base segment: the shortest lattice vector in the open first quadrant
  DVec ell{dd(std::numeric_limits<double>::infinity()), dd(0.0)};
  double best = std::numeric_limits<double>::infinity();
  for_lattice(40, [&](int i, int j) {
    DVec v = P(i, j);
    if (v.u > dd(0.0) && v.s > dd(0.0) && to_double(v.u * v.u + v.s * v.s) < best) {
      best = to_double(v.u * v.u + v.s * v.s);
      ell = v;
    }
  });
  const dd L0 = ell.u;
  // first return vectors: lowest lattice vectors above the segment
  DVec wa{dd(0.0), dd(std::numeric_limits<double>::infinity())}, wb = wa;
  for_lattice(40, [&](int i, int j) {
    DVec v = P(i, j);
    if (v.s <= dd(0.0) || abs(v.u) >= L0) return;
    if (v.u > dd(0.0) && v.s < wb.s) wb = v;
    if (v.u < dd(0.0) && v.s < wa.s) wa = v;
  });
  if (to_double(abs(wb.u - wa.u - L0)) > 1e-20 || to_double(abs(wb.s - wa.s - ell.s)) > 1e-20)
    throw Error(ErrorCode::MissingPresetData, "return vectors do not differ by the base vector");
  pr.iet.top = {0, 1};
  pr.iet.bottom = {1, 0};
  pr.iet.lengths = {wb.u, L0 - wb.u};
  pr.iet.heights = {wa.s, wb.s};
  pr.iet.base_length = L0;
  pr.iet.loop = "";
  return pr;
}

Preset build_genus2_preset() {
  const std::string word = "tbtbtbtbbtb";
  const std::vector<int> top{0, 1, 2, 3}, bottom{3, 2, 1, 0};
  auto B = rauzy_loop_matrix(top, bottom, word);
  const int d = 4;

  // Perron data by power iteration in double-double
  auto mul = [&](const std::vector<std::vector<dd>>& M, const std::vector<dd>& v) {
    std::vector<dd> w(d, dd(0.0));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) w[i] += M[i][j] * v[j];
    return w;
  };
  std::vector<std::vector<dd>> Bd(d, std::vector<dd>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) Bd[i][j] = dd(static_cast<double>(B[i][j]));

  // exact integer inverse (determinant is +-1) by Gauss-Jordan in long double
  std::vector<std::vector<long double>> aug(d, std::vector<long double>(2 * d, 0.0L));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) aug[i][j] = static_cast<long double>(B[i][j]);
    aug[i][d + i] = 1.0L;
  }
  for (int col = 0; col < d; ++col) {
    int piv = col;
    for (int r = col + 1; r < d; ++r)
      if (std::fabs(aug[r][col]) > std::fabs(aug[piv][col])) piv = r;
    std::swap(aug[col], aug[piv]);
    long double pv = aug[col][col];
    for (auto& x : aug[col]) x /= pv;
    for (int r = 0; r < d; ++r) {
      if (r == col) continue;
      long double f = aug[r][col];
      for (int j = 0; j < 2 * d; ++j) aug[r][j] -= f * aug[col][j];
    }
  }
  std::vector<std::vector<dd>> Binv(d, std::vector<dd>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) Binv[i][j] = dd(static_cast<double>(std::llround(aug[i][d + j])));

  auto perron = [&](const std::vector<std::vector<dd>>& M) {
    std::vector<dd> v(d, dd(1.0));
    for (int it = 0; it < 200; ++it) {
      auto w = mul(M, v);
      dd s(0.0);
      for (auto& x : w) s += abs(x);
      for (auto& x : w) x /= s;
      v = w;
    }
    return v;
  };
  std::vector<dd> lam = perron(Bd);
  std::vector<dd> tau = perron(Binv);
  if (tau[0] < dd(0.0))
    for (auto& x : tau) x = -x;
  dd rho = mul(Bd, lam)[0] / lam[0];

  dd total(0.0);
  for (auto& x : lam) total += x;
  for (auto& x : lam) x /= total;
  // heights h = -Omega tau for the symmetric permutation
  auto heights = [&](const std::vector<dd>& t) {
    std::vector<dd> h(d, dd(0.0));
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        if (a < b) h[a] -= t[b];
        if (a > b) h[a] += t[b];
      }
    return h;
  };
  std::vector<dd> h = heights(tau);
  dd area(0.0);
  for (int a = 0; a < d; ++a) area += lam[a] * h[a];
  for (auto& x : tau) x /= area;
  h = heights(tau);

  std::vector<DVec> z(d);
  for (int a = 0; a < d; ++a) z[a] = {lam[a], tau[a]};
  auto sum = [&](std::initializer_list<int> ids) {
    DVec r{dd(0.0), dd(0.0)};
    for (int i : ids) r = {r.u + z[i].u, r.s + z[i].s};
    return to_vec(r);
  };
  std::vector<Vec2> verts{{0.0, 0.0},       sum({3}),       sum({3, 2}),    sum({3, 2, 1}),
                          sum({0, 1, 2, 3}), sum({0, 1, 2}), sum({0, 1}),    sum({0})};
  std::vector<int> pair{4, 5, 6, 7, 0, 1, 2, 3};

  Preset pr;
  pr.id = "genus2";
  pr.surface = std::make_shared<const TranslationSurface>(
      TranslationSurface::from_polygon("genus2", verts, pair, 2));
  const TranslationSurface& S = *pr.surface;
  if (S.cone_points().size() != 1 || S.cone_points()[0].multiplicity != 3)
    throw Error(ErrorCode::MissingPresetData, "genus-2 polygon does not have a single 6 pi cone point");

  // The affine map with derivative diag(rho, 1/rho) is unique; find the germ
  // rotation under which it is well defined (independent of the corner used).
  int shift = -1;
  for (int k = 0; k < 3 && shift < 0; ++k) {
    LinearPA cand(pr.surface, to_double(rho), 1, k, 1);
    double worst = 0.0;
    for (int t = 0; t < static_cast<int>(S.triangles().size()); ++t) {
      const auto& tri = S.triangles()[t];
      Vec2 c = (1.0 / 3.0) * (S.vertices()[tri[0]] + S.vertices()[tri[1]] + S.vertices()[tri[2]]);
      SurfacePoint p = S.normalize(c);
      SurfacePoint r0 = cand.eval_via_corner(p, tri[0], false);
      for (int j = 1; j < 3; ++j) {
        SurfacePoint r = cand.eval_via_corner(p, tri[j], false);
        auto disp = S.displacement(r0, r, 1e-3);
        worst = std::max(worst, disp ? norm(*disp) : 1.0);
      }
    }
    if (worst < 1e-9) shift = k;
  }
  if (shift < 0) throw Error(ErrorCode::MissingPresetData, "no consistent affine map on the genus-2 polygon");
  pr.raw = LinearPA(pr.surface, to_double(rho), 1, shift, 1);
  pr.phi = stabilizing_power(pr.raw);
  pr.anchor = S.cone_points()[0].position;
  pr.matrix = B;
  pr.iet.top = top;
  pr.iet.bottom = bottom;
  pr.iet.lengths = lam;
  pr.iet.heights = h;
  pr.iet.base_length = dd(1.0);
  pr.iet.loop = word;
  return pr;
}

Preset preset_by_name(const std::string& name) {
  if (name == "torus") return build_torus({{{2, 1}, {1, 1}}});
  if (name == "genus2") return build_genus2_preset();
  throw Error(ErrorCode::InvalidParameter, "unknown preset '" + name + "' (expected torus or genus2)");
}

nlohmann::json Preset::to_json() const {
  nlohmann::json j;
  j["id"] = id;
  j["surface"] = surface->to_json();
  j["lambda"] = phi.lambda();
  j["lambda_raw"] = raw.lambda_raw();
  j["power_applied"] = phi.power_applied();
  j["sheet_shift"] = raw.sheet_shift();
  j["matrix"] = matrix;
  auto pairs = [](const std::vector<dd>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (auto& x : v) a.push_back({x.hi, x.lo});
    return a;
  };
  j["iet"] = {{"top", iet.top},
              {"bottom", iet.bottom},
              {"lengths", pairs(iet.lengths)},
              {"heights", pairs(iet.heights)},
              {"base_length", {iet.base_length.hi, iet.base_length.lo}},
              {"rauzy_loop", iet.loop}};
  return j;
}

}  // namespace nlpa
