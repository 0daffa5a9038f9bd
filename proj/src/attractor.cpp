#include "nlpa/attractor.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>

#include "nlpa/errors.hpp"

namespace nlpa {

BasinClassifier::BasinClassifier(const NonlinearMap& f, double radius_factor) : f_(&f) {
  for (int i = 0; i < static_cast<int>(f.sites().size()); ++i) {
    const auto& st = f.sites()[i];
    double r = 0.0;
    if (st.enabled && st.beta != 0.0) {
      try {
        r = radius_factor * f.fixed_points(i).t0;
      } catch (const Error&) {
        r = 0.0;
      }
    }
    radius_.push_back(r);
  }
}

BasinVerdict BasinClassifier::classify(const SurfacePoint& p, int max_iter) const {
  BasinVerdict v;
  v.iterations = max_iter;
  SurfacePoint x = p;
  for (int i = 0; i <= max_iter; ++i) {
    auto loc = f_->locate(x);
    if (loc && loc->r < radius_[loc->site]) {
      v.basin = true;
      v.site = loc->site;
      v.iterations = i;
      v.entry_radius = loc->r;
      return v;
    }
    if (i == max_iter) break;
    x = f_->eval_f(x);
  }
  return v;
}

Window default_window(const TranslationSurface& S) {
  Window w{1e300, -1e300, 1e300, -1e300};
  for (const auto& v : S.vertices()) {
    w.u0 = std::min(w.u0, v.u), w.u1 = std::max(w.u1, v.u);
    w.s0 = std::min(w.s0, v.s), w.s1 = std::max(w.s1, v.s);
  }
  return w;
}

Vec2 RasterImage::center(int row, int col) const {
  const double du = (window.u1 - window.u0) / height, ds = (window.s1 - window.s0) / width;
  return {window.u1 - (row + 0.5) * du, window.s0 + (col + 0.5) * ds};
}

bool RasterImage::pixel_of(Vec2 x, int& row, int& col) const {
  const double fr = (window.u1 - x.u) / (window.u1 - window.u0) * height;
  const double fc = (x.s - window.s0) / (window.s1 - window.s0) * width;
  if (!(fr >= 0.0 && fr < height && fc >= 0.0 && fc < width)) return false;
  row = static_cast<int>(fr);
  col = static_cast<int>(fc);
  return true;
}

double RasterImage::undecided_fraction() const {
  long on = 0, und = 0;
  for (auto c : code) {
    if (c == PixelCode::Outside) continue;
    ++on;
    if (c == PixelCode::Undecided) ++und;
  }
  return on ? static_cast<double>(und) / on : 0.0;
}

RasterImage raster_K(const BasinClassifier& cls, const Window& w, int width, int height, int max_iter) {
  if (width <= 0 || height <= 0) throw Error(ErrorCode::InvalidParameter, "raster resolution must be positive");
  RasterImage img;
  img.window = w;
  img.width = width;
  img.height = height;
  img.max_iter = max_iter;
  img.code.assign(static_cast<std::size_t>(width) * height, PixelCode::Outside);
  img.iterations.assign(img.code.size(), 0);
  const auto& S = cls.map().surface();
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      const Vec2 x = img.center(r, c);
      if (!S.is_lattice() && !S.contains(x)) continue;
      const auto v = cls.classify(S.normalize(x), max_iter);
      const std::size_t k = static_cast<std::size_t>(r) * width + c;
      img.code[k] = v.basin ? PixelCode::Basin : PixelCode::Undecided;
      img.iterations[k] = v.iterations;
    }
  return img;
}

namespace {

std::vector<unsigned char> rgb(const RasterImage& img) {
  std::vector<unsigned char> out(img.code.size() * 3);
  for (std::size_t k = 0; k < img.code.size(); ++k) {
    unsigned char g = img.code[k] == PixelCode::Undecided ? 0 : img.code[k] == PixelCode::Basin ? 255 : 128;
    out[3 * k] = out[3 * k + 1] = out[3 * k + 2] = g;
  }
  return out;
}

std::vector<std::uint8_t> leaf_mask(const RasterImage& img, const std::vector<Polyline>& leaves) {
  std::vector<std::uint8_t> m(img.code.size(), 0);
  for (const auto& L : leaves)
    for (const auto& p : L.points) {
      int r, c;
      if (img.pixel_of(p.pos(), r, c)) m[static_cast<std::size_t>(r) * img.width + c] = 1;
    }
  return m;
}

constexpr double kFar = 1e20;  // unmarked pixels

// squared distance transform along one line (lower envelope of parabolas)
void edt_1d(const double* f, double* d, int n, std::vector<int>& v, std::vector<double>& z) {
  const double inf = std::numeric_limits<double>::infinity();
  int k = 0;
  v[0] = 0;
  z[0] = -inf;
  z[1] = inf;
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + 1.0 * q * q) - (f[v[k]] + 1.0 * v[k] * v[k])) / (2.0 * (q - v[k]));
    while (s <= z[k]) {
      --k;
      s = ((f[q] + 1.0 * q * q) - (f[v[k]] + 1.0 * v[k] * v[k])) / (2.0 * (q - v[k]));
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = inf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = std::min(kFar, dq * dq + f[v[k]]);
  }
}

}  // namespace

void write_ppm(const std::string& path, const RasterImage& img, const std::string& comment) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::Io, "cannot write " + path);
  os << "P6\n";
  if (!comment.empty()) os << "# " << comment << "\n";
  os << img.width << " " << img.height << "\n255\n";
  const auto px = rgb(img);
  os.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
}

void write_png(const std::string& path, const RasterImage& img, const std::string& comment) {
  FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw Error(ErrorCode::Io, "cannot write " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw Error(ErrorCode::Io, "png encoding failed for " + path);
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  std::string key = "Comment", text = comment;
  png_text t{};
  t.compression = PNG_TEXT_COMPRESSION_NONE;
  t.key = key.data();
  t.text = text.data();
  if (!comment.empty()) png_set_text(png, info, &t, 1);
  png_write_info(png, info);
  auto px = rgb(img);
  for (int r = 0; r < img.height; ++r) png_write_row(png, px.data() + static_cast<std::size_t>(r) * img.width * 3);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

Polyline trace_stable_leaf(const Flow& flow, const SurfacePoint& p, double budget) {
  Polyline out;
  if (!(budget > 0.0)) {
    out.points.push_back(p);
    out.t.push_back(0.0);
    return out;
  }
  const auto& S = flow.map().surface();
  std::vector<SurfacePoint> back, fwd;
  std::vector<double> tb, tf;
  for (int dir : {-1, 1}) {
    // |v| >= 1, so flow time bounds arclength
    Trajectory tr = flow.integrate(p, dir * budget, true);
    if (tr.status == TrajectoryStatus::Captured)
      throw Error(ErrorCode::Captured, "stable leaf reached a cone point at time " + std::to_string(tr.t_end));
    double len = 0.0;
    auto& pts = dir < 0 ? back : fwd;
    auto& ts = dir < 0 ? tb : tf;
    pts.push_back(tr.x[0]);
    ts.push_back(0.0);
    for (std::size_t k = 1; k < tr.x.size(); ++k) {
      const double seg = S.flat_distance(tr.x[k - 1], tr.x[k]).value;
      if (len + seg > budget) break;
      len += seg;
      pts.push_back(tr.x[k]);
      ts.push_back(tr.t[k]);
    }
    out.arclength += len;
  }
  for (std::size_t k = back.size(); k-- > 1;) {
    out.points.push_back(back[k]);
    out.t.push_back(tb[k]);
  }
  out.points.insert(out.points.end(), fwd.begin(), fwd.end());
  out.t.insert(out.t.end(), tf.begin(), tf.end());
  return out;
}

std::vector<double> distance_transform(const std::vector<std::uint8_t>& marked, int width, int height) {
  std::vector<double> g(marked.size());
  for (std::size_t k = 0; k < marked.size(); ++k) g[k] = marked[k] ? 0.0 : kFar;
  const int n = std::max(width, height);
  std::vector<double> f(n), d(n), z(n + 1);  // kFar marks "no pixel"
  std::vector<int> v(n);
  for (int c = 0; c < width; ++c) {
    for (int r = 0; r < height; ++r) f[r] = g[static_cast<std::size_t>(r) * width + c];
    edt_1d(f.data(), d.data(), height, v, z);
    for (int r = 0; r < height; ++r) g[static_cast<std::size_t>(r) * width + c] = d[r];
  }
  for (int r = 0; r < height; ++r) {
    double* row = g.data() + static_cast<std::size_t>(r) * width;
    std::copy(row, row + width, f.begin());
    edt_1d(f.data(), d.data(), width, v, z);
    std::copy(d.begin(), d.begin() + width, row);
  }
  return g;
}

DiagnosticsReport empty_interior(const RasterImage& img, int probe) {
  DiagnosticsReport rep;
  rep.mode = "empty_interior";
  const int W = img.width, H = img.height;
  for (int c = 0; c < W; ++c)
    for (int r = 0; r < H; ++r) {
      if (img.at(r, c) != PixelCode::Undecided) continue;
      // nearest basin pixel above and below in the column
      int up = 1, down = 1;
      while (r - up >= 0 && img.at(r - up, c) != PixelCode::Basin) ++up;
      while (r + down < H && img.at(r + down, c) != PixelCode::Basin) ++down;
      bool bad = false, probed = false;
      for (int o = 1; o < probe && !bad; ++o) {
        const int lo = r - o, hi = r - o + probe;
        if (lo < 0 || hi >= H) continue;
        probed = true;
        if (up > o && down > probe - o) bad = true;
      }
      rep.tested += probed;
      if (bad) ++rep.violations;
    }
  rep.fraction_ok = rep.tested ? 1.0 - static_cast<double>(rep.violations) / rep.tested : 1.0;
  return rep;
}

DiagnosticsReport connectivity(const RasterImage& img, const std::vector<Polyline>& leaves) {
  DiagnosticsReport rep;
  rep.mode = "connectivity";
  const auto leaf = leaf_mask(img, leaves);
  std::vector<std::uint8_t> und(img.code.size());
  for (std::size_t k = 0; k < und.size(); ++k) und[k] = img.code[k] == PixelCode::Undecided;
  const auto d_leaf = distance_transform(leaf, img.width, img.height);
  const auto d_und = distance_transform(und, img.width, img.height);
  double a = 0.0, b = 0.0;
  long nl = 0, nu = 0;
  for (std::size_t k = 0; k < und.size(); ++k) {
    if (leaf[k]) a = std::max(a, d_und[k]), ++nl;
    if (und[k]) b = std::max(b, d_leaf[k]), ++nu;
  }
  rep.tested = nl + nu;
  if (nl == 0 || nu == 0) a = b = std::numeric_limits<double>::infinity();
  rep.leaf_to_k_px = std::sqrt(a);
  rep.k_to_leaf_px = std::sqrt(b);
  rep.hausdorff_px = std::max(rep.leaf_to_k_px, rep.k_to_leaf_px);
  return rep;
}

DiagnosticsReport accessible_border(const RasterImage& img, const std::vector<Polyline>& leaves, int starts,
                                    std::uint64_t seed, double tol_px) {
  DiagnosticsReport rep;
  rep.mode = "accessible_border";
  const auto d_leaf = distance_transform(leaf_mask(img, leaves), img.width, img.height);
  std::vector<std::size_t> basin;
  for (std::size_t k = 0; k < img.code.size(); ++k)
    if (img.code[k] == PixelCode::Basin) basin.push_back(k);
  if (basin.empty()) return rep;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, basin.size() - 1);
  long ok = 0;
  for (int i = 0; i < starts; ++i) {
    const std::size_t k = basin[pick(rng)];
    const int c = static_cast<int>(k % img.width);
    int r = static_cast<int>(k / img.width);
    while (r >= 0 && img.at(r, c) == PixelCode::Basin) --r;
    if (r < 0 || img.at(r, c) != PixelCode::Undecided) continue;  // left the window first
    ++rep.tested;
    if (std::sqrt(d_leaf[static_cast<std::size_t>(r) * img.width + c]) <= tol_px)
      ++ok;
    else
      ++rep.violations;
  }
  rep.fraction_ok = rep.tested ? static_cast<double>(ok) / rep.tested : 0.0;
  return rep;
}

}  // namespace nlpa
