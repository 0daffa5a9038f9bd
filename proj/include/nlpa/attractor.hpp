#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlpa/flow.hpp"

namespace nlpa {

struct BasinVerdict {
  bool basin = false;
  int site = -1;
  int iterations = 0;          // iterations before entering the ball, or the budget
  double entry_radius = 0.0;   // distance to the site on entry
};

// Forward orbits are basin points once they enter B(site, 0.9 t0).
class BasinClassifier {
 public:
  explicit BasinClassifier(const NonlinearMap& f, double radius_factor = 0.9);

  BasinVerdict classify(const SurfacePoint& p, int max_iter = 10000) const;
  const NonlinearMap& map() const { return *f_; }
  // certified ball radius per site, 0 where there is none
  const std::vector<double>& radii() const { return radius_; }

 private:
  const NonlinearMap* f_;
  std::vector<double> radius_;
};

// Axis-aligned window in polygon coordinates; columns follow s, rows follow u
// with the top row at u1.
struct Window {
  double u0 = 0.0, u1 = 1.0;
  double s0 = 0.0, s1 = 1.0;
};

Window default_window(const TranslationSurface& S);

enum class PixelCode : std::uint8_t { Undecided = 0, Basin = 1, Outside = 2 };

struct RasterImage {
  Window window;
  int width = 0, height = 0;
  int max_iter = 0;
  std::vector<PixelCode> code;  // row major
  std::vector<std::int32_t> iterations;

  PixelCode at(int row, int col) const { return code[static_cast<std::size_t>(row) * width + col]; }
  Vec2 center(int row, int col) const;  // (u, s)
  // pixel containing a polygon point, or false when outside the window
  bool pixel_of(Vec2 x, int& row, int& col) const;
  double undecided_fraction() const;  // among pixels on the surface
};

RasterImage raster_K(const BasinClassifier& cls, const Window& w, int width, int height, int max_iter);

// Binary P6; undecided black, basin white, outside grey.
void write_ppm(const std::string& path, const RasterImage& img, const std::string& comment = "");
void write_png(const std::string& path, const RasterImage& img, const std::string& comment = "");

struct Polyline {
  std::vector<SurfacePoint> points;
  std::vector<double> t;
  double arclength = 0.0;
};

// h_t orbit of p in both directions until the arclength budget is used on
// each side. Throws Captured.
Polyline trace_stable_leaf(const Flow& flow, const SurfacePoint& p, double arclength_budget);

struct DiagnosticsReport {
  std::string mode;
  long tested = 0;
  long violations = 0;
  double hausdorff_px = 0.0;
  double leaf_to_k_px = 0.0;   // sup over leaf pixels of the distance to undecided pixels
  double k_to_leaf_px = 0.0;   // sup over undecided pixels of the distance to leaf pixels
  double fraction_ok = 0.0;
};

// Every vertical probe of `probe` pixels containing an undecided pixel in its
// interior must meet a basin pixel.
DiagnosticsReport empty_interior(const RasterImage& img, int probe = 4);
// Hausdorff distance in pixels between the leaf pixels and the undecided set.
DiagnosticsReport connectivity(const RasterImage& img, const std::vector<Polyline>& leaves);
// Upward rays from basin points leave the basin near a traced leaf.
DiagnosticsReport accessible_border(const RasterImage& img, const std::vector<Polyline>& leaves, int starts,
                                    std::uint64_t seed, double tol_px = 2.0);

// Squared Euclidean distance (in pixels) to the nearest marked pixel; 1e20
// when nothing is marked.
std::vector<double> distance_transform(const std::vector<std::uint8_t>& marked, int width, int height);

}  // namespace nlpa
