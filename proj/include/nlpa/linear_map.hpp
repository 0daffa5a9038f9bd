#pragma once

#include <memory>
#include <vector>

#include "nlpa/surface.hpp"

namespace nlpa {

// Affine map with derivative sign * diag(lambda, 1/lambda) in every chart.
// On a polygon surface the image of p is developed from a corner visible from
// p; `sheet_shift` is the number of full turns by which the map rotates the
// germs at the cone points.
class LinearPA {
 public:
  LinearPA() = default;
  LinearPA(std::shared_ptr<const TranslationSurface> surface, double lambda_raw, int sign = 1,
           int sheet_shift = 0, int power = 1);

  const TranslationSurface& surface() const { return *surface_; }
  std::shared_ptr<const TranslationSurface> surface_ptr() const { return surface_; }
  double lambda() const { return lambda_; }
  double lambda_raw() const { return lambda_raw_; }
  int sign() const { return sign_; }
  int sheet_shift() const { return shift_; }
  int power_applied() const { return power_; }

  // Extra rotation of the total angle at cone points, in half turns.
  int half_turns() const;

  SurfacePoint eval_phi(const SurfacePoint& p) const;
  SurfacePoint eval_phi_inverse(const SurfacePoint& p) const;

  // Same map evaluated through a chosen polygon corner (must see p).
  SurfacePoint eval_via_corner(const SurfacePoint& p, int vertex, bool inverse) const;

  // Point whose cone frame has the given local vector, in the sheet obtained
  // by carrying theta_src through this map. new_local must lie in the same
  // quadrant as the image of the source direction.
  SurfacePoint place_in_image_sheet(int cone, double theta_src, Vec2 new_local) const;
  SurfacePoint place_in_source_sheet(int cone, double theta_img, Vec2 new_local) const;

  // Permutation of the outgoing +u separatrix germs at a cone point.
  std::vector<int> germ_permutation(int cone) const;

 private:
  SurfacePoint apply(const SurfacePoint& p, bool inverse, int vertex) const;

  std::shared_ptr<const TranslationSurface> surface_;
  double lambda_raw_ = 1.0;
  double lambda_ = 1.0;
  int sign_ = 1;
  int shift_ = 0;
  int power_ = 1;
};

// Least power of the map fixing every cone point and every separatrix germ.
LinearPA stabilizing_power(const LinearPA& raw);

}  // namespace nlpa
