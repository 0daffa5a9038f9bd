#pragma once

#include <random>

#include "nlpa/presets.hpp"

namespace nlpa::test {

inline const Preset& torus() {
  static const Preset p = preset_by_name("torus");
  return p;
}
inline const Preset& genus2() {
  static const Preset p = preset_by_name("genus2");
  return p;
}

inline SurfacePoint random_point(const TranslationSurface& S, std::mt19937_64& rng) {
  double lo_u = 1e9, hi_u = -1e9, lo_s = 1e9, hi_s = -1e9;
  for (auto& v : S.vertices()) {
    lo_u = std::min(lo_u, v.u), hi_u = std::max(hi_u, v.u);
    lo_s = std::min(lo_s, v.s), hi_s = std::max(hi_s, v.s);
  }
  std::uniform_real_distribution<double> U(lo_u, hi_u), V(lo_s, hi_s);
  for (;;) {
    Vec2 x{U(rng), V(rng)};
    if (S.contains(x)) return S.normalize(x);
  }
}

constexpr double kTorusBeta = -2.0;
constexpr double kTorusAlpha = 0.1;
constexpr double kG2Alpha = 0.02;

}  // namespace nlpa::test
