#pragma once

#include <cmath>
#include <string>
#include <vector>

// Boost 1.74's pchip calls isnan unqualified.
namespace boost::math::interpolators {
using std::isnan;
}
#include <boost/math/interpolators/pchip.hpp>

#include "nlpa/dd.hpp"
#include "nlpa/errors.hpp"
#include "nlpa/flow.hpp"
#include "nlpa/presets.hpp"

namespace nlpa {

// Interval exchange on [0, total). `top` lists letters in domain order,
// `bottom` in image order.
template <class Real>
struct IET {
  std::vector<int> top, bottom;
  std::vector<Real> lengths;

  int d() const { return static_cast<int>(top.size()); }
  Real total() const {
    Real s(0.0);
    for (const auto& l : lengths) s += l;
    return s;
  }
  // Left ends of the letters in the domain and in the image.
  std::vector<Real> domain_starts() const { return starts(top); }
  std::vector<Real> image_starts() const { return starts(bottom); }
  // Interior discontinuities of T (domain) and of T^-1 (image), increasing.
  std::vector<Real> discontinuities() const { return interior(top); }
  std::vector<Real> inverse_discontinuities() const { return interior(bottom); }

  Real operator()(Real x) const { return shift(x, top, image_starts(), domain_starts()); }
  Real inverse(Real y) const { return shift(y, bottom, domain_starts(), image_starts()); }

 private:
  std::vector<Real> starts(const std::vector<int>& order) const {
    std::vector<Real> s(lengths.size());
    Real acc(0.0);
    for (int a : order) {
      s[a] = acc;
      acc += lengths[a];
    }
    return s;
  }
  std::vector<Real> interior(const std::vector<int>& order) const {
    std::vector<Real> out;
    Real acc(0.0);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      acc += lengths[order[i]];
      out.push_back(acc);
    }
    return out;
  }
  // x lies in letter a of `order`, whose start there is from[a]; result is
  // to[a] + (x - from[a]).
  static Real shift(Real x, const std::vector<int>& order, const std::vector<Real>& to,
                    const std::vector<Real>& from) {
    int a = order.back();
    for (std::size_t i = 1; i < order.size(); ++i)
      if (x < from[order[i]]) {
        a = order[i - 1];
        break;
      }
    return to[a] + (x - from[a]);
  }
};

using ExactIET = IET<dd>;

ExactIET build_exact_iet(const Preset& pr);

// M Rauzy-Veech steps on x in place, returning the path. Throws
// ConnectionDetected when the competing lengths are equal.
template <class Real>
std::string rauzy_induct(IET<Real>& x, int M) {
  std::string path;
  for (int i = 0; i < M; ++i) {
    const int at = x.top.back(), ab = x.bottom.back();
    const Real lt = x.lengths[at], lb = x.lengths[ab];
    if (!(lt < lb) && !(lb < lt))
      throw Error(ErrorCode::ConnectionDetected, "equal competing lengths at step " + std::to_string(i));
    const char k = lb < lt ? 't' : 'b';
    if (k == 't')
      x.lengths[at] -= lb;
    else
      x.lengths[ab] -= lt;
    rauzy_move(x.top, x.bottom, k);
    path += k;
  }
  return path;
}

// gamma: segment along +u from the perturbation site.
Transversal base_transversal(const Preset& pr, double length);

struct SeparatrixData {
  // crossings of gamma in order of flow time, restricted to [0, length)
  std::vector<std::vector<Crossing>> incoming;  // backward from the site
  std::vector<std::vector<Crossing>> outgoing;  // forward from the site
  double length = 0.0;                          // |gamma| for this flow
  double t_max = 0.0;
};

struct SeparatrixOptions {
  double t_max = 200.0;
  double germ_offset = 1e-7;  // start distance from a cone point
  double extension = 1.2;     // search segment relative to |gamma_0|
};

// Separatrices of the site traced until t_max. The right end of gamma is the
// incoming crossing closest to |gamma_0|.
SeparatrixData trace_separatrices(const Flow& flow, const Preset& pr, const SeparatrixOptions& opt = {});

struct RauzyRun {
  std::string path;
  std::vector<double> margins;  // |difference of competing lengths| per step
  std::vector<double> lengths;  // interval length before each step
  std::string stop;             // empty when all requested steps were taken
};

// Rauzy induction of the return map read off from separatrix crossings.
// With `check` (the same data at a tighter tolerance), a step also needs
// both data sets to agree and the margin to exceed ten times their spread.
RauzyRun rauzy_induct(const SeparatrixData& sep, int M, double margin_min = 1e-9,
                      const SeparatrixData* check = nullptr);

struct GIETOptions {
  SeparatrixOptions separatrix;
  int initial_points = 24;   // interior samples per branch before refinement
  double table_tol = 1e-6;   // midpoint deviation from the chord
  int max_points = 3000;     // per branch
  double min_width = 1e-10;  // relative to |gamma|
  double return_budget = 1e4;
};

struct BranchTable {
  int letter = 0;
  double x0 = 0.0, x1 = 0.0;  // domain
  double y0 = 0.0, y1 = 0.0;  // image
  std::vector<double> x, y, u;
};

// Return map T of the flow to gamma: exact discontinuities from separatrices,
// branches as monotone tables.
class GIET {
 public:
  static GIET sample(const Flow& flow, const Preset& pr, const GIETOptions& opt = {});

  int d() const { return static_cast<int>(top_.size()); }
  const std::vector<int>& top() const { return top_; }
  const std::vector<int>& bottom() const { return bottom_; }
  double length() const { return sep_.length; }
  const Transversal& transversal() const { return gamma_; }
  const SeparatrixData& separatrices() const { return sep_; }
  const std::vector<BranchTable>& branches() const { return branches_; }
  const std::vector<double>& discontinuities() const { return disc_; }
  const std::vector<double>& inverse_discontinuities() const { return disc_inv_; }
  std::size_t table_points() const;

  int branch_at(double x) const;
  double operator()(double x) const;
  double inverse(double y) const;
  double return_time(double x) const;

 private:
  struct Interp {
    boost::math::interpolators::pchip<std::vector<double>> fwd, inv;
  };
  std::vector<int> top_, bottom_;
  Transversal gamma_;
  SeparatrixData sep_;
  std::vector<double> disc_, disc_inv_;
  std::vector<BranchTable> branches_;
  std::vector<Interp> interp_;
  std::vector<int> image_branch_;  // branch index of the k-th image interval
};

struct PathComparison {
  int agreement = 0;
  bool pass = false;
  std::string diagnostic;
};

PathComparison compare_paths(const std::string& a, const std::string& b, int m_min);

// Depth-D samples of S(infinity): points of the backward orbits of T's
// discontinuities and forward orbits of T^-1's, with their labels.
struct OrbitPoint {
  double xi = 0.0;
  int kind = 0;   // 0: backward orbit of a T discontinuity, 1: forward orbit of a T^-1 one
  int rank = 0;   // rank of the discontinuity among its kind
  int depth = 0;  // 1 for the discontinuity itself
};

std::vector<OrbitPoint> singular_orbits(const SeparatrixData& sep, int depth);
std::vector<OrbitPoint> singular_orbits(const ExactIET& T0, int depth);

struct Semiconjugacy {
  std::vector<double> xs, hs;           // increasing nodes of h
  std::vector<std::pair<double, double>> gaps;  // where h is constant
  double defect = 0.0;                  // sup |h(T x) - T0(h x)| on the grid
  double max_cell = 0.0;                // widest T0 cell of the depth-D sample
  bool monotone = true;
  int depth = 0;

  double operator()(double x) const;
};

// Piecewise linear through matched depth-D samples; constant across gaps
// whose preimage is wider than gap_ratio times the matched T0 cell.
Semiconjugacy approximate_semiconjugacy(const GIET& T, const ExactIET& T0, int depth, int agreement,
                                        int grid = 10000, double gap_ratio = 20.0);

struct WanderingReport {
  double a = 0.0, b = 0.0;   // principal gap J
  double a_in = 0.0, b_in = 0.0;  // tested subinterval
  int iterates = 0;
  bool disjoint = false;       // images pairwise disjoint and away from J
  bool captured = false;
  double total_length = 0.0;   // sum over n of |T^n J'|
  int first_overlap = -1;      // n where an image first failed to be an interval
};

struct OmegaApproximation {
  int depth = 0;
  std::vector<double> sample;  // sorted, with the end points of gamma
  std::vector<std::pair<double, double>> gaps;  // sorted by decreasing length
  WanderingReport wandering;
  std::vector<double> omega_distance;  // per start: max distance of the tail of its T-orbit to the sample
};

// S(infinity) sample and gaps; the largest gap is iterated with the flow.
OmegaApproximation omega_and_wandering(const GIET& T, const Flow& flow, int depth, int N,
                                       std::uint64_t seed = 7, int starts = 3, int orbit = 10000);

}  // namespace nlpa
