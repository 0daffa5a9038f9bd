#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nlpa/stable_field.hpp"

namespace nlpa {

struct FlowOptions {
  double tol = 1e-10;         // local error per step
  double h_max = 0.02;
  double h_min = 1e-14;
  double eps_sing = 1e-9;     // capture radius around cone points
  double series_tol = 1e-13;  // remainder bound for each field evaluation
  long max_steps = 100000000;
};

enum class TrajectoryStatus { Complete, Captured, Truncated };

struct IntegratorStats {
  long accepted = 0;
  long rejected = 0;
  long field_evals = 0;
};

struct Trajectory {
  SurfacePoint start;
  std::vector<double> t;
  std::vector<SurfacePoint> x;
  TrajectoryStatus status = TrajectoryStatus::Complete;
  int cone = -1;        // captured trajectories
  double t_end = 0.0;   // final or capture time
  std::string reason;   // truncated trajectories
  IntegratorStats stats;

  const SurfacePoint& end() const { return x.back(); }
};

// Segment along +u starting at a regular point or at a polygon corner,
// stored as its pieces inside the polygon.
class Transversal {
 public:
  static Transversal from_point(const TranslationSurface& S, const SurfacePoint& start, double length);
  static Transversal from_corner(const TranslationSurface& S, int vertex, double length);

  double length() const { return length_; }
  const std::vector<StraightPiece>& pieces() const { return pieces_; }
  const std::vector<double>& piece_offsets() const { return xi0_; }
  SurfacePoint point(double xi) const;
  // Parameter of p if it lies on the segment (|s| error at most eps).
  std::optional<double> parameter(const SurfacePoint& p, double eps = 1e-11) const;
  Transversal with_length(double length) const;

 private:
  const TranslationSurface* S_ = nullptr;
  SurfacePoint start_;
  int corner_ = -1;
  double length_ = 0.0;
  std::vector<StraightPiece> pieces_;
  std::vector<double> xi0_;
};

struct Crossing {
  double xi = 0.0;
  double t = 0.0;  // unsigned flow time from the start
};

struct ReturnResult {
  bool captured = false;
  double xi = 0.0;    // return parameter
  double time = 0.0;  // return or capture time
  int cone = -1;
};

// Flow h_t of the stable field; positive time moves along +s.
class Flow {
 public:
  explicit Flow(const StableField& field, FlowOptions opt = {});

  const StableField& field() const { return *field_; }
  const NonlinearMap& map() const { return field_->map(); }
  const FlowOptions& options() const { return opt_; }

  Vec2 velocity(const SurfacePoint& p) const;
  Trajectory integrate(const SurfacePoint& p, double t_target, bool record = true) const;
  // End point of the trajectory; throws Captured.
  SurfacePoint flow(const SurfacePoint& p, double t) const;
  // d(f(h_{lambda t}(p)), h_t(f(p)))
  double renormalization_residual(const SurfacePoint& p, double t) const;
  // First return to g of the point at parameter xi, moving forward in time.
  ReturnResult first_return(const Transversal& g, double xi, double budget = 1e4) const;
  // Successive crossings of g by the trajectory of p (direction +1 or -1)
  // until t_max or max_count crossings; `captured` reports an early end.
  std::vector<Crossing> crossings(const SurfacePoint& p, int dir, const Transversal& g, double t_max,
                                  int max_count, bool* captured = nullptr) const;

  // Result of the stepping loop; `stop` lets a crossing handler end the run.
  using CrossingHandler = std::function<bool(const Crossing&, const SurfacePoint&)>;
  Trajectory run(const SurfacePoint& p, int dir, double t_max, const Transversal* g,
                 const CrossingHandler& on_cross, bool record) const;

 private:
  Vec2 vel(const SurfacePoint& p, int dir, IntegratorStats& st) const;
  Vec2 rk4(const SurfacePoint& x, Vec2 k1, double h, int dir, IntegratorStats& st) const;

  const StableField* field_;
  FlowOptions opt_;
};

}  // namespace nlpa
