#pragma once
// Translation surfaces given by one polygon with edges glued by translations.
// A torus may alternatively be flagged as a lattice quotient, which enables
// O(1) reduction of coordinates.

#include <array>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlpa/vec2.hpp"

namespace nlpa {

struct SurfacePoint {
  int chart = 0;
  double u = 0.0;
  double s = 0.0;

  Vec2 pos() const { return {u, s}; }
  static SurfacePoint at(Vec2 v) { return {0, v.u, v.s}; }
};

// A cycle of polygon corners glued around one point of the surface.
struct VertexClass {
  std::vector<int> corners;       // vertex indices in counterclockwise order
  std::vector<double> offsets;    // total angle at which each corner sector starts
  double total_angle = 0.0;       // 2 pi n
  int multiplicity = 1;           // n
  bool singular = false;          // n >= 2
};

struct ConePoint {
  int vertex_class = 0;
  Vec2 position;                  // canonical polygon coordinates
  int multiplicity = 1;
};

struct ConeSectorFrame {
  int cone = 0;
  int sheet = 1;                  // 1..n
  Vec2 local;                     // plane vector from the cone point
  double theta = 0.0;             // total angle in [0, 2 pi n)
};

// Part of a straight path inside the polygon, in polygon coordinates.
struct StraightPiece {
  Vec2 a, b;
};

struct Distance {
  double value = 0.0;
  bool exact = true;              // false means certified upper bound only
};

class TranslationSurface {
 public:
  // vertices counterclockwise; edge i runs from vertex i to vertex i+1 and
  // pair[i] is the edge it is glued to (with reversed orientation).
  static TranslationSurface from_polygon(std::string name, std::vector<Vec2> vertices,
                                         std::vector<int> pair, int genus);
  // Fundamental parallelogram of the lattice spanned by e1, e2, centred at 0.
  static TranslationSurface from_lattice(std::string name, Vec2 e1, Vec2 e2);

  const std::string& name() const { return name_; }
  int genus() const { return genus_; }
  bool is_lattice() const { return lattice_; }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<int>& pairing() const { return pair_; }
  const std::vector<Vec2>& offsets() const { return offset_; }
  const std::vector<VertexClass>& vertex_classes() const { return classes_; }
  const std::vector<ConePoint>& cone_points() const { return cones_; }
  int vertex_class_of(int vertex) const { return class_of_[vertex]; }
  double delta_sigma() const { return delta_sigma_; }
  double frame_radius() const { return frame_radius_; }
  double area() const;
  double diameter() const { return diameter_; }
  std::array<Vec2, 2> lattice_basis() const { return {e1_, e2_}; }

  bool contains(Vec2 x) const;
  SurfacePoint normalize(Vec2 raw) const;

  // Endpoint of the straight path starting at p with displacement w.
  // Throws SingularHit if the path runs into a cone point.
  SurfacePoint develop(const SurfacePoint& p, Vec2 w) const;
  // Straight path leaving a polygon corner into its sector.
  SurfacePoint develop_from_corner(int vertex, Vec2 w) const;
  // The same paths cut at the polygon edges.
  std::vector<StraightPiece> straight_pieces(const SurfacePoint& p, Vec2 w) const;
  std::vector<StraightPiece> pieces_from_corner(int vertex, Vec2 w) const;

  // Shortest straight displacement from p to q among nearby candidates.
  std::optional<Vec2> displacement(const SurfacePoint& p, const SurfacePoint& q,
                                   double max_len) const;
  Distance flat_distance(const SurfacePoint& p, const SurfacePoint& q) const;
  Distance flat_distance(const SurfacePoint& p, const TranslationSurface& other,
                         const SurfacePoint& q) const;

  // Frame of the nearest cone point within frame_radius(), if any.
  std::optional<ConeSectorFrame> nearest_cone_frame(const SurfacePoint& p) const;
  ConeSectorFrame cone_sector_coords(const SurfacePoint& p, int cone) const;
  SurfacePoint from_frame(const ConeSectorFrame& f) const;
  // Corner of a vertex class whose sector contains the total angle theta.
  int corner_at_angle(int vertex_class, double theta) const;
  // Total angle of direction d inside the sector of the given corner.
  double total_angle(int vertex, Vec2 d) const;
  // Distance to the nearest cone point (exact inside the frame radius).
  Distance distance_to_cones(const SurfacePoint& p) const;

  // Triangulation by ear clipping; every point sees the corners of its triangle.
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  int locate_triangle(Vec2 x) const;

  nlohmann::json to_json() const;
  static TranslationSurface from_json(const nlohmann::json& j);

 private:
  void finalize();
  void build_classes();
  void build_triangulation();
  SurfacePoint canonical(Vec2 x) const;
  SurfacePoint develop_impl(Vec2 x, Vec2 w, int excl_a, int excl_b, std::vector<StraightPiece>* pieces) const;

  std::string name_;
  int genus_ = 1;
  bool lattice_ = false;
  Vec2 e1_, e2_;
  double inv_[4] = {0, 0, 0, 0};
  std::vector<Vec2> vertices_;
  std::vector<int> pair_;
  std::vector<Vec2> offset_;
  std::vector<VertexClass> classes_;
  std::vector<int> class_of_;
  std::vector<ConePoint> cones_;
  std::vector<double> corner_angle_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Vec2> translations_;
  double delta_sigma_ = 0.0;
  double frame_radius_ = 0.0;
  double diameter_ = 0.0;
  double scale_eps_ = 1e-13;
};

// Uniform point of the polygon (hence of the surface) by rejection.
SurfacePoint uniform_point(const TranslationSurface& S, std::mt19937_64& rng);

}  // namespace nlpa
