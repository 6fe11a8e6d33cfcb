#pragma once

// Crease geometry of traditional and generalized Kresling segments.
//
// A segment is fully defined by the polygon order N, the polygon side P, the
// angle ratio lambda and the contracted length L0. Everything else (crease
// lengths, pattern angle, the two stable fold angles) is derived here.
// Angles are radians throughout.

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

namespace kresling {

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) noexcept { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / kPi; }

struct KreslingDesign {
  int n_sides = 8;                // N
  double side_length = 30.0;      // P [mm]
  double angle_ratio = 0.8;       // lambda
  double contracted_length = 15;  // L0 [mm]

  friend bool operator==(const KreslingDesign&, const KreslingDesign&) = default;
};

/// Throws InvalidArgument naming the offending field.
void validate(const KreslingDesign& design);

/// True iff the segment has a second stable state (lambda > 0.5).
/// lambda == 0.5 is classified monostable: both states coincide.
bool is_bistable(const KreslingDesign& design) noexcept;

struct DerivedGeometry {
  KreslingDesign design;
  double phi = 0;                   // pi / N
  double gamma = 0;                 // pi/2 - phi
  double circumradius = 0;          // R
  double valley_traditional = 0;    // D_i
  double mountain_traditional = 0;  // B_i
  double valley = 0;                // D_g
  double mountain = 0;              // B_g
  double pattern_angle = 0;         // theta_g
  double alpha_contracted = 0;      // fold angle of the contracted state
  double alpha_extended = 0;        // fold angle of the extended state
  bool monostable = false;          // alpha_extended == alpha_contracted
};

DerivedGeometry derive_geometry(const KreslingDesign& design);

/// Mountain-truss length b(alpha) from the closed-form folding kinematics.
/// Valid wherever the length radicand is non-negative.
double truss_length_at(const DerivedGeometry& geom, double alpha);

struct Point2 {
  double x = 0;
  double y = 0;
};

using VertexPair = std::pair<std::size_t, std::size_t>;

/// Open flat strip of one segment. Vertex indices address the concatenation
/// bottom_vertices ++ top_vertices, i.e. bottom k is k and top k is N+1+k.
/// Columns 0 and N are glued together when the strip is folded into a tube.
struct CreasePattern {
  std::vector<Point2> bottom_vertices;
  std::vector<Point2> top_vertices;
  std::vector<VertexPair> valley_creases;
  std::vector<VertexPair> mountain_creases;
  std::vector<VertexPair> base_edges;
  std::array<std::size_t, 2> seam_columns{0, 0};

  const Point2& vertex(std::size_t index) const;
  std::size_t vertex_count() const noexcept {
    return bottom_vertices.size() + top_vertices.size();
  }
  double edge_length(const VertexPair& edge) const;
};

/// Mountain creases ascend to the left (bottom k+1 to top k); mirroring the
/// strip about a vertical axis yields the chiral twin.
CreasePattern crease_pattern(const KreslingDesign& design);

}  // namespace kresling
