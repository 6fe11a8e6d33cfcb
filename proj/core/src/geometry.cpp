#include "kresling/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kresling/errors.hpp"

namespace kresling {

namespace {

constexpr double kRootTolerance = 1e-12;
constexpr double kRootBracketInset = 1e-6;

double truss_residual(const DerivedGeometry& g, double alpha) {
  return truss_length_at(g, alpha) - g.mountain;
}

double find_extended_angle(const DerivedGeometry& g) {
  double lo = 0.0;
  double hi = g.alpha_contracted - kRootBracketInset;
  // For lambda == 1 the extended state sits at alpha = 0 exactly.
  if (truss_residual(g, lo) <= 0.0) return lo;
  while (hi - lo > kRootTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (truss_residual(g, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void validate(const KreslingDesign& d) {
  auto fail = [](const char* field, double value, const char* rule) {
    std::ostringstream os;
    os << "invalid design: " << field << " = " << value << " (" << rule << ")";
    throw InvalidArgument(os.str());
  };
  if (d.n_sides < 3) fail("n_sides", d.n_sides, "must be >= 3");
  if (!(d.side_length > 0.0) || !std::isfinite(d.side_length))
    fail("side_length", d.side_length, "must be > 0");
  if (!(d.angle_ratio > 0.0 && d.angle_ratio <= 1.0))
    fail("angle_ratio", d.angle_ratio, "must lie in (0, 1]");
  if (!(d.contracted_length >= 0.0) || !std::isfinite(d.contracted_length))
    fail("contracted_length", d.contracted_length, "must be >= 0");
}

bool is_bistable(const KreslingDesign& design) noexcept { return design.angle_ratio > 0.5; }

double truss_length_at(const DerivedGeometry& g, double alpha) {
  const double r2 = g.circumradius * g.circumradius;
  const double l0 = g.design.contracted_length;
  const double c0 = std::cos(g.alpha_contracted + 2.0 * g.phi);
  const double l_sq = l0 * l0 + 2.0 * r2 * (std::cos(alpha + 2.0 * g.phi) - c0);
  return std::sqrt(2.0 * r2 * (1.0 - std::cos(alpha)) + l_sq);
}

DerivedGeometry derive_geometry(const KreslingDesign& design) {
  validate(design);
  DerivedGeometry g;
  g.design = design;
  const double p = design.side_length;
  const double lambda = design.angle_ratio;
  const double l0 = design.contracted_length;

  g.phi = kPi / design.n_sides;
  g.gamma = 0.5 * kPi - g.phi;
  g.circumradius = 0.5 * p / std::sin(g.phi);
  g.valley_traditional = 2.0 * g.circumradius * std::cos(g.gamma - lambda * g.gamma);
  const double di = g.valley_traditional;
  g.mountain_traditional = std::sqrt(p * p + di * di - 2.0 * p * di * std::cos(lambda * g.gamma));
  g.valley = std::hypot(g.valley_traditional, l0);
  g.mountain = std::hypot(g.mountain_traditional, l0);
  const double cos_theta =
      (p * p + g.valley * g.valley - g.mountain * g.mountain) / (2.0 * p * g.valley);
  g.pattern_angle = std::acos(std::clamp(cos_theta, -1.0, 1.0));
  g.alpha_contracted = 2.0 * lambda * g.gamma;

  if (is_bistable(design)) {
    g.alpha_extended = find_extended_angle(g);
  } else {
    g.alpha_extended = g.alpha_contracted;
    g.monostable = true;
  }
  return g;
}

const Point2& CreasePattern::vertex(std::size_t index) const {
  if (index < bottom_vertices.size()) return bottom_vertices[index];
  return top_vertices.at(index - bottom_vertices.size());
}

double CreasePattern::edge_length(const VertexPair& edge) const {
  const Point2& a = vertex(edge.first);
  const Point2& b = vertex(edge.second);
  return std::hypot(b.x - a.x, b.y - a.y);
}

CreasePattern crease_pattern(const KreslingDesign& design) {
  const DerivedGeometry g = derive_geometry(design);
  const auto n = static_cast<std::size_t>(design.n_sides);
  const double p = design.side_length;
  const double dx = g.valley * std::cos(g.pattern_angle);
  const double dy = g.valley * std::sin(g.pattern_angle);

  CreasePattern cp;
  cp.bottom_vertices.reserve(n + 1);
  cp.top_vertices.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double x = static_cast<double>(k) * p;
    cp.bottom_vertices.push_back({x, 0.0});
    cp.top_vertices.push_back({x + dx, dy});
  }
  const std::size_t top = n + 1;
  for (std::size_t k = 0; k <= n; ++k) cp.valley_creases.emplace_back(k, top + k);
  for (std::size_t k = 0; k < n; ++k) cp.mountain_creases.emplace_back(k + 1, top + k);
  for (std::size_t k = 0; k < n; ++k) {
    cp.base_edges.emplace_back(k, k + 1);
    cp.base_edges.emplace_back(top + k, top + k + 1);
  }
  cp.seam_columns = {0, n};
  return cp;
}

}  // namespace kresling
