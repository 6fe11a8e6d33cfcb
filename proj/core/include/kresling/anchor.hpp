#pragma once

// Foldable anchors. Each flap rides the mountain truss of its segment: the
// truss leans at sin(beta) = l / b from the cross-sectional plane, so a flap
// of length L_a reaches L_a * cos(beta) beyond the circumradius. Contracting
// the segment flattens the truss and pushes the flap outward.

#include "kresling/geometry.hpp"
#include "kresling/kinematics.hpp"

namespace kresling {

enum class Attachment { tail, head };

const char* to_string(Attachment a) noexcept;

struct AnchorSpec {
  double flap_length = 0;    // L_a [mm]
  double pipe_radius = 0;    // R_p [mm]
  Attachment attachment = Attachment::tail;
  double cutoff_length = 0;  // segment length where R_a = R_p [mm]

  friend bool operator==(const AnchorSpec&, const AnchorSpec&) = default;
};

/// sqrt(1 - (l/b)^2), the radial fraction of the flap; throws RangeError
/// outside the attainable window.
double deployment(const Segment& segment, double l);

/// R_a(l) = R + L_a * deployment(l).
double anchor_radius(const Segment& segment, const AnchorSpec& spec, double l);
double anchor_radius(const DerivedGeometry& geom, const AnchorSpec& spec, double l);

/// Flap length that makes R_a(cutoff) = pipe_radius. Throws InfeasibleError
/// when pipe_radius <= R or the flap has no reach at the cutoff.
AnchorSpec size_anchor(const Segment& segment, double pipe_radius, double cutoff,
                       Attachment attachment);
AnchorSpec size_anchor(const DerivedGeometry& geom, double pipe_radius, double cutoff,
                       Attachment attachment);

/// R_a(l) >= R_p, with the cutoff itself counted as anchored.
bool is_anchored(const Segment& segment, const AnchorSpec& spec, double l);
bool is_anchored(const DerivedGeometry& geom, const AnchorSpec& spec, double l);

}  // namespace kresling
