#include "kresling/anchor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kresling/errors.hpp"

namespace kresling {

namespace {

void check_spec(const Segment& segment, const AnchorSpec& spec) {
  if (!(spec.flap_length > 0.0)) throw InvalidArgument("flap_length must be > 0");
  if (!(spec.pipe_radius > segment.geometry().circumradius)) {
    throw InvalidArgument("pipe_radius must exceed the segment circumradius " +
                          std::to_string(segment.geometry().circumradius));
  }
}

}  // namespace

const char* to_string(Attachment a) noexcept {
  return a == Attachment::tail ? "tail" : "head";
}

double deployment(const Segment& segment, double l) {
  const FoldState s = segment.fold_state(segment.length_to_alpha(l));
  const double ratio = s.length / s.truss_length;
  return std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
}

double anchor_radius(const Segment& segment, const AnchorSpec& spec, double l) {
  check_spec(segment, spec);
  return segment.geometry().circumradius + spec.flap_length * deployment(segment, l);
}

double anchor_radius(const DerivedGeometry& geom, const AnchorSpec& spec, double l) {
  return anchor_radius(Segment(geom), spec, l);
}

AnchorSpec size_anchor(const Segment& segment, double pipe_radius, double cutoff,
                       Attachment attachment) {
  const double r = segment.geometry().circumradius;
  if (!(pipe_radius > r)) {
    throw InfeasibleError("anchor cannot reach pipe wall: pipe radius " +
                          std::to_string(pipe_radius) + " <= circumradius " + std::to_string(r));
  }
  const double reach = deployment(segment, cutoff);
  if (!(reach > 0.0)) {
    throw InfeasibleError("anchor cannot reach pipe wall: no radial reach at cutoff " +
                          std::to_string(cutoff));
  }
  return AnchorSpec{(pipe_radius - r) / reach, pipe_radius, attachment, cutoff};
}

AnchorSpec size_anchor(const DerivedGeometry& geom, double pipe_radius, double cutoff,
                       Attachment attachment) {
  return size_anchor(Segment(geom), pipe_radius, cutoff, attachment);
}

bool is_anchored(const Segment& segment, const AnchorSpec& spec, double l) {
  // R + L_a * deployment can round a hair below R_p at the cutoff itself.
  if (l == spec.cutoff_length) {
    check_spec(segment, spec);
    segment.length_to_alpha(l);
    return true;
  }
  return anchor_radius(segment, spec, l) >= spec.pipe_radius;
}

bool is_anchored(const DerivedGeometry& geom, const AnchorSpec& spec, double l) {
  return is_anchored(Segment(geom), spec, l);
}

}  // namespace kresling
