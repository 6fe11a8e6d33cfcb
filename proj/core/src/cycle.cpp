#include "kresling/cycle.hpp"

#include <cmath>

#include "kresling/errors.hpp"

namespace kresling {

const char* to_string(CycleClass c) noexcept {
  switch (c) {
    case CycleClass::Valid:
      return "Valid";
    case CycleClass::NoJumps:
      return "NoJumps";
    case CycleClass::MultipleJumps:
      return "MultipleJumps";
    case CycleClass::WeakBistability:
      return "WeakBistability";
  }
  return "?";
}

const char* to_string(Phase p) noexcept {
  switch (p) {
    case Phase::I:
      return "I";
    case Phase::II:
      return "II";
    case Phase::III:
      return "III";
    case Phase::IV:
      return "IV";
  }
  return "?";
}

const Landmark& ActuationCycle::landmark(std::string_view name) const {
  for (const Landmark& m : landmarks) {
    if (m.name == name) return m;
  }
  throw UnavailableError("cycle has no landmark '" + std::string(name) + "'");
}

namespace {

void check_pair(const EquilibriumPath& stretch, const EquilibriumPath& compress) {
  if (stretch.direction != Direction::stretch || compress.direction != Direction::compress) {
    throw InvalidArgument("build_cycle expects a stretch path and a compress path");
  }
  if (!(stretch.config == compress.config) || stretch.delta_lt != compress.delta_lt) {
    throw InvalidArgument("stretch and compress paths come from different module configs");
  }
  if (stretch.config.segments.size() != 2) {
    throw InvalidArgument("actuation cycles are defined for dual-segment modules only");
  }
}

bool signs_match(const Jump& j, double first_sign) {
  return j.per_segment_delta[0] * first_sign > 0.0 && j.per_segment_delta[1] * first_sign < 0.0;
}

const PathStep& nearest_step(const EquilibriumPath& path, std::size_t from, std::size_t to,
                             double lt) {
  std::size_t best = from;
  for (std::size_t k = from; k <= to; ++k) {
    if (std::abs(path.steps[k].lt - lt) < std::abs(path.steps[best].lt - lt)) best = k;
  }
  return path.steps[best];
}

Landmark make_landmark(std::string name, const PathStep& s) {
  return Landmark{std::move(name), s.lt, s.lengths};
}

}  // namespace

CycleClass classify(const EquilibriumPath& stretch, const EquilibriumPath& compress,
                    const CycleOptions& options) {
  check_pair(stretch, compress);
  if (stretch.jumps.size() > 1 || compress.jumps.size() > 1) return CycleClass::MultipleJumps;
  if (stretch.jumps.size() == 1 && compress.jumps.size() == 1 &&
      signs_match(stretch.jumps.front(), +1.0) && signs_match(compress.jumps.front(), -1.0)) {
    return CycleClass::Valid;
  }
  const auto& segs = stretch.config.segments;
  const bool weak = segs[0].angle_ratio < options.weak_bistability_ratio &&
                    segs[1].angle_ratio < options.weak_bistability_ratio;
  return weak ? CycleClass::WeakBistability : CycleClass::NoJumps;
}

ActuationCycle build_cycle(const EquilibriumPath& stretch, const EquilibriumPath& compress,
                           const CycleOptions& options) {
  ActuationCycle cycle;
  cycle.classification = classify(stretch, compress, options);
  if (cycle.classification != CycleClass::Valid) return cycle;

  const Jump& up = stretch.jumps.front();
  const Jump& down = compress.jumps.front();
  cycle.stretch_c = up.step_index - 1;
  cycle.stretch_d = up.end_index;
  cycle.compress_f = down.step_index - 1;
  cycle.compress_g = down.end_index;

  const PathStep& c = stretch.steps[cycle.stretch_c];
  const PathStep& d = stretch.steps[cycle.stretch_d];
  const PathStep& f = compress.steps[cycle.compress_f];
  const PathStep& g = compress.steps[cycle.compress_g];

  // b and d* are plotting aids: mid-points of the two smooth phases.
  const PathStep& b = nearest_step(stretch, 0, cycle.stretch_c, 0.5 * (g.lt + c.lt));
  const PathStep& d_star = nearest_step(compress, 0, cycle.compress_f, 0.5 * (d.lt + f.lt));

  cycle.landmarks = {
      make_landmark("a", stretch.steps.front()),
      make_landmark("g", g),
      make_landmark("b", b),
      make_landmark("c", c),
      make_landmark("d", d),
      make_landmark("e", stretch.steps.back()),
      make_landmark("d*", d_star),
      make_landmark("f", f),
  };
  cycle.phases = {
      {Phase::I, g.lt, c.lt},
      {Phase::II, c.lt, d.lt},
      {Phase::III, d.lt, f.lt},
      {Phase::IV, f.lt, g.lt},
  };
  cycle.cutoff_I = c.lengths[0];
  cycle.cutoff_II = d.lengths[1];
  return cycle;
}

std::pair<double, double> cutoffs(const ActuationCycle& cycle) {
  if (cycle.classification != CycleClass::Valid || !cycle.cutoff_I || !cycle.cutoff_II) {
    throw UnavailableError(std::string("cut-off lengths need a Valid cycle, got ") +
                           to_string(cycle.classification));
  }
  return {*cycle.cutoff_I, *cycle.cutoff_II};
}

}  // namespace kresling
