#pragma once

// Quasi-static crawling in a pipe. The drive sweeps the total length up the
// stretch path and back down the compress path; after each increment the
// segment lengths are updated, anchorage is re-evaluated, and the anchored
// end stays put while the other end absorbs the change in total length.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kresling/anchor.hpp"
#include "kresling/cycle.hpp"
#include "kresling/landscape.hpp"

namespace kresling {

enum class AnchorState { tail, head, slipping };
enum class GaitPhase { I, II, III, IV, dwell };

const char* to_string(AnchorState s) noexcept;
const char* to_string(GaitPhase p) noexcept;

struct GaitStep {
  std::size_t index = 0;
  double time = 0;  // s
  double lt = 0;
  std::vector<double> lengths;
  double x_tail = 0;
  double x_head = 0;
  AnchorState anchor = AnchorState::tail;
  /// End held fixed over the transition into this step (also set when slipping).
  Attachment held = Attachment::tail;
  GaitPhase phase = GaitPhase::dwell;
};

struct GaitTrace {
  std::vector<GaitStep> steps;
  int cycles_completed = 0;
  /// Step index at the start of each cycle, followed by the final step index.
  std::vector<std::size_t> cycle_bounds;

  /// Head displacement of each completed cycle.
  std::vector<double> cycle_displacements() const;
};

struct AnchorPair {
  AnchorSpec tail;  // on Segment I
  AnchorSpec head;  // on Segment II
};

struct GaitOptions {
  int cycles = 1;
  double rate = 1.0;  // mm/s of total-length change
  /// Drive window; defaults to [lt_min, lt_max]. A narrower window must
  /// still enclose both jumps.
  std::optional<LengthWindow> operating_range;
};

/// Anchors sized so each flap meets the pipe wall at its cut-off length.
AnchorPair size_anchors(const DrivingModule& module, const ActuationCycle& cycle,
                        double pipe_radius);

/// Throws UnavailableError when the cycle is not Valid and InvalidArgument
/// for bad options.
GaitTrace simulate(const DrivingModule& module, const EquilibriumPath& stretch,
                   const EquilibriumPath& compress, const AnchorPair& anchors,
                   const GaitOptions& options = {});
GaitTrace simulate(const DrivingModule& module, const AnchorPair& anchors,
                   const GaitOptions& options = {});

/// Mean head displacement per completed cycle; InvalidArgument when none.
double gait_length(const GaitTrace& trace);

struct SweepCell {
  double lambda_I = 0;
  double lambda_II = 0;
  std::optional<CycleClass> classification;
  std::optional<double> gait_length;
  /// Set when the cell could not be evaluated.
  std::string error;
};

struct SweepResult {
  /// Ordered by lambda_I, then lambda_II; only lambda_I >= lambda_II.
  std::vector<SweepCell> grid;
};

struct SweepOptions {
  double pipe_radius = 47.5;
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned jobs = 0;
};

/// Evaluates every upper-triangle cell of the grid with the segment designs
/// of `base` as templates (only the angle ratios change). Per-cell failures
/// land in SweepCell::error.
SweepResult sweep(const ModuleConfig& base, std::span<const double> lambdas,
                  const SweepOptions& options = {});

}  // namespace kresling
