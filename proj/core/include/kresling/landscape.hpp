#pragma once

// Equilibrium paths of n serially connected segments driven only through
// their total length.
//
// For a prescribed total length l_t the module settles in a local minimum of
// E_t = sum_i w_i E_i(l_i) on the hyperplane sum_i l_i = l_t, with every l_i
// inside its segment window. Sweeping l_t monotonically and warm-starting
// each solve from the previous one traces an equilibrium path; where a branch
// of minima terminates, the solver slides to a distant branch and the path
// records a jump.

#include <cstddef>
#include <span>
#include <vector>

#include "kresling/geometry.hpp"
#include "kresling/kinematics.hpp"

namespace kresling {

enum class Direction { stretch, compress };

const char* to_string(Direction direction) noexcept;

struct SolverOptions {
  /// Infinity-norm bound on the projected gradient [1/mm].
  double gradient_tolerance = 1e-10;
  int max_iterations = 500;
  /// Per-iteration step cap, as a multiple of the total-length increment.
  double step_cap_factor = 2.0;

  friend bool operator==(const SolverOptions&, const SolverOptions&) = default;
};

struct ModuleConfig {
  std::vector<KreslingDesign> segments;
  /// Per-segment energy weights; empty means all 1.
  std::vector<double> stiffness_scales;
  /// Total-length increment [mm]; 0 selects stroke / 1000.
  double delta_lt = 0.0;
  KinematicsOptions kinematics;
  SolverOptions solver;
  /// A step is a jump when its largest per-segment change exceeds this
  /// multiple of delta_lt and the changes carry both signs.
  double jump_threshold_factor = 5.0;
  bool allow_monostable = false;

  friend bool operator==(const ModuleConfig&, const ModuleConfig&) = default;
};

inline constexpr double kDefaultIncrementsPerStroke = 1000.0;

/// Validated module with precomputed segments. Immutable after construction.
class DrivingModule {
 public:
  explicit DrivingModule(ModuleConfig config);

  const ModuleConfig& config() const noexcept { return config_; }
  std::size_t size() const noexcept { return segments_.size(); }
  const Segment& segment(std::size_t i) const { return segments_.at(i); }
  double weight(std::size_t i) const { return weights_.at(i); }

  /// sum of contracted lengths
  double lt_min() const noexcept { return lt_min_; }
  /// sum of extended lengths
  double lt_max() const noexcept { return lt_max_; }
  double stroke() const noexcept { return lt_max_ - lt_min_; }
  double delta_lt() const noexcept { return delta_lt_; }
  /// Sum of the segment windows: every total length the bounds admit.
  LengthWindow total_window() const noexcept { return total_window_; }

  /// Continuation nodes from lt_min to lt_max: lt_min + j * delta_lt, with
  /// the last node pinned to lt_max.
  std::vector<double> lt_grid() const;

  std::vector<double> contracted_lengths() const;
  std::vector<double> extended_lengths() const;

 private:
  ModuleConfig config_;
  std::vector<Segment> segments_;
  std::vector<double> weights_;
  double lt_min_ = 0;
  double lt_max_ = 0;
  double delta_lt_ = 0;
  LengthWindow total_window_;
};

/// Weighted total energy; throws RangeError naming the segment when a length
/// leaves its window.
double module_energy(const DrivingModule& module, std::span<const double> lengths);

/// Bound-constrained local minimizer of E_t on sum(l) = lt, started from
/// init (which must satisfy the constraint to within delta_lt). Throws
/// SolverError carrying the last iterate when it fails to converge.
std::vector<double> local_min_search(const DrivingModule& module, double lt,
                                     std::span<const double> init);

struct PathStep {
  double lt = 0;
  std::vector<double> lengths;
  double total_energy = 0;
};

enum class JumpKind { stretch_jump, compress_jump };

const char* to_string(JumpKind kind) noexcept;

struct Jump {
  /// First step whose transition (step_index - 1 -> step_index) is flagged.
  std::size_t step_index = 0;
  /// Last flagged step; equals step_index for a single-step jump.
  std::size_t end_index = 0;
  /// Total length just before the jump (where the branch ends).
  double lt_at_jump = 0;
  /// lengths[end_index] - lengths[step_index - 1]
  std::vector<double> per_segment_delta;
  JumpKind classification = JumpKind::stretch_jump;
};

struct EquilibriumPath {
  Direction direction = Direction::stretch;
  ModuleConfig config;
  double delta_lt = 0;
  std::vector<PathStep> steps;
  std::vector<Jump> jumps;

  /// True when the transition into `step` belongs to a jump.
  bool in_jump(std::size_t step) const noexcept;
};

EquilibriumPath equilibrium_path(const DrivingModule& module, Direction direction);

std::vector<Jump> detect_jumps(const EquilibriumPath& path, const DrivingModule& module);

/// Exhaustive grid oracle over the constraint hyperplane (n = 2 or 3).
/// Returns every grid-local minimum of E_t, ordered by l_1 then l_2; ties
/// inside a plateau resolve to the smallest l_1, then l_2.
std::vector<std::vector<double>> brute_force_minima(const DrivingModule& module, double lt,
                                                    double resolution);

}  // namespace kresling
