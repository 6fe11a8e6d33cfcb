#pragma once

// The four-phase actuation cycle of a dual-segment module, assembled from
// its stretch and compress equilibrium paths.
//
//   Phase I   g -> b -> c   stretch branch up to the end of the branch
//   Phase II  c -> d        stretch jump (Segment I extends, II contracts)
//   Phase III d -> d* -> f  compress branch down to the end of the branch
//   Phase IV  f -> g        compress jump (Segment I contracts, II extends)

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kresling/landscape.hpp"

namespace kresling {

enum class CycleClass { Valid, NoJumps, MultipleJumps, WeakBistability };

const char* to_string(CycleClass c) noexcept;

inline constexpr double kWeakBistabilityRatio = 0.65;

struct CycleOptions {
  /// Below this angle ratio (for both segments) a cycle without a usable
  /// jump pair is tagged WeakBistability rather than NoJumps.
  double weak_bistability_ratio = kWeakBistabilityRatio;
};

enum class Phase { I, II, III, IV };

const char* to_string(Phase p) noexcept;

struct Landmark {
  std::string name;
  double lt = 0;
  std::vector<double> lengths;
};

/// Total-length interval of one phase, in traversal order.
struct PhaseRange {
  Phase phase = Phase::I;
  double lt_begin = 0;
  double lt_end = 0;
};

struct ActuationCycle {
  CycleClass classification = CycleClass::NoJumps;
  /// a, g, b, c, d, e, d*, f when Valid; empty otherwise.
  std::vector<Landmark> landmarks;
  std::vector<PhaseRange> phases;
  std::optional<double> cutoff_I;
  std::optional<double> cutoff_II;

  /// Path step indices of c, d (stretch path) and f, g (compress path).
  std::size_t stretch_c = 0;
  std::size_t stretch_d = 0;
  std::size_t compress_f = 0;
  std::size_t compress_g = 0;

  /// Throws UnavailableError when the landmark does not exist.
  const Landmark& landmark(std::string_view name) const;
};

/// Precedence: MultipleJumps, then NoJumps/WeakBistability, then Valid.
/// A single jump per direction is Valid only when its signs match the cycle
/// (stretch: I up, II down; compress: I down, II up).
CycleClass classify(const EquilibriumPath& stretch, const EquilibriumPath& compress,
                    const CycleOptions& options = {});

/// Throws InvalidArgument for mismatched or non-dual-segment paths.
ActuationCycle build_cycle(const EquilibriumPath& stretch, const EquilibriumPath& compress,
                           const CycleOptions& options = {});

/// (l_I at c, l_II at d); throws UnavailableError unless the cycle is Valid.
std::pair<double, double> cutoffs(const ActuationCycle& cycle);

}  // namespace kresling
