#pragma once

// Folding kinematics and normalized strain energy of a single segment under
// the equivalent truss-frame model: valley trusses keep their length, the
// mountain truss absorbs all facet deformation.
//
// The fold angle alpha parameterizes the motion. On [0, alpha_edge] the
// segment length l(alpha) decreases strictly, so every attainable length maps
// to exactly one fold angle. The stable states sit at alpha_extended (long)
// and alpha_contracted (short); a margin beyond each lets the minimizer see
// the energy rise on both sides.

#include "kresling/geometry.hpp"

namespace kresling {

struct FoldState {
  double alpha = 0;         // rad
  double length = 0;        // l [mm]
  double truss_length = 0;  // b [mm]
  double strain = 0;        // b / B_g - 1
  double energy = 0;        // strain^2 / 2
};

enum class Branch {
  folding,         // alpha in [alpha_extended, alpha_contracted]
  overcontracted,  // alpha > alpha_contracted (l < L0)
  overextended,    // alpha < alpha_extended (l > l_extended)
};

struct KinematicsOptions {
  /// Fold-angle margin past each stable state that bounds the attainable
  /// length window.
  double window_margin = deg_to_rad(5.0);

  friend bool operator==(const KinematicsOptions&, const KinematicsOptions&) = default;
};

struct LengthWindow {
  double lo = 0;
  double hi = 0;
  bool contains(double l) const noexcept { return l >= lo && l <= hi; }
  double width() const noexcept { return hi - lo; }
};

struct StableStates {
  double l_contracted = 0;  // L0
  double l_extended = 0;    // length at alpha_extended
  double barrier_energy = 0;
  double barrier_length = 0;
  bool monostable = false;
};

/// One segment with its precomputed geometry and admissible window.
/// Immutable after construction; safe to share between threads.
class Segment {
 public:
  explicit Segment(const KreslingDesign& design, KinematicsOptions options = {});
  explicit Segment(const DerivedGeometry& geometry, KinematicsOptions options = {});

  const DerivedGeometry& geometry() const noexcept { return geom_; }
  const KinematicsOptions& options() const noexcept { return options_; }

  /// Largest fold angle for which the length radicand stays non-negative
  /// and l(alpha) is still monotone.
  double alpha_edge() const noexcept { return alpha_edge_; }
  double alpha_min() const noexcept { return alpha_min_; }
  double alpha_max() const noexcept { return alpha_max_; }

  LengthWindow window() const noexcept { return window_; }
  LengthWindow branch_window(Branch branch) const noexcept;
  double l_contracted() const noexcept { return geom_.design.contracted_length; }
  double l_extended() const noexcept { return l_extended_; }

  /// l(alpha); throws DomainError outside [0, alpha_edge].
  double length_at(double alpha) const;
  FoldState fold_state(double alpha) const;

  /// Inverse of length_at restricted to one branch; throws RangeError.
  double length_to_alpha(double l, Branch branch) const;
  /// Inverse over the whole attainable window; throws RangeError.
  double length_to_alpha(double l) const;

  /// E(l); throws RangeError outside the attainable window.
  double energy(double l) const;
  /// dE/dl, positive when the segment resists extension. Throws DomainError
  /// at (or beyond) the window endpoints.
  double force(double l) const;

  /// dE/dl and d2E/dl2 on the closed window, endpoints included. Used by the
  /// minimizer, which needs one-sided information at active bounds.
  double slope(double l) const;
  double curvature(double l) const;

  StableStates stable_states() const;

 private:
  double checked_alpha(double l) const;
  double alpha_unchecked(double l) const;

  DerivedGeometry geom_;
  KinematicsOptions options_;
  double alpha_edge_ = 0;
  double alpha_min_ = 0;
  double alpha_max_ = 0;
  double l_extended_ = 0;
  LengthWindow window_;
};

// Free-function forms over DerivedGeometry, using default options.
FoldState fold_state(const DerivedGeometry& geom, double alpha);
double length_to_alpha(const DerivedGeometry& geom, double l, Branch branch);
double energy_of_length(const DerivedGeometry& geom, double l);
double axial_force(const DerivedGeometry& geom, double l);
StableStates stable_states(const DerivedGeometry& geom);

}  // namespace kresling
