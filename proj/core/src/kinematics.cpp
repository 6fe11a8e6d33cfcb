#include "kresling/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kresling/errors.hpp"

namespace kresling {

namespace {

constexpr double kAngleSlack = 1e-12;
constexpr double kLengthSlack = 1e-9;
// Below this |sin(alpha + 2 phi)| the chain rule through alpha is singular;
// such points only occur at the short end of the window.
constexpr double kSingularSine = 1e-10;
constexpr double kSingularNudge = 1e-8;
constexpr int kBarrierSamples = 4000;

std::string window_text(const char* what, double lo, double hi) {
  std::ostringstream os;
  os.precision(12);
  os << what << " [" << lo << ", " << hi << "]";
  return os.str();
}

}  // namespace

Segment::Segment(const KreslingDesign& design, KinematicsOptions options)
    : Segment(derive_geometry(design), options) {}

Segment::Segment(const DerivedGeometry& geometry, KinematicsOptions options)
    : geom_(geometry), options_(options) {
  if (!(options_.window_margin >= 0.0)) {
    throw InvalidArgument("window_margin must be >= 0");
  }
  const double r = geom_.circumradius;
  const double l0 = geom_.design.contracted_length;
  const double c0 = std::cos(geom_.alpha_contracted + 2.0 * geom_.phi);
  const double edge_cos = c0 - l0 * l0 / (2.0 * r * r);
  const double monotone_edge = kPi - 2.0 * geom_.phi;
  alpha_edge_ = edge_cos >= -1.0 ? std::min(std::acos(edge_cos) - 2.0 * geom_.phi, monotone_edge)
                                 : monotone_edge;
  alpha_edge_ = std::max(alpha_edge_, geom_.alpha_contracted);

  alpha_min_ = std::max(geom_.alpha_extended - options_.window_margin, 0.0);
  alpha_max_ = std::min(geom_.alpha_contracted + options_.window_margin, alpha_edge_);
  l_extended_ = length_at(geom_.alpha_extended);
  window_ = {length_at(alpha_max_), length_at(alpha_min_)};
}

LengthWindow Segment::branch_window(Branch branch) const noexcept {
  switch (branch) {
    case Branch::folding:
      return {l_contracted(), l_extended_};
    case Branch::overcontracted:
      return {window_.lo, l_contracted()};
    case Branch::overextended:
      return {l_extended_, window_.hi};
  }
  return window_;
}

double Segment::length_at(double alpha) const {
  if (!(alpha >= -kAngleSlack && alpha <= alpha_edge_ + kAngleSlack)) {
    throw DomainError(window_text("fold angle outside the admissible window", 0.0, alpha_edge_),
                      0.0, alpha_edge_);
  }
  const double r2 = geom_.circumradius * geom_.circumradius;
  const double l0 = geom_.design.contracted_length;
  const double radicand =
      l0 * l0 + 2.0 * r2 *
                    (std::cos(alpha + 2.0 * geom_.phi) -
                     std::cos(geom_.alpha_contracted + 2.0 * geom_.phi));
  return std::sqrt(std::max(radicand, 0.0));
}

FoldState Segment::fold_state(double alpha) const {
  FoldState s;
  s.alpha = alpha;
  s.length = length_at(alpha);
  const double r2 = geom_.circumradius * geom_.circumradius;
  s.truss_length = std::sqrt(2.0 * r2 * (1.0 - std::cos(alpha)) + s.length * s.length);
  s.strain = s.truss_length / geom_.mountain - 1.0;
  s.energy = 0.5 * s.strain * s.strain;
  return s;
}

double Segment::alpha_unchecked(double l) const {
  const double r2 = geom_.circumradius * geom_.circumradius;
  const double l0 = geom_.design.contracted_length;
  const double c = std::cos(geom_.alpha_contracted + 2.0 * geom_.phi) + (l * l - l0 * l0) / (2.0 * r2);
  const double alpha = std::acos(std::clamp(c, -1.0, 1.0)) - 2.0 * geom_.phi;
  return std::clamp(alpha, alpha_min_, alpha_max_);
}

double Segment::checked_alpha(double l) const {
  if (!(l >= window_.lo - kLengthSlack && l <= window_.hi + kLengthSlack)) {
    throw RangeError(window_text("length outside the attainable window", window_.lo, window_.hi),
                     window_.lo, window_.hi);
  }
  return alpha_unchecked(std::clamp(l, window_.lo, window_.hi));
}

double Segment::length_to_alpha(double l, Branch branch) const {
  const LengthWindow w = branch_window(branch);
  if (!(l >= w.lo - kLengthSlack && l <= w.hi + kLengthSlack)) {
    throw RangeError(window_text("length outside the branch range", w.lo, w.hi), w.lo, w.hi);
  }
  double alpha = alpha_unchecked(std::clamp(l, w.lo, w.hi));
  // Pin the stable states exactly.
  if (l == l_contracted() && branch != Branch::overextended) alpha = geom_.alpha_contracted;
  if (l == l_extended_ && branch != Branch::overcontracted) alpha = geom_.alpha_extended;
  return alpha;
}

double Segment::length_to_alpha(double l) const { return checked_alpha(l); }

double Segment::energy(double l) const {
  const double alpha = checked_alpha(l);
  const double r2 = geom_.circumradius * geom_.circumradius;
  const double b = std::sqrt(2.0 * r2 * (1.0 - std::cos(alpha)) + l * l);
  const double strain = b / geom_.mountain - 1.0;
  return 0.5 * strain * strain;
}

double Segment::force(double l) const {
  if (!(l > window_.lo && l < window_.hi)) {
    throw DomainError(window_text("force is defined strictly inside", window_.lo, window_.hi),
                      window_.lo, window_.hi);
  }
  return slope(l);
}

namespace {

struct ChainTerms {
  double strain;
  double db;   // db/dl
  double d2b;  // d2b/dl2
};

ChainTerms chain_terms(const DerivedGeometry& g, double alpha, double l) {
  const double r2 = g.circumradius * g.circumradius;
  const double sa = std::sin(alpha);
  const double sb = std::sin(alpha + 2.0 * g.phi);
  const double b = std::sqrt(2.0 * r2 * (1.0 - std::cos(alpha)) + l * l);
  const double s = sa / sb;
  const double ds_dl = (std::sin(2.0 * g.phi) / (sb * sb)) * (-l / (r2 * sb));
  ChainTerms t;
  t.strain = b / g.mountain - 1.0;
  t.db = l * (1.0 - s) / b;
  t.d2b = ((1.0 - s) - l * ds_dl) / b - l * (1.0 - s) * t.db / (b * b);
  return t;
}

}  // namespace

double Segment::slope(double l) const {
  double alpha = checked_alpha(l);
  if (std::abs(std::sin(alpha + 2.0 * geom_.phi)) < kSingularSine) {
    alpha -= kSingularNudge;
    l = length_at(alpha);
  }
  const ChainTerms t = chain_terms(geom_, alpha, l);
  return t.strain * t.db / geom_.mountain;
}

double Segment::curvature(double l) const {
  double alpha = checked_alpha(l);
  if (std::abs(std::sin(alpha + 2.0 * geom_.phi)) < kSingularSine) {
    alpha -= kSingularNudge;
    l = length_at(alpha);
  }
  const ChainTerms t = chain_terms(geom_, alpha, l);
  const double db_n = t.db / geom_.mountain;
  return db_n * db_n + t.strain * t.d2b / geom_.mountain;
}

StableStates Segment::stable_states() const {
  StableStates out;
  out.l_contracted = l_contracted();
  out.l_extended = l_extended_;
  out.monostable = geom_.monostable;
  out.barrier_length = out.l_contracted;
  if (geom_.monostable) return out;

  const double lo = out.l_contracted;
  const double hi = out.l_extended;
  const double h = (hi - lo) / kBarrierSamples;
  int best = 1;
  double best_e = -1.0;
  for (int k = 1; k < kBarrierSamples; ++k) {
    const double e = energy(lo + k * h);
    if (e > best_e) {
      best_e = e;
      best = k;
    }
  }
  // The maximum is the sign change of the slope between the neighbours.
  double a = lo + (best - 1) * h;
  double b = lo + (best + 1) * h;
  for (int it = 0; it < 200 && b - a > 1e-13 * hi; ++it) {
    const double m = 0.5 * (a + b);
    if (slope(m) > 0.0) {
      a = m;
    } else {
      b = m;
    }
  }
  out.barrier_length = 0.5 * (a + b);
  out.barrier_energy = energy(out.barrier_length);
  return out;
}

FoldState fold_state(const DerivedGeometry& geom, double alpha) {
  return Segment(geom).fold_state(alpha);
}

double length_to_alpha(const DerivedGeometry& geom, double l, Branch branch) {
  return Segment(geom).length_to_alpha(l, branch);
}

double energy_of_length(const DerivedGeometry& geom, double l) { return Segment(geom).energy(l); }

double axial_force(const DerivedGeometry& geom, double l) { return Segment(geom).force(l); }

StableStates stable_states(const DerivedGeometry& geom) { return Segment(geom).stable_states(); }

}  // namespace kresling
