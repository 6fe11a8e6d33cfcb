#include "kresling/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "kresling/errors.hpp"

namespace kresling {

const char* to_string(Direction direction) noexcept {
  return direction == Direction::stretch ? "stretch" : "compress";
}

const char* to_string(JumpKind kind) noexcept {
  return kind == JumpKind::stretch_jump ? "stretch-jump" : "compress-jump";
}

DrivingModule::DrivingModule(ModuleConfig config) : config_(std::move(config)) {
  const std::size_t n = config_.segments.size();
  if (n < 2) throw InvalidArgument("a driving module needs at least 2 segments");
  if (!config_.stiffness_scales.empty() && config_.stiffness_scales.size() != n) {
    throw InvalidArgument("stiffness_scales must list one weight per segment");
  }
  if (config_.delta_lt < 0.0 || !std::isfinite(config_.delta_lt)) {
    throw InvalidArgument("delta_lt must be > 0 (or 0 for the default)");
  }
  if (!(config_.jump_threshold_factor > 0.0)) {
    throw InvalidArgument("jump_threshold_factor must be > 0");
  }
  if (!(config_.solver.gradient_tolerance > 0.0) || config_.solver.max_iterations < 1 ||
      !(config_.solver.step_cap_factor > 0.0)) {
    throw InvalidArgument("solver options must be positive");
  }
  segments_.reserve(n);
  weights_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const KreslingDesign& d = config_.segments[i];
    try {
      validate(d);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("segment " + std::to_string(i + 1) + ": " + e.what());
    }
    if (!config_.allow_monostable && !is_bistable(d)) {
      throw InvalidArgument("segment " + std::to_string(i + 1) +
                            " is monostable (angle_ratio <= 0.5)");
    }
    segments_.emplace_back(d, config_.kinematics);
    const double w = config_.stiffness_scales.empty() ? 1.0 : config_.stiffness_scales[i];
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("stiffness_scales[" + std::to_string(i) + "] must be > 0");
    }
    weights_.push_back(w);
  }
  for (const Segment& s : segments_) {
    lt_min_ += s.l_contracted();
    lt_max_ += s.l_extended();
    total_window_.lo += s.window().lo;
    total_window_.hi += s.window().hi;
  }
  delta_lt_ = config_.delta_lt > 0.0 ? config_.delta_lt : stroke() / kDefaultIncrementsPerStroke;
  if (!(delta_lt_ > 0.0)) throw InvalidArgument("module has zero stroke");
}

std::vector<double> DrivingModule::lt_grid() const {
  const double span = stroke();
  const auto m = static_cast<std::size_t>(std::ceil(span / delta_lt_ - 1e-9));
  std::vector<double> grid;
  grid.reserve(m + 1);
  for (std::size_t j = 0; j < m; ++j) grid.push_back(lt_min_ + static_cast<double>(j) * delta_lt_);
  grid.push_back(lt_max_);
  return grid;
}

std::vector<double> DrivingModule::contracted_lengths() const {
  std::vector<double> out;
  for (const Segment& s : segments_) out.push_back(s.l_contracted());
  return out;
}

std::vector<double> DrivingModule::extended_lengths() const {
  std::vector<double> out;
  for (const Segment& s : segments_) out.push_back(s.l_extended());
  return out;
}

double module_energy(const DrivingModule& module, std::span<const double> lengths) {
  if (lengths.size() != module.size()) {
    throw InvalidArgument("expected one length per segment");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    try {
      total += module.weight(i) * module.segment(i).energy(lengths[i]);
    } catch (const RangeError& e) {
      throw RangeError("segment " + std::to_string(i + 1) + ": " + e.what(), e.lo(), e.hi(), i);
    }
  }
  return total;
}

namespace {

// Moves x onto sum(x) = lt, spreading the correction evenly and handing any
// clipped remainder to the segments that still have room.
void project_onto_constraint(const DrivingModule& module, double lt, std::vector<double>& x) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    const LengthWindow w = module.segment(i).window();
    x[i] = std::clamp(x[i], w.lo, w.hi);
  }
  for (int pass = 0; pass < static_cast<int>(n) + 1; ++pass) {
    const double residual = lt - std::accumulate(x.begin(), x.end(), 0.0);
    if (residual == 0.0) return;
    std::size_t room = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const LengthWindow w = module.segment(i).window();
      if ((residual > 0.0 && x[i] < w.hi) || (residual < 0.0 && x[i] > w.lo)) ++room;
    }
    if (room == 0) break;
    const double share = residual / static_cast<double>(room);
    for (std::size_t i = 0; i < n; ++i) {
      const LengthWindow w = module.segment(i).window();
      if ((residual > 0.0 && x[i] < w.hi) || (residual < 0.0 && x[i] > w.lo)) {
        x[i] = std::clamp(x[i] + share, w.lo, w.hi);
      }
    }
  }
}

// Absorbs floating-point drift of sum(x) into the free coordinate with the
// most room, so the equality constraint holds to rounding.
void restore_sum(const DrivingModule& module, double lt, std::vector<double>& x,
                 const std::vector<char>& free) {
  const double residual = lt - std::accumulate(x.begin(), x.end(), 0.0);
  if (residual == 0.0) return;
  std::size_t best = x.size();
  double best_room = -1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!free[i]) continue;
    const LengthWindow w = module.segment(i).window();
    const double room = std::min(x[i] - w.lo, w.hi - x[i]);
    if (room > best_room) {
      best_room = room;
      best = i;
    }
  }
  if (best < x.size()) x[best] += residual;
}

class ConstrainedMinimizer {
 public:
  ConstrainedMinimizer(const DrivingModule& module, double lt)
      : module_(module),
        lt_(lt),
        n_(module.size()),
        g_(n_),
        h_(n_),
        pg_(n_),
        d_(n_),
        trial_(n_),
        free_(n_) {}

  std::vector<double> run(std::vector<double> x) {
    const SolverOptions& opt = module_.config().solver;
    const double cap = opt.step_cap_factor * module_.delta_lt();
    double energy = module_energy(module_, x);
    for (int it = 0; it < opt.max_iterations; ++it) {
      if (snap_near_bounds(x)) energy = module_energy(module_, x);
      evaluate_derivatives(x);
      const double pg_norm = project_gradient(x);
      if (pg_norm < opt.gradient_tolerance) return polish(std::move(x), pg_norm);

      double slope = newton_direction();
      if (!(slope < 0.0)) slope = gradient_direction(cap);
      scale_to_cap(cap);
      double t_max = step_to_boundary(x);
      if (t_max <= 0.0) {
        slope = gradient_direction(cap);
        t_max = step_to_boundary(x);
      }
      slope = dot(g_, d_);
      if (!(t_max > 0.0) || !(slope < 0.0)) {
        throw SolverError("no feasible descent direction", x);
      }

      bool accepted = false;
      for (double t = t_max; t > 1e-14 * t_max; t *= 0.5) {
        for (std::size_t i = 0; i < n_; ++i) trial_[i] = x[i] + t * d_[i];
        if (t == t_max) snap_blocking_bound();
        clamp_to_windows(trial_);
        restore_sum(module_, lt_, trial_, free_);
        const double trial_energy = module_energy(module_, trial_);
        const double slack = 1e-15 * std::abs(energy);
        if (trial_energy <= energy + 1e-4 * t * slope + slack) {
          x.swap(trial_);
          energy = trial_energy;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        // Rounding floor: the energy cannot decrease any further along a
        // descent direction, so x is as stationary as double allows.
        if (pg_norm < 1e3 * opt.gradient_tolerance) return x;
        throw SolverError("line search failed", x);
      }
    }
    evaluate_derivatives(x);
    if (project_gradient(x) < opt.gradient_tolerance) return x;
    std::ostringstream os;
    os << "no convergence in " << opt.max_iterations << " iterations at lt = " << lt_;
    throw SolverError(os.str(), x);
  }

 private:
  // A converged iterate is only pinned to about tolerance / curvature. One
  // more Newton step brings it to rounding level, so paths traced from
  // opposite directions agree wherever they share a branch.
  std::vector<double> polish(std::vector<double> x, double pg_norm) {
    if (!(newton_direction() < 0.0) || step_to_boundary(x) < 1.0) return x;
    for (std::size_t i = 0; i < n_; ++i) trial_[i] = x[i] + d_[i];
    restore_sum(module_, lt_, trial_, free_);
    const std::vector<char> free_before = free_;
    evaluate_derivatives(trial_);
    const double trial_norm = project_gradient(trial_);
    if (trial_norm <= pg_norm && free_ == free_before) x.swap(trial_);
    return x;
  }

  static double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }

  void evaluate_derivatives(const std::vector<double>& x) {
    for (std::size_t i = 0; i < n_; ++i) {
      g_[i] = module_.weight(i) * module_.segment(i).slope(x[i]);
      h_[i] = module_.weight(i) * module_.segment(i).curvature(x[i]);
    }
  }

  double free_mean(const std::vector<double>& v) const {
    double s = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (free_[i]) {
        s += v[i];
        ++k;
      }
    }
    return k ? s / static_cast<double>(k) : 0.0;
  }

  std::size_t free_count() const {
    return static_cast<std::size_t>(std::count(free_.begin(), free_.end(), char{1}));
  }

  // Active set: a coordinate sitting on a bound is fixed while the projected
  // gradient pushes it outward. Drops the worst offender until consistent.
  double project_gradient(const std::vector<double>& x) {
    std::fill(free_.begin(), free_.end(), char{1});
    while (free_count() > 1) {
      const double mu = free_mean(g_);
      std::size_t worst = n_;
      double worst_push = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (!free_[i]) continue;
        const LengthWindow w = module_.segment(i).window();
        const double r = g_[i] - mu;
        double push = 0.0;
        if (x[i] <= w.lo && r > 0.0) push = r;
        if (x[i] >= w.hi && r < 0.0) push = -r;
        if (push > worst_push) {
          worst_push = push;
          worst = i;
        }
      }
      if (worst == n_) break;
      free_[worst] = 0;
    }
    double norm = 0.0;
    if (free_count() <= 1) {
      std::fill(pg_.begin(), pg_.end(), 0.0);
      return 0.0;
    }
    const double mu = free_mean(g_);
    for (std::size_t i = 0; i < n_; ++i) {
      pg_[i] = free_[i] ? g_[i] - mu : 0.0;
      norm = std::max(norm, std::abs(pg_[i]));
    }
    return norm;
  }

  void remove_mean(std::vector<double>& v) const {
    const double m = free_mean(v);
    for (std::size_t i = 0; i < n_; ++i) v[i] = free_[i] ? v[i] - m : 0.0;
  }

  // Newton step of the separable objective restricted to the free part of
  // the hyperplane. Returns the directional slope, or NaN when the reduced
  // Hessian is not positive definite along the step.
  double newton_direction() {
    constexpr double kTinyCurvature = 1e-14;
    double inv_sum = 0.0;
    double weighted = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!free_[i]) continue;
      if (std::abs(h_[i]) < kTinyCurvature) return std::numeric_limits<double>::quiet_NaN();
      inv_sum += 1.0 / h_[i];
      weighted += g_[i] / h_[i];
    }
    if (std::abs(inv_sum) < kTinyCurvature) return std::numeric_limits<double>::quiet_NaN();
    const double mu = weighted / inv_sum;
    for (std::size_t i = 0; i < n_; ++i) d_[i] = free_[i] ? (mu - g_[i]) / h_[i] : 0.0;
    remove_mean(d_);
    double curvature = 0.0;
    for (std::size_t i = 0; i < n_; ++i) curvature += h_[i] * d_[i] * d_[i];
    const double slope = dot(g_, d_);
    if (!(curvature > 0.0) || !std::isfinite(slope)) return std::numeric_limits<double>::quiet_NaN();
    return slope;
  }

  // Steepest descent, stretched to the step cap; the line search shortens it.
  double gradient_direction(double cap) {
    double m = 0.0;
    for (double v : pg_) m = std::max(m, std::abs(v));
    const double s = m > 0.0 ? cap / m : 0.0;
    for (std::size_t i = 0; i < n_; ++i) d_[i] = -s * pg_[i];
    return dot(g_, d_);
  }

  void scale_to_cap(double cap) {
    double m = 0.0;
    for (double v : d_) m = std::max(m, std::abs(v));
    if (m > cap) {
      const double s = cap / m;
      for (double& v : d_) v *= s;
    }
  }

  double step_to_boundary(const std::vector<double>& x) {
    double t = 1.0;
    blocking_ = n_;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!free_[i] || d_[i] == 0.0) continue;
      const LengthWindow w = module_.segment(i).window();
      const double room = d_[i] < 0.0 ? (x[i] - w.lo) / -d_[i] : (w.hi - x[i]) / d_[i];
      if (room < t) {
        t = std::max(room, 0.0);
        blocking_ = i;
        blocking_upper_ = d_[i] > 0.0;
      }
    }
    return t;
  }

  void snap_blocking_bound() {
    if (blocking_ >= n_) return;
    const LengthWindow w = module_.segment(blocking_).window();
    trial_[blocking_] = blocking_upper_ ? w.hi : w.lo;
  }

  // Coordinates within rounding distance of a bound are put on it, so the
  // active-set test sees them; the sum is restored on the interior ones.
  bool snap_near_bounds(std::vector<double>& x) {
    constexpr double kBoundSnap = 1e-11;
    bool changed = false;
    std::vector<char> interior(n_, 1);
    for (std::size_t i = 0; i < n_; ++i) {
      const LengthWindow w = module_.segment(i).window();
      if (x[i] != w.lo && std::abs(x[i] - w.lo) < kBoundSnap) {
        x[i] = w.lo;
        changed = true;
      } else if (x[i] != w.hi && std::abs(x[i] - w.hi) < kBoundSnap) {
        x[i] = w.hi;
        changed = true;
      }
      if (x[i] == w.lo || x[i] == w.hi) interior[i] = 0;
    }
    if (changed) restore_sum(module_, lt_, x, interior);
    return changed;
  }

  void clamp_to_windows(std::vector<double>& x) const {
    for (std::size_t i = 0; i < n_; ++i) {
      const LengthWindow w = module_.segment(i).window();
      x[i] = std::clamp(x[i], w.lo, w.hi);
    }
  }

  const DrivingModule& module_;
  double lt_;
  std::size_t n_;
  std::vector<double> g_, h_, pg_, d_, trial_;
  std::vector<char> free_;
  std::size_t blocking_ = 0;
  bool blocking_upper_ = false;
};

}  // namespace

std::vector<double> local_min_search(const DrivingModule& module, double lt,
                                     std::span<const double> init) {
  if (init.size() != module.size()) throw InvalidArgument("expected one length per segment");
  const LengthWindow total = module.total_window();
  if (!(lt >= total.lo && lt <= total.hi)) {
    std::ostringstream os;
    os << "total length " << lt << " outside [" << total.lo << ", " << total.hi << "]";
    throw RangeError(os.str(), total.lo, total.hi);
  }
  const double sum = std::accumulate(init.begin(), init.end(), 0.0);
  if (std::abs(sum - lt) > module.delta_lt() * (1.0 + 1e-9) + 1e-9) {
    throw InvalidArgument("initial guess violates the length constraint by more than delta_lt");
  }
  std::vector<double> x(init.begin(), init.end());
  project_onto_constraint(module, lt, x);
  return ConstrainedMinimizer(module, lt).run(std::move(x));
}

bool EquilibriumPath::in_jump(std::size_t step) const noexcept {
  return std::any_of(jumps.begin(), jumps.end(), [step](const Jump& j) {
    return step >= j.step_index && step <= j.end_index;
  });
}

EquilibriumPath equilibrium_path(const DrivingModule& module, Direction direction) {
  EquilibriumPath path;
  path.direction = direction;
  path.config = module.config();
  path.delta_lt = module.delta_lt();

  std::vector<double> grid = module.lt_grid();
  if (direction == Direction::compress) std::reverse(grid.begin(), grid.end());
  std::vector<double> x =
      direction == Direction::stretch ? module.contracted_lengths() : module.extended_lengths();
  path.steps.reserve(grid.size());
  // The starting state is a stable state of every segment: no solve needed.
  path.steps.push_back({grid.front(), x, module_energy(module, x)});
  for (std::size_t j = 1; j < grid.size(); ++j) {
    try {
      x = local_min_search(module, grid[j], x);
    } catch (const SolverError& e) {
      throw SolverError(std::string(to_string(direction)) + " path, step " + std::to_string(j) +
                            ": " + e.what(),
                        e.last_iterate(), j);
    }
    path.steps.push_back({grid[j], x, module_energy(module, x)});
  }
  path.jumps = detect_jumps(path, module);
  return path;
}

std::vector<Jump> detect_jumps(const EquilibriumPath& path, const DrivingModule& module) {
  std::vector<Jump> jumps;
  if (path.steps.size() < 2) return jumps;
  const double threshold = module.config().jump_threshold_factor * module.delta_lt();
  const JumpKind kind =
      path.direction == Direction::stretch ? JumpKind::stretch_jump : JumpKind::compress_jump;
  auto flagged = [&](std::size_t k) {
    const auto& a = path.steps[k - 1].lengths;
    const auto& b = path.steps[k].lengths;
    bool up = false;
    bool down = false;
    double largest = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double delta = b[i] - a[i];
      up = up || delta > 0.0;
      down = down || delta < 0.0;
      largest = std::max(largest, std::abs(delta));
    }
    return up && down && largest > threshold;
  };
  for (std::size_t k = 1; k < path.steps.size(); ++k) {
    if (!flagged(k)) continue;
    if (!jumps.empty() && jumps.back().end_index == k - 1) {
      jumps.back().end_index = k;
    } else {
      Jump j;
      j.step_index = k;
      j.end_index = k;
      j.lt_at_jump = path.steps[k - 1].lt;
      j.classification = kind;
      jumps.push_back(std::move(j));
    }
  }
  for (Jump& j : jumps) {
    const auto& before = path.steps[j.step_index - 1].lengths;
    const auto& after = path.steps[j.end_index].lengths;
    j.per_segment_delta.resize(before.size());
    for (std::size_t i = 0; i < before.size(); ++i) j.per_segment_delta[i] = after[i] - before[i];
  }
  return jumps;
}

namespace {

// Grid on [lo, hi] at the given spacing, with hi always included.
std::vector<double> axis(double lo, double hi, double resolution) {
  std::vector<double> v;
  if (hi < lo) return v;
  const auto m = static_cast<std::size_t>(std::floor((hi - lo) / resolution + 1e-9));
  v.reserve(m + 2);
  for (std::size_t k = 0; k <= m; ++k) v.push_back(lo + static_cast<double>(k) * resolution);
  if (hi - v.back() > 1e-12 * std::max(1.0, hi)) v.push_back(hi);
  return v;
}

std::vector<std::vector<double>> minima_two(const DrivingModule& m, double lt, double res) {
  const LengthWindow w1 = m.segment(0).window();
  const LengthWindow w2 = m.segment(1).window();
  const std::vector<double> xs = axis(std::max(w1.lo, lt - w2.hi), std::min(w1.hi, lt - w2.lo), res);
  std::vector<double> e(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double l2 = std::clamp(lt - xs[i], w2.lo, w2.hi);
    e[i] = m.weight(0) * m.segment(0).energy(xs[i]) + m.weight(1) * m.segment(1).energy(l2);
  }
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const bool left_ok = i == 0 || e[i] < e[i - 1];
    const bool right_ok = i + 1 == xs.size() || e[i] <= e[i + 1];
    if (left_ok && right_ok) out.push_back({xs[i], lt - xs[i]});
  }
  return out;
}

std::vector<std::vector<double>> minima_three(const DrivingModule& m, double lt, double res) {
  const LengthWindow w1 = m.segment(0).window();
  const LengthWindow w2 = m.segment(1).window();
  const LengthWindow w3 = m.segment(2).window();
  const std::vector<double> xs = axis(std::max(w1.lo, lt - w2.hi - w3.hi),
                                      std::min(w1.hi, lt - w2.lo - w3.lo), res);
  const std::vector<double> ys = axis(w2.lo, w2.hi, res);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> e1(xs.size()), e2(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) e1[i] = m.weight(0) * m.segment(0).energy(xs[i]);
  for (std::size_t j = 0; j < ys.size(); ++j) e2[j] = m.weight(1) * m.segment(1).energy(ys[j]);

  // Rolling three-row window: rows i-1, i, i+1 of E_t, +inf outside the band.
  auto fill_row = [&](std::size_t i, std::vector<double>& row) {
    row.assign(ys.size(), inf);
    if (i >= xs.size()) return;
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double l3 = lt - xs[i] - ys[j];
      if (l3 < w3.lo || l3 > w3.hi) continue;
      row[j] = e1[i] + e2[j] + m.weight(2) * m.segment(2).energy(l3);
    }
  };
  std::vector<double> prev(ys.size(), inf), cur, next;
  fill_row(0, cur);
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fill_row(i + 1, next);
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double v = cur[j];
      if (v == inf) continue;
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di) {
        const std::vector<double>& row = di < 0 ? prev : (di == 0 ? cur : next);
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const auto jj = static_cast<std::ptrdiff_t>(j) + dj;
          if (jj < 0 || jj >= static_cast<std::ptrdiff_t>(ys.size())) continue;
          const double nb = row[static_cast<std::size_t>(jj)];
          const bool earlier = di < 0 || (di == 0 && dj < 0);
          if (earlier ? !(v < nb) : !(v <= nb)) {
            is_min = false;
            break;
          }
        }
      }
      if (is_min) out.push_back({xs[i], ys[j], lt - xs[i] - ys[j]});
    }
    prev.swap(cur);
    cur.swap(next);
  }
  return out;
}

}  // namespace

std::vector<std::vector<double>> brute_force_minima(const DrivingModule& module, double lt,
                                                    double resolution) {
  if (!(resolution > 0.0)) throw InvalidArgument("resolution must be > 0");
  const LengthWindow total = module.total_window();
  if (!(lt >= total.lo && lt <= total.hi)) {
    throw RangeError("total length outside the attainable window", total.lo, total.hi);
  }
  switch (module.size()) {
    case 2:
      return minima_two(module, lt, resolution);
    case 3:
      return minima_three(module, lt, resolution);
    default:
      throw InvalidArgument("brute_force_minima supports 2 or 3 segments only");
  }
}

}  // namespace kresling
