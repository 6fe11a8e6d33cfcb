#include "kresling/gait.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "kresling/errors.hpp"

namespace kresling {

namespace {

constexpr double kGridSlack = 1e-9;

struct Held {
  Attachment end;
  AnchorState state;
};

class Walker {
 public:
  Walker(const DrivingModule& module, const AnchorPair& anchors, double rate, GaitTrace& trace)
      : module_(module), anchors_(anchors), rate_(rate), trace_(trace) {}

  void start(const PathStep& s) {
    GaitStep g;
    g.lt = s.lt;
    g.lengths = s.lengths;
    g.x_tail = 0.0;
    g.x_head = s.lt;
    const Held h = choose(s.lengths);
    g.anchor = h.state;
    g.held = h.end;
    trace_.steps.push_back(std::move(g));
  }

  void advance(const PathStep& s, Direction dir, bool jump) {
    const GaitStep& prev = trace_.steps.back();
    GaitStep g;
    g.index = trace_.steps.size();
    g.time = prev.time + std::abs(s.lt - prev.lt) / rate_;
    g.lt = s.lt;
    g.lengths = s.lengths;
    const Held h = choose(s.lengths);
    g.anchor = h.state;
    g.held = h.end;
    if (h.end == Attachment::tail) {
      g.x_tail = prev.x_tail;
      g.x_head = g.x_tail + s.lt;
    } else {
      g.x_head = prev.x_head;
      g.x_tail = g.x_head - s.lt;
    }
    const bool slipping = h.state == AnchorState::slipping;
    if (dir == Direction::stretch) {
      g.phase = jump ? GaitPhase::II
                     : (!slipping && h.end == Attachment::tail ? GaitPhase::I : GaitPhase::dwell);
    } else {
      g.phase = jump ? GaitPhase::IV
                     : (!slipping && h.end == Attachment::head ? GaitPhase::III : GaitPhase::dwell);
    }
    trace_.steps.push_back(std::move(g));
  }

 private:
  Held choose(const std::vector<double>& lengths) const {
    const Segment& tail_seg = module_.segment(0);
    const Segment& head_seg = module_.segment(1);
    const bool tail_in = is_anchored(tail_seg, anchors_.tail, lengths[0]);
    const bool head_in = is_anchored(head_seg, anchors_.head, lengths[1]);
    if (tail_in != head_in) {
      return tail_in ? Held{Attachment::tail, AnchorState::tail}
                     : Held{Attachment::head, AnchorState::head};
    }
    const double ra_tail = anchor_radius(tail_seg, anchors_.tail, lengths[0]);
    const double ra_head = anchor_radius(head_seg, anchors_.head, lengths[1]);
    if (tail_in) {
      const bool tail_wins =
          ra_tail - anchors_.tail.pipe_radius >= ra_head - anchors_.head.pipe_radius;
      return tail_wins ? Held{Attachment::tail, AnchorState::tail}
                       : Held{Attachment::head, AnchorState::head};
    }
    return {ra_tail >= ra_head ? Attachment::tail : Attachment::head, AnchorState::slipping};
  }

  const DrivingModule& module_;
  const AnchorPair& anchors_;
  double rate_;
  GaitTrace& trace_;
};

// Indices of path steps whose lt lies in the window.
std::vector<std::size_t> nodes_in(const EquilibriumPath& path, LengthWindow w) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < path.steps.size(); ++k) {
    const double lt = path.steps[k].lt;
    if (lt >= w.lo - kGridSlack && lt <= w.hi + kGridSlack) out.push_back(k);
  }
  return out;
}

}  // namespace

const char* to_string(AnchorState s) noexcept {
  switch (s) {
    case AnchorState::tail:
      return "tail";
    case AnchorState::head:
      return "head";
    case AnchorState::slipping:
      return "slipping";
  }
  return "?";
}

const char* to_string(GaitPhase p) noexcept {
  switch (p) {
    case GaitPhase::I:
      return "I";
    case GaitPhase::II:
      return "II";
    case GaitPhase::III:
      return "III";
    case GaitPhase::IV:
      return "IV";
    case GaitPhase::dwell:
      return "dwell";
  }
  return "?";
}

std::vector<double> GaitTrace::cycle_displacements() const {
  std::vector<double> out;
  for (std::size_t c = 0; c + 1 < cycle_bounds.size(); ++c) {
    out.push_back(steps[cycle_bounds[c + 1]].x_head - steps[cycle_bounds[c]].x_head);
  }
  return out;
}

AnchorPair size_anchors(const DrivingModule& module, const ActuationCycle& cycle,
                        double pipe_radius) {
  if (module.size() != 2) throw InvalidArgument("anchors are sized for dual-segment modules");
  const auto [cut_I, cut_II] = cutoffs(cycle);
  return {size_anchor(module.segment(0), pipe_radius, cut_I, Attachment::tail),
          size_anchor(module.segment(1), pipe_radius, cut_II, Attachment::head)};
}

GaitTrace simulate(const DrivingModule& module, const EquilibriumPath& stretch,
                   const EquilibriumPath& compress, const AnchorPair& anchors,
                   const GaitOptions& options) {
  if (!(stretch.config == module.config())) {
    throw InvalidArgument("paths were traced for a different module config");
  }
  if (options.cycles < 0) throw InvalidArgument("cycles must be >= 0");
  if (!(options.rate > 0.0) || !std::isfinite(options.rate)) {
    throw InvalidArgument("rate must be a positive finite number");
  }
  const ActuationCycle cycle = build_cycle(stretch, compress);
  if (cycle.classification != CycleClass::Valid) {
    throw UnavailableError(std::string("gait needs a Valid actuation cycle, got ") +
                           to_string(cycle.classification));
  }

  LengthWindow range{module.lt_min(), module.lt_max()};
  if (options.operating_range) {
    range = *options.operating_range;
    const double lt_g = cycle.landmark("g").lt;
    const double lt_d = cycle.landmark("d").lt;
    if (!(range.lo >= module.lt_min() - kGridSlack && range.hi <= module.lt_max() + kGridSlack)) {
      throw InvalidArgument("operating range must lie inside [lt_min, lt_max]");
    }
    if (!(range.lo <= lt_g + kGridSlack && range.hi >= lt_d - kGridSlack)) {
      throw InvalidArgument("operating range must enclose both jumps");
    }
  }
  const std::vector<std::size_t> up = nodes_in(stretch, range);
  const std::vector<std::size_t> down = nodes_in(compress, range);
  if (up.size() < 2 || down.size() < 2) throw InvalidArgument("operating range is too narrow");

  GaitTrace trace;
  Walker walker(module, anchors, options.rate, trace);
  walker.start(stretch.steps[up.front()]);
  for (int c = 0; c < options.cycles; ++c) {
    trace.cycle_bounds.push_back(trace.steps.size() - 1);
    for (std::size_t k = 1; k < up.size(); ++k) {
      walker.advance(stretch.steps[up[k]], Direction::stretch, stretch.in_jump(up[k]));
    }
    for (std::size_t k = 1; k < down.size(); ++k) {
      walker.advance(compress.steps[down[k]], Direction::compress, compress.in_jump(down[k]));
    }
    ++trace.cycles_completed;
  }
  trace.cycle_bounds.push_back(trace.steps.size() - 1);
  return trace;
}

GaitTrace simulate(const DrivingModule& module, const AnchorPair& anchors,
                   const GaitOptions& options) {
  const EquilibriumPath stretch = equilibrium_path(module, Direction::stretch);
  const EquilibriumPath compress = equilibrium_path(module, Direction::compress);
  return simulate(module, stretch, compress, anchors, options);
}

double gait_length(const GaitTrace& trace) {
  if (trace.cycles_completed < 1) throw InvalidArgument("trace has no completed cycle");
  const std::vector<double> d = trace.cycle_displacements();
  double sum = 0.0;
  for (double x : d) sum += x;
  return sum / static_cast<double>(d.size());
}

namespace {

SweepCell evaluate_cell(const ModuleConfig& base, double lambda_I, double lambda_II,
                        double pipe_radius) {
  SweepCell cell;
  cell.lambda_I = lambda_I;
  cell.lambda_II = lambda_II;
  try {
    ModuleConfig config = base;
    config.segments[0].angle_ratio = lambda_I;
    config.segments[1].angle_ratio = lambda_II;
    const DrivingModule module(config);
    const EquilibriumPath stretch = equilibrium_path(module, Direction::stretch);
    const EquilibriumPath compress = equilibrium_path(module, Direction::compress);
    const ActuationCycle cycle = build_cycle(stretch, compress);
    cell.classification = cycle.classification;
    if (cycle.classification == CycleClass::Valid) {
      const AnchorPair anchors = size_anchors(module, cycle, pipe_radius);
      cell.gait_length = gait_length(simulate(module, stretch, compress, anchors));
    }
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  return cell;
}

}  // namespace

SweepResult sweep(const ModuleConfig& base, std::span<const double> lambdas,
                  const SweepOptions& options) {
  if (base.segments.size() != 2) throw InvalidArgument("sweep needs a dual-segment template");
  for (double lam : lambdas) {
    if (!(lam > 0.5 && lam <= 1.0)) {
      throw InvalidArgument("sweep angle ratios must lie in (0.5, 1], got " + std::to_string(lam));
    }
  }
  std::vector<double> grid(lambdas.begin(), lambdas.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  SweepResult result;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      SweepCell cell;
      cell.lambda_I = grid[i];
      cell.lambda_II = grid[j];
      result.grid.push_back(cell);
    }
  }

  unsigned jobs = options.jobs != 0 ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, result.grid.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < result.grid.size(); k = next++) {
      SweepCell& cell = result.grid[k];
      cell = evaluate_cell(base, cell.lambda_I, cell.lambda_II, options.pipe_radius);
    }
  };
  if (jobs <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  return result;
}

}  // namespace kresling
