#include "kresling_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "kresling/anchor.hpp"
#include "kresling/cycle.hpp"
#include "kresling/errors.hpp"
#include "kresling/gait.hpp"
#include "kresling/kinematics.hpp"
#include "kresling/landscape.hpp"
#include "kresling_cli/svg.hpp"

namespace kresling::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Mean gait over repeated trials of the physical prototype.
constexpr double kExperimentalGaitMm = 22.0;

std::string seg_name(const char* stem, std::size_t i, const char* ext) {
  return std::string(stem) + "_seg" + std::to_string(i + 1) + ext;
}

ordered_json design_json(const KreslingDesign& d, const KinematicsOptions& opts) {
  const DerivedGeometry g = derive_geometry(d);
  const Segment seg(g, opts);
  const StableStates st = seg.stable_states();
  ordered_json j;
  j["n_sides"] = d.n_sides;
  j["side_length"] = d.side_length;
  j["angle_ratio"] = d.angle_ratio;
  j["contracted_length"] = d.contracted_length;
  j["bistable"] = !g.monostable;
  j["phi_rad"] = g.phi;
  j["gamma_rad"] = g.gamma;
  j["circumradius"] = g.circumradius;
  j["valley_length"] = g.valley;
  j["mountain_length"] = g.mountain;
  j["valley_length_zero_height"] = g.valley_traditional;
  j["mountain_length_zero_height"] = g.mountain_traditional;
  j["pattern_angle_deg"] = rad_to_deg(g.pattern_angle);
  j["alpha_contracted_deg"] = rad_to_deg(g.alpha_contracted);
  j["alpha_extended_deg"] = rad_to_deg(g.alpha_extended);
  j["l_contracted"] = st.l_contracted;
  j["l_extended"] = st.l_extended;
  j["barrier_energy"] = st.barrier_energy;
  j["barrier_length"] = st.barrier_length;
  j["window"] = {seg.window().lo, seg.window().hi};
  return j;
}

CommandResult run_design(const RunConfig& c) {
  ordered_json doc;
  doc["segments"] = ordered_json::array();
  for (const KreslingDesign& d : c.segments) {
    doc["segments"].push_back(design_json(d, c.module_config().kinematics));
  }
  const std::string text = doc.dump(2) + "\n";
  return {text, {{"design.json", text}}};
}

CommandResult run_energy(const RunConfig& c) {
  CommandResult r;
  const KinematicsOptions opts = c.module_config().kinematics;
  std::vector<Series> energy_series;
  static const std::vector<std::string> header = {"l_mm", "alpha_rad", "strain", "energy",
                                                  "force"};
  for (std::size_t i = 0; i < c.segments.size(); ++i) {
    const Segment seg(c.segments[i], opts);
    const LengthWindow w = seg.window();
    CsvWriter csv(header);
    Series s;
    s.label = "segment " + std::to_string(i + 1);
    const int n = c.energy_samples;
    for (int k = 0; k < n; ++k) {
      const double l = k == n - 1 ? w.hi : w.lo + w.width() * k / (n - 1);
      const FoldState fs = seg.fold_state(seg.length_to_alpha(l));
      csv.cell(l).cell(fs.alpha).cell(fs.strain).cell(seg.energy(l)).cell(seg.slope(l));
      csv.end_row();
      s.x.push_back(l);
      s.y.push_back(seg.energy(l));
    }
    r.files.push_back({seg_name("energy", i, ".csv"), csv.str()});
    energy_series.push_back(std::move(s));
  }
  r.files.push_back({"energy.svg", line_chart("Normalized strain energy", "segment length l [mm]",
                                               "E [-]", energy_series)});
  r.report = "wrote energy curves for " + std::to_string(c.segments.size()) + " segment(s)\n";
  return r;
}

std::string path_csv(const EquilibriumPath& path) {
  std::vector<std::string> header = {"lt_mm"};
  const std::size_t n = path.config.segments.size();
  for (std::size_t i = 0; i < n; ++i) header.push_back("l" + std::to_string(i + 1) + "_mm");
  header.push_back("Et");
  header.push_back("jump_flag");
  CsvWriter csv(header);
  for (std::size_t k = 0; k < path.steps.size(); ++k) {
    const PathStep& s = path.steps[k];
    csv.cell(s.lt);
    for (double l : s.lengths) csv.cell(l);
    csv.cell(s.total_energy).cell(static_cast<long long>(path.in_jump(k) ? 1 : 0));
    csv.end_row();
  }
  return csv.str();
}

std::string landscape_csv(const DrivingModule& m, double res) {
  static const std::vector<std::string> header = {"l1_mm", "l2_mm", "Et"};
  CsvWriter csv(header);
  auto axis = [res](LengthWindow w) {
    std::vector<double> v;
    const auto count = static_cast<long long>(std::floor(w.width() / res));
    for (long long k = 0; k <= count; ++k) v.push_back(w.lo + static_cast<double>(k) * res);
    if (v.back() < w.hi) v.push_back(w.hi);
    return v;
  };
  const std::vector<double> a = axis(m.segment(0).window());
  const std::vector<double> b = axis(m.segment(1).window());
  for (double l1 : a) {
    for (double l2 : b) {
      const double lengths[2] = {l1, l2};
      csv.cell(l1).cell(l2).cell(module_energy(m, lengths));
      csv.end_row();
    }
  }
  return csv.str();
}

std::string describe_jumps(const EquilibriumPath& p) {
  std::string s = std::string(to_string(p.direction)) + ": " + std::to_string(p.jumps.size()) +
                  " jump(s)";
  for (const Jump& j : p.jumps) {
    s += "\n  at lt=" + format_number(j.lt_at_jump) + " mm, delta =";
    for (double d : j.per_segment_delta) s += " " + format_number(d);
  }
  return s + "\n";
}

struct Traced {
  DrivingModule module;
  EquilibriumPath stretch;
  EquilibriumPath compress;
};

Traced trace(const RunConfig& c) {
  DrivingModule m(c.module_config());
  spdlog::info("tracing {} segment(s), lt in [{}, {}] mm, delta_lt {} mm", m.size(), m.lt_min(),
               m.lt_max(), m.delta_lt());
  EquilibriumPath s = equilibrium_path(m, Direction::stretch);
  EquilibriumPath p = equilibrium_path(m, Direction::compress);
  return {std::move(m), std::move(s), std::move(p)};
}

CommandResult run_path(const RunConfig& c) {
  const Traced t = trace(c);
  CommandResult r;
  r.files.push_back({"path_stretch.csv", path_csv(t.stretch)});
  r.files.push_back({"path_compress.csv", path_csv(t.compress)});
  if (t.module.size() == 2) {
    r.files.push_back({"landscape.csv", landscape_csv(t.module, c.landscape_resolution_mm)});
  } else {
    spdlog::warn("landscape grid is only written for dual-segment modules");
  }
  r.report = describe_jumps(t.stretch) + describe_jumps(t.compress);
  return r;
}

ordered_json jumps_json(const EquilibriumPath& p) {
  ordered_json a = ordered_json::array();
  for (const Jump& j : p.jumps) {
    a.push_back({{"step", j.step_index},
                 {"end_step", j.end_index},
                 {"lt_mm", j.lt_at_jump},
                 {"per_segment_delta_mm", j.per_segment_delta}});
  }
  return a;
}

ordered_json cycle_json(const ActuationCycle& cy, const Traced& t) {
  ordered_json j;
  j["classification"] = to_string(cy.classification);
  ordered_json marks = ordered_json::object();
  for (const Landmark& m : cy.landmarks) marks[m.name] = {{"lt_mm", m.lt}, {"lengths_mm", m.lengths}};
  j["landmarks"] = marks;
  ordered_json phases = ordered_json::array();
  for (const PhaseRange& p : cy.phases) {
    phases.push_back({{"phase", to_string(p.phase)}, {"lt_begin_mm", p.lt_begin}, {"lt_end_mm", p.lt_end}});
  }
  j["phases"] = phases;
  j["cutoff_I_mm"] = cy.cutoff_I ? json(*cy.cutoff_I) : json(nullptr);
  j["cutoff_II_mm"] = cy.cutoff_II ? json(*cy.cutoff_II) : json(nullptr);
  j["stretch_jumps"] = jumps_json(t.stretch);
  j["compress_jumps"] = jumps_json(t.compress);
  return j;
}

void require_dual(const RunConfig& c, const char* command) {
  if (c.segments.size() != 2) {
    throw InvalidArgument(std::string("config field 'segments': '") + command +
                          "' needs exactly two segments");
  }
}

CommandResult run_cycle(const RunConfig& c) {
  require_dual(c, "cycle");
  const Traced t = trace(c);
  const ActuationCycle cy = build_cycle(t.stretch, t.compress);
  const std::string text = cycle_json(cy, t).dump(2) + "\n";
  return {text, {{"cycle.json", text}}};
}

std::string anchor_csv(const Segment& seg, const AnchorSpec& spec, int samples) {
  static const std::vector<std::string> header = {"l_mm", "Ra_mm", "anchored"};
  CsvWriter csv(header);
  const LengthWindow w = seg.window();
  for (int k = 0; k < samples; ++k) {
    const double l = k == samples - 1 ? w.hi : w.lo + w.width() * k / (samples - 1);
    csv.cell(l).cell(anchor_radius(seg, spec, l));
    csv.cell(static_cast<long long>(is_anchored(seg, spec, l) ? 1 : 0));
    csv.end_row();
  }
  return csv.str();
}

CommandResult run_gait(const RunConfig& c) {
  require_dual(c, "gait");
  const Traced t = trace(c);
  const ActuationCycle cy = build_cycle(t.stretch, t.compress);
  if (cy.classification != CycleClass::Valid) {
    throw UnavailableError(std::string("no gait: actuation cycle is ") +
                           to_string(cy.classification));
  }
  const AnchorPair anchors = size_anchors(t.module, cy, c.pipe_radius_mm);
  GaitOptions opts;
  opts.cycles = c.cycles;
  opts.rate = c.rate_mm_per_s;
  opts.operating_range = c.operating_range_mm;
  const GaitTrace tr = simulate(t.module, t.stretch, t.compress, anchors, opts);
  const double gait = gait_length(tr);

  static const std::vector<std::string> header = {"step", "time_s", "lt_mm", "l1_mm", "l2_mm",
                                                  "x_tail_mm", "x_head_mm", "anchor", "phase"};
  CsvWriter csv(header);
  Series head{"head", {}, {}, false};
  Series tail{"tail", {}, {}, true};
  for (const GaitStep& s : tr.steps) {
    csv.cell(static_cast<long long>(s.index)).cell(s.time).cell(s.lt);
    csv.cell(s.lengths[0]).cell(s.lengths[1]).cell(s.x_tail).cell(s.x_head);
    csv.cell(to_string(s.anchor)).cell(to_string(s.phase));
    csv.end_row();
    head.x.push_back(s.time);
    head.y.push_back(s.x_head);
    tail.x.push_back(s.time);
    tail.y.push_back(s.x_tail);
  }
  const double duration = tr.steps[tr.cycle_bounds[1]].time - tr.steps[tr.cycle_bounds[0]].time;

  ordered_json summary;
  summary["gait_length_mm"] = gait;
  summary["cycle_displacements_mm"] = tr.cycle_displacements();
  summary["cycles"] = tr.cycles_completed;
  summary["cycle_duration_s"] = duration;
  summary["mean_speed_mm_per_s"] = gait / duration;
  summary["cutoff_I_mm"] = anchors.tail.cutoff_length;
  summary["cutoff_II_mm"] = anchors.head.cutoff_length;
  summary["tail_flap_length_mm"] = anchors.tail.flap_length;
  summary["head_flap_length_mm"] = anchors.head.flap_length;
  summary["pipe_radius_mm"] = c.pipe_radius_mm;
  summary["experimental_gait_mm"] = kExperimentalGaitMm;
  const std::string text = summary.dump(2) + "\n";

  CommandResult r;
  r.report = text;
  r.files.push_back({"trace.csv", csv.str()});
  r.files.push_back({"gait.svg", line_chart("Crawler end positions", "time [s]", "position [mm]",
                                            {head, tail})});
  r.files.push_back({"anchor_tail.csv", anchor_csv(t.module.segment(0), anchors.tail, c.energy_samples)});
  r.files.push_back({"anchor_head.csv", anchor_csv(t.module.segment(1), anchors.head, c.energy_samples)});
  r.files.push_back({"gait.json", text});
  return r;
}

const char* tag_of(const SweepCell& cell) {
  if (!cell.error.empty() || !cell.classification) return "E";
  switch (*cell.classification) {
    case CycleClass::Valid:
      return "V";
    case CycleClass::NoJumps:
      return "N";
    case CycleClass::MultipleJumps:
      return "M";
    case CycleClass::WeakBistability:
      return "W";
  }
  return "?";
}

CommandResult run_sweep(const RunConfig& c, const CommandOptions& o) {
  require_dual(c, "sweep");
  if (c.sweep.lambdas.empty()) throw InvalidArgument("config field 'sweep': no angle ratios");
  SweepOptions so;
  so.pipe_radius = c.pipe_radius_mm;
  so.jobs = o.jobs;
  const SweepResult res = sweep(c.module_config(), c.sweep.lambdas, so);

  static const std::vector<std::string> header = {"lambda1", "lambda2", "class", "gait_mm"};
  CsvWriter csv(header);
  std::vector<HeatCell> cells;
  std::size_t failures = 0;
  for (const SweepCell& cell : res.grid) {
    csv.cell(cell.lambda_I).cell(cell.lambda_II);
    csv.cell(cell.classification ? to_string(*cell.classification) : "Error");
    csv.cell(cell.gait_length ? format_number(*cell.gait_length) : std::string());
    csv.end_row();
    if (!cell.error.empty()) {
      ++failures;
      spdlog::warn("cell ({}, {}) failed: {}", cell.lambda_I, cell.lambda_II, cell.error);
    }
    cells.push_back({cell.lambda_II, cell.lambda_I, cell.gait_length.has_value(),
                     cell.gait_length.value_or(0.0), tag_of(cell)});
  }
  std::vector<double> grid = c.sweep.lambdas;
  std::sort(grid.begin(), grid.end());
  double step = 0.05;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (grid[k] - grid[k - 1] > 1e-12) step = std::min(step, grid[k] - grid[k - 1]);
  }
  CommandResult r;
  r.files.push_back({"sweep.csv", csv.str()});
  r.files.push_back({"sweep.svg", heatmap("Gait length [mm]", "lambda_II", "lambda_I", cells, step)});
  r.report = std::to_string(res.grid.size()) + " cells, " + std::to_string(failures) + " failed\n";
  return r;
}

CommandResult run_pattern(const RunConfig& c) {
  CommandResult r;
  for (std::size_t i = 0; i < c.segments.size(); ++i) {
    r.files.push_back({seg_name("pattern", i, ".svg"), crease_pattern_svg(crease_pattern(c.segments[i]))});
  }
  r.report = "wrote " + std::to_string(c.segments.size()) + " crease pattern(s)\n";
  return r;
}

}  // namespace

bool is_command(std::string_view name) {
  return std::find(std::begin(kCommands), std::end(kCommands), name) != std::end(kCommands);
}

CommandResult run_command(std::string_view name, const RunConfig& config,
                          const CommandOptions& options) {
  validate(config);
  if (name == "design") return run_design(config);
  if (name == "energy") return run_energy(config);
  if (name == "path") return run_path(config);
  if (name == "cycle") return run_cycle(config);
  if (name == "gait") return run_gait(config);
  if (name == "sweep") return run_sweep(config, options);
  if (name == "pattern") return run_pattern(config);
  throw InvalidArgument("unknown command '" + std::string(name) + "'");
}

}  // namespace kresling::cli
