#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kresling/geometry.hpp"
#include "kresling/kinematics.hpp"
#include "kresling/landscape.hpp"

namespace kresling::cli {

struct SweepSpec {
  std::vector<double> lambdas;
};

struct RunConfig {
  std::vector<KreslingDesign> segments;
  std::vector<double> stiffness_scales;
  double pipe_radius_mm = 47.5;
  /// 0 selects stroke / 1000.
  double delta_lt_mm = 0.0;
  int cycles = 1;
  double rate_mm_per_s = 1.0;
  double window_margin_deg = 5.0;
  std::optional<LengthWindow> operating_range_mm;
  double landscape_resolution_mm = 0.25;
  int energy_samples = 400;
  SweepSpec sweep;

  ModuleConfig module_config() const;
};

/// Reference module (N=8, P=30; lambda 0.8/0.6; L0 15/5) in a 47.5 mm
/// pipe, sweep grid 0.55..1.00 by 0.05.
RunConfig default_config();

/// Parses a JSON document over the defaults. Unknown keys, wrong types and
/// violated invariants raise kresling::InvalidArgument naming the field.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Throws InvalidArgument naming the first bad field.
void validate(const RunConfig& config);

}  // namespace kresling::cli
