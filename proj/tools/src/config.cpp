#include "kresling_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "kresling/errors.hpp"

namespace kresling::cli {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw InvalidArgument("config field '" + field + "': " + why);
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) bad(field, "expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) bad(field, "expected an integer");
  return v.get<int>();
}

const json& object(const json& v, const std::string& field) {
  if (!v.is_object()) bad(field, "expected an object");
  return v;
}

const json& array(const json& v, const std::string& field) {
  if (!v.is_array()) bad(field, "expected an array");
  return v;
}

KreslingDesign parse_segment(const json& v, const std::string& field) {
  KreslingDesign d;
  for (const auto& [key, val] : object(v, field).items()) {
    const std::string f = field + "." + key;
    if (key == "n_sides") {
      d.n_sides = integer(val, f);
    } else if (key == "side_length") {
      d.side_length = number(val, f);
    } else if (key == "angle_ratio") {
      d.angle_ratio = number(val, f);
    } else if (key == "contracted_length") {
      d.contracted_length = number(val, f);
    } else {
      bad(f, "unknown key");
    }
  }
  return d;
}

double rounded(double x) { return std::round(x * 1e12) / 1e12; }

SweepSpec parse_sweep(const json& v) {
  SweepSpec s;
  std::optional<double> start, stop, step;
  for (const auto& [key, val] : object(v, "sweep").items()) {
    const std::string f = "sweep." + key;
    if (key == "lambdas") {
      for (const json& x : array(val, f)) s.lambdas.push_back(number(x, f));
    } else if (key == "start") {
      start = number(val, f);
    } else if (key == "stop") {
      stop = number(val, f);
    } else if (key == "step") {
      step = number(val, f);
    } else {
      bad(f, "unknown key");
    }
  }
  if (start || stop || step) {
    if (!s.lambdas.empty()) bad("sweep", "give either 'lambdas' or 'start'/'stop'/'step'");
    if (!start || !stop || !step) bad("sweep", "'start', 'stop' and 'step' go together");
    if (!(*step > 0.0)) bad("sweep.step", "must be > 0");
    if (!(*stop >= *start)) bad("sweep.stop", "must be >= start");
    const int count = static_cast<int>(std::floor((*stop - *start) / *step + 1e-9)) + 1;
    for (int k = 0; k < count; ++k) s.lambdas.push_back(rounded(*start + k * *step));
  }
  return s;
}

}  // namespace

ModuleConfig RunConfig::module_config() const {
  ModuleConfig m;
  m.segments = segments;
  m.stiffness_scales = stiffness_scales;
  m.delta_lt = delta_lt_mm;
  m.kinematics.window_margin = deg_to_rad(window_margin_deg);
  return m;
}

RunConfig default_config() {
  RunConfig c;
  c.segments = {KreslingDesign{8, 30.0, 0.8, 15.0}, KreslingDesign{8, 30.0, 0.6, 5.0}};
  for (int k = 0; k < 10; ++k) c.sweep.lambdas.push_back(rounded(0.55 + 0.05 * k));
  return c;
}

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c = default_config();
  for (const auto& [key, val] : object(doc, "<root>").items()) {
    if (key == "segments") {
      c.segments.clear();
      std::size_t i = 0;
      for (const json& s : array(val, key)) {
        c.segments.push_back(parse_segment(s, "segments[" + std::to_string(i++) + "]"));
      }
    } else if (key == "stiffness_scales") {
      c.stiffness_scales.clear();
      for (const json& x : array(val, key)) c.stiffness_scales.push_back(number(x, key));
    } else if (key == "pipe_radius_mm") {
      c.pipe_radius_mm = number(val, key);
    } else if (key == "delta_lt_mm") {
      c.delta_lt_mm = number(val, key);
    } else if (key == "cycles") {
      c.cycles = integer(val, key);
    } else if (key == "rate_mm_per_s") {
      c.rate_mm_per_s = number(val, key);
    } else if (key == "window_margin_deg") {
      c.window_margin_deg = number(val, key);
    } else if (key == "operating_range_mm") {
      const json& r = array(val, key);
      if (r.size() != 2) bad(key, "expected [lo, hi]");
      c.operating_range_mm = LengthWindow{number(r[0], key), number(r[1], key)};
    } else if (key == "landscape_resolution_mm") {
      c.landscape_resolution_mm = number(val, key);
    } else if (key == "energy_samples") {
      c.energy_samples = integer(val, key);
    } else if (key == "sweep") {
      c.sweep = parse_sweep(val);
    } else {
      bad(key, "unknown key");
    }
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void validate(const RunConfig& c) {
  if (c.segments.empty()) bad("segments", "at least one segment is required");
  for (std::size_t i = 0; i < c.segments.size(); ++i) {
    try {
      kresling::validate(c.segments[i]);
    } catch (const InvalidArgument& e) {
      bad("segments[" + std::to_string(i) + "]", e.what());
    }
  }
  if (!c.stiffness_scales.empty() && c.stiffness_scales.size() != c.segments.size()) {
    bad("stiffness_scales", "needs one entry per segment");
  }
  for (double w : c.stiffness_scales) {
    if (!(w > 0.0) || !std::isfinite(w)) bad("stiffness_scales", "entries must be > 0");
  }
  if (!(c.pipe_radius_mm > 0.0) || !std::isfinite(c.pipe_radius_mm)) {
    bad("pipe_radius_mm", "must be > 0");
  }
  if (!(c.delta_lt_mm >= 0.0) || !std::isfinite(c.delta_lt_mm)) {
    bad("delta_lt_mm", "must be >= 0 (0 selects stroke/1000)");
  }
  if (c.cycles < 1) bad("cycles", "must be >= 1");
  if (!(c.rate_mm_per_s > 0.0) || !std::isfinite(c.rate_mm_per_s)) {
    bad("rate_mm_per_s", "must be > 0");
  }
  if (!(c.window_margin_deg >= 0.0 && c.window_margin_deg < 90.0)) {
    bad("window_margin_deg", "must lie in [0, 90)");
  }
  if (c.operating_range_mm && !(c.operating_range_mm->lo < c.operating_range_mm->hi)) {
    bad("operating_range_mm", "needs lo < hi");
  }
  if (!(c.landscape_resolution_mm > 0.0)) bad("landscape_resolution_mm", "must be > 0");
  if (c.energy_samples < 2) bad("energy_samples", "must be >= 2");
  for (double lam : c.sweep.lambdas) {
    if (!(lam > 0.5 && lam <= 1.0)) bad("sweep.lambdas", "values must lie in (0.5, 1]");
  }
}

}  // namespace kresling::cli
