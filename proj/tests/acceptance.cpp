// Acceptance run: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "kresling/anchor.hpp"
#include "kresling/cycle.hpp"
#include "kresling/gait.hpp"
#include "kresling/kinematics.hpp"
#include "kresling/landscape.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace {

using namespace kresling;
using kresling::testing::Gen;

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome stable_states_segment_I() {
  Outcome o;
  const Segment s(kresling::testing::reference_segment_I());
  const StableStates st = s.stable_states();
  o.require(st.l_contracted == 15.0, "l0 == 15 exactly");
  o.require(std::abs(st.l_extended - 62.55) <= 0.05, "l1 = 62.55 +- 0.05");
  o.require(s.energy(st.l_contracted) <= 1e-12 && s.energy(st.l_extended) <= 1e-12,
            "E = 0 at both states");
  o.require(st.barrier_energy > 0, "barrier > 0");
  o.note("l1 = " + fmt("%.6f", st.l_extended) + " mm, barrier = " + fmt("%.6g", st.barrier_energy));
  return o;
}

Outcome bistability_ordering() {
  Outcome o;
  auto barrier = [](double lam) {
    return Segment(KreslingDesign{8, 30.0, lam, 20.0}).stable_states().barrier_energy;
  };
  const double b10 = barrier(1.0), b08 = barrier(0.8), b06 = barrier(0.6);
  o.require(b10 > b08 && b08 > b06 && b06 > 0, "barrier(1.0) > barrier(0.8) > barrier(0.6) > 0");
  const KreslingDesign weak{8, 30.0, 0.45, 20.0};
  o.require(!is_bistable(weak) && derive_geometry(weak).monostable, "lambda = 0.45 monostable");
  o.note("barriers " + fmt("%.4g", b10) + " > " + fmt("%.4g", b08) + " > " + fmt("%.4g", b06));
  return o;
}

Outcome dual_segment_cycle() {
  Outcome o;
  const DrivingModule m(kresling::testing::reference_module());
  const EquilibriumPath up = equilibrium_path(m, Direction::stretch);
  const EquilibriumPath down = equilibrium_path(m, Direction::compress);
  o.require(up.jumps.size() == 1, "exactly one stretch jump");
  o.require(down.jumps.size() == 1, "exactly one compress jump");
  if (up.jumps.size() == 1 && down.jumps.size() == 1) {
    const Jump& a = up.jumps[0];
    const Jump& b = down.jumps[0];
    o.require(a.per_segment_delta[0] > 0 && a.per_segment_delta[1] < 0,
              "stretch jump: I extends, II contracts");
    o.require(b.per_segment_delta[0] < 0 && b.per_segment_delta[1] > 0,
              "compress jump reversed");
    const double dlt_up = std::abs(up.steps[a.end_index].lt - up.steps[a.step_index - 1].lt);
    const double dlt_down = std::abs(down.steps[b.end_index].lt - down.steps[b.step_index - 1].lt);
    o.require(dlt_up <= m.delta_lt() + 1e-12 && dlt_down <= m.delta_lt() + 1e-12,
              "|delta lt| across jumps <= delta_lt");
    o.require(b.lt_at_jump < a.lt_at_jump, "compress jump below stretch jump");
    o.note("jumps at lt = " + fmt("%.3f", a.lt_at_jump) + " / " + fmt("%.3f", b.lt_at_jump) + " mm");
  }
  o.require(classify(up, down) == CycleClass::Valid, "classification Valid");
  double widest = 0;
  const std::size_t n = up.steps.size();
  for (std::size_t k = 0; k < n && n == down.steps.size(); ++k) {
    widest = std::max(widest, std::abs(up.steps[k].lengths[0] - down.steps[n - 1 - k].lengths[0]));
  }
  o.require(widest > 5.0, "hysteresis in l_I > 5 mm");
  o.note("hysteresis " + fmt("%.2f", widest) + " mm");
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  Gen gen(20240611);
  double worst = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const DrivingModule m(gen.dual_module());
    for (Direction d : {Direction::stretch, Direction::compress}) {
      worst = std::max(worst, kresling::testing::worst_oracle_gap(m, equilibrium_path(m, d), 0.01));
    }
  }
  o.require(worst <= 0.05, "every non-jump step within 0.05 mm of a grid minimum");
  o.note("worst gap " + fmt("%.4f", worst) + " mm over 10 configs at 0.01 mm grid");
  return o;
}

Outcome gait_properties() {
  Outcome o;
  const DrivingModule m(kresling::testing::reference_module());
  const EquilibriumPath up = equilibrium_path(m, Direction::stretch);
  const EquilibriumPath down = equilibrium_path(m, Direction::compress);
  const ActuationCycle cy = build_cycle(up, down);
  const AnchorPair anchors = size_anchors(m, cy, 47.5);
  GaitOptions opt;
  opt.cycles = 5;
  const GaitTrace t = simulate(m, up, down, anchors, opt);
  opt.rate = 2.0;
  const GaitTrace fast = simulate(m, up, down, anchors, opt);

  const std::vector<double> d = t.cycle_displacements();
  bool positive = true, periodic = true;
  for (double x : d) {
    positive = positive && x > 0;
    periodic = periodic && std::abs(x - d[0]) <= 1e-6;
  }
  double phase_II = 0, phase_IV = 0;
  for (std::size_t k = 1; k < t.steps.size() && k <= t.cycle_bounds[1]; ++k) {
    const double dx = t.steps[k].x_head - t.steps[k - 1].x_head;
    if (t.steps[k].phase == GaitPhase::II) phase_II += dx;
    if (t.steps[k].phase == GaitPhase::IV) phase_IV += dx;
  }
  const double gait = gait_length(t);
  o.require(positive, "per-cycle head displacement > 0");
  o.require(std::abs(phase_II) <= 2 * m.delta_lt(), "|Phase II head motion| <= 2 delta_lt");
  o.require(phase_IV <= 0, "Phase IV head motion <= 0");
  o.require(gait_length(fast) == gait, "gait bit-identical under rate doubling");
  o.require(periodic, "5 cycles agree within 1e-6 mm");
  o.require(gait > 0 && gait <= m.stroke(), "gait in (0, stroke]");
  o.note("predicted gait " + fmt("%.3f", gait) + " mm (stroke " + fmt("%.1f", m.stroke()) +
         " mm; experimental mean 22 mm), Phase II " + fmt("%.3g", phase_II) + " mm, Phase IV " +
         fmt("%.3g", phase_IV) + " mm");
  return o;
}

struct SweepCheck {
  bool diagonal = true, weak = true, monotone = true, multiple = false;
  int valid = 0;
};

SweepCheck check_sweep(const SweepResult& r) {
  SweepCheck c;
  for (const SweepCell& cell : r.grid) {
    const bool is_valid = cell.classification == CycleClass::Valid;
    c.valid += is_valid;
    if (cell.lambda_I == cell.lambda_II && is_valid) c.diagonal = false;
    if (cell.lambda_I <= 0.60 + 1e-9 && cell.lambda_II <= 0.60 + 1e-9 && is_valid) c.weak = false;
    if (cell.classification == CycleClass::MultipleJumps) c.multiple = true;
    if (!cell.error.empty()) c.monotone = false;
  }
  for (const SweepCell& a : r.grid) {
    for (const SweepCell& b : r.grid) {
      if (a.lambda_I == b.lambda_I && a.lambda_II < b.lambda_II && a.gait_length &&
          b.gait_length && *b.gait_length < *a.gait_length) {
        c.monotone = false;
      }
    }
  }
  return c;
}

Outcome parametric_sweep() {
  Outcome o;
  std::vector<double> lambdas;
  for (int k = 0; k < 10; ++k) lambdas.push_back(std::round((0.55 + 0.05 * k) * 100) / 100);
  // Segments differ only in their angle ratio.
  ModuleConfig base;
  base.segments.assign(2, KreslingDesign{8, 30.0, 0.8, 15.0});
  const SweepCheck c = check_sweep(sweep(base, lambdas));
  o.require(c.diagonal, "diagonal cells non-Valid");
  o.require(c.weak, "cells with both lambda <= 0.60 non-Valid");
  o.require(c.monotone, "gait non-decreasing in lambda_II along each row");
  o.require(c.multiple, "some cell MultipleJumps");
  o.note(std::to_string(c.valid) + "/55 Valid (N=8, P=30, L0=15 for both segments)");

  ModuleConfig t1 = kresling::testing::reference_module();
  const SweepCheck u = check_sweep(sweep(t1, lambdas));
  o.note(std::string("[info] with L0 = 15/5: diagonal ") + (u.diagonal ? "ok" : "Valid found") +
         ", weak corner " + (u.weak ? "ok" : "Valid found") + ", rows " +
         (u.monotone ? "monotone" : "non-monotone") + ", multiple " + (u.multiple ? "yes" : "no"));
  return o;
}

Outcome numerical_hygiene() {
  Outcome o;
  Gen gen(7);
  double worst_force = 0;
  for (const KreslingDesign& d : {kresling::testing::reference_segment_I(), kresling::testing::reference_segment_II()}) {
    const Segment s(d);
    const LengthWindow w = s.window();
    const double h = 1e-6 * d.side_length;
    for (int k = 0; k < 100; ++k) {
      const double l = gen.uniform(w.lo + h, w.hi - h);
      const double fd = (s.energy(l + h) - s.energy(l - h)) / (2 * h);
      worst_force = std::max(worst_force, std::abs(s.force(l) - fd) / std::abs(fd));
    }
  }
  double worst_alpha = 0;
  for (int k = 0; k < 50; ++k) {
    const DerivedGeometry g = derive_geometry(gen.bistable_design(0.51));
    worst_alpha = std::max(worst_alpha, std::abs(g.alpha_extended - (kPi - g.alpha_contracted - 2 * g.phi)));
  }
  o.require(worst_force <= 1e-6, "force vs central differences within 1e-6 relative");
  o.require(worst_alpha <= 1e-9, "alpha_extended identity within 1e-9 rad");
  o.note("force rel err " + fmt("%.2g", worst_force) + ", alpha err " + fmt("%.2g", worst_alpha) + " rad");
  return o;
}

Outcome anchor_model() {
  Outcome o;
  const DrivingModule m(kresling::testing::reference_module());
  const ActuationCycle cy =
      build_cycle(equilibrium_path(m, Direction::stretch), equilibrium_path(m, Direction::compress));
  const AnchorPair anchors = size_anchors(m, cy, 47.5);
  const AnchorSpec* specs[2] = {&anchors.tail, &anchors.head};
  for (std::size_t i = 0; i < 2; ++i) {
    const Segment& s = m.segment(i);
    const AnchorSpec& a = *specs[i];
    bool decreasing = true, equivalence = true;
    double prev = INFINITY;
    for (int k = 0; k < 1000; ++k) {
      const double l = s.l_contracted() + (s.l_extended() - s.l_contracted()) * k / 999.0;
      const double ra = anchor_radius(s, a, l);
      decreasing = decreasing && ra < prev;
      prev = ra;
      equivalence = equivalence && (is_anchored(s, a, l) == (l <= a.cutoff_length));
    }
    const std::string tag = i == 0 ? "tail" : "head";
    o.require(decreasing, tag + " R_a strictly decreasing");
    o.require(std::abs(anchor_radius(s, a, a.cutoff_length) - 47.5) <= 1e-9, tag + " sizing round trip");
    o.require(equivalence, tag + " anchored iff l <= cutoff");
    o.note(tag + " L_a = " + fmt("%.3f", a.flap_length) + " mm");
  }
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "stable states of Segment I", 1.0, stable_states_segment_I},
      {2, "bistability ordering", 1.0, bistability_ordering},
      {3, "dual-segment actuation cycle", 30.0, dual_segment_cycle},
      {4, "oracle equivalence", 300.0, oracle_equivalence},
      {5, "gait properties", 60.0, gait_properties},
      {6, "parametric sweep", 600.0, parametric_sweep},
      {7, "numerical hygiene", 60.0, numerical_hygiene},
      {8, "anchor model", 60.0, anchor_model},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < c.budget_s, "runtime budget " + fmt("%.0f s", c.budget_s));
    failures += !o.pass;
    std::printf("[%s] criterion %d: %s (%.2f s) -- %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
