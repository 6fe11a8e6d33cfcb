#include <gtest/gtest.h>

#include <cmath>

#include "kresling/anchor.hpp"
#include "kresling/errors.hpp"
#include "support/generators.hpp"

namespace kresling {
namespace {

using testing::Gen;

// R + L_a * cos(beta) with sin(beta) = l / b, from the closed-form kinematics.
double radius_oracle(const Segment& s, double flap, double l) {
  const double alpha = s.length_to_alpha(l);
  const double r = s.geometry().circumradius;
  const double b = std::sqrt(2 * r * r * (1 - std::cos(alpha)) + l * l);
  return r + flap * std::cos(std::asin(l / b));
}

TEST(Anchor, SizingRoundTripReference) {
  const Segment s(testing::reference_segment_I());
  const AnchorSpec a = size_anchor(s, 47.5, 39.9, Attachment::tail);
  EXPECT_GT(a.flap_length, 0.0);
  EXPECT_EQ(a.attachment, Attachment::tail);
  EXPECT_NEAR(anchor_radius(s, a, 39.9), 47.5, 1e-9);
  EXPECT_NEAR(anchor_radius(s, a, 30.0), radius_oracle(s, a.flap_length, 30.0), 1e-9);
  EXPECT_TRUE(is_anchored(s, a, 39.9));
  EXPECT_TRUE(is_anchored(s, a, 15.0));
  EXPECT_FALSE(is_anchored(s, a, s.l_extended()));
  EXPECT_GT(anchor_radius(s, a, 15.0), anchor_radius(s, a, 39.9));

  const Segment two(testing::reference_segment_II());
  EXPECT_GT(size_anchor(two, 47.5, 17.5, Attachment::head).flap_length, 0.0);
}

TEST(Anchor, InfeasibleAndInvalid) {
  const Segment s(testing::reference_segment_I());
  const double r = s.geometry().circumradius;
  EXPECT_THROW(size_anchor(s, r, 30.0, Attachment::tail), InfeasibleError);
  EXPECT_THROW(size_anchor(s, r - 1, 30.0, Attachment::tail), InfeasibleError);
  EXPECT_THROW(size_anchor(s, 47.5, 200.0, Attachment::tail), RangeError);
  AnchorSpec bad{0.0, 47.5, Attachment::tail, 30.0};
  EXPECT_THROW(anchor_radius(s, bad, 30.0), InvalidArgument);
  AnchorSpec ok = size_anchor(s, 47.5, 30.0, Attachment::tail);
  EXPECT_THROW(anchor_radius(s, ok, 200.0), RangeError);
}

TEST(Anchor, FlapScalesWithClearance) {
  const Segment s(testing::reference_segment_I());
  const double r = s.geometry().circumradius;
  const double a1 = size_anchor(s, r + 4.0, 35.0, Attachment::tail).flap_length;
  const double a2 = size_anchor(s, r + 8.0, 35.0, Attachment::tail).flap_length;
  EXPECT_NEAR(a2, 2 * a1, 1e-12);
}

TEST(Anchor, GeometryOverloadsAgree) {
  const DerivedGeometry g = derive_geometry(testing::reference_segment_I());
  const Segment s(g);
  const AnchorSpec a = size_anchor(g, 47.5, 35.0, Attachment::head);
  EXPECT_EQ(a, size_anchor(s, 47.5, 35.0, Attachment::head));
  EXPECT_EQ(anchor_radius(g, a, 20.0), anchor_radius(s, a, 20.0));
  EXPECT_EQ(is_anchored(g, a, 20.0), is_anchored(s, a, 20.0));
}

TEST(AnchorProperty, MonotoneRadiusAndExactCutoff) {
  Gen gen(0xa11c);
  for (int trial = 0; trial < 40; ++trial) {
    const Segment s(gen.bistable_design());
    const double lo = s.l_contracted(), hi = s.l_extended();
    const double cutoff = gen.uniform(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo));
    const double pipe = s.geometry().circumradius + gen.uniform(0.5, 15.0);
    const AnchorSpec a = size_anchor(s, pipe, cutoff, Attachment::tail);
    EXPECT_NEAR(anchor_radius(s, a, cutoff), pipe, 1e-9);
    double prev = INFINITY;
    for (int k = 0; k < 1000; ++k) {
      const double l = lo + (hi - lo) * k / 999.0;
      const double ra = anchor_radius(s, a, l);
      EXPECT_LT(ra, prev) << l;
      prev = ra;
      EXPECT_EQ(is_anchored(s, a, l), l <= cutoff) << l;
    }
  }
}

}  // namespace
}  // namespace kresling
