#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "resbasis/candidates.hpp"
#include "resbasis/errors.hpp"
#include "resbasis/quadrature.hpp"

using namespace resbasis;

namespace {

const ShellGeometry kShell;
constexpr double kPi = std::numbers::pi;

// S_par = a r, S_perp = 3 a r / 2: divergence free with constant derivatives.
RadialField linear_field(double a) {
  return RadialField(RadialProfile([a](double r) { return a * r; }, [a](double) { return a; }),
                     RadialProfile([a](double r) { return 1.5 * a * r; }, [a](double) { return 1.5 * a; }),
                     kShell);
}

}  // namespace

TEST(Integrate, ElementaryIntegrals) {
  const QuadratureSpec spec;
  EXPECT_NEAR(integrate([](double) { return 1.0; }, kShell, {}, spec), 0.5, 1e-14);
  EXPECT_NEAR(integrate([](double r) { return r * r; }, kShell, {}, spec), 7.0 / 24.0, 1e-14);
  EXPECT_NEAR(integrate([](double r) { return std::sin(2.0 * kPi * r); }, kShell, {}, spec),
              -1.0 / kPi, 1e-13);
}

TEST(Integrate, SplitsAtBreakpoints) {
  const QuadratureSpec spec;
  const std::vector<double> bp{0.7};
  auto step = [](double r) { return r < 0.7 ? 1.0 : 3.0; };
  EXPECT_NEAR(integrate(step, kShell, bp, spec), 0.2 + 0.9, 1e-14);
}

TEST(Integrate, OscillatoryIntegrand) {
  const QuadratureSpec spec;
  const double w = 200.0;
  const double exact = (std::cos(0.5 * w) - std::cos(w)) / w;
  EXPECT_NEAR(integrate([w](double r) { return std::sin(w * r); }, kShell, {}, spec), exact, 1e-12);
}

TEST(Integrate, BudgetExhaustionThrows) {
  QuadratureSpec spec;
  spec.max_panels = 16;
  spec.nodes_per_panel = 4;
  try {
    integrate([](double r) { return std::sin(5000.0 * r); }, kShell, {}, spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNonConvergence);
  }
}

TEST(Integrate, SpecValidation) {
  QuadratureSpec spec;
  spec.nodes_per_panel = 0;
  EXPECT_THROW(integrate([](double) { return 1.0; }, kShell, {}, spec), Error);
}

TEST(GaussLegendre, ExactForPolynomialsUpToDegree31) {
  const auto& rule = gauss_legendre(16);
  ASSERT_EQ(rule.nodes.size(), 16u);
  for (int d = 0; d <= 31; ++d) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], d);
    const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
    EXPECT_NEAR(s, exact, 1e-14) << "degree " << d;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 32);
  EXPECT_GT(std::abs(s - 2.0 / 33.0), 1e-12);
}

TEST(CompositeNodes, WeightsSumToSegmentLengths) {
  const std::vector<double> bp{0.6, 0.9};
  const auto set = composite_nodes(kShell, bp, 3, 8);
  EXPECT_EQ(set.r.size(), 3u * 3u * 8u);
  double total = 0.0;
  for (double w : set.w) total += w;
  EXPECT_NEAR(total, 0.5, 1e-15);
  for (double r : set.r) {
    EXPECT_GT(r, 0.5);
    EXPECT_LT(r, 1.0);
  }
}

TEST(NormWeight, ParseAndPrint) {
  EXPECT_EQ(parse_norm_weight("r2"), NormWeight::kR2);
  EXPECT_EQ(parse_norm_weight(to_string(NormWeight::kPaperLiteral)), NormWeight::kPaperLiteral);
  EXPECT_EQ(parse_norm_weight(to_string(NormWeight::kR2)), NormWeight::kR2);
  EXPECT_THROW(parse_norm_weight("r3"), Error);
  EXPECT_DOUBLE_EQ(radial_weight(NormWeight::kR2, 0.5), 0.25);
  EXPECT_DOUBLE_EQ(radial_weight(NormWeight::kPaperLiteral, 0.5), 1.0);
}

TEST(L2Inner, LinearFieldClosedForm) {
  const QuadratureSpec spec;
  // 4 pi int (r^2 + 2 * 9 r^2 / 4) r^2 dr = 4 pi * 5.5 * (1 - 1/32) / 5
  const double exact = 4.0 * kPi * 5.5 * (31.0 / 32.0) / 5.0;
  EXPECT_NEAR(l2_inner(linear_field(1.0), linear_field(1.0), spec), exact, 1e-12);
  QuadratureSpec flat;
  flat.weight = NormWeight::kPaperLiteral;
  EXPECT_NEAR(l2_inner(linear_field(1.0), linear_field(1.0), flat), 4.0 * kPi * 5.5 * 7.0 / 24.0, 1e-12);
}

TEST(L2Inner, ZeroFieldAndMismatch) {
  const QuadratureSpec spec;
  EXPECT_EQ(l2_inner(RadialField::zero(kShell), linear_field(2.0), spec), 0.0);
  const auto other = RadialField::zero(ShellGeometry(0.25, 1.0));
  try {
    l2_inner(other, linear_field(1.0), spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kGeometryMismatch);
  }
}

TEST(L2Inner, PiecewiseTarget) {
  const QuadratureSpec spec;
  const auto field = shrinkfit_field({});
  const ShrinkFitSpec s;
  auto density = [&](double r) {
    const StressPair v = r < s.r_m ? shrinkfit_inner(s, r) : shrinkfit_outer(s, r);
    return (v.par * v.par + 2.0 * v.perp * v.perp) * r * r;
  };
  const std::vector<double> bp{s.r_m};
  const double ref = 4.0 * kPi * integrate(density, kShell, bp, spec);
  EXPECT_NEAR(l2_inner(field, field, spec), ref, 1e-14);
}

TEST(H1, RefusesDiscontinuousFields) {
  try {
    h1_error_sq(shrinkfit_field({}), QuadratureSpec{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDiscontinuousField);
  }
}

TEST(H1, DominatesL2) {
  const QuadratureSpec spec;
  const auto f = thermoelastic_field({});
  const double l2 = l2_inner(f, f, spec);
  const double h1 = h1_error_sq(f, spec);
  EXPECT_GT(h1, l2);
  // |Grad S|^2 = 2 (S_par'^2 + S_perp'^2) for the linear field: 2 (1 + 9/4) = 6.5
  const auto lin = linear_field(1.0);
  const double grad = 4.0 * kPi * 6.5 * 7.0 / 24.0;
  EXPECT_NEAR(h1_error_sq(lin, spec) - l2_inner(lin, lin, spec), grad, 1e-12);
}

TEST(Energy, ZeroField) {
  EXPECT_EQ(energy(RadialField::zero(kShell), 2.0, QuadratureSpec{}), 0.0);
}

TEST(Energy, LinearFieldClosedForm) {
  const QuadratureSpec spec;
  const auto f = linear_field(1.0);
  // S_par' = 1, S_perp' = 3/2: (1 + 3)^2 / 2 = 8 and 3/2 - 2 * 3/2 = -3/2.
  for (double p : {0.0, 1.0, 2.5, 5.0}) {
    const double exact = 0.5 * 4.0 * kPi * (8.0 - 1.5 * p) * 7.0 / 24.0;
    EXPECT_NEAR(energy(f, p, spec), exact, 1e-12) << "p = " << p;
  }
}

TEST(Energy, PolarizationIsBilinear) {
  const QuadratureSpec spec;
  const auto a = linear_field(1.0);
  const auto b = thermoelastic_field({});
  const double p = 3.0;
  EXPECT_NEAR(energy_inner(a, b.scaled(2.0), p, spec), 2.0 * energy_inner(a, b, p, spec), 1e-12);
  EXPECT_NEAR(energy_inner(a, a, p, spec), 2.0 * energy(a, p, spec), 1e-12);
}
