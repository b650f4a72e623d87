#include <gtest/gtest.h>

#include <cmath>

#include "sdtg/quadrature.hpp"

namespace sdtg {
namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

/// Mean of l0^a l1^b l2^c over the reference triangle: 2 a! b! c! / (a+b+c+2)!.
double barycentric_moment(int a, int b, int c) {
  return 2.0 * factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 2);
}

void check_triangle_rule(const TriangleRule& rule, int degree) {
  ASSERT_EQ(rule.points.size(), rule.weights.size());
  EXPECT_EQ(rule.degree, degree);
  double sum = 0.0;
  for (const double w : rule.weights) {
    EXPECT_GT(w, 0.0);
    sum += w;
  }
  EXPECT_NEAR(sum, 1.0, 1e-14);
  for (const auto& p : rule.points) EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-14);
  for (int a = 0; a <= degree; ++a) {
    for (int b = 0; a + b <= degree; ++b) {
      for (int c = 0; a + b + c <= degree; ++c) {
        double q = 0.0;
        for (std::size_t i = 0; i < rule.points.size(); ++i) {
          const auto& l = rule.points[i];
          q += rule.weights[i] * std::pow(l[0], a) * std::pow(l[1], b) * std::pow(l[2], c);
        }
        EXPECT_NEAR(q, barycentric_moment(a, b, c), 1e-14) << a << b << c;
      }
    }
  }
}

TEST(Quadrature, SevenPointRuleExactToDegreeFive) {
  check_triangle_rule(triangle_rule_deg5(), 5);
  EXPECT_EQ(triangle_rule_deg5().points.size(), 7u);
}

TEST(Quadrature, TwelvePointRuleExactToDegreeSix) {
  check_triangle_rule(triangle_rule_deg6(), 6);
  EXPECT_EQ(triangle_rule_deg6().points.size(), 12u);
}

TEST(Quadrature, SevenPointRuleNotExactForDegreeSix) {
  const auto& rule = triangle_rule_deg5();
  double q = 0.0;
  for (std::size_t i = 0; i < rule.points.size(); ++i) q += rule.weights[i] * std::pow(rule.points[i][0], 6);
  EXPECT_GT(std::abs(q - barycentric_moment(6, 0, 0)), 1e-8);
}

TEST(Quadrature, GaussSegmentExactToDegreeNine) {
  const auto& rule = gauss_segment5();
  ASSERT_EQ(rule.points.size(), 5u);
  EXPECT_EQ(rule.degree, 9);
  for (int n = 0; n <= 9; ++n) {
    double q = 0.0;
    for (std::size_t i = 0; i < rule.points.size(); ++i) q += rule.weights[i] * std::pow(rule.points[i], n);
    EXPECT_NEAR(q, 1.0 / (n + 1), 1e-15) << n;
  }
  for (std::size_t i = 0; i < rule.points.size(); ++i) {
    EXPECT_GT(rule.weights[i], 0.0);
    EXPECT_GT(rule.points[i], 0.0);
    EXPECT_LT(rule.points[i], 1.0);
  }
}

}  // namespace
}  // namespace sdtg
