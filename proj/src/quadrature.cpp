#include "sdtg/quadrature.hpp"

#include <cmath>

namespace sdtg {

namespace {

void add_orbit3(TriangleRule& rule, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  rule.points.push_back({a, a, b});
  rule.points.push_back({a, b, a});
  rule.points.push_back({b, a, a});
  for (int i = 0; i < 3; ++i) rule.weights.push_back(w);
}

void add_orbit6(TriangleRule& rule, double a, double b, double w) {
  const double c = 1.0 - a - b;
  rule.points.push_back({a, b, c});
  rule.points.push_back({a, c, b});
  rule.points.push_back({b, a, c});
  rule.points.push_back({b, c, a});
  rule.points.push_back({c, a, b});
  rule.points.push_back({c, b, a});
  for (int i = 0; i < 6; ++i) rule.weights.push_back(w);
}

TriangleRule make_deg5() {
  // Radon's 7-point formula.
  TriangleRule rule;
  rule.degree = 5;
  rule.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  rule.weights.push_back(9.0 / 40.0);
  const double s15 = std::sqrt(15.0);
  add_orbit3(rule, (6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
  add_orbit3(rule, (6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
  return rule;
}

TriangleRule make_deg6() {
  // Dunavant degree-6, 12 points.
  TriangleRule rule;
  rule.degree = 6;
  add_orbit3(rule, 0.249286745170910421291638553107, 0.116786275726379366030690038706);
  add_orbit3(rule, 0.063089014491502228340331602870, 0.050844906370206816920936809106);
  add_orbit6(rule, 0.053145049844816947353249671631, 0.310352451033784405416607733956,
             0.082851075618373575193553456421);
  return rule;
}

SegmentRule make_gauss5() {
  SegmentRule rule;
  rule.degree = 9;
  const double n1 = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
  const double n2 = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
  const double w0 = 128.0 / 225.0;
  const double w1 = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
  const double w2 = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
  const double nodes[5] = {-n2, -n1, 0.0, n1, n2};
  const double weights[5] = {w2, w1, w0, w1, w2};
  for (int i = 0; i < 5; ++i) {
    rule.points.push_back(0.5 * (nodes[i] + 1.0));
    rule.weights.push_back(0.5 * weights[i]);
  }
  return rule;
}

}  // namespace

const TriangleRule& triangle_rule_deg5() {
  static const TriangleRule rule = make_deg5();
  return rule;
}

const TriangleRule& triangle_rule_deg6() {
  static const TriangleRule rule = make_deg6();
  return rule;
}

const SegmentRule& gauss_segment5() {
  static const SegmentRule rule = make_gauss5();
  return rule;
}

}  // namespace sdtg
