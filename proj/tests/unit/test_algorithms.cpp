#include <gtest/gtest.h>

#include <cmath>

#include "sdtg/algorithms.hpp"
#include "sdtg/norms.hpp"
#include "test_support.hpp"

namespace sdtg {
namespace {

using test::kPi;

FEFunction random_function(const std::shared_ptr<const FESpace>& s, std::mt19937_64& gen) {
  std::normal_distribution<double> d;
  Eigen::VectorXd c(s->dof_count());
  for (auto& v : c) v = d(gen);
  return {s, std::move(c)};
}

/// Relative coefficient distance of two functions on structurally identical spaces.
double coeff_distance(const FEFunction& a, const FEFunction& b) {
  return (a.coeffs() - b.coeffs()).norm() / a.coeffs().norm();
}

DdmState state_from(const Discretization& disc, FEFunction u, FEFunction phi) {
  return {0, TraceFunction(disc.partition, disc.trace), TraceFunction(disc.partition, disc.trace), std::move(u),
          FEFunction(disc.pressure), std::move(phi)};
}

class RobinUpdate : public ::testing::TestWithParam<ElementPair> {
 protected:
  Discretization disc = discretize(0.25, GetParam());
};

TEST_P(RobinUpdate, ZeroStateStaysZero) {
  const DdmState s = state_from(disc, FEFunction(disc.velocity), FEFunction(disc.head));
  const auto [gs, gd] = update_robin(s, PhysicalParams{}, RobinParams{0.3, 2.0});
  for (const double v : gs.values()) EXPECT_EQ(v, 0.0);
  for (const double v : gd.values()) EXPECT_EQ(v, 0.0);
}

TEST_P(RobinUpdate, NodalFormula) {
  auto gen = test::rng(21);
  DdmState s = state_from(disc, random_function(disc.velocity, gen), random_function(disc.head, gen));
  std::normal_distribution<double> d;
  for (auto& v : s.gS.values()) v = d(gen);
  for (auto& v : s.gD.values()) v = d(gen);
  const PhysicalParams pp{1.0, 2.5, 1.0, 1.0, 0.0};
  const RobinParams rp{0.5, 2.0};
  const auto [gs, gd] = update_robin(s, pp, rp);
  const auto un = trace_normal_velocity(s.uS, disc.partition);
  const auto phi = trace_scalar(s.phiD, disc.partition);
  for (std::size_t i = 0; i < gs.node_count(); ++i) {
    EXPECT_NEAR(gs.values()[i], 0.25 * s.gD.values()[i] - 1.25 * 2.5 * phi.values()[i], 1e-13);
    EXPECT_NEAR(gd.values()[i], -s.gS.values()[i] + 2.5 * un.values()[i], 1e-13);
  }
}

TEST_P(RobinUpdate, CompatibleDataIsAFixedPoint) {
  auto gen = test::rng(99);
  std::uniform_real_distribution<double> w(0.1, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    DdmState s = state_from(disc, random_function(disc.velocity, gen), random_function(disc.head, gen));
    const PhysicalParams pp{1.0, w(gen), 1.0, 1.0, 0.0};
    const RobinParams rp{w(gen), w(gen)};
    auto [gs0, gd0] = compatible_robin_data(trace_normal_velocity(s.uS, disc.partition),
                                            trace_scalar(s.phiD, disc.partition), pp, rp);
    s.gS = gs0;
    s.gD = gd0;
    const auto [gs, gd] = update_robin(s, pp, rp);
    for (std::size_t i = 0; i < gs.node_count(); ++i) {
      ASSERT_NEAR(gs.values()[i], gs0.values()[i], 1e-12 * (1.0 + std::abs(gs0.values()[i])));
      ASSERT_NEAR(gd.values()[i], gd0.values()[i], 1e-12 * (1.0 + std::abs(gd0.values()[i])));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Pairs, RobinUpdate, ::testing::Values(ElementPair::TaylorHood, ElementPair::Mini));

TEST(Stopping, ThreeFourFiveExample) {
  const auto disc = discretize(0.25, ElementPair::TaylorHood);
  const double c = 1.0 / std::sqrt(kPi);  // a constant c has L2 norm 1 on either subdomain
  const FEFunction u3 = interpolate(disc.velocity, AnalyticField::vector([c](Point) { return Vec2{3.0 * c, 0.0}; }));
  const FEFunction p4 = interpolate(disc.head, AnalyticField::scalar([c](Point) { return 4.0 * c; }));
  const DdmState prev = state_from(disc, FEFunction(disc.velocity), FEFunction(disc.head));
  const DdmState cur = state_from(disc, u3, p4);
  EXPECT_NEAR(increment_norm(prev, cur), 5.0, 1e-12);
  EXPECT_TRUE(stopping_check(prev, cur, 5.0 + 1e-9));
  EXPECT_FALSE(stopping_check(prev, cur, 4.99));
}

TEST(Ddm, ZeroProblemStopsAfterOneIncrement) {
  const auto disc = discretize(0.25, ElementPair::TaylorHood);
  const auto [state, report] = ddm_chen(disc, {}, {}, ProblemData{});
  EXPECT_TRUE(report.converged);
  EXPECT_EQ(report.N, 1);
  EXPECT_EQ(l2_norm(state.uS), 0.0);
  EXPECT_EQ(l2_norm(state.phiD), 0.0);
}

TEST(Ddm, IterationCountForSmallStokesWeight) {
  const PhysicalParams pp;
  const auto disc = discretize(0.125, ElementPair::TaylorHood);
  const auto [state, report] = ddm_chen(disc, pp, RobinParams{1.0 / 3.0, 1.0}, manufactured_forcing(pp));
  EXPECT_TRUE(report.converged);
  EXPECT_NEAR(report.N, 21, 2);
  EXPECT_LE(report.deltas.back(), 1e-6);
}

TEST(Ddm, IncrementsDecayGeometrically) {
  const PhysicalParams pp;
  const auto disc = discretize(0.125, ElementPair::TaylorHood);
  const auto [state, report] = ddm_chen(disc, pp, RobinParams{1.0 / 3.0, 1.0}, manufactured_forcing(pp));
  ASSERT_GE(report.deltas.size(), 10u);
  std::vector<double> k;
  std::vector<double> logd;
  for (std::size_t i = 2; i < report.deltas.size(); ++i) {
    k.push_back(static_cast<double>(i));
    logd.push_back(std::log(report.deltas[i]));
  }
  // Least-squares slope of log(delta) against the iteration index.
  const double n = static_cast<double>(k.size());
  double mk = 0.0;
  double ml = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    mk += k[i] / n;
    ml += logd[i] / n;
  }
  double sxx = 0.0;
  double sxy = 0.0;
  double resid = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    sxx += (k[i] - mk) * (k[i] - mk);
    sxy += (k[i] - mk) * (logd[i] - ml);
  }
  const double slope = sxy / sxx;
  for (std::size_t i = 0; i < k.size(); ++i) resid = std::max(resid, std::abs(logd[i] - ml - slope * (k[i] - mk)));
  EXPECT_LT(std::exp(slope), 1.0);
  EXPECT_LT(resid, 1.5);
}

TEST(Ddm, ConcurrentMatchesSequential) {
  const PhysicalParams pp;
  const auto disc = discretize(0.125, ElementPair::TaylorHood);
  DdmOptions seq;
  DdmOptions par;
  par.concurrent = true;
  const auto a = ddm_chen(disc, pp, {}, manufactured_forcing(pp), seq);
  const auto b = ddm_chen(disc, pp, {}, manufactured_forcing(pp), par);
  EXPECT_EQ(a.second.N, b.second.N);
  EXPECT_EQ(a.first.uS.coeffs(), b.first.uS.coeffs());
  EXPECT_EQ(a.first.phiD.coeffs(), b.first.phiD.coeffs());
}

TEST(Ddm, ConvergesToTheMonolithicSolution) {
  const PhysicalParams pp;
  const auto data = manufactured_forcing(pp);
  const auto disc = discretize(0.125, ElementPair::TaylorHood);
  DdmOptions opt;
  opt.tol = 1e-10;
  const auto [state, report] = ddm_chen(disc, pp, {}, data, opt);
  ASSERT_TRUE(report.converged);
  const auto mono = solve_monolithic(disc, pp, data);
  EXPECT_LE(l2_distance(state.uS, mono.uS), 1e-8);
  EXPECT_LE(l2_distance(state.phiD, mono.phiD), 1e-8);
  EXPECT_LE(l2_distance(state.pS, mono.pS), 1e-7);
}

TEST(Ddm, RejectsBadOptions) {
  const auto disc = discretize(0.5, ElementPair::TaylorHood);
  DdmOptions opt;
  opt.tol = 0.0;
  EXPECT_THROW((void)ddm_chen(disc, {}, {}, {}, opt), std::invalid_argument);
  opt.tol = 1e-6;
  opt.max_iter = 0;
  EXPECT_THROW((void)ddm_chen(disc, {}, {}, {}, opt), std::invalid_argument);
  EXPECT_THROW((void)ddm_chen(disc, {}, RobinParams{-1.0, 1.0}, {}), std::invalid_argument);
}

TEST(TwoGrid, EqualMeshSizesReproduceTheCoarseSolve) {
  const PhysicalParams pp;
  const auto data = manufactured_forcing(pp);
  const auto r = tgddm1(0.25, 0.25, ElementPair::TaylorHood, pp, {}, data);
  EXPECT_LE(coeff_distance(r.coarse.uS, r.fine.uS), 1e-10);
  EXPECT_LE(coeff_distance(r.coarse.phiD, r.fine.phiD), 1e-10);
}

TEST(TwoGrid, FineStepDoesNotDependOnRobinWeights) {
  const PhysicalParams pp;
  const auto data = manufactured_forcing(pp);
  DdmOptions opt;
  opt.tol = 1e-10;
  const auto a = tgddm2(0.25, 0.125, ElementPair::TaylorHood, pp, RobinParams{1.0, 1.0}, data, opt);
  const auto b = tgddm2(0.25, 0.125, ElementPair::TaylorHood, pp, RobinParams{0.5, 2.0}, data, opt);
  EXPECT_LE(coeff_distance(a.fine.uS, b.fine.uS), 1e-8);
  EXPECT_LE(coeff_distance(a.fine.phiD, b.fine.phiD), 1e-8);
}

TEST(TwoGrid, CtgWithZeroDataIsZero) {
  const auto r = ctg(0.25, 0.125, ElementPair::TaylorHood, {}, ProblemData{});
  EXPECT_EQ(l2_norm(r.fine.uS), 0.0);
  EXPECT_EQ(l2_norm(r.fine.phiD), 0.0);
  EXPECT_EQ(r.coarse_report.N, 0);
}

TEST(TwoGrid, MethodsAgreeOnTheErrorLevel) {
  const PhysicalParams pp;
  const auto data = manufactured_forcing(pp);
  const ExactSolution exact{pp.k};
  const double H = 1.0 / 9.0;
  const double h = 1.0 / 27.0;
  const auto e2 = compute_errors(tgddm2(H, h, ElementPair::TaylorHood, pp, {}, data), exact);
  const auto e1 = compute_errors(tgddm1(H, h, ElementPair::TaylorHood, pp, {}, data), exact);
  const auto ec = compute_errors(ctg(H, h, ElementPair::TaylorHood, pp, data), exact);
  EXPECT_NEAR(e1.u_h1 / e2.u_h1, 1.0, 0.1);
  EXPECT_NEAR(e1.phi_h1 / e2.phi_h1, 1.0, 0.1);
  EXPECT_NEAR(ec.u_h1 / e2.u_h1, 1.0, 0.1);
  EXPECT_NEAR(ec.phi_h1 / e2.phi_h1, 1.0, 0.1);
}

TEST(TwoGrid, RejectsInvertedSizes) {
  EXPECT_THROW((void)tgddm2(0.125, 0.25, ElementPair::TaylorHood, {}, {}, {}), std::invalid_argument);
  EXPECT_THROW((void)ctg(0.25, 0.0, ElementPair::TaylorHood, {}, {}), std::invalid_argument);
}

}  // namespace
}  // namespace sdtg
