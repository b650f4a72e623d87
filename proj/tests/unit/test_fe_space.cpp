#include <gtest/gtest.h>

#include <cmath>

#include "sdtg/fe_space.hpp"
#include "sdtg/norms.hpp"
#include "test_support.hpp"

namespace sdtg {
namespace {

using test::kPi;

std::shared_ptr<const Mesh> stokes_mesh(double H) { return build_coupled_meshes(H).stokes; }

std::shared_ptr<const FESpace> space(double H, ElementKind kind, int comps) {
  return std::make_shared<const FESpace>(stokes_mesh(H), kind, comps, std::vector<BoundaryTag>{BoundaryTag::GammaS});
}

TEST(FESpaceTest, DofCountsOnQuarterMesh) {
  EXPECT_EQ(space(0.25, ElementKind::P2, 2)->dof_count(), 486);
  EXPECT_EQ(space(0.25, ElementKind::P1, 1)->dof_count(), 70);
  EXPECT_EQ(space(0.25, ElementKind::P1Bubble, 2)->dof_count(), 348);
}

TEST(FESpaceTest, ScalarBubbleSpaceRejected) {
  EXPECT_THROW((void)space(0.25, ElementKind::P1Bubble, 1), std::invalid_argument);
}

TEST(FESpaceTest, DirichletDofsLieOnTaggedBoundary) {
  const auto s = space(0.25, ElementKind::P2, 2);
  for (const int d : s->dirichlet_dofs()) {
    const Point p = s->scalar_dof_points()[d / 2];
    const bool on_boundary = p.x == 0.0 || p.x == kPi || std::abs(p.y - 1.0) < 1e-15 || p.y == 0.0;
    EXPECT_TRUE(on_boundary);
    EXPECT_TRUE(s->is_dirichlet(d));
  }
  // Interface DOFs stay free apart from the two corners shared with Gamma_S.
  int free_iface = 0;
  for (const int d : s->dofs_on(BoundaryTag::Interface)) free_iface += s->is_dirichlet(d) ? 0 : 1;
  EXPECT_EQ(free_iface, 2 * (2 * 13 - 1));
}

class InterpolationExactness : public ::testing::TestWithParam<ElementKind> {};

TEST_P(InterpolationExactness, AffineFieldsReproduced) {
  const ElementKind kind = GetParam();
  const int comps = kind == ElementKind::P1Bubble ? 2 : 1;
  const auto s = space(1.0 / 7.0, kind, comps);
  const auto affine = [](Point p) { return Vec2{1.5 - 2.0 * p.x + 0.5 * p.y, -3.0 + p.y}; };
  const auto f = comps == 2 ? AnalyticField::vector(affine)
                            : AnalyticField::scalar([&](Point p) { return affine(p)[0]; });
  const FEFunction fh = interpolate(s, f);
  auto gen = test::rng();
  std::uniform_int_distribution<int> cell(0, static_cast<int>(s->mesh().cell_count()) - 1);
  for (int i = 0; i < 200; ++i) {
    const int c = cell(gen);
    const Barycentric l = test::random_barycentric(gen);
    const Point p = cell_geometry(s->mesh(), c).map(l);
    const Vec2 v = eval_fe(fh, c, l);
    const Vec2 e = f.value(p);
    for (int k = 0; k < comps; ++k) EXPECT_NEAR(v[k], e[k], 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Kinds, InterpolationExactness,
                         ::testing::Values(ElementKind::P1, ElementKind::P2, ElementKind::P1Bubble),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(FESpaceTest, ConstantInterpolationExact) {
  const auto s = space(0.25, ElementKind::P2, 1);
  const FEFunction fh = interpolate(s, AnalyticField::scalar([](Point) { return 4.25; }));
  for (int c = 0; c < static_cast<int>(s->mesh().cell_count()); ++c) {
    EXPECT_NEAR(eval_fe(fh, c, {0.2, 0.3, 0.5})[0], 4.25, 1e-14);
  }
}

TEST(FESpaceTest, PartitionOfUnityAtRandomPoints) {
  auto gen = test::rng(7);
  for (const ElementKind kind : {ElementKind::P1, ElementKind::P2}) {
    for (int i = 0; i < 200; ++i) {
      const auto v = basis_values(kind, test::random_barycentric(gen));
      double sum = 0.0;
      for (int k = 0; k < local_dof_count(kind); ++k) sum += v[k];
      EXPECT_NEAR(sum, 1.0, 1e-14);
    }
  }
}

TEST(FESpaceTest, GradientsSumToZero) {
  const Mesh m = build_rect_mesh({0, 1, 0, 1}, 3, 2, Diagonal::NE, Region::Stokes);
  const CellGeometry g = cell_geometry(m, 3);
  auto gen = test::rng(11);
  for (const ElementKind kind : {ElementKind::P1, ElementKind::P2}) {
    for (int i = 0; i < 50; ++i) {
      const auto grads = basis_gradients(kind, test::random_barycentric(gen), g);
      Vec2 sum{0.0, 0.0};
      for (int k = 0; k < local_dof_count(kind); ++k) {
        sum[0] += grads[k][0];
        sum[1] += grads[k][1];
      }
      EXPECT_NEAR(sum[0], 0.0, 1e-12);
      EXPECT_NEAR(sum[1], 0.0, 1e-12);
    }
  }
}

TEST(FESpaceTest, BubbleVanishesOnEdgesAndPeaksAtCentroid) {
  auto gen = test::rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double t = u(gen);
    for (const Barycentric l : {Barycentric{0.0, t, 1.0 - t}, Barycentric{t, 0.0, 1.0 - t}, Barycentric{t, 1.0 - t, 0.0}}) {
      EXPECT_EQ(basis_values(ElementKind::P1Bubble, l)[3], 0.0);
    }
  }
  EXPECT_NEAR(basis_values(ElementKind::P1Bubble, {1.0 / 3, 1.0 / 3, 1.0 / 3})[3], 1.0, 1e-14);
}

TEST(FESpaceTest, P2NodalBasisIsKronecker) {
  const std::array<Barycentric, 6> nodes{Barycentric{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0.5, 0.5, 0}, {0, 0.5, 0.5}, {0.5, 0, 0.5}};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto v = basis_values(ElementKind::P2, nodes[i]);
    for (std::size_t j = 0; j < nodes.size(); ++j) EXPECT_NEAR(v[j], i == j ? 1.0 : 0.0, 1e-15);
  }
}

TEST(FESpaceTest, P1InterpolationErrorSlope) {
  std::vector<double> h;
  std::vector<double> err;
  const auto exact = AnalyticField::scalar([](Point p) { return std::sin(p.x) * std::exp(p.y); },
                                           [](Point p) {
                                             return Vec2{std::cos(p.x) * std::exp(p.y), std::sin(p.x) * std::exp(p.y)};
                                           });
  for (const int n : {4, 8, 16, 32}) {
    const auto s = space(1.0 / n, ElementKind::P1, 1);
    h.push_back(1.0 / n);
    err.push_back(error_norm(interpolate(s, exact), exact, NormKind::L2).error);
  }
  EXPECT_NEAR(fit_rate(h, err), 2.0, 0.1);
}

TEST(FESpaceTest, CheckedEvaluationRejectsBadInput) {
  const auto s = space(0.25, ElementKind::P1, 1);
  const FEFunction f(s);
  EXPECT_THROW((void)eval_fe(f, -1, {1, 0, 0}), std::invalid_argument);
  EXPECT_THROW((void)eval_fe(f, static_cast<int>(s->mesh().cell_count()), {1, 0, 0}), std::invalid_argument);
  EXPECT_THROW((void)eval_fe(f, 0, {0.5, 0.5, 0.5}), std::invalid_argument);
  EXPECT_NO_THROW((void)eval_fe(f, 0, {0.25, 0.25, 0.5}));
}

TEST(FESpaceTest, CoefficientLengthChecked) {
  const auto s = space(0.25, ElementKind::P1, 1);
  EXPECT_THROW(FEFunction(s, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

}  // namespace
}  // namespace sdtg
