#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "vista/trajectory/quintic.hpp"

using namespace vista;

namespace {

BoundaryState random_state(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> p(-100, 100), v(-20, 20), a(-5, 5);
  return {{p(gen), p(gen)}, {v(gen), v(gen)}, {a(gen), a(gen)}};
}

// Reference: solve the 6x6 boundary system directly.
Eigen::Matrix<double, 6, 1> solve_dense(double p0, double v0, double a0, double p1, double v1, double a1, double T) {
  Eigen::Matrix<double, 6, 6> M = Eigen::Matrix<double, 6, 6>::Zero();
  M(0, 0) = 1;
  M(1, 1) = 1;
  M(2, 2) = 2;
  for (int k = 0; k < 6; ++k) {
    M(3, k) = std::pow(T, k);
    if (k >= 1) M(4, k) = k * std::pow(T, k - 1);
    if (k >= 2) M(5, k) = k * (k - 1) * std::pow(T, k - 2);
  }
  Eigen::Matrix<double, 6, 1> b;
  b << p0, v0, a0, p1, v1, a1;
  return M.fullPivLu().solve(b);
}

}  // namespace

TEST(Quintic, HitsBoundaryConditionsExactly) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> dur(1, 10);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_state(gen), e = random_state(gen);
    const double T = dur(gen);
    const auto q = solve_quintic_segment(s, e, T);
    EXPECT_NEAR((q.position(0) - s.position).norm(), 0, 1e-9);
    EXPECT_NEAR((q.velocity(0) - s.velocity).norm(), 0, 1e-9);
    EXPECT_NEAR((q.acceleration(0) - s.acceleration).norm(), 0, 1e-9);
    EXPECT_NEAR((q.position(T) - e.position).norm(), 0, 1e-8);
    EXPECT_NEAR((q.velocity(T) - e.velocity).norm(), 0, 1e-8);
    EXPECT_NEAR((q.acceleration(T) - e.acceleration).norm(), 0, 1e-8);
  }
}

TEST(Quintic, DerivativesMatchCentralDifferences) {
  std::mt19937_64 gen(2);
  const double h = 1e-5;
  for (int i = 0; i < 50; ++i) {
    const auto q = solve_quintic_segment(random_state(gen), random_state(gen), 4.0);
    for (double t : {0.0, 1.3, 4.0}) {
      const Vec2 v_fd = (q.position(t + h) - q.position(t - h)) * (0.5 / h);
      const Vec2 a_fd = (q.velocity(t + h) - q.velocity(t - h)) * (0.5 / h);
      EXPECT_NEAR((v_fd - q.velocity(t)).norm(), 0, 1e-6);
      EXPECT_NEAR((a_fd - q.acceleration(t)).norm(), 0, 1e-6);
    }
  }
}

TEST(Quintic, ClosedFormAgreesWithDenseSolve) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> dur(0.5, 8);
  for (int i = 0; i < 50; ++i) {
    const auto s = random_state(gen), e = random_state(gen);
    const double T = dur(gen);
    const auto q = solve_quintic_segment(s, e, T);
    const auto ref = solve_dense(s.position.x, s.velocity.x, s.acceleration.x, e.position.x, e.velocity.x,
                                 e.acceleration.x, T);
    for (int k = 0; k < 6; ++k) EXPECT_NEAR(q.coeffs_x[k], ref(k), 1e-7 * (1 + std::abs(ref(k))));
  }
}

TEST(Quintic, RestToRestIsSymmetricMinimumJerkProfile) {
  const auto q = solve_quintic_segment({{0, 0}, {}, {}}, {{10, 0}, {}, {}}, 2.0);
  EXPECT_NEAR(q.position(1.0).x, 5.0, 1e-12);
  // peak speed of the 10-30-... profile is 1.875 * distance / T
  EXPECT_NEAR(q.velocity(1.0).x, 1.875 * 10 / 2.0, 1e-12);
}

TEST(Quintic, RejectsDegenerateInput) {
  const BoundaryState s{{0, 0}, {1, 0}, {}};
  EXPECT_THROW(solve_quintic_segment(s, s, 0.0), SingularSystem);
  EXPECT_THROW(solve_quintic_segment(s, s, -1.0), SingularSystem);
  EXPECT_THROW(solve_quintic_segment(s, {{NAN, 0}, {}, {}}, 1.0), SingularSystem);
}
