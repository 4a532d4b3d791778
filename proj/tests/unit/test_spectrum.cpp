#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nodalscope/errors.hpp"
#include "nodalscope/spectrum.hpp"
#include "oracles.hpp"

using namespace nodalscope;
using std::numbers::pi;

namespace {

double norm_sq(const EigenfunctionSpec& s) {
  double t = 0.0;
  for (const auto& m : s.modes()) t += m.a * m.a + m.b * m.b;
  return 0.5 * t;
}

}  // namespace

TEST(Lattice, SmallExamples) {
  auto m1 = enumerate_lattice(1, 2);
  ASSERT_EQ(m1.size(), 2u);
  EXPECT_EQ(m1[0].k, (std::array<int, 3>{0, 1, 0}));
  EXPECT_EQ(m1[1].k, (std::array<int, 3>{1, 0, 0}));
  EXPECT_EQ(enumerate_lattice(25, 2).size(), 6u);
  EXPECT_TRUE(enumerate_lattice(3, 2).empty());
  EXPECT_EQ(enumerate_lattice(3, 3).size(), 4u);
}

TEST(Lattice, MatchesBruteForce) {
  for (int n : {2, 3}) {
    for (long m = 1; m <= (n == 2 ? 1200 : 150); ++m) {
      auto got = enumerate_lattice(m, n);
      auto want = oracle::brute_lattice(m, n);
      ASSERT_EQ(got.size(), want.size()) << "m=" << m << " n=" << n;
      for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_EQ(got[i].k, want[i]);
        EXPECT_EQ(got[i].norm2(), m);
        EXPECT_TRUE(got[i].is_canonical());
      }
    }
  }
  EXPECT_EQ(enumerate_lattice(1105, 2).size(), 16u);
  EXPECT_EQ(enumerate_lattice(325, 2).size(), 12u);
}

TEST(Spectrum, RandomIsDeterministicAndNormalized) {
  TorusModel t2(2), t3(3);
  auto a = random_eigenfunction(25, t2, 7);
  auto b = random_eigenfunction(25, t2, 7);
  EXPECT_TRUE(a == b);
  EXPECT_EQ(a.modes().size(), 6u);
  EXPECT_FALSE(a == random_eigenfunction(25, t2, 8));
  EXPECT_DOUBLE_EQ(a.lambda(), 4 * pi * pi * 25);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    EXPECT_NEAR(norm_sq(random_eigenfunction(1105, t2, seed)), 1.0, 1e-14);
    EXPECT_NEAR(norm_sq(random_eigenfunction(27, t3, seed)), 1.0, 1e-14);
  }
  EXPECT_THROW(random_eigenfunction(3, t2, 0), NoModesError);
  EXPECT_THROW(random_eigenfunction(7, t3, 0), NoModesError);
}

TEST(Spectrum, SpecValidation) {
  TorusModel t2(2);
  const double s2 = std::sqrt(2.0);
  Mode good{{{1, 0, 0}, 2}, 0.0, s2};
  EXPECT_NO_THROW(EigenfunctionSpec(t2, 1, {good}));
  EXPECT_THROW(EigenfunctionSpec(t2, 2, {good}), InvalidSpecError);
  Mode neg{{{-1, 0, 0}, 2}, 0.0, s2};
  EXPECT_THROW(EigenfunctionSpec(t2, 1, {neg}), InvalidSpecError);
  Mode weak{{{1, 0, 0}, 2}, 0.0, 1.0};
  EXPECT_THROW(EigenfunctionSpec(t2, 1, {weak}), InvalidSpecError);
  EXPECT_THROW(EigenfunctionSpec(t2, 1, {}), InvalidSpecError);
  Mode half{{{1, 0, 0}, 2}, 1.0, 0.0};
  EXPECT_THROW(EigenfunctionSpec(t2, 1, {half, half}), InvalidSpecError);
}

TEST(Spectrum, EvaluateExamples) {
  auto s = sine_mode(1);
  EXPECT_NEAR(evaluate(s, Point(0.25, 0)), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(evaluate(s, Point(0, 0.7)), 0.0, 1e-15);
  auto p = product_mode();
  for (double x : {0.1, 0.3, 0.77})
    for (double y : {0.05, 0.4, 0.9})
      EXPECT_NEAR(evaluate(p, Point(x, y)), 2 * std::sin(2 * pi * x) * std::sin(2 * pi * y), 1e-14);
}

TEST(Spectrum, EvaluateMatchesDirectSum) {
  std::mt19937_64 rng(3);
  for (int n : {2, 3}) {
    auto s = random_eigenfunction(n == 2 ? 25 : 29, TorusModel(n), 1);
    auto terms = oracle::terms_of(s);
    for (int it = 0; it < 1000; ++it) {
      auto x = oracle::random_point(rng, n);
      EXPECT_NEAR(evaluate(s, Point(x, n)), oracle::direct_sum(terms, x, n), 1e-13);
    }
  }
}

TEST(Spectrum, GradientExamples) {
  auto g = evaluate_gradient(sine_mode(1), Point(0, 0));
  EXPECT_NEAR(g[0], 2 * std::sqrt(2.0) * pi, 1e-13);
  EXPECT_NEAR(g[1], 0.0, 1e-15);
}

TEST(Spectrum, GradientMatchesFiniteDifference) {
  std::mt19937_64 rng(4);
  auto s = random_eigenfunction(25, TorusModel(2), 2);
  auto terms = oracle::terms_of(s);
  const double h = 1e-6;
  for (int it = 0; it < 200; ++it) {
    auto x = oracle::random_point(rng, 2);
    auto g = evaluate_gradient(s, Point(x, 2));
    double norm = std::hypot(g[0], g[1]);
    for (int d = 0; d < 2; ++d) {
      auto xp = x, xm = x;
      xp[d] += h;
      xm[d] -= h;
      const double fd = (oracle::direct_sum(terms, xp, 2) - oracle::direct_sum(terms, xm, 2)) / (2 * h);
      EXPECT_NEAR(g[d], fd, 1e-6 * std::max(1.0, norm));
    }
  }
}

TEST(Spectrum, GradientVanishesAtRefinedMax) {
  auto s = random_eigenfunction(25, TorusModel(2), 9);
  // coarse max, then Newton on the gradient with the exact Hessian
  Vec best{};
  double bv = -1e9;
  for (int i = 0; i < 200; ++i)
    for (int j = 0; j < 200; ++j) {
      Vec x{i / 200.0, j / 200.0, 0};
      double v = s.field().value(x);
      if (v > bv) bv = v, best = x;
    }
  for (int it = 0; it < 30; ++it) {
    Jet J = s.field().jet(best);
    const double a = J.hess[0][0], b = J.hess[0][1], d = J.hess[1][1];
    const double det = a * d - b * b;
    best[0] -= (d * J.grad[0] - b * J.grad[1]) / det;
    best[1] -= (-b * J.grad[0] + a * J.grad[1]) / det;
  }
  Vec g = s.field().gradient(best);
  EXPECT_LT(std::hypot(g[0], g[1]), 1e-8);
}

TEST(Spectrum, LaplacianResidual) {
  auto s = sine_mode(1);
  const Point x(0.3, 0.3);
  const double r1 = laplacian_residual(s, x, 1e-3);
  EXPECT_LT(r1, 4 * pi * pi * std::pow(2 * pi * 1e-3, 2) * 2);
  const double r2 = laplacian_residual(s, x, 5e-4);
  EXPECT_NEAR(r1 / r2, 4.0, 0.05);
  EXPECT_THROW(laplacian_residual(s, x, 0.0), RangeError);
  auto rnd = random_eigenfunction(325, TorusModel(2), 1);
  const double q1 = laplacian_residual(rnd, Point(0.41, 0.13), 1e-3);
  const double q2 = laplacian_residual(rnd, Point(0.41, 0.13), 5e-4);
  EXPECT_NEAR(q1 / q2, 4.0, 0.1);
  auto r3 = random_eigenfunction(29, TorusModel(3), 1);
  const double t1 = laplacian_residual(r3, Point(0.2, 0.6, 0.9), 1e-3);
  const double t2 = laplacian_residual(r3, Point(0.2, 0.6, 0.9), 5e-4);
  EXPECT_NEAR(t1 / t2, 4.0, 0.1);
}

TEST(Spectrum, LaplacianResidualTruncationBound) {
  std::mt19937_64 rng(8);
  auto s = random_eigenfunction(100, TorusModel(2), 3);
  const double lam = s.lambda(), h = 1e-3;
  const double bound = 2 * h * h * lam * lam * s.field().coefficient_l1() / 12;
  for (int it = 0; it < 100; ++it) {
    auto x = oracle::random_point(rng, 2);
    EXPECT_LE(laplacian_residual(s, Point(x, 2), h), bound);
  }
}

TEST(Spectrum, TranslationShiftsValues) {
  std::mt19937_64 rng(12);
  auto s = random_eigenfunction(65, TorusModel(2), 4);
  Vec tau{0.137, 0.829, 0};
  auto t = s.translated(tau);
  EXPECT_NEAR(norm_sq(t), 1.0, 1e-14);
  for (int it = 0; it < 100; ++it) {
    auto x = oracle::random_point(rng, 2);
    EXPECT_NEAR(evaluate(t, Point(x, 2)), evaluate(s, Point(x[0] - tau[0], x[1] - tau[1])), 1e-13);
  }
}

TEST(Spectrum, ParsevalOnGrid) {
  // mean of psi^2 over a fine grid equals the exact L2 norm 1
  for (int n : {2, 3}) {
    auto s = random_eigenfunction(n == 2 ? 1105 : 29, TorusModel(n), 6);
    const int N = n == 2 ? 512 : 64;
    double acc = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int l = 0; l < (n == 3 ? N : 1); ++l) {
          Vec x{double(i) / N, double(j) / N, double(l) / N};
          const double v = s.field().value(x);
          acc += v * v;
        }
    EXPECT_NEAR(acc / std::pow(double(N), n), 1.0, 1e-12);
  }
}

TEST(Spectrum, Nyquist) {
  EXPECT_EQ(nyquist_resolution(25), 12);
  EXPECT_EQ(nyquist_resolution(100), 22);
  EXPECT_EQ(nyquist_resolution(26), 14);
}
