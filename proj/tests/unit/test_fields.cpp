#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "nodalscope/errors.hpp"
#include "nodalscope/fields.hpp"
#include "oracles.hpp"

using namespace nodalscope;
using std::numbers::pi;

namespace {

// Dense polar sampling of the channel over a closed ball, then compass search
// from the best samples (clamped to the ball). Independent of the library scan.
double dense_sup(const BallProbe& probe, Channel ch, const Vec& c, double s, int rings = 120,
                 int spokes = 480) {
  auto f = [&](double dx, double dy) {
    return probe.channel_value(ch, {c[0] + dx, c[1] + dy, 0});
  };
  std::vector<std::array<double, 3>> samples{{f(0, 0), 0, 0}};
  for (int i = 1; i <= rings; ++i) {
    const double rho = s * i / rings;
    for (int j = 0; j < spokes; ++j) {
      const double th = 2 * pi * j / spokes;
      const double dx = rho * std::cos(th), dy = rho * std::sin(th);
      samples.push_back({f(dx, dy), dx, dy});
    }
  }
  const std::size_t top = std::min<std::size_t>(24, samples.size());
  std::partial_sort(samples.begin(), samples.begin() + top, samples.end(),
                    [](const auto& a, const auto& b) { return a[0] > b[0]; });
  double best = samples.front()[0];
  for (std::size_t t = 0; t < top; ++t) {
    double x = samples[t][1], y = samples[t][2], v = samples[t][0];
    double step = 2 * s / rings;
    while (step > 1e-10 * s) {
      bool moved = false;
      for (auto [ux, uy] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0},
                            {0.7071, 0.7071}, {-0.7071, 0.7071}, {0.7071, -0.7071}, {-0.7071, -0.7071}}) {
        double nx = x + step * ux, ny = y + step * uy;
        const double rr = std::hypot(nx, ny);
        if (rr > s) nx *= s / rr, ny *= s / rr;
        const double nv = f(nx, ny);
        if (nv > v) {
          x = nx, y = ny, v = nv;
          moved = true;
        }
      }
      if (!moved) step *= 0.5;
    }
    best = std::max(best, v);
  }
  return best;
}

double q_closed_form(double x) {
  const double c = std::cos(2 * pi * x), s = std::sin(2 * pi * x);
  return 8 * pi * pi * c * c + 4 * pi * pi * s * s;
}

}  // namespace

TEST(Sample, ResolutionBound) {
  auto s100 = random_eigenfunction(100, TorusModel(2), 1);
  EXPECT_THROW(sample(s100, 16), ResolutionError);
  EXPECT_NO_THROW(sample(s100, 22));
  EXPECT_NO_THROW(sample(random_eigenfunction(25, TorusModel(2), 1), 16));
  try {
    sample(s100, 16);
  } catch (const ResolutionError& e) {
    EXPECT_EQ(e.required(), 22);
  }
}

TEST(Sample, ValuesAtNodes) {
  auto s = sine_mode(1);
  auto f = sample(s, 8);
  EXPECT_EQ(f.node_count(), 64u);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      EXPECT_NEAR(f.values[f.index(i, j)], std::sqrt(2.0) * std::sin(2 * pi * i / 8), 1e-15);
  EXPECT_EQ(f.values[f.index(0, 3)], 0.0);
}

TEST(Sample, RefinementPreservesNodes) {
  auto s = random_eigenfunction(325, TorusModel(2), 3);
  auto a = sample(s, 64), b = sample(s, 128, true);
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) {
      EXPECT_EQ(a.values[a.index(i, j)], b.values[b.index(2 * i, 2 * j)]);
      EXPECT_EQ(a.values[a.index(i, j)], evaluate(s, Point(double(i) / 64, double(j) / 64)));
    }
  ASSERT_EQ(b.gradient.size(), 2 * b.node_count());
  auto g = evaluate_gradient(s, Point(5.0 / 128, 9.0 / 128));
  EXPECT_EQ(b.gradient[2 * b.index(5, 9)], g[0]);
  auto c = sample(random_eigenfunction(29, TorusModel(3), 1), 16);
  EXPECT_EQ(c.node_count(), 4096u);
}

TEST(Sup, ClosedFormExamples) {
  auto s = sine_mode(1);
  for (double r : {0.01, 0.05, 0.1}) EXPECT_DOUBLE_EQ(sup_on_ball(s, Point(0.25, 0.25), r), 2.0);
  EXPECT_NEAR(sup_on_ball(s, Point(0, 0), 0.125), 1.0, 1e-9);
  EXPECT_NEAR(sup_on_ball(s, Point(0, 0), 0.25), 2.0, 1e-9);
}

TEST(Sup, QClosedForm) {
  auto s = sine_mode(1);
  BallProbe probe(s);
  EXPECT_NEAR(probe.global_sup(Channel::Q).value, 8 * pi * pi, 1e-8);
  const double want = q_closed_form(0.2);
  EXPECT_NEAR(want, 43.248271030058, 1e-9);
  EXPECT_NEAR(q_on_ball(s, Point(0.25, 0), 0.05, s.lambda()), want, 1e-7 * want);
}

TEST(Sup, QDominatesHalfLambdaPsiSq) {
  std::mt19937_64 rng(2);
  auto s = random_eigenfunction(325, TorusModel(2), 5);
  BallProbe probe(s);
  for (int it = 0; it < 5000; ++it) {
    auto x = oracle::random_point(rng, 2);
    const double v = s.field().value(x);
    EXPECT_GE(probe.channel_value(Channel::Q, x), 0.5 * s.lambda() * v * v * (1 - 1e-14));
  }
}

TEST(Sup, AgreesWithDenseSampling) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> rad(0.005, 0.25);
  for (long m : {25L, 325L, 1105L}) {
    auto s = random_eigenfunction(m, TorusModel(2), 2);
    BallProbe probe(s);
    for (int it = 0; it < 20; ++it) {
      auto x = oracle::random_point(rng, 2);
      const double r = rad(rng);
      for (Channel ch : {Channel::PsiSq, Channel::Q}) {
        const double got = probe.sup(ch, x, r).value;
        const double ref = dense_sup(probe, ch, x, r);
        EXPECT_GE(got, ref * (1 - 1e-3)) << m << " r=" << r;
        EXPECT_LE(got, ref * (1 + 1e-9)) << m << " r=" << r;
      }
    }
  }
}

TEST(Sup, MonotoneInRadius) {
  std::mt19937_64 rng(22);
  auto s = random_eigenfunction(1105, TorusModel(2), 4);
  BallProbe probe(s);
  for (int it = 0; it < 30; ++it) {
    auto x = oracle::random_point(rng, 2);
    double prev = 0.0;
    for (double r = 0.002; r <= 0.25; r *= 1.5) {
      const double v = probe.sup(Channel::PsiSq, x, r).value;
      EXPECT_GE(v, prev * (1 - 1e-9));
      prev = v;
    }
    EXPECT_LE(prev, probe.global_sup(Channel::PsiSq).value * (1 + 1e-9));
  }
}

TEST(Mass, ConstantFieldIsBallVolume) {
  auto one = TrigPolynomial::constant(2, 1.0);
  EXPECT_NEAR(l2_on_ball(one, Point(0.3, 0.7), 0.1), pi * 0.01, 1e-15);
  auto one3 = TrigPolynomial::constant(3, 1.0);
  EXPECT_NEAR(l2_on_ball(one3, Point(0.3, 0.7, 0.1), 0.1), 4.0 / 3 * pi * 1e-3, 1e-15);
}

TEST(Mass, SineModeMonteCarlo) {
  auto s = sine_mode(1);
  const double got = l2_on_ball(s, Point(0.25, 0), 0.5);
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const long n = 10000000;
  double sum = 0.0, sum2 = 0.0;
  long inside = 0;
  for (long i = 0; i < n; ++i) {
    const double dx = u(rng), dy = u(rng);
    if (dx * dx + dy * dy > 0.25) continue;
    const double v = 2 * std::pow(std::sin(2 * pi * (0.25 + dx)), 2);
    sum += v;
    sum2 += v * v;
    ++inside;
  }
  const double mean = sum / inside;
  const double sd = std::sqrt((sum2 / inside - mean * mean) / inside);
  const double area = pi * 0.25;
  EXPECT_NEAR(got, area * mean, 3 * area * sd);
  EXPECT_NEAR(got, oracle::sin_family_mass(1, 0.25, 0.5), 1e-12);
}

TEST(Mass, SineFamilyMatchesQuadrature) {
  for (int k : {1, 2, 3, 5, 8}) {
    auto s = sine_mode(k);
    for (double cx : {0.0, 0.1, 0.25, 0.33})
      for (double r : {0.03, 0.1, 0.25, 0.5})
        EXPECT_NEAR(l2_on_ball(s, Point(cx, 0.4), r), oracle::sin_family_mass(k, cx, r), 1e-12);
  }
}

TEST(Mass, AgreesWithGridQuadrature) {
  auto s = random_eigenfunction(25, TorusModel(2), 1);
  const double exact = l2_on_ball(s, Point(0.3, 0.6), 0.2);
  const double quad = l2_on_ball_quadrature(s.field(), Point(0.3, 0.6), 0.2, 1.0 / 1024);
  EXPECT_NEAR(exact, quad, 2e-5 * std::max(exact, 1e-3));
  auto s3 = random_eigenfunction(11, TorusModel(3), 2);
  const double e3 = l2_on_ball(s3, Point(0.1, 0.5, 0.9), 0.2);
  const double q3 = l2_on_ball_quadrature(s3.field(), Point(0.1, 0.5, 0.9), 0.2, 1.0 / 128);
  EXPECT_NEAR(e3, q3, 1e-3 * e3);
}

TEST(Mass, Invariants) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> rad(0.01, 0.5);
  for (int n : {2, 3}) {
    auto s = random_eigenfunction(n == 2 ? 325 : 29, TorusModel(n), 8);
    BallProbe probe(s);
    for (int it = 0; it < 40; ++it) {
      auto x = oracle::random_point(rng, n);
      const double r = rad(rng);
      auto st = probe.ball_stat(Point(x, n), r);
      EXPECT_GE(st.mass, -st.error_bound);
      EXPECT_LE(st.mass, 1.0 + st.error_bound);
      EXPECT_GE(st.sup_sq * (1 + 1e-3), st.mass / ball_volume(r, TorusModel(n)));
    }
  }
}

TEST(Mass, OnGridMatchesPointQueries) {
  auto s = random_eigenfunction(65, TorusModel(2), 2);
  BallProbe probe(s);
  auto grid = probe.mass_on_grid(0.1, 12);
  ASSERT_EQ(grid.size(), 144u);
  for (int i = 0; i < 12; i += 5)
    for (int j = 0; j < 12; j += 3)
      EXPECT_NEAR(grid[i * 12 + j], probe.mass({i / 12.0, j / 12.0, 0}, 0.1), 1e-13);
}

TEST(Mass, BallTransform) {
  for (int n : {2, 3}) {
    EXPECT_NEAR(ball_indicator_transform(0.0, 0.2, n), unit_ball_volume(n) * std::pow(0.2, n), 1e-15);
    // small-frequency limit is continuous
    const double a = ball_indicator_transform(1e-9, 0.2, n), b = ball_indicator_transform(0.0, 0.2, n);
    EXPECT_NEAR(a, b, 1e-12);
  }
  // radial integrals: 2D int 2 pi y J0(2 pi rho y), 3D int 4 pi y^2 sinc(2 pi rho y)
  const double r = 0.3;
  for (double t : {0.3, 0.999, 1.001, 4.0, 40.0}) {
    const double rho = t / (2 * pi * r);
    const double f2 = oracle::integrate(
        [&](double y) { return 2 * pi * y * std::cyl_bessel_j(0.0, 2 * pi * rho * y); }, 0, r);
    const double f3 = oracle::integrate(
        [&](double y) { return 4 * pi * y * std::sin(2 * pi * rho * y) / (2 * pi * rho); }, 0, r);
    EXPECT_NEAR(ball_indicator_transform(rho, r, 2), f2, 1e-13) << t;
    EXPECT_NEAR(ball_indicator_transform(rho, r, 3), f3, 1e-13) << t;
  }
}

TEST(Mass, Preconditions) {
  auto s = sine_mode(1);
  EXPECT_THROW(l2_on_ball(s, Point(0, 0), 0.6), EmbeddedBallError);
  EXPECT_THROW(l2_on_ball(s, Point(0, 0), 0.1, 0.0), RangeError);
  EXPECT_THROW(l2_on_ball(s, Point(0, 0), 0.1, 1e-13), BudgetError);
  EXPECT_THROW(sup_on_ball(s, Point(0, 0), 0.6), EmbeddedBallError);
}

TEST(Mass, TranslationInvariance) {
  std::mt19937_64 rng(41);
  auto s = random_eigenfunction(130, TorusModel(2), 3);
  Vec tau{0.31, 0.78, 0};
  auto t = s.translated(tau);
  for (int it = 0; it < 20; ++it) {
    auto x = oracle::random_point(rng, 2);
    const double a = l2_on_ball(s, Point(x, 2), 0.1);
    const double b = l2_on_ball(t, Point(x[0] + tau[0], x[1] + tau[1]), 0.1);
    EXPECT_NEAR(a, b, 1e-13);
  }
}
