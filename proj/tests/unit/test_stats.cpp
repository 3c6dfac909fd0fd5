#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "b12scope/error.hpp"
#include "b12scope/stats.hpp"
#include "oracles.hpp"

using namespace b12scope;
using stats::Matrix;

namespace {

std::vector<double> draw_with_ties(std::mt19937_64& rng, std::size_t n, int levels) {
  std::uniform_int_distribution<int> d(0, levels - 1);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

bool constant(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
}

}  // namespace

TEST(Ranks, SimpleAndTied) {
  std::vector<double> a{10, 20, 30};
  EXPECT_EQ(stats::rank_transform(a), (std::vector<double>{1, 2, 3}));
  std::vector<double> b{5, 5};
  EXPECT_EQ(stats::rank_transform(b), (std::vector<double>{1.5, 1.5}));
}

TEST(Ranks, MatchComparisonCountOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = draw_with_ties(rng, 8, trial % 2 ? 4 : 1000);
    EXPECT_EQ(stats::rank_transform(v), oracle::ranks(v));
  }
}

TEST(Spearman, PerfectAndReversed) {
  std::vector<double> x{1, 2, 3}, y{1, 2, 3}, z{3, 2, 1};
  EXPECT_DOUBLE_EQ(stats::spearman(x, y).coefficient, 1.0);
  EXPECT_DOUBLE_EQ(stats::spearman(x, z).coefficient, -1.0);
}

TEST(Spearman, FivePointExample) {
  std::vector<double> x{1, 2, 3, 4, 5}, y{1, 3, 2, 5, 4};
  const auto r = stats::spearman(x, y);
  EXPECT_NEAR(r.coefficient, 1.0 - 6.0 * 4 / (5 * 24), 1e-15);
  EXPECT_NEAR(r.coefficient, 0.8, 1e-15);
  EXPECT_TRUE(r.exact_p);
  EXPECT_NEAR(r.p_value, oracle::spearman_exact_p(x, y), 1e-12);
}

TEST(Spearman, ExactBranchEqualsPermutationOracle) {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 3 + trial % 6;
    const int levels = trial % 3 == 0 ? 3 : 100;
    const auto x = draw_with_ties(rng, n, levels);
    const auto y = draw_with_ties(rng, n, levels);
    if (constant(x) || constant(y)) continue;
    const auto r = stats::spearman(x, y);
    ASSERT_TRUE(r.exact_p);
    EXPECT_NEAR(r.coefficient, oracle::spearman_rho(x, y), 1e-12);
    EXPECT_NEAR(r.p_value, oracle::spearman_exact_p(x, y), 1e-12) << "n=" << n;
    ++checked;
  }
  EXPECT_GT(checked, 300);
}

TEST(Spearman, ApproximationCloseToExactOnSixPoints) {
  // t approximation evaluated by hand against the exact permutation value
  std::vector<double> x{1, 2, 3, 4, 5, 6}, y{2, 1, 4, 3, 6, 5};
  const double rho = oracle::spearman_rho(x, y);
  const double t = rho * std::sqrt(4.0 / (1.0 - rho * rho));
  const double approx = stats::t_two_sided_p(t, 4.0);
  EXPECT_NEAR(approx, oracle::spearman_exact_p(x, y), 0.05);
}

TEST(Spearman, HeavilyTiedTwelvePointsAreExact) {
  std::mt19937_64 rng(17);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 9 + trial % 4;
    const auto x = draw_with_ties(rng, n, 3);
    const auto y = draw_with_ties(rng, n, 100);
    if (constant(x) || constant(y)) continue;
    const auto r = stats::spearman(x, y);
    ASSERT_TRUE(r.exact_p) << "n=" << n;
    EXPECT_NEAR(r.p_value, oracle::spearman_exact_p(x, y), 1e-12) << "n=" << n;
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(Spearman, UntiedTwelvePointsUseApproximation) {
  std::mt19937_64 rng(18);
  const auto x = draw_with_ties(rng, 12, 1'000'000);
  const auto y = draw_with_ties(rng, 12, 1'000'000);
  const auto r = stats::spearman(x, y);
  EXPECT_FALSE(r.exact_p);
  EXPECT_NEAR(r.p_value, oracle::spearman_exact_p(x, y), 0.05);
}

TEST(Ranks, UlpNeighboursTie) {
  const double a = 0.1 * 3.0, b = 0.3;  // differ in the last bit
  ASSERT_NE(a, b);
  std::vector<double> v{a, 1.0, b};
  EXPECT_EQ(stats::rank_transform(v), (std::vector<double>{1.5, 3, 1.5}));
  std::vector<double> apart{0.3, 1.0, 0.3 * (1 + 1e-9)};
  EXPECT_EQ(stats::rank_transform(apart), (std::vector<double>{1, 3, 2}));
  std::vector<double> near_constant{a, b, a}, v3{1, 2, 3};
  EXPECT_THROW(stats::spearman(near_constant, v3), StatError);
}

TEST(Spearman, RejectsDegenerateInput) {
  std::vector<double> two{1, 2}, c3{1, 1, 1}, v3{1, 2, 3};
  EXPECT_THROW(stats::spearman(two, two), StatError);
  EXPECT_THROW(stats::spearman(c3, v3), StatError);
  std::vector<double> bad{1, NAN, 3};
  EXPECT_THROW(stats::spearman(bad, v3), StatError);
}

TEST(Pearson, AffineAndNegated) {
  std::vector<double> x{1, 2, 3, 4}, y, z;
  for (double v : x) {
    y.push_back(2 * v + 1);
    z.push_back(-v);
  }
  EXPECT_NEAR(stats::pearson(x, y).coefficient, 1.0, 1e-15);
  EXPECT_NEAR(stats::pearson(x, z).coefficient, -1.0, 1e-15);
}

TEST(Pearson, TwelvePointsAgainstExtendedPrecision) {
  std::vector<double> x{1e6 + 0.1, 1e6 + 0.7, 1e6 + 0.2, 1e6 + 0.9, 1e6 + 0.4, 1e6 + 0.3,
                        1e6 + 0.8, 1e6 + 0.5, 1e6 + 0.6, 1e6 + 0.05, 1e6 + 0.95, 1e6 + 0.35};
  std::vector<double> y{3.1, 4.9, 2.2, 6.0, 3.3, 3.0, 5.1, 4.4, 4.0, 1.9, 6.6, 2.8};
  EXPECT_NEAR(stats::pearson(x, y).coefficient, oracle::pearson(x, y), 1e-12);
}

TEST(RankSum, NoShift) {
  std::vector<double> a{1, 2, 3};
  const auto r = stats::ranksum(a, a);
  EXPECT_TRUE(r.exact);
  EXPECT_NEAR(r.p_value, 1.0, 1e-12);
}

TEST(RankSum, TwoVersusTwo) {
  std::vector<double> a{1, 2}, b{10, 11};
  EXPECT_NEAR(stats::ranksum(a, b).p_value, 1.0 / 3.0, 1e-15);
}

TEST(RankSum, SingletonsAreMaximallyAmbiguous) {
  std::vector<double> a{1}, b{2};
  EXPECT_NEAR(stats::ranksum(a, b).p_value, 1.0, 1e-15);
}

TEST(RankSum, ExactBranchEqualsEnumeration) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t na = 1 + trial % 6;
    const std::size_t nb = 1 + (trial / 6) % (12 - na);
    const int levels = trial % 4 == 0 ? 3 : 50;
    const auto a = draw_with_ties(rng, na, levels);
    const auto b = draw_with_ties(rng, nb, levels);
    const auto r = stats::ranksum(a, b);
    ASSERT_TRUE(r.exact);
    EXPECT_NEAR(r.p_value, oracle::ranksum_exact_p(a, b), 1e-12) << na << "+" << nb;
  }
}

TEST(RankSum, NormalBranchMatchesHandFormula) {
  std::mt19937_64 rng(3);
  const auto a = draw_with_ties(rng, 15, 6);
  const auto b = draw_with_ties(rng, 11, 6);
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto rk = oracle::ranks(pooled);
  double w = 0;
  for (std::size_t i = 0; i < a.size(); ++i) w += rk[i];
  const double n1 = 15, n2 = 11, n = 26;
  std::map<double, double> groups;
  for (double v : pooled) groups[v] += 1;
  double tie = 0;
  for (const auto& [v, t] : groups) tie += t * t * t - t;
  const double var = n1 * n2 / 12.0 * ((n + 1) - tie / (n * (n - 1)));
  const double z = (w - n1 * (n + 1) / 2) / std::sqrt(var);
  const auto r = stats::ranksum(a, b);
  EXPECT_FALSE(r.exact);
  EXPECT_DOUBLE_EQ(r.statistic, w);
  EXPECT_NEAR(r.z, z, 1e-12);
  EXPECT_NEAR(r.p_value, std::erfc(std::abs(z) / std::sqrt(2.0)), 1e-12);
}

TEST(RankSum, ShiftedNormalsAreSeparated) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> a(200), b(200);
  for (auto& v : a) v = d(rng);
  for (auto& v : b) v = d(rng) + 1.0;
  EXPECT_LT(stats::ranksum(a, b).p_value, 1e-6);
}

TEST(PermutationOracle, AgreesWithRankSumOnSmallInputs) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 60; ++trial) {
    const auto a = draw_with_ties(rng, 1 + trial % 5, 8);
    const auto b = draw_with_ties(rng, 1 + trial % 7, 8);
    const double p = stats::permutation_pvalue_oracle(stats::rank_sum_of_first, a, b);
    EXPECT_NEAR(p, stats::ranksum(a, b).p_value, 1e-12);
  }
}

TEST(PermutationOracle, RefusesLargeInputs) {
  std::vector<double> a(7, 1.0), b(7, 2.0);
  EXPECT_THROW(stats::permutation_pvalue_oracle(stats::rank_sum_of_first, a, b), StatError);
}

TEST(Ols, ExactFit) {
  Matrix x(5, 1);
  std::vector<double> y(5);
  for (std::size_t i = 0; i < 5; ++i) {
    x(i, 0) = static_cast<double>(i) + 0.5;
    y[i] = 3 * x(i, 0);
  }
  const auto r = stats::ols_fit(x, y);
  EXPECT_NEAR(r.coefficients[0], 3.0, 1e-12);
  EXPECT_NEAR(r.intercept, 0.0, 1e-12);
  EXPECT_NEAR(r.r_squared, 1.0, 1e-12);
}

TEST(Ols, ConstantResponse) {
  Matrix x(6, 2);
  std::vector<double> y(6, 4.0);
  for (std::size_t i = 0; i < 6; ++i) {
    x(i, 0) = static_cast<double>(i);
    x(i, 1) = static_cast<double>((i * 7) % 5);
  }
  const auto r = stats::ols_fit(x, y);
  EXPECT_NEAR(r.coefficients[0], 0.0, 1e-12);
  EXPECT_NEAR(r.coefficients[1], 0.0, 1e-12);
  EXPECT_EQ(r.r_squared, 0.0);
}

TEST(Ols, RandomSystemAgainstNormalEquations) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> d(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix x(30, 3);
    std::vector<std::vector<double>> rows(30, std::vector<double>(3));
    std::vector<double> y(30), w(30);
    for (std::size_t i = 0; i < 30; ++i) {
      for (std::size_t j = 0; j < 3; ++j) rows[i][j] = x(i, j) = d(rng) * (j + 1);
      y[i] = 1.5 - 2 * rows[i][0] + 0.3 * rows[i][2] + d(rng);
      w[i] = trial % 2 ? 0.5 + std::abs(d(rng)) : 1.0;
    }
    const auto r = stats::ols_fit(x, y, trial % 2 ? std::span<const double>(w) : std::span<const double>());
    const auto ref = trial % 2 ? oracle::ols(rows, y, w) : oracle::ols(rows, y);
    EXPECT_NEAR(r.intercept, ref[0], 1e-8);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(r.coefficients[j], ref[j + 1], 1e-8);
    EXPECT_FALSE(r.degenerate);
  }
}

TEST(Ols, DuplicateColumnTakesRidgeFallback) {
  Matrix x(10, 2);
  std::vector<double> y(10);
  for (std::size_t i = 0; i < 10; ++i) {
    x(i, 0) = x(i, 1) = static_cast<double>(i * i % 7);
    y[i] = static_cast<double>(i);
  }
  const auto r = stats::ols_fit(x, y);
  EXPECT_TRUE(r.degenerate);
  EXPECT_TRUE(std::isfinite(r.coefficients[0]));
  EXPECT_NEAR(r.coefficients[0], r.coefficients[1], 1e-6);
}

TEST(RankRegression, MonotoneIdentity) {
  Matrix x(8, 1);
  std::vector<double> y(8);
  for (std::size_t i = 0; i < 8; ++i) {
    x(i, 0) = std::exp(static_cast<double>(i));
    y[i] = static_cast<double>(i * i);
  }
  const auto r = stats::rank_regression(x, y);
  EXPECT_NEAR(r.coefficients[0], 1.0, 1e-12);
  EXPECT_NEAR(r.r_squared, 1.0, 1e-12);
}

TEST(RankRegression, SlopeSignSurvivesMonotoneRescaling) {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> d(0.0, 1.0);
  Matrix x(40, 2), xt(40, 2);
  std::vector<double> y(40), yt(40), w(40);
  for (std::size_t i = 0; i < 40; ++i) {
    x(i, 0) = d(rng);
    x(i, 1) = d(rng);
    y[i] = -x(i, 0) + 0.3 * d(rng);
    xt(i, 0) = std::exp(3 * x(i, 0));
    xt(i, 1) = x(i, 1) * x(i, 1) * x(i, 1);
    yt[i] = std::atan(y[i]);
    w[i] = 0.1 + std::abs(d(rng));
  }
  const auto a = stats::rank_regression(x, y, w);
  const auto b = stats::rank_regression(xt, yt, w);
  EXPECT_LT(a.coefficients[0], 0.0);
  EXPECT_EQ(a.coefficients, b.coefficients);
  EXPECT_EQ(a.p_values, b.p_values);
}

TEST(RankRegression, EqualWeightsMatchUnweighted) {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> d(0.0, 1.0);
  Matrix x(25, 3);
  std::vector<double> y(25), w(25, 0.37);
  for (std::size_t i = 0; i < 25; ++i) {
    for (std::size_t j = 0; j < 3; ++j) x(i, j) = d(rng);
    y[i] = x(i, 0) - x(i, 2) + d(rng);
  }
  const auto a = stats::rank_regression(x, y);
  const auto b = stats::rank_regression(x, y, w);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_NEAR(a.coefficients[j], b.coefficients[j], 1e-12);
    EXPECT_NEAR(a.p_values[j], b.p_values[j], 1e-10);
  }
  EXPECT_NEAR(a.r_squared, b.r_squared, 1e-12);
}

TEST(RankRegression, IndependentResponseHasSmallR2) {
  // 95th percentile of R^2 under the null for n=60, k=2 is about 0.097 (Beta(1, 28.5))
  std::mt19937_64 rng(43);
  std::normal_distribution<double> d(0.0, 1.0);
  int above = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Matrix x(60, 2);
    std::vector<double> y(60);
    for (std::size_t i = 0; i < 60; ++i) {
      x(i, 0) = d(rng);
      x(i, 1) = d(rng);
      y[i] = d(rng);
    }
    if (stats::rank_regression(x, y).r_squared > 0.097) ++above;
  }
  EXPECT_LE(above, 20);
}

TEST(Logistic, ScoreEquationsVanishAtSolution) {
  std::mt19937_64 rng(47);
  std::normal_distribution<double> d(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix x(300, 2);
  std::vector<double> y(300);
  for (std::size_t i = 0; i < 300; ++i) {
    x(i, 0) = d(rng);
    x(i, 1) = d(rng);
    const double eta = -0.5 + 1.2 * x(i, 0) - 0.7 * x(i, 1);
    y[i] = u(rng) < 1.0 / (1.0 + std::exp(-eta)) ? 1.0 : 0.0;
  }
  const auto r = stats::logistic_fit(x, y);
  ASSERT_FALSE(r.degenerate);
  double s0 = 0, s1 = 0, s2 = 0;
  for (std::size_t i = 0; i < 300; ++i) {
    const double eta = r.intercept + r.coefficients[0] * x(i, 0) + r.coefficients[1] * x(i, 1);
    const double resid = y[i] - 1.0 / (1.0 + std::exp(-eta));
    s0 += resid;
    s1 += resid * x(i, 0);
    s2 += resid * x(i, 1);
  }
  EXPECT_NEAR(s0, 0.0, 1e-8);
  EXPECT_NEAR(s1, 0.0, 1e-8);
  EXPECT_NEAR(s2, 0.0, 1e-8);
  EXPECT_GT(r.coefficients[0], 0.0);
  EXPECT_LT(r.coefficients[1], 0.0);
  EXPECT_GT(r.r_squared, 0.0);
  EXPECT_LT(r.model_p_value, 1e-6);
}

TEST(Summary, MeanAndMedian) {
  std::vector<double> v{3, 1, 2, 10};
  EXPECT_DOUBLE_EQ(stats::mean(v), 4.0);
  EXPECT_DOUBLE_EQ(stats::median(v), 2.5);
  EXPECT_DOUBLE_EQ(stats::median({5, 1, 3}), 3.0);
}
