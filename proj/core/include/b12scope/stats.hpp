#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace b12scope::stats {

struct CorrelationResult {
  double coefficient = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  bool exact_p = false;  // p came from full permutation enumeration
};

struct RankSumResult {
  double statistic = 0.0;  // rank sum of the first sample in the pooled ranking
  double z = 0.0;          // normal-approximation score (reported for both branches)
  double p_value = 1.0;    // two-sided
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  bool exact = false;
};

// Dense row-major matrix; only what the regressions need.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double> column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const double> values);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct RegressionResult {
  std::vector<double> coefficients;  // aligned with the columns of X
  double intercept = 0.0;
  double r_squared = 0.0;  // weighted; McFadden pseudo-R^2 for logistic fits
  std::vector<double> p_values;  // per coefficient, two-sided
  double model_p_value = 1.0;    // overall F test (likelihood-ratio for logistic)
  std::size_t n = 0;
  bool degenerate = false;  // rank-deficient design solved by the ridge fallback
};

// Relative gap under which two values rank as tied.
inline constexpr double kRankTieRelTol = 1e-12;

// Ranks 1..n, ties receive the average of the ranks they span. Values within
// kRankTieRelTol of the first value of a run join its tie.
std::vector<double> rank_transform(std::span<const double> values);

// Product-moment correlation; p from the t approximation with n-2 df.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

// Pearson correlation of the rank transforms. For n <= 8 the p-value is the exact
// two-sided permutation probability; above that, the t approximation, except for
// tied samples up to n = 12 whose distinct rank arrangements number at most
// kSpearmanTiedExactBudget. Those are enumerated too: with heavy ties the
// permutation distribution is too lumpy for the t approximation.
CorrelationResult spearman(std::span<const double> x, std::span<const double> y);

inline constexpr std::size_t kSpearmanExactMaxN = 8;
inline constexpr std::size_t kSpearmanTiedExactMaxN = 12;
inline constexpr std::uint64_t kSpearmanTiedExactBudget = 2'000'000;

// Wilcoxon rank-sum test, two-sided. Exact enumeration when |a|+|b| <= 12,
// otherwise normal approximation with tie correction.
RankSumResult ranksum(std::span<const double> a, std::span<const double> b);

inline constexpr std::size_t kRankSumExactMaxN = 12;

// Minimizes sum w_i (y_i - x_i.beta - beta0)^2. A rank-deficient design falls
// back to a ridge solve (lambda = 1e-8 relative to the mean Gram diagonal) and
// sets `degenerate`.
RegressionResult ols_fit(const Matrix& x, std::span<const double> y,
                         std::span<const double> weights = {});

// Weighted OLS after rank-transforming y and every column of X.
RegressionResult rank_regression(const Matrix& x, std::span<const double> y,
                                 std::span<const double> weights = {});

// Logistic regression by iteratively reweighted least squares. y must be 0/1.
RegressionResult logistic_fit(const Matrix& x, std::span<const double> y);

using TwoSampleStatistic =
    std::function<double(std::span<const double>, std::span<const double>)>;

// Exact two-sided permutation p-value: enumerates every reassignment of the pooled
// values into groups of sizes |a| and |b| and counts assignments whose statistic
// is at least as far from the permutation mean as the observed one.
double permutation_pvalue_oracle(const TwoSampleStatistic& statistic,
                                 std::span<const double> a, std::span<const double> b,
                                 std::size_t max_n = 12);

// Rank sum of `a` within the pooled ranking of a and b.
double rank_sum_of_first(std::span<const double> a, std::span<const double> b);

double mean(std::span<const double> xs);
double median(std::vector<double> xs);

double t_two_sided_p(double t, double df);
double normal_two_sided_p(double z);

}  // namespace b12scope::stats
