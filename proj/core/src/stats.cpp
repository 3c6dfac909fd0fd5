#include "b12scope/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "b12scope/error.hpp"
#include "b12scope/numeric.hpp"
#include "wls.hpp"

namespace b12scope::stats {

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void Matrix::set_column(std::size_t c, std::span<const double> values) {
  if (values.size() != rows_) throw StatError("column length does not match matrix rows");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

namespace {

void require_finite(std::span<const double> xs, const char* what) {
  for (double v : xs) {
    if (!std::isfinite(v)) throw StatError(fmt::format("{}: non-finite value", what));
  }
}

// Values this close are one tie: sums of products that agree in exact arithmetic
// can land a few ulps apart, and how they land changes with the units.
bool rank_tied(double a, double b) {
  return a == b || std::abs(a - b) <= kRankTieRelTol * std::max(std::abs(a), std::abs(b));
}

// Ranks doubled so tie averages stay integral.
std::vector<std::int64_t> doubled_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<std::int64_t> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && rank_tied(values[order[j]], values[order[i]])) ++j;
    // positions i..j-1 hold ranks i+1..j; doubled average is i+1+j
    const auto r2 = static_cast<std::int64_t>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = r2;
    i = j;
  }
  return ranks;
}

bool is_constant(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [&](double v) { return v == xs.front(); });
}

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw StatError("correlation: length mismatch");
  if (x.size() < 3) throw StatError("correlation: need at least 3 points");
  require_finite(x, "correlation");
  require_finite(y, "correlation");
  if (is_constant(x) || is_constant(y)) {
    throw StatError("correlation undefined for a constant vector");
  }
}

double correlation_p(double r, std::size_t n) {
  if (std::abs(r) >= 1.0) return 0.0;
  const double df = static_cast<double>(n) - 2.0;
  const double t = r * std::sqrt(df / ((1.0 - r) * (1.0 + r)));
  return t_two_sided_p(t, df);
}

double pearson_raw(std::span<const double> x, std::span<const double> y) {
  const double mx = mean(x);
  const double my = mean(y);
  CompensatedSum sxy, sxx, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy.add(dx * dy);
    sxx.add(dx * dx);
    syy.add(dy * dy);
  }
  const double r = sxy.value() / std::sqrt(sxx.value() * syy.value());
  return std::clamp(r, -1.0, 1.0);
}

double exact_spearman_p(std::span<const std::int64_t> rx, std::vector<std::int64_t> ry) {
  const auto n = static_cast<std::int64_t>(rx.size());
  const std::int64_t sx = std::accumulate(rx.begin(), rx.end(), std::int64_t{0});
  const std::int64_t sy = std::accumulate(ry.begin(), ry.end(), std::int64_t{0});
  auto deviation = [&](const std::vector<std::int64_t>& perm) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) s += rx[i] * perm[i];
    const std::int64_t d = n * s - sx * sy;
    return d < 0 ? -d : d;
  };
  const std::int64_t observed = deviation(ry);
  std::sort(ry.begin(), ry.end());
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  // Tied values make some arrangements identical; each distinct arrangement
  // stands for the same number of raw permutations, so counting distinct ones
  // gives the same probability.
  do {
    ++total;
    if (deviation(ry) >= observed) ++hits;
  } while (std::next_permutation(ry.begin(), ry.end()));
  return static_cast<double>(hits) / static_cast<double>(total);
}

// Number of distinct orderings of a multiset: n! / prod(tie sizes!), saturating
// at `cap`.
std::uint64_t distinct_arrangements(std::vector<std::int64_t> v, std::uint64_t cap) {
  std::sort(v.begin(), v.end());
  std::uint64_t count = 1;
  std::size_t placed = 0;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    // choose positions for this tie group among those not yet placed
    for (std::size_t k = 1; k <= j - i; ++k) {
      count = count * (placed + k) / k;
      if (count > cap) return cap + 1;
    }
    placed += j - i;
    i = j;
  }
  return count;
}

}  // namespace

double mean(std::span<const double> xs) {
  if (xs.empty()) throw StatError("mean of empty sample");
  return compensated_sum(xs) / static_cast<double>(xs.size());
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw StatError("median of empty sample");
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 == 1 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

double t_two_sided_p(double t, double df) {
  if (std::isnan(t) || !(df > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  boost::math::students_t dist(df);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

double normal_two_sided_p(double z) {
  if (std::isnan(z)) return std::numeric_limits<double>::quiet_NaN();
  return std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
}

std::vector<double> rank_transform(std::span<const double> values) {
  if (values.empty()) throw StatError("rank_transform: empty input");
  require_finite(values, "rank_transform");
  const auto r2 = doubled_ranks(values);
  std::vector<double> out(r2.size());
  for (std::size_t i = 0; i < r2.size(); ++i) out[i] = static_cast<double>(r2[i]) / 2.0;
  return out;
}

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  CorrelationResult out;
  out.n = x.size();
  out.coefficient = pearson_raw(x, y);
  out.p_value = correlation_p(out.coefficient, out.n);
  return out;
}

CorrelationResult spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const auto rx2 = doubled_ranks(x);
  const auto ry2 = doubled_ranks(y);
  if (std::all_of(rx2.begin(), rx2.end(), [&](std::int64_t r) { return r == rx2.front(); }) ||
      std::all_of(ry2.begin(), ry2.end(), [&](std::int64_t r) { return r == ry2.front(); })) {
    throw StatError("correlation undefined for a constant vector");
  }
  std::vector<double> rx(rx2.begin(), rx2.end());
  std::vector<double> ry(ry2.begin(), ry2.end());
  CorrelationResult out;
  out.n = x.size();
  out.coefficient = pearson_raw(rx, ry);
  bool exact = out.n <= kSpearmanExactMaxN;
  std::span<const std::int64_t> fixed = rx2;
  std::vector<std::int64_t> permuted = ry2;
  if (!exact && out.n <= kSpearmanTiedExactMaxN) {
    // permute whichever sample has fewer distinct arrangements
    const auto ax = distinct_arrangements(rx2, kSpearmanTiedExactBudget);
    const auto ay = distinct_arrangements(ry2, kSpearmanTiedExactBudget);
    if (std::min(ax, ay) <= kSpearmanTiedExactBudget) {
      exact = true;
      if (ax < ay) {
        fixed = ry2;
        permuted = rx2;
      }
    }
  }
  if (exact) {
    out.p_value = exact_spearman_p(fixed, permuted);
    out.exact_p = true;
  } else {
    out.p_value = correlation_p(out.coefficient, out.n);
  }
  return out;
}

double rank_sum_of_first(std::span<const double> a, std::span<const double> b) {
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto r2 = doubled_ranks(pooled);
  std::int64_t w2 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) w2 += r2[i];
  return static_cast<double>(w2) / 2.0;
}

RankSumResult ranksum(std::span<const double> a, std::span<const double> b) {
  if (a.empty() && b.empty()) throw StatError("ranksum: both samples empty");
  if (a.empty() || b.empty()) throw StatError("ranksum: each sample needs at least one value");
  require_finite(a, "ranksum");
  require_finite(b, "ranksum");

  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t n = na + nb;
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto r2 = doubled_ranks(pooled);

  std::int64_t w2 = 0;
  for (std::size_t i = 0; i < na; ++i) w2 += r2[i];

  RankSumResult out;
  out.n_a = na;
  out.n_b = nb;
  out.statistic = static_cast<double>(w2) / 2.0;

  const double dna = static_cast<double>(na);
  const double dnb = static_cast<double>(nb);
  const double dn = static_cast<double>(n);
  const double mu = dna * (dn + 1.0) / 2.0;

  // tie correction term sum(t^3 - t)
  std::vector<std::int64_t> sorted = r2;
  std::sort(sorted.begin(), sorted.end());
  double tie_sum = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie_sum += t * t * t - t;
    i = j;
  }
  const double var = n > 1 ? dna * dnb / 12.0 * ((dn + 1.0) - tie_sum / (dn * (dn - 1.0))) : 0.0;
  out.z = var > 0.0 ? (out.statistic - mu) / std::sqrt(var) : 0.0;

  if (n <= kRankSumExactMaxN) {
    // count[k][s]: subsets of size k with doubled rank sum s
    const std::int64_t max_sum = std::accumulate(r2.begin(), r2.end(), std::int64_t{0});
    std::vector<std::vector<std::uint64_t>> count(
        na + 1, std::vector<std::uint64_t>(static_cast<std::size_t>(max_sum) + 1, 0));
    count[0][0] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = static_cast<std::size_t>(r2[i]);
      for (std::size_t k = std::min(i + 1, na); k >= 1; --k) {
        for (std::size_t s = static_cast<std::size_t>(max_sum); s >= r; --s) {
          count[k][s] += count[k - 1][s - r];
        }
      }
    }
    const auto mu2 = static_cast<std::int64_t>(na * (n + 1));  // 2*mu
    const std::int64_t observed = std::abs(w2 - mu2);
    std::uint64_t hits = 0;
    std::uint64_t total = 0;
    for (std::int64_t s = 0; s <= max_sum; ++s) {
      const std::uint64_t c = count[na][static_cast<std::size_t>(s)];
      total += c;
      if (std::abs(s - mu2) >= observed) hits += c;
    }
    out.p_value = static_cast<double>(hits) / static_cast<double>(total);
    out.exact = true;
  } else {
    out.p_value = var > 0.0 ? normal_two_sided_p(out.z) : 1.0;
  }
  return out;
}

namespace detail {

namespace {

// Solves the k*k SPD system in place via Cholesky; returns false if not SPD.
bool cholesky_inverse(std::vector<double> a, std::size_t k, std::vector<double>& inverse) {
  std::vector<double> l(k * k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    CompensatedSum d;
    d.add(a[j * k + j]);
    for (std::size_t p = 0; p < j; ++p) d.add(-l[j * k + p] * l[j * k + p]);
    const double diag = d.value();
    if (!(diag > 0.0)) return false;
    l[j * k + j] = std::sqrt(diag);
    for (std::size_t i = j + 1; i < k; ++i) {
      CompensatedSum s;
      s.add(a[i * k + j]);
      for (std::size_t p = 0; p < j; ++p) s.add(-l[i * k + p] * l[j * k + p]);
      l[i * k + j] = s.value() / l[j * k + j];
    }
  }
  inverse.assign(k * k, 0.0);
  std::vector<double> e(k), z(k);
  for (std::size_t c = 0; c < k; ++c) {
    std::fill(e.begin(), e.end(), 0.0);
    e[c] = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      CompensatedSum s;
      s.add(e[i]);
      for (std::size_t p = 0; p < i; ++p) s.add(-l[i * k + p] * z[p]);
      z[i] = s.value() / l[i * k + i];
    }
    for (std::size_t ii = k; ii-- > 0;) {
      CompensatedSum s;
      s.add(z[ii]);
      for (std::size_t p = ii + 1; p < k; ++p) s.add(-l[p * k + ii] * inverse[p * k + c]);
      inverse[ii * k + c] = s.value() / l[ii * k + ii];
    }
  }
  return true;
}

std::vector<double> mat_vec(const std::vector<double>& m, std::size_t k,
                            std::span<const double> v) {
  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = compensated_dot(std::span<const double>(m.data() + i * k, k), v);
  }
  return out;
}

}  // namespace

WlsSolution solve_wls(const Matrix& x, std::span<const double> y,
                      std::span<const double> weights) {
  const std::size_t n = x.rows();
  const std::size_t k = x.cols();
  if (y.size() != n) throw StatError("regression: y length does not match X rows");
  if (!weights.empty() && weights.size() != n) {
    throw StatError("regression: weights length does not match X rows");
  }
  if (n <= k) throw StatError(fmt::format("regression: need n > k (n={}, k={})", n, k));
  require_finite(y, "regression y");
  for (std::size_t r = 0; r < n; ++r) require_finite(x.row(r), "regression X");

  std::vector<double> w(n, 1.0);
  if (!weights.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
        throw StatError("regression: weights must be finite and non-negative");
      }
      w[i] = weights[i];
    }
  }
  const double sw = compensated_sum(w);
  if (!(sw > 0.0)) throw StatError("regression: all weights are zero");

  WlsSolution sol;
  sol.n_effective = static_cast<std::size_t>(
      std::count_if(w.begin(), w.end(), [](double v) { return v > 0.0; }));

  std::vector<double> xbar(k);
  for (std::size_t j = 0; j < k; ++j) {
    CompensatedSum s;
    for (std::size_t i = 0; i < n; ++i) s.add(w[i] * x(i, j));
    xbar[j] = s.value() / sw;
  }
  const double ybar = compensated_dot(w, y) / sw;

  // Column-major centered, sqrt-weighted design plus rhs.
  std::vector<double> a(n * k);
  std::vector<double> b(n);
  std::vector<double> sqw(n);
  for (std::size_t i = 0; i < n; ++i) sqw[i] = std::sqrt(w[i]);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < n; ++i) a[j * n + i] = sqw[i] * (x(i, j) - xbar[j]);
  }
  for (std::size_t i = 0; i < n; ++i) b[i] = sqw[i] * (y[i] - ybar);

  auto col = [&](std::size_t j, std::size_t from) {
    return std::span<double>(a.data() + j * n + from, n - from);
  };

  std::vector<double> col_norm(k);
  for (std::size_t j = 0; j < k; ++j) {
    auto c = col(j, 0);
    col_norm[j] = std::sqrt(compensated_dot(c, c));
  }

  // Gram matrix kept for the ridge path.
  std::vector<double> gram(k * k);
  std::vector<double> xtb(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) gram[i * k + j] = compensated_dot(col(i, 0), col(j, 0));
    xtb[i] = compensated_dot(col(i, 0), b);
  }

  // Householder QR.
  bool full_rank = true;
  std::vector<double> rdiag(k);
  std::vector<double> v(n);
  for (std::size_t j = 0; j < k && full_rank; ++j) {
    auto cj = col(j, j);
    const double norm = std::sqrt(compensated_dot(cj, cj));
    if (col_norm[j] == 0.0 || norm <= 1e-10 * col_norm[j]) {
      full_rank = false;
      break;
    }
    const double alpha = cj[0] > 0.0 ? -norm : norm;
    const std::size_t m = n - j;
    for (std::size_t i = 0; i < m; ++i) v[i] = cj[i];
    v[0] -= alpha;
    std::span<const double> vs(v.data(), m);
    const double vnorm2 = compensated_dot(vs, vs);
    for (std::size_t c = j + 1; c < k; ++c) {
      auto cc = col(c, j);
      const double s = 2.0 * compensated_dot(vs, cc) / vnorm2;
      for (std::size_t i = 0; i < m; ++i) cc[i] -= s * v[i];
    }
    std::span<double> bs(b.data() + j, m);
    const double sb = 2.0 * compensated_dot(vs, bs) / vnorm2;
    for (std::size_t i = 0; i < m; ++i) bs[i] -= sb * v[i];
    cj[0] = alpha;
    for (std::size_t i = 1; i < m; ++i) cj[i] = 0.0;
    rdiag[j] = alpha;
  }

  sol.beta.assign(k, 0.0);
  if (full_rank) {
    for (std::size_t ii = k; ii-- > 0;) {
      CompensatedSum s;
      s.add(b[ii]);
      for (std::size_t c = ii + 1; c < k; ++c) s.add(-a[c * n + ii] * sol.beta[c]);
      sol.beta[ii] = s.value() / rdiag[ii];
    }
    if (!cholesky_inverse(gram, k, sol.unscaled_cov)) full_rank = false;
  }
  if (!full_rank) {
    sol.degenerate = true;
    double diag_mean = 0.0;
    for (std::size_t j = 0; j < k; ++j) diag_mean += gram[j * k + j];
    diag_mean /= static_cast<double>(k);
    const double lambda = 1e-8 * (diag_mean > 0.0 ? diag_mean : 1.0);
    std::vector<double> ridge = gram;
    for (std::size_t j = 0; j < k; ++j) ridge[j * k + j] += lambda;
    if (!cholesky_inverse(ridge, k, sol.unscaled_cov)) {
      throw StatError("regression: ridge fallback failed");
    }
    sol.beta = mat_vec(sol.unscaled_cov, k, xtb);
  }

  {
    CompensatedSum s;
    s.add(ybar);
    for (std::size_t j = 0; j < k; ++j) s.add(-xbar[j] * sol.beta[j]);
    sol.intercept = s.value();
  }

  CompensatedSum ss_res, ss_tot;
  for (std::size_t i = 0; i < n; ++i) {
    CompensatedSum fit;
    fit.add(sol.intercept);
    for (std::size_t j = 0; j < k; ++j) fit.add(x(i, j) * sol.beta[j]);
    const double r = y[i] - fit.value();
    const double d = y[i] - ybar;
    ss_res.add(w[i] * r * r);
    ss_tot.add(w[i] * d * d);
  }
  sol.ss_res = ss_res.value();
  sol.ss_tot = ss_tot.value();
  return sol;
}

}  // namespace detail

RegressionResult ols_fit(const Matrix& x, std::span<const double> y,
                         std::span<const double> weights) {
  const auto sol = detail::solve_wls(x, y, weights);
  const std::size_t k = x.cols();

  RegressionResult out;
  out.coefficients = sol.beta;
  out.intercept = sol.intercept;
  out.n = x.rows();
  out.degenerate = sol.degenerate;
  out.r_squared = sol.ss_tot > 0.0 ? std::clamp(1.0 - sol.ss_res / sol.ss_tot, 0.0, 1.0) : 0.0;

  const double df = static_cast<double>(sol.n_effective) - static_cast<double>(k) - 1.0;
  out.p_values.assign(k, std::numeric_limits<double>::quiet_NaN());
  if (df > 0.0) {
    const double sigma2 = sol.ss_res / df;
    for (std::size_t j = 0; j < k; ++j) {
      const double se = std::sqrt(std::max(0.0, sigma2 * sol.unscaled_cov[j * k + j]));
      if (se > 0.0) {
        out.p_values[j] = t_two_sided_p(sol.beta[j] / se, df);
      } else {
        out.p_values[j] = sol.beta[j] == 0.0 ? 1.0 : 0.0;
      }
    }
    if (k == 0 || sol.ss_tot <= 0.0) {
      out.model_p_value = 1.0;
    } else if (out.r_squared >= 1.0) {
      out.model_p_value = 0.0;
    } else {
      const double f = (out.r_squared / static_cast<double>(k)) / ((1.0 - out.r_squared) / df);
      boost::math::fisher_f dist(static_cast<double>(k), df);
      out.model_p_value = boost::math::cdf(boost::math::complement(dist, f));
    }
  } else {
    out.model_p_value = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

RegressionResult rank_regression(const Matrix& x, std::span<const double> y,
                                 std::span<const double> weights) {
  if (y.size() != x.rows()) throw StatError("regression: y length does not match X rows");
  if (x.rows() <= x.cols()) {
    throw StatError(fmt::format("regression: need n > k (n={}, k={})", x.rows(), x.cols()));
  }
  Matrix ranked(x.rows(), x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    const auto c = x.column(j);
    ranked.set_column(j, rank_transform(c));
  }
  const auto ry = rank_transform(y);
  return ols_fit(ranked, ry, weights);
}

double permutation_pvalue_oracle(const TwoSampleStatistic& statistic, std::span<const double> a,
                                 std::span<const double> b, std::size_t max_n) {
  const std::size_t n = a.size() + b.size();
  if (n > max_n || n > 24) {
    throw StatError(fmt::format("permutation oracle: {} values exceed bound {}", n, max_n));
  }
  if (a.empty() || b.empty()) throw StatError("permutation oracle: empty sample");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());

  std::vector<double> stats;
  std::vector<double> ga, gb;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != a.size()) continue;
    ga.clear();
    gb.clear();
    for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1u ? ga : gb).push_back(pooled[i]);
    stats.push_back(statistic(ga, gb));
  }
  const double observed = statistic(a, b);
  const double centre = mean(stats);
  const double obs_dev = std::abs(observed - centre);
  const double tol = 1e-9 * std::max(1.0, obs_dev);
  std::size_t hits = 0;
  for (double s : stats) {
    if (std::abs(s - centre) >= obs_dev - tol) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(stats.size());
}

}  // namespace b12scope::stats
