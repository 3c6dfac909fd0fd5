#pragma once

// Reference computations for tests. They share no code with the library: slow,
// brute-force or extended-precision versions of the same quantities.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using Real = boost::multiprecision::cpp_bin_float_50;

// 1 + (# smaller) + (# equal others) / 2.
inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (j == i) continue;
      if (v[j] < v[i]) less += 1;
      if (v[j] == v[i]) equal += 1;
    }
    r[i] = 1.0 + less + equal / 2.0;
  }
  return r;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  Real mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  Real sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Real dx = Real(x[i]) - mx, dy = Real(y[i]) - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return static_cast<double>(sxy / boost::multiprecision::sqrt(sxx * syy));
}

inline double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(ranks(x), ranks(y));
}

// Exact two-sided permutation p of Spearman's rho: the share of the n! pairings of
// y ranks with x ranks whose |rho| is at least the observed one. Counted by DP over
// the set of used y positions, keyed by the integer sum of doubled-rank products.
inline double spearman_exact_p(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n > 16) throw std::invalid_argument("too large for the DP oracle");
  std::vector<std::int64_t> rx(n), ry(n);
  const auto ax = ranks(x), ay = ranks(y);
  std::int64_t sx = 0, sy = 0, obs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    rx[i] = std::llround(2 * ax[i]);
    ry[i] = std::llround(2 * ay[i]);
    sx += rx[i];
    sy += ry[i];
    obs += rx[i] * ry[i];
  }
  const auto nn = static_cast<std::int64_t>(n);
  const std::int64_t obs_dev = std::llabs(nn * obs - sx * sy);

  std::vector<std::unordered_map<std::int64_t, double>> layer(std::size_t{1} << n);
  layer[0][0] = 1.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const auto i = static_cast<std::size_t>(std::popcount(mask));
    if (i == n) continue;
    for (const auto& [sum, count] : layer[mask]) {
      for (std::size_t j = 0; j < n; ++j) {
        if (mask & (1u << j)) continue;
        layer[mask | (1u << j)][sum + rx[i] * ry[j]] += count;
      }
    }
    std::unordered_map<std::int64_t, double>().swap(layer[mask]);
  }
  double hits = 0, total = 0;
  for (const auto& [sum, count] : layer[(1u << n) - 1]) {
    total += count;
    if (std::llabs(nn * sum - sx * sy) >= obs_dev) hits += count;
  }
  return hits / total;
}

// Exact two-sided rank-sum p by listing every split of the pooled sample.
inline double ranksum_exact_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto r = ranks(pooled);
  const std::size_t n = pooled.size();
  const double expected = a.size() * (n + 1) / 2.0;
  double w_obs = 0;
  for (std::size_t i = 0; i < a.size(); ++i) w_obs += r[i];
  const double dev = std::abs(w_obs - expected);
  double hits = 0, total = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != a.size()) continue;
    double w = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) w += r[i];
    }
    total += 1;
    if (std::abs(w - expected) >= dev - 1e-9) hits += 1;
  }
  return hits / total;
}

// Weighted least squares with intercept via the normal equations in 50-digit
// arithmetic. Returns {intercept, beta_1..beta_k}.
inline std::vector<double> ols(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                               const std::vector<double>& w = {}) {
  const std::size_t n = y.size(), k = x.empty() ? 0 : x[0].size(), m = k + 1;
  std::vector<std::vector<Real>> a(m, std::vector<Real>(m + 1, Real(0)));
  for (std::size_t i = 0; i < n; ++i) {
    const Real wi = w.empty() ? Real(1) : Real(w[i]);
    std::vector<Real> row(m);
    row[0] = 1;
    for (std::size_t j = 0; j < k; ++j) row[j + 1] = x[i][j];
    for (std::size_t p = 0; p < m; ++p) {
      for (std::size_t q = 0; q < m; ++q) a[p][q] += wi * row[p] * row[q];
      a[p][m] += wi * row[p] * Real(y[i]);
    }
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (abs(a[r][col]) > abs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    if (a[col][col] == 0) throw std::runtime_error("singular normal equations");
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col) continue;
      const Real f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= m; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> beta(m);
  for (std::size_t p = 0; p < m; ++p) beta[p] = static_cast<double>(a[p][m] / a[p][p]);
  return beta;
}

inline double mean(const std::vector<double>& v) {
  Real s = 0;
  for (double x : v) s += x;
  return static_cast<double>(s / v.size());
}

}  // namespace oracle
