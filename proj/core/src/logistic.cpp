#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>

#include "b12scope/error.hpp"
#include "b12scope/numeric.hpp"
#include "b12scope/stats.hpp"
#include "wls.hpp"

namespace b12scope::stats {

namespace {

constexpr int kMaxIterations = 100;
constexpr double kTolerance = 1e-10;

double log_likelihood(std::span<const double> y, std::span<const double> p) {
  CompensatedSum ll;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double pi = std::clamp(p[i], 1e-300, 1.0 - 1e-16);
    ll.add(y[i] > 0.5 ? std::log(pi) : std::log1p(-pi));
  }
  return ll.value();
}

}  // namespace

RegressionResult logistic_fit(const Matrix& x, std::span<const double> y) {
  const std::size_t n = x.rows();
  const std::size_t k = x.cols();
  if (y.size() != n) throw StatError("logistic: y length does not match X rows");
  std::size_t positives = 0;
  for (double v : y) {
    if (v != 0.0 && v != 1.0) throw StatError("logistic: y must be 0 or 1");
    positives += v == 1.0 ? 1 : 0;
  }
  if (positives == 0 || positives == n) throw StatError("logistic: outcome has no variation");

  std::vector<double> beta(k, 0.0);
  double intercept = 0.0;
  std::vector<double> eta(n), p(n), w(n), z(n);
  detail::WlsSolution sol;
  bool converged = false;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      CompensatedSum e;
      e.add(intercept);
      for (std::size_t j = 0; j < k; ++j) e.add(x(i, j) * beta[j]);
      eta[i] = e.value();
      p[i] = 1.0 / (1.0 + std::exp(-eta[i]));
      w[i] = std::max(p[i] * (1.0 - p[i]), 1e-12);
      z[i] = eta[i] + (y[i] - p[i]) / w[i];
    }
    sol = detail::solve_wls(x, z, w);
    double delta = std::abs(sol.intercept - intercept);
    for (std::size_t j = 0; j < k; ++j) delta = std::max(delta, std::abs(sol.beta[j] - beta[j]));
    beta = sol.beta;
    intercept = sol.intercept;
    if (delta < kTolerance * (1.0 + std::abs(intercept))) {
      converged = true;
      break;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    CompensatedSum e;
    e.add(intercept);
    for (std::size_t j = 0; j < k; ++j) e.add(x(i, j) * beta[j]);
    p[i] = 1.0 / (1.0 + std::exp(-e.value()));
  }

  const double ll = log_likelihood(y, p);
  const double p0 = static_cast<double>(positives) / static_cast<double>(n);
  std::vector<double> null_p(n, p0);
  const double ll0 = log_likelihood(y, null_p);

  RegressionResult out;
  out.coefficients = beta;
  out.intercept = intercept;
  out.n = n;
  out.degenerate = sol.degenerate || !converged;
  out.r_squared = ll0 < 0.0 ? std::clamp(1.0 - ll / ll0, 0.0, 1.0) : 0.0;
  out.p_values.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double se = std::sqrt(std::max(0.0, sol.unscaled_cov[j * k + j]));
    out.p_values[j] = se > 0.0 ? normal_two_sided_p(beta[j] / se)
                               : std::numeric_limits<double>::quiet_NaN();
  }
  const double lr = std::max(0.0, 2.0 * (ll - ll0));
  if (k > 0) {
    boost::math::chi_squared dist(static_cast<double>(k));
    out.model_p_value = boost::math::cdf(boost::math::complement(dist, lr));
  }
  return out;
}

}  // namespace b12scope::stats
