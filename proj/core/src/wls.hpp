#pragma once

#include <span>
#include <vector>

#include "b12scope/stats.hpp"

namespace b12scope::stats::detail {

struct WlsSolution {
  std::vector<double> beta;
  double intercept = 0.0;
  // (X_c' W X_c)^-1 for the centered design, or the ridge-regularized inverse.
  std::vector<double> unscaled_cov;  // k*k row-major
  double ss_res = 0.0;
  double ss_tot = 0.0;
  std::size_t n_effective = 0;  // rows with positive weight
  bool degenerate = false;
};

// Shared core of ols_fit and the IRLS loop. Validates shapes and weights.
WlsSolution solve_wls(const Matrix& x, std::span<const double> y, std::span<const double> weights);

}  // namespace b12scope::stats::detail
