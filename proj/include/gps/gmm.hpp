// Copyright 2026 The gps_pour Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

#include "gps/types.hpp"

namespace gps {

struct GmmFitOptions {
  int max_iters = 50;
  double tol = 1e-6;               // relative log-likelihood change
  double cov_floor_rel = 1e-8;     // times mean(diag) of the global covariance
  double collapse_weight = 1e-8;   // components below this get re-seeded
};

/// Mixture of full-covariance Gaussians fitted by EM.
struct GmmModel {
  std::vector<double> weights;  // nonnegative, sum to 1
  std::vector<VecX> means;
  std::vector<MatX> covs;       // symmetric, eigenvalues >= floor

  // Fit diagnostics.
  std::vector<double> log_likelihood_history;  // one entry per EM iteration
  int iterations = 0;
  int reseed_count = 0;
  double cov_floor = 0.0;

  int components() const { return static_cast<int>(weights.size()); }
  int dim() const { return means.empty() ? 0 : static_cast<int>(means.front().size()); }
};

/// EM fit with k-means++ seeding from `seed`. Deterministic for a fixed
/// seed. Covariances are floored each M-step; collapsed components
/// (weight < collapse_weight) are re-seeded from a random datum.
GmmModel fit_em(const std::vector<VecX>& data, int k, uint64_t seed,
                const GmmFitOptions& opts = {});

/// Likelihood-weighted average of the mixture moments:
///   w_i = p(window | mean_i, cov_i)   (joint over the window's points,
///                                      log-space, log-sum-exp normalized)
///   Phi = sum_i w_i cov_i / sum w_i,  mu0 = sum_i w_i mean_i / sum w_i.
/// Falls back to uniform weights when the log-weights are not finite.
struct GmmPrior {
  MatX phi;
  VecX mu0;
  bool uniform_fallback = false;
};

GmmPrior gmm_prior(const GmmModel& model, const std::vector<VecX>& window);

}  // namespace gps
