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
#include <optional>

#include "gps/delay.hpp"
#include "gps/gaussian.hpp"
#include "gps/gmm.hpp"

namespace gps {

/// Inverse-Wishart prior parameters for the per-timestep Gaussians.
struct IwPrior {
  MatX phi;
  VecX mu0;
  double m = 1.0;
  double n0 = 1.0;

  void validate() const {
    if (m <= 0.0 || n0 <= 0.0) throw std::invalid_argument("IwPrior: m and n0 must be positive");
    if (phi.rows() != phi.cols() || phi.rows() != mu0.size())
      throw std::invalid_argument("IwPrior: shape mismatch");
  }
};

/// Posterior moments of one timestep's Gaussian given M empirical tuples:
///   mu    = (m mu0 + M mu_hat) / (m + M)
///   Sigma = (Phi + M Sigma_hat
///            + (M m / (n + m)) (mu_hat - mu0)(mu_hat - mu0)^T) / (M + n0)
/// with n read as n0 (both default to 1).
std::pair<VecX, MatX> posterior_from_moments(const VecX& mu_hat, const MatX& sigma_hat,
                                             int sample_count, const IwPrior& prior);

struct DynamicsFitOptions {
  int gmm_components = 5;
  uint64_t seed = 0;
  GmmFitOptions gmm;
  // When false (default) each trajectory slot's model sees only its own
  // rollouts; the GMM below is fit on this model's pooled tuples.
  bool pool_across_trajectories = false;
};

/// Time-varying locally linear dynamics over delay-augmented tuples
/// <z_t, u_t, x_{t+1}>: one joint Gaussian per timestep, smoothed by the
/// GMM-derived inverse-Wishart prior.
class DynamicsModel {
 public:
  DynamicsModel(std::vector<JointGaussian> per_timestep, AugmentLayout layout, int sample_count);

  int horizon() const { return static_cast<int>(per_timestep_.size()); }
  int sample_count() const { return sample_count_; }
  const AugmentLayout& layout() const { return layout_; }
  const JointGaussian& timestep(int t) const;

  /// Conditional-mean prediction of x_{t+1} from (z_t, u_t); delegates to
  /// condition_gaussian on the timestep's joint.
  VecX predict(int t, const VecX& z, const VecX& u) const;

  /// Exact affine form of the timestep's conditional mean.
  AffineMap linearize(int t) const;

  bool used_prior_fallback() const { return prior_fallback_; }
  void mark_prior_fallback() { prior_fallback_ = true; }

 private:
  std::vector<JointGaussian> per_timestep_;
  AugmentLayout layout_;
  int sample_count_ = 0;
  bool prior_fallback_ = false;
};

/// Fits one model from the M rollouts of a single trajectory slot. Tuples
/// are delay-augmented internally; the GMM prior is fit on the tuples
/// pooled over all timesteps, and each timestep's (Phi, mu0) comes from
/// gmm_prior on that timestep's M-tuple window. Falls back to the global
/// empirical prior (Phi = global cov, mu0 = global mean) when the GMM fit
/// fails.
DynamicsModel fit_dynamics(const std::vector<Trajectory>& rollouts, const AugmentLayout& layout,
                           const DynamicsFitOptions& opts = {});

}  // namespace gps
