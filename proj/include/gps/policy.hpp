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

#include "gps/delay.hpp"
#include "gps/types.hpp"

namespace gps {

struct BackwardPassResult;  // trajopt

/// Policy network:  u = W_out (relu(W_h x) .* x)
/// with exactly one hidden unit per input dimension (the element-wise
/// product requires matching shapes) and no biases. Inputs pass through a
/// frozen per-dimension standardization (identity until the first fit).
class PolicyNet {
 public:
  PolicyNet(int input_dim, int output_dim, uint64_t seed);

  VecX forward(const VecX& x) const;

  /// Analytic du/dx. At relu kinks the inactive side (derivative 0) is used.
  MatX jacobian(const VecX& x) const;

  /// Batched forward over columns of x (input_dim x n).
  MatX forward_batch(const MatX& x) const;

  int input_dim() const { return static_cast<int>(w_hidden_.cols()); }
  int output_dim() const { return static_cast<int>(w_out_.rows()); }

  const MatX& hidden_weights() const { return w_hidden_; }
  const MatX& output_weights() const { return w_out_; }
  const VecX& input_shift() const { return shift_; }
  const VecX& input_scale() const { return scale_; }
  bool standardization_frozen() const { return standardization_frozen_; }

  void set_weights(MatX w_hidden, MatX w_out);
  void set_standardization(VecX shift, VecX scale);

 private:
  MatX w_hidden_;  // input_dim x input_dim (one weight row per hidden unit)
  MatX w_out_;     // output_dim x input_dim
  VecX shift_, scale_;
  bool standardization_frozen_ = false;
};

/// Supervised pairs (augmented state -> control) with provenance.
struct RegressionSample {
  VecX input;
  VecX target;
  int trajectory = -1;
  int timestep = -1;
  bool sampled = false;  // false for the optimized trajectory's own pair
};

struct RegressionSet {
  std::vector<RegressionSample> samples;

  size_t size() const { return samples.size(); }
  void validate() const;
};

struct PolicyFitOptions {
  int epochs = 200;          // cap; early-stops on plateau
  int batch_size = 32;
  double learning_rate = 1e-3;
  double momentum = 0.9;
  double plateau_rel_tol = 1e-4;  // relative epoch-MSE improvement
  int plateau_patience = 5;
  int max_retries = 3;  // on non-finite loss, halve the rate and restart
};

struct PolicyFitResult {
  double final_mse = 0.0;
  int epochs_run = 0;
  int retries = 0;
};

/// Mini-batch gradient descent with momentum on mean squared error.
/// Freezes the net's input standardization from the data on the first fit.
/// Deterministic for fixed seed and data; the data set is never mutated.
PolicyFitResult fit_policy(PolicyNet& net, const RegressionSet& data,
                           const PolicyFitOptions& opts, uint64_t seed);

/// Per-dimension sampling stddev: sigma_rel times each augmented
/// coordinate's standard deviation over the nominal trajectory.
VecX synthesis_sigma(const std::vector<VecX>& z_nominal, double sigma_rel);

/// Regression data from an optimized trajectory: for every timestep the
/// pair (view(z^_t), u^_t) plus `samples_per_step` draws
/// z_s ~ N(z^_t, diag(sigma^2)) labeled with the gains-matrix controls
/// u^_t + L_t (z_s - z^_t). Deterministic under `seed`.
RegressionSet synthesize_training_pairs(const BackwardPassResult& result,
                                        const AugmentLayout& layout, const VecX& sigma,
                                        int samples_per_step, uint64_t seed,
                                        int trajectory_index = -1);

}  // namespace gps
