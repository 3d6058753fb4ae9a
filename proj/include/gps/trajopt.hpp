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
//
// iLQG on the learned time-varying affine dynamics with the
// policy-deviation objective l* = l + lambda ||u - pi(x)||^2.
//
// Backward pass (t = T -> 1): quadratize l* about the nominal (the policy
// term through a first-order expansion of pi), form the Q-function from the
// lifted affine dynamics and V_{t+1}, and minimize over the control
// deviation: feedforward k_t and feedback L_t = -Quu^-1 Qux. Quu carries a
// Levenberg term mu*I, scaled up on factorization failure.
//
// Forward pass: roll u_t = u^_t + alpha k_t + L_t (z_t - z^_t) through the
// learned model, backtracking alpha until the modified cost does not
// increase.

#pragma once

#include "gps/cost.hpp"
#include "gps/dynamics.hpp"
#include "gps/policy.hpp"

namespace gps {

struct ValueQuadratic {
  VecX vz;
  MatX vzz;
};

struct BackwardPassResult {
  std::vector<VecX> z_nominal;              // T+1 expansion points
  std::vector<VecX> u_nominal;              // T
  std::vector<VecX> feedforward;            // T, k_t
  std::vector<MatX> gains;                  // T, L_t (du x z_dim)
  std::vector<ValueQuadratic> value;        // T+1 value-function expansions
  double expected_improvement = 0.0;        // predicted decrease at alpha = 1
  double mu = 0.0;                          // Levenberg level actually used

  int horizon() const { return static_cast<int>(u_nominal.size()); }

  /// Raw-state open-loop view (x^_t, u^_t) of the nominal.
  Trajectory open_loop(const AugmentLayout& layout) const;
};

struct LevenbergState {
  double mu = 1e-6;
  static constexpr double kMin = 1e-10;
  static constexpr double kMax = 1e10;
};

/// One backward sweep around the nominal. `policy` may be null when
/// lambda = 0. Throws "backward pass diverged" when Quu cannot be made
/// positive definite within the regularization cap.
BackwardPassResult backward_pass(const DynamicsModel& model, const std::vector<VecX>& z_nominal,
                                 const std::vector<VecX>& u_nominal, const CostModel& cost,
                                 const PolicyNet* policy, LevenbergState& lm);

struct ForwardPassResult {
  std::vector<VecX> z;  // T+1
  std::vector<VecX> u;  // T
  double cost = 0.0;    // total modified cost of the accepted rollout
  double alpha = 0.0;   // accepted step scale (0 when not improved)
  bool improved = false;

  Trajectory trajectory(const AugmentLayout& layout) const;
};

/// Closed-loop rollout through the learned model at a fixed step scale.
ForwardPassResult rollout_with_gains(const DynamicsModel& model, const BackwardPassResult& result,
                                     double alpha);

/// Backtracking forward pass (alpha = alpha0, alpha0/2, ...). When no step
/// avoids a cost increase the nominal is returned unchanged with
/// improved = false.
ForwardPassResult forward_pass(const DynamicsModel& model, const BackwardPassResult& result,
                               const CostModel& cost, const PolicyNet* policy,
                               double alpha0 = 1.0, int max_backtracks = 12);

}  // namespace gps
