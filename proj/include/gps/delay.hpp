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

#include "gps/types.hpp"

namespace gps {

/// Layout of the n-step state-history augmentation shared by the dynamics
/// model, the trajectory optimizer, and the policy.
///
/// The augmented state (oldest first, controls interleaved between the
/// states they were applied at) is
///   z_t = [x_{t-n+1}, u_{t-n+1}, ..., x_{t-1}, u_{t-1}, x_t]
/// of dimension n*d + (n-1)*du. The dynamics-model input appends the
/// current control: [z_t, u_t] of dimension n*(d + du). The policy input
/// is the states-only view [x_{t-n+1}, ..., x_t] of dimension n*d.
struct AugmentLayout {
  int n = 1;   // history length, counting the current state
  int d = 4;   // state dimension
  int du = 1;  // control dimension

  int z_dim() const { return n * d + (n - 1) * du; }
  int dyn_input_dim() const { return n * (d + du); }
  int policy_dim() const { return n * d; }
  int current_state_offset() const { return z_dim() - d; }

  void validate() const {
    if (n < 1 || d < 1 || du < 1)
      throw std::invalid_argument("AugmentLayout: n, d, du must be positive");
  }

  /// Indices of the state entries within z, oldest first (the policy view).
  std::vector<int> policy_indices() const;

  /// z_dim x policy_dim selection: policy_view(z) = S * z ... transposed
  /// convention: returns S with shape policy_dim x z_dim.
  MatX policy_selection() const;

  VecX policy_view(const VecX& z) const;
  VecX current_state(const VecX& z) const { return z.segment(current_state_offset(), d); }

  /// Next augmented state: drop the oldest (state, control) pair, append
  /// the control just applied and the resulting state.
  VecX shifted(const VecX& z, const VecX& u, const VecX& x_next) const;
};

/// Rolling window of the last n observed states and the n-1 controls
/// applied between them, oldest first. Episode start replicates the first
/// state into all slots with zero controls.
class HistoryBuffer {
 public:
  HistoryBuffer(const AugmentLayout& layout, const VecX& x1);

  /// Append the newest state together with the control that produced it.
  void push(const VecX& x, const VecX& u_prev);

  /// [z_t, u_now]: the dynamics-model input (dimension n*(d+du)).
  VecX augment_for_dynamics(const VecX& u_now) const;

  /// States-only view (dimension n*d): the policy input.
  VecX augment_for_policy() const;

  /// The augmented state z_t (dimension n*d + (n-1)*du).
  VecX z() const;

  const AugmentLayout& layout() const { return layout_; }
  const std::vector<VecX>& states() const { return states_; }
  const std::vector<VecX>& controls() const { return controls_; }

 private:
  AugmentLayout layout_;
  std::vector<VecX> states_;    // n, oldest first
  std::vector<VecX> controls_;  // n-1, controls_[i] was applied at states_[i]
};

/// The augmented-state sequence z_1..z_{T+1} of a trajectory, with
/// episode-start padding.
std::vector<VecX> augmented_states(const Trajectory& traj, const AugmentLayout& layout);

/// Dynamics-fitting tuples [z_t, u_t, x_{t+1}] for t = 1..T.
std::vector<VecX> augmented_tuples(const Trajectory& traj, const AugmentLayout& layout);

/// Lift of the learned one-step map x_{t+1} = F [z_t, u_t] + f0 to the full
/// augmented transition z_{t+1} = A z_t + B u_t + c (shift rows are copies).
struct AugmentedAffine {
  MatX A;  // z_dim x z_dim
  MatX B;  // z_dim x du
  VecX c;  // z_dim
};

AugmentedAffine lift_dynamics(const MatX& f, const VecX& f0, const AugmentLayout& layout);

}  // namespace gps
