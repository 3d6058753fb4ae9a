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

#include <memory>

#include "gps/delay.hpp"
#include "gps/policy.hpp"
#include "gps/types.hpp"

namespace gps {

/// Second-order expansion of a running cost at a nominal point.
struct CostExpansion {
  double l0 = 0.0;
  VecX lz, lu;
  MatX lzz, luu, luz;
};

struct TerminalExpansion {
  double l0 = 0.0;
  VecX lz;
  MatX lzz;
};

/// Task cost over the augmented state and control.
class CostFunction {
 public:
  virtual ~CostFunction() = default;
  virtual double running(const VecX& z, const VecX& u) const = 0;
  virtual double terminal(const VecX& z) const = 0;
  virtual CostExpansion quadratize(const VecX& z, const VecX& u) const = 0;
  virtual TerminalExpansion quadratize_terminal(const VecX& z) const = 0;
};

/// Pouring task cost: control effort plus squared remaining-to-pour,
/// with a heavier terminal term on the final remaining. Reads the current
/// state block of the augmented vector.
class PouringCost final : public CostFunction {
 public:
  PouringCost(const AugmentLayout& layout, double w_u = 1e-3, double w_remaining = 1e-2,
              double w_terminal = 10.0);

  double running(const VecX& z, const VecX& u) const override;
  double terminal(const VecX& z) const override;
  CostExpansion quadratize(const VecX& z, const VecX& u) const override;
  TerminalExpansion quadratize_terminal(const VecX& z) const override;

 private:
  AugmentLayout layout_;
  double w_u_, w_remaining_, w_terminal_;
  int remaining_index_;  // offset of `remaining` within z
};

/// General quadratic cost  z'Qz + u'Ru + q'z + r'u, terminal z'Qf z + qf'z.
/// Used by the linear test environments.
class QuadraticCost final : public CostFunction {
 public:
  QuadraticCost(MatX q, MatX r, MatX qf);
  QuadraticCost(MatX q, MatX r, MatX qf, VecX q_lin, VecX r_lin, VecX qf_lin);

  double running(const VecX& z, const VecX& u) const override;
  double terminal(const VecX& z) const override;
  CostExpansion quadratize(const VecX& z, const VecX& u) const override;
  TerminalExpansion quadratize_terminal(const VecX& z) const override;

 private:
  MatX q_, r_, qf_;
  VecX q_lin_, r_lin_, qf_lin_;
};

/// Task cost plus the policy-deviation weight used by the trajectory
/// optimizer's modified objective.
struct CostModel {
  std::shared_ptr<const CostFunction> task;
  double lambda = 0.0;
  AugmentLayout layout;
};

/// l*(z, u) = l(z, u) + lambda * ||u - pi(states_view(z))||^2
double modified_cost(const CostModel& cost, const PolicyNet& policy, const VecX& z, const VecX& u);

/// Same with the policy optional; lambda = 0 or a null policy reduce to the
/// task cost.
double modified_cost(const CostModel& cost, const PolicyNet* policy, const VecX& z, const VecX& u);

/// Total modified cost along a trajectory in augmented coordinates.
double total_modified_cost(const CostModel& cost, const PolicyNet* policy,
                           const std::vector<VecX>& z_seq, const std::vector<VecX>& u_seq);

}  // namespace gps
