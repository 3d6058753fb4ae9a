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

#include "gps/trajopt.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace gps {

namespace {

// Adds the quadratized policy-deviation penalty to the task expansion.
// pi is linearized at the nominal: r(dz, du) ~ r0 + du - J dz with
// r0 = u^ - pi(view(z^)) and J the policy Jacobian lifted to z columns.
void add_penalty_expansion(CostExpansion& e, const CostModel& cost, const PolicyNet& policy,
                           const VecX& z, const VecX& u) {
  const AugmentLayout& lay = cost.layout;
  const VecX view = lay.policy_view(z);
  const VecX r0 = u - policy.forward(view);
  const MatX j_view = policy.jacobian(view);  // du x policy_dim

  MatX j = MatX::Zero(j_view.rows(), lay.z_dim());
  const auto idx = lay.policy_indices();
  for (int col = 0; col < static_cast<int>(idx.size()); ++col)
    j.col(idx[static_cast<size_t>(col)]) = j_view.col(col);

  const double lam = cost.lambda;
  e.l0 += lam * r0.squaredNorm();
  e.lu += 2.0 * lam * r0;
  e.lz -= 2.0 * lam * (j.transpose() * r0);
  e.luu += 2.0 * lam * MatX::Identity(u.size(), u.size());
  e.lzz += 2.0 * lam * (j.transpose() * j);
  e.luz -= 2.0 * lam * j;
}

}  // namespace

Trajectory BackwardPassResult::open_loop(const AugmentLayout& layout) const {
  Trajectory traj;
  traj.states.reserve(z_nominal.size());
  for (const auto& z : z_nominal) traj.states.push_back(layout.current_state(z));
  traj.controls = u_nominal;
  return traj;
}

BackwardPassResult backward_pass(const DynamicsModel& model, const std::vector<VecX>& z_nominal,
                                 const std::vector<VecX>& u_nominal, const CostModel& cost,
                                 const PolicyNet* policy, LevenbergState& lm) {
  const int horizon = model.horizon();
  if (static_cast<int>(u_nominal.size()) != horizon ||
      static_cast<int>(z_nominal.size()) != horizon + 1)
    throw std::invalid_argument("backward_pass: nominal length mismatch");
  const AugmentLayout& lay = model.layout();
  const int nz = lay.z_dim();
  if (cost.lambda != 0.0 && policy == nullptr)
    throw std::invalid_argument("backward_pass: nonzero lambda needs a policy");

  // The timestep linearizations are nominal-independent; hoist them out of
  // the regularization retry loop.
  std::vector<AugmentedAffine> affine;
  affine.reserve(horizon);
  for (int t = 0; t < horizon; ++t) {
    const AffineMap fm = model.linearize(t);
    affine.push_back(lift_dynamics(fm.F, fm.f0, lay));
  }

  while (true) {
    BackwardPassResult result;
    result.z_nominal = z_nominal;
    result.u_nominal = u_nominal;
    result.feedforward.assign(horizon, VecX());
    result.gains.assign(horizon, MatX());
    result.value.assign(horizon + 1, ValueQuadratic());

    const TerminalExpansion term = cost.task->quadratize_terminal(z_nominal.back());
    result.value[horizon].vz = term.lz;
    result.value[horizon].vzz = ((term.lzz + term.lzz.transpose()) * 0.5).eval();

    bool failed = false;
    double dv1 = 0.0, dv2 = 0.0;

    for (int t = horizon - 1; t >= 0; --t) {
      const auto& dyn = affine[static_cast<size_t>(t)];
      const ValueQuadratic& next = result.value[static_cast<size_t>(t + 1)];

      CostExpansion e = cost.task->quadratize(z_nominal[t], u_nominal[t]);
      if (cost.lambda != 0.0)
        add_penalty_expansion(e, cost, *policy, z_nominal[t], u_nominal[t]);

      // The nominal need not be a model rollout (the first sweep expands
      // around real sensor data); fold the defect into the value gradient
      // so the expansion stays exact for the affine model.
      const VecX defect =
          dyn.A * z_nominal[t] + dyn.B * u_nominal[t] + dyn.c - z_nominal[t + 1];
      const VecX vz_eff = next.vz + next.vzz * defect;

      const VecX qz = e.lz + dyn.A.transpose() * vz_eff;
      const VecX qu = e.lu + dyn.B.transpose() * vz_eff;
      const MatX vzz_a = next.vzz * dyn.A;
      const MatX qzz = e.lzz + dyn.A.transpose() * vzz_a;
      const MatX quz = e.luz + dyn.B.transpose() * vzz_a;
      MatX quu = e.luu + dyn.B.transpose() * next.vzz * dyn.B;
      quu = ((quu + quu.transpose()) * 0.5).eval();
      quu.diagonal().array() += lm.mu;

      Eigen::LLT<MatX> llt(quu);
      if (llt.info() != Eigen::Success) {
        failed = true;
        break;
      }

      const VecX k = -llt.solve(qu);
      const MatX gain = -llt.solve(quz);
      result.feedforward[static_cast<size_t>(t)] = k;
      result.gains[static_cast<size_t>(t)] = gain;

      ValueQuadratic& value = result.value[static_cast<size_t>(t)];
      value.vz = qz + gain.transpose() * (quu * k) + gain.transpose() * qu + quz.transpose() * k;
      MatX vzz = qzz + gain.transpose() * (quu * gain) + gain.transpose() * quz +
                 quz.transpose() * gain;
      value.vzz = ((vzz + vzz.transpose()) * 0.5).eval();

      dv1 += k.dot(qu);
      dv2 += 0.5 * k.dot(quu * k);
    }

    if (!failed) {
      result.expected_improvement = -(dv1 + dv2);
      result.mu = lm.mu;
      lm.mu = std::max(lm.mu * 0.5, LevenbergState::kMin);
      return result;
    }
    lm.mu *= 10.0;
    if (lm.mu > LevenbergState::kMax) throw std::runtime_error("backward pass diverged");
  }
}

Trajectory ForwardPassResult::trajectory(const AugmentLayout& layout) const {
  Trajectory traj;
  traj.states.reserve(z.size());
  for (const auto& zt : z) traj.states.push_back(layout.current_state(zt));
  traj.controls = u;
  return traj;
}

ForwardPassResult rollout_with_gains(const DynamicsModel& model, const BackwardPassResult& result,
                                     double alpha) {
  const int horizon = result.horizon();
  const AugmentLayout& lay = model.layout();

  ForwardPassResult out;
  out.alpha = alpha;
  out.z.reserve(horizon + 1);
  out.u.reserve(horizon);
  out.z.push_back(result.z_nominal.front());
  for (int t = 0; t < horizon; ++t) {
    const VecX& zt = out.z.back();
    VecX u = result.u_nominal[t] + alpha * result.feedforward[t] +
             result.gains[t] * (zt - result.z_nominal[t]);
    const VecX x_next = model.predict(t, zt, u);
    out.z.push_back(lay.shifted(zt, u, x_next));
    out.u.push_back(std::move(u));
  }
  return out;
}

ForwardPassResult forward_pass(const DynamicsModel& model, const BackwardPassResult& result,
                               const CostModel& cost, const PolicyNet* policy, double alpha0,
                               int max_backtracks) {
  if (!(alpha0 > 0.0 && alpha0 <= 1.0))
    throw std::invalid_argument("forward_pass: alpha must be in (0, 1]");
  const double nominal_cost =
      total_modified_cost(cost, policy, result.z_nominal, result.u_nominal);

  double alpha = alpha0;
  for (int i = 0; i < max_backtracks; ++i, alpha *= 0.5) {
    ForwardPassResult candidate = rollout_with_gains(model, result, alpha);
    bool finite = true;
    for (const auto& zt : candidate.z) finite = finite && zt.allFinite();
    if (!finite) continue;
    candidate.cost = total_modified_cost(cost, policy, candidate.z, candidate.u);
    if (candidate.cost <= nominal_cost) {
      candidate.improved = true;
      return candidate;
    }
  }

  ForwardPassResult unchanged;  // flagged "no improvement"
  unchanged.z = result.z_nominal;
  unchanged.u = result.u_nominal;
  unchanged.cost = nominal_cost;
  unchanged.alpha = 0.0;
  unchanged.improved = false;
  return unchanged;
}

}  // namespace gps
