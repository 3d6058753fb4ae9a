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

#include "gps/cost.hpp"

namespace gps {

PouringCost::PouringCost(const AugmentLayout& layout, double w_u, double w_remaining,
                         double w_terminal)
    : layout_(layout), w_u_(w_u), w_remaining_(w_remaining), w_terminal_(w_terminal) {
  layout_.validate();
  if (layout_.d < 2) throw std::invalid_argument("PouringCost: state must carry `remaining`");
  remaining_index_ = layout_.current_state_offset() + 1;
}

double PouringCost::running(const VecX& z, const VecX& u) const {
  const double rem = z(remaining_index_);
  return w_u_ * u.squaredNorm() + w_remaining_ * rem * rem;
}

double PouringCost::terminal(const VecX& z) const {
  const double rem = z(remaining_index_);
  return w_terminal_ * rem * rem;
}

CostExpansion PouringCost::quadratize(const VecX& z, const VecX& u) const {
  CostExpansion e;
  e.l0 = running(z, u);
  e.lz = VecX::Zero(z.size());
  e.lz(remaining_index_) = 2.0 * w_remaining_ * z(remaining_index_);
  e.lu = 2.0 * w_u_ * u;
  e.lzz = MatX::Zero(z.size(), z.size());
  e.lzz(remaining_index_, remaining_index_) = 2.0 * w_remaining_;
  e.luu = 2.0 * w_u_ * MatX::Identity(u.size(), u.size());
  e.luz = MatX::Zero(u.size(), z.size());
  return e;
}

TerminalExpansion PouringCost::quadratize_terminal(const VecX& z) const {
  TerminalExpansion e;
  e.l0 = terminal(z);
  e.lz = VecX::Zero(z.size());
  e.lz(remaining_index_) = 2.0 * w_terminal_ * z(remaining_index_);
  e.lzz = MatX::Zero(z.size(), z.size());
  e.lzz(remaining_index_, remaining_index_) = 2.0 * w_terminal_;
  return e;
}

QuadraticCost::QuadraticCost(MatX q, MatX r, MatX qf)
    : QuadraticCost(std::move(q), std::move(r), std::move(qf), VecX(), VecX(), VecX()) {}

QuadraticCost::QuadraticCost(MatX q, MatX r, MatX qf, VecX q_lin, VecX r_lin, VecX qf_lin)
    : q_(std::move(q)), r_(std::move(r)), qf_(std::move(qf)), q_lin_(std::move(q_lin)),
      r_lin_(std::move(r_lin)), qf_lin_(std::move(qf_lin)) {
  if (q_lin_.size() == 0) q_lin_ = VecX::Zero(q_.rows());
  if (r_lin_.size() == 0) r_lin_ = VecX::Zero(r_.rows());
  if (qf_lin_.size() == 0) qf_lin_ = VecX::Zero(qf_.rows());
  if (q_.rows() != q_.cols() || r_.rows() != r_.cols() || qf_.rows() != qf_.cols())
    throw std::invalid_argument("QuadraticCost: matrices must be square");
}

double QuadraticCost::running(const VecX& z, const VecX& u) const {
  return z.dot(q_ * z) + u.dot(r_ * u) + q_lin_.dot(z) + r_lin_.dot(u);
}

double QuadraticCost::terminal(const VecX& z) const { return z.dot(qf_ * z) + qf_lin_.dot(z); }

CostExpansion QuadraticCost::quadratize(const VecX& z, const VecX& u) const {
  CostExpansion e;
  e.l0 = running(z, u);
  e.lz = 2.0 * (q_ * z) + q_lin_;
  e.lu = 2.0 * (r_ * u) + r_lin_;
  e.lzz = 2.0 * q_;
  e.luu = 2.0 * r_;
  e.luz = MatX::Zero(u.size(), z.size());
  return e;
}

TerminalExpansion QuadraticCost::quadratize_terminal(const VecX& z) const {
  TerminalExpansion e;
  e.l0 = terminal(z);
  e.lz = 2.0 * (qf_ * z) + qf_lin_;
  e.lzz = 2.0 * qf_;
  return e;
}

double modified_cost(const CostModel& cost, const PolicyNet* policy, const VecX& z,
                     const VecX& u) {
  double value = cost.task->running(z, u);
  if (cost.lambda != 0.0 && policy != nullptr) {
    const VecX dev = u - policy->forward(cost.layout.policy_view(z));
    value += cost.lambda * dev.squaredNorm();
  }
  return value;
}

double modified_cost(const CostModel& cost, const PolicyNet& policy, const VecX& z,
                     const VecX& u) {
  return modified_cost(cost, &policy, z, u);
}

double total_modified_cost(const CostModel& cost, const PolicyNet* policy,
                           const std::vector<VecX>& z_seq, const std::vector<VecX>& u_seq) {
  if (z_seq.size() != u_seq.size() + 1)
    throw std::invalid_argument("total_modified_cost: length mismatch");
  double total = 0.0;
  for (size_t t = 0; t < u_seq.size(); ++t) total += modified_cost(cost, policy, z_seq[t], u_seq[t]);
  return total + cost.task->terminal(z_seq.back());
}

}  // namespace gps
