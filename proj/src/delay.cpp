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

#include "gps/delay.hpp"

namespace gps {

std::vector<int> AugmentLayout::policy_indices() const {
  std::vector<int> idx;
  idx.reserve(policy_dim());
  for (int block = 0; block < n; ++block) {
    const int base = block * (d + du);
    for (int i = 0; i < d; ++i) idx.push_back(base + i);
  }
  return idx;
}

MatX AugmentLayout::policy_selection() const {
  MatX s = MatX::Zero(policy_dim(), z_dim());
  const auto idx = policy_indices();
  for (int row = 0; row < policy_dim(); ++row) s(row, idx[row]) = 1.0;
  return s;
}

VecX AugmentLayout::policy_view(const VecX& z) const {
  VecX out(policy_dim());
  for (int block = 0; block < n; ++block)
    out.segment(block * d, d) = z.segment(block * (d + du), d);
  return out;
}

VecX AugmentLayout::shifted(const VecX& z, const VecX& u, const VecX& x_next) const {
  const int keep = z_dim() - (d + du);
  VecX out(z_dim());
  if (keep > 0) out.head(keep) = z.tail(keep);
  if (n > 1) out.segment(keep, du) = u;
  out.tail(d) = x_next;
  return out;
}

HistoryBuffer::HistoryBuffer(const AugmentLayout& layout, const VecX& x1) : layout_(layout) {
  layout_.validate();
  if (x1.size() != layout_.d) throw std::invalid_argument("HistoryBuffer: state dimension mismatch");
  states_.assign(layout_.n, x1);
  controls_.assign(layout_.n - 1, VecX::Zero(layout_.du));
}

void HistoryBuffer::push(const VecX& x, const VecX& u_prev) {
  if (x.size() != layout_.d || u_prev.size() != layout_.du)
    throw std::invalid_argument("HistoryBuffer: dimension mismatch");
  states_.erase(states_.begin());
  states_.push_back(x);
  if (layout_.n > 1) {
    controls_.erase(controls_.begin());
    controls_.push_back(u_prev);
  }
}

VecX HistoryBuffer::z() const {
  VecX out(layout_.z_dim());
  int at = 0;
  for (int i = 0; i < layout_.n; ++i) {
    out.segment(at, layout_.d) = states_[i];
    at += layout_.d;
    if (i + 1 < layout_.n) {
      out.segment(at, layout_.du) = controls_[i];
      at += layout_.du;
    }
  }
  return out;
}

VecX HistoryBuffer::augment_for_dynamics(const VecX& u_now) const {
  if (u_now.size() != layout_.du)
    throw std::invalid_argument("HistoryBuffer: control dimension mismatch");
  VecX out(layout_.dyn_input_dim());
  out.head(layout_.z_dim()) = z();
  out.tail(layout_.du) = u_now;
  return out;
}

VecX HistoryBuffer::augment_for_policy() const {
  VecX out(layout_.policy_dim());
  for (int i = 0; i < layout_.n; ++i) out.segment(i * layout_.d, layout_.d) = states_[i];
  return out;
}

std::vector<VecX> augmented_states(const Trajectory& traj, const AugmentLayout& layout) {
  traj.validate();
  if (traj.state_dim() != layout.d || traj.control_dim() != layout.du)
    throw std::invalid_argument("augmented_states: layout mismatch");
  std::vector<VecX> out;
  out.reserve(traj.states.size());
  HistoryBuffer buf(layout, traj.states.front());
  out.push_back(buf.z());
  for (int t = 0; t < traj.horizon(); ++t) {
    buf.push(traj.states[t + 1], traj.controls[t]);
    out.push_back(buf.z());
  }
  return out;
}

std::vector<VecX> augmented_tuples(const Trajectory& traj, const AugmentLayout& layout) {
  const auto zs = augmented_states(traj, layout);
  std::vector<VecX> tuples;
  tuples.reserve(traj.horizon());
  for (int t = 0; t < traj.horizon(); ++t) {
    VecX v(layout.dyn_input_dim() + layout.d);
    v.head(layout.z_dim()) = zs[t];
    v.segment(layout.z_dim(), layout.du) = traj.controls[t];
    v.tail(layout.d) = traj.states[t + 1];
    tuples.push_back(std::move(v));
  }
  return tuples;
}

AugmentedAffine lift_dynamics(const MatX& f, const VecX& f0, const AugmentLayout& layout) {
  const int nz = layout.z_dim();
  const int d = layout.d;
  const int du = layout.du;
  if (f.rows() != d || f.cols() != nz + du || f0.size() != d)
    throw std::invalid_argument("lift_dynamics: shape mismatch");

  AugmentedAffine out;
  out.A = MatX::Zero(nz, nz);
  out.B = MatX::Zero(nz, du);
  out.c = VecX::Zero(nz);

  const int keep = nz - (d + du);
  if (keep > 0) out.A.block(0, d + du, keep, keep).setIdentity();
  if (layout.n > 1) out.B.block(keep, 0, du, du).setIdentity();
  out.A.bottomRows(d) = f.leftCols(nz);
  out.B.bottomRows(d) = f.rightCols(du);
  out.c.tail(d) = f0;
  return out;
}

}  // namespace gps
