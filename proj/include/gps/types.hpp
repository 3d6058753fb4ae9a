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

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace gps {

using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// Observed pouring state: cup angle, grams left to pour, its per-step
/// change, and grams still in the cup.
struct StateVec {
  static constexpr int kDim = 4;

  double angle = 0.0;        // rad, 0 = upright, pi = inverted
  double remaining = 0.0;    // g, target minus observed-poured
  double d_remaining = 0.0;  // g per timestep
  double in_cup = 0.0;       // g

  VecX to_vector() const {
    VecX v(kDim);
    v << angle, remaining, d_remaining, in_cup;
    return v;
  }

  static StateVec from_vector(const VecX& v) {
    if (v.size() != kDim) throw std::invalid_argument("StateVec: dimension must be 4");
    StateVec s;
    s.angle = v(0);
    s.remaining = v(1);
    s.d_remaining = v(2);
    s.in_cup = v(3);
    if (!s.finite()) throw std::invalid_argument("StateVec: non-finite component");
    return s;
  }

  bool finite() const {
    return std::isfinite(angle) && std::isfinite(remaining) && std::isfinite(d_remaining) &&
           std::isfinite(in_cup);
  }
};

/// Wrist angular velocity command (rad/s).
struct ControlVec {
  static constexpr int kDim = 1;

  double wrist_velocity = 0.0;

  VecX to_vector() const {
    VecX v(1);
    v(0) = wrist_velocity;
    return v;
  }

  static ControlVec from_vector(const VecX& v) {
    if (v.size() != kDim) throw std::invalid_argument("ControlVec: dimension must be 1");
    if (!std::isfinite(v(0))) throw std::invalid_argument("ControlVec: non-finite value");
    return ControlVec{v(0)};
  }

  ControlVec clamped(double limit) const {
    double u = wrist_velocity;
    if (u > limit) u = limit;
    if (u < -limit) u = -limit;
    return ControlVec{u};
  }
};

/// A horizon-T rollout: T+1 states and the T controls applied between them.
/// States and controls are kept as plain vectors so the same container can
/// carry 4-dim pouring states or the test environments' generic states.
struct Trajectory {
  std::vector<VecX> states;    // length T+1
  std::vector<VecX> controls;  // length T

  int horizon() const { return static_cast<int>(controls.size()); }
  int state_dim() const { return states.empty() ? 0 : static_cast<int>(states.front().size()); }
  int control_dim() const {
    return controls.empty() ? 0 : static_cast<int>(controls.front().size());
  }

  void validate(int expected_horizon = -1) const {
    if (states.size() != controls.size() + 1)
      throw std::invalid_argument("Trajectory: need exactly one more state than controls");
    if (expected_horizon >= 0 && horizon() != expected_horizon)
      throw std::invalid_argument("Trajectory: horizon does not match configuration");
    for (const auto& x : states) {
      if (x.size() != states.front().size())
        throw std::invalid_argument("Trajectory: inconsistent state dimensions");
      if (!x.allFinite()) throw std::invalid_argument("Trajectory: non-finite state");
    }
    for (const auto& u : controls) {
      if (u.size() != controls.front().size())
        throw std::invalid_argument("Trajectory: inconsistent control dimensions");
      if (!u.allFinite()) throw std::invalid_argument("Trajectory: non-finite control");
    }
  }
};

/// splitmix64 step; used to derive independent deterministic seed streams
/// from (base seed, stream id) pairs so parallel work stays reproducible.
inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b) {
  return mix_seed(mix_seed(seed, a), b);
}

inline uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  return mix_seed(mix_seed(seed, a, b), c);
}

}  // namespace gps
