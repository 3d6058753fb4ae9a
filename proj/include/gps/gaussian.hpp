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

#include <utility>

#include "gps/types.hpp"

namespace gps {

/// Block boundaries of a joint distribution over concatenated <x, u, x'>.
struct BlockDims {
  int x = 0;   // (augmented) state block
  int u = 0;   // control block
  int xp = 0;  // next-state block

  int total() const { return x + u + xp; }
  int xu() const { return x + u; }
};

/// Moment-form Gaussian over concatenated <x, u, x'> with named blocks.
///
/// Construction validates symmetry (1e-12 relative), positive
/// semi-definiteness (smallest eigenvalue >= -1e-10 * trace) and the
/// mean/blocks dimension match. Immutable afterwards.
class JointGaussian {
 public:
  JointGaussian(VecX mean, MatX cov, BlockDims dims);

  const VecX& mean() const { return mean_; }
  const MatX& cov() const { return cov_; }
  const BlockDims& dims() const { return dims_; }

  VecX mean_xu() const { return mean_.head(dims_.xu()); }
  VecX mean_xp() const { return mean_.tail(dims_.xp); }
  const MatX& cov_ref() const { return cov_; }

 private:
  VecX mean_;
  MatX cov_;
  BlockDims dims_;
};

/// Affine map x' ~ F * <x,u> + f0 extracted from a joint Gaussian.
struct AffineMap {
  MatX F;   // xp x (x+u)
  VecX f0;  // xp
};

/// Arithmetic mean and population (1/M) covariance of the samples.
/// Deviations are taken against a mean computed relative to the first
/// sample, so constant coordinates yield exactly zero covariance entries.
std::pair<VecX, MatX> empirical_moments(const std::vector<VecX>& samples);

/// Mean of x' | <x,u> = xu:
///   mu_xp + Sigma_{xp,xu} Sigma_{xu,xu}^{-1} (xu - mu_xu)
/// The marginal covariance gets a ridge of 1e-6 * mean(diag) before the
/// symmetric solve; a marginal that stays singular raises
/// "degenerate marginal".
VecX condition_gaussian(const JointGaussian& g, const VecX& xu);

/// The conditional mean as an explicit affine map in <x,u>:
///   F = Sigma_{xp,xu} Sigma_{xu,xu}^{-1},   f0 = mu_xp - F mu_xu.
/// Uses the same ridge and factorization as condition_gaussian, so
/// F * xu + f0 tracks condition_gaussian to solver precision.
AffineMap conditional_affine(const JointGaussian& g);

}  // namespace gps
