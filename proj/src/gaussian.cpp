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

#include "gps/gaussian.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace gps {

namespace {

constexpr double kSymmetryRelTol = 1e-12;
constexpr double kPsdRelTol = 1e-10;
constexpr double kConditionRidgeRel = 1e-6;

// Ridge-regularized LDLT of the <x,u> marginal covariance. Throws when the
// marginal is singular even after regularization (zero-trace marginals get
// no ridge at all and fail here).
Eigen::LDLT<MatX> marginal_factorization(const JointGaussian& g) {
  const int nxu = g.dims().xu();
  MatX s_aa = g.cov().topLeftCorner(nxu, nxu);
  const double diag_mean = s_aa.diagonal().mean();
  s_aa.diagonal().array() += kConditionRidgeRel * diag_mean;

  Eigen::LDLT<MatX> ldlt(s_aa);
  bool singular = ldlt.info() != Eigen::Success;
  if (!singular) {
    const VecX d = ldlt.vectorD();
    const double dmax = d.cwiseAbs().maxCoeff();
    singular = !(dmax > 0.0) || d.minCoeff() < -kPsdRelTol * dmax;
  }
  if (singular) throw std::runtime_error("condition_gaussian: degenerate marginal");
  return ldlt;
}

}  // namespace

JointGaussian::JointGaussian(VecX mean, MatX cov, BlockDims dims)
    : mean_(std::move(mean)), cov_(std::move(cov)), dims_(dims) {
  const int n = dims_.total();
  if (dims_.x < 0 || dims_.u < 0 || dims_.xp < 0 || n <= 0)
    throw std::invalid_argument("JointGaussian: invalid block dims");
  if (mean_.size() != n)
    throw std::invalid_argument("JointGaussian: mean length must equal sum of block dims");
  if (cov_.rows() != n || cov_.cols() != n)
    throw std::invalid_argument("JointGaussian: covariance shape mismatch");
  if (!mean_.allFinite() || !cov_.allFinite())
    throw std::invalid_argument("JointGaussian: non-finite entries");

  const double scale = cov_.cwiseAbs().maxCoeff();
  const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryRelTol * std::max(scale, 1.0))
    throw std::invalid_argument("JointGaussian: covariance not symmetric");
  // Exact symmetry from here on.
  cov_ = ((cov_ + cov_.transpose()) * 0.5).eval();

  Eigen::SelfAdjointEigenSolver<MatX> es(cov_, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::invalid_argument("JointGaussian: eigenvalue check failed");
  const double min_ev = es.eigenvalues().minCoeff();
  if (min_ev < -kPsdRelTol * std::max(cov_.trace(), 1e-300))
    throw std::invalid_argument("JointGaussian: covariance not positive semi-definite");
}

std::pair<VecX, MatX> empirical_moments(const std::vector<VecX>& samples) {
  if (samples.empty()) throw std::invalid_argument("empirical_moments: no samples");
  const Eigen::Index dim = samples.front().size();
  for (const auto& s : samples) {
    if (s.size() != dim) throw std::invalid_argument("empirical_moments: dimension mismatch");
  }

  const double m = static_cast<double>(samples.size());

  // Shifted mean: mu = v0 + avg(v - v0). A coordinate that is constant over
  // all samples has zero shifted sum, which keeps its mean bit-exact and its
  // covariance diagonal entry exactly zero.
  VecX shifted_sum = VecX::Zero(dim);
  for (const auto& s : samples) shifted_sum += s - samples.front();
  const VecX mean = samples.front() + shifted_sum / m;

  MatX cov = MatX::Zero(dim, dim);
  for (const auto& s : samples) {
    const VecX d = s - mean;
    cov.noalias() += d * d.transpose();
  }
  cov /= m;
  cov = ((cov + cov.transpose()) * 0.5).eval();
  return {mean, cov};
}

VecX condition_gaussian(const JointGaussian& g, const VecX& xu) {
  const BlockDims& d = g.dims();
  if (xu.size() != d.xu())
    throw std::invalid_argument("condition_gaussian: xu length must be dim_x + dim_u");

  const auto ldlt = marginal_factorization(g);
  const VecX rhs = xu - g.mean_xu();
  const VecX y = ldlt.solve(rhs);
  const MatX s_ba = g.cov().bottomLeftCorner(d.xp, d.xu());
  VecX out = g.mean_xp() + s_ba * y;
  if (!out.allFinite()) throw std::runtime_error("condition_gaussian: degenerate marginal");
  return out;
}

AffineMap conditional_affine(const JointGaussian& g) {
  const BlockDims& d = g.dims();
  const auto ldlt = marginal_factorization(g);
  const MatX s_ab = g.cov().topRightCorner(d.xu(), d.xp);

  AffineMap map;
  map.F = ldlt.solve(s_ab).transpose();  // xp x (x+u)
  map.f0 = g.mean_xp() - map.F * g.mean_xu();
  if (!map.F.allFinite() || !map.f0.allFinite())
    throw std::runtime_error("condition_gaussian: degenerate marginal");
  return map;
}

}  // namespace gps
