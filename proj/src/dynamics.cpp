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

#include "gps/dynamics.hpp"

namespace gps {

std::pair<VecX, MatX> posterior_from_moments(const VecX& mu_hat, const MatX& sigma_hat,
                                             int sample_count, const IwPrior& prior) {
  prior.validate();
  if (mu_hat.size() != prior.mu0.size() || sigma_hat.rows() != mu_hat.size() ||
      sigma_hat.cols() != mu_hat.size())
    throw std::invalid_argument("posterior_from_moments: shape mismatch");
  if (sample_count < 1) throw std::invalid_argument("posterior_from_moments: need samples");

  const double m = prior.m;
  const double n = prior.n0;  // n is read as n0
  const double n0 = prior.n0;
  const double big_m = static_cast<double>(sample_count);

  VecX mu = (m * prior.mu0 + big_m * mu_hat) / (m + big_m);
  const VecX dev = mu_hat - prior.mu0;
  MatX sigma = (prior.phi + big_m * sigma_hat +
                (big_m * m / (n + m)) * (dev * dev.transpose())) /
               (big_m + n0);
  sigma = ((sigma + sigma.transpose()) * 0.5).eval();
  return {mu, sigma};
}

DynamicsModel::DynamicsModel(std::vector<JointGaussian> per_timestep, AugmentLayout layout,
                             int sample_count)
    : per_timestep_(std::move(per_timestep)), layout_(layout), sample_count_(sample_count) {
  layout_.validate();
  if (per_timestep_.empty()) throw std::invalid_argument("DynamicsModel: empty model");
  for (const auto& g : per_timestep_) {
    const BlockDims& bd = g.dims();
    if (bd.x != layout_.z_dim() || bd.u != layout_.du || bd.xp != layout_.d)
      throw std::invalid_argument("DynamicsModel: block dims do not match layout");
  }
}

const JointGaussian& DynamicsModel::timestep(int t) const {
  if (t < 0 || t >= horizon()) throw std::out_of_range("DynamicsModel: timestep out of range");
  return per_timestep_[static_cast<size_t>(t)];
}

VecX DynamicsModel::predict(int t, const VecX& z, const VecX& u) const {
  const JointGaussian& g = timestep(t);
  if (z.size() != layout_.z_dim() || u.size() != layout_.du)
    throw std::invalid_argument("DynamicsModel::predict: dimension mismatch");
  VecX zu(layout_.dyn_input_dim());
  zu.head(z.size()) = z;
  zu.tail(u.size()) = u;
  return condition_gaussian(g, zu);
}

AffineMap DynamicsModel::linearize(int t) const { return conditional_affine(timestep(t)); }

DynamicsModel fit_dynamics(const std::vector<Trajectory>& rollouts, const AugmentLayout& layout,
                           const DynamicsFitOptions& opts) {
  if (rollouts.empty()) throw std::invalid_argument("fit_dynamics: no rollouts");
  const int horizon = rollouts.front().horizon();
  for (const auto& r : rollouts) {
    if (r.horizon() != horizon) throw std::invalid_argument("fit_dynamics: mismatched horizons");
  }

  const int sample_count = static_cast<int>(rollouts.size());
  std::vector<std::vector<VecX>> tuples;  // per rollout, T tuples each
  tuples.reserve(rollouts.size());
  std::vector<VecX> pooled;
  pooled.reserve(rollouts.size() * static_cast<size_t>(horizon));
  for (const auto& r : rollouts) {
    tuples.push_back(augmented_tuples(r, layout));
    for (const auto& v : tuples.back()) pooled.push_back(v);
  }

  auto [global_mean, global_cov] = empirical_moments(pooled);

  std::optional<GmmModel> gmm;
  bool prior_fallback = false;
  const int k = std::min<int>(opts.gmm_components, static_cast<int>(pooled.size()));
  try {
    gmm = fit_em(pooled, k, opts.seed, opts.gmm);
  } catch (const std::exception&) {
    prior_fallback = true;  // global empirical prior instead
  }

  const BlockDims dims{layout.z_dim(), layout.du, layout.d};
  std::vector<JointGaussian> per_timestep;
  per_timestep.reserve(horizon);

  IwPrior prior;
  prior.m = 1.0;
  prior.n0 = 1.0;

  std::vector<VecX> window(sample_count, VecX());
  for (int t = 0; t < horizon; ++t) {
    for (int i = 0; i < sample_count; ++i) window[static_cast<size_t>(i)] = tuples[i][t];
    auto [mu_hat, sigma_hat] = empirical_moments(window);

    if (gmm) {
      const GmmPrior p = gmm_prior(*gmm, window);
      prior.phi = p.phi;
      prior.mu0 = p.mu0;
    } else {
      prior.phi = global_cov;
      prior.mu0 = global_mean;
    }

    auto [mu, sigma] = posterior_from_moments(mu_hat, sigma_hat, sample_count, prior);
    per_timestep.emplace_back(std::move(mu), std::move(sigma), dims);
  }

  DynamicsModel model(std::move(per_timestep), layout, sample_count);
  if (prior_fallback) model.mark_prior_fallback();
  return model;
}

}  // namespace gps
