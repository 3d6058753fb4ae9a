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

#include <random>

#include "gps/policy.hpp"
#include "gps/trajopt.hpp"

namespace gps {

VecX synthesis_sigma(const std::vector<VecX>& z_nominal, double sigma_rel) {
  if (z_nominal.empty()) throw std::invalid_argument("synthesis_sigma: empty trajectory");
  const auto [mean, cov] = empirical_moments(z_nominal);
  (void)mean;
  return sigma_rel * cov.diagonal().array().max(0.0).sqrt().matrix();
}

RegressionSet synthesize_training_pairs(const BackwardPassResult& result,
                                        const AugmentLayout& layout, const VecX& sigma,
                                        int samples_per_step, uint64_t seed,
                                        int trajectory_index) {
  if (samples_per_step < 0)
    throw std::invalid_argument("synthesize_training_pairs: negative sample count");
  if (sigma.size() != layout.z_dim())
    throw std::invalid_argument("synthesize_training_pairs: sigma dimension mismatch");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  RegressionSet set;
  set.samples.reserve(static_cast<size_t>(result.horizon()) * (samples_per_step + 1));

  for (int t = 0; t < result.horizon(); ++t) {
    const VecX& z_hat = result.z_nominal[static_cast<size_t>(t)];
    const VecX& u_hat = result.u_nominal[static_cast<size_t>(t)];
    const MatX& gain = result.gains[static_cast<size_t>(t)];

    set.samples.push_back(
        {layout.policy_view(z_hat), u_hat, trajectory_index, t, /*sampled=*/false});

    for (int s = 0; s < samples_per_step; ++s) {
      VecX z = z_hat;
      for (int i = 0; i < z.size(); ++i) z(i) += sigma(i) * normal(rng);
      VecX u = u_hat + gain * (z - z_hat);
      set.samples.push_back({layout.policy_view(z), std::move(u), trajectory_index, t,
                             /*sampled=*/true});
    }
  }
  return set;
}

}  // namespace gps
