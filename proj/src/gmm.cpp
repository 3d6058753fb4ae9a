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

#include "gps/gmm.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "gps/gaussian.hpp"

namespace gps {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;

struct ComponentDensity {
  Eigen::LLT<MatX> llt;
  double log_norm;  // -0.5 * (d * log(2*pi) + log|Sigma|)

  explicit ComponentDensity(const MatX& cov) : llt(cov) {
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("fit_em: component covariance not positive definite");
    const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    log_norm = -0.5 * (static_cast<double>(cov.rows()) * kLogTwoPi + log_det);
  }

  // Log-densities of the columns of X (d x n) under N(mean, cov).
  VecX log_density(const MatX& x, const VecX& mean) const {
    MatX centered = x.colwise() - mean;
    MatX solved = llt.matrixL().solve(centered);  // L^-1 (x - mu)
    return (-0.5 * solved.colwise().squaredNorm().array() + log_norm).transpose();
  }
};

double log_sum_exp(const VecX& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

// k-means++ style seeding: first center uniform, the rest by squared-distance
// weighted sampling.
std::vector<int> seed_centers(const MatX& x, int k, std::mt19937_64& rng) {
  const int n = static_cast<int>(x.cols());
  std::vector<int> centers;
  centers.reserve(k);
  std::uniform_int_distribution<int> uniform(0, n - 1);
  centers.push_back(uniform(rng));

  VecX dist2 = (x.colwise() - x.col(centers[0])).colwise().squaredNorm().transpose();
  while (static_cast<int>(centers.size()) < k) {
    const double total = dist2.sum();
    int pick;
    if (total <= 0.0) {
      pick = uniform(rng);  // all points coincide with a center
    } else {
      std::uniform_real_distribution<double> u(0.0, total);
      double r = u(rng);
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        r -= dist2(i);
        if (r <= 0.0) {
          pick = i;
          break;
        }
      }
    }
    centers.push_back(pick);
    dist2 = dist2.cwiseMin(
        (x.colwise() - x.col(pick)).colwise().squaredNorm().transpose().eval());
  }
  return centers;
}

}  // namespace

GmmModel fit_em(const std::vector<VecX>& data, int k, uint64_t seed, const GmmFitOptions& opts) {
  if (k < 1) throw std::invalid_argument("fit_em: need at least one component");
  if (static_cast<int>(data.size()) < k)
    throw std::invalid_argument("fit_em: fewer data points than components");
  const int n = static_cast<int>(data.size());
  const int d = static_cast<int>(data.front().size());

  MatX x(d, n);
  for (int i = 0; i < n; ++i) {
    if (data[i].size() != d) throw std::invalid_argument("fit_em: dimension mismatch");
    x.col(i) = data[i];
  }

  auto [global_mean, global_cov] = empirical_moments(data);
  // Unit fallback scale keeps the floor positive for fully degenerate data.
  const double diag_scale = global_cov.diagonal().mean();
  const double floor = opts.cov_floor_rel * (diag_scale > 0.0 ? diag_scale : 1.0);

  GmmModel model;
  model.cov_floor = floor;
  model.weights.assign(k, 1.0 / k);
  model.means.resize(k);
  model.covs.assign(k, global_cov + floor * MatX::Identity(d, d));

  std::mt19937_64 rng(seed);
  const auto centers = seed_centers(x, k, rng);
  for (int i = 0; i < k; ++i) model.means[i] = x.col(centers[i]);

  MatX log_resp(k, n);
  double prev_ll = -std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    // E-step.
    for (int i = 0; i < k; ++i) {
      ComponentDensity dens(model.covs[i]);
      log_resp.row(i) =
          (dens.log_density(x, model.means[i]).array() + std::log(model.weights[i]))
              .transpose();
    }
    double ll = 0.0;
    for (int j = 0; j < n; ++j) {
      const double lse = log_sum_exp(log_resp.col(j));
      ll += lse;
      log_resp.col(j).array() -= lse;
    }
    model.log_likelihood_history.push_back(ll);
    model.iterations = iter + 1;

    const bool converged =
        iter > 0 && std::abs(ll - prev_ll) <= opts.tol * (1.0 + std::abs(ll));
    prev_ll = ll;

    // M-step.
    MatX resp = log_resp.array().exp();
    for (int i = 0; i < k; ++i) {
      const double nk = resp.row(i).sum();
      const double w = nk / n;
      if (w < opts.collapse_weight) {
        // Re-seed a collapsed component from a random datum.
        std::uniform_int_distribution<int> uniform(0, n - 1);
        model.means[i] = x.col(uniform(rng));
        model.covs[i] = global_cov + floor * MatX::Identity(d, d);
        model.weights[i] = 1.0 / n;
        ++model.reseed_count;
        continue;
      }
      model.weights[i] = w;
      const VecX mean = x * resp.row(i).transpose() / nk;
      MatX centered = x.colwise() - mean;
      MatX weighted = centered.array().rowwise() * resp.row(i).array();
      MatX cov = weighted * centered.transpose() / nk;
      cov = ((cov + cov.transpose()) * 0.5).eval();
      cov.diagonal().array() += floor;
      model.means[i] = mean;
      model.covs[i] = cov;
    }
    const double wsum =
        std::accumulate(model.weights.begin(), model.weights.end(), 0.0);
    for (auto& w : model.weights) w /= wsum;

    if (converged) break;
  }
  return model;
}

GmmPrior gmm_prior(const GmmModel& model, const std::vector<VecX>& window) {
  if (model.components() < 1) throw std::invalid_argument("gmm_prior: unfitted model");
  if (window.empty()) throw std::invalid_argument("gmm_prior: empty window");
  const int d = model.dim();
  const int k = model.components();

  MatX x(d, static_cast<int>(window.size()));
  for (int j = 0; j < static_cast<int>(window.size()); ++j) {
    if (window[j].size() != d) throw std::invalid_argument("gmm_prior: dimension mismatch");
    x.col(j) = window[j];
  }

  // Joint likelihood of the whole window under each component, in log space.
  VecX log_w(k);
  bool finite = true;
  for (int i = 0; i < k; ++i) {
    ComponentDensity dens(model.covs[i]);
    log_w(i) = dens.log_density(x, model.means[i]).sum();
    finite = finite && std::isfinite(log_w(i));
  }

  GmmPrior prior;
  VecX w(k);
  if (!finite) {
    prior.uniform_fallback = true;
    w.setConstant(1.0 / k);
  } else {
    const double lse = log_sum_exp(log_w);
    w = (log_w.array() - lse).exp();
  }

  prior.phi = MatX::Zero(d, d);
  prior.mu0 = VecX::Zero(d);
  for (int i = 0; i < k; ++i) {
    prior.phi += w(i) * model.covs[i];
    prior.mu0 += w(i) * model.means[i];
  }
  prior.phi = ((prior.phi + prior.phi.transpose()) * 0.5).eval();
  return prior;
}

}  // namespace gps
