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

#include "gps/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace gps {

PolicyNet::PolicyNet(int input_dim, int output_dim, uint64_t seed) {
  if (input_dim < 1 || output_dim < 1)
    throw std::invalid_argument("PolicyNet: dimensions must be positive");
  const double bound = 1.0 / std::sqrt(static_cast<double>(input_dim));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-bound, bound);
  w_hidden_ = MatX::NullaryExpr(input_dim, input_dim, [&] { return u(rng); });
  w_out_ = MatX::NullaryExpr(output_dim, input_dim, [&] { return u(rng); });
  shift_ = VecX::Zero(input_dim);
  scale_ = VecX::Ones(input_dim);
}

void PolicyNet::set_weights(MatX w_hidden, MatX w_out) {
  if (w_hidden.rows() != input_dim() || w_hidden.cols() != input_dim() ||
      w_out.cols() != input_dim() || w_out.rows() != output_dim())
    throw std::invalid_argument("PolicyNet: weight shape mismatch");
  if (!w_hidden.allFinite() || !w_out.allFinite())
    throw std::invalid_argument("PolicyNet: non-finite weights");
  w_hidden_ = std::move(w_hidden);
  w_out_ = std::move(w_out);
}

void PolicyNet::set_standardization(VecX shift, VecX scale) {
  if (shift.size() != input_dim() || scale.size() != input_dim())
    throw std::invalid_argument("PolicyNet: standardization shape mismatch");
  if ((scale.array() <= 0.0).any())
    throw std::invalid_argument("PolicyNet: scale must be positive");
  shift_ = std::move(shift);
  scale_ = std::move(scale);
  standardization_frozen_ = true;
}

VecX PolicyNet::forward(const VecX& x) const {
  if (x.size() != input_dim()) throw std::invalid_argument("PolicyNet: input dimension mismatch");
  const VecX xs = (x - shift_).cwiseQuotient(scale_);
  const VecX h = (w_hidden_ * xs).cwiseMax(0.0);
  return w_out_ * h.cwiseProduct(xs);
}

MatX PolicyNet::forward_batch(const MatX& x) const {
  MatX xs = (x.colwise() - shift_).array().colwise() / scale_.array();
  MatX h = (w_hidden_ * xs).cwiseMax(0.0);
  return w_out_ * h.cwiseProduct(xs);
}

MatX PolicyNet::jacobian(const VecX& x) const {
  if (x.size() != input_dim()) throw std::invalid_argument("PolicyNet: input dimension mismatch");
  const VecX xs = (x - shift_).cwiseQuotient(scale_);
  const VecX a = w_hidden_ * xs;
  const VecX h = a.cwiseMax(0.0);
  const VecX active = (a.array() > 0.0).cast<double>();

  // dp_i/dxs_j = active_i * W_h(i,j) * xs_i + h_i * delta_ij
  MatX dp = w_hidden_.array().colwise() * (active.cwiseProduct(xs)).array();
  dp.diagonal() += h;
  MatX j = w_out_ * dp;  // du/dxs
  return j.array().rowwise() / scale_.transpose().array();
}

void RegressionSet::validate() const {
  if (samples.empty()) throw std::invalid_argument("RegressionSet: empty");
  const auto in = samples.front().input.size();
  const auto out = samples.front().target.size();
  for (const auto& s : samples) {
    if (s.input.size() != in || s.target.size() != out)
      throw std::invalid_argument("RegressionSet: dimension mismatch");
  }
}

namespace {

struct Batched {
  MatX inputs;   // input_dim x n
  MatX targets;  // output_dim x n
};

Batched to_batched(const RegressionSet& data) {
  Batched b;
  const int n = static_cast<int>(data.size());
  const int in = static_cast<int>(data.samples.front().input.size());
  const int out = static_cast<int>(data.samples.front().target.size());
  b.inputs.resize(in, n);
  b.targets.resize(out, n);
  for (int i = 0; i < n; ++i) {
    b.inputs.col(i) = data.samples[static_cast<size_t>(i)].input;
    b.targets.col(i) = data.samples[static_cast<size_t>(i)].target;
  }
  return b;
}

double run_training(PolicyNet& net, const MatX& xs_all, const MatX& targets,
                    const PolicyFitOptions& opts, double learning_rate, uint64_t seed,
                    int* epochs_run) {
  const int n = static_cast<int>(xs_all.cols());
  const int in = static_cast<int>(xs_all.rows());
  const int out = static_cast<int>(targets.rows());

  MatX w_h = net.hidden_weights();
  MatX w_o = net.output_weights();
  MatX vel_h = MatX::Zero(in, in);
  MatX vel_o = MatX::Zero(out, in);

  std::mt19937_64 rng(seed);
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);

  double epoch_mse = std::numeric_limits<double>::infinity();
  double best_mse = std::numeric_limits<double>::infinity();
  int plateau = 0;
  *epochs_run = 0;

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double sq_err = 0.0;
    for (int start = 0; start < n; start += opts.batch_size) {
      const int bs = std::min(opts.batch_size, n - start);
      MatX xb(in, bs), tb(out, bs);
      for (int i = 0; i < bs; ++i) {
        xb.col(i) = xs_all.col(order[static_cast<size_t>(start + i)]);
        tb.col(i) = targets.col(order[static_cast<size_t>(start + i)]);
      }

      // Forward.
      MatX a = w_h * xb;
      MatX h = a.cwiseMax(0.0);
      MatX p = h.cwiseProduct(xb);
      MatX u = w_o * p;

      MatX err = u - tb;
      sq_err += err.squaredNorm();

      // Backward (mean over the batch).
      MatX du = (2.0 / bs) * err;
      MatX g_o = du * p.transpose();
      MatX dp = w_o.transpose() * du;
      MatX da = dp.cwiseProduct(xb).cwiseProduct((a.array() > 0.0).cast<double>().matrix());
      MatX g_h = da * xb.transpose();

      vel_o = opts.momentum * vel_o - learning_rate * g_o;
      vel_h = opts.momentum * vel_h - learning_rate * g_h;
      w_o += vel_o;
      w_h += vel_h;
    }
    epoch_mse = sq_err / n;
    *epochs_run = epoch + 1;
    if (!std::isfinite(epoch_mse)) return epoch_mse;

    if (epoch_mse < best_mse * (1.0 - opts.plateau_rel_tol)) {
      best_mse = epoch_mse;
      plateau = 0;
    } else if (++plateau >= opts.plateau_patience) {
      break;
    }
  }

  net.set_weights(std::move(w_h), std::move(w_o));
  return epoch_mse;
}

}  // namespace

PolicyFitResult fit_policy(PolicyNet& net, const RegressionSet& data,
                           const PolicyFitOptions& opts, uint64_t seed) {
  data.validate();
  if (static_cast<int>(data.samples.front().input.size()) != net.input_dim() ||
      static_cast<int>(data.samples.front().target.size()) != net.output_dim())
    throw std::invalid_argument("fit_policy: data does not match net dimensions");

  Batched b = to_batched(data);

  if (!net.standardization_frozen()) {
    const VecX mean = b.inputs.rowwise().mean();
    VecX std_dev =
        ((b.inputs.colwise() - mean).array().square().rowwise().mean()).sqrt().matrix();
    for (int i = 0; i < std_dev.size(); ++i) {
      if (std_dev(i) < 1e-8) std_dev(i) = 1.0;  // constant input dimension
    }
    net.set_standardization(mean, std_dev);
  }

  const MatX xs_all =
      (b.inputs.colwise() - net.input_shift()).array().colwise() / net.input_scale().array();

  PolicyFitResult result;
  const MatX w_h0 = net.hidden_weights();
  const MatX w_o0 = net.output_weights();
  double lr = opts.learning_rate;
  for (int attempt = 0;; ++attempt) {
    const double mse = run_training(net, xs_all, b.targets, opts, lr, seed, &result.epochs_run);
    if (std::isfinite(mse)) {
      result.final_mse = mse;
      result.retries = attempt;
      return result;
    }
    if (attempt >= opts.max_retries) throw std::runtime_error("policy training diverged");
    net.set_weights(w_h0, w_o0);  // restart from where this fit began
    lr *= 0.5;
  }
}

}  // namespace gps
