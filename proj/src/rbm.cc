// src/rbm.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sed/rbm.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sed/errors.h"
#include "sed/rng.h"

namespace sed {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) {
  if (z > 30.0) return z;
  return std::log1p(std::exp(z));
}

Matrix sigmoid_all(Matrix m) {
  return m.unaryExpr([](double z) { return sigmoid(z); });
}

void sample_bernoulli(const Matrix& probs, Matrix* out, Rng* rng) {
  out->resize(probs.rows(), probs.cols());
  for (Index r = 0; r < probs.rows(); ++r)
    for (Index c = 0; c < probs.cols(); ++c)
      (*out)(r, c) = rng->bernoulli(probs(r, c)) ? 1.0 : 0.0;
}

void check_finite(const RbmParams& p) {
  if (!p.weights.allFinite() || !p.hidden_bias.allFinite() ||
      !p.visible_bias.allFinite())
    throw NumericalError("rbm_train: non-finite parameters (reduce learning rate)");
}

}  // namespace

Vector rbm_transform(const RbmParams& p, const Vector& v) {
  if (v.size() != p.visible_dim())
    throw DataError("rbm_transform: dimension mismatch");
  return p.weights.transpose() * v + p.hidden_bias;
}

Matrix rbm_transform_rows(const RbmParams& p, const Matrix& rows) {
  if (rows.cols() != p.visible_dim())
    throw DataError("rbm_transform: dimension mismatch");
  return (rows * p.weights).rowwise() + p.hidden_bias.transpose();
}

double rbm_free_energy(const RbmParams& p, const Vector& v) {
  if (v.size() != p.visible_dim())
    throw DataError("rbm_free_energy: dimension mismatch");
  const double quad = 0.5 * (v - p.visible_bias).squaredNorm();
  const Vector z = p.weights.transpose() * v + p.hidden_bias;
  double soft = 0.0;
  for (Index i = 0; i < z.size(); ++i) soft += softplus(z(i));
  return quad - soft;
}

double rbm_reconstruction_error(const RbmParams& p, const Matrix& rows) {
  const Matrix probs = sigmoid_all(rbm_transform_rows(p, rows));
  const Matrix recon =
      (probs * p.weights.transpose()).rowwise() + p.visible_bias.transpose();
  return (rows - recon).rowwise().squaredNorm().mean();
}

RbmParams rbm_train(const Matrix& data, Index hidden_dim,
                    const TrainConfig& cfg,
                    std::vector<double>* epoch_errors) {
  const Index n = data.rows();
  const Index vis = data.cols();
  if (n == 0 || vis == 0) throw DataError("rbm_train: empty data");
  if (hidden_dim < 1 || cfg.minibatch < 1 || cfg.cd_steps < 1)
    throw DataError("rbm_train: invalid config");

  Rng rng(cfg.rng_seed);

  RbmParams p;
  p.weights.resize(vis, hidden_dim);
  rng.fill_normal(p.weights, cfg.init_sigma);
  p.hidden_bias = Vector::Zero(hidden_dim);
  p.visible_bias = Vector::Zero(vis);

  Matrix vel_w = Matrix::Zero(vis, hidden_dim);
  Vector vel_bh = Vector::Zero(hidden_dim);
  Vector vel_bv = Vector::Zero(vis);

  if (epoch_errors) epoch_errors->push_back(rbm_reconstruction_error(p, data));

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});

  Matrix batch, pos_probs, hidden, v_neg, neg_probs;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // Fisher-Yates with the shared stream keeps runs reproducible.
    for (Index i = n - 1; i > 0; --i)
      std::swap(order[i], order[rng.uniform_int(0, static_cast<int>(i))]);

    for (Index start = 0; start < n; start += cfg.minibatch) {
      const Index m = std::min<Index>(cfg.minibatch, n - start);
      batch.resize(m, vis);
      for (Index r = 0; r < m; ++r) batch.row(r) = data.row(order[start + r]);

      pos_probs = sigmoid_all(rbm_transform_rows(p, batch));
      sample_bernoulli(pos_probs, &hidden, &rng);

      for (int step = 0; step < cfg.cd_steps; ++step) {
        v_neg = (hidden * p.weights.transpose()).rowwise() +
                p.visible_bias.transpose();
        neg_probs = sigmoid_all(rbm_transform_rows(p, v_neg));
        if (step + 1 < cfg.cd_steps) sample_bernoulli(neg_probs, &hidden, &rng);
      }

      const double inv_m = 1.0 / static_cast<double>(m);
      const Matrix grad_w =
          (batch.transpose() * pos_probs - v_neg.transpose() * neg_probs) *
              inv_m -
          cfg.weight_decay * p.weights;
      const Vector grad_bh = (pos_probs - neg_probs).colwise().mean();
      const Vector grad_bv = (batch - v_neg).colwise().mean();

      vel_w = cfg.momentum * vel_w + cfg.learning_rate * grad_w;
      vel_bh = cfg.momentum * vel_bh + cfg.learning_rate * grad_bh;
      vel_bv = cfg.momentum * vel_bv + cfg.learning_rate * grad_bv;
      p.weights += vel_w;
      p.hidden_bias += vel_bh;
      p.visible_bias += vel_bv;
      check_finite(p);
    }
    if (epoch_errors)
      epoch_errors->push_back(rbm_reconstruction_error(p, data));
  }
  return p;
}

}  // namespace sed
