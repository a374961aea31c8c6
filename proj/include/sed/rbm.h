// include/sed/rbm.h

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

#ifndef SED_RBM_H_
#define SED_RBM_H_

#include <cstdint>
#include <vector>

#include "sed/scaler.h"
#include "sed/types.h"

namespace sed {

// Contrastive-divergence settings shared by the RBM and cRBM trainers.
struct TrainConfig {
  int cd_steps = 10;
  double learning_rate = 1e-3;
  int epochs = 30;
  int minibatch = 64;
  double momentum = 0.9;
  double weight_decay = 1e-4;
  uint64_t rng_seed = 0;
  double init_sigma = 0.01;  // stddev of the initial weights
};

// Gaussian-Bernoulli RBM. Visible units are standardized, so the
// per-unit scale is fixed at 1.
struct RbmParams {
  Matrix weights;       // visible_dim x hidden_dim
  Vector hidden_bias;   // hidden_dim
  Vector visible_bias;  // visible_dim

  Index visible_dim() const { return weights.rows(); }
  Index hidden_dim() const { return weights.cols(); }
};

// Trained parameters plus the standardizer for the space they consume.
struct RbmModel {
  RbmParams params;
  Scaler input_scaler;
};

// Deterministic affine map h_i = sum_j v_j W_ji + b_i. No sigmoid, no
// sampling; this is the representation used downstream.
Vector rbm_transform(const RbmParams& p, const Vector& v);
Matrix rbm_transform_rows(const RbmParams& p, const Matrix& rows);

// Free energy of a standardized visible vector:
//   F(v) = sum_j (v_j - bv_j)^2 / 2 - sum_i softplus((W^T v + bh)_i)
double rbm_free_energy(const RbmParams& p, const Vector& v);

// Mean ||v - vhat||^2 with vhat from one mean-field hidden/visible pass.
double rbm_reconstruction_error(const RbmParams& p, const Matrix& rows);

// CD-k training on standardized rows. Positive phase uses hidden
// probabilities; the negative chain alternates Bernoulli hidden samples
// with mean-field Gaussian visible reconstructions. Throws
// NumericalError if any update produces non-finite parameters. When
// epoch_errors is given it receives the reconstruction error before
// training and after every epoch.
RbmParams rbm_train(const Matrix& data, Index hidden_dim,
                    const TrainConfig& cfg,
                    std::vector<double>* epoch_errors = nullptr);

}  // namespace sed

#endif  // SED_RBM_H_
