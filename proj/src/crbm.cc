// src/crbm.cc

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

#include "sed/crbm.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "sed/errors.h"
#include "sed/features.h"
#include "sed/rng.h"

namespace sed {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
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

void check_finite(const CrbmParams& p) {
  if (!p.weights.allFinite() || !p.autoreg_hidden.allFinite() ||
      !p.autoreg_visible.allFinite() || !p.hidden_bias.allFinite() ||
      !p.visible_bias.allFinite())
    throw NumericalError(
        "crbm_train: non-finite parameters (reduce learning rate)");
}

// Flattened history (oldest first) for frame t of a clip; rows before the
// clip start replicate the first frame.
void gather_history(const Matrix& clip, Index t, int context, Index vis,
                    Eigen::Ref<Eigen::RowVectorXd> out) {
  for (int j = 0; j < context; ++j) {
    const Index src = std::max<Index>(0, t - context + j);
    out.segment(static_cast<Index>(j) * vis, vis) = clip.row(src);
  }
}

struct WindowRef {
  int clip;
  Index t;
};

std::vector<WindowRef> full_history_windows(const std::vector<Matrix>& clips,
                                            int context) {
  std::vector<WindowRef> refs;
  for (size_t c = 0; c < clips.size(); ++c) {
    if (clips[c].rows() <= context)
      throw DataError("crbm: clip shorter than context");
    for (Index t = context; t < clips[c].rows(); ++t)
      refs.push_back({static_cast<int>(c), t});
  }
  return refs;
}

void gather_batch(const std::vector<Matrix>& clips,
                  const std::vector<WindowRef>& refs,
                  const std::vector<size_t>& order, size_t start, Index m,
                  int context, Index vis, Matrix* v, Matrix* u) {
  v->resize(m, vis);
  u->resize(m, static_cast<Index>(context) * vis);
  for (Index r = 0; r < m; ++r) {
    const WindowRef& ref = refs[order[start + r]];
    const Matrix& clip = clips[ref.clip];
    v->row(r) = clip.row(ref.t);
    for (int j = 0; j < context; ++j)
      u->block(r, static_cast<Index>(j) * vis, 1, vis) =
          clip.row(ref.t - context + j);
  }
}

}  // namespace

Vector crbm_transform(const CrbmParams& p, const Vector& v,
                      const Matrix& history) {
  const Index vis = p.visible_dim();
  if (v.size() != vis || history.rows() != p.context_frames ||
      history.cols() != vis)
    throw DataError("crbm_transform: dimension mismatch");
  Eigen::RowVectorXd flat(static_cast<Index>(p.context_frames) * vis);
  for (int j = 0; j < p.context_frames; ++j)
    flat.segment(static_cast<Index>(j) * vis, vis) = history.row(j);
  const Vector dyn_bias =
      p.autoreg_hidden.transpose() * flat.transpose() + p.hidden_bias;
  return p.weights.transpose() * v + dyn_bias;
}

Matrix crbm_transform_sequence(const CrbmParams& p, const Matrix& frames) {
  const Index vis = p.visible_dim();
  if (frames.cols() != vis)
    throw DataError("crbm_transform_sequence: dimension mismatch");
  const Index n = frames.rows();
  const int context = p.context_frames;
  Matrix out(n, p.hidden_dim());
  Eigen::RowVectorXd flat(static_cast<Index>(context) * vis);
  for (Index t = 0; t < n; ++t) {
    gather_history(frames, t, context, vis, flat);
    out.row(t) = (frames.row(t) * p.weights) + (flat * p.autoreg_hidden) +
                 p.hidden_bias.transpose();
  }
  return out;
}

double crbm_reconstruction_error(const CrbmParams& p,
                                 const std::vector<Matrix>& clips) {
  const Index vis = p.visible_dim();
  const int context = p.context_frames;
  double total = 0.0;
  Index count = 0;
  Eigen::RowVectorXd flat(static_cast<Index>(context) * vis);
  for (const Matrix& clip : clips) {
    if (clip.rows() <= context)
      throw DataError("crbm: clip shorter than context");
    for (Index t = context; t < clip.rows(); ++t) {
      gather_history(clip, t, context, vis, flat);
      const Eigen::RowVectorXd dyn_h =
          flat * p.autoreg_hidden + p.hidden_bias.transpose();
      const Eigen::RowVectorXd dyn_v =
          flat * p.autoreg_visible + p.visible_bias.transpose();
      const Eigen::RowVectorXd probs =
          (clip.row(t) * p.weights + dyn_h)
              .unaryExpr([](double z) { return sigmoid(z); });
      const Eigen::RowVectorXd recon = probs * p.weights.transpose() + dyn_v;
      total += (clip.row(t) - recon).squaredNorm();
      ++count;
    }
  }
  return count > 0 ? total / static_cast<double>(count) : 0.0;
}

CrbmParams crbm_train(const std::vector<Matrix>& clips, int context_frames,
                      Index hidden_dim, const TrainConfig& cfg,
                      std::vector<double>* epoch_errors) {
  if (clips.empty()) throw DataError("crbm_train: empty data");
  if (context_frames < 1 || hidden_dim < 1 || cfg.minibatch < 1 ||
      cfg.cd_steps < 1)
    throw DataError("crbm_train: invalid config");
  const Index vis = clips.front().cols();
  for (const Matrix& clip : clips)
    if (clip.cols() != vis) throw DataError("crbm_train: dimension mismatch");

  const std::vector<WindowRef> refs = full_history_windows(clips, context_frames);
  const size_t n = refs.size();
  const Index ctx_dim = static_cast<Index>(context_frames) * vis;

  Rng rng(cfg.rng_seed);

  CrbmParams p;
  p.context_frames = context_frames;
  p.weights.resize(vis, hidden_dim);
  rng.fill_normal(p.weights, cfg.init_sigma);
  p.autoreg_hidden.resize(ctx_dim, hidden_dim);
  rng.fill_normal(p.autoreg_hidden, cfg.init_sigma);
  p.autoreg_visible.resize(ctx_dim, vis);
  rng.fill_normal(p.autoreg_visible, cfg.init_sigma);
  p.hidden_bias = Vector::Zero(hidden_dim);
  p.visible_bias = Vector::Zero(vis);

  Matrix vel_w = Matrix::Zero(vis, hidden_dim);
  Matrix vel_a = Matrix::Zero(ctx_dim, hidden_dim);
  Matrix vel_av = Matrix::Zero(ctx_dim, vis);
  Vector vel_bh = Vector::Zero(hidden_dim);
  Vector vel_bv = Vector::Zero(vis);

  if (epoch_errors)
    epoch_errors->push_back(crbm_reconstruction_error(p, clips));

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});

  Matrix v, u, dyn_h, dyn_v, pos_probs, hidden, v_neg, neg_probs;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (size_t i = n - 1; i > 0; --i)
      std::swap(order[i], order[rng.uniform_int(0, static_cast<int>(i))]);

    for (size_t start = 0; start < n; start += cfg.minibatch) {
      const Index m =
          std::min<Index>(cfg.minibatch, static_cast<Index>(n - start));
      gather_batch(clips, refs, order, start, m, context_frames, vis, &v, &u);

      // The history is fixed within the chain, so the dynamic biases are
      // computed once per minibatch.
      dyn_h = (u * p.autoreg_hidden).rowwise() + p.hidden_bias.transpose();
      dyn_v = (u * p.autoreg_visible).rowwise() + p.visible_bias.transpose();

      pos_probs = sigmoid_all(v * p.weights + dyn_h);
      sample_bernoulli(pos_probs, &hidden, &rng);

      for (int step = 0; step < cfg.cd_steps; ++step) {
        v_neg = hidden * p.weights.transpose() + dyn_v;
        neg_probs = sigmoid_all(v_neg * p.weights + dyn_h);
        if (step + 1 < cfg.cd_steps) sample_bernoulli(neg_probs, &hidden, &rng);
      }

      const double inv_m = 1.0 / static_cast<double>(m);
      const Matrix hid_diff = pos_probs - neg_probs;
      const Matrix vis_diff = v - v_neg;

      const Matrix grad_w =
          (v.transpose() * pos_probs - v_neg.transpose() * neg_probs) * inv_m -
          cfg.weight_decay * p.weights;
      const Matrix grad_a =
          u.transpose() * hid_diff * inv_m - cfg.weight_decay * p.autoreg_hidden;
      const Matrix grad_av = u.transpose() * vis_diff * inv_m -
                             cfg.weight_decay * p.autoreg_visible;
      const Vector grad_bh = hid_diff.colwise().mean();
      const Vector grad_bv = vis_diff.colwise().mean();

      vel_w = cfg.momentum * vel_w + cfg.learning_rate * grad_w;
      vel_a = cfg.momentum * vel_a + cfg.learning_rate * grad_a;
      vel_av = cfg.momentum * vel_av + cfg.learning_rate * grad_av;
      vel_bh = cfg.momentum * vel_bh + cfg.learning_rate * grad_bh;
      vel_bv = cfg.momentum * vel_bv + cfg.learning_rate * grad_bv;
      p.weights += vel_w;
      p.autoreg_hidden += vel_a;
      p.autoreg_visible += vel_av;
      p.hidden_bias += vel_bh;
      p.visible_bias += vel_bv;
      check_finite(p);
    }
    if (epoch_errors)
      epoch_errors->push_back(crbm_reconstruction_error(p, clips));
  }
  return p;
}

std::vector<Matrix> transform_sequence(const RbmModel& rbm,
                                       const std::vector<CrbmModel>& crbms,
                                       const Spectrogram& s, int stack_k) {
  const Matrix stacked = stack_frames(s.values, stack_k);
  const Matrix standardized = rbm.input_scaler.apply(stacked);
  const Matrix h = rbm_transform_rows(rbm.params, standardized);

  std::vector<Matrix> activations;
  activations.reserve(crbms.size());
  for (const CrbmModel& crbm : crbms) {
    const Matrix h_std = crbm.input_scaler.apply(h);
    activations.push_back(crbm_transform_sequence(crbm.params, h_std));
  }
  return activations;
}

}  // namespace sed
