// tests/test_crbm.cc

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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "sed/crbm.h"
#include "sed/errors.h"
#include "sed/rng.h"
#include "test_util.h"

using namespace sed;

namespace {

CrbmParams random_crbm(Index vis, Index hid, int context, uint64_t seed) {
  Rng rng(seed);
  CrbmParams p;
  p.context_frames = context;
  p.weights.resize(vis, hid);
  rng.fill_normal(p.weights, 0.4);
  p.autoreg_hidden.resize(vis * context, hid);
  rng.fill_normal(p.autoreg_hidden, 0.4);
  p.autoreg_visible.resize(vis * context, vis);
  rng.fill_normal(p.autoreg_visible, 0.4);
  p.hidden_bias.resize(hid);
  for (Index i = 0; i < hid; ++i) p.hidden_bias(i) = rng.normal(0.0, 0.3);
  p.visible_bias.resize(vis);
  for (Index j = 0; j < vis; ++j) p.visible_bias(j) = rng.normal(0.0, 0.3);
  return p;
}

// Period-3 pattern repeated; perfectly predictable from a 3-frame history.
std::vector<Matrix> periodic_clips(int repeats) {
  Matrix pattern(3, 4);
  pattern << 1.0, 0.0, -1.0, 0.5,
             0.0, 1.0, 0.5, -1.0,
             -1.0, 0.5, 1.0, 0.0;
  Matrix clip(3 * repeats, 4);
  for (int r = 0; r < repeats; ++r) clip.middleRows(3 * r, 3) = pattern;
  return {clip, clip};
}

double mean_column_variance(const std::vector<Matrix>& clips) {
  Index rows = 0;
  for (const Matrix& c : clips) rows += c.rows();
  Matrix all(rows, clips.front().cols());
  Index at = 0;
  for (const Matrix& c : clips) {
    all.middleRows(at, c.rows()) = c;
    at += c.rows();
  }
  const Matrix centered = all.rowwise() - all.colwise().mean();
  return centered.array().square().colwise().mean().mean();
}

}  // namespace

TEST_SUITE("crbm") {

TEST_CASE("zero conditioning reduces to the RBM transform") {
  const Index vis = 5, hid = 4;
  const int context = 3;
  CrbmParams p = random_crbm(vis, hid, context, 17);
  p.autoreg_hidden.setZero();

  RbmParams r;
  r.weights = p.weights;
  r.hidden_bias = p.hidden_bias;
  r.visible_bias = Vector::Zero(vis);

  Rng rng(18);
  Vector v(vis);
  for (Index j = 0; j < vis; ++j) v(j) = rng.normal();
  Matrix history(context, vis);
  for (Index t = 0; t < context; ++t)
    for (Index j = 0; j < vis; ++j) history(t, j) = rng.normal();

  const Vector c = crbm_transform(p, v, history);
  const Vector h = rbm_transform(r, v);
  CHECK((c - h).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("zero inputs give zero outputs") {
  CrbmParams p = random_crbm(4, 3, 2, 23);
  p.hidden_bias.setZero();
  const Vector c = crbm_transform(p, Vector::Zero(4), Matrix::Zero(2, 4));
  CHECK(c.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("conditional transform matches a scalar-loop oracle") {
  const Index vis = 3, hid = 4;
  const int context = 2;
  const CrbmParams p = random_crbm(vis, hid, context, 29);
  Rng rng(30);
  Vector v(vis);
  for (Index j = 0; j < vis; ++j) v(j) = rng.normal();
  Matrix history(context, vis);
  for (Index t = 0; t < context; ++t)
    for (Index j = 0; j < vis; ++j) history(t, j) = rng.normal();

  const Vector c = crbm_transform(p, v, history);
  for (Index i = 0; i < hid; ++i) {
    double bias = p.hidden_bias(i);
    for (int f = 0; f < context; ++f)
      for (Index j = 0; j < vis; ++j)
        bias += history(f, j) * p.autoreg_hidden(f * vis + j, i);
    double expected = bias;
    for (Index j = 0; j < vis; ++j) expected += v(j) * p.weights(j, i);
    CHECK(std::fabs(c(i) - expected) <= 1e-12);
  }
}

TEST_CASE("sequence transform replicates missing history") {
  const CrbmParams p = random_crbm(3, 2, 3, 31);
  Rng rng(32);
  Matrix frames(5, 3);
  for (Index t = 0; t < 5; ++t)
    for (Index j = 0; j < 3; ++j) frames(t, j) = rng.normal();

  const Matrix seq = crbm_transform_sequence(p, frames);
  REQUIRE(seq.rows() == 5);

  // frame 0: history is three copies of frame 0
  Matrix history(3, 3);
  for (int f = 0; f < 3; ++f) history.row(f) = frames.row(0);
  const Vector direct = crbm_transform(p, frames.row(0).transpose(), history);
  CHECK((seq.row(0).transpose() - direct).cwiseAbs().maxCoeff() <= 1e-12);

  // frame 4: full real history
  for (int f = 0; f < 3; ++f) history.row(f) = frames.row(1 + f);
  const Vector direct4 = crbm_transform(p, frames.row(4).transpose(), history);
  CHECK((seq.row(4).transpose() - direct4).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("zero learning rate leaves parameters at initialization") {
  Rng rng(37);
  Matrix clip(30, 4);
  for (Index t = 0; t < 30; ++t)
    for (Index j = 0; j < 4; ++j) clip(t, j) = rng.normal();
  const std::vector<Matrix> clips = {clip};

  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  cfg.rng_seed = 77;
  TrainConfig no_epochs = cfg;
  no_epochs.epochs = 0;
  cfg.epochs = 4;

  const CrbmParams trained = crbm_train(clips, 3, 3, cfg);
  const CrbmParams initial = crbm_train(clips, 3, 3, no_epochs);
  CHECK((trained.weights - initial.weights).cwiseAbs().maxCoeff() == 0.0);
  CHECK((trained.autoreg_hidden - initial.autoreg_hidden).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK((trained.autoreg_visible - initial.autoreg_visible)
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("training is deterministic under a fixed seed") {
  Rng rng(41);
  Matrix clip(40, 3);
  for (Index t = 0; t < 40; ++t)
    for (Index j = 0; j < 3; ++j) clip(t, j) = rng.normal();
  const std::vector<Matrix> clips = {clip};

  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.minibatch = 16;
  cfg.learning_rate = 1e-2;
  cfg.rng_seed = 99;
  const CrbmParams a = crbm_train(clips, 2, 3, cfg);
  const CrbmParams b = crbm_train(clips, 2, 3, cfg);
  CHECK((a.weights - b.weights).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.autoreg_hidden - b.autoreg_hidden).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.autoreg_visible - b.autoreg_visible).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("training improves over the untrained model on held-out noise") {
  Rng rng(51);
  std::vector<Matrix> train_clips;
  for (int c = 0; c < 5; ++c) {
    Matrix clip(300, 4);
    for (Index t = 0; t < 300; ++t)
      for (Index j = 0; j < 4; ++j) clip(t, j) = rng.normal();
    train_clips.push_back(clip);
  }
  Matrix held(300, 4);
  for (Index t = 0; t < 300; ++t)
    for (Index j = 0; j < 4; ++j) held(t, j) = rng.normal();
  const std::vector<Matrix> held_clips = {held};

  TrainConfig cfg;
  cfg.epochs = 50;
  cfg.minibatch = 32;
  cfg.learning_rate = 5e-3;
  cfg.momentum = 0.5;
  cfg.weight_decay = 1e-3;
  cfg.rng_seed = 52;
  TrainConfig no_epochs = cfg;
  no_epochs.epochs = 0;

  const CrbmParams trained = crbm_train(train_clips, 3, 4, cfg);
  const CrbmParams untrained = crbm_train(train_clips, 3, 4, no_epochs);
  CHECK(crbm_reconstruction_error(trained, held_clips) <=
        crbm_reconstruction_error(untrained, held_clips));
}

TEST_CASE("a perfectly periodic sequence becomes predictable") {
  const std::vector<Matrix> clips = periodic_clips(60);
  const double variance = mean_column_variance(clips);

  TrainConfig cfg;
  cfg.epochs = 200;
  cfg.minibatch = 32;
  cfg.learning_rate = 2e-2;
  cfg.momentum = 0.9;
  cfg.weight_decay = 0.0;
  cfg.rng_seed = 61;

  const CrbmParams p = crbm_train(clips, 3, 4, cfg);
  const double err = crbm_reconstruction_error(p, clips) / 4.0;  // per dim
  CHECK(err <= 0.01 * variance);
}

TEST_CASE("the conditional transform is affine in (input, history)") {
  const CrbmParams p = random_crbm(4, 3, 2, 121);
  Rng rng(122);
  Vector v1(4), v2(4);
  Matrix h1(2, 4), h2(2, 4);
  for (Index j = 0; j < 4; ++j) {
    v1(j) = rng.normal();
    v2(j) = rng.normal();
    for (Index t = 0; t < 2; ++t) {
      h1(t, j) = rng.normal();
      h2(t, j) = rng.normal();
    }
  }
  const double a = 1.7, b = -0.4;
  const Vector lhs =
      crbm_transform(p, a * v1 + b * v2, a * h1 + b * h2) - p.hidden_bias;
  const Vector rhs = a * (crbm_transform(p, v1, h1) - p.hidden_bias) +
                     b * (crbm_transform(p, v2, h2) - p.hidden_bias);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("clips shorter than the context are rejected") {
  const std::vector<Matrix> clips = {Matrix::Zero(3, 4)};
  TrainConfig cfg;
  CHECK_THROWS_AS(crbm_train(clips, 3, 2, cfg), DataError);
  CHECK_THROWS_AS(crbm_train({}, 3, 2, cfg), DataError);
}

TEST_CASE("transform_sequence is time-invariant on constant input") {
  Rng rng(71);
  RbmModel rbm;
  rbm.params.weights.resize(6, 4);
  rng.fill_normal(rbm.params.weights, 0.3);
  rbm.params.hidden_bias = Vector::Zero(4);
  rbm.params.visible_bias = Vector::Zero(6);
  for (Index i = 0; i < 4; ++i) rbm.params.hidden_bias(i) = rng.normal();
  rbm.input_scaler.mean = Vector::Zero(6);
  rbm.input_scaler.std = Vector::Ones(6);

  std::vector<CrbmModel> crbms;
  for (int context : {2, 4}) {
    CrbmModel m;
    m.params = random_crbm(4, 3, context, 80 + context);
    m.input_scaler.mean = Vector::Zero(4);
    m.input_scaler.std = Vector::Ones(4);
    crbms.push_back(m);
  }

  Spectrogram s;
  s.values = Matrix::Ones(12, 2) * 0.7;
  s.frame_period_s = 0.010;

  const std::vector<Matrix> acts = transform_sequence(rbm, crbms, s, 3);
  REQUIRE(acts.size() == 2);
  for (const Matrix& a : acts) {
    REQUIRE(a.rows() == 12);
    for (Index t = 1; t < a.rows(); ++t)
      CHECK((a.row(t) - a.row(0)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("all-zero models output the broadcast biases") {
  RbmModel rbm;
  rbm.params.weights = Matrix::Zero(4, 3);
  rbm.params.hidden_bias = Vector::Zero(3);
  rbm.params.visible_bias = Vector::Zero(4);
  rbm.input_scaler.mean = Vector::Zero(4);
  rbm.input_scaler.std = Vector::Ones(4);

  CrbmModel crbm;
  crbm.params.context_frames = 2;
  crbm.params.weights = Matrix::Zero(3, 2);
  crbm.params.autoreg_hidden = Matrix::Zero(6, 2);
  crbm.params.autoreg_visible = Matrix::Zero(6, 3);
  crbm.params.hidden_bias.resize(2);
  crbm.params.hidden_bias << 0.25, -1.5;
  crbm.params.visible_bias = Vector::Zero(3);
  crbm.input_scaler.mean = Vector::Zero(3);
  crbm.input_scaler.std = Vector::Ones(3);

  Spectrogram s;
  s.values = Matrix::Random(10, 2);
  s.frame_period_s = 0.010;

  const std::vector<Matrix> acts = transform_sequence(rbm, {crbm}, s, 2);
  for (Index t = 0; t < acts[0].rows(); ++t) {
    CHECK(acts[0](t, 0) == doctest::Approx(0.25));
    CHECK(acts[0](t, 1) == doctest::Approx(-1.5));
  }
}

}  // TEST_SUITE
