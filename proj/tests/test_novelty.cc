// tests/test_novelty.cc

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
#include "sed/features.h"
#include "sed/novelty.h"
#include "sed/rng.h"
#include "test_util.h"

using namespace sed;

namespace {

// Identity PCA on `dim` dimensions (components = I, mean = 0).
PcaModel identity_pca(Index dim) {
  PcaModel m;
  m.mean = Vector::Zero(dim);
  m.components = Matrix::Identity(dim, dim);
  m.explained_variance = Vector::Ones(dim);
  return m;
}

NoveltyCurve curve_of(std::vector<double> values) {
  NoveltyCurve c;
  c.values = std::move(values);
  c.frame_period_s = 0.010;
  return c;
}

EnergyCurve energy_of(std::vector<double> values) {
  EnergyCurve e;
  e.values = std::move(values);
  e.window_s = 0.020;
  e.hop_s = 0.010;
  return e;
}

}  // namespace

TEST_SUITE("novelty") {

TEST_CASE("constant activations give a zero curve") {
  const std::vector<Matrix> acts = {Matrix::Ones(50, 3) * 2.5,
                                    Matrix::Ones(50, 3) * -1.0};
  const std::vector<PcaModel> pcas = {identity_pca(3), identity_pca(3)};
  const NoveltyCurve c = novelty_curve(acts, pcas, {3, 30}, BoundaryConfig{});
  for (double v : c.values) CHECK(v == 0.0);
}

TEST_CASE("a step change produces the global maximum at the step") {
  const Index t0 = 30;
  Matrix act = Matrix::Zero(80, 2);
  for (Index t = t0; t < 80; ++t) act.row(t) = Eigen::RowVector2d(1.0, -2.0);
  const std::vector<Matrix> acts = {act, act};
  const std::vector<PcaModel> pcas = {identity_pca(2), identity_pca(2)};
  const NoveltyCurve c = novelty_curve(acts, pcas, {3, 30}, BoundaryConfig{});
  size_t argmax = 0;
  for (size_t t = 1; t < c.values.size(); ++t)
    if (c.values[t] > c.values[argmax]) argmax = t;
  // within +-w(max context) = +-1 frame
  CHECK(std::abs(static_cast<long>(argmax) - static_cast<long>(t0)) <= 1);
}

TEST_CASE("doubling the activations doubles the curve") {
  Rng rng(7);
  Matrix act(60, 4);
  for (Index t = 0; t < 60; ++t)
    for (Index d = 0; d < 4; ++d) act(t, d) = rng.normal();
  const std::vector<PcaModel> pcas = {identity_pca(4)};
  const NoveltyCurve a = novelty_curve({act}, pcas, {6}, BoundaryConfig{});
  const NoveltyCurve b =
      novelty_curve({Matrix(2.0 * act)}, pcas, {6}, BoundaryConfig{});
  for (size_t t = 0; t < a.values.size(); ++t)
    CHECK(b.values[t] == doctest::Approx(2.0 * a.values[t]).epsilon(1e-12));
}

TEST_CASE("adding a constant to all activations changes nothing") {
  Rng rng(8);
  Matrix act(40, 3);
  for (Index t = 0; t < 40; ++t)
    for (Index d = 0; d < 3; ++d) act(t, d) = rng.normal();
  const std::vector<PcaModel> pcas = {identity_pca(3)};
  const NoveltyCurve a = novelty_curve({act}, pcas, {3}, BoundaryConfig{});
  const NoveltyCurve b = novelty_curve(
      {Matrix(act.array() + 5.0)}, pcas, {3}, BoundaryConfig{});
  for (size_t t = 0; t < a.values.size(); ++t)
    CHECK(std::fabs(a.values[t] - b.values[t]) <= 1e-9);
}

TEST_CASE("first frame is zero and values are non-negative") {
  Rng rng(9);
  Matrix act(30, 2);
  for (Index t = 0; t < 30; ++t)
    for (Index d = 0; d < 2; ++d) act(t, d) = rng.normal();
  const NoveltyCurve c =
      novelty_curve({act}, {identity_pca(2)}, {3}, BoundaryConfig{});
  CHECK(c.values[0] == 0.0);
  for (double v : c.values) CHECK(v >= 0.0);
}

TEST_CASE("pick_peaks basic cases") {
  // monotone curve: no interior maximum
  CHECK(pick_peaks(curve_of({0, 1, 2, 3, 4, 5}), 0.0).empty());

  // single triangular bump
  const auto single = pick_peaks(curve_of({0, 1, 2, 3, 2, 1, 0}), 0.0);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == 3);

  // plateau resolves to its leftmost frame
  const auto plateau = pick_peaks(curve_of({0, 1, 1, 1, 0}), 0.0);
  REQUIRE(plateau.size() == 1);
  CHECK(plateau[0] == 1);
}

TEST_CASE("peaks closer than 100 ms keep only the larger") {
  std::vector<double> v(40, 0.0);
  v[10] = 1.0;   // 100 ms apart would be index 20
  v[15] = 0.8;   // 50 ms away: suppressed
  const auto peaks = pick_peaks(curve_of(v), 0.0);
  REQUIRE(peaks.size() == 1);
  CHECK(peaks[0] == 10);

  std::vector<double> w(40, 0.0);
  w[10] = 1.0;
  w[25] = 0.8;  // 150 ms away: kept
  const auto both = pick_peaks(curve_of(w), 0.0);
  REQUIRE(both.size() == 2);
  CHECK(both[0] == 10);
  CHECK(both[1] == 25);
}

TEST_CASE("infinite threshold suppresses everything; k=0 is a superset") {
  Rng rng(10);
  std::vector<double> v(200);
  for (double& x : v) x = std::max(0.0, rng.normal(0.2, 0.5));
  const NoveltyCurve c = curve_of(v);
  CHECK(pick_peaks(c, std::numeric_limits<double>::infinity()).empty());
  const auto loose = pick_peaks(c, 0.0);
  const auto strict = pick_peaks(c, 1.0);
  for (size_t p : strict)
    CHECK(std::find(loose.begin(), loose.end(), p) != loose.end());
}

TEST_CASE("onset is the closest preceding sample at 25% of the peak") {
  const NoveltyCurve c = curve_of({0, 0, 1, 4, 1, 0});
  const auto onsets = locate_onsets(c, {3}, 0.25);
  REQUIRE(onsets.size() == 1);
  CHECK(onsets[0] == doctest::Approx(0.020));  // frame 2: 1 <= 0.25*4
}

TEST_CASE("onset falls back to the clip start") {
  // peak at index 0
  const auto at_zero = locate_onsets(curve_of({5, 1, 0}), {0}, 0.25);
  REQUIRE(at_zero.size() == 1);
  CHECK(at_zero[0] == 0.0);

  // curve strictly above 25% of the peak everywhere
  const auto high = locate_onsets(curve_of({5, 6, 7, 8}), {3}, 0.25);
  REQUIRE(high.size() == 1);
  CHECK(high[0] == 0.0);
}

TEST_CASE("onsets never exceed their peak time and duplicates merge") {
  Rng rng(11);
  std::vector<double> v(300);
  for (double& x : v) x = std::max(0.0, rng.normal(0.1, 1.0));
  const NoveltyCurve c = curve_of(v);
  const auto peaks = pick_peaks(c, 0.5);
  const auto onsets = locate_onsets(c, peaks, 0.25);
  for (size_t i = 0; i < onsets.size(); ++i) {
    if (i > 0) CHECK(onsets[i] > onsets[i - 1]);  // sorted, deduplicated
  }
  for (size_t i = 0; i < peaks.size() && i < onsets.size(); ++i)
    CHECK(onsets.front() <= static_cast<double>(peaks.back()) * c.frame_period_s);
}

TEST_CASE("offset follows the energy drop after the onset") {
  // event energy from 1.0 s to 2.0 s, curve spans 3 s
  std::vector<double> v(300, 0.0);
  for (size_t i = 100; i < 200; ++i) v[i] = 0.01;
  const auto events = detect_offsets(energy_of(v), {1.0}, 3.0, BoundaryConfig{});
  REQUIRE(events.size() == 1);
  CHECK(events[0].onset_s == 1.0);
  CHECK(events[0].offset_s == doctest::Approx(2.0).epsilon(0.025));
}

TEST_CASE("criterion fixture: STE offset of a real tone burst") {
  const Waveform w = sed_test::tone_burst(3.0, 1.0, 2.0, 1000.0, 0.4);
  const EnergyCurve e = short_term_energy(w);
  const auto events = detect_offsets(e, {1.0}, 3.0, BoundaryConfig{});
  REQUIRE(events.size() == 1);
  CHECK(std::fabs(events[0].offset_s - 2.0) <= 0.05);
}

TEST_CASE("offsets are capped at the clip end and the next onset") {
  // sustained energy to the end of a 5 s clip
  std::vector<double> sustained(500, 0.01);
  const auto to_end =
      detect_offsets(energy_of(sustained), {1.0}, 5.0, BoundaryConfig{});
  REQUIRE(to_end.size() == 1);
  CHECK(to_end[0].offset_s == 5.0);

  const auto two =
      detect_offsets(energy_of(sustained), {1.0, 1.5}, 5.0, BoundaryConfig{});
  REQUIRE(two.size() == 2);
  CHECK(two[0].offset_s <= 1.5);
  CHECK(two[0].offset_s > two[0].onset_s);
}

TEST_CASE("events shorter than the minimum length are dropped") {
  std::vector<double> v(300, 0.0);
  for (size_t i = 100; i < 200; ++i) v[i] = 0.01;
  // second onset 30 ms before the first offset cap
  const auto events =
      detect_offsets(energy_of(v), {1.0, 1.03}, 3.0, BoundaryConfig{});
  REQUIRE(events.size() == 1);  // the 30 ms fragment is gone
  CHECK(events[0].onset_s == 1.03);
}

TEST_CASE("boundary invariants hold on detected events") {
  Rng rng(12);
  std::vector<double> v(400);
  for (double& x : v) x = std::fabs(rng.normal(0.0, 0.01));
  for (size_t i = 80; i < 150; ++i) v[i] += 0.05;
  for (size_t i = 220; i < 300; ++i) v[i] += 0.05;
  const auto events =
      detect_offsets(energy_of(v), {0.8, 2.2}, 4.0, BoundaryConfig{});
  for (size_t i = 0; i < events.size(); ++i) {
    CHECK(events[i].onset_s < events[i].offset_s);
    if (i > 0) CHECK(events[i - 1].offset_s <= events[i].onset_s + 1e-9);
  }
}

TEST_CASE("end-to-end detection on silence and with an infinite threshold") {
  Rng rng(13);
  RbmModel rbm;
  rbm.params.weights.resize(9, 4);
  rng.fill_normal(rbm.params.weights, 0.3);
  rbm.params.hidden_bias = Vector::Zero(4);
  rbm.params.visible_bias = Vector::Zero(9);
  rbm.input_scaler.mean = Vector::Zero(9);
  rbm.input_scaler.std = Vector::Ones(9);

  std::vector<CrbmModel> crbms;
  std::vector<PcaModel> pcas;
  for (int context : {3, 6}) {
    CrbmModel m;
    m.params.context_frames = context;
    m.params.weights.resize(4, 3);
    rng.fill_normal(m.params.weights, 0.3);
    m.params.autoreg_hidden.resize(4 * context, 3);
    rng.fill_normal(m.params.autoreg_hidden, 0.1);
    m.params.autoreg_visible = Matrix::Zero(4 * context, 4);
    m.params.hidden_bias = Vector::Zero(3);
    m.params.visible_bias = Vector::Zero(4);
    m.input_scaler.mean = Vector::Zero(4);
    m.input_scaler.std = Vector::Ones(4);
    crbms.push_back(m);
    pcas.push_back(identity_pca(3));
  }

  // silence: constant spectrogram, empty result
  Spectrogram silent;
  silent.values = Matrix::Zero(200, 3);
  silent.frame_period_s = 0.010;
  EnergyCurve e = energy_of(std::vector<double>(200, 0.0));
  BoundaryConfig cfg;
  CHECK(detect_boundaries(silent, e, rbm, crbms, pcas, cfg, 3).empty());

  // a step in the spectrogram, but an impossible threshold
  Spectrogram stepped = silent;
  for (Index t = 100; t < 200; ++t) stepped.values.row(t).setConstant(2.0);
  EnergyCurve loud = energy_of([] {
    std::vector<double> v(200, 0.0);
    for (size_t i = 100; i < 200; ++i) v[i] = 0.01;
    return v;
  }());
  cfg.threshold_k = std::numeric_limits<double>::infinity();
  CHECK(detect_boundaries(stepped, loud, rbm, crbms, pcas, cfg, 3).empty());

  // with the default threshold the step is found
  cfg.threshold_k = 1.0;
  const auto events = detect_boundaries(stepped, loud, rbm, crbms, pcas, cfg, 3);
  REQUIRE(events.size() == 1);
  CHECK(std::fabs(events[0].onset_s - 1.0) <= 0.05);
}

}  // TEST_SUITE
