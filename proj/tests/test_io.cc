// tests/test_io.cc

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

#include <fstream>

#include "doctest.h"
#include "sed/config.h"
#include "sed/errors.h"
#include "sed/io.h"
#include "sed/manifest.h"
#include "sed/rng.h"
#include "test_util.h"

using namespace sed;
using sed_test::TempDir;

namespace {

RbmModel random_rbm_model(uint64_t seed) {
  Rng rng(seed);
  RbmModel m;
  m.params.weights.resize(6, 4);
  rng.fill_normal(m.params.weights, 1.0);
  m.params.hidden_bias.resize(4);
  m.params.visible_bias.resize(6);
  for (Index i = 0; i < 4; ++i) m.params.hidden_bias(i) = rng.normal();
  for (Index j = 0; j < 6; ++j) m.params.visible_bias(j) = rng.normal();
  m.input_scaler.mean = Vector::Constant(6, 0.25);
  m.input_scaler.std = Vector::Constant(6, 1.5);
  return m;
}

CrbmModel random_crbm_model(uint64_t seed) {
  Rng rng(seed);
  CrbmModel m;
  m.params.context_frames = 3;
  m.params.weights.resize(4, 3);
  rng.fill_normal(m.params.weights, 1.0);
  m.params.autoreg_hidden.resize(12, 3);
  rng.fill_normal(m.params.autoreg_hidden, 1.0);
  m.params.autoreg_visible.resize(12, 4);
  rng.fill_normal(m.params.autoreg_visible, 1.0);
  m.params.hidden_bias = Vector::Constant(3, 0.5);
  m.params.visible_bias = Vector::Constant(4, -0.5);
  m.input_scaler.mean = Vector::Constant(4, 0.1);
  m.input_scaler.std = Vector::Constant(4, 2.0);
  return m;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("RBM model files round trip bit-identically") {
  TempDir dir("io_rbm");
  const RbmModel m = random_rbm_model(1);
  save_rbm(dir.file("a.model"), m);
  const RbmModel loaded = load_rbm(dir.file("a.model"));
  CHECK((loaded.params.weights - m.params.weights).cwiseAbs().maxCoeff() == 0.0);
  CHECK((loaded.input_scaler.mean - m.input_scaler.mean).cwiseAbs().maxCoeff() ==
        0.0);
  save_rbm(dir.file("b.model"), loaded);
  CHECK(sed_test::same_bytes(dir.file("a.model"), dir.file("b.model")));
}

TEST_CASE("cRBM model files round trip bit-identically") {
  TempDir dir("io_crbm");
  const CrbmModel m = random_crbm_model(2);
  save_crbm(dir.file("a.model"), m);
  const CrbmModel loaded = load_crbm(dir.file("a.model"));
  CHECK(loaded.params.context_frames == 3);
  CHECK((loaded.params.autoreg_visible - m.params.autoreg_visible)
            .cwiseAbs()
            .maxCoeff() == 0.0);
  save_crbm(dir.file("b.model"), loaded);
  CHECK(sed_test::same_bytes(dir.file("a.model"), dir.file("b.model")));

  // kind confusion is caught
  CHECK_THROWS_AS(load_rbm(dir.file("a.model")), DataError);
}

TEST_CASE("PCA model files round trip, padding rederived") {
  TempDir dir("io_pca");
  Rng rng(3);
  Matrix data(30, 5);
  for (Index r = 0; r < 30; ++r)
    for (Index c = 0; c < 5; ++c) data(r, c) = rng.normal();
  const PcaModel m = fit_pca(data, 3);
  save_pca(dir.file("a.model"), m);
  const PcaModel loaded = load_pca(dir.file("a.model"));
  CHECK((loaded.components - m.components).cwiseAbs().maxCoeff() == 0.0);
  CHECK(loaded.padded == m.padded);
  save_pca(dir.file("b.model"), loaded);
  CHECK(sed_test::same_bytes(dir.file("a.model"), dir.file("b.model")));
}

TEST_CASE("classifier model files carry class names") {
  TempDir dir("io_cls");
  LinearClassifier m;
  m.weights = Matrix::Random(6, 3);
  m.bias = Vector::Random(3);
  m.class_names = {"Alarm bell", "Dog", "Running water"};
  m.mel_bands = 64;
  m.context = 4;
  save_classifier(dir.file("a.model"), m);
  const LinearClassifier loaded = load_classifier(dir.file("a.model"));
  CHECK(loaded.class_names == m.class_names);
  CHECK(loaded.context == 4);
  CHECK((loaded.weights - m.weights).cwiseAbs().maxCoeff() == 0.0);
  save_classifier(dir.file("b.model"), loaded);
  CHECK(sed_test::same_bytes(dir.file("a.model"), dir.file("b.model")));
}

TEST_CASE("feature dumps round trip at float precision") {
  TempDir dir("io_sedf");
  Spectrogram s;
  s.values = Matrix::Random(7, 5);
  s.frame_period_s = 0.010;
  write_feature_dump(dir.file("f.sedf"), s);
  const Spectrogram loaded = read_feature_dump(dir.file("f.sedf"));
  REQUIRE(loaded.n_frames() == 7);
  REQUIRE(loaded.n_channels() == 5);
  CHECK(loaded.frame_period_s == 0.010);
  for (Index t = 0; t < 7; ++t)
    for (Index c = 0; c < 5; ++c)
      CHECK(loaded.values(t, c) ==
            static_cast<double>(static_cast<float>(s.values(t, c))));
}

TEST_CASE("boundary and labeled TSVs have three decimals") {
  TempDir dir("io_tsv");
  write_boundary_tsv(dir.file("b.tsv"),
                     {{"x.wav", {{0.5, 1.23456}, {2.0, 3.0}}}});
  CHECK(sed_test::read_text(dir.file("b.tsv")) ==
        "x.wav\t0.500\t1.235\nx.wav\t2.000\t3.000\n");

  EventList l;
  l.filename = "x.wav";
  LabeledEvent e;
  e.onset_s = 0.5;
  e.offset_s = 1.0;
  e.class_name = "Dog";
  l.events.push_back(e);
  write_labeled_tsv(dir.file("l.tsv"), {l});
  CHECK(sed_test::read_text(dir.file("l.tsv")) == "x.wav\t0.500\t1.000\tDog\n");

  const auto parsed = read_event_tsv(dir.file("l.tsv"), true);
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].events[0].class_name == "Dog");
}

TEST_CASE("manifest parsing and merging") {
  TempDir dir("manifest");
  {
    std::ofstream weak(dir.file("weak.tsv"));
    weak << "a.wav\tDog,Cat\n";
    weak << "b.wav\t\n";
  }
  {
    std::ofstream strong(dir.file("strong.tsv"));
    strong << "a.wav\t0.500\t1.500\tDog\n";
    strong << "c.wav\t1.000\t2.000\tWater\n";
  }
  const Manifest m = parse_manifest(dir.file("weak.tsv"), dir.file("strong.tsv"));
  REQUIRE(m.clips.size() == 3);

  const ClipEntry* a = m.find("a.wav");
  REQUIRE(a != nullptr);
  CHECK(a->weak_labels == std::set<std::string>{"Dog", "Cat"});
  REQUIRE(a->strong_events.size() == 1);
  CHECK(a->strong_events[0].class_name == "Dog");

  CHECK(m.find("b.wav")->weak_labels.empty());

  // strong-only clips join with empty weak labels
  const ClipEntry* c = m.find("c.wav");
  REQUIRE(c != nullptr);
  CHECK(c->weak_labels.empty());
  CHECK(c->strong_events.size() == 1);

  CHECK(m.class_vocabulary() ==
        std::vector<std::string>{"Cat", "Dog", "Water"});
}

TEST_CASE("manifest rejects conflicting duplicates with a line number") {
  TempDir dir("manifest_dup");
  {
    std::ofstream weak(dir.file("weak.tsv"));
    weak << "a.wav\tDog\n";
    weak << "a.wav\tCat\n";
  }
  try {
    parse_manifest(dir.file("weak.tsv"));
    FAIL("expected a duplicate error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }

  // identical duplicates are tolerated
  {
    std::ofstream weak(dir.file("same.tsv"));
    weak << "a.wav\tDog\n";
    weak << "a.wav\tDog\n";
  }
  CHECK(parse_manifest(dir.file("same.tsv")).clips.size() == 1);

  // a strong row with offset < onset names its line
  {
    std::ofstream weak(dir.file("w.tsv"));
    weak << "a.wav\tDog\n";
    std::ofstream strong(dir.file("s.tsv"));
    strong << "a.wav\t2.000\t1.000\tDog\n";
  }
  try {
    parse_manifest(dir.file("w.tsv"), dir.file("s.tsv"));
    FAIL("expected a validation error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find(":1") != std::string::npos);
  }
}

TEST_CASE("config round trips and rejects unknown keys") {
  TempDir dir("config");
  PipelineConfig cfg;
  cfg.rbm_hidden = 12;
  cfg.boundary.threshold_k = 2.5;
  cfg.contexts = {3, 6, 9};
  save_config(dir.file("c.cfg"), cfg);
  const PipelineConfig loaded = load_config(dir.file("c.cfg"));
  CHECK(loaded.rbm_hidden == 12);
  CHECK(loaded.boundary.threshold_k == 2.5);
  CHECK(loaded.contexts == std::vector<int>{3, 6, 9});
  CHECK(config_to_string(loaded) == config_to_string(cfg));

  {
    std::ofstream f(dir.file("bad.cfg"));
    f << "no_such_key = 3\n";
  }
  CHECK_THROWS_AS(load_config(dir.file("bad.cfg")), DataError);

  {
    std::ofstream f(dir.file("badvalue.cfg"));
    f << "rbm_hidden = banana\n";
  }
  CHECK_THROWS_AS(load_config(dir.file("badvalue.cfg")), DataError);

  {
    std::ofstream f(dir.file("range.cfg"));
    f << "pca_dims = 600\n";  // > crbm_hidden
  }
  CHECK_THROWS_AS(load_config(dir.file("range.cfg")), DataError);

  {
    std::ofstream f(dir.file("comment.cfg"));
    f << "# a comment\nrbm_hidden = 7  # trailing\n\n";
  }
  CHECK(load_config(dir.file("comment.cfg")).rbm_hidden == 7);
}

}  // TEST_SUITE
