// src/pipeline.cc

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

#include "sed/pipeline.h"

#include <algorithm>
#include <filesystem>
#include <mutex>
#include <sstream>

#include "sed/errors.h"
#include "sed/features.h"
#include "sed/parallel.h"
#include "sed/resample.h"
#include "sed/wav.h"

namespace fs = std::filesystem;

namespace sed {

namespace {

std::string clip_path(const std::string& audio_dir, const std::string& name) {
  if (audio_dir.empty()) return name;
  return audio_dir + "/" + name;
}

Waveform load_clip(const std::string& audio_dir, const std::string& name) {
  const std::string path = clip_path(audio_dir, name);
  if (!fs::exists(path)) throw DataError("missing audio file: " + path);
  return resample(read_wav(path), kAnalysisRate);
}

std::string stem_of(const std::string& filename) {
  return fs::path(filename).stem().string();
}

Matrix vstack(const std::vector<Matrix>& parts) {
  Index rows = 0;
  for (const Matrix& m : parts) rows += m.rows();
  if (parts.empty() || rows == 0) throw DataError("no training frames");
  Matrix out(rows, parts.front().cols());
  Index at = 0;
  for (const Matrix& m : parts) {
    out.middleRows(at, m.rows()) = m;
    at += m.rows();
  }
  return out;
}

void log_errors(std::ostream& log, const std::string& tag,
                const std::vector<double>& errors) {
  for (size_t i = 0; i < errors.size(); ++i)
    log << tag << " epoch " << i << " reconstruction_error " << errors[i]
        << "\n";
}

}  // namespace

ModelBundle train_models(const Manifest& manifest, const std::string& audio_dir,
                         const PipelineConfig& config, std::ostream& log) {
  config.validate();
  if (manifest.clips.empty()) throw DataError("train: empty manifest");

  const size_t n_clips = manifest.clips.size();
  const int min_frames = config.contexts.back() + 1;

  // Per-clip front-end features (parallel, results stored by index).
  std::vector<Matrix> spectrograms(n_clips);
  std::vector<Matrix> log_mels(n_clips);
  const bool want_mel = config.train_classifier;
  parallel_for(n_clips, config.jobs, [&](size_t i) {
    const Waveform w = load_clip(audio_dir, manifest.clips[i].filename);
    spectrograms[i] = auditory_spectrogram(w).values;
    if (want_mel) log_mels[i] = log_mel_energy(w).values;
  });
  for (size_t i = 0; i < n_clips; ++i)
    if (spectrograms[i].rows() < min_frames)
      throw DataError("clip too short for the longest cRBM context: " +
                      manifest.clips[i].filename);

  ModelBundle bundle;
  bundle.config = config;

  // Stage 1: RBM on standardized stacked frames.
  std::vector<Matrix> stacked(n_clips);
  for (size_t i = 0; i < n_clips; ++i)
    stacked[i] = stack_frames(spectrograms[i], config.stack_k);
  {
    const Matrix all = vstack(stacked);
    bundle.rbm.input_scaler = Scaler::fit(all);
    const Matrix standardized = bundle.rbm.input_scaler.apply(all);
    std::vector<double> errors;
    TrainConfig tc = config.train_config();
    bundle.rbm.params =
        rbm_train(standardized, config.rbm_hidden, tc, &errors);
    log_errors(log, "rbm", errors);
  }

  // Stage 2: per-clip RBM outputs, standardized for the cRBM array.
  std::vector<Matrix> h_clips(n_clips);
  for (size_t i = 0; i < n_clips; ++i)
    h_clips[i] = rbm_transform_rows(
        bundle.rbm.params, bundle.rbm.input_scaler.apply(stacked[i]));
  const Scaler h_scaler = Scaler::fit(vstack(h_clips));
  for (Matrix& h : h_clips) h = h_scaler.apply(h);
  stacked.clear();

  // Stage 3: the cRBM array. Models are independent, so they train in
  // parallel; per-model seeds keep the result schedule-independent.
  const size_t n_models = config.contexts.size();
  bundle.crbms.resize(n_models);
  std::vector<std::vector<double>> crbm_errors(n_models);
  parallel_for(n_models, config.jobs, [&](size_t m) {
    TrainConfig tc = config.train_config();
    tc.rng_seed = config.rng_seed + 1 + static_cast<uint64_t>(config.contexts[m]);
    bundle.crbms[m].params =
        crbm_train(h_clips, config.contexts[m], config.crbm_hidden, tc,
                   &crbm_errors[m]);
    bundle.crbms[m].input_scaler = h_scaler;
  });
  for (size_t m = 0; m < n_models; ++m)
    log_errors(log, "crbm_" + std::to_string(config.contexts[m]),
               crbm_errors[m]);

  // Stage 4: one PCA per cRBM, fitted on the training activations.
  bundle.pcas.resize(n_models);
  parallel_for(n_models, config.jobs, [&](size_t m) {
    std::vector<Matrix> activations(n_clips);
    for (size_t i = 0; i < n_clips; ++i)
      activations[i] =
          crbm_transform_sequence(bundle.crbms[m].params, h_clips[i]);
    bundle.pcas[m] = fit_pca(vstack(activations), config.pca_dims);
  });

  // Stage 5: optional weak-label classifier.
  if (config.train_classifier) {
    std::vector<std::pair<Matrix, std::set<std::string>>> training_clips;
    for (size_t i = 0; i < n_clips; ++i) {
      if (manifest.clips[i].weak_labels.empty()) continue;
      training_clips.emplace_back(
          classifier_features(log_mels[i], config.cls_context),
          manifest.clips[i].weak_labels);
    }
    const std::vector<std::string> vocabulary = manifest.class_vocabulary();
    if (!training_clips.empty() && !vocabulary.empty()) {
      std::vector<double> losses;
      bundle.classifier = train_frame_classifier(
          training_clips, vocabulary, config.classifier_config(), &losses);
      for (size_t i = 0; i < losses.size(); ++i)
        log << "classifier epoch " << i << " loss " << losses[i] << "\n";
    } else {
      log << "classifier skipped: no weak labels in manifest\n";
    }
  }
  return bundle;
}

void save_bundle(const std::string& dir, const ModelBundle& bundle) {
  const fs::path final_dir(dir);
  const fs::path tmp_dir(dir + ".tmp");

  if (fs::exists(final_dir)) {
    // Only replace something that looks like a bundle (or is empty).
    if (!fs::is_directory(final_dir) ||
        (!fs::is_empty(final_dir) &&
         !fs::exists(final_dir / "config.snapshot")))
      throw DataError("refusing to overwrite non-bundle path: " + dir);
  }
  std::error_code ec;
  fs::remove_all(tmp_dir, ec);
  fs::create_directories(tmp_dir);

  try {
    save_rbm((tmp_dir / "rbm.model").string(), bundle.rbm);
    for (size_t m = 0; m < bundle.crbms.size(); ++m) {
      const int context = bundle.crbms[m].params.context_frames;
      save_crbm((tmp_dir / ("crbm_" + std::to_string(context) + ".model")).string(),
                bundle.crbms[m]);
      save_pca((tmp_dir / ("pca_" + std::to_string(context) + ".model")).string(),
               bundle.pcas.at(m));
    }
    if (bundle.classifier)
      save_classifier((tmp_dir / "classifier.model").string(),
                      *bundle.classifier);
    save_config((tmp_dir / "config.snapshot").string(), bundle.config);
  } catch (...) {
    fs::remove_all(tmp_dir, ec);
    throw;
  }

  fs::remove_all(final_dir, ec);
  fs::rename(tmp_dir, final_dir);
}

ModelBundle load_bundle(const std::string& dir) {
  const fs::path base(dir);
  if (!fs::exists(base / "config.snapshot"))
    throw DataError("not a model bundle (missing config.snapshot): " + dir);

  ModelBundle bundle;
  bundle.config = load_config((base / "config.snapshot").string());
  bundle.rbm = load_rbm((base / "rbm.model").string());

  for (int context : bundle.config.contexts) {
    bundle.crbms.push_back(
        load_crbm((base / ("crbm_" + std::to_string(context) + ".model")).string()));
    bundle.pcas.push_back(
        load_pca((base / ("pca_" + std::to_string(context) + ".model")).string()));
    if (bundle.crbms.back().params.context_frames != context)
      throw DataError("bundle context mismatch in " + dir);
  }

  // Dimension consistency across the chain.
  const Index h_dim = bundle.rbm.params.hidden_dim();
  for (size_t m = 0; m < bundle.crbms.size(); ++m) {
    if (bundle.crbms[m].params.visible_dim() != h_dim)
      throw DataError("bundle dimension mismatch: cRBM visible != RBM hidden");
    if (bundle.pcas[m].input_dim() != bundle.crbms[m].params.hidden_dim())
      throw DataError("bundle dimension mismatch: PCA input != cRBM hidden");
  }

  const fs::path classifier_path = base / "classifier.model";
  if (fs::exists(classifier_path))
    bundle.classifier = load_classifier(classifier_path.string());
  return bundle;
}

std::vector<std::pair<std::string, std::vector<EventBoundary>>> detect_all(
    const Manifest& manifest, const std::string& audio_dir,
    const ModelBundle& bundle, std::ostream& log,
    const std::string& feature_dump_dir) {
  const size_t n_clips = manifest.clips.size();
  std::vector<std::pair<std::string, std::vector<EventBoundary>>> results(
      n_clips);

  if (!feature_dump_dir.empty()) fs::create_directories(feature_dump_dir);

  parallel_for(n_clips, bundle.config.jobs, [&](size_t i) {
    const std::string& name = manifest.clips[i].filename;
    const Waveform w = load_clip(audio_dir, name);
    const Spectrogram s = auditory_spectrogram(w);
    const EnergyCurve e = short_term_energy(w);
    if (!feature_dump_dir.empty())
      write_feature_dump(feature_dump_dir + "/" + stem_of(name) + ".sedf", s);
    results[i] = {name, detect_boundaries(s, e, bundle.rbm, bundle.crbms,
                                          bundle.pcas, bundle.config.boundary,
                                          bundle.config.stack_k)};
  });

  size_t total = 0;
  for (const auto& [name, events] : results) total += events.size();
  log << "detect: " << total << " events across " << n_clips << " clips\n";
  return results;
}

std::vector<EventList> label_events(
    const std::vector<std::pair<std::string, std::vector<EventBoundary>>>&
        boundaries,
    const ModelBundle& bundle, const std::string& audio_dir,
    const std::string& posterior_dir, std::ostream& log) {
  const bool use_files = !posterior_dir.empty();
  if (!use_files && !bundle.classifier)
    throw DataError("label: bundle has no classifier and no posterior dir given");

  std::vector<EventList> results(boundaries.size());
  size_t dropped = 0;
  std::mutex dropped_mutex;

  parallel_for(boundaries.size(), bundle.config.jobs, [&](size_t i) {
    const auto& [name, events] = boundaries[i];
    PosteriorMatrix posteriors;
    if (use_files) {
      const std::string path = posterior_dir + "/" + stem_of(name) + ".csv";
      if (!fs::exists(path))
        throw DataError("missing posterior file for clip " + name + ": " + path);
      posteriors = load_posteriors(path);
    } else {
      const Waveform w = load_clip(audio_dir, name);
      const Spectrogram mel = log_mel_energy(w);
      posteriors = predict_posteriors(
          *bundle.classifier,
          classifier_features(mel.values, bundle.classifier->context),
          mel.frame_period_s);
    }

    EventList list;
    list.filename = name;
    size_t local_dropped = 0;
    for (const EventBoundary& b : events) {
      if (auto labeled = infer_label(posteriors, b))
        list.events.push_back(*labeled);
      else
        ++local_dropped;
    }
    std::sort(list.events.begin(), list.events.end(),
              [](const LabeledEvent& a, const LabeledEvent& b) {
                return a.onset_s < b.onset_s;
              });
    results[i] = std::move(list);
    if (local_dropped > 0) {
      std::lock_guard<std::mutex> lock(dropped_mutex);
      dropped += local_dropped;
    }
  });

  log << "label: dropped " << dropped << " zero-frame events\n";
  return results;
}

}  // namespace sed
