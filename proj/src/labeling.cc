// src/labeling.cc

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

#include "sed/labeling.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "sed/errors.h"

namespace sed {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

constexpr double kProbClamp = 1e-7;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(field);
  if (!line.empty() && line.back() == sep) fields.push_back("");
  return fields;
}

}  // namespace

std::optional<LabeledEvent> infer_label(const PosteriorMatrix& p,
                                        const EventBoundary& b) {
  if (p.n_classes() == 0 ||
      p.class_names.size() != static_cast<size_t>(p.n_classes()))
    throw DataError("infer_label: posterior has no classes");

  const double clip_end = p.n_frames() * p.frame_period_s;
  const double onset = std::clamp(b.onset_s, 0.0, clip_end);
  const double offset = std::clamp(b.offset_s, 0.0, clip_end);

  Vector sums = Vector::Zero(p.n_classes());
  Index count = 0;
  for (Index t = 0; t < p.n_frames(); ++t) {
    const double center = (static_cast<double>(t) + 0.5) * p.frame_period_s;
    if (center >= onset && center < offset) {
      sums += p.values.row(t).transpose();
      ++count;
    }
  }
  if (count == 0) return std::nullopt;

  const Vector means = sums / static_cast<double>(count);
  Index best = 0;
  for (Index c = 1; c < means.size(); ++c) {
    if (means(c) > means(best) ||
        (means(c) == means(best) && p.class_names[c] < p.class_names[best]))
      best = c;
  }

  LabeledEvent event;
  event.onset_s = b.onset_s;
  event.offset_s = b.offset_s;
  event.class_name = p.class_names[best];
  event.score = means(best);
  return event;
}

LabeledEvent majority_vote(const std::vector<LabeledEvent>& labels) {
  if (labels.empty()) throw DataError("majority_vote: empty input");

  struct Tally {
    int count = 0;
    double score_sum = 0.0;
  };
  std::map<std::string, Tally> tallies;
  for (const LabeledEvent& l : labels) {
    Tally& t = tallies[l.class_name];
    ++t.count;
    t.score_sum += l.score;
  }

  // count, then mean score, then class-name order
  std::string winner;
  int best_count = -1;
  double best_mean = 0.0;
  for (const auto& [name, t] : tallies) {
    const double mean = t.score_sum / t.count;
    if (t.count > best_count ||
        (t.count == best_count && mean > best_mean)) {
      winner = name;
      best_count = t.count;
      best_mean = mean;
    }
    // equal count and mean: the map iterates names in order, keep first
  }

  LabeledEvent out = labels.front();
  out.class_name = winner;
  out.score = best_mean;
  return out;
}

Matrix classifier_features(const Matrix& log_mel, int context) {
  const Index n = log_mel.rows();
  const Index bands = log_mel.cols();
  const int span = 2 * context + 1;
  Matrix out(n, span * bands);
  for (Index t = 0; t < n; ++t) {
    for (int j = 0; j < span; ++j) {
      const Index src = std::clamp<Index>(t - context + j, 0, n - 1);
      out.block(t, static_cast<Index>(j) * bands, 1, bands) = log_mel.row(src);
    }
  }
  return out;
}

double classifier_clip_loss(const Matrix& weights, const Vector& bias,
                            const Matrix& features, const Vector& labels,
                            Matrix* grad_weights, Vector* grad_bias) {
  const Index n_frames = features.rows();
  const Index n_classes = weights.cols();
  if (features.cols() != weights.rows() || labels.size() != n_classes)
    throw DataError("classifier: dimension mismatch");
  if (n_frames == 0) throw DataError("classifier: empty clip");

  const Matrix frame_probs =
      ((features * weights).rowwise() + bias.transpose())
          .unaryExpr([](double z) { return sigmoid(z); });
  const Vector clip_score = frame_probs.colwise().mean();

  double loss = 0.0;
  Vector dscore(n_classes);
  for (Index c = 0; c < n_classes; ++c) {
    const double s = std::clamp(clip_score(c), kProbClamp, 1.0 - kProbClamp);
    loss -= labels(c) * std::log(s) + (1.0 - labels(c)) * std::log(1.0 - s);
    dscore(c) = (s - labels(c)) / (s * (1.0 - s));
  }

  if (grad_weights || grad_bias) {
    // d loss / d logit(t,c) = dscore(c) * sigma'(z_tc) / n_frames
    Matrix dlogits = frame_probs.array() * (1.0 - frame_probs.array());
    dlogits.array().rowwise() *=
        dscore.transpose().array() / static_cast<double>(n_frames);
    if (grad_weights) *grad_weights = features.transpose() * dlogits;
    if (grad_bias) *grad_bias = dlogits.colwise().sum();
  }
  return loss;
}

LinearClassifier train_frame_classifier(
    const std::vector<std::pair<Matrix, std::set<std::string>>>& clips,
    const std::vector<std::string>& class_names, const ClassifierConfig& cfg,
    std::vector<double>* epoch_losses) {
  if (clips.empty()) throw DataError("train_frame_classifier: no clips");
  if (class_names.empty())
    throw DataError("train_frame_classifier: empty class vocabulary");

  for (const std::string& name : class_names) {
    bool present = false;
    for (const auto& [features, labels] : clips)
      if (labels.count(name)) {
        present = true;
        break;
      }
    if (!present)
      throw DataError("train_frame_classifier: class absent from all clips: " +
                      name);
  }

  const Index n_features = clips.front().first.cols();
  const Index n_classes = static_cast<Index>(class_names.size());

  // Per-clip 0/1 targets.
  std::vector<Vector> targets;
  targets.reserve(clips.size());
  Index total_frames = 0;
  for (const auto& [features, labels] : clips) {
    if (features.cols() != n_features)
      throw DataError("train_frame_classifier: feature dimension mismatch");
    total_frames += features.rows();
    Vector y = Vector::Zero(n_classes);
    for (Index c = 0; c < n_classes; ++c)
      if (labels.count(class_names[c])) y(c) = 1.0;
    targets.push_back(std::move(y));
  }

  LinearClassifier model;
  model.weights = Matrix::Zero(n_features, n_classes);
  model.bias = Vector::Zero(n_classes);
  model.class_names = class_names;
  model.context = cfg.context;

  // Standardize features over the whole training corpus.
  {
    Matrix all(total_frames, n_features);
    Index at = 0;
    for (const auto& [features, labels] : clips) {
      all.middleRows(at, features.rows()) = features;
      at += features.rows();
    }
    model.feature_scaler = Scaler::fit(all);
  }
  std::vector<Matrix> standardized;
  standardized.reserve(clips.size());
  for (const auto& [features, labels] : clips)
    standardized.push_back(model.feature_scaler.apply(features));

  const double inv_clips = 1.0 / static_cast<double>(clips.size());
  auto total_loss = [&]() {
    double loss = 0.0;
    for (size_t i = 0; i < clips.size(); ++i)
      loss += classifier_clip_loss(model.weights, model.bias, standardized[i],
                                   targets[i]);
    return loss * inv_clips;
  };

  if (epoch_losses) epoch_losses->push_back(total_loss());

  Matrix grad_w(n_features, n_classes), gw;
  Vector grad_b(n_classes), gb;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    grad_w.setZero();
    grad_b.setZero();
    double loss = 0.0;
    for (size_t i = 0; i < clips.size(); ++i) {
      loss += classifier_clip_loss(model.weights, model.bias, standardized[i],
                                   targets[i], &gw, &gb);
      grad_w += gw;
      grad_b += gb;
    }
    if (!std::isfinite(loss))
      throw NumericalError("train_frame_classifier: non-finite loss");
    model.weights -= cfg.learning_rate * inv_clips * grad_w;
    model.bias -= cfg.learning_rate * inv_clips * grad_b;
    if (epoch_losses) epoch_losses->push_back(total_loss());
  }
  return model;
}

PosteriorMatrix predict_posteriors(const LinearClassifier& m,
                                   const Matrix& features,
                                   double frame_period_s) {
  if (features.cols() != m.n_features())
    throw DataError("predict_posteriors: dimension mismatch");
  PosteriorMatrix p;
  const Matrix standardized = m.feature_scaler.dim() == 0
                                  ? features
                                  : m.feature_scaler.apply(features);
  // Clamped away from 0 and 1: a linear model never assigns certainty,
  // and exact endpoints only appear through rounding.
  p.values = ((standardized * m.weights).rowwise() + m.bias.transpose())
                 .unaryExpr([](double z) {
                   return std::clamp(sigmoid(z), 1e-12, 1.0 - 1e-12);
                 });
  p.frame_period_s = frame_period_s;
  p.class_names = m.class_names;
  return p;
}

PosteriorMatrix load_posteriors(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw DataError("cannot open posterior file: " + path);

  std::string line;
  if (!std::getline(file, line))
    throw DataError("malformed posterior header (empty file): " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::string prefix = "#frame_period_s=";
  if (line.rfind(prefix, 0) != 0)
    throw DataError("malformed posterior header (expected " + prefix +
                    "...): " + path);
  double frame_period = 0.0;
  try {
    frame_period = std::stod(line.substr(prefix.size()));
  } catch (const std::exception&) {
    throw DataError("malformed posterior header (bad frame period): " + path);
  }
  if (!(frame_period > 0.0))
    throw DataError("malformed posterior header (frame period <= 0): " + path);

  if (!std::getline(file, line))
    throw DataError("malformed posterior header (missing class names): " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> names = split(line, ',');
  if (names.empty() || names.front().empty())
    throw DataError("malformed posterior header (no class names): " + path);
  std::set<std::string> unique(names.begin(), names.end());
  if (unique.size() != names.size() || unique.count(""))
    throw DataError("malformed posterior header (duplicate or empty class): " +
                    path);

  std::vector<std::vector<double>> rows;
  size_t line_no = 2;
  while (std::getline(file, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != names.size())
      throw DataError("posterior row " + std::to_string(rows.size() + 1) +
                      " has " + std::to_string(fields.size()) + " values, expected " +
                      std::to_string(names.size()) + ": " + path);
    std::vector<double> row(fields.size());
    for (size_t c = 0; c < fields.size(); ++c) {
      try {
        row[c] = std::stod(fields[c]);
      } catch (const std::exception&) {
        throw DataError("posterior value not a number at row " +
                        std::to_string(rows.size() + 1) + ", column " +
                        std::to_string(c + 1) + ": " + path);
      }
      if (!(row[c] >= 0.0 && row[c] <= 1.0))
        throw DataError("posterior value out of [0,1] at row " +
                        std::to_string(rows.size() + 1) + ", column " +
                        std::to_string(c + 1) + ": " + path);
    }
    rows.push_back(std::move(row));
  }
  (void)line_no;

  PosteriorMatrix p;
  p.frame_period_s = frame_period;
  p.class_names = names;
  p.values.resize(static_cast<Index>(rows.size()),
                  static_cast<Index>(names.size()));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < names.size(); ++c)
      p.values(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
  p.empty_data = rows.empty();
  return p;
}

void save_posteriors(const std::string& path, const PosteriorMatrix& p) {
  std::ofstream file(path);
  if (!file) throw DataError("cannot open for writing: " + path);
  file << "#frame_period_s=" << p.frame_period_s << "\n";
  for (size_t c = 0; c < p.class_names.size(); ++c)
    file << (c ? "," : "") << p.class_names[c];
  file << "\n";
  for (Index t = 0; t < p.n_frames(); ++t) {
    for (Index c = 0; c < p.n_classes(); ++c)
      file << (c ? "," : "") << p.values(t, c);
    file << "\n";
  }
  if (!file) throw DataError("write failed: " + path);
}

}  // namespace sed
