// include/sed/labeling.h

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

#ifndef SED_LABELING_H_
#define SED_LABELING_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sed/scaler.h"
#include "sed/types.h"

namespace sed {

// Frame-level class scores in [0, 1]. Rows need not sum to one: classes
// are scored independently (multi-label sigmoids).
struct PosteriorMatrix {
  Matrix values;  // n_frames x n_classes
  double frame_period_s = 0.0;
  std::vector<std::string> class_names;
  bool empty_data = false;  // file parsed but contained zero frames

  Index n_frames() const { return values.rows(); }
  Index n_classes() const { return values.cols(); }
};

// Mean posterior per class over the frames whose centers fall inside
// [onset, offset); the winner is the maximum mean, ties broken by
// class-name order. Returns nullopt when the span covers no frame
// centers (caller drops the event).
std::optional<LabeledEvent> infer_label(const PosteriorMatrix& p,
                                        const EventBoundary& b);

// Ensemble vote over labels for the same boundary: most frequent class
// wins; ties go to the highest mean score, then class-name order.
LabeledEvent majority_vote(const std::vector<LabeledEvent>& labels);

// Minimal weakly supervised frame classifier: multi-label logistic model
// over standardized log-mel frames with symmetric context, trained on
// clip-level labels with average pooling.
struct LinearClassifier {
  Matrix weights;  // n_features x n_classes
  Vector bias;     // n_classes
  Scaler feature_scaler;  // fitted on the training frames
  std::vector<std::string> class_names;
  int mel_bands = 64;
  int context = 4;  // +/- frames of context

  Index n_features() const { return weights.rows(); }
  Index n_classes() const { return weights.cols(); }
};

struct ClassifierConfig {
  double learning_rate = 0.5;
  int epochs = 200;
  int context = 4;
  uint64_t rng_seed = 0;  // reserved; training is deterministic
};

// Frames x (bands * (2*context+1)) feature matrix; edge frames replicate.
Matrix classifier_features(const Matrix& log_mel, int context);

// Clip-level binary cross-entropy and its gradient for one clip under
// average pooling of the frame sigmoids. labels(c) in {0,1}.
double classifier_clip_loss(const Matrix& weights, const Vector& bias,
                            const Matrix& features, const Vector& labels,
                            Matrix* grad_weights = nullptr,
                            Vector* grad_bias = nullptr);

// Full-batch gradient descent on the mean clip loss. Every class must
// appear in at least one clip. When epoch_losses is given it receives
// the loss before training and after every epoch.
LinearClassifier train_frame_classifier(
    const std::vector<std::pair<Matrix, std::set<std::string>>>& clips,
    const std::vector<std::string>& class_names, const ClassifierConfig& cfg,
    std::vector<double>* epoch_losses = nullptr);

// Per-frame sigmoid scores.
PosteriorMatrix predict_posteriors(const LinearClassifier& m,
                                   const Matrix& features,
                                   double frame_period_s);

// Posterior CSV: line 1 "#frame_period_s=<float>", line 2 class names,
// then one comma-separated row per frame. Values validated to [0, 1].
PosteriorMatrix load_posteriors(const std::string& path);
void save_posteriors(const std::string& path, const PosteriorMatrix& p);

}  // namespace sed

#endif  // SED_LABELING_H_
