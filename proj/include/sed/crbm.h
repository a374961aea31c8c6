// include/sed/crbm.h

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

#ifndef SED_CRBM_H_
#define SED_CRBM_H_

#include <vector>

#include "sed/rbm.h"
#include "sed/types.h"

namespace sed {

// Conditional Gaussian-Bernoulli RBM. The previous context_frames frames
// (flattened oldest-first) drive dynamic hidden and visible biases
// through the autoregressive weights.
struct CrbmParams {
  Matrix weights;           // visible_dim x hidden_dim
  Matrix autoreg_hidden;    // (visible_dim * context_frames) x hidden_dim
  Matrix autoreg_visible;   // (visible_dim * context_frames) x visible_dim
  Vector hidden_bias;       // hidden_dim
  Vector visible_bias;      // visible_dim (static part; training only)
  int context_frames = 0;

  Index visible_dim() const { return weights.rows(); }
  Index hidden_dim() const { return weights.cols(); }
};

struct CrbmModel {
  CrbmParams params;
  Scaler input_scaler;
};

// Deterministic conditional affine map:
//   b_i^t = sum_j flat(history)_j A_ji + b_i
//   c_i^t = sum_j v_j W_ji + b_i^t
// history holds exactly context_frames rows, oldest first.
Vector crbm_transform(const CrbmParams& p, const Vector& v,
                      const Matrix& history);

// Applies crbm_transform to every frame of a sequence; frames with
// incomplete history replicate the first frame (same policy as
// stack_frames).
Matrix crbm_transform_sequence(const CrbmParams& p, const Matrix& frames);

// Mean conditional reconstruction error over all full-history windows.
double crbm_reconstruction_error(const CrbmParams& p,
                                 const std::vector<Matrix>& clips);

// CD-k training on standardized per-clip sequences. History windows
// never cross clip boundaries and are never resampled. Throws
// NumericalError on non-finite parameters, DataError if any clip is not
// longer than the context.
CrbmParams crbm_train(const std::vector<Matrix>& clips, int context_frames,
                      Index hidden_dim, const TrainConfig& cfg,
                      std::vector<double>* epoch_errors = nullptr);

// Full representation chain for one spectrogram: stack -> standardize ->
// RBM affine map -> (per cRBM) standardize + conditional affine map.
// Returns one n_frames x hidden_dim activation matrix per cRBM.
std::vector<Matrix> transform_sequence(const RbmModel& rbm,
                                       const std::vector<CrbmModel>& crbms,
                                       const Spectrogram& s, int stack_k);

}  // namespace sed

#endif  // SED_CRBM_H_
