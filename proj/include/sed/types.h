// include/sed/types.h

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

#ifndef SED_TYPES_H_
#define SED_TYPES_H_

#include <Eigen/Core>
#include <string>
#include <vector>

namespace sed {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Mono audio, samples in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 0;

  double duration_s() const {
    return sample_rate > 0
               ? static_cast<double>(samples.size()) / sample_rate
               : 0.0;
  }
};

// Time x channel magnitude matrix. One row per frame.
struct Spectrogram {
  Matrix values;  // n_frames x n_channels
  double frame_period_s = 0.0;
  std::vector<double> channel_centers_hz;
  bool log_scale = false;  // true for log mel energies

  Index n_frames() const { return values.rows(); }
  Index n_channels() const { return values.cols(); }
};

// Windowed mean-squared amplitude. values[i] covers the window starting
// at i * hop_s.
struct EnergyCurve {
  std::vector<double> values;
  double window_s = 0.0;
  double hop_s = 0.0;

  double time_at(size_t i) const { return static_cast<double>(i) * hop_s; }
};

struct EventBoundary {
  double onset_s = 0.0;
  double offset_s = 0.0;
};

struct LabeledEvent {
  double onset_s = 0.0;
  double offset_s = 0.0;
  std::string class_name;
  double score = 0.0;  // mean posterior over the event span
};

}  // namespace sed

#endif  // SED_TYPES_H_
