// include/sed/config.h

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

#ifndef SED_CONFIG_H_
#define SED_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sed/evaluation.h"
#include "sed/labeling.h"
#include "sed/novelty.h"
#include "sed/rbm.h"

namespace sed {

// Every pipeline tunable with the reference configuration as defaults:
// 3-frame stacking, 350/300 hidden units, CD-10, ten contexts from 30 ms
// to 300 ms, 16 PCA dimensions.
struct PipelineConfig {
  int stack_k = 3;
  int rbm_hidden = 350;
  int crbm_hidden = 300;
  std::vector<int> contexts = {3, 6, 9, 12, 15, 18, 21, 24, 27, 30};
  int pca_dims = 16;

  // contrastive divergence (shared by RBM and cRBM training)
  int cd_steps = 10;
  double learning_rate = 1e-3;
  double momentum = 0.9;
  double weight_decay = 1e-4;
  int minibatch = 64;
  int epochs = 30;
  uint64_t rng_seed = 0;

  // boundary detection
  BoundaryConfig boundary;

  // evaluation collars
  MatchConfig collars;

  // built-in weakly supervised frame classifier
  bool train_classifier = true;
  double cls_learning_rate = 0.5;
  int cls_epochs = 200;
  int cls_context = 4;

  int jobs = 0;  // 0 = available parallelism

  TrainConfig train_config() const;
  ClassifierConfig classifier_config() const;

  // Throws DataError if any value is out of range.
  void validate() const;
};

// key = value lines, '#' comments, lists comma-separated. Unknown keys
// are rejected. Values not present keep their defaults.
PipelineConfig load_config(const std::string& path);
void apply_config_line(PipelineConfig* cfg, const std::string& key,
                       const std::string& value);
std::string config_to_string(const PipelineConfig& cfg);
void save_config(const std::string& path, const PipelineConfig& cfg);

}  // namespace sed

#endif  // SED_CONFIG_H_
