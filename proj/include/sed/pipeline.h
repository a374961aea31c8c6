// include/sed/pipeline.h

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

#ifndef SED_PIPELINE_H_
#define SED_PIPELINE_H_

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "sed/config.h"
#include "sed/crbm.h"
#include "sed/evaluation.h"
#include "sed/io.h"
#include "sed/manifest.h"
#include "sed/novelty.h"

namespace sed {

// Everything cmd_train produces: the RBM, the cRBM array with one PCA
// per context, the optional weak-label classifier, and the exact config
// that built them.
struct ModelBundle {
  PipelineConfig config;
  RbmModel rbm;
  std::vector<CrbmModel> crbms;
  std::vector<PcaModel> pcas;
  std::optional<LinearClassifier> classifier;
};

// Trains the full bundle from the manifest's audio. Per-epoch
// reconstruction errors go to `log` (line-oriented, stderr by
// convention).
ModelBundle train_models(const Manifest& manifest, const std::string& audio_dir,
                         const PipelineConfig& config, std::ostream& log);

// Bundle directory layout: rbm.model, crbm_<N>.model and pca_<N>.model
// per context, classifier.model when present, config.snapshot. Writing is
// staged through a temp directory so failures leave no partial bundle.
void save_bundle(const std::string& dir, const ModelBundle& bundle);
ModelBundle load_bundle(const std::string& dir);

// Boundary detection over all manifest clips; clips yielding no events
// produce empty entries.
std::vector<std::pair<std::string, std::vector<EventBoundary>>> detect_all(
    const Manifest& manifest, const std::string& audio_dir,
    const ModelBundle& bundle, std::ostream& log,
    const std::string& feature_dump_dir = "");

// Labels detected boundaries. Posteriors come either from per-clip CSV
// files named <clip stem>.csv in posterior_dir, or from the bundle's
// built-in classifier run on the clip audio (audio_dir required then).
// Zero-frame events are dropped and counted in the log.
std::vector<EventList> label_events(
    const std::vector<std::pair<std::string, std::vector<EventBoundary>>>&
        boundaries,
    const ModelBundle& bundle, const std::string& audio_dir,
    const std::string& posterior_dir, std::ostream& log);

}  // namespace sed

#endif  // SED_PIPELINE_H_
