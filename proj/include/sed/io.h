// include/sed/io.h

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

#ifndef SED_IO_H_
#define SED_IO_H_

#include <string>
#include <utility>
#include <vector>

#include "sed/crbm.h"
#include "sed/evaluation.h"
#include "sed/labeling.h"
#include "sed/pca.h"
#include "sed/rbm.h"
#include "sed/types.h"

namespace sed {

// ---------------------------------------------------------------------
// Event TSV files (DCASE-style).
//   boundaries: filename<TAB>onset<TAB>offset
//   labeled:    filename<TAB>onset<TAB>offset<TAB>class
// A first line whose first field is "filename" is treated as a header.
// Events are grouped per file and sorted by onset on load.

std::vector<EventList> read_event_tsv(const std::string& path, bool labeled);
void write_boundary_tsv(
    const std::string& path,
    const std::vector<std::pair<std::string, std::vector<EventBoundary>>>& rows);
void write_labeled_tsv(const std::string& path,
                       const std::vector<EventList>& lists);

// ---------------------------------------------------------------------
// Feature dump: magic "SEDF", u32 version, u32 n_frames, u32 n_channels,
// f64 frame_period_s, then row-major f32, little-endian.

void write_feature_dump(const std::string& path, const Spectrogram& s);
Spectrogram read_feature_dump(const std::string& path);

// ---------------------------------------------------------------------
// Model files: magic "SEDM", u32 version, u8 kind, u32 visible_dim,
// u32 hidden_dim, u32 context_frames, then the parameter matrices
// row-major little-endian f64 in field order. RBM and cRBM files carry
// the input standardizer (mean then std) after the parameters.
//   kind 0: RBM       W, hidden bias, visible bias, sigma
//   kind 1: cRBM      W, A, hidden bias, visible bias, A_vis
//   kind 2: PCA       mean, components, explained variance
//   kind 3: classifier  W, bias, feature scaler, then u32 mel bands and
//           class names (u32 count, then u32 length + bytes per name)

void save_rbm(const std::string& path, const RbmModel& model);
RbmModel load_rbm(const std::string& path);
void save_crbm(const std::string& path, const CrbmModel& model);
CrbmModel load_crbm(const std::string& path);
void save_pca(const std::string& path, const PcaModel& model);
PcaModel load_pca(const std::string& path);
void save_classifier(const std::string& path, const LinearClassifier& model);
LinearClassifier load_classifier(const std::string& path);

}  // namespace sed

#endif  // SED_IO_H_
