// include/sed/manifest.h

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

#ifndef SED_MANIFEST_H_
#define SED_MANIFEST_H_

#include <set>
#include <string>
#include <vector>

#include "sed/types.h"

namespace sed {

struct ClipEntry {
  std::string filename;
  double duration_s = 0.0;  // 0 when not yet known
  std::set<std::string> weak_labels;
  std::vector<LabeledEvent> strong_events;  // sorted by onset
};

struct Manifest {
  std::vector<ClipEntry> clips;  // filenames unique, in first-seen order

  const ClipEntry* find(const std::string& filename) const;
  // Sorted union of weak labels and strong-event classes.
  std::vector<std::string> class_vocabulary() const;
};

// Weak TSV rows: filename<TAB>comma,separated,labels (labels may be
// empty). Strong TSV rows follow the evaluation format. Clips appearing
// only in the strong TSV get empty weak label sets. Both files accept an
// optional "filename..." header line. Errors carry line numbers.
Manifest parse_manifest(const std::string& weak_tsv_path,
                        const std::string& strong_tsv_path = "");

}  // namespace sed

#endif  // SED_MANIFEST_H_
