// include/sed/evaluation.h

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

#ifndef SED_EVALUATION_H_
#define SED_EVALUATION_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sed/types.h"

namespace sed {

// Events of one clip, sorted by onset.
struct EventList {
  std::string filename;
  std::vector<LabeledEvent> events;
};

// Collar-based matching criteria. An event pair is eligible when every
// enabled requirement holds:
//   onset:  |onset_p - onset_r| <= onset_collar_s
//   offset: |offset_p - offset_r| <= max(offset_collar_s,
//                                        offset_relative * ref length)
//   label:  class_p == class_r
struct MatchConfig {
  double onset_collar_s = 0.200;
  double offset_collar_s = 0.200;
  double offset_relative = 0.20;
  bool require_onset = true;
  bool require_offset = true;
  bool require_label = true;
};

struct MatchResult {
  std::vector<std::pair<size_t, size_t>> pairs;  // (ref index, pred index)
  std::vector<size_t> unmatched_ref;
  std::vector<size_t> unmatched_pred;
};

// One-to-one greedy matching: references in onset order each take the
// eligible unmatched prediction with the smallest onset difference
// (ties: smaller offset difference, then prediction order).
MatchResult match_events(const EventList& ref, const EventList& pred,
                         const MatchConfig& cfg);

struct ClassStats {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  double f_score() const {
    const double denom = 2.0 * tp + fp + fn;
    return denom > 0.0 ? 2.0 * tp / denom : 0.0;
  }
};

struct EvalReport {
  std::map<std::string, ClassStats> per_class;
  double micro_f = 0.0;
  double macro_f = 0.0;  // mean over classes present in the references
  double error_rate = 0.0;
  long substitutions = 0;
  long deletions = 0;
  long insertions = 0;
  long n_ref = 0;
  long tp = 0, fp = 0, fn = 0;
};

// Event-based scoring over aligned clip lists. Files present on only one
// side are treated as having an empty counterpart. Substitutions pair
// leftover false positives/negatives per clip, label-blind.
EvalReport score(const std::vector<EventList>& refs,
                 const std::vector<EventList>& preds, const MatchConfig& cfg);

enum class EvalMode { kOnsetOnly, kOffsetOnly, kOnsetOffset, kFull };

EvalMode parse_eval_mode(const std::string& name);
std::string eval_mode_name(EvalMode mode);
MatchConfig mode_config(EvalMode mode, MatchConfig base);

// Subsystem decomposition: one F per mode, pooled over events. Modes
// that ignore labels leave a single effective class, so the pooled score
// is their macro average; the full mode uses the same pooling so the
// rows stay monotone as matching requirements are added.
std::vector<std::pair<EvalMode, double>> subsystem_report(
    const std::vector<EventList>& refs, const std::vector<EventList>& preds,
    const std::vector<EvalMode>& modes, const MatchConfig& base);

// Human-readable table followed by a machine-readable key=value block.
std::string format_report(const EvalReport& report);

}  // namespace sed

#endif  // SED_EVALUATION_H_
