// include/sed/synth.h

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

#ifndef SED_SYNTH_H_
#define SED_SYNTH_H_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "sed/manifest.h"

namespace sed {

// Desk-scale synthetic scenes: non-overlapping events with distinct
// per-class timbres (harmonic tone complexes, bright noise bursts,
// amplitude-modulated low noise) over a pink-noise background at a fixed
// SNR. Events have sharp attacks and a short release tail, like typical
// domestic sounds.
struct SynthSpec {
  int n_clips = 20;
  int events_per_clip = 3;
  std::vector<std::string> classes = {"tone", "noise", "am"};
  double min_duration_s = 0.3;
  double max_duration_s = 1.5;
  double min_gap_s = 0.7;
  double max_gap_s = 1.4;
  double lead_s = 1.0;  // silence-ish padding before the first event
  double tail_s = 1.0;  // and after the last
  double snr_db = 20.0;  // +inf disables the background entirely
  double event_rms = 0.1;
  double attack_s = 0.008;
  double release_s = 0.15;
  int sample_rate = 16000;
  uint64_t seed = 0;

  void validate() const;
};

// Renders one scene set. Writes clip_####.wav files plus weak.tsv and
// strong.tsv into out_dir and returns the matching manifest.
Manifest synthesize_scenes(const SynthSpec& spec, const std::string& out_dir);

}  // namespace sed

#endif  // SED_SYNTH_H_
