// include/sed/novelty.h

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

#ifndef SED_NOVELTY_H_
#define SED_NOVELTY_H_

#include <vector>

#include "sed/crbm.h"
#include "sed/pca.h"
#include "sed/types.h"

namespace sed {

// Per-frame activity measure; peaks mark likely event onsets.
struct NoveltyCurve {
  std::vector<double> values;  // >= 0, finite; values[0] == 0
  double frame_period_s = 0.010;
};

// Boundary-detection tunables. The smoothing window for a cRBM with
// context N is max(1, round(smoothing_constant / N)) frames.
struct BoundaryConfig {
  double smoothing_constant = 30.0;
  double threshold_k = 1.0;          // peak threshold mean + k * std
  double min_peak_separation_s = 0.100;
  double onset_fraction = 0.25;      // onset at 25% of peak height
  double offset_refractory_s = 0.100;
  double offset_sustain_s = 0.060;   // low-energy span required for an offset
  double offset_theta_abs = 1e-6;
  double offset_rel_factor = 0.1;
  double offset_median_window_s = 0.500;
  double min_event_s = 0.060;
};

// Projects each cRBM activation matrix through its PCA, takes the
// half-wave rectified first-order time difference, smooths each dimension
// with a centered moving average sized by the cRBM context, and sums all
// smoothed dimensions per frame.
NoveltyCurve novelty_curve(const std::vector<Matrix>& activations,
                           const std::vector<PcaModel>& pcas,
                           const std::vector<int>& contexts,
                           const BoundaryConfig& cfg,
                           double frame_period_s = 0.010);

// Local maxima above mean + threshold_k * std (plateaus resolve to the
// leftmost frame); maxima closer than min_separation_s keep the larger.
std::vector<size_t> pick_peaks(const NoveltyCurve& c, double threshold_k,
                               double min_separation_s = 0.100);

// Closest preceding sample at `fraction` of each peak; clip start if the
// curve never falls that low. Sorted, duplicate frames merged.
std::vector<double> locate_onsets(const NoveltyCurve& c,
                                  const std::vector<size_t>& peaks,
                                  double fraction = 0.25);

// STE-thresholded offsets: earliest sustained-low point after each onset,
// capped at the next onset and the clip end. Events shorter than
// min_event_s are dropped.
std::vector<EventBoundary> detect_offsets(const EnergyCurve& e,
                                          const std::vector<double>& onsets,
                                          double clip_end_s,
                                          const BoundaryConfig& cfg);

// End-to-end boundary detection for one clip.
std::vector<EventBoundary> detect_boundaries(
    const Spectrogram& s, const EnergyCurve& e, const RbmModel& rbm,
    const std::vector<CrbmModel>& crbms, const std::vector<PcaModel>& pcas,
    const BoundaryConfig& cfg, int stack_k);

}  // namespace sed

#endif  // SED_NOVELTY_H_
