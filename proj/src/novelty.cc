// src/novelty.cc

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

#include "sed/novelty.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sed/errors.h"
#include "sed/features.h"

namespace sed {

namespace {

// Centered moving average, window truncated (and renormalized) at the
// edges. Even windows extend one frame further to the right.
void smooth_column(const Vector& in, int w, Vector* out) {
  const Index n = in.size();
  if (w <= 1) {
    *out = in;
    return;
  }
  const Index left = (w - 1) / 2;
  const Index right = w / 2;
  out->resize(n);
  for (Index t = 0; t < n; ++t) {
    const Index lo = std::max<Index>(0, t - left);
    const Index hi = std::min<Index>(n - 1, t + right);
    (*out)(t) = in.segment(lo, hi - lo + 1).mean();
  }
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    const double lower = *std::max_element(v.begin(), v.begin() + mid);
    m = 0.5 * (m + lower);
  }
  return m;
}

}  // namespace

NoveltyCurve novelty_curve(const std::vector<Matrix>& activations,
                           const std::vector<PcaModel>& pcas,
                           const std::vector<int>& contexts,
                           const BoundaryConfig& cfg, double frame_period_s) {
  if (activations.size() != pcas.size() || activations.size() != contexts.size())
    throw DataError("novelty_curve: model count mismatch");
  if (activations.empty()) throw DataError("novelty_curve: no activations");
  const Index n = activations.front().rows();
  for (const Matrix& a : activations)
    if (a.rows() != n) throw DataError("novelty_curve: frame count mismatch");

  NoveltyCurve curve;
  curve.frame_period_s = frame_period_s;
  curve.values.assign(static_cast<size_t>(n), 0.0);
  if (n == 0) return curve;

  Vector smoothed;
  for (size_t m = 0; m < activations.size(); ++m) {
    const Matrix projected = pcas[m].project(activations[m]);
    const int w = std::max(
        1, static_cast<int>(std::lround(cfg.smoothing_constant / contexts[m])));

    for (Index d = 0; d < projected.cols(); ++d) {
      Vector diff = Vector::Zero(n);
      for (Index t = 1; t < n; ++t)
        diff(t) = std::max(0.0, projected(t, d) - projected(t - 1, d));
      smooth_column(diff, w, &smoothed);
      for (Index t = 0; t < n; ++t) curve.values[t] += smoothed(t);
    }
  }
  curve.values[0] = 0.0;

  for (double v : curve.values)
    if (!std::isfinite(v)) throw NumericalError("novelty_curve: non-finite value");
  return curve;
}

std::vector<size_t> pick_peaks(const NoveltyCurve& c, double threshold_k,
                               double min_separation_s) {
  const std::vector<double>& v = c.values;
  const size_t n = v.size();
  std::vector<size_t> result;
  if (n < 3 || std::isinf(threshold_k)) return result;

  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  const double stddev = std::sqrt(var / static_cast<double>(n));
  const double threshold = mean + threshold_k * stddev;

  // Local maxima; a plateau strictly above both flanks counts once, at
  // its leftmost frame.
  std::vector<size_t> candidates;
  size_t t = 1;
  while (t < n) {
    if (v[t] > v[t - 1]) {
      size_t j = t;
      while (j + 1 < n && v[j + 1] == v[t]) ++j;
      if (j + 1 < n && v[j + 1] < v[t] && v[t] >= threshold)
        candidates.push_back(t);
      t = j + 1;
    } else {
      ++t;
    }
  }

  // Minimum-separation suppression, larger peaks first.
  std::vector<size_t> by_height(candidates);
  std::sort(by_height.begin(), by_height.end(), [&](size_t a, size_t b) {
    if (v[a] != v[b]) return v[a] > v[b];
    return a < b;
  });
  const double min_sep_frames = min_separation_s / c.frame_period_s;
  for (size_t cand : by_height) {
    bool keep = true;
    for (size_t kept : result) {
      const double dist = std::abs(static_cast<double>(cand) -
                                   static_cast<double>(kept));
      if (dist < min_sep_frames - 1e-9) {
        keep = false;
        break;
      }
    }
    if (keep) result.push_back(cand);
  }
  std::sort(result.begin(), result.end());
  return result;
}

std::vector<double> locate_onsets(const NoveltyCurve& c,
                                  const std::vector<size_t>& peaks,
                                  double fraction) {
  std::vector<double> onsets;
  for (size_t p : peaks) {
    if (p >= c.values.size()) throw DataError("locate_onsets: peak out of range");
    const double level = fraction * c.values[p];
    size_t onset_frame = 0;
    for (size_t t = p + 1; t-- > 0;) {
      if (c.values[t] <= level) {
        onset_frame = t;
        break;
      }
    }
    onsets.push_back(static_cast<double>(onset_frame) * c.frame_period_s);
  }
  std::sort(onsets.begin(), onsets.end());
  onsets.erase(std::unique(onsets.begin(), onsets.end()), onsets.end());
  return onsets;
}

std::vector<EventBoundary> detect_offsets(const EnergyCurve& e,
                                          const std::vector<double>& onsets,
                                          double clip_end_s,
                                          const BoundaryConfig& cfg) {
  std::vector<EventBoundary> events;
  const size_t n = e.values.size();
  const int sustain_windows =
      std::max(1, static_cast<int>(std::lround(cfg.offset_sustain_s / e.hop_s)));

  for (size_t i = 0; i < onsets.size(); ++i) {
    const double onset = onsets[i];
    double cap = clip_end_s;
    if (i + 1 < onsets.size()) cap = std::min(cap, onsets[i + 1]);

    // Adaptive threshold from the energy shortly after the onset.
    std::vector<double> window;
    for (size_t j = 0; j < n; ++j) {
      const double t = e.time_at(j);
      if (t >= onset && t < onset + cfg.offset_median_window_s)
        window.push_back(e.values[j]);
    }
    const double theta =
        std::max(cfg.offset_theta_abs, cfg.offset_rel_factor * median_of(window));

    // Earliest point past the refractory where the energy stays below
    // theta for the sustain span. A low run cut short by the end of the
    // curve still counts.
    double offset = cap;
    int run = 0;
    size_t run_start = 0;
    for (size_t j = 0; j < n; ++j) {
      if (e.time_at(j) <= onset + cfg.offset_refractory_s) continue;
      if (e.time_at(j) >= cap) break;
      if (e.values[j] < theta) {
        if (run == 0) run_start = j;
        ++run;
        if (run >= sustain_windows) break;
      } else {
        run = 0;
      }
    }
    if (run > 0) offset = std::min(cap, e.time_at(run_start));

    if (offset - onset >= cfg.min_event_s && offset > onset)
      events.push_back({onset, std::min(offset, clip_end_s)});
  }
  return events;
}

std::vector<EventBoundary> detect_boundaries(
    const Spectrogram& s, const EnergyCurve& e, const RbmModel& rbm,
    const std::vector<CrbmModel>& crbms, const std::vector<PcaModel>& pcas,
    const BoundaryConfig& cfg, int stack_k) {
  std::vector<int> contexts;
  contexts.reserve(crbms.size());
  for (const CrbmModel& m : crbms) contexts.push_back(m.params.context_frames);

  const std::vector<Matrix> activations =
      transform_sequence(rbm, crbms, s, stack_k);
  const NoveltyCurve curve =
      novelty_curve(activations, pcas, contexts, cfg, s.frame_period_s);
  const std::vector<size_t> peaks =
      pick_peaks(curve, cfg.threshold_k, cfg.min_peak_separation_s);
  const std::vector<double> onsets =
      locate_onsets(curve, peaks, cfg.onset_fraction);

  const double clip_end =
      static_cast<double>(s.n_frames()) * s.frame_period_s;
  return detect_offsets(e, onsets, clip_end, cfg);
}

}  // namespace sed
