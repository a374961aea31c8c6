// include/sed/features.h

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

#ifndef SED_FEATURES_H_
#define SED_FEATURES_H_

#include <vector>

#include "sed/types.h"

namespace sed {

// Front-end constants. All analysis runs at 16 kHz; callers resample first.
constexpr int kAnalysisRate = 16000;
constexpr int kAuditoryChannels = 128;
constexpr double kAuditoryFramePeriodS = 0.010;
constexpr int kMelBands = 64;
constexpr double kMelWindowS = 0.040;
constexpr double kMelHopS = 0.020;
constexpr double kMelLogFloor = 1e-10;
constexpr double kSteWindowS = 0.020;
constexpr double kSteHopS = 0.010;

// 128-channel auditory-style spectrogram: log-spaced (24 channels/octave
// from ~180 Hz) second-order bandpass filterbank, half-wave rectification,
// 10 ms leaky integration sampled on a 10 ms frame grid, cube-root
// compression. n_frames = floor(duration / 0.010).
Spectrogram auditory_spectrogram(const Waveform& w);

// Center frequencies of the auditory filterbank channels.
std::vector<double> auditory_channel_centers();

// Magnitude response of auditory channel `ch` at frequency `hz` for the
// given sample rate. Exposed so tests can locate the expected dominant
// channel directly from the filter definitions.
double auditory_channel_response(int ch, double hz, int sample_rate);

// 64-band log mel energies, 40 ms Hamming windows with 50% overlap,
// log applied after adding kMelLogFloor. Frames fully inside the signal.
Spectrogram log_mel_energy(const Waveform& w);

// Mean squared amplitude per 20 ms window, 10 ms hop (aligned with the
// auditory frame grid).
EnergyCurve short_term_energy(const Waveform& w);

// Row t = concatenation of frames [t-k+1 .. t] (oldest first); missing
// history at the start replicates the first frame. Row count preserved.
Matrix stack_frames(const Matrix& frames, int k);

}  // namespace sed

#endif  // SED_FEATURES_H_
