// src/features.cc

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

#include "sed/features.h"

#include <cmath>
#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "sed/errors.h"

namespace sed {

namespace {

// Filterbank layout: 24 channels/octave starting near 180 Hz, ~5.3
// octaves, which keeps the top channel below the 8 kHz Nyquist.
constexpr double kFbBaseHz = 180.0;
constexpr double kFbChannelsPerOctave = 24.0;
// Constant-Q resonance. Q = 12 (about 1/8 octave bandwidth) trades
// frequency selectivity against ringing time at the low channels.
constexpr double kFbQ = 12.0;

struct Biquad {
  double b0, b1, b2, a1, a2;
  double z1 = 0.0, z2 = 0.0;

  double step(double x) {
    // transposed direct form II
    const double y = b0 * x + z1;
    z1 = b1 * x - a1 * y + z2;
    z2 = b2 * x - a2 * y;
    return y;
  }
};

// Constant-0dB-peak-gain bandpass (RBJ cookbook).
Biquad make_bandpass(double center_hz, double q, int sample_rate) {
  const double w0 = 2.0 * M_PI * center_hz / sample_rate;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  Biquad f{};
  f.b0 = alpha / a0;
  f.b1 = 0.0;
  f.b2 = -alpha / a0;
  f.a1 = -2.0 * std::cos(w0) / a0;
  f.a2 = (1.0 - alpha) / a0;
  return f;
}

double mel_of_hz(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double hz_of_mel(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

}  // namespace

std::vector<double> auditory_channel_centers() {
  std::vector<double> centers(kAuditoryChannels);
  for (int k = 0; k < kAuditoryChannels; ++k)
    centers[k] = kFbBaseHz * std::pow(2.0, k / kFbChannelsPerOctave);
  return centers;
}

double auditory_channel_response(int ch, double hz, int sample_rate) {
  const std::vector<double> centers = auditory_channel_centers();
  const Biquad f = make_bandpass(centers.at(ch), kFbQ, sample_rate);
  const std::complex<double> z =
      std::polar(1.0, -2.0 * M_PI * hz / sample_rate);
  const std::complex<double> num = f.b0 + (f.b1 + f.b2 * z) * z;
  const std::complex<double> den = 1.0 + (f.a1 + f.a2 * z) * z;
  return std::abs(num / den);
}

Spectrogram auditory_spectrogram(const Waveform& w) {
  const int fs = w.sample_rate;
  const int hop = static_cast<int>(std::lround(fs * kAuditoryFramePeriodS));
  if (hop <= 0) throw DataError("auditory_spectrogram: invalid sample rate");
  const Index n_frames = static_cast<Index>(w.samples.size()) / hop;
  if (n_frames < 1)
    throw DataError("auditory_spectrogram: waveform shorter than one frame");

  std::vector<double> centers = auditory_channel_centers();
  if (centers.back() * 2.05 > fs)
    throw DataError("auditory_spectrogram: sample rate too low for filterbank");

  Spectrogram s;
  s.values.setZero(n_frames, kAuditoryChannels);
  s.frame_period_s = kAuditoryFramePeriodS;
  s.channel_centers_hz = centers;

  // 10 ms leaky integration of the rectified band signal, sampled at the
  // end of each frame.
  const double alpha = std::exp(-1.0 / (fs * 0.010));
  const size_t n_used = static_cast<size_t>(n_frames) * hop;

  for (int ch = 0; ch < kAuditoryChannels; ++ch) {
    Biquad f = make_bandpass(centers[ch], kFbQ, fs);
    double integ = 0.0;
    Index frame = 0;
    for (size_t n = 0; n < n_used; ++n) {
      const double band = f.step(w.samples[n]);
      integ = alpha * integ + (1.0 - alpha) * std::max(0.0, band);
      if ((n + 1) % static_cast<size_t>(hop) == 0)
        s.values(frame++, ch) = std::cbrt(integ);
    }
  }
  return s;
}

Spectrogram log_mel_energy(const Waveform& w) {
  const int fs = w.sample_rate;
  const int win = static_cast<int>(std::lround(fs * kMelWindowS));
  const int hop = static_cast<int>(std::lround(fs * kMelHopS));
  const Index n = static_cast<Index>(w.samples.size());
  if (n < win) throw DataError("log_mel_energy: waveform shorter than one window");
  const Index n_frames = (n - win) / hop + 1;

  int fft_size = 1;
  while (fft_size < win) fft_size <<= 1;
  const int n_bins = fft_size / 2 + 1;

  std::vector<double> hamming(win);
  for (int i = 0; i < win; ++i)
    hamming[i] = 0.54 - 0.46 * std::cos(2.0 * M_PI * i / (win - 1));

  // Triangular mel filters spanning 0 .. fs/2 (HTK mel scale).
  const double mel_lo = mel_of_hz(0.0);
  const double mel_hi = mel_of_hz(fs / 2.0);
  std::vector<double> edges(kMelBands + 2);
  for (int i = 0; i < kMelBands + 2; ++i)
    edges[i] = hz_of_mel(mel_lo + (mel_hi - mel_lo) * i / (kMelBands + 1));

  Matrix mel_weights = Matrix::Zero(kMelBands, n_bins);
  for (int b = 0; b < kMelBands; ++b) {
    const double lo = edges[b], mid = edges[b + 1], hi = edges[b + 2];
    for (int bin = 0; bin < n_bins; ++bin) {
      const double f = static_cast<double>(bin) * fs / fft_size;
      if (f > lo && f < mid)
        mel_weights(b, bin) = (f - lo) / (mid - lo);
      else if (f >= mid && f < hi)
        mel_weights(b, bin) = (hi - f) / (hi - mid);
    }
  }

  Spectrogram s;
  s.values.setZero(n_frames, kMelBands);
  s.frame_period_s = kMelHopS;
  s.channel_centers_hz.assign(edges.begin() + 1, edges.end() - 1);
  s.log_scale = true;

  Eigen::FFT<double> fft;
  std::vector<double> frame(fft_size, 0.0);
  std::vector<std::complex<double>> spectrum;
  Vector power(n_bins);

  for (Index t = 0; t < n_frames; ++t) {
    const Index start = t * hop;
    for (int i = 0; i < win; ++i)
      frame[i] = w.samples[start + i] * hamming[i];
    std::fill(frame.begin() + win, frame.end(), 0.0);
    fft.fwd(spectrum, frame);
    for (int bin = 0; bin < n_bins; ++bin)
      power(bin) = std::norm(spectrum[bin]);
    const Vector energies = mel_weights * power;
    for (int b = 0; b < kMelBands; ++b)
      s.values(t, b) = std::log(energies(b) + kMelLogFloor);
  }
  return s;
}

EnergyCurve short_term_energy(const Waveform& w) {
  const int fs = w.sample_rate;
  const int win = static_cast<int>(std::lround(fs * kSteWindowS));
  const int hop = static_cast<int>(std::lround(fs * kSteHopS));
  const Index n = static_cast<Index>(w.samples.size());
  if (n < win)
    throw DataError("short_term_energy: waveform shorter than one window");

  EnergyCurve e;
  e.window_s = kSteWindowS;
  e.hop_s = kSteHopS;
  const Index n_windows = (n - win) / hop + 1;
  e.values.resize(n_windows);
  for (Index i = 0; i < n_windows; ++i) {
    double acc = 0.0;
    const Index start = i * hop;
    for (int j = 0; j < win; ++j) {
      const double x = w.samples[start + j];
      acc += x * x;
    }
    e.values[i] = acc / win;
  }
  return e;
}

Matrix stack_frames(const Matrix& frames, int k) {
  if (k < 1) throw DataError("stack_frames: k must be >= 1");
  const Index n = frames.rows();
  const Index ch = frames.cols();
  Matrix out(n, k * ch);
  for (Index t = 0; t < n; ++t) {
    for (int j = 0; j < k; ++j) {
      const Index src = std::max<Index>(0, t - k + 1 + j);
      out.block(t, j * ch, 1, ch) = frames.row(src);
    }
  }
  return out;
}

}  // namespace sed
