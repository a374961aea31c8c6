// src/synth.cc

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

#include "sed/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sed/errors.h"
#include "sed/rng.h"
#include "sed/wav.h"

namespace sed {

namespace {

enum class Timbre { kToneComplex, kNoiseBurst, kAmNoise };

Timbre timbre_for_class(size_t class_index) {
  switch (class_index % 3) {
    case 0: return Timbre::kToneComplex;
    case 1: return Timbre::kNoiseBurst;
    default: return Timbre::kAmNoise;
  }
}

// One-pole lowpass, cutoff as a fraction of the sample rate.
struct OnePole {
  double a;
  double state = 0.0;
  explicit OnePole(double cutoff_hz, int fs)
      : a(std::exp(-2.0 * M_PI * cutoff_hz / fs)) {}
  double step(double x) { return state = a * state + (1.0 - a) * x; }
};

struct Bandpass {
  double b0, b2, a1, a2;
  double z1 = 0.0, z2 = 0.0;
  Bandpass(double center_hz, double q, int fs) {
    const double w0 = 2.0 * M_PI * center_hz / fs;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    b0 = alpha / a0;
    b2 = -alpha / a0;
    a1 = -2.0 * std::cos(w0) / a0;
    a2 = (1.0 - alpha) / a0;
  }
  double step(double x) {
    const double y = b0 * x + z1;
    z1 = -a1 * y + z2;
    z2 = b2 * x - a2 * y;
    return y;
  }
};

// Sharp attack, flat body, release tail to zero inside the event span.
double envelope(double t, double duration, double attack, double release) {
  release = std::min(release, 0.5 * duration);
  attack = std::min(attack, 0.25 * duration);
  if (t < attack) return t / attack;
  if (t > duration - release) return std::max(0.0, (duration - t) / release);
  return 1.0;
}

std::vector<double> render_event(Timbre timbre, int n_samples, int fs,
                                 Rng* rng) {
  // The three timbres occupy separate spectral regions: harmonic stack in
  // the mids, bright noise up high, modulated noise down low.
  std::vector<double> out(n_samples, 0.0);
  switch (timbre) {
    case Timbre::kToneComplex: {
      const double f0 = rng->uniform(800.0, 1500.0);
      double phases[3];
      for (double& p : phases) p = rng->uniform(0.0, 2.0 * M_PI);
      for (int i = 0; i < n_samples; ++i) {
        const double t = static_cast<double>(i) / fs;
        double v = 0.0;
        for (int k = 1; k <= 3; ++k)
          v += std::sin(2.0 * M_PI * k * f0 * t + phases[k - 1]) / k;
        out[i] = v;
      }
      break;
    }
    case Timbre::kNoiseBurst: {
      Bandpass band(rng->uniform(3500.0, 5500.0), 1.2, fs);
      for (int i = 0; i < n_samples; ++i) band.step(rng->normal());
      for (int i = 0; i < n_samples; ++i) out[i] = band.step(rng->normal());
      break;
    }
    case Timbre::kAmNoise: {
      OnePole lowpass(rng->uniform(350.0, 600.0), fs);
      const double mod_hz = rng->uniform(30.0, 50.0);
      const double depth = 0.5;
      for (int i = 0; i < n_samples; ++i) {
        const double t = static_cast<double>(i) / fs;
        const double mod =
            (1.0 + depth * std::sin(2.0 * M_PI * mod_hz * t)) / (1.0 + depth);
        out[i] = lowpass.step(rng->normal()) * mod;
      }
      break;
    }
  }
  return out;
}

void scale_to_rms(std::vector<double>* signal, double target_rms) {
  double power = 0.0;
  for (double v : *signal) power += v * v;
  power /= static_cast<double>(signal->size());
  if (power <= 0.0) return;
  const double gain = target_rms / std::sqrt(power);
  for (double& v : *signal) v *= gain;
}

// Paul Kellet's pink-noise approximation.
struct PinkNoise {
  double b0 = 0, b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0;
  double step(double white) {
    b0 = 0.99886 * b0 + white * 0.0555179;
    b1 = 0.99332 * b1 + white * 0.0750759;
    b2 = 0.96900 * b2 + white * 0.1538520;
    b3 = 0.86650 * b3 + white * 0.3104856;
    b4 = 0.55000 * b4 + white * 0.5329522;
    b5 = -0.7616 * b5 - white * 0.0168980;
    const double pink = b0 + b1 + b2 + b3 + b4 + b5 + b6 + white * 0.5362;
    b6 = white * 0.115926;
    return pink * 0.11;
  }
};

}  // namespace

void SynthSpec::validate() const {
  auto fail = [](const std::string& msg) { throw DataError("synth: " + msg); };
  if (n_clips < 1) fail("n_clips must be >= 1");
  if (events_per_clip < 0) fail("events_per_clip must be >= 0");
  if (classes.empty()) fail("at least one class required");
  for (const std::string& c : classes)
    if (c.empty()) fail("empty class name");
  if (!(min_duration_s > 0.0) || max_duration_s < min_duration_s)
    fail("bad duration range");
  if (min_gap_s < 0.0 || max_gap_s < min_gap_s) fail("bad gap range");
  if (lead_s < 0.0 || tail_s < 0.0) fail("bad padding");
  if (!(event_rms > 0.0)) fail("event_rms must be > 0");
  if (sample_rate < 8000) fail("sample_rate too low");
}

Manifest synthesize_scenes(const SynthSpec& spec, const std::string& out_dir) {
  spec.validate();
  std::filesystem::create_directories(out_dir);

  Rng rng(spec.seed);
  Manifest manifest;
  const int fs = spec.sample_rate;

  for (int clip_idx = 0; clip_idx < spec.n_clips; ++clip_idx) {
    char name[32];
    std::snprintf(name, sizeof(name), "clip_%04d.wav", clip_idx);

    ClipEntry clip;
    clip.filename = name;

    // Lay out events left to right with random gaps.
    double cursor = spec.lead_s;
    struct PlacedEvent {
      double onset, duration;
      size_t class_index;
    };
    std::vector<PlacedEvent> placed;
    for (int e = 0; e < spec.events_per_clip; ++e) {
      if (e > 0) cursor += rng.uniform(spec.min_gap_s, spec.max_gap_s);
      const double duration =
          rng.uniform(spec.min_duration_s, spec.max_duration_s);
      const size_t class_index = static_cast<size_t>(
          rng.uniform_int(0, static_cast<int>(spec.classes.size()) - 1));
      placed.push_back({cursor, duration, class_index});
      cursor += duration;
    }
    const double clip_duration = cursor + spec.tail_s;
    const int n_samples = static_cast<int>(std::lround(clip_duration * fs));

    std::vector<double> mix(n_samples, 0.0);
    if (std::isfinite(spec.snr_db)) {
      PinkNoise pink;
      std::vector<double> background(n_samples);
      for (int i = 0; i < n_samples; ++i) background[i] = pink.step(rng.normal());
      scale_to_rms(&background,
                   spec.event_rms * std::pow(10.0, -spec.snr_db / 20.0));
      mix = background;
    }

    for (const PlacedEvent& ev : placed) {
      const int start = static_cast<int>(std::lround(ev.onset * fs));
      const int len = static_cast<int>(std::lround(ev.duration * fs));
      std::vector<double> signal = render_event(
          timbre_for_class(ev.class_index), len, fs, &rng);
      scale_to_rms(&signal, spec.event_rms);
      for (int i = 0; i < len && start + i < n_samples; ++i) {
        const double t = static_cast<double>(i) / fs;
        mix[start + i] +=
            signal[i] * envelope(t, ev.duration, spec.attack_s, spec.release_s);
      }

      LabeledEvent truth;
      truth.onset_s = ev.onset;
      truth.offset_s = ev.onset + ev.duration;
      truth.class_name = spec.classes[ev.class_index];
      truth.score = 1.0;
      clip.strong_events.push_back(truth);
      clip.weak_labels.insert(truth.class_name);
    }

    for (double& v : mix) v = std::clamp(v, -1.0, 1.0);

    Waveform w;
    w.sample_rate = fs;
    w.samples = std::move(mix);
    write_wav_pcm16(out_dir + "/" + name, w);

    clip.duration_s = clip_duration;
    manifest.clips.push_back(std::move(clip));
  }

  // Weak and strong TSVs consistent with the rendered audio.
  {
    std::ofstream weak(out_dir + "/weak.tsv");
    if (!weak) throw DataError("cannot write weak.tsv in " + out_dir);
    for (const ClipEntry& clip : manifest.clips) {
      weak << clip.filename << "\t";
      bool first = true;
      for (const std::string& label : clip.weak_labels) {
        weak << (first ? "" : ",") << label;
        first = false;
      }
      weak << "\n";
    }
  }
  {
    std::ofstream strong(out_dir + "/strong.tsv");
    if (!strong) throw DataError("cannot write strong.tsv in " + out_dir);
    char buf[64];
    for (const ClipEntry& clip : manifest.clips) {
      for (const LabeledEvent& e : clip.strong_events) {
        std::snprintf(buf, sizeof(buf), "\t%.3f\t%.3f\t", e.onset_s, e.offset_s);
        strong << clip.filename << buf << e.class_name << "\n";
      }
    }
  }
  return manifest;
}

}  // namespace sed
