// src/wav.cc

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

#include "sed/wav.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "sed/errors.h"

static_assert(std::endian::native == std::endian::little,
              "WAV and model readers assume a little-endian host");

namespace sed {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

struct ByteReader {
  const uint8_t* data;
  size_t size;
  size_t pos = 0;
  const std::string& path;

  void require(size_t n) const {
    if (pos + n > size)
      throw DataError("unreadable WAV file (truncated): " + path);
  }
  uint16_t u16() {
    require(2);
    uint16_t v;
    std::memcpy(&v, data + pos, 2);
    pos += 2;
    return v;
  }
  uint32_t u32() {
    require(4);
    uint32_t v;
    std::memcpy(&v, data + pos, 4);
    pos += 4;
    return v;
  }
  void tag(char out[4]) {
    require(4);
    std::memcpy(out, data + pos, 4);
    pos += 4;
  }
  void skip(size_t n) {
    require(n);
    pos += n;
  }
};

}  // namespace

Waveform read_wav(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw DataError("unreadable file: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(file)),
                             std::istreambuf_iterator<char>());

  ByteReader r{bytes.data(), bytes.size(), 0, path};
  char tag[4];
  r.tag(tag);
  if (std::memcmp(tag, "RIFF", 4) != 0)
    throw DataError("not a RIFF file: " + path);
  r.u32();  // overall size, not trusted
  r.tag(tag);
  if (std::memcmp(tag, "WAVE", 4) != 0)
    throw DataError("not a WAVE file: " + path);

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  bool have_fmt = false;
  size_t data_pos = 0, data_size = 0;

  // Walk chunks; only fmt and data matter, the rest are skipped.
  while (r.pos + 8 <= r.size) {
    r.tag(tag);
    const uint32_t chunk_size = r.u32();
    const size_t body = r.pos;
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      format = r.u16();
      channels = r.u16();
      sample_rate = r.u32();
      r.u32();  // byte rate
      r.u16();  // block align
      bits = r.u16();
      if (format == kFormatExtensible && chunk_size >= 26) {
        const uint16_t cb = r.u16();
        if (cb >= 22) {
          r.u16();  // valid bits
          r.u32();  // channel mask
          format = r.u16();  // first two bytes of the subformat GUID
        }
      }
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      data_pos = r.pos;
      data_size = chunk_size;
    }
    // chunks are word-aligned
    const size_t advance = chunk_size + (chunk_size & 1);
    if (body + advance > r.size) {
      if (data_pos == body && data_size > r.size - body)
        data_size = r.size - body;  // tolerate a short final data chunk
      else if (data_pos != body)
        throw DataError("unreadable WAV file (truncated chunk): " + path);
      break;
    }
    r.pos = body + advance;
  }

  if (!have_fmt || data_pos == 0)
    throw DataError("missing fmt or data chunk: " + path);
  if (channels == 0 || sample_rate == 0)
    throw DataError("invalid WAV header: " + path);

  const bool pcm16 = (format == kFormatPcm && bits == 16);
  const bool float32 = (format == kFormatFloat && bits == 32);
  if (!pcm16 && !float32)
    throw DataError("unsupported WAV encoding (need 16-bit PCM or 32-bit float): " +
                    path);

  const size_t bytes_per_sample = bits / 8;
  const size_t frame_bytes = bytes_per_sample * channels;
  const size_t n_frames = data_size / frame_bytes;
  if (n_frames == 0) throw DataError("zero-length audio: " + path);

  Waveform w;
  w.sample_rate = static_cast<int>(sample_rate);
  w.samples.resize(n_frames);

  const uint8_t* p = bytes.data() + data_pos;
  for (size_t i = 0; i < n_frames; ++i) {
    double acc = 0.0;
    for (uint16_t c = 0; c < channels; ++c) {
      const uint8_t* sp = p + i * frame_bytes + c * bytes_per_sample;
      if (pcm16) {
        int16_t v;
        std::memcpy(&v, sp, 2);
        acc += static_cast<double>(v) / 32768.0;
      } else {
        float v;
        std::memcpy(&v, sp, 4);
        if (!std::isfinite(v))
          throw DataError("non-finite sample in " + path);
        acc += static_cast<double>(v);
      }
    }
    w.samples[i] = std::clamp(acc / channels, -1.0, 1.0);
  }
  return w;
}

void write_wav_pcm16(const std::string& path, const Waveform& w) {
  if (w.sample_rate <= 0) throw DataError("write_wav: invalid sample rate");
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot open for writing: " + path);

  const uint32_t n = static_cast<uint32_t>(w.samples.size());
  const uint32_t data_size = n * 2;
  const uint32_t sr = static_cast<uint32_t>(w.sample_rate);

  auto put_u16 = [&](uint16_t v) { file.write(reinterpret_cast<char*>(&v), 2); };
  auto put_u32 = [&](uint32_t v) { file.write(reinterpret_cast<char*>(&v), 4); };

  file.write("RIFF", 4);
  put_u32(36 + data_size);
  file.write("WAVE", 4);
  file.write("fmt ", 4);
  put_u32(16);
  put_u16(kFormatPcm);
  put_u16(1);  // mono
  put_u32(sr);
  put_u32(sr * 2);
  put_u16(2);
  put_u16(16);
  file.write("data", 4);
  put_u32(data_size);

  for (double s : w.samples) {
    const long v = std::lround(std::clamp(s, -1.0, 1.0) * 32767.0);
    const int16_t out = static_cast<int16_t>(std::clamp(v, -32768L, 32767L));
    file.write(reinterpret_cast<const char*>(&out), 2);
  }
  if (!file) throw DataError("write failed: " + path);
}

}  // namespace sed
