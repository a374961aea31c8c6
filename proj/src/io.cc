// src/io.cc

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

#include "sed/io.h"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "sed/errors.h"

namespace sed {

namespace {

constexpr uint32_t kModelVersion = 1;
constexpr uint8_t kKindRbm = 0;
constexpr uint8_t kKindCrbm = 1;
constexpr uint8_t kKindPca = 2;
constexpr uint8_t kKindClassifier = 3;

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, '\t')) fields.push_back(field);
  return fields;
}

double parse_time(const std::string& s, const std::string& path, size_t line_no) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(path + ":" + std::to_string(line_no) +
                    ": not a number: '" + s + "'");
  }
}

// -- binary helpers ----------------------------------------------------

struct BinWriter {
  std::ofstream file;
  explicit BinWriter(const std::string& path)
      : file(path, std::ios::binary) {
    if (!file) throw DataError("cannot open for writing: " + path);
  }
  void bytes(const void* p, size_t n) {
    file.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  }
  void u8(uint8_t v) { bytes(&v, 1); }
  void u32(uint32_t v) { bytes(&v, 4); }
  void f64(double v) { bytes(&v, 8); }
  void matrix(const Matrix& m) {
    for (Index r = 0; r < m.rows(); ++r)
      for (Index c = 0; c < m.cols(); ++c) f64(m(r, c));
  }
  void vector(const Vector& v) {
    for (Index i = 0; i < v.size(); ++i) f64(v(i));
  }
  void check(const std::string& path) {
    if (!file) throw DataError("write failed: " + path);
  }
};

struct BinReader {
  std::ifstream file;
  std::string path;
  explicit BinReader(const std::string& p) : file(p, std::ios::binary), path(p) {
    if (!file) throw DataError("cannot open model file: " + p);
  }
  void bytes(void* p, size_t n) {
    file.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!file) throw DataError("truncated model file: " + path);
  }
  uint8_t u8() {
    uint8_t v;
    bytes(&v, 1);
    return v;
  }
  uint32_t u32() {
    uint32_t v;
    bytes(&v, 4);
    return v;
  }
  double f64() {
    double v;
    bytes(&v, 8);
    return v;
  }
  Matrix matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols; ++c) m(r, c) = f64();
    return m;
  }
  Vector vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = f64();
    return v;
  }
};

void write_model_header(BinWriter& w, uint8_t kind, uint32_t visible,
                        uint32_t hidden, uint32_t context) {
  w.bytes("SEDM", 4);
  w.u32(kModelVersion);
  w.u8(kind);
  w.u32(visible);
  w.u32(hidden);
  w.u32(context);
}

struct ModelHeader {
  uint8_t kind;
  uint32_t visible, hidden, context;
};

ModelHeader read_model_header(BinReader& r, uint8_t expected_kind) {
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, "SEDM", 4) != 0)
    throw DataError("not a model file: " + r.path);
  const uint32_t version = r.u32();
  if (version != kModelVersion)
    throw DataError("unsupported model version " + std::to_string(version) +
                    ": " + r.path);
  ModelHeader h;
  h.kind = r.u8();
  h.visible = r.u32();
  h.hidden = r.u32();
  h.context = r.u32();
  if (h.kind != expected_kind)
    throw DataError("unexpected model kind in " + r.path);
  return h;
}

void write_scaler(BinWriter& w, const Scaler& s) {
  w.vector(s.mean);
  w.vector(s.std);
}

Scaler read_scaler(BinReader& r, Index dim) {
  Scaler s;
  s.mean = r.vector(dim);
  s.std = r.vector(dim);
  return s;
}

}  // namespace

// -- event TSV ----------------------------------------------------------

std::vector<EventList> read_event_tsv(const std::string& path, bool labeled) {
  std::ifstream file(path);
  if (!file) throw DataError("cannot open: " + path);

  std::map<std::string, EventList> by_file;
  std::vector<std::string> order;

  std::string line;
  size_t line_no = 0;
  const size_t want = labeled ? 4 : 3;
  while (std::getline(file, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_tabs(line);
    if (line_no == 1 && !fields.empty() && fields[0] == "filename")
      continue;  // optional header
    if (fields.size() != want)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(want) + " tab-separated fields, got " +
                      std::to_string(fields.size()));
    if (fields[0].empty())
      throw DataError(path + ":" + std::to_string(line_no) + ": empty filename");

    LabeledEvent event;
    event.onset_s = parse_time(fields[1], path, line_no);
    event.offset_s = parse_time(fields[2], path, line_no);
    if (labeled) {
      if (fields[3].empty())
        throw DataError(path + ":" + std::to_string(line_no) + ": empty class");
      event.class_name = fields[3];
    }
    if (event.onset_s < 0.0)
      throw DataError(path + ":" + std::to_string(line_no) + ": negative onset");
    if (event.offset_s <= event.onset_s)
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": offset must be greater than onset");

    auto [it, inserted] = by_file.try_emplace(fields[0]);
    if (inserted) {
      it->second.filename = fields[0];
      order.push_back(fields[0]);
    }
    it->second.events.push_back(event);
  }

  std::vector<EventList> lists;
  lists.reserve(order.size());
  for (const std::string& name : order) {
    EventList& l = by_file[name];
    std::sort(l.events.begin(), l.events.end(),
              [](const LabeledEvent& a, const LabeledEvent& b) {
                if (a.onset_s != b.onset_s) return a.onset_s < b.onset_s;
                return a.offset_s < b.offset_s;
              });
    lists.push_back(std::move(l));
  }
  return lists;
}

void write_boundary_tsv(
    const std::string& path,
    const std::vector<std::pair<std::string, std::vector<EventBoundary>>>& rows) {
  std::ofstream file(path);
  if (!file) throw DataError("cannot open for writing: " + path);
  char buf[64];
  for (const auto& [name, events] : rows) {
    for (const EventBoundary& e : events) {
      std::snprintf(buf, sizeof(buf), "\t%.3f\t%.3f\n", e.onset_s, e.offset_s);
      file << name << buf;
    }
  }
  if (!file) throw DataError("write failed: " + path);
}

void write_labeled_tsv(const std::string& path,
                       const std::vector<EventList>& lists) {
  std::ofstream file(path);
  if (!file) throw DataError("cannot open for writing: " + path);
  char buf[64];
  for (const EventList& l : lists) {
    for (const LabeledEvent& e : l.events) {
      std::snprintf(buf, sizeof(buf), "\t%.3f\t%.3f\t", e.onset_s, e.offset_s);
      file << l.filename << buf << e.class_name << "\n";
    }
  }
  if (!file) throw DataError("write failed: " + path);
}

// -- feature dump --------------------------------------------------------

void write_feature_dump(const std::string& path, const Spectrogram& s) {
  BinWriter w(path);
  w.bytes("SEDF", 4);
  w.u32(1);
  w.u32(static_cast<uint32_t>(s.n_frames()));
  w.u32(static_cast<uint32_t>(s.n_channels()));
  w.f64(s.frame_period_s);
  for (Index t = 0; t < s.n_frames(); ++t)
    for (Index c = 0; c < s.n_channels(); ++c) {
      const float v = static_cast<float>(s.values(t, c));
      w.bytes(&v, 4);
    }
  w.check(path);
}

Spectrogram read_feature_dump(const std::string& path) {
  BinReader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, "SEDF", 4) != 0)
    throw DataError("not a feature dump: " + path);
  const uint32_t version = r.u32();
  if (version != 1)
    throw DataError("unsupported feature dump version: " + path);
  const uint32_t n_frames = r.u32();
  const uint32_t n_channels = r.u32();
  Spectrogram s;
  s.frame_period_s = r.f64();
  s.values.resize(n_frames, n_channels);
  for (uint32_t t = 0; t < n_frames; ++t)
    for (uint32_t c = 0; c < n_channels; ++c) {
      float v;
      r.bytes(&v, 4);
      s.values(t, c) = v;
    }
  return s;
}

// -- models ---------------------------------------------------------------

void save_rbm(const std::string& path, const RbmModel& model) {
  const RbmParams& p = model.params;
  BinWriter w(path);
  write_model_header(w, kKindRbm, static_cast<uint32_t>(p.visible_dim()),
                     static_cast<uint32_t>(p.hidden_dim()), 0);
  w.matrix(p.weights);
  w.vector(p.hidden_bias);
  w.vector(p.visible_bias);
  w.vector(Vector::Ones(p.visible_dim()));  // sigma, fixed at 1
  write_scaler(w, model.input_scaler);
  w.check(path);
}

RbmModel load_rbm(const std::string& path) {
  BinReader r(path);
  const ModelHeader h = read_model_header(r, kKindRbm);
  RbmModel model;
  model.params.weights = r.matrix(h.visible, h.hidden);
  model.params.hidden_bias = r.vector(h.hidden);
  model.params.visible_bias = r.vector(h.visible);
  r.vector(h.visible);  // sigma
  model.input_scaler = read_scaler(r, h.visible);
  return model;
}

void save_crbm(const std::string& path, const CrbmModel& model) {
  const CrbmParams& p = model.params;
  BinWriter w(path);
  write_model_header(w, kKindCrbm, static_cast<uint32_t>(p.visible_dim()),
                     static_cast<uint32_t>(p.hidden_dim()),
                     static_cast<uint32_t>(p.context_frames));
  w.matrix(p.weights);
  w.matrix(p.autoreg_hidden);
  w.vector(p.hidden_bias);
  w.vector(p.visible_bias);
  w.matrix(p.autoreg_visible);
  write_scaler(w, model.input_scaler);
  w.check(path);
}

CrbmModel load_crbm(const std::string& path) {
  BinReader r(path);
  const ModelHeader h = read_model_header(r, kKindCrbm);
  if (h.context == 0) throw DataError("cRBM with zero context: " + path);
  const Index ctx_dim = static_cast<Index>(h.visible) * h.context;
  CrbmModel model;
  model.params.context_frames = static_cast<int>(h.context);
  model.params.weights = r.matrix(h.visible, h.hidden);
  model.params.autoreg_hidden = r.matrix(ctx_dim, h.hidden);
  model.params.hidden_bias = r.vector(h.hidden);
  model.params.visible_bias = r.vector(h.visible);
  model.params.autoreg_visible = r.matrix(ctx_dim, h.visible);
  model.input_scaler = read_scaler(r, h.visible);
  return model;
}

void save_pca(const std::string& path, const PcaModel& model) {
  BinWriter w(path);
  write_model_header(w, kKindPca, static_cast<uint32_t>(model.input_dim()),
                     static_cast<uint32_t>(model.n_components()), 0);
  w.vector(model.mean);
  w.matrix(model.components);
  w.vector(model.explained_variance);
  w.check(path);
}

PcaModel load_pca(const std::string& path) {
  BinReader r(path);
  const ModelHeader h = read_model_header(r, kKindPca);
  PcaModel model;
  model.mean = r.vector(h.visible);
  model.components = r.matrix(h.hidden, h.visible);
  model.explained_variance = r.vector(h.hidden);
  const double scale = std::max(1.0, model.explained_variance.size() > 0
                                         ? model.explained_variance(0)
                                         : 0.0);
  model.padded = model.explained_variance.size() > 0 &&
                 model.explained_variance(model.explained_variance.size() - 1) <=
                     1e-12 * scale;
  return model;
}

void save_classifier(const std::string& path, const LinearClassifier& model) {
  BinWriter w(path);
  write_model_header(w, kKindClassifier,
                     static_cast<uint32_t>(model.n_features()),
                     static_cast<uint32_t>(model.n_classes()),
                     static_cast<uint32_t>(model.context));
  w.matrix(model.weights);
  w.vector(model.bias);
  if (model.feature_scaler.dim() == model.n_features()) {
    write_scaler(w, model.feature_scaler);
  } else {
    write_scaler(w, Scaler{Vector::Zero(model.n_features()),
                           Vector::Ones(model.n_features())});
  }
  w.u32(static_cast<uint32_t>(model.mel_bands));
  w.u32(static_cast<uint32_t>(model.class_names.size()));
  for (const std::string& name : model.class_names) {
    w.u32(static_cast<uint32_t>(name.size()));
    w.bytes(name.data(), name.size());
  }
  w.check(path);
}

LinearClassifier load_classifier(const std::string& path) {
  BinReader r(path);
  const ModelHeader h = read_model_header(r, kKindClassifier);
  LinearClassifier model;
  model.context = static_cast<int>(h.context);
  model.weights = r.matrix(h.visible, h.hidden);
  model.bias = r.vector(h.hidden);
  model.feature_scaler = read_scaler(r, h.visible);
  model.mel_bands = static_cast<int>(r.u32());
  const uint32_t n_names = r.u32();
  if (n_names != h.hidden)
    throw DataError("classifier class-name count mismatch: " + path);
  model.class_names.resize(n_names);
  for (uint32_t i = 0; i < n_names; ++i) {
    const uint32_t len = r.u32();
    if (len > 4096) throw DataError("classifier class name too long: " + path);
    std::string name(len, '\0');
    r.bytes(name.data(), len);
    model.class_names[i] = std::move(name);
  }
  return model;
}

}  // namespace sed
