// src/config.cc

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

#include "sed/config.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "sed/errors.h"

namespace sed {

namespace {

std::string trim(const std::string& s) {
  size_t lo = s.find_first_not_of(" \t");
  size_t hi = s.find_last_not_of(" \t");
  if (lo == std::string::npos) return "";
  return s.substr(lo, hi - lo + 1);
}

int parse_int(const std::string& v, const std::string& key) {
  try {
    size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw DataError("config: bad integer for " + key + ": '" + v + "'");
  }
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw DataError("config: bad number for " + key + ": '" + v + "'");
  }
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw DataError("config: bad boolean for " + key + ": '" + v + "'");
}

uint64_t parse_u64(const std::string& v, const std::string& key) {
  try {
    size_t used = 0;
    const unsigned long long x = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return static_cast<uint64_t>(x);
  } catch (const std::exception&) {
    throw DataError("config: bad integer for " + key + ": '" + v + "'");
  }
}

std::vector<int> parse_int_list(const std::string& v, const std::string& key) {
  std::vector<int> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) out.push_back(parse_int(trim(item), key));
  if (out.empty()) throw DataError("config: empty list for " + key);
  return out;
}

}  // namespace

TrainConfig PipelineConfig::train_config() const {
  TrainConfig t;
  t.cd_steps = cd_steps;
  t.learning_rate = learning_rate;
  t.epochs = epochs;
  t.minibatch = minibatch;
  t.momentum = momentum;
  t.weight_decay = weight_decay;
  t.rng_seed = rng_seed;
  return t;
}

ClassifierConfig PipelineConfig::classifier_config() const {
  ClassifierConfig c;
  c.learning_rate = cls_learning_rate;
  c.epochs = cls_epochs;
  c.context = cls_context;
  c.rng_seed = rng_seed;
  return c;
}

void PipelineConfig::validate() const {
  auto fail = [](const std::string& msg) { throw DataError("config: " + msg); };
  if (stack_k < 1) fail("stack_k must be >= 1");
  if (rbm_hidden < 1) fail("rbm_hidden must be >= 1");
  if (crbm_hidden < 1) fail("crbm_hidden must be >= 1");
  if (contexts.empty()) fail("contexts must not be empty");
  for (size_t i = 0; i < contexts.size(); ++i) {
    if (contexts[i] < 1) fail("contexts must be positive");
    if (i > 0 && contexts[i] <= contexts[i - 1])
      fail("contexts must be strictly increasing");
  }
  if (pca_dims < 1) fail("pca_dims must be >= 1");
  if (pca_dims > crbm_hidden) fail("pca_dims must be <= crbm_hidden");
  if (cd_steps < 1) fail("cd_steps must be >= 1");
  if (!(learning_rate > 0.0)) fail("learning_rate must be > 0");
  if (momentum < 0.0 || momentum >= 1.0) fail("momentum must be in [0,1)");
  if (weight_decay < 0.0) fail("weight_decay must be >= 0");
  if (minibatch < 1) fail("minibatch must be >= 1");
  if (epochs < 0) fail("epochs must be >= 0");
  if (!(boundary.smoothing_constant > 0.0)) fail("smoothing_constant must be > 0");
  if (boundary.threshold_k < 0.0) fail("threshold_k must be >= 0");
  if (boundary.min_peak_separation_s < 0.0) fail("min_peak_separation_s must be >= 0");
  if (!(boundary.onset_fraction > 0.0 && boundary.onset_fraction < 1.0))
    fail("onset_fraction must be in (0,1)");
  if (boundary.offset_refractory_s < 0.0) fail("offset_refractory_s must be >= 0");
  if (!(boundary.offset_sustain_s > 0.0)) fail("offset_sustain_s must be > 0");
  if (!(boundary.offset_theta_abs > 0.0)) fail("offset_theta_abs must be > 0");
  if (boundary.offset_rel_factor < 0.0) fail("offset_rel_factor must be >= 0");
  if (!(boundary.offset_median_window_s > 0.0))
    fail("offset_median_window_s must be > 0");
  if (boundary.min_event_s < 0.0) fail("min_event_s must be >= 0");
  if (collars.onset_collar_s < 0.0) fail("onset_collar_s must be >= 0");
  if (collars.offset_collar_s < 0.0) fail("offset_collar_s must be >= 0");
  if (collars.offset_relative < 0.0) fail("offset_relative must be >= 0");
  if (!(cls_learning_rate > 0.0)) fail("cls_learning_rate must be > 0");
  if (cls_epochs < 0) fail("cls_epochs must be >= 0");
  if (cls_context < 0) fail("cls_context must be >= 0");
  if (jobs < 0) fail("jobs must be >= 0");
}

void apply_config_line(PipelineConfig* cfg, const std::string& key,
                       const std::string& value) {
  if (key == "stack_k") cfg->stack_k = parse_int(value, key);
  else if (key == "rbm_hidden") cfg->rbm_hidden = parse_int(value, key);
  else if (key == "crbm_hidden") cfg->crbm_hidden = parse_int(value, key);
  else if (key == "contexts") cfg->contexts = parse_int_list(value, key);
  else if (key == "pca_dims") cfg->pca_dims = parse_int(value, key);
  else if (key == "cd_steps") cfg->cd_steps = parse_int(value, key);
  else if (key == "learning_rate") cfg->learning_rate = parse_double(value, key);
  else if (key == "momentum") cfg->momentum = parse_double(value, key);
  else if (key == "weight_decay") cfg->weight_decay = parse_double(value, key);
  else if (key == "minibatch") cfg->minibatch = parse_int(value, key);
  else if (key == "epochs") cfg->epochs = parse_int(value, key);
  else if (key == "rng_seed") cfg->rng_seed = parse_u64(value, key);
  else if (key == "smoothing_constant")
    cfg->boundary.smoothing_constant = parse_double(value, key);
  else if (key == "threshold_k")
    cfg->boundary.threshold_k = parse_double(value, key);
  else if (key == "min_peak_separation_s")
    cfg->boundary.min_peak_separation_s = parse_double(value, key);
  else if (key == "onset_fraction")
    cfg->boundary.onset_fraction = parse_double(value, key);
  else if (key == "offset_refractory_s")
    cfg->boundary.offset_refractory_s = parse_double(value, key);
  else if (key == "offset_sustain_s")
    cfg->boundary.offset_sustain_s = parse_double(value, key);
  else if (key == "offset_theta_abs")
    cfg->boundary.offset_theta_abs = parse_double(value, key);
  else if (key == "offset_rel_factor")
    cfg->boundary.offset_rel_factor = parse_double(value, key);
  else if (key == "offset_median_window_s")
    cfg->boundary.offset_median_window_s = parse_double(value, key);
  else if (key == "min_event_s")
    cfg->boundary.min_event_s = parse_double(value, key);
  else if (key == "onset_collar_s")
    cfg->collars.onset_collar_s = parse_double(value, key);
  else if (key == "offset_collar_s")
    cfg->collars.offset_collar_s = parse_double(value, key);
  else if (key == "offset_relative")
    cfg->collars.offset_relative = parse_double(value, key);
  else if (key == "train_classifier")
    cfg->train_classifier = parse_bool(value, key);
  else if (key == "cls_learning_rate")
    cfg->cls_learning_rate = parse_double(value, key);
  else if (key == "cls_epochs") cfg->cls_epochs = parse_int(value, key);
  else if (key == "cls_context") cfg->cls_context = parse_int(value, key);
  else if (key == "jobs") cfg->jobs = parse_int(value, key);
  else throw DataError("config: unknown key: " + key);
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw DataError("cannot open config: " + path);
  PipelineConfig cfg;
  std::string line;
  size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      apply_config_line(&cfg, key, value);
    } catch (const DataError& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

std::string config_to_string(const PipelineConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "stack_k = " << cfg.stack_k << "\n";
  out << "rbm_hidden = " << cfg.rbm_hidden << "\n";
  out << "crbm_hidden = " << cfg.crbm_hidden << "\n";
  out << "contexts = ";
  for (size_t i = 0; i < cfg.contexts.size(); ++i)
    out << (i ? "," : "") << cfg.contexts[i];
  out << "\n";
  out << "pca_dims = " << cfg.pca_dims << "\n";
  out << "cd_steps = " << cfg.cd_steps << "\n";
  out << "learning_rate = " << cfg.learning_rate << "\n";
  out << "momentum = " << cfg.momentum << "\n";
  out << "weight_decay = " << cfg.weight_decay << "\n";
  out << "minibatch = " << cfg.minibatch << "\n";
  out << "epochs = " << cfg.epochs << "\n";
  out << "rng_seed = " << cfg.rng_seed << "\n";
  out << "smoothing_constant = " << cfg.boundary.smoothing_constant << "\n";
  out << "threshold_k = " << cfg.boundary.threshold_k << "\n";
  out << "min_peak_separation_s = " << cfg.boundary.min_peak_separation_s << "\n";
  out << "onset_fraction = " << cfg.boundary.onset_fraction << "\n";
  out << "offset_refractory_s = " << cfg.boundary.offset_refractory_s << "\n";
  out << "offset_sustain_s = " << cfg.boundary.offset_sustain_s << "\n";
  out << "offset_theta_abs = " << cfg.boundary.offset_theta_abs << "\n";
  out << "offset_rel_factor = " << cfg.boundary.offset_rel_factor << "\n";
  out << "offset_median_window_s = " << cfg.boundary.offset_median_window_s
      << "\n";
  out << "min_event_s = " << cfg.boundary.min_event_s << "\n";
  out << "onset_collar_s = " << cfg.collars.onset_collar_s << "\n";
  out << "offset_collar_s = " << cfg.collars.offset_collar_s << "\n";
  out << "offset_relative = " << cfg.collars.offset_relative << "\n";
  out << "train_classifier = " << (cfg.train_classifier ? "true" : "false")
      << "\n";
  out << "cls_learning_rate = " << cfg.cls_learning_rate << "\n";
  out << "cls_epochs = " << cfg.cls_epochs << "\n";
  out << "cls_context = " << cfg.cls_context << "\n";
  out << "jobs = " << cfg.jobs << "\n";
  return out.str();
}

void save_config(const std::string& path, const PipelineConfig& cfg) {
  std::ofstream file(path);
  if (!file) throw DataError("cannot open for writing: " + path);
  file << config_to_string(cfg);
  if (!file) throw DataError("write failed: " + path);
}

}  // namespace sed
