// src/manifest.cc

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

#include "sed/manifest.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "sed/errors.h"
#include "sed/io.h"

namespace sed {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(field);
  return fields;
}

}  // namespace

const ClipEntry* Manifest::find(const std::string& filename) const {
  for (const ClipEntry& c : clips)
    if (c.filename == filename) return &c;
  return nullptr;
}

std::vector<std::string> Manifest::class_vocabulary() const {
  std::set<std::string> names;
  for (const ClipEntry& c : clips) {
    names.insert(c.weak_labels.begin(), c.weak_labels.end());
    for (const LabeledEvent& e : c.strong_events) names.insert(e.class_name);
  }
  return {names.begin(), names.end()};
}

Manifest parse_manifest(const std::string& weak_tsv_path,
                        const std::string& strong_tsv_path) {
  Manifest manifest;
  std::map<std::string, size_t> index;

  auto entry_for = [&](const std::string& filename) -> ClipEntry& {
    auto [it, inserted] = index.try_emplace(filename, manifest.clips.size());
    if (inserted) {
      manifest.clips.emplace_back();
      manifest.clips.back().filename = filename;
    }
    return manifest.clips[it->second];
  };

  {
    std::ifstream file(weak_tsv_path);
    if (!file) throw DataError("cannot open: " + weak_tsv_path);
    std::string line;
    size_t line_no = 0;
    while (std::getline(file, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const std::vector<std::string> fields = split(line, '\t');
      if (line_no == 1 && !fields.empty() && fields[0] == "filename") continue;
      if (fields.empty() || fields.size() > 2 || fields[0].empty())
        throw DataError(weak_tsv_path + ":" + std::to_string(line_no) +
                        ": expected filename<TAB>labels");

      std::set<std::string> labels;
      if (fields.size() == 2 && !fields[1].empty()) {
        for (const std::string& label : split(fields[1], ',')) {
          if (label.empty())
            throw DataError(weak_tsv_path + ":" + std::to_string(line_no) +
                            ": empty label name");
          labels.insert(label);
        }
      }

      if (index.count(fields[0])) {
        ClipEntry& existing = entry_for(fields[0]);
        if (existing.weak_labels != labels)
          throw DataError(weak_tsv_path + ":" + std::to_string(line_no) +
                          ": duplicate filename with conflicting labels: " +
                          fields[0]);
      } else {
        entry_for(fields[0]).weak_labels = std::move(labels);
      }
    }
  }

  if (!strong_tsv_path.empty()) {
    // Reuse the evaluation-format reader; it validates times and reports
    // line numbers.
    for (EventList& list : read_event_tsv(strong_tsv_path, /*labeled=*/true)) {
      ClipEntry& clip = entry_for(list.filename);
      clip.strong_events = std::move(list.events);
    }
  }
  return manifest;
}

}  // namespace sed
