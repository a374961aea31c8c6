// src/evaluation.cc

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

#include "sed/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include "sed/errors.h"

namespace sed {

namespace {

bool eligible(const LabeledEvent& r, const LabeledEvent& p,
              const MatchConfig& cfg) {
  if (cfg.require_onset &&
      std::abs(p.onset_s - r.onset_s) > cfg.onset_collar_s)
    return false;
  if (cfg.require_offset) {
    const double collar = std::max(cfg.offset_collar_s,
                                   cfg.offset_relative * (r.offset_s - r.onset_s));
    if (std::abs(p.offset_s - r.offset_s) > collar) return false;
  }
  if (cfg.require_label && p.class_name != r.class_name) return false;
  return true;
}

void require_sorted(const EventList& list) {
  for (size_t i = 1; i < list.events.size(); ++i)
    if (list.events[i].onset_s < list.events[i - 1].onset_s)
      throw DataError("match_events: unsorted event list: " + list.filename);
}

}  // namespace

MatchResult match_events(const EventList& ref, const EventList& pred,
                         const MatchConfig& cfg) {
  require_sorted(ref);
  require_sorted(pred);

  MatchResult result;
  std::vector<bool> pred_taken(pred.events.size(), false);

  for (size_t r = 0; r < ref.events.size(); ++r) {
    size_t best = pred.events.size();
    double best_onset_diff = std::numeric_limits<double>::infinity();
    double best_offset_diff = std::numeric_limits<double>::infinity();
    for (size_t p = 0; p < pred.events.size(); ++p) {
      if (pred_taken[p]) continue;
      if (!eligible(ref.events[r], pred.events[p], cfg)) continue;
      const double onset_diff =
          std::abs(pred.events[p].onset_s - ref.events[r].onset_s);
      const double offset_diff =
          std::abs(pred.events[p].offset_s - ref.events[r].offset_s);
      if (onset_diff < best_onset_diff ||
          (onset_diff == best_onset_diff && offset_diff < best_offset_diff)) {
        best = p;
        best_onset_diff = onset_diff;
        best_offset_diff = offset_diff;
      }
    }
    if (best < pred.events.size()) {
      pred_taken[best] = true;
      result.pairs.emplace_back(r, best);
    } else {
      result.unmatched_ref.push_back(r);
    }
  }
  for (size_t p = 0; p < pred.events.size(); ++p)
    if (!pred_taken[p]) result.unmatched_pred.push_back(p);
  return result;
}

EvalReport score(const std::vector<EventList>& refs,
                 const std::vector<EventList>& preds, const MatchConfig& cfg) {
  std::map<std::string, const EventList*> ref_by_file, pred_by_file;
  for (const EventList& l : refs) ref_by_file[l.filename] = &l;
  for (const EventList& l : preds) pred_by_file[l.filename] = &l;

  std::set<std::string> files;
  for (const auto& [name, l] : ref_by_file) files.insert(name);
  for (const auto& [name, l] : pred_by_file) files.insert(name);

  EvalReport report;
  const EventList empty;

  for (const std::string& file : files) {
    const EventList& ref =
        ref_by_file.count(file) ? *ref_by_file.at(file) : empty;
    const EventList& pred =
        pred_by_file.count(file) ? *pred_by_file.at(file) : empty;

    const MatchResult match = match_events(ref, pred, cfg);

    for (const auto& [r, p] : match.pairs)
      ++report.per_class[ref.events[r].class_name].tp;
    for (size_t r : match.unmatched_ref)
      ++report.per_class[ref.events[r].class_name].fn;
    for (size_t p : match.unmatched_pred)
      ++report.per_class[pred.events[p].class_name].fp;

    // Clip-level error decomposition: leftover FP/FN pair up as
    // substitutions, the remainder are deletions/insertions.
    const long clip_fp = static_cast<long>(match.unmatched_pred.size());
    const long clip_fn = static_cast<long>(match.unmatched_ref.size());
    const long subs = std::min(clip_fp, clip_fn);
    report.substitutions += subs;
    report.deletions += clip_fn - subs;
    report.insertions += clip_fp - subs;

    report.n_ref += static_cast<long>(ref.events.size());
    report.tp += static_cast<long>(match.pairs.size());
    report.fp += clip_fp;
    report.fn += clip_fn;
  }

  const double micro_denom = 2.0 * report.tp + report.fp + report.fn;
  report.micro_f = micro_denom > 0.0 ? 2.0 * report.tp / micro_denom : 0.0;

  double macro_sum = 0.0;
  long macro_classes = 0;
  for (const auto& [name, stats] : report.per_class) {
    if (stats.tp + stats.fn > 0) {  // class present in the references
      macro_sum += stats.f_score();
      ++macro_classes;
    }
  }
  report.macro_f = macro_classes > 0 ? macro_sum / macro_classes : 0.0;

  const long errors =
      report.substitutions + report.deletions + report.insertions;
  if (report.n_ref > 0)
    report.error_rate = static_cast<double>(errors) / report.n_ref;
  else
    report.error_rate =
        errors > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  return report;
}

EvalMode parse_eval_mode(const std::string& name) {
  if (name == "onset_only") return EvalMode::kOnsetOnly;
  if (name == "offset_only") return EvalMode::kOffsetOnly;
  if (name == "onset_offset") return EvalMode::kOnsetOffset;
  if (name == "full") return EvalMode::kFull;
  throw DataError("unknown evaluation mode: " + name);
}

std::string eval_mode_name(EvalMode mode) {
  switch (mode) {
    case EvalMode::kOnsetOnly: return "onset_only";
    case EvalMode::kOffsetOnly: return "offset_only";
    case EvalMode::kOnsetOffset: return "onset_offset";
    case EvalMode::kFull: return "full";
  }
  return "?";
}

MatchConfig mode_config(EvalMode mode, MatchConfig base) {
  switch (mode) {
    case EvalMode::kOnsetOnly:
      base.require_onset = true;
      base.require_offset = false;
      base.require_label = false;
      break;
    case EvalMode::kOffsetOnly:
      base.require_onset = false;
      base.require_offset = true;
      base.require_label = false;
      break;
    case EvalMode::kOnsetOffset:
      base.require_onset = true;
      base.require_offset = true;
      base.require_label = false;
      break;
    case EvalMode::kFull:
      base.require_onset = true;
      base.require_offset = true;
      base.require_label = true;
      break;
  }
  return base;
}

std::vector<std::pair<EvalMode, double>> subsystem_report(
    const std::vector<EventList>& refs, const std::vector<EventList>& preds,
    const std::vector<EvalMode>& modes, const MatchConfig& base) {
  std::vector<std::pair<EvalMode, double>> rows;
  rows.reserve(modes.size());
  for (EvalMode mode : modes) {
    const EvalReport report = score(refs, preds, mode_config(mode, base));
    // Pooled over events: the label-free modes have no class partition,
    // so their macro average runs over a single stripped class and equals
    // the pooled score. Using the pooled figure for every mode keeps the
    // rows comparable and non-increasing as requirements are added.
    rows.emplace_back(mode, report.micro_f);
  }
  return rows;
}

std::string format_report(const EvalReport& report) {
  std::ostringstream out;
  char buf[160];

  out << "event-based results\n";
  std::snprintf(buf, sizeof(buf), "  %-24s %6s %6s %6s %8s\n", "class", "tp",
                "fp", "fn", "f");
  out << buf;
  for (const auto& [name, stats] : report.per_class) {
    std::snprintf(buf, sizeof(buf), "  %-24s %6ld %6ld %6ld %8.4f\n",
                  name.c_str(), stats.tp, stats.fp, stats.fn, stats.f_score());
    out << buf;
  }
  std::snprintf(buf, sizeof(buf),
                "  micro F %.4f | macro F %.4f | ER %.4f (S=%ld D=%ld I=%ld "
                "N=%ld)\n",
                report.micro_f, report.macro_f, report.error_rate,
                report.substitutions, report.deletions, report.insertions,
                report.n_ref);
  out << buf;

  out << "micro_f=" << report.micro_f << "\n";
  out << "macro_f=" << report.macro_f << "\n";
  out << "er=" << report.error_rate << "\n";
  out << "s=" << report.substitutions << "\n";
  out << "d=" << report.deletions << "\n";
  out << "i=" << report.insertions << "\n";
  out << "n=" << report.n_ref << "\n";
  for (const auto& [name, stats] : report.per_class) {
    out << "class=" << name << " tp=" << stats.tp << " fp=" << stats.fp
        << " fn=" << stats.fn << " f=" << stats.f_score() << "\n";
  }
  return out.str();
}

}  // namespace sed
