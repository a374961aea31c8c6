// tools/sed_main.cc

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

// Batch sound-event-detection tool:
//   sed train     train the model bundle from a manifest of WAV clips
//   sed detect    detect event boundaries with a trained bundle
//   sed label     assign class labels to detected boundaries
//   sed evaluate  event-based scoring of predictions against references
//   sed synth     generate synthetic scenes with ground truth
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sed/config.h"
#include "sed/errors.h"
#include "sed/evaluation.h"
#include "sed/io.h"
#include "sed/manifest.h"
#include "sed/pipeline.h"
#include "sed/synth.h"

namespace {

struct CommonOpts {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<int> jobs;
};

sed::PipelineConfig resolve_config(const CommonOpts& opts) {
  sed::PipelineConfig cfg;
  if (!opts.config_path.empty()) cfg = sed::load_config(opts.config_path);
  if (opts.seed) cfg.rng_seed = *opts.seed;
  if (opts.jobs) cfg.jobs = *opts.jobs;
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* cmd, CommonOpts* opts) {
  cmd->add_option("--config", opts->config_path,
                  "key = value configuration file");
  cmd->add_option("--seed", opts->seed, "override rng_seed");
  cmd->add_option("--jobs", opts->jobs, "worker threads (0 = auto)");
}

int run(int argc, char** argv) {
  CLI::App app{"hybrid sound event detection pipeline"};
  app.require_subcommand(1);

  // train ---------------------------------------------------------------
  CommonOpts train_opts;
  std::string train_weak, train_strong, train_audio_dir, train_out;
  CLI::App* train = app.add_subcommand("train", "train the model bundle");
  train->add_option("--weak", train_weak, "weak-label TSV")->required();
  train->add_option("--strong", train_strong, "strong-label TSV (optional)");
  train->add_option("--audio-dir", train_audio_dir, "directory with the WAVs");
  train->add_option("--out", train_out, "output bundle directory")->required();
  add_common(train, &train_opts);

  // detect --------------------------------------------------------------
  CommonOpts detect_opts;
  std::string detect_weak, detect_audio_dir, detect_bundle, detect_out;
  std::string detect_dump;
  CLI::App* detect = app.add_subcommand("detect", "detect event boundaries");
  detect->add_option("--weak", detect_weak, "manifest TSV listing the clips")
      ->required();
  detect->add_option("--audio-dir", detect_audio_dir, "directory with the WAVs");
  detect->add_option("--bundle", detect_bundle, "trained bundle directory")
      ->required();
  detect->add_option("--out", detect_out, "output boundary TSV")->required();
  detect->add_option("--dump-features", detect_dump,
                     "also write per-clip SEDF feature dumps here");
  add_common(detect, &detect_opts);

  // label ---------------------------------------------------------------
  CommonOpts label_opts;
  std::string label_boundaries, label_bundle, label_audio_dir, label_posteriors,
      label_out;
  CLI::App* label = app.add_subcommand("label", "label detected boundaries");
  label->add_option("--boundaries", label_boundaries, "boundary TSV")
      ->required();
  label->add_option("--bundle", label_bundle, "trained bundle directory")
      ->required();
  label->add_option("--audio-dir", label_audio_dir,
                    "WAV directory (classifier mode)");
  label->add_option("--posterior-dir", label_posteriors,
                    "per-clip posterior CSVs (overrides the classifier)");
  label->add_option("--out", label_out, "output labeled TSV")->required();
  add_common(label, &label_opts);

  // evaluate ------------------------------------------------------------
  std::string eval_ref, eval_pred, eval_mode = "full", eval_out;
  CLI::App* evaluate = app.add_subcommand("evaluate", "event-based scoring");
  evaluate->add_option("--ref", eval_ref, "reference TSV")->required();
  evaluate->add_option("--pred", eval_pred, "prediction TSV")->required();
  evaluate->add_option("--mode", eval_mode,
                       "full|onset_only|offset_only|onset_offset|all");
  evaluate->add_option("--out", eval_out, "also write the report here");

  // synth ---------------------------------------------------------------
  sed::SynthSpec spec;
  std::string synth_out, synth_classes = "tone,noise,am";
  CLI::App* synth = app.add_subcommand("synth", "generate synthetic scenes");
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--clips", spec.n_clips, "number of clips");
  synth->add_option("--events", spec.events_per_clip, "events per clip");
  synth->add_option("--classes", synth_classes, "comma-separated class names");
  synth->add_option("--snr", spec.snr_db, "event-to-background SNR in dB");
  synth->add_option("--duration-min", spec.min_duration_s, "event duration lo");
  synth->add_option("--duration-max", spec.max_duration_s, "event duration hi");
  synth->add_option("--gap-min", spec.min_gap_s, "gap between events lo");
  synth->add_option("--gap-max", spec.max_gap_s, "gap between events hi");
  synth->add_option("--seed", spec.seed, "rng seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? 0 : 1;
  }

  if (train->parsed()) {
    const sed::PipelineConfig cfg = resolve_config(train_opts);
    const sed::Manifest manifest = sed::parse_manifest(train_weak, train_strong);
    const sed::ModelBundle bundle =
        sed::train_models(manifest, train_audio_dir, cfg, std::cerr);
    sed::save_bundle(train_out, bundle);
    std::cerr << "train: bundle written to " << train_out << "\n";
    return 0;
  }

  if (detect->parsed()) {
    sed::ModelBundle bundle = sed::load_bundle(detect_bundle);
    if (detect_opts.jobs) bundle.config.jobs = *detect_opts.jobs;
    const sed::Manifest manifest = sed::parse_manifest(detect_weak);
    const auto boundaries = sed::detect_all(manifest, detect_audio_dir, bundle,
                                            std::cerr, detect_dump);
    sed::write_boundary_tsv(detect_out, boundaries);
    return 0;
  }

  if (label->parsed()) {
    sed::ModelBundle bundle = sed::load_bundle(label_bundle);
    if (label_opts.jobs) bundle.config.jobs = *label_opts.jobs;
    std::vector<std::pair<std::string, std::vector<sed::EventBoundary>>>
        boundaries;
    for (const sed::EventList& list :
         sed::read_event_tsv(label_boundaries, /*labeled=*/false)) {
      std::vector<sed::EventBoundary> events;
      for (const sed::LabeledEvent& e : list.events)
        events.push_back({e.onset_s, e.offset_s});
      boundaries.emplace_back(list.filename, std::move(events));
    }
    const std::vector<sed::EventList> labeled = sed::label_events(
        boundaries, bundle, label_audio_dir, label_posteriors, std::cerr);
    sed::write_labeled_tsv(label_out, labeled);
    return 0;
  }

  if (evaluate->parsed()) {
    const std::vector<sed::EventList> refs =
        sed::read_event_tsv(eval_ref, /*labeled=*/true);
    const std::vector<sed::EventList> preds =
        sed::read_event_tsv(eval_pred, /*labeled=*/true);

    // Unknown prediction classes are reported, then simply count as FP.
    {
      std::set<std::string> ref_classes;
      for (const sed::EventList& l : refs)
        for (const sed::LabeledEvent& e : l.events)
          ref_classes.insert(e.class_name);
      std::set<std::string> warned;
      for (const sed::EventList& l : preds)
        for (const sed::LabeledEvent& e : l.events)
          if (!ref_classes.count(e.class_name) && warned.insert(e.class_name).second)
            std::cerr << "warning: prediction class '" << e.class_name
                      << "' absent from the reference vocabulary\n";
    }

    std::ostringstream report;
    const sed::MatchConfig base;  // reference collars
    if (eval_mode == "all") {
      const std::vector<sed::EvalMode> modes = {
          sed::EvalMode::kOnsetOnly, sed::EvalMode::kOffsetOnly,
          sed::EvalMode::kOnsetOffset, sed::EvalMode::kFull};
      report << "subsystem F (pooled over events)\n";
      for (const auto& [mode, macro_f] :
           sed::subsystem_report(refs, preds, modes, base)) {
        report << "  " << sed::eval_mode_name(mode) << " " << macro_f << "\n";
        report << "mode_f[" << sed::eval_mode_name(mode) << "]=" << macro_f
               << "\n";
      }
      report << sed::format_report(
          sed::score(refs, preds, mode_config(sed::EvalMode::kFull, base)));
    } else {
      const sed::EvalMode mode = sed::parse_eval_mode(eval_mode);
      report << sed::format_report(
          sed::score(refs, preds, mode_config(mode, base)));
    }

    std::cout << report.str();
    if (!eval_out.empty()) {
      std::ofstream out(eval_out);
      if (!out) throw sed::DataError("cannot open for writing: " + eval_out);
      out << report.str();
    }
    return 0;
  }

  if (synth->parsed()) {
    spec.classes.clear();
    std::istringstream in(synth_classes);
    std::string name;
    while (std::getline(in, name, ',')) spec.classes.push_back(name);
    sed::synthesize_scenes(spec, synth_out);
    std::cerr << "synth: " << spec.n_clips << " clips written to " << synth_out
              << "\n";
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const sed::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const sed::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
