// Copyright 2026 The Loudcomp Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "loudcomp/analysis.hpp"
#include "loudcomp/audiogram.hpp"
#include "loudcomp/corpus.hpp"
#include "loudcomp/crc32.hpp"
#include "loudcomp/errors.hpp"
#include "loudcomp/gain_table.hpp"
#include "loudcomp/processor.hpp"
#include "loudcomp/stoi.hpp"
#include "loudcomp/version.hpp"
#include "loudcomp/wav.hpp"

namespace {

namespace fs = std::filesystem;
using namespace loudcomp;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitPartialFailure = 3;

// Options shared by every command that runs audio through a gain table.
struct ProcessingFlags {
  std::string audiogram_path;
  bool inverse = false;
  double full_scale_spl = 100.0;
  std::string window = "hann";
  std::string write_policy = "float";
  std::size_t resync_interval = 4096;
  bool naive = false;
  double max_gain = 60.0;
  double min_gain = -80.0;
  std::size_t jobs = 0;
  bool with_stoi = false;
};

void add_processing_flags(CLI::App* cmd, ProcessingFlags* flags,
                          bool needs_policy) {
  cmd->add_option("--audiogram", flags->audiogram_path,
                  "Audiogram JSON file")
      ->required();
  cmd->add_flag("--inverse", flags->inverse,
                "Undo compensation instead of applying it");
  cmd->add_option("--full-scale-spl", flags->full_scale_spl,
                  "SPL of a full-scale sine (default 100)");
  cmd->add_option("--window", flags->window, "Analysis window: hann or rect")
      ->check(CLI::IsMember({"hann", "rect"}));
  if (needs_policy) {
    cmd->add_option("--write-policy", flags->write_policy,
                    "Output encoding: float, clip, or normalize")
        ->check(CLI::IsMember({"float", "clip", "normalize"}));
  }
  cmd->add_option("--resync-interval", flags->resync_interval,
                  "Samples between exact-transform resyncs (default 4096)");
  cmd->add_flag("--naive", flags->naive,
                "Use the per-sample reference transform (slow, for checks)");
  cmd->add_option("--max-gain", flags->max_gain, "Gain ceiling in dB");
  cmd->add_option("--min-gain", flags->min_gain, "Gain floor in dB");
  cmd->add_option("--jobs", flags->jobs,
                  "Worker threads (default: all cores)");
}

CompensateOptions to_options(const ProcessingFlags& flags) {
  CompensateOptions options;
  options.direction =
      flags.inverse ? GainDirection::kInverse : GainDirection::kCompensate;
  options.window = flags.window == "rect" ? AnalysisWindow::kRectangular
                                          : AnalysisWindow::kRaisedCosine;
  if (flags.write_policy == "clip") {
    options.write_policy = WritePolicy::kClipAndCount;
  } else if (flags.write_policy == "normalize") {
    options.write_policy = WritePolicy::kPeakNormalize;
  } else {
    options.write_policy = WritePolicy::kFloat;
  }
  options.full_scale_spl = flags.full_scale_spl;
  options.resync_interval = flags.resync_interval;
  options.use_sliding = !flags.naive;
  options.compute_stoi = flags.with_stoi;
  options.max_gain = flags.max_gain;
  options.min_gain = flags.min_gain;
  options.table_jobs = flags.jobs;
  return options;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::vector<std::string> collect_wavs(const std::string& input) {
  std::vector<std::string> paths;
  if (fs::is_directory(input)) {
    for (const auto& entry : fs::directory_iterator(input)) {
      if (entry.is_regular_file() && entry.path().extension() == ".wav") {
        paths.push_back(entry.path().string());
      }
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) {
      throw ValidationError("spectrum: no .wav files in '" + input + "'");
    }
  } else {
    paths.push_back(input);
  }
  return paths;
}

int run_table_build(const ProcessingFlags& flags, const std::string& out_path,
                    double sample_rate, std::size_t window_length) {
  const Audiogram audiogram = Audiogram::load(flags.audiogram_path);
  CompensateOptions options = to_options(flags);
  options.window_length = window_length;
  const GainTable table = obtain_gain_table(audiogram, sample_rate, options);
  table.save(out_path);
  std::printf("wrote %s (%zu bins x %zu levels, %s, digest %s)\n",
              out_path.c_str(), table.bin_count(), table.level_count(),
              flags.inverse ? "inverse" : "compensate",
              crc32_hex(table.digest()).c_str());
  return kExitOk;
}

int run_table_export(const std::string& table_path,
                     const std::string& csv_path) {
  const GainTable table = GainTable::load(table_path);
  write_text_file(csv_path, table.to_csv());
  std::printf("wrote %s\n", csv_path.c_str());
  return kExitOk;
}

int run_compensate(const ProcessingFlags& flags, const std::string& in_path,
                   const std::string& out_path) {
  const Audiogram audiogram = Audiogram::load(flags.audiogram_path);
  const CompensateOptions options = to_options(flags);
  const Waveform input = read_wav(in_path);
  const GainTable table =
      obtain_gain_table(audiogram, input.sample_rate, options);
  const FileEntry entry =
      compensate_file(fs::path(out_path).stem().string(), in_path, out_path,
                      table, options);
  std::printf("wrote %s (%.2f s, %zu samples clipped)\n", out_path.c_str(),
              entry.duration_seconds, entry.clip_count);
  if (entry.stoi_vs_input >= 0.0) {
    std::printf("stoi vs input: %.4f\n", entry.stoi_vs_input);
  }
  return kExitOk;
}

int run_corpus_cmd(const ProcessingFlags& flags,
                   const std::string& metadata_path,
                   const std::string& wav_dir, const std::string& out_dir) {
  const Audiogram audiogram = Audiogram::load(flags.audiogram_path);
  const CompensateOptions options = to_options(flags);
  const CorpusManifest manifest = run_corpus(metadata_path, wav_dir, out_dir,
                                             flags.jobs, audiogram, options);
  std::size_t processed = 0;
  std::size_t skipped = 0;
  std::size_t failed = 0;
  for (const FileEntry& entry : manifest.entries) {
    if (!entry.ok) {
      ++failed;
      std::fprintf(stderr, "failed %s: %s\n", entry.id.c_str(),
                   entry.error.c_str());
    } else if (entry.skipped) {
      ++skipped;
    } else {
      ++processed;
    }
  }
  std::printf("corpus: %zu processed, %zu skipped, %zu failed; manifest at "
              "%s/manifest.json\n",
              processed, skipped, failed, out_dir.c_str());
  return failed == 0 ? kExitOk : kExitPartialFailure;
}

int run_stoi(const std::string& clean_path, const std::string& processed_path) {
  const Waveform clean = read_wav(clean_path);
  const Waveform processed = read_wav(processed_path);
  const StoiScore score = stoi(clean, processed);
  std::printf("%.6f\n", score.value);
  return kExitOk;
}

int run_spectrum(const std::string& input, const std::string& csv_path,
                 bool average, double full_scale_spl) {
  const std::vector<std::string> paths = collect_wavs(input);
  if (paths.size() > 1 && !average) {
    throw ValidationError(
        "spectrum: '" + input +
        "' holds several files; pass --average to pool them");
  }
  ThirdOctaveSpectrum spectrum;
  if (average) {
    std::vector<Waveform> signals;
    signals.reserve(paths.size());
    for (const std::string& path : paths) signals.push_back(read_wav(path));
    spectrum = average_spectra(signals, full_scale_spl);
  } else {
    spectrum = third_octave_spectrum(read_wav(paths.front()), full_scale_spl);
  }
  write_text_file(csv_path, spectrum_to_csv(spectrum));
  std::printf("wrote %s (%zu files pooled)\n", csv_path.c_str(), paths.size());
  return kExitOk;
}

int run_match_loudness(const std::string& ref_path,
                       const std::string& target_path,
                       const std::string& audiogram_path,
                       double full_scale_spl) {
  const Waveform reference = read_wav(ref_path);
  const Waveform target = read_wav(target_path);
  const EarModel ear = audiogram_path.empty()
                           ? EarModel::normal_hearing()
                           : EarModel::impaired(Audiogram::load(audiogram_path));
  const double gain = match_loudness(target, reference, ear, full_scale_spl);
  std::printf("gain to match: %+.2f dB\n", gain);
  std::printf("reference loudness: %.3f sone\n",
              total_loudness(reference, full_scale_spl, ear));
  std::printf("target loudness: %.3f sone\n",
              total_loudness(target, full_scale_spl, ear));
  return kExitOk;
}

int run_restore_report(const std::string& original_path,
                       const std::string& processed_path,
                       const std::string& audiogram_path,
                       const std::string& csv_path, double full_scale_spl) {
  const Waveform original = read_wav(original_path);
  const Waveform processed = read_wav(processed_path);
  const EarModel ear = EarModel::impaired(Audiogram::load(audiogram_path));
  const RestorationReport report =
      restoration_report(original, processed, ear, full_scale_spl);
  write_text_file(csv_path, restoration_to_csv(report));
  std::printf("median relative error: %.4f\n", report.median_error);
  std::printf("p90 relative error:    %.4f\n", report.p90_error);
  std::printf("wrote %s\n", csv_path.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loudness compensation for impaired hearing: builds per-bin "
               "equal-loudness gain tables and applies them to speech"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // table build / table export
  auto* table = app.add_subcommand("table", "Build or export gain tables");
  table->require_subcommand(1);
  ProcessingFlags build_flags;
  std::string build_out = "table.lcgt";
  double build_rate = 22050.0;
  std::size_t build_window = 1024;
  auto* build = table->add_subcommand("build", "Solve the gain table");
  add_processing_flags(build, &build_flags, /*needs_policy=*/false);
  build->add_option("--out", build_out, "Output table path");
  build->add_option("--sample-rate", build_rate, "Sample rate in Hz");
  build->add_option("--window-length", build_window, "Analysis window length");

  std::string export_table;
  std::string export_csv;
  auto* table_export =
      table->add_subcommand("export", "Dump a table to CSV");
  table_export->add_option("--table", export_table, "Table file")->required();
  table_export->add_option("--csv", export_csv, "CSV output path")->required();

  // compensate
  ProcessingFlags comp_flags;
  std::string comp_in;
  std::string comp_out;
  auto* compensate =
      app.add_subcommand("compensate", "Process one file through the table");
  add_processing_flags(compensate, &comp_flags, /*needs_policy=*/true);
  compensate->add_option("--in", comp_in, "Input WAV")->required();
  compensate->add_option("--out", comp_out, "Output WAV")->required();
  compensate->add_flag("--stoi", comp_flags.with_stoi,
                       "Also report STOI against the input");

  // corpus
  ProcessingFlags corpus_flags;
  std::string corpus_metadata;
  std::string corpus_wav_dir;
  std::string corpus_out_dir;
  auto* corpus =
      app.add_subcommand("corpus", "Batch-process a speech corpus");
  add_processing_flags(corpus, &corpus_flags, /*needs_policy=*/true);
  corpus->add_option("--metadata", corpus_metadata,
                     "Pipe-delimited metadata or plain wav list")
      ->required();
  corpus->add_option("--wav-dir", corpus_wav_dir, "Input WAV directory")
      ->required();
  corpus->add_option("--out-dir", corpus_out_dir, "Output directory")
      ->required();
  corpus->add_flag("--stoi", corpus_flags.with_stoi,
                   "Record STOI vs input per file");

  // stoi
  std::string stoi_clean;
  std::string stoi_processed;
  auto* stoi_cmd = app.add_subcommand("stoi", "Objective intelligibility");
  stoi_cmd->add_option("--clean", stoi_clean, "Reference WAV")->required();
  stoi_cmd->add_option("--processed", stoi_processed, "Degraded WAV")
      ->required();

  // spectrum
  std::string spectrum_in;
  std::string spectrum_csv;
  bool spectrum_average = false;
  double spectrum_fss = 100.0;
  auto* spectrum =
      app.add_subcommand("spectrum", "Third-octave band levels to CSV");
  spectrum->add_option("--in", spectrum_in, "WAV file or directory")
      ->required();
  spectrum->add_option("--csv", spectrum_csv, "CSV output path")->required();
  spectrum->add_flag("--average", spectrum_average,
                     "Pool every file in a directory");
  spectrum->add_option("--full-scale-spl", spectrum_fss,
                       "SPL of a full-scale sine (default 100)");

  // match-loudness
  std::string match_ref;
  std::string match_target;
  std::string match_audiogram;
  double match_fss = 100.0;
  auto* match = app.add_subcommand(
      "match-loudness", "Gain that makes the target as loud as the reference");
  match->add_option("--ref", match_ref, "Reference WAV")->required();
  match->add_option("--target", match_target, "WAV to be gain-adjusted")
      ->required();
  match->add_option("--audiogram", match_audiogram,
                    "Match through this impaired ear (default: normal)");
  match->add_option("--full-scale-spl", match_fss,
                    "SPL of a full-scale sine (default 100)");

  // restore-report
  std::string restore_original;
  std::string restore_processed;
  std::string restore_audiogram;
  std::string restore_csv;
  double restore_fss = 100.0;
  auto* restore = app.add_subcommand(
      "restore-report",
      "Per-channel loudness restoration of processed vs original");
  restore->add_option("--original", restore_original, "Original WAV")
      ->required();
  restore->add_option("--processed", restore_processed, "Compensated WAV")
      ->required();
  restore->add_option("--audiogram", restore_audiogram, "Audiogram JSON")
      ->required();
  restore->add_option("--csv", restore_csv, "CSV output path")->required();
  restore->add_option("--full-scale-spl", restore_fss,
                      "SPL of a full-scale sine (default 100)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (build->parsed()) {
      return run_table_build(build_flags, build_out, build_rate, build_window);
    }
    if (table_export->parsed()) {
      return run_table_export(export_table, export_csv);
    }
    if (compensate->parsed()) {
      return run_compensate(comp_flags, comp_in, comp_out);
    }
    if (corpus->parsed()) {
      return run_corpus_cmd(corpus_flags, corpus_metadata, corpus_wav_dir,
                            corpus_out_dir);
    }
    if (stoi_cmd->parsed()) {
      return run_stoi(stoi_clean, stoi_processed);
    }
    if (spectrum->parsed()) {
      return run_spectrum(spectrum_in, spectrum_csv, spectrum_average,
                          spectrum_fss);
    }
    if (match->parsed()) {
      return run_match_loudness(match_ref, match_target, match_audiogram,
                                match_fss);
    }
    if (restore->parsed()) {
      return run_restore_report(restore_original, restore_processed,
                                restore_audiogram, restore_csv, restore_fss);
    }
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return kExitOk;
}
