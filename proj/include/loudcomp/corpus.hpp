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

#ifndef LOUDCOMP_CORPUS_HPP
#define LOUDCOMP_CORPUS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "loudcomp/audiogram.hpp"
#include "loudcomp/gain_table.hpp"
#include "loudcomp/processor.hpp"
#include "loudcomp/wav.hpp"

namespace loudcomp {

struct CompensateOptions {
  GainDirection direction = GainDirection::kCompensate;
  AnalysisWindow window = AnalysisWindow::kRaisedCosine;
  WritePolicy write_policy = WritePolicy::kFloat;
  double full_scale_spl = 100.0;
  std::size_t window_length = 1024;
  std::size_t resync_interval = 4096;
  bool use_sliding = true;   // naive path available for verification
  bool compute_stoi = false; // add a STOI-vs-input column to reports
  double max_gain = 60.0;
  double min_gain = -80.0;
  std::size_t table_jobs = 0;

  // Digest over every option that influences output bytes, plus the
  // audiogram; equality of config digests is what makes resume sound.
  std::uint32_t config_digest(const Audiogram& audiogram) const;
};

// Builds the gain table for this audiogram / sample rate / options, or
// loads it from the LOUDCOMP_CACHE_DIR cache (written atomically; corrupt
// or mismatched cache entries are rebuilt).
GainTable obtain_gain_table(const Audiogram& audiogram, double sample_rate,
                            const CompensateOptions& options);

struct FileEntry {
  std::string id;
  std::string input_path;
  std::string output_path;
  double duration_seconds = 0.0;
  std::size_t clip_count = 0;
  std::uint32_t output_digest = 0;
  double stoi_vs_input = -1.0;  // negative = not computed
  bool ok = false;
  bool skipped = false;  // satisfied by a previous run (not persisted)
  std::string error;
};

// Processes one file through the gain table and writes the result.
// Deterministic: identical inputs and options give identical output bytes.
FileEntry compensate_file(const std::string& id, const std::string& input_path,
                          const std::string& output_path,
                          const GainTable& table,
                          const CompensateOptions& options);

struct CorpusManifest {
  std::string tool_version;
  std::uint32_t audiogram_digest = 0;
  std::uint32_t config_digest = 0;
  std::map<std::string, std::uint32_t> table_digests;  // sample rate -> digest
  std::vector<FileEntry> entries;                      // sorted by id

  bool all_ok() const;
  std::string to_json() const;
  static CorpusManifest from_json(const std::string& text);
};

struct CorpusJob {
  std::string id;
  std::string input_path;
  std::string output_path;
};

// Parses LJSpeech pipe-delimited metadata (`id|text|normalized`) or a plain
// list of wav files, resolving inputs against wav_dir and outputs into
// out_dir. Jobs are sorted by id; duplicate ids are rejected.
std::vector<CorpusJob> read_metadata(const std::string& metadata_path,
                                     const std::string& wav_dir,
                                     const std::string& out_dir);

// Runs every job through a worker pool. Files whose recorded output digest
// still matches on disk (same audiogram and config) are skipped. Failures
// are recorded per entry and do not stop the run; the manifest is written
// to <out_dir>/manifest.json.
CorpusManifest run_corpus(const std::string& metadata_path,
                          const std::string& wav_dir,
                          const std::string& out_dir, std::size_t jobs,
                          const Audiogram& audiogram,
                          const CompensateOptions& options);

}  // namespace loudcomp

#endif  // LOUDCOMP_CORPUS_HPP
