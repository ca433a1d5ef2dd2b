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

#include "loudcomp/corpus.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "json.hpp"
#include "loudcomp/crc32.hpp"
#include "loudcomp/errors.hpp"
#include "loudcomp/parallel.hpp"
#include "loudcomp/stoi.hpp"
#include "loudcomp/version.hpp"

namespace loudcomp {
namespace {

namespace fs = std::filesystem;

std::string rate_key(double sample_rate) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", sample_rate);
  return buf;
}

std::string hex_digest(std::uint32_t digest) { return crc32_hex(digest); }

GainTableBuildParams table_params(double sample_rate,
                                  const CompensateOptions& options) {
  GainTableBuildParams params;
  params.direction = options.direction;
  params.sample_rate = sample_rate;
  params.window_length = options.window_length;
  params.max_gain = options.max_gain;
  params.min_gain = options.min_gain;
  params.jobs = options.table_jobs;
  return params;
}

// Key of the on-disk table cache: everything build_gain_table consumes.
std::string cache_key_text(const Audiogram& audiogram,
                           const GainTableBuildParams& params) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "|dir=%u|fs=%.17g|n=%zu|lmin=%.17g|lstep=%.17g|lcount=%zu|"
                "gmax=%.17g|gmin=%.17g",
                static_cast<unsigned>(params.direction), params.sample_rate,
                params.window_length, params.level_min, params.level_step,
                params.level_count, params.max_gain, params.min_gain);
  return audiogram.to_json() + buf;
}

bool table_matches(const GainTable& table, const GainTableBuildParams& params,
                   const Audiogram& audiogram) {
  const bool compensate = params.direction == GainDirection::kCompensate;
  const std::uint32_t impaired_digest = audiogram.digest();
  return table.direction() == params.direction &&
         table.sample_rate() == params.sample_rate &&
         table.window_length() == params.window_length &&
         table.level_min() == params.level_min &&
         table.level_step() == params.level_step &&
         table.level_count() == params.level_count &&
         table.max_gain() == params.max_gain &&
         table.min_gain() == params.min_gain &&
         (compensate ? table.target_ear_digest() : table.source_ear_digest()) ==
             impaired_digest;
}

GainTable build_for(const Audiogram& audiogram,
                    const GainTableBuildParams& params) {
  const EarModel impaired = EarModel::impaired(audiogram);
  const EarModel normal = EarModel::normal_hearing();
  if (params.direction == GainDirection::kCompensate) {
    return build_gain_table(normal, impaired, params);
  }
  return build_gain_table(impaired, normal, params);
}

}  // namespace

std::uint32_t CompensateOptions::config_digest(
    const Audiogram& audiogram) const {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "|dir=%u|win=%u|policy=%u|fss=%.17g|n=%zu|resync=%zu|"
                "sliding=%d|gmax=%.17g|gmin=%.17g",
                static_cast<unsigned>(direction), static_cast<unsigned>(window),
                static_cast<unsigned>(write_policy), full_scale_spl,
                window_length, resync_interval, use_sliding ? 1 : 0, max_gain,
                min_gain);
  const std::string text = audiogram.to_json() + buf;
  return crc32(text.data(), text.size());
}

GainTable obtain_gain_table(const Audiogram& audiogram, double sample_rate,
                            const CompensateOptions& options) {
  const GainTableBuildParams params = table_params(sample_rate, options);
  const char* cache_dir = std::getenv("LOUDCOMP_CACHE_DIR");
  if (cache_dir == nullptr || cache_dir[0] == '\0') {
    return build_for(audiogram, params);
  }

  const std::string key = cache_key_text(audiogram, params);
  const std::uint32_t key_digest = crc32(key.data(), key.size());
  const fs::path dir(cache_dir);
  const fs::path path = dir / ("lc-table-" + hex_digest(key_digest) + ".lcgt");

  if (fs::exists(path)) {
    try {
      GainTable cached = GainTable::load(path.string());
      if (table_matches(cached, params, audiogram)) return cached;
    } catch (const std::runtime_error&) {
      // Corrupt, stale, or unreadable cache entry: fall through and rebuild.
    }
  }
  GainTable table = build_for(audiogram, params);
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path tmp = path.string() + ".tmp." +
                       std::to_string(static_cast<unsigned long>(::getpid()));
  table.save(tmp.string());
  fs::rename(tmp, path, ec);
  if (ec) fs::remove(tmp, ec);  // another process won the race; use our copy
  return table;
}

FileEntry compensate_file(const std::string& id, const std::string& input_path,
                          const std::string& output_path,
                          const GainTable& table,
                          const CompensateOptions& options) {
  FileEntry entry;
  entry.id = id;
  entry.input_path = input_path;
  entry.output_path = output_path;

  const Waveform input = read_wav(input_path);
  if (input.sample_rate != table.sample_rate()) {
    throw ValidationError(
        "compensate: '" + input_path + "' has sample rate " +
        std::to_string(input.sample_rate) +
        " but the gain table was built for " +
        std::to_string(table.sample_rate()) + "; rebuild the table");
  }
  ProcessorConfig cfg;
  cfg.window_length = options.window_length;
  cfg.center_index = options.window_length / 2;
  cfg.window = options.window;
  cfg.full_scale_spl = options.full_scale_spl;
  cfg.resync_interval = options.resync_interval;
  const Waveform output = options.use_sliding ? process_sliding(input, table, cfg)
                                              : process(input, table, cfg);
  const WriteResult written = write_wav(output_path, output, options.write_policy);
  entry.duration_seconds = input.duration_seconds();
  entry.clip_count = written.clipped_samples;
  entry.output_digest = crc32_file(output_path);
  if (options.compute_stoi && input.sample_rate >= 10000.0) {
    entry.stoi_vs_input = stoi(input, output).value;
  }
  entry.ok = true;
  return entry;
}

bool CorpusManifest::all_ok() const {
  for (const FileEntry& entry : entries) {
    if (!entry.ok) return false;
  }
  return !entries.empty();
}

std::string CorpusManifest::to_json() const {
  nlohmann::json doc;
  doc["tool_version"] = tool_version;
  doc["audiogram_digest"] = hex_digest(audiogram_digest);
  doc["config_digest"] = hex_digest(config_digest);
  nlohmann::json tables = nlohmann::json::object();
  for (const auto& [rate, digest] : table_digests) {
    tables[rate] = hex_digest(digest);
  }
  doc["table_digests"] = tables;
  nlohmann::json entries_json = nlohmann::json::array();
  for (const FileEntry& entry : entries) {
    nlohmann::json e;
    e["id"] = entry.id;
    e["input"] = entry.input_path;
    e["output"] = entry.output_path;
    e["duration_s"] = entry.duration_seconds;
    e["clip_count"] = entry.clip_count;
    e["output_digest"] = hex_digest(entry.output_digest);
    e["status"] = entry.ok ? "ok" : "failed";
    if (!entry.ok) e["error"] = entry.error;
    if (entry.stoi_vs_input >= 0.0) e["stoi"] = entry.stoi_vs_input;
    entries_json.push_back(e);
  }
  doc["entries"] = entries_json;
  return doc.dump(2) + "\n";
}

CorpusManifest CorpusManifest::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("manifest: invalid JSON: ") + e.what());
  }
  const auto parse_hex = [](const std::string& hex) {
    return static_cast<std::uint32_t>(std::stoul(hex, nullptr, 16));
  };
  CorpusManifest manifest;
  try {
    manifest.tool_version = doc.at("tool_version").get<std::string>();
    manifest.audiogram_digest =
        parse_hex(doc.at("audiogram_digest").get<std::string>());
    manifest.config_digest =
        parse_hex(doc.at("config_digest").get<std::string>());
    for (const auto& [rate, digest] : doc.at("table_digests").items()) {
      manifest.table_digests[rate] = parse_hex(digest.get<std::string>());
    }
    for (const auto& e : doc.at("entries")) {
      FileEntry entry;
      entry.id = e.at("id").get<std::string>();
      entry.input_path = e.at("input").get<std::string>();
      entry.output_path = e.at("output").get<std::string>();
      entry.duration_seconds = e.at("duration_s").get<double>();
      entry.clip_count = e.at("clip_count").get<std::size_t>();
      entry.output_digest = parse_hex(e.at("output_digest").get<std::string>());
      entry.ok = e.at("status").get<std::string>() == "ok";
      if (e.contains("error")) entry.error = e.at("error").get<std::string>();
      if (e.contains("stoi")) entry.stoi_vs_input = e.at("stoi").get<double>();
      manifest.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("manifest: missing or mistyped field: ") +
                          e.what());
  }
  return manifest;
}

std::vector<CorpusJob> read_metadata(const std::string& metadata_path,
                                     const std::string& wav_dir,
                                     const std::string& out_dir) {
  std::ifstream in(metadata_path);
  if (!in) throw IoError("corpus: cannot open metadata '" + metadata_path + "'");
  std::vector<CorpusJob> jobs;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    CorpusJob job;
    const std::size_t pipe = line.find('|');
    if (pipe != std::string::npos) {
      job.id = line.substr(0, pipe);
      job.input_path = (fs::path(wav_dir) / (job.id + ".wav")).string();
    } else {
      fs::path rel(line);
      if (rel.extension().empty()) rel += ".wav";
      job.id = rel.stem().string();
      job.input_path = (fs::path(wav_dir) / rel).string();
    }
    if (job.id.empty()) {
      throw ValidationError("corpus: metadata line with empty id: '" + line +
                            "'");
    }
    job.output_path = (fs::path(out_dir) / (job.id + ".wav")).string();
    jobs.push_back(std::move(job));
  }
  std::sort(jobs.begin(), jobs.end(),
            [](const CorpusJob& a, const CorpusJob& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < jobs.size(); ++i) {
    if (jobs[i].id == jobs[i - 1].id) {
      throw ValidationError("corpus: duplicate id '" + jobs[i].id +
                            "' in metadata");
    }
  }
  if (jobs.empty()) {
    throw ValidationError("corpus: metadata lists no files");
  }
  return jobs;
}

CorpusManifest run_corpus(const std::string& metadata_path,
                          const std::string& wav_dir,
                          const std::string& out_dir, std::size_t jobs,
                          const Audiogram& audiogram,
                          const CompensateOptions& options) {
  const std::vector<CorpusJob> work = read_metadata(metadata_path, wav_dir, out_dir);
  fs::create_directories(out_dir);

  CorpusManifest manifest;
  manifest.tool_version = kVersion;
  manifest.audiogram_digest = audiogram.digest();
  manifest.config_digest = options.config_digest(audiogram);

  // Previous manifest (if readable and for the same configuration) enables
  // skipping files whose output still matches its recorded digest.
  std::map<std::string, FileEntry> previous;
  const fs::path manifest_path = fs::path(out_dir) / "manifest.json";
  if (fs::exists(manifest_path)) {
    try {
      std::ifstream in(manifest_path);
      std::ostringstream buffer;
      buffer << in.rdbuf();
      CorpusManifest old = CorpusManifest::from_json(buffer.str());
      if (old.audiogram_digest == manifest.audiogram_digest &&
          old.config_digest == manifest.config_digest) {
        for (FileEntry& entry : old.entries) {
          previous[entry.id] = std::move(entry);
        }
      }
    } catch (const ValidationError&) {
      // Unusable old manifest: reprocess everything.
    }
  }

  // Tables shared across workers, built once per distinct sample rate.
  std::mutex table_mutex;
  std::map<long long, GainTable> tables;
  const auto table_for = [&](double sample_rate) -> const GainTable& {
    const long long key = std::llround(sample_rate);
    std::scoped_lock lock(table_mutex);
    auto found = tables.find(key);
    if (found == tables.end()) {
      found = tables
                  .emplace(key,
                           obtain_gain_table(audiogram, sample_rate, options))
                  .first;
    }
    return found->second;
  };

  std::vector<FileEntry> entries(work.size());
  const unsigned workers =
      jobs == 0 ? default_jobs() : static_cast<unsigned>(jobs);
  parallel_for(work.size(), workers, [&](std::size_t i) {
    const CorpusJob& job = work[i];
    const auto old = previous.find(job.id);
    if (old != previous.end() && old->second.ok && fs::exists(job.output_path)) {
      try {
        if (crc32_file(job.output_path) == old->second.output_digest) {
          entries[i] = old->second;
          entries[i].skipped = true;
          return;
        }
      } catch (const IoError&) {
        // Unreadable output: reprocess below.
      }
    }
    try {
      const Waveform probe = read_wav(job.input_path);
      const GainTable& table = table_for(probe.sample_rate);
      entries[i] = compensate_file(job.id, job.input_path, job.output_path,
                                   table, options);
    } catch (const std::exception& e) {
      entries[i].id = job.id;
      entries[i].input_path = job.input_path;
      entries[i].output_path = job.output_path;
      entries[i].ok = false;
      entries[i].error = e.what();
    }
  });

  manifest.entries = std::move(entries);
  {
    std::scoped_lock lock(table_mutex);
    for (const auto& [rate, table] : tables) {
      manifest.table_digests[rate_key(static_cast<double>(rate))] =
          table.digest();
    }
  }

  const std::string json = manifest.to_json();
  const fs::path tmp = manifest_path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("corpus: cannot write manifest");
    out << json;
  }
  fs::rename(tmp, manifest_path);
  return manifest;
}

}  // namespace loudcomp
