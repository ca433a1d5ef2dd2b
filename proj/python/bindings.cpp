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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "loudcomp/analysis.hpp"
#include "loudcomp/audiogram.hpp"
#include "loudcomp/erb.hpp"
#include "loudcomp/errors.hpp"
#include "loudcomp/gain_table.hpp"
#include "loudcomp/loudness.hpp"
#include "loudcomp/processor.hpp"
#include "loudcomp/stoi.hpp"
#include "loudcomp/version.hpp"
#include "loudcomp/wav.hpp"

namespace py = pybind11;

namespace {

using DoubleArray =
    py::array_t<double, py::array::c_style | py::array::forcecast>;

loudcomp::Waveform to_waveform(const DoubleArray& samples,
                               double sample_rate) {
  if (samples.ndim() != 1) {
    throw loudcomp::ValidationError("samples must be a one-dimensional array");
  }
  loudcomp::Waveform wave;
  wave.sample_rate = sample_rate;
  wave.samples.assign(samples.data(), samples.data() + samples.size());
  return wave;
}

py::array_t<double> to_array(const loudcomp::Waveform& wave) {
  py::array_t<double> out(static_cast<py::ssize_t>(wave.samples.size()));
  std::copy(wave.samples.begin(), wave.samples.end(),
            out.mutable_data());
  return out;
}

loudcomp::GainDirection parse_direction(const std::string& direction) {
  if (direction == "compensate") return loudcomp::GainDirection::kCompensate;
  if (direction == "inverse") return loudcomp::GainDirection::kInverse;
  throw loudcomp::ValidationError(
      "direction must be 'compensate' or 'inverse', got '" + direction + "'");
}

loudcomp::ProcessorConfig make_config(double full_scale_spl,
                                      std::size_t resync_interval) {
  loudcomp::ProcessorConfig cfg;
  cfg.full_scale_spl = full_scale_spl;
  cfg.resync_interval = resync_interval;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_loudcomp, m) {
  m.doc() = "Loudness compensation for hearing-impaired listeners";
  m.attr("__version__") = loudcomp::kVersion;

  py::register_exception<loudcomp::ValidationError>(m, "ValidationError",
                                                    PyExc_ValueError);
  py::register_exception<loudcomp::IoError>(m, "IoError", PyExc_OSError);

  m.def("erb_number", &loudcomp::erb_number, py::arg("frequency_hz"),
        "ERB-number (Cam) of a frequency in Hz.");
  m.def("erb_bandwidth", &loudcomp::erb_bandwidth, py::arg("frequency_hz"),
        "Equivalent rectangular bandwidth in Hz at a center frequency.");
  m.def("erb_to_frequency", &loudcomp::erb_to_frequency, py::arg("cam"),
        "Inverse of erb_number.");

  py::class_<loudcomp::Audiogram>(m, "Audiogram")
      .def(py::init<std::vector<double>, std::vector<double>, double>(),
           py::arg("frequencies_hz"), py::arg("hl_db"),
           py::arg("ohc_fraction") = 0.9)
      .def_static("load", &loudcomp::Audiogram::load, py::arg("path"))
      .def_static("parse", &loudcomp::Audiogram::parse, py::arg("json_text"))
      .def("hl_at", &loudcomp::Audiogram::hl_at, py::arg("frequency_hz"))
      .def("to_json", &loudcomp::Audiogram::to_json)
      .def("digest", &loudcomp::Audiogram::digest)
      .def("is_zero_loss", &loudcomp::Audiogram::is_zero_loss)
      .def_property_readonly("frequencies_hz",
                             &loudcomp::Audiogram::frequencies_hz)
      .def_property_readonly("hl_db", &loudcomp::Audiogram::hl_db)
      .def_property_readonly("ohc_fraction",
                             &loudcomp::Audiogram::ohc_fraction);

  py::class_<loudcomp::EarModel>(m, "EarModel")
      .def_static("normal_hearing", &loudcomp::EarModel::normal_hearing)
      .def_static("impaired", &loudcomp::EarModel::impaired,
                  py::arg("audiogram"))
      .def_readwrite("scale_c", &loudcomp::EarModel::scale_c);

  m.def("specific_loudness", &loudcomp::specific_loudness, py::arg("level_db"),
        py::arg("frequency_hz"), py::arg("ear"),
        "Specific loudness (sone/Cam) of uniformly exciting noise at an "
        "auditory-filter level.");
  m.def(
      "total_loudness",
      [](const DoubleArray& samples, double sample_rate, double full_scale_spl,
         const loudcomp::EarModel& ear) {
        return loudcomp::total_loudness(to_waveform(samples, sample_rate),
                                        full_scale_spl, ear);
      },
      py::arg("samples"), py::arg("sample_rate"),
      py::arg("full_scale_spl") = 100.0,
      py::arg("ear") = loudcomp::EarModel::normal_hearing(),
      "Long-term loudness in sone.");

  py::class_<loudcomp::GainTable>(m, "GainTable")
      .def_static("load", &loudcomp::GainTable::load, py::arg("path"))
      .def("save", &loudcomp::GainTable::save, py::arg("path"))
      .def("lookup", &loudcomp::GainTable::lookup, py::arg("frequency_hz"),
           py::arg("level_db"))
      .def("bin_frequency", &loudcomp::GainTable::bin_frequency,
           py::arg("bin"))
      .def("to_csv", &loudcomp::GainTable::to_csv)
      .def("digest", &loudcomp::GainTable::digest)
      .def_property_readonly("bin_count", &loudcomp::GainTable::bin_count)
      .def_property_readonly("level_count", &loudcomp::GainTable::level_count)
      .def_property_readonly("sample_rate", &loudcomp::GainTable::sample_rate)
      .def_property_readonly("window_length",
                             &loudcomp::GainTable::window_length);

  m.def(
      "build_table",
      [](const loudcomp::Audiogram& audiogram, const std::string& direction,
         double sample_rate, double max_gain, double min_gain,
         std::size_t jobs) {
        loudcomp::GainTableBuildParams params;
        params.direction = parse_direction(direction);
        params.sample_rate = sample_rate;
        params.max_gain = max_gain;
        params.min_gain = min_gain;
        params.jobs = jobs;
        const loudcomp::EarModel impaired =
            loudcomp::EarModel::impaired(audiogram);
        const loudcomp::EarModel normal =
            loudcomp::EarModel::normal_hearing();
        return params.direction == loudcomp::GainDirection::kInverse
                   ? loudcomp::build_gain_table(impaired, normal, params)
                   : loudcomp::build_gain_table(normal, impaired, params);
      },
      py::arg("audiogram"), py::arg("direction") = "compensate",
      py::arg("sample_rate") = 22050.0, py::arg("max_gain") = 60.0,
      py::arg("min_gain") = -80.0, py::arg("jobs") = 0,
      py::call_guard<py::gil_scoped_release>(),
      "Solve the per-bin equal-loudness gain table for an audiogram.");

  m.def(
      "process",
      [](const DoubleArray& samples, double sample_rate,
         const loudcomp::GainTable& table, double full_scale_spl,
         std::size_t resync_interval, bool sliding) {
        const loudcomp::Waveform in = to_waveform(samples, sample_rate);
        const loudcomp::ProcessorConfig cfg =
            make_config(full_scale_spl, resync_interval);
        loudcomp::Waveform out;
        {
          py::gil_scoped_release release;
          out = sliding ? loudcomp::process_sliding(in, table, cfg)
                        : loudcomp::process(in, table, cfg);
        }
        return to_array(out);
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("table"),
      py::arg("full_scale_spl") = 100.0, py::arg("resync_interval") = 4096,
      py::arg("sliding") = true,
      "Apply per-bin gains sample by sample; returns the processed samples.");

  m.def(
      "stoi",
      [](const DoubleArray& clean, const DoubleArray& degraded,
         double sample_rate) {
        return loudcomp::stoi(to_waveform(clean, sample_rate),
                              to_waveform(degraded, sample_rate))
            .value;
      },
      py::arg("clean"), py::arg("degraded"), py::arg("sample_rate"),
      "Short-time objective intelligibility in [0, 1].");

  m.def(
      "resample",
      [](const DoubleArray& samples, double sample_rate, double to_hz) {
        return to_array(
            loudcomp::resample(to_waveform(samples, sample_rate), to_hz));
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("to_hz"),
      "Polyphase rational-ratio resampling.");

  py::class_<loudcomp::ThirdOctaveSpectrum>(m, "ThirdOctaveSpectrum")
      .def_readonly("center_hz", &loudcomp::ThirdOctaveSpectrum::center_hz)
      .def_readonly("nominal_hz", &loudcomp::ThirdOctaveSpectrum::nominal_hz)
      .def_readonly("level_db", &loudcomp::ThirdOctaveSpectrum::level_db);

  m.def(
      "third_octave_spectrum",
      [](const DoubleArray& samples, double sample_rate,
         double full_scale_spl) {
        return loudcomp::third_octave_spectrum(
            to_waveform(samples, sample_rate), full_scale_spl);
      },
      py::arg("samples"), py::arg("sample_rate"),
      py::arg("full_scale_spl") = 100.0,
      "Long-term third-octave band levels (50 Hz to 8 kHz).");

  m.def(
      "speech_shaped_noise",
      [](const loudcomp::ThirdOctaveSpectrum& shape, double duration_seconds,
         double sample_rate, double full_scale_spl, std::uint64_t seed) {
        return to_array(loudcomp::speech_shaped_noise(
            shape, duration_seconds, sample_rate, full_scale_spl, seed));
      },
      py::arg("shape"), py::arg("duration_seconds"),
      py::arg("sample_rate") = 22050.0, py::arg("full_scale_spl") = 100.0,
      py::arg("seed") = 1,
      "Stationary noise matching a third-octave spectrum.");

  m.def(
      "match_loudness",
      [](const DoubleArray& reference, const DoubleArray& target,
         double sample_rate, const loudcomp::EarModel& ear,
         double full_scale_spl) {
        return loudcomp::match_loudness(to_waveform(reference, sample_rate),
                                        to_waveform(target, sample_rate), ear,
                                        full_scale_spl);
      },
      py::arg("reference"), py::arg("target"), py::arg("sample_rate"),
      py::arg("ear") = loudcomp::EarModel::normal_hearing(),
      py::arg("full_scale_spl") = 100.0,
      "Broadband gain that makes reference as loud as target.");

  py::class_<loudcomp::RestorationReport>(m, "RestorationReport")
      .def_readonly("center_cam", &loudcomp::RestorationReport::center_cam)
      .def_readonly("relative_error",
                    &loudcomp::RestorationReport::relative_error)
      .def_readonly("median_error", &loudcomp::RestorationReport::median_error)
      .def_readonly("p90_error", &loudcomp::RestorationReport::p90_error);

  m.def(
      "restoration_report",
      [](const DoubleArray& original, const DoubleArray& processed,
         double sample_rate, const loudcomp::EarModel& impaired_ear,
         double full_scale_spl) {
        return loudcomp::restoration_report(
            to_waveform(original, sample_rate),
            to_waveform(processed, sample_rate), impaired_ear,
            full_scale_spl);
      },
      py::arg("original"), py::arg("processed"), py::arg("sample_rate"),
      py::arg("impaired_ear"), py::arg("full_scale_spl") = 100.0,
      "Per-channel loudness restoration error of processed vs original.");

  m.def(
      "read_wav",
      [](const std::string& path) {
        const loudcomp::Waveform wave = loudcomp::read_wav(path);
        return py::make_tuple(to_array(wave), wave.sample_rate);
      },
      py::arg("path"), "Read a mono wav file; returns (samples, rate).");

  m.def(
      "write_wav",
      [](const std::string& path, const DoubleArray& samples,
         double sample_rate, const std::string& policy) {
        loudcomp::WritePolicy write_policy;
        if (policy == "float") {
          write_policy = loudcomp::WritePolicy::kFloat;
        } else if (policy == "clip") {
          write_policy = loudcomp::WritePolicy::kClipAndCount;
        } else if (policy == "normalize") {
          write_policy = loudcomp::WritePolicy::kPeakNormalize;
        } else {
          throw loudcomp::ValidationError(
              "policy must be 'float', 'clip', or 'normalize'");
        }
        const loudcomp::WriteResult result = loudcomp::write_wav(
            path, to_waveform(samples, sample_rate), write_policy);
        return py::make_tuple(result.clipped_samples, result.peak);
      },
      py::arg("path"), py::arg("samples"), py::arg("sample_rate"),
      py::arg("policy") = "float",
      "Write a mono wav file; returns (clipped_samples, peak).");
}
