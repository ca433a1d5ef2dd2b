# Copyright 2026 The Loudcomp Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import numpy as np
import pytest

import loudcomp


FS = 22050.0


def speechish(seconds=1.0, seed=0):
    rng = np.random.default_rng(seed)
    t = np.arange(int(seconds * FS)) / FS
    tone = 0.15 * np.sin(2 * np.pi * 220 * t) + 0.05 * np.sin(2 * np.pi * 1800 * t)
    return tone + 0.02 * rng.standard_normal(t.size)


def test_erb_round_trip():
    assert loudcomp.erb_number(1000.0) == pytest.approx(15.621449713970488, abs=1e-12)
    assert loudcomp.erb_to_frequency(loudcomp.erb_number(440.0)) == pytest.approx(
        440.0, abs=1e-6
    )
    assert loudcomp.erb_bandwidth(1000.0) == pytest.approx(132.639, abs=1e-9)


def test_audiogram_and_validation():
    audiogram = loudcomp.Audiogram([250.0, 1000.0, 4000.0], [10.0, 30.0, 60.0])
    assert audiogram.hl_at(1000.0) == 30.0
    assert audiogram.ohc_fraction == 0.9
    with pytest.raises(ValueError):
        loudcomp.Audiogram([1000.0, 250.0], [0.0, 0.0])
    with pytest.raises(OSError):
        loudcomp.Audiogram.load("/nonexistent/audiogram.json")


def test_zero_loss_table_is_identity():
    audiogram = loudcomp.Audiogram([250.0, 8000.0], [0.0, 0.0])
    table = loudcomp.build_table(audiogram)
    assert table.bin_count == 513
    assert table.lookup(1000.0, 65.0) == 0.0

    x = speechish(0.5)
    y = loudcomp.process(x, FS, table)
    assert y.shape == x.shape
    err = np.sqrt(np.mean((y - x) ** 2) / np.mean(x**2))
    assert err < 1e-6


def test_lossy_table_amplifies():
    audiogram = loudcomp.Audiogram([250.0, 8000.0], [40.0, 40.0])
    table = loudcomp.build_table(audiogram)
    assert table.lookup(4000.0, 40.0) > 0.0


def test_loudness_shrinks_with_loss():
    x = speechish(0.5)
    normal = loudcomp.total_loudness(x, FS)
    impaired_ear = loudcomp.EarModel.impaired(
        loudcomp.Audiogram([250.0, 8000.0], [50.0, 50.0])
    )
    impaired = loudcomp.total_loudness(x, FS, ear=impaired_ear)
    assert 0.0 < impaired < normal


def test_stoi_and_resample():
    x = speechish(1.0, seed=3)
    assert loudcomp.stoi(x, x, FS) == pytest.approx(1.0, abs=1e-3)

    same = loudcomp.resample(x, FS, FS)
    np.testing.assert_array_equal(same, x)
    down = loudcomp.resample(x, FS, 10000.0)
    assert down.size == int(x.size * 10000 // 22050)


def test_spectrum_and_noise():
    x = speechish(2.0, seed=4)
    spectrum = loudcomp.third_octave_spectrum(x, FS)
    assert len(spectrum.center_hz) == 23
    noise = loudcomp.speech_shaped_noise(spectrum, 1.0, FS)
    assert noise.size == int(FS)


def test_match_loudness_recovers_gain():
    x = speechish(1.0, seed=5)
    gain = loudcomp.match_loudness(x, x * 10 ** (6.0 / 20.0), FS)
    assert gain == pytest.approx(6.0, abs=0.1)


def test_wav_round_trip(tmp_path):
    x = speechish(0.25, seed=6)
    path = str(tmp_path / "clip.wav")
    clipped, peak = loudcomp.write_wav(path, x, FS)
    assert clipped == 0
    assert peak == pytest.approx(np.max(np.abs(x)))
    samples, rate = loudcomp.read_wav(path)
    assert rate == FS
    np.testing.assert_allclose(samples, x.astype(np.float32), atol=0)
