import struct

import numpy as np
import pytest

from audiojigsaw.audio_io import (
    AudioBuffer,
    VadConfig,
    WavFormatError,
    add_awgn,
    read_wav,
    synthesize_speechlike,
    vad_trim,
    write_wav,
)


def test_buffer_validation():
    with pytest.raises(ValueError):
        AudioBuffer(np.zeros((2, 3)), 8000)
    with pytest.raises(ValueError):
        AudioBuffer(np.array([0.0, np.nan]), 8000)
    with pytest.raises(ValueError):
        AudioBuffer(np.zeros(4), 0)


def test_buffer_samples_read_only():
    buf = AudioBuffer(np.zeros(8), 8000)
    with pytest.raises(ValueError):
        buf.samples[0] = 1.0


def test_wav_known_sample_values(tmp_path):
    """Full scale maps onto the int16 rails: 1.0 clips to 32767, -1.0 is exact."""
    path = tmp_path / "levels.wav"
    write_wav(path, AudioBuffer(np.array([1.0, 0.0, -1.0, 0.5, -1.5]), 8000))
    raw = path.read_bytes()
    assert struct.unpack("<5h", raw[44:54]) == (32767, 0, -32768, 16384, -32768)


def test_wav_header_layout(tmp_path):
    path = tmp_path / "header.wav"
    write_wav(path, AudioBuffer(np.zeros(10), 44100))
    raw = path.read_bytes()
    assert raw[:4] == b"RIFF" and raw[8:12] == b"WAVE" and raw[12:16] == b"fmt "
    fmt_tag, channels, rate = struct.unpack("<HHI", raw[20:28])
    (bits,) = struct.unpack("<H", raw[34:36])
    assert (fmt_tag, channels, rate, bits) == (1, 1, 44100, 16)
    assert raw[36:40] == b"data"
    assert struct.unpack("<I", raw[40:44])[0] == 20


def test_wav_round_trip_error_bound(tmp_path):
    rng = np.random.Generator(np.random.PCG64(7))
    for trial in range(5):
        signal = rng.uniform(-0.99, 0.99, size=400)
        path = tmp_path / f"rt{trial}.wav"
        write_wav(path, AudioBuffer(signal, 8000))
        back = read_wav(path)
        assert back.sample_rate == 8000
        assert np.max(np.abs(back.samples - signal)) <= 1.0 / 32768.0


def test_wav_int_levels_survive_exactly(tmp_path):
    """Values already on the int16 grid reproduce bit for bit."""
    grid = np.array([-32768, -12345, -1, 0, 1, 99, 32767]) / 32768.0
    path = tmp_path / "grid.wav"
    write_wav(path, AudioBuffer(grid, 8000))
    np.testing.assert_array_equal(read_wav(path).samples, grid)


def test_read_wav_rejects_garbage(tmp_path):
    path = tmp_path / "not.wav"
    path.write_bytes(b"certainly not RIFF data")
    with pytest.raises(WavFormatError):
        read_wav(path)


def test_read_wav_rejects_stereo(tmp_path):
    import wave

    path = tmp_path / "stereo.wav"
    with wave.open(str(path), "wb") as handle:
        handle.setnchannels(2)
        handle.setsampwidth(2)
        handle.setframerate(8000)
        handle.writeframes(b"\x00\x00" * 64)
    with pytest.raises(WavFormatError):
        read_wav(path)


def test_read_wav_rejects_8bit(tmp_path):
    import wave

    path = tmp_path / "w8.wav"
    with wave.open(str(path), "wb") as handle:
        handle.setnchannels(1)
        handle.setsampwidth(1)
        handle.setframerate(8000)
        handle.writeframes(b"\x80" * 64)
    with pytest.raises(WavFormatError):
        read_wav(path)


def test_write_wav_refuses_empty(tmp_path):
    with pytest.raises(ValueError):
        write_wav(tmp_path / "e.wav", AudioBuffer(np.empty(0), 8000))


def test_vad_trim_removes_silence():
    rate = 8000
    tone = 0.5 * np.sin(2.0 * np.pi * 440.0 * np.arange(rate) / rate)
    padded = np.concatenate([np.zeros(rate // 2), tone, np.zeros(rate // 4)])
    trimmed = vad_trim(AudioBuffer(padded, rate))
    # 20 ms windows, so the kept span is the tone rounded to window borders
    assert abs(len(trimmed) - len(tone)) <= 2 * 160
    assert np.mean(trimmed.samples**2) > 0.9 * np.mean(tone**2)


def test_vad_trim_all_silence_comes_back_empty():
    trimmed = vad_trim(AudioBuffer(np.zeros(4000), 8000))
    assert len(trimmed) == 0


def test_vad_config_validation():
    with pytest.raises(ValueError):
        VadConfig(window_ms=0.0)
    with pytest.raises(ValueError):
        VadConfig(threshold_ratio=1.5)


def test_awgn_hits_target_snr():
    rng = np.random.Generator(np.random.PCG64(3))
    clean = AudioBuffer(rng.standard_normal(80000) * 0.3, 8000)
    for snr_db in (30.0, 20.0, 10.0):
        noisy = add_awgn(clean, snr_db, seed=11)
        noise = noisy.samples - clean.samples
        measured = 10.0 * np.log10(np.mean(clean.samples**2) / np.mean(noise**2))
        assert abs(measured - snr_db) < 0.2


def test_awgn_deterministic_and_infinite_snr_is_identity():
    buf = AudioBuffer(np.sin(np.arange(1000) * 0.1), 8000)
    a = add_awgn(buf, 15.0, seed=5)
    b = add_awgn(buf, 15.0, seed=5)
    np.testing.assert_array_equal(a.samples, b.samples)
    assert add_awgn(buf, np.inf, seed=5) is buf
    with pytest.raises(ValueError):
        add_awgn(AudioBuffer(np.zeros(10), 8000), 20.0, seed=0)


def test_synthesize_deterministic():
    a = synthesize_speechlike(1.0, seed=42)
    b = synthesize_speechlike(1.0, seed=42)
    np.testing.assert_array_equal(a.samples, b.samples)
    c = synthesize_speechlike(1.0, seed=43)
    assert not np.array_equal(a.samples, c.samples)


def test_synthesize_basic_shape():
    buf = synthesize_speechlike(2.5, seed=0, sample_rate=8000)
    assert len(buf) == 20000
    assert buf.sample_rate == 8000
    assert abs(np.max(np.abs(buf.samples)) - 0.9) < 1e-9


def test_synthesize_is_strongly_correlated():
    """Resonant filtering leaves heavy sample-to-sample correlation,
    which is what gives the border predictor something to learn."""
    for seed in (1, 2, 3):
        x = synthesize_speechlike(4.0, seed=seed).samples
        r1 = np.corrcoef(x[:-1], x[1:])[0, 1]
        assert r1 > 0.8


def test_synthesize_has_quiet_and_loud_stretches():
    x = synthesize_speechlike(8.0, seed=9).samples
    win = 400
    rms = np.sqrt(np.mean(x[: len(x) // win * win].reshape(-1, win) ** 2, axis=1))
    assert rms.max() > 8.0 * rms.min()


def test_synthesize_rejects_bad_arguments():
    with pytest.raises(ValueError):
        synthesize_speechlike(0.0, seed=1)
    with pytest.raises(ValueError):
        synthesize_speechlike(1.0, seed=1, sample_rate=0)
