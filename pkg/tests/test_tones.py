import wave

import numpy as np
import pytest

from projclust import golden, tones
from projclust.errors import (
    BadMagic,
    MissingFrame,
    NyquistError,
    UnsupportedEncoding,
    UnsupportedSampleRate,
)


def write_pcm(path, samples, rate=44100, channels=1, width=2):
    with wave.open(str(path), "wb") as w:
        w.setnchannels(channels)
        w.setsampwidth(width)
        w.setframerate(rate)
        w.writeframes(np.asarray(samples).astype("<i2" if width == 2 else "u1").tobytes())


# -- tone table --------------------------------------------------------------

def test_fundamental_table_endpoints():
    expected = {"C2": 65, "C#2": 69, "D2": 73, "A#5": 932, "B5": 988,
                "A2": 110, "A3": 220, "A4": 440, "D3": 147}
    for name, k in expected.items():
        assert tones.tone_by_name(name).k == k
    ks = [t.k for t in tones.tone_table()]
    assert len(ks) == 48 and ks == sorted(ks) and len(set(ks)) == 48
    assert ks[:3] == [65, 69, 73] and ks[-2:] == [932, 988]


def test_fundamental_matches_direct_formula():
    for t in tones.tone_table():
        s = 12 * (t.octave - 4) + tones.PITCH_CLASSES.index(t.pitch_class) - 9
        assert t.k == round(440 * 2 ** (s / 12))


# -- reference set -----------------------------------------------------------

def test_reference_set_examples():
    R2 = tones.reference_set(2)
    a2 = R2.vector("A2")
    assert np.flatnonzero(a2).tolist() == [109, 219, 329]
    assert np.allclose(a2[[109, 219, 329]], 1 / np.sqrt(3))
    assert np.flatnonzero(R2.vector("D3")).tolist() == [146, 293, 440]
    a4 = tones.reference_set(0).vector("A4")
    assert np.flatnonzero(a4).tolist() == [439] and a4[439] == 1


@pytest.mark.parametrize("n_h", [0, 1, 2, 4, 21])
def test_reference_set_invariants(n_h):
    R = tones.reference_set(n_h)
    assert R.vectors.shape == (48, tones.N_BINS)
    assert np.allclose(np.linalg.norm(R.vectors, axis=1), 1, atol=1e-12)
    assert all(np.count_nonzero(v) == n_h + 1 for v in R.vectors)
    G = R.vectors @ R.vectors.T
    off = G[~np.eye(48, dtype=bool)]
    assert off.min() >= 0 and off.max() < 1


def test_reference_set_nyquist():
    with pytest.raises(NyquistError):
        tones.reference_set(22)


# -- WAV ---------------------------------------------------------------------

def test_load_wav_zero_file(tmp_path):
    p = tmp_path / "zero.wav"
    write_pcm(p, np.zeros(44100, dtype=np.int16))
    t = tones.load_wav(p)
    assert t.samples.shape == (44100,) and not np.any(t.samples)


def test_load_wav_pads_short_file(tmp_path):
    p = tmp_path / "short.wav"
    write_pcm(p, np.full(22050, 16384, dtype=np.int16))
    s = tones.load_wav(p).samples
    assert np.all(s[:22050] == 0.5) and not np.any(s[22050:])


def test_load_wav_truncates_long_file(tmp_path):
    p = tmp_path / "long.wav"
    data = np.concatenate([np.full(44100, 100), np.full(1000, -100)]).astype(np.int16)
    write_pcm(p, data)
    assert np.all(tones.load_wav(p).samples == 100 / 32768)


def test_load_wav_averages_stereo(tmp_path):
    p = tmp_path / "stereo.wav"
    inter = np.empty(2 * 44100, dtype=np.int16)
    inter[0::2], inter[1::2] = 1000, 3000
    write_pcm(p, inter, channels=2)
    assert np.all(tones.load_wav(p).samples == 2000 / 32768)


def test_load_wav_errors(tmp_path):
    p = tmp_path / "rate.wav"
    write_pcm(p, np.zeros(48000, dtype=np.int16), rate=48000)
    with pytest.raises(UnsupportedSampleRate):
        tones.load_wav(p)
    p = tmp_path / "bad.wav"
    p.write_bytes(b"OggS" + bytes(100))
    with pytest.raises(BadMagic):
        tones.load_wav(p)
    p = tmp_path / "8bit.wav"
    write_pcm(p, np.full(100, 128), width=1)
    with pytest.raises(UnsupportedEncoding):
        tones.load_wav(p)
    p = tmp_path / "float.wav"
    body = bytearray(open(tmp_path / "rate.wav", "rb").read())
    body[20:22] = (3).to_bytes(2, "little")  # IEEE float format tag
    p.write_bytes(bytes(body))
    with pytest.raises(UnsupportedEncoding):
        tones.load_wav(p)


def test_wav_roundtrip(tmp_path):
    sig = tones.synth_tone(440, [1])
    p = tmp_path / "a4.wav"
    tones.write_wav(p, sig)
    back = tones.load_wav(p)
    assert np.max(np.abs(back.samples - sig.samples)) <= 0.5 / 32768 + 1e-12


# -- spectrum ----------------------------------------------------------------

def test_spectrum_of_pure_sinusoid():
    i = np.arange(44100)
    t = tones.TimeSignal(np.sin(2 * np.pi * 110 * i / 44100))
    spec = tones.magnitude_spectrum(t, normalize=False)
    assert int(np.argmax(spec.magnitudes)) + 1 == 110
    assert spec.magnitudes[109] == pytest.approx(44100 / 2, rel=1e-9)


def test_spectrum_of_zero_signal():
    spec = tones.magnitude_spectrum(tones.TimeSignal(np.zeros(44100)), normalize=False)
    assert not np.any(spec.magnitudes) and spec.magnitudes.size == 22050


def test_spectrum_matches_direct_dft(rng):
    x = rng.uniform(-1, 1, 44100)
    spec = tones.magnitude_spectrum(tones.TimeSignal(x), normalize=False)
    k = np.arange(44100)
    for n in [1, 2, 3, 110, 997, 4410, 12345, 22049, 22050] + rng.integers(1, 22051, 40).tolist():
        direct = abs(np.sum(x * np.exp(-2j * np.pi * k * n / 44100)))
        assert spec.magnitudes[n - 1] == pytest.approx(direct, rel=1e-6, abs=1e-9)


def test_parseval(rng):
    x = rng.uniform(-1, 1, 44100)
    full = np.fft.fft(x)
    assert np.sum(np.abs(full) ** 2) == pytest.approx(44100 * np.sum(x ** 2), rel=1e-10)
    # the kept half plus DC and its mirror reproduce the same energy
    mags = tones.magnitude_spectrum(tones.TimeSignal(x), normalize=False).magnitudes
    energy = abs(np.sum(x)) ** 2 + 2 * np.sum(mags[:-1] ** 2) + mags[-1] ** 2
    assert energy == pytest.approx(44100 * np.sum(x ** 2), rel=1e-10)


def test_normalized_spectrum_has_unit_norm():
    spec = tones.magnitude_spectrum(tones.synth_tone(220, [1, 0.5]))
    assert spec.normalized and np.linalg.norm(spec.magnitudes) == pytest.approx(1, abs=1e-10)
    assert np.all(spec.magnitudes >= 0)


def test_spectrum_csv_export():
    spec = tones.Spectrum(np.arange(22050, dtype=float))
    lines = spec.to_csv().splitlines()
    assert lines[0] == "bin,magnitude" and lines[1] == "1,0.0" and lines[-1] == "22050,22049.0"


# -- synthesis ---------------------------------------------------------------

def test_synth_dominant_second_harmonic():
    spec = tones.magnitude_spectrum(tones.synth_tone(110, [1, 2, 1]), normalize=False)
    assert int(np.argmax(spec.magnitudes)) + 1 == 220


def test_synth_pure_a4():
    s = tones.synth_tone(440, [1]).samples
    i = np.arange(44100)
    assert np.allclose(s, 0.9 * np.sin(2 * np.pi * 440 * i / 44100) / np.max(np.abs(np.sin(2 * np.pi * 440 * i / 44100))))
    assert np.max(np.abs(s)) == pytest.approx(0.9)


def test_synth_nyquist():
    with pytest.raises(NyquistError):
        tones.synth_tone(11026, [1, 1])


# -- noise -------------------------------------------------------------------

def test_noise_amplitude_zero_is_identity():
    f = tones.Spectrum(tones.reference_set(2).vector("A2").copy())
    assert np.array_equal(tones.add_spectral_noise(f, amplitude=0.0, seed=1).magnitudes, f.magnitudes)


def test_noise_is_deterministic():
    f = tones.Spectrum(np.zeros(22050))
    a = tones.add_spectral_noise(f, seed=42).magnitudes
    b = tones.add_spectral_noise(f, seed=42).magnitudes
    assert np.array_equal(a, b)
    assert not np.array_equal(a, tones.add_spectral_noise(f, seed=43).magnitudes)


def test_noise_bounds_per_bin():
    base = tones.reference_set(2).vector("A2").copy()
    out = tones.add_spectral_noise(tones.Spectrum(base), 1000, 0.1, seed=7)
    delta = out.magnitudes - base
    assert np.all(delta[:1000] >= 0) and np.all(delta[:1000] <= 0.1)
    assert not np.any(delta[1000:])
    assert not out.normalized


def test_noise_needs_seed():
    with pytest.raises(TypeError):
        tones.add_spectral_noise(tones.Spectrum(np.zeros(22050)))


# -- recognition -------------------------------------------------------------

def brute_force_rank(f, refset, measure_fn):
    """Independent per-tone loop; returns tone names ordered by (value, k)."""
    vals = []
    for t, v in zip(refset.tones, refset.vectors):
        vals.append((round(measure_fn(f, v), 12), t.k, t.name))
    return [name for _, _, name in sorted(vals)]


def test_gaussian_fixture_nh0_recognizes_a3():
    f = golden.gaussian_tone_fixture()
    for measure in ("F", "sqnorm"):
        top, value = tones.recognize(f, tones.reference_set(0), measure)[0]
        assert top.name == "A3"
    top, value = tones.recognize(f, tones.reference_set(0), "F")[0]
    assert value == pytest.approx(1 - 2 / np.sqrt(6), abs=1e-9)


def test_gaussian_fixture_nh2_recognizes_a2_brute_force():
    f = golden.gaussian_tone_fixture()
    R = tones.reference_set(2)
    oracle = brute_force_rank(f, R, lambda a, b: float(np.sum((a - b) ** 2)))
    assert oracle[0] == "A2"
    assert tones.recognize(f, R, "sqnorm")[0][0].name == "A2"


def test_exact_reference_recognized_with_zero_value():
    R = tones.reference_set(2)
    top, value = tones.recognize(R.vector("C4"), R, "sqnorm")[0]
    assert top.name == "C4" and value == 0


def test_sqnorm_and_F_rankings_coincide_on_normalized_input(rng):
    R = tones.reference_set(2)
    for _ in range(5):
        f = np.abs(rng.standard_normal(22050)) * (rng.uniform(size=22050) < 0.01)
        f[R.vector("E3") > 0] += 3
        f /= np.linalg.norm(f)
        sq = tones.measure_values(f, R, "sqnorm")
        F = tones.measure_values(f, R, "F")
        assert np.allclose(sq, 2 * F, atol=1e-12)
        assert [t.name for t, _ in tones.recognize(f, R, "sqnorm")] == \
               [t.name for t, _ in tones.recognize(f, R, "F")]


def test_recognition_scale_invariant_after_normalization():
    spec = tones.magnitude_spectrum(tones.synth_tone(196, [1, 0.6, 0.3]), normalize=False)
    R = tones.reference_set(2)
    a = tones.recognize(spec.normalize(), R, "sqnorm")[0][0]
    b = tones.recognize(tones.Spectrum(spec.magnitudes * 37.5).normalize(), R, "sqnorm")[0][0]
    assert a == b and a.name == "G3"


def test_recognize_frame_measures():
    R = tones.reference_set(2)
    f = R.vector("D3")
    for measure in ("delta", "nabla"):
        top, value = tones.recognize(f, R, measure)[0]
        assert top.name == "D3" and value == 0
    with pytest.raises(MissingFrame):
        tones.recognize(f, R, "delta", frame=None)
    with pytest.raises(ValueError):
        tones.recognize(f, R, "cosine")


def test_rank_breaks_ties_by_fundamental():
    T = tones.tone_table()
    ranked = tones.rank([T[5], T[2], T[9]], [0.5, 0.5 + 1e-14, 0.1])
    assert [t.k for t, _ in ranked] == [T[9].k, T[2].k, T[5].k]


def test_pipeline_is_deterministic(tmp_path):
    p = tmp_path / "g.wav"
    tones.write_wav(p, tones.synth_tone(98, [1, 1.5, 0.7]))
    a = tones.recognize_wav(p, 2, "delta", noise_bins=1000, seed=5)
    b = tones.recognize_wav(p, 2, "delta", noise_bins=1000, seed=5)
    assert a == b
