"""Tone recognition from one-second 44.1 kHz recordings.

A recording is reduced to its DFT magnitude spectrum over bins 1..22050
(bin ``n`` is ``n`` Hz for a one-second window) and compared against 48
reference tones, octaves 2 to 5, each carrying equal weight on its
fundamental and the first ``n_h`` harmonics.
"""

from __future__ import annotations

import wave
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import frames as _frames
from .core import as_signal
from .errors import (
    BadMagic,
    DimensionMismatch,
    InvalidSignal,
    MissingFrame,
    NyquistError,
    UnsupportedEncoding,
    UnsupportedSampleRate,
)

SAMPLE_RATE = 44100
N_SAMPLES = 44100
N_BINS = N_SAMPLES // 2
PCM_SCALE = 32768.0
SYNTH_PEAK = 0.9

PITCH_CLASSES = ("C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B")
OCTAVES = (2, 3, 4, 5)
MEASURES = ("sqnorm", "F", "delta", "nabla")
# values closer than this are ranked as ties, broken by ascending fundamental
TIE_TOL = 1e-12


@dataclass(frozen=True)
class TimeSignal:
    samples: np.ndarray
    sample_rate: int = SAMPLE_RATE

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.float64)
        if s.shape != (N_SAMPLES,):
            raise InvalidSignal(f"need exactly {N_SAMPLES} samples, got {s.shape}")
        if self.sample_rate != SAMPLE_RATE:
            raise UnsupportedSampleRate(f"unsupported sample rate {self.sample_rate}")
        if not np.all(np.isfinite(s)) or np.max(np.abs(s)) > 1.0:
            raise InvalidSignal("samples must be finite and lie in [-1, 1]")
        object.__setattr__(self, "samples", s)


@dataclass(frozen=True)
class Spectrum:
    """Magnitudes of bins 1..22050; ``magnitudes[n - 1]`` is bin ``n``."""

    magnitudes: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        m = as_signal(self.magnitudes, "magnitudes")
        if m.size != N_BINS:
            raise DimensionMismatch(f"spectrum needs {N_BINS} bins, got {m.size}")
        object.__setattr__(self, "magnitudes", m)

    def normalize(self) -> "Spectrum":
        nrm = np.linalg.norm(self.magnitudes)
        if nrm == 0:
            return Spectrum(self.magnitudes.copy(), False)
        return Spectrum(self.magnitudes / nrm, True)

    def to_csv(self) -> str:
        lines = ["bin,magnitude"]
        lines += [f"{n},{v!r}" for n, v in enumerate(self.magnitudes.tolist(), start=1)]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, order=True)
class ToneId:
    k: int
    pitch_class: str
    octave: int

    @property
    def name(self) -> str:
        return f"{self.pitch_class}{self.octave}"

    def __str__(self):
        return self.name


def fundamental(pitch_class: str, octave: int) -> int:
    """Nearest integer to ``440 * 2**(s/12)``, ``s`` the semitone offset from A4."""
    s = 12 * (octave - 4) + PITCH_CLASSES.index(pitch_class) - PITCH_CLASSES.index("A")
    return int(np.floor(440.0 * 2.0 ** (s / 12.0) + 0.5))


@lru_cache(maxsize=None)
def tone_table() -> tuple[ToneId, ...]:
    return tuple(ToneId(fundamental(pc, o), pc, o) for o in OCTAVES for pc in PITCH_CLASSES)


def tone_by_name(name: str) -> ToneId:
    for t in tone_table():
        if t.name == name:
            return t
    raise KeyError(f"unknown tone {name!r}")


@dataclass(frozen=True, eq=False)
class ReferenceToneSet:
    n_h: int
    tones: tuple[ToneId, ...]
    vectors: np.ndarray  # (48, N_BINS), rows indexed like ``tones``

    def vector(self, name: str) -> np.ndarray:
        i = [t.name for t in self.tones].index(name)
        return self.vectors[i]


@lru_cache(maxsize=8)
def reference_set(n_h: int) -> ReferenceToneSet:
    if n_h < 0:
        raise ValueError("harmonic count must be >= 0")
    tones = tone_table()
    top = (n_h + 1) * max(t.k for t in tones)
    if top > N_BINS:
        raise NyquistError(f"harmonic at {top} Hz exceeds the {N_BINS} Hz bin")
    V = np.zeros((len(tones), N_BINS))
    w = 1.0 / np.sqrt(n_h + 1)
    for i, t in enumerate(tones):
        V[i, t.k * np.arange(1, n_h + 2) - 1] = w
    V.setflags(write=False)
    return ReferenceToneSet(n_h, tones, V)


def load_wav(path) -> TimeSignal:
    """Read a 16-bit PCM RIFF/WAVE file at 44100 Hz into a one-second mono signal.

    Stereo is averaged; shorter files are zero-padded, longer ones truncated.
    """
    with open(path, "rb") as fh:
        head = fh.read(12)
    if len(head) < 12 or head[:4] != b"RIFF" or head[8:12] != b"WAVE":
        raise BadMagic(f"{path}: not a RIFF/WAVE file")
    try:
        with wave.open(str(path), "rb") as w:
            channels = w.getnchannels()
            width = w.getsampwidth()
            rate = w.getframerate()
            if width != 2:
                raise UnsupportedEncoding(f"{path}: {8 * width}-bit samples, need 16-bit PCM")
            if channels not in (1, 2):
                raise UnsupportedEncoding(f"{path}: {channels} channels, need 1 or 2")
            if rate != SAMPLE_RATE:
                raise UnsupportedSampleRate(f"{path}: unsupported sample rate {rate} Hz")
            raw = w.readframes(N_SAMPLES)
    except wave.Error as exc:
        raise UnsupportedEncoding(f"{path}: {exc}") from exc
    pcm = np.frombuffer(raw, dtype="<i2").astype(np.float64) / PCM_SCALE
    pcm = pcm[: (pcm.size // channels) * channels].reshape(-1, channels).mean(axis=1)
    out = np.zeros(N_SAMPLES)
    out[: pcm.size] = pcm[:N_SAMPLES]
    return TimeSignal(out)


def write_wav(path, signal: TimeSignal) -> None:
    """Write mono 16-bit PCM at 44100 Hz."""
    pcm = np.clip(np.round(signal.samples * PCM_SCALE), -32768, 32767).astype("<i2")
    with wave.open(str(path), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(SAMPLE_RATE)
        w.writeframes(pcm.tobytes())


def magnitude_spectrum(t: TimeSignal, normalize: bool = True) -> Spectrum:
    """|DFT| of the 44100-sample signal at bins 1..22050 (DC dropped)."""
    mags = np.abs(np.fft.rfft(t.samples))[1:N_BINS + 1]
    spec = Spectrum(mags, False)
    return spec.normalize() if normalize else spec


def synth_tone(k_t, harmonic_amplitudes) -> TimeSignal:
    """``sum_h a_h sin(2 pi h k_t i / 44100)`` peak-normalized to 0.9."""
    amps = np.asarray(harmonic_amplitudes, dtype=np.float64)
    if amps.ndim != 1 or amps.size == 0:
        raise ValueError("need at least one harmonic amplitude")
    if k_t <= 0:
        raise ValueError("fundamental must be positive")
    if amps.size * k_t > N_BINS:
        raise NyquistError(f"harmonic {amps.size} of {k_t} Hz exceeds {N_BINS} Hz")
    i = np.arange(N_SAMPLES)
    x = np.zeros(N_SAMPLES)
    for h, a in enumerate(amps, start=1):
        if a:
            x += a * np.sin(2.0 * np.pi * h * k_t * i / SAMPLE_RATE)
    peak = np.max(np.abs(x))
    if peak > 0:
        x *= SYNTH_PEAK / peak
    return TimeSignal(x)


def add_spectral_noise(f: Spectrum, count: int = 1000, amplitude: float = 0.1, *, seed) -> Spectrum:
    """Add i.i.d. U[0, amplitude] to bins 1..count; the result is not renormalized."""
    if not 0 <= count <= N_BINS:
        raise ValueError(f"count must lie in [0, {N_BINS}]")
    if amplitude < 0:
        raise ValueError("amplitude must be >= 0")
    rng = np.random.default_rng(seed)
    out = f.magnitudes.copy()
    out[:count] += rng.uniform(0.0, amplitude, size=count)
    return Spectrum(out, normalized=False)


@lru_cache(maxsize=1)
def spectral_frame() -> _frames.Frame:
    """The 44100-vector tight frame ``e_n, e_n / 2`` over the spectral bins."""
    return _frames.scaled_pair_frame(N_BINS, 0.5)


_DEFAULT = object()


def measure_values(f, refset: ReferenceToneSet, measure: str, frame=_DEFAULT) -> np.ndarray:
    """The chosen measure between ``f`` and each reference tone, in table order."""
    x = f.magnitudes if isinstance(f, Spectrum) else as_signal(f)
    if x.size != N_BINS:
        raise DimensionMismatch(f"spectrum needs {N_BINS} bins, got {x.size}")
    R = refset.vectors
    if measure == "sqnorm":
        diff = R - x
        return np.einsum("ij,ij->i", diff, diff)
    if measure == "F":
        vals = np.linalg.norm(x) * np.linalg.norm(R, axis=1) - np.abs(R @ x)
        return np.maximum(vals, 0.0)
    if measure in ("delta", "nabla"):
        if frame is _DEFAULT:
            frame = spectral_frame()
        if frame is None:
            raise MissingFrame(f"measure {measure!r} needs a frame")
        reps = [_frames.dissimilarity_report(frame, x, r) for r in R]
        return np.array([r.delta if measure == "delta" else r.nabla for r in reps])
    raise ValueError(f"unknown measure {measure!r}; use one of {MEASURES}")


def rank(tones, values, tie_tol: float = TIE_TOL):
    """Sort ascending by value; values within ``tie_tol`` order by fundamental."""
    order = sorted(range(len(tones)), key=lambda i: (values[i], tones[i].k))
    ranked, i = [], 0
    while i < len(order):
        j = i + 1
        while j < len(order) and values[order[j]] - values[order[i]] <= tie_tol:
            j += 1
        ranked.extend(sorted(order[i:j], key=lambda k: tones[k].k))
        i = j
    return [(tones[k], float(values[k])) for k in ranked]


def recognize(f, refset: ReferenceToneSet, measure: str = "sqnorm", frame=_DEFAULT):
    """Rank all reference tones against spectrum ``f``; the first entry is the match.

    ``delta``/``nabla`` use :func:`spectral_frame` unless a frame is given;
    passing ``frame=None`` explicitly raises :class:`MissingFrame`.
    """
    values = measure_values(f, refset, measure, frame)
    return rank(refset.tones, values)


def recognize_wav(path, n_h: int = 2, measure: str = "sqnorm", noise_bins: int = 0,
                  noise_amp: float = 0.1, seed=None):
    spec = magnitude_spectrum(load_wav(path), normalize=True)
    if noise_bins:
        if seed is None:
            raise ValueError("spectral noise needs an explicit seed")
        spec = add_spectral_noise(spec, noise_bins, noise_amp, seed=seed)
    return recognize(spec, reference_set(n_h), measure)
