"""Bit extraction from sample streams.

Five extraction algorithms turn 10-bit sample streams into raw bit
streams; the von Neumann corrector then removes bias by mapping bit
pairs 10 -> 1, 01 -> 0 and discarding 00/11.

  leastsign      parity of each sample
  twoleastsign   XOR of the two lowest bits of each sample
  updown         compare every sample against the first one
  mean           compare against a running window mean (two samples
                 consumed per raw bit: one feeds the window, one is
                 compared against the ceiling of the mean)
  mixmeanupdown  XOR of the corrected mean and updown streams, run
                 through the corrector once more

Comparisons are strict: equality yields bit 0. Bit streams are numpy
uint8 arrays of 0/1 values.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from os import PathLike
from typing import Sequence

import numpy as np

from .samples import SampleTrace

ALGORITHMS = ("mean", "updown", "mixmeanupdown", "leastsign", "twoleastsign")

BITS_PER_LINE = 80


class InsufficientSamplesError(ValueError):
    """The trace is too short for the requested algorithm."""


class BitFormatError(ValueError):
    """A bit file contains something other than 0/1 and whitespace."""


def as_bit_array(bits: Sequence[int] | np.ndarray) -> np.ndarray:
    """Coerce to a uint8 array of 0/1 values, rejecting anything else."""
    arr = np.asarray(bits)
    if arr.dtype == object or not np.issubdtype(arr.dtype, np.integer):
        arr = np.asarray(bits, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("bit sequence must be one-dimensional")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("bit sequence may contain only 0 and 1")
    return arr.astype(np.uint8)


@dataclass(frozen=True)
class ExtractorConfig:
    algorithm: str
    window_k: int = 64          # mean window size; the paper-side choice is free
    apply_vn: bool = True

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.window_k < 1:
            raise ValueError("window_k must be >= 1")


def von_neumann(raw: Sequence[int] | np.ndarray) -> np.ndarray:
    """Debias a bit stream pairwise: 10 -> 1, 01 -> 0, 00/11 dropped.

    A trailing unpaired bit is discarded. For each surviving pair the
    output bit equals the pair's first element.
    """
    bits = as_bit_array(raw)
    pairs = bits[: bits.size - bits.size % 2].reshape(-1, 2)
    keep = pairs[:, 0] != pairs[:, 1]
    return pairs[keep, 0].copy()


def raw_leastsign(trace: SampleTrace) -> np.ndarray:
    """One raw bit per sample: the least significant bit."""
    return (trace.values & 1).astype(np.uint8)


def raw_twoleastsign(trace: SampleTrace) -> np.ndarray:
    """One raw bit per sample: XOR of the two least significant bits."""
    v = trace.values
    return ((v ^ (v >> 1)) & 1).astype(np.uint8)


def raw_updown(trace: SampleTrace) -> np.ndarray:
    """Compare each later sample against the first: 1 iff strictly greater."""
    if len(trace) < 2:
        raise InsufficientSamplesError("updown needs at least 2 samples")
    v = trace.values
    return (v[1:] > v[0]).astype(np.uint8)


def raw_mean(trace: SampleTrace, k: int) -> np.ndarray:
    """Window-mean comparison; floor((len - k) / 2) raw bits.

    A window of the k most recent values is seeded with the first k
    samples. Each iteration consumes two samples: the first replaces the
    oldest window entry, then the second is compared against
    ceil(window mean). The window sum is kept as an exact integer, so
    the ceiling threshold is never subject to float rounding.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = len(trace)
    if n < k + 2:
        raise InsufficientSamplesError(f"mean with k={k} needs at least {k + 2} samples")
    vals = trace.values.tolist()
    window = deque(vals[:k])
    total = sum(window)
    out = []
    i = k
    while i + 1 < n:
        total += vals[i] - window.popleft()
        window.append(vals[i])
        m = -(-total // k)          # ceil(total / k), total >= 0
        out.append(1 if vals[i + 1] > m else 0)
        i += 2
    return np.array(out, dtype=np.uint8)


def extract(trace: SampleTrace, cfg: ExtractorConfig) -> np.ndarray:
    """Run the configured algorithm, with the corrector unless disabled.

    mixmeanupdown splits the trace by alternation (even-indexed samples
    feed mean, odd-indexed feed updown) so recorded traces reproduce;
    each sub-stream is corrected, the streams are XORed up to the
    shorter length, and apply_vn controls the final correction pass.
    """
    if cfg.algorithm == "mixmeanupdown":
        mean_sub = SampleTrace(trace.values[0::2], source_label=trace.source_label)
        updown_sub = SampleTrace(trace.values[1::2], source_label=trace.source_label)
        mean_bits = von_neumann(raw_mean(mean_sub, cfg.window_k))
        updown_bits = von_neumann(raw_updown(updown_sub))
        n = min(mean_bits.size, updown_bits.size)
        mixed = mean_bits[:n] ^ updown_bits[:n]
        return von_neumann(mixed) if cfg.apply_vn else mixed

    if cfg.algorithm == "mean":
        raw = raw_mean(trace, cfg.window_k)
    elif cfg.algorithm == "updown":
        raw = raw_updown(trace)
    elif cfg.algorithm == "leastsign":
        raw = raw_leastsign(trace)
    else:
        raw = raw_twoleastsign(trace)
    return von_neumann(raw) if cfg.apply_vn else raw


def yield_ratio(trace: SampleTrace, cfg: ExtractorConfig) -> float:
    """Output bits per input sample; times the sample rate gives bits/s."""
    if len(trace) == 0:
        raise InsufficientSamplesError("empty trace")
    return extract(trace, cfg).size / len(trace)


def write_bits(bits: Sequence[int] | np.ndarray, path: str | PathLike) -> None:
    """Write a bit file: ASCII '0'/'1', 80 bits per line."""
    arr = as_bit_array(bits)
    text = "".join("1" if b else "0" for b in arr)
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(0, len(text), BITS_PER_LINE):
            fh.write(text[i : i + BITS_PER_LINE])
            fh.write("\n")


def read_bits(path: str | PathLike) -> np.ndarray:
    """Read a bit file; whitespace (including newlines) is ignored."""
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise BitFormatError(f"{path}: cannot read: {exc}") from exc
    out = []
    with fh:
        for lineno, line in enumerate(fh, 1):
            for ch in line:
                if ch == "0":
                    out.append(0)
                elif ch == "1":
                    out.append(1)
                elif not ch.isspace():
                    raise BitFormatError(
                        f"{path}: line {lineno}: invalid character {ch!r}"
                    )
    return np.array(out, dtype=np.uint8)
