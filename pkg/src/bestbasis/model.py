"""Gaussian source model: seeded sampling and application of linear maps.

All randomness comes from counter-based Philox streams keyed by
``(root_seed, stream_id)``.  Batches are generated in fixed-size chunks,
chunk ``c`` drawing from counter block ``c * 2**64``, so a batch is a pure
function of ``(spec, n, seed)`` no matter who generates which chunk first.
Normals are produced by the inverse Gaussian CDF applied to 52-bit
open-interval uniforms; this single, documented transform is what makes
archived results byte-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from numpy.random import Philox
from scipy.special import ndtri

from .errors import ValidationError

if TYPE_CHECKING:
    from .orthogonal import LinearMap

_MASK64 = (1 << 64) - 1

#: Rows per generation chunk; part of the reproducibility contract.
CHUNK_ROWS = 1 << 16


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


@dataclass(frozen=True)
class SeedSpec:
    """Names one reproducible random stream.

    Identical ``(root_seed, stream_id)`` pairs always produce identical
    sample sequences; distinct stream ids give statistically independent
    streams (they key independent Philox generators).
    """

    root_seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("root_seed", "stream_id"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or not 0 <= int(v) <= _MASK64:
                raise ValidationError(f"{name} must be an unsigned 64-bit integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    def child(self, *indices: int) -> "SeedSpec":
        """Derive an independent substream, deterministically in the indices."""
        h = self.stream_id
        for ix in indices:
            h = _splitmix64(h ^ _splitmix64(int(ix) & _MASK64))
        return SeedSpec(self.root_seed, h)

    def to_dict(self) -> dict:
        return {"seed": self.root_seed, "stream": self.stream_id}

    @classmethod
    def from_dict(cls, d: dict) -> "SeedSpec":
        return cls(int(d["seed"]), int(d.get("stream", 0)))


@dataclass(frozen=True)
class VarianceSpec:
    """Descending per-component variances of the independent Gaussian source."""

    variances: np.ndarray

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.variances, dtype=np.float64))
        if v.ndim != 1 or v.size < 1:
            raise ValidationError("variances must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(v)):
            raise ValidationError("variances must be finite")
        if np.any(v <= 0.0):
            raise ValidationError("variances must be strictly positive")
        if np.any(np.diff(v) > 0.0):
            raise ValidationError("variances must be sorted in descending order")
        v.setflags(write=False)
        object.__setattr__(self, "variances", v)

    @property
    def dim(self) -> int:
        return int(self.variances.size)

    def total(self) -> float:
        return float(self.variances.sum())


@dataclass(frozen=True)
class SampleBatch:
    """Independent draws of the source, row-major: one row per draw."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValidationError("sample values must be a 2-D (rows x dim) array")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_rows(self) -> int:
        return int(self.values.shape[0])

    @property
    def dim(self) -> int:
        return int(self.values.shape[1])


def chunk_layout(n: int) -> list[tuple[int, int]]:
    """``(chunk_index, rows)`` pairs covering ``n`` rows; pure in ``n``."""
    if n < 1:
        raise ValidationError("empty batch: need at least one sample row")
    n = int(n)
    n_chunks = (n + CHUNK_ROWS - 1) // CHUNK_ROWS
    return [(c, min(CHUNK_ROWS, n - c * CHUNK_ROWS)) for c in range(n_chunks)]


def _uniforms(seed: SeedSpec, chunk_index: int, count: int) -> np.ndarray:
    # 52-bit uniforms strictly inside (0, 1): the +0.5 offset is exact in
    # binary64 and keeps ndtri finite at both ends.
    bg = Philox(key=[seed.root_seed, seed.stream_id], counter=[0, chunk_index, 0, 0])
    raw = bg.random_raw(count)
    return ((raw >> np.uint64(12)).astype(np.float64) + 0.5) * 2.0**-52


def standard_normals(count: int, seed: SeedSpec, chunk_index: int = 0) -> np.ndarray:
    """Flat array of standard normals from one counter chunk of the stream."""
    if count < 1:
        raise ValidationError("need at least one draw")
    return ndtri(_uniforms(seed, chunk_index, int(count)))


def sample_chunk(spec: VarianceSpec, seed: SeedSpec, chunk_index: int, rows: int) -> np.ndarray:
    """One chunk of source draws, shape ``(rows, dim)``.

    Deterministic in all arguments and independent of any other chunk, so
    chunks may be generated concurrently and in any order.
    """
    z = standard_normals(rows * spec.dim, seed, chunk_index).reshape(rows, spec.dim)
    z *= np.sqrt(spec.variances)
    return z


def sample_source(spec: VarianceSpec, n: int, seed: SeedSpec) -> SampleBatch:
    """Draw ``n`` independent rows of the source vector.

    Row ``r``, column ``i`` is a zero-mean Gaussian with variance
    ``spec.variances[i]``, fully determined by ``seed``.
    """
    parts = [sample_chunk(spec, seed, c, rows) for c, rows in chunk_layout(n)]
    return SampleBatch(parts[0] if len(parts) == 1 else np.vstack(parts))


def apply_map(linear_map: "LinearMap", batch: SampleBatch) -> SampleBatch:
    """Apply a square map to every draw: output row = map @ input row."""
    if linear_map.dim != batch.dim:
        raise ValidationError(
            f"map dimension {linear_map.dim} does not match batch dimension {batch.dim}"
        )
    return SampleBatch(batch.values @ linear_map.entries.T)
