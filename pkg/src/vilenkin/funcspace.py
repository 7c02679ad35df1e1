"""Step functions on the group with exact integration and L_p machinery.

A GridFunction stores one complex value per depth-N cell, indexed by
``group.point_index``.  Integration against the Haar measure and all the
L_p / weak-L_p quasi-norms are exact for such step functions.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import IO, Union

import numpy as np

from .group import GeneratorSequence

__all__ = ["GridFunction", "integrate", "lp_quasinorm", "weak_lp", "refine"]

Scalar = Union[int, float, complex]


@dataclass(frozen=True)
class GridFunction:
    """A complex step function constant on depth-N cylinders."""

    gen: GeneratorSequence
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.gen.size,):
            raise ValueError(
                f"expected {self.gen.size} cell values, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("cell values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def constant(cls, gen: GeneratorSequence, c: Scalar) -> "GridFunction":
        return cls(gen, np.full(gen.size, c, dtype=np.complex128))

    @classmethod
    def indicator(cls, gen: GeneratorSequence, indices: np.ndarray) -> "GridFunction":
        v = np.zeros(gen.size, dtype=np.complex128)
        v[indices] = 1.0
        return cls(gen, v)

    # pointwise arithmetic -------------------------------------------------

    def _coerce(self, other: "GridFunction | Scalar") -> np.ndarray:
        if isinstance(other, GridFunction):
            if other.gen != self.gen:
                raise ValueError("mismatched generator sequences")
            return other.values
        return np.full(self.gen.size, other, dtype=np.complex128)

    def __add__(self, other: "GridFunction | Scalar") -> "GridFunction":
        return GridFunction(self.gen, self.values + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other: "GridFunction | Scalar") -> "GridFunction":
        return GridFunction(self.gen, self.values - self._coerce(other))

    def __mul__(self, other: "GridFunction | Scalar") -> "GridFunction":
        return GridFunction(self.gen, self.values * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self) -> "GridFunction":
        return GridFunction(self.gen, -self.values)

    def conj(self) -> "GridFunction":
        return GridFunction(self.gen, np.conj(self.values))

    def abs(self) -> "GridFunction":
        return GridFunction(self.gen, np.abs(self.values))

    # measure-theoretic operations ----------------------------------------

    def integrate(self) -> complex:
        return integrate(self)

    def lp_quasinorm(self, p: float) -> float:
        return lp_quasinorm(self, p)

    def weak_lp(self, p: float) -> float:
        return weak_lp(self, p)

    def refine(self, gen: GeneratorSequence) -> "GridFunction":
        return refine(self, gen)

    # serialization --------------------------------------------------------

    def to_csv(self, stream: IO[str]) -> None:
        """Write rows (index, real, imag)."""
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(["index", "real", "imag"])
        for i, v in enumerate(self.values):
            w.writerow([i, format(v.real, ".17g"), format(v.imag, ".17g")])

    @classmethod
    def from_csv(cls, gen: GeneratorSequence, stream: IO[str]) -> "GridFunction":
        r = csv.reader(stream)
        header = next(r)
        if header[:3] != ["index", "real", "imag"]:
            raise ValueError(f"unexpected header {header}")
        v = np.zeros(gen.size, dtype=np.complex128)
        for row in r:
            v[int(row[0])] = float(row[1]) + 1j * float(row[2])
        return cls(gen, v)


def integrate(f: GridFunction) -> complex:
    """Exact Haar integral: each depth-N cell has measure 1 / M_N."""
    return complex(np.mean(f.values))


def lp_quasinorm(f: GridFunction, p: float) -> float:
    """((1/M_N) * sum |values|^p)^(1/p), exact for step functions."""
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    return float(np.mean(np.abs(f.values) ** p) ** (1.0 / p))


def weak_lp(f: GridFunction, p: float) -> float:
    """sup_{t>0} t^p * mu{|f| > t}, evaluated exactly.

    The distribution function of a step function jumps only at the distinct
    values of |f|, and the supremum is attained as t increases to one of
    them, so it equals max_v v^p * mu{|f| >= v}.
    """
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    mag = np.abs(f.values)
    best = 0.0
    for v in np.unique(mag):
        if v > 0:
            best = max(best, float(v**p * np.mean(mag >= v)))
    return best


def refine(f: GridFunction, gen: GeneratorSequence) -> GridFunction:
    """Re-express f on a deeper grid whose generator extends f's.

    New digits sit above the old ones in the index, so the cell values are
    tiled; integrals and every quasi-norm are unchanged.
    """
    if gen.m[: f.gen.depth] != f.gen.m:
        raise ValueError("refinement generator must extend the original")
    reps = gen.size // f.gen.size
    return GridFunction(gen, np.tile(f.values, reps))
