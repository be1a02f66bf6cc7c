"""Criteria, decision matrices, and normalized weight vectors.

A ranking problem is described by a list of :class:`CriterionSpec` (name,
bounded real domain, gain/cost direction, raw weight), a
:class:`DecisionMatrix` of raw values, and a :class:`WeightVector` derived
from the raw weights.  Weights are always re-scaled at construction so that
the largest entry is exactly 1; the derived statistics (positive count
``n_p``, Euclidean norm, arithmetic mean, scaling coefficient
``s = norm / mean``) are what every downstream computation consumes.

All types are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AllZeroWeights,
    DegenerateDomain,
    DuplicateName,
    LengthMismatch,
    NegativeWeight,
    NonFiniteBound,
    NonFiniteWeight,
    OutOfDomain,
)

GAIN = "gain"
COST = "cost"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class CriterionSpec:
    """One criterion: a bounded real domain with a preference direction.

    For a gain criterion the least preferred value is ``v_min`` and the
    most preferred is ``v_max``; for a cost criterion the roles swap.
    ``raw_weight`` is the weight as supplied by the user, before
    max-normalization.
    """

    name: str
    v_min: float
    v_max: float
    kind: str  # GAIN or COST
    raw_weight: float = 1.0

    @property
    def least_preferred(self) -> float:
        return self.v_max if self.kind == COST else self.v_min

    @property
    def most_preferred(self) -> float:
        return self.v_min if self.kind == COST else self.v_max

    def contains(self, value: float) -> bool:
        return self.v_min <= value <= self.v_max


def validate_criteria(specs: Sequence[CriterionSpec]) -> Sequence[CriterionSpec]:
    """Check every criterion invariant; return the specs unchanged.

    Raises DegenerateDomain, NonFiniteBound, NegativeWeight, or
    DuplicateName on the first violation found.
    """
    if len(specs) == 0:
        raise DegenerateDomain("criteria list is empty")
    seen = set()
    for spec in specs:
        if spec.kind not in (GAIN, COST):
            raise DegenerateDomain(
                f"criterion {spec.name!r}: kind must be 'gain' or 'cost', "
                f"got {spec.kind!r}")
        if not (math.isfinite(spec.v_min) and math.isfinite(spec.v_max)):
            raise NonFiniteBound(
                f"criterion {spec.name!r}: domain bounds must be finite")
        if not spec.v_min < spec.v_max:
            raise DegenerateDomain(
                f"criterion {spec.name!r}: v_min ({spec.v_min}) must be "
                f"strictly below v_max ({spec.v_max})")
        if not math.isfinite(spec.raw_weight):
            raise NonFiniteWeight(
                f"criterion {spec.name!r}: weight must be finite")
        if spec.raw_weight < 0:
            raise NegativeWeight(
                f"criterion {spec.name!r}: weight must be non-negative, "
                f"got {spec.raw_weight}")
        if spec.name in seen:
            raise DuplicateName(f"duplicate criterion name {spec.name!r}")
        seen.add(spec.name)
    return specs


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Max-normalized criteria weights plus derived statistics.

    ``weights`` always satisfies: all entries in [0, 1], the maximum entry
    exactly 1, and at least one positive entry.  ``mean_w`` is the
    arithmetic mean over *all* entries, zeros included.  ``s`` is the
    scaling coefficient ``norm / mean_w`` that normalizes weighted
    distances; for the all-ones vector it equals sqrt(n).
    """

    raw: np.ndarray
    weights: np.ndarray
    n_p: int
    norm: float
    mean_w: float
    s: float

    @property
    def n(self) -> int:
        return self.weights.size

    def matches(self, other: "WeightVector") -> bool:
        """True when both vectors hold identical normalized weights."""
        return np.array_equal(self.weights, other.weights)

    def __repr__(self) -> str:  # compact; raw vector omitted
        ws = ", ".join(f"{w:g}" for w in self.weights)
        return f"WeightVector([{ws}], n_p={self.n_p}, s={self.s:.6g})"


def normalize_weights(raw: Sequence[float] | np.ndarray) -> WeightVector:
    """Re-scale raw weights so the maximum entry is exactly 1.

    The raw weights must be finite, non-negative, and not all zero.
    Division by the maximum maps the largest entry to exactly 1.0 and is
    idempotent: normalizing an already-normalized vector changes nothing.
    """
    arr = np.asarray(raw, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise LengthMismatch("weights must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteWeight("weights must all be finite")
    if np.any(arr < 0):
        raise NegativeWeight("weights must all be non-negative")
    top = float(arr.max())
    if top == 0.0:
        raise AllZeroWeights("at least one weight must be positive")
    weights = arr / top
    norm = float(np.linalg.norm(weights))
    mean_w = float(weights.mean())
    return WeightVector(
        raw=_frozen(arr),
        weights=_frozen(weights),
        n_p=int(np.count_nonzero(weights > 0)),
        norm=norm,
        mean_w=mean_w,
        s=norm / mean_w,
    )


def uniform_weights(n: int) -> WeightVector:
    """The all-ones weight vector of length ``n``."""
    return normalize_weights(np.ones(n))


def scaling_coefficient(w: WeightVector) -> float:
    """Distance scaling coefficient ``norm / mean``; sqrt(n) for all ones."""
    return w.norm / w.mean_w


@dataclass(frozen=True, eq=False)
class DecisionMatrix:
    """m alternatives by n criteria of raw, in-domain values."""

    ids: tuple[str, ...]
    values: np.ndarray  # shape (m, n), read-only
    criteria: tuple[CriterionSpec, ...] = field(repr=False)

    @property
    def m(self) -> int:
        return len(self.ids)

    @property
    def n(self) -> int:
        return len(self.criteria)

    @property
    def alternatives(self) -> Iterable[tuple[str, np.ndarray]]:
        return zip(self.ids, self.values)

    @classmethod
    def from_rows(
        cls,
        rows: Sequence[tuple[str, Sequence[float]]],
        criteria: Sequence[CriterionSpec],
        clamp: bool = False,
    ) -> "DecisionMatrix":
        """Build and validate a matrix from ``(id, values)`` pairs.

        Every value must lie inside its criterion's domain.  With
        ``clamp=True`` out-of-domain values are mapped to the nearest
        bound instead of raising :class:`OutOfDomain`.
        """
        validate_criteria(criteria)
        n = len(criteria)
        ids = []
        seen = set()
        data = np.empty((len(rows), n), dtype=float)
        for i, (alt_id, values) in enumerate(rows):
            if alt_id in seen:
                raise DuplicateName(f"duplicate alternative id {alt_id!r}")
            seen.add(alt_id)
            ids.append(alt_id)
            if len(values) != n:
                raise LengthMismatch(
                    f"alternative {alt_id!r}: expected {n} values, "
                    f"got {len(values)}")
            for j, (value, spec) in enumerate(zip(values, criteria)):
                v = float(value)
                if not spec.contains(v):
                    if clamp:
                        v = min(max(v, spec.v_min), spec.v_max)
                    else:
                        raise OutOfDomain(
                            f"alternative {alt_id!r}, criterion "
                            f"{spec.name!r}: value {v} outside "
                            f"[{spec.v_min}, {spec.v_max}]",
                            row=i + 1, column=spec.name)
                data[i, j] = v
        return cls(ids=tuple(ids), values=_frozen(data),
                   criteria=tuple(criteria))

    def weight_vector(self) -> WeightVector:
        """Weights taken from the criteria, max-normalized."""
        return normalize_weights([c.raw_weight for c in self.criteria])
