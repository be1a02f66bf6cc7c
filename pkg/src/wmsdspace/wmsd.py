"""Weight-scaled mean and standard deviation of weighted points.

Projecting a weighted point ``v`` onto the weight vector ``w`` splits it
into a component along the main diagonal of the weighted space and an
orthogonal remainder.  Dividing the two component lengths by the scaling
coefficient ``s`` yields the weight-scaled mean (WM) and weight-scaled
standard deviation (WSD): the coordinates of the alternative in the 2-D
explanation plane.  With all weights equal to 1 they reduce to the plain
mean and population standard deviation of the utility coordinates.

The distances of ``v`` to the anti-ideal and ideal images are pure
functions of (WM, WSD, mean(w)):

    d_anti  = sqrt(WM**2 + WSD**2)
    d_ideal = sqrt((mean(w) - WM)**2 + WSD**2)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch
from .model import WeightVector, _frozen
from .spaces import _coords


@dataclass(frozen=True)
class WmsdPoint:
    """Position of one alternative in the (WM, WSD) plane."""

    wm: float
    wsd: float

    def as_tuple(self) -> tuple[float, float]:
        return (self.wm, self.wsd)


@dataclass(frozen=True, eq=False)
class ProjectionPair:
    """Projection of a point onto the weights and the rejection from them.

    ``proj + rej`` reconstructs the original point and ``proj . rej`` is
    zero up to floating noise.
    """

    proj: np.ndarray
    rej: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "proj", _frozen(self.proj))
        object.__setattr__(self, "rej", _frozen(self.rej))


def project(v, w: WeightVector) -> ProjectionPair:
    """Split ``v`` into its component along ``w`` and the remainder."""
    vc = _coords(v)
    if vc.size != w.n:
        raise LengthMismatch(f"point of length {vc.size} under {w.n} weights")
    coef = float(vc @ w.weights) / (w.norm * w.norm)
    proj = coef * w.weights
    return ProjectionPair(proj=proj, rej=vc - proj)


def wm(v, w: WeightVector) -> float:
    """Weight-scaled mean: length of the projection divided by ``s``.

    Since both ``v`` and ``w`` are non-negative this equals
    ``(v . w) / (norm(w) * s)``, which avoids one vector norm.
    """
    vc = _coords(v)
    if vc.size != w.n:
        raise LengthMismatch(f"point of length {vc.size} under {w.n} weights")
    return float(vc @ w.weights) / (w.norm * w.s)


def wsd(v, w: WeightVector) -> float:
    """Weight-scaled standard deviation: rejection length divided by ``s``.

    Computed from the explicit rejection vector rather than the
    subtractive form sqrt(|v|^2/s^2 - WM^2), which loses precision when
    the rejection is small.
    """
    return float(np.linalg.norm(project(v, w).rej)) / w.s


def wmsd_point(v, w: WeightVector) -> WmsdPoint:
    """Both coordinates of ``v`` in the explanation plane."""
    vc = _coords(v)
    pair = project(vc, w)
    return WmsdPoint(
        wm=float(vc @ w.weights) / (w.norm * w.s),
        wsd=float(np.linalg.norm(pair.rej)) / w.s,
    )


def msd(u) -> WmsdPoint:
    """Mean and population standard deviation of a utility point.

    Identical to :func:`wmsd_point` under all-ones weights; the variance
    uses the divide-by-n convention, never n-1.
    """
    uc = _coords(u)
    mean = float(uc.mean())
    return WmsdPoint(wm=mean, wsd=float(np.sqrt(((uc - mean) ** 2).mean())))


def ia_distances(p: WmsdPoint, mean_w: float) -> tuple[float, float]:
    """Distances to the anti-ideal and ideal images from plane coordinates.

    Returns ``(d_anti, d_ideal)``; these equal the scaled distances of the
    underlying weighted point to the all-zeros corner and to the weight
    vector itself.
    """
    d_anti = math.hypot(p.wm, p.wsd)
    d_ideal = math.hypot(mean_w - p.wm, p.wsd)
    return (d_anti, d_ideal)
