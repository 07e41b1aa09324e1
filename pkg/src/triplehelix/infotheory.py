"""Shannon entropy and transmission (mutual information) over binary axes.

Distributions are stored as numpy arrays of shape ``(2,) * axis_count``;
index 1 on an axis means "present", 0 means "absent".  All values are
computed in bits and converted on request.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import InvalidAxes, InvalidDistribution

NORMALIZATION_TOL = 1e-12


class Unit(str, enum.Enum):
    BIT = "bit"
    MILLIBIT = "millibit"
    NAT = "nat"

    @property
    def per_bit(self) -> float:
        """How many of this unit make up one bit."""
        return _PER_BIT[self]


_PER_BIT = {Unit.BIT: 1.0, Unit.MILLIBIT: 1000.0, Unit.NAT: math.log(2.0)}


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Probability assignment over 1, 2 or 3 binary presence/absence axes."""

    probabilities: np.ndarray

    def __post_init__(self):
        p = np.array(self.probabilities, dtype=float)
        if p.ndim not in (1, 2, 3) or p.shape != (2,) * p.ndim:
            raise InvalidDistribution(f"expected shape (2,)*k with k in 1..3, got {p.shape}")
        if not np.all(np.isfinite(p)):
            raise InvalidDistribution("probabilities must be finite")
        if np.any(p < 0):
            raise InvalidDistribution("probabilities must be nonnegative")
        total = float(p.sum())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise InvalidDistribution(f"probabilities sum to {total!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)

    @property
    def axis_count(self) -> int:
        return self.probabilities.ndim

    @classmethod
    def from_counts(cls, counts) -> "JointDistribution":
        c = np.asarray(counts, dtype=float)
        total = c.sum()
        if total <= 0:
            raise InvalidDistribution("counts sum to zero")
        return cls(c / total)

    def __eq__(self, other):
        if not isinstance(other, JointDistribution):
            return NotImplemented
        return np.array_equal(self.probabilities, other.probabilities)

    def __hash__(self):
        return hash(self.probabilities.tobytes())

    def __repr__(self):
        return f"JointDistribution({self.probabilities.tolist()!r})"


@dataclass(frozen=True)
class TransmissionValue:
    value: float
    unit: Unit = Unit.BIT

    def to(self, unit) -> "TransmissionValue":
        return convert_units(self, unit)

    def __float__(self):
        return float(self.value)


def convert_units(v: TransmissionValue, target) -> TransmissionValue:
    target = Unit(target)
    if target is v.unit:
        return v
    bits = v.value / v.unit.per_bit if v.unit is not Unit.BIT else v.value
    return TransmissionValue(bits * target.per_bit, target)


def _plogp_sum(p: np.ndarray, axes) -> np.ndarray:
    # 0 log 0 = 0
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, -p * np.log2(p), 0.0)
    return terms.sum(axis=axes)


def entropy(dist: JointDistribution) -> TransmissionValue:
    """Shannon entropy of the whole grid, in bits."""
    h = float(_plogp_sum(dist.probabilities, None))
    # sums of -p log p are >= 0 analytically; clamp rounding residue
    return TransmissionValue(max(h, 0.0))


def _normalize_axes(dist: JointDistribution, kept_axes: Iterable[int]) -> tuple:
    try:
        kept = tuple(sorted(set(int(a) for a in kept_axes)))
    except TypeError:
        raise InvalidAxes(f"kept_axes must be an iterable of ints, got {kept_axes!r}")
    if not kept:
        raise InvalidAxes("kept_axes is empty")
    if kept[0] < 0 or kept[-1] >= dist.axis_count:
        raise InvalidAxes(f"axes {kept} out of range for {dist.axis_count} axes")
    return kept


def marginalize(dist: JointDistribution, kept_axes: Iterable[int]) -> JointDistribution:
    """Sum out every axis not in ``kept_axes`` (0-based, original order kept)."""
    kept = _normalize_axes(dist, kept_axes)
    dropped = tuple(a for a in range(dist.axis_count) if a not in kept)
    p = dist.probabilities.sum(axis=dropped) if dropped else dist.probabilities
    return JointDistribution(p)


def _require_axes(dist: JointDistribution, k: int):
    if dist.axis_count != k:
        raise InvalidAxes(f"expected a {k}-axis distribution, got {dist.axis_count}")


def transmission2(dist: JointDistribution) -> TransmissionValue:
    """Bilateral transmission H(x) + H(y) - H(xy) of a 2-axis distribution."""
    _require_axes(dist, 2)
    p = dist.probabilities
    t = _plogp_sum(p.sum(1), None) + _plogp_sum(p.sum(0), None) - _plogp_sum(p, None)
    return TransmissionValue(max(float(t), 0.0))


def transmission3_batch(p: np.ndarray) -> np.ndarray:
    """Entropy-form trivariate transmission for a stack of ``(..., 2, 2, 2)`` arrays.

    No normalization check is made; callers pass valid distributions.
    """
    p = np.asarray(p, dtype=float)
    single = (-1,)
    pair = (-2, -1)
    hx = _plogp_sum(p.sum(axis=(-2, -1)), single)
    hy = _plogp_sum(p.sum(axis=(-3, -1)), single)
    hz = _plogp_sum(p.sum(axis=(-3, -2)), single)
    hxy = _plogp_sum(p.sum(axis=-1), pair)
    hxz = _plogp_sum(p.sum(axis=-2), pair)
    hyz = _plogp_sum(p.sum(axis=-3), pair)
    hxyz = _plogp_sum(p, (-3, -2, -1))
    return hx + hy + hz - hxy - hyz - hxz + hxyz


def transmission3_entropy_form(dist: JointDistribution) -> TransmissionValue:
    """Signed three-way transmission as the alternating sum of seven entropies.

    Positive under a shared core of co-occurrence, zero under independence,
    negative when pairwise couplings dominate.
    """
    _require_axes(dist, 3)
    return TransmissionValue(float(transmission3_batch(dist.probabilities)))


def transmission3_direct_form(dist: JointDistribution) -> TransmissionValue:
    """Signed three-way transmission as an expectation of one log ratio.

    Sums ``P(xyz) log2[P(xy) P(xz) P(yz) / (P(x) P(y) P(z) P(xyz))]`` over
    cells with ``P(xyz) > 0``.
    """
    _require_axes(dist, 3)
    p = dist.probabilities
    px = p.sum(axis=(1, 2))
    py = p.sum(axis=(0, 2))
    pz = p.sum(axis=(0, 1))
    pxy = p.sum(axis=2)
    pxz = p.sum(axis=1)
    pyz = p.sum(axis=0)
    total = 0.0
    for x, y, z in np.ndindex(2, 2, 2):
        pc = p[x, y, z]
        if pc <= 0:
            continue
        # every marginal containing a positive cell is itself positive
        ratio = (pxy[x, y] * pxz[x, z] * pyz[y, z]) / (px[x] * py[y] * pz[z] * pc)
        total += pc * math.log2(ratio)
    return TransmissionValue(total)


def pairwise_transmissions(dist: JointDistribution) -> dict:
    """Bilateral transmissions for every axis pair of a 3-axis distribution."""
    _require_axes(dist, 3)
    return {pair: transmission2(marginalize(dist, pair)) for pair in combinations(range(3), 2)}


def marginal_entropies(dist: JointDistribution) -> tuple:
    return tuple(entropy(marginalize(dist, (a,))) for a in range(dist.axis_count))
