"""Synthetic three-axis populations with a known sign of coupling.

Three regimes are generated, each with exact marginals ``(p_u, p_i, p_g)``
and a coupling strength ``c`` in [0, 1]:

coordinated
    A hub axis (default: the first) is shared; each other axis is a mixture
    ``(1 - c) * independent + c * comonotone`` with the hub.  Given the hub
    the other two axes are independent, so the trivariate transmission
    equals their mutual information and is strictly positive for ``c > 0``.
uncoupled
    The product of the marginals; transmission is zero.
bilateral
    ``(1 - c) * product + c * parity`` where the parity component lives on
    the even-parity cells (XOR structure), or on the odd-parity cells when
    the even ones cannot carry the marginals.  Transmission is negative for
    ``c > 0``.

This module also holds a deliberately naive transmission oracle that shares
no code with :mod:`triplehelix.infotheory`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .contingency import ContingencyTable, CountRecord, contingency_from_counts, counts_from_table
from .errors import InfeasibleSpec, InvalidAxes
from .infotheory import JointDistribution, TransmissionValue, transmission3_batch

FEASIBILITY_TOL = 1e-12


class Regime(str, enum.Enum):
    COORDINATED = "coordinated"
    UNCOUPLED = "uncoupled"
    BILATERAL = "bilateral"


@dataclass(frozen=True)
class RegimeSpec:
    regime: Regime
    p_u: float = 0.5
    p_i: float = 0.5
    p_g: float = 0.5
    coupling: float = 0.0
    n: int = 0
    seed: int = 0
    hub: int = 0

    def __post_init__(self):
        try:
            object.__setattr__(self, "regime", Regime(self.regime))
        except ValueError:
            raise InfeasibleSpec(f"unknown regime {self.regime!r}") from None
        for name in ("p_u", "p_i", "p_g"):
            p = getattr(self, name)
            if not 0.0 < p < 1.0:
                raise InfeasibleSpec(f"{name}={p!r} must lie strictly between 0 and 1")
        if not 0.0 <= self.coupling <= 1.0:
            raise InfeasibleSpec(f"coupling={self.coupling!r} must lie in [0, 1]")
        if self.n < 0:
            raise InfeasibleSpec(f"population size n={self.n!r} must be nonnegative")
        if self.hub not in (0, 1, 2):
            raise InfeasibleSpec(f"hub axis must be 0, 1 or 2, got {self.hub!r}")
        if self.regime is Regime.BILATERAL and self.coupling > 0 and _parity_component(self.marginals) is None:
            a, b, c = self.marginals
            raise InfeasibleSpec(
                f"bilateral coupling needs a parity-structured component with marginals "
                f"({a}, {b}, {c}); even parity requires each marginal <= the sum of the "
                f"other two and a total <= 2, odd parity requires a total >= 1 and each "
                f"marginal >= (total - 1) / 2"
            )

    @property
    def marginals(self) -> tuple:
        return (self.p_u, self.p_i, self.p_g)


def _product(a: float, b: float, c: float) -> np.ndarray:
    return np.einsum("i,j,k->ijk", [1 - a, a], [1 - b, b], [1 - c, c])


def _comonotone_pair(a: float, b: float) -> np.ndarray:
    m = min(a, b)
    return np.array([[1 - max(a, b), b - m], [a - m, m]])


def _coupled_pair(a: float, b: float, c: float) -> np.ndarray:
    return (1 - c) * np.outer([1 - a, a], [1 - b, b]) + c * _comonotone_pair(a, b)


def _parity_component(marginals) -> np.ndarray | None:
    a, b, c = marginals
    even = {
        (1, 1, 0): (a + b - c) / 2,
        (1, 0, 1): (a + c - b) / 2,
        (0, 1, 1): (b + c - a) / 2,
        (0, 0, 0): 1 - (a + b + c) / 2,
    }
    d = (a + b + c - 1) / 2
    odd = {(1, 1, 1): d, (1, 0, 0): a - d, (0, 1, 0): b - d, (0, 0, 1): c - d}
    for cells in (even, odd):
        if min(cells.values()) >= -FEASIBILITY_TOL:
            q = np.zeros((2, 2, 2))
            for idx, v in cells.items():
                q[idx] = max(v, 0.0)
            return q
    return None


def regime_distribution(spec: RegimeSpec) -> JointDistribution:
    a, b, c = spec.marginals
    w = spec.coupling
    if spec.regime is Regime.UNCOUPLED or w == 0:
        p = _product(a, b, c)
    elif spec.regime is Regime.BILATERAL:
        p = (1 - w) * _product(a, b, c) + w * _parity_component(spec.marginals)
    else:
        order = [spec.hub] + [k for k in range(3) if k != spec.hub]
        hub, s1, s2 = (spec.marginals[k] for k in order)
        with_s1 = _coupled_pair(hub, s1, w)
        with_s2 = _coupled_pair(hub, s2, w)
        # s1 and s2 conditionally independent given the hub
        p_hub = np.array([1 - hub, hub])
        p = np.einsum("ij,ik->ijk", with_s1, with_s2 / p_hub[:, None])
        p = np.transpose(p, np.argsort(order))
    p = np.clip(p, 0.0, None)
    return JointDistribution(p / p.sum())


def record_from_cells(cells, year: int = 0) -> CountRecord:
    return counts_from_table(ContingencyTable(np.asarray(cells).reshape(2, 2, 2), year=year))


def sample_population(dist: JointDistribution, n: int, seed, year: int = 0) -> CountRecord:
    """Draw ``n`` independent cells from ``dist`` and aggregate them.

    Each call builds its own generator from ``seed``; identical arguments
    give identical records.
    """
    if dist.axis_count != 3:
        raise InvalidAxes("sampling needs a 3-axis distribution")
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    rng = np.random.default_rng(seed)
    p = dist.probabilities.ravel()
    counts = rng.multinomial(int(n), p / p.sum())
    return record_from_cells(counts, year)


def empirical_transmission3(rec: CountRecord) -> float:
    """Plug-in trivariate transmission (bits) of a sampled population."""
    cells = _cells_of(rec)
    return float(transmission3_batch(cells / cells.sum()))


def _cells_of(rec: CountRecord) -> np.ndarray:
    return contingency_from_counts(rec).cells.astype(float)


def bootstrap_standard_error(rec: CountRecord, n_boot: int = 200, seed=0) -> float:
    """Standard error of the plug-in transmission by multinomial resampling."""
    cells = _cells_of(rec)
    n = int(cells.sum())
    if n == 0:
        raise ValueError("cannot bootstrap an empty population")
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(n, (cells / n).ravel(), size=n_boot) / n
    values = transmission3_batch(draws.reshape(n_boot, 2, 2, 2))
    return float(values.std(ddof=1))


def oracle_transmission3(dist: JointDistribution) -> TransmissionValue:
    """Direct-form trivariate transmission by brute-force enumeration.

    Kept independent of :mod:`triplehelix.infotheory`: every marginal is
    recomputed with plain loops from the eight cell probabilities.
    """
    if dist.axis_count != 3:
        raise InvalidAxes(f"expected a 3-axis distribution, got {dist.axis_count}")
    cell = {}
    for x in (0, 1):
        for y in (0, 1):
            for z in (0, 1):
                cell[(x, y, z)] = float(dist.probabilities[x][y][z])

    def marginal(**fixed):
        return sum(p for (x, y, z), p in cell.items()
                   if all({"x": x, "y": y, "z": z}[k] == v for k, v in fixed.items()))

    total = 0.0
    for (x, y, z), p in cell.items():
        if p == 0.0:
            continue
        num = marginal(x=x, y=y) * marginal(x=x, z=z) * marginal(y=y, z=z)
        den = marginal(x=x) * marginal(y=y) * marginal(z=z) * p
        total += p * math.log(num / den, 2)
    return TransmissionValue(total)
