"""Both sides of the truncated sum rules for ``H_m(θ) = (1 - cos θ)^m``.

The truncation of a coefficient sequence at ``N`` is its Bernstein–Szegő
measure.  Every report satisfies, by construction,

    spectral + energy + log_sum + correction = 0,

where ``energy = 2^{-m} ||Δ^m α||²`` (padded) and ``log_sum = Σ L_n^{(m)}``;
``correction`` collects boundary terms and all higher-degree pieces.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .differences import check_order, lp_sum, weight_symbol_coeffs, weighted_energy
from .errors import BadParameter, DomainError, EmptySeries, GridTooCoarse, NonpositiveWeight
from .opuc import (
    WeightGrid,
    as_alpha,
    bernstein_szego_weight,
    default_grid_size,
    log_phi_star_taylor,
)

QUADRATURE = "quadrature"
EXACT = "exact"

REPORT_COLUMNS = ("m", "N", "grid_size", "spectral", "energy", "log_sum", "lp_raw", "correction")

_SERIES_SPLIT = 0.5
_SERIES_TERMS = 60


def log_remainder(x, m: int):
    """``-log(1 - x) - Σ_{j=1}^m x^j / j`` for ``0 <= x < 1``.

    Below ``x = 1/2`` the tail series ``Σ_{j>m} x^j / j`` is summed directly,
    which avoids cancellation and makes ``>= x^{m+1}/(m+1)`` hold bit-exactly.
    """
    m = check_order(m)
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if np.any(~np.isfinite(arr)) or np.any(arr < 0) or np.any(arr >= 1):
        raise DomainError("log_remainder needs 0 <= x < 1")
    small = arr < _SERIES_SPLIT
    out = np.empty_like(arr)

    xs = arr[small]
    lead = xs ** (m + 1) / (m + 1)
    rest = np.zeros_like(xs)
    for j in range(m + 1 + _SERIES_TERMS, m + 1, -1):
        rest = rest * xs + 1.0 / j
    out[small] = lead + xs ** (m + 2) * rest

    xl = arr[~small]
    poly = np.zeros_like(xl)
    for j in range(m, 0, -1):
        poly = (poly + 1.0 / j) * xl
    out[~small] = -np.log1p(-xl) - poly
    return float(out[0]) if scalar else out


def _weight_on(theta: np.ndarray, m: int) -> np.ndarray:
    return (1.0 - np.cos(theta)) ** m


def spectral_side(w: WeightGrid, m: int) -> float:
    """Trapezoid value of ``∫ (1 - cos θ)^m log w(θ) dθ/2π`` on the grid of ``w``."""
    m = check_order(m)
    if not isinstance(w, WeightGrid):
        w = WeightGrid.from_values(w)
    if not np.all(np.isfinite(w.log_w)):
        raise NonpositiveWeight("log w is not finite on the grid")
    return math.fsum(_weight_on(w.theta, m) * w.log_w) / w.grid_size


def spectral_side_exact(alpha, m: int) -> np.ndarray:
    """Exact ``∫ H_m log w_N dθ/2π`` for every truncation ``N = 0..len(alpha)``.

    With ``log Φ_N^* = Σ_k a_k z^k`` and ``h_ℓ`` the symbol coefficients,

        ∫ H_m log w_N = h_0 Σ_{n<N} log(1 - |α_n|²) - 2 Σ_{k=1}^m h_k Re a_k,

    so only the first ``m`` Taylor coefficients are needed; no grid involved.
    """
    m = check_order(m)
    a = as_alpha(alpha)
    sym = weight_symbol_coeffs(m)
    taylor = log_phi_star_taylor(a, m)
    log_norm = np.concatenate(([0.0], np.cumsum(np.log1p(-np.abs(a) ** 2))))
    out = float(sym.coeff(0)) * log_norm
    for k in range(1, m + 1):
        out = out - 2.0 * float(sym.coeff(k)) * taylor[:, k].real
    return out


def spectral_converged(alpha, m: int, tol: float = 1e-10, max_grid: int = 1 << 20):
    """Trapezoid spectral side refined by grid doubling until two successive
    values agree to ``tol``.  Returns ``(value, grid_size)``."""
    a = as_alpha(alpha)
    M = default_grid_size(a.size)
    prev = spectral_side(bernstein_szego_weight(a, M), m)
    while M < max_grid:
        M *= 2
        cur = spectral_side(bernstein_szego_weight(a, M), m)
        if abs(cur - prev) <= tol:
            return cur, M
        prev = cur
    raise GridTooCoarse(f"trapezoid did not settle to {tol:g} by grid_size={max_grid}")


class CoefficientSide(NamedTuple):
    energy: float
    log_sum: float
    lp_raw: float


def coefficient_side(alpha, m: int) -> CoefficientSide:
    m = check_order(m)
    a = as_alpha(alpha)
    x = np.abs(a) ** 2
    return CoefficientSide(
        energy=weighted_energy(a, m),
        log_sum=math.fsum(np.atleast_1d(log_remainder(x, m))),
        lp_raw=lp_sum(a, 2 * m + 2),
    )


@dataclass(frozen=True)
class SumRuleReport:
    m: int
    N: int
    grid_size: int
    spectral: float
    energy: float
    log_sum: float
    lp_raw: float
    correction: float
    boundary_budget: float

    def row(self) -> tuple:
        return tuple(getattr(self, c) for c in REPORT_COLUMNS)

    def to_dict(self) -> dict:
        return asdict(self)


def boundary_budget(m: int) -> float:
    return float(m * m * 4**m)


def _build_report(m, N, grid_size, spectral, side):
    # + 0.0 turns -0.0 into 0.0 for all-zero inputs
    correction = -math.fsum((spectral, side.energy, side.log_sum)) + 0.0
    return SumRuleReport(
        m=m,
        N=N,
        grid_size=grid_size,
        spectral=spectral,
        energy=side.energy,
        log_sum=side.log_sum,
        lp_raw=side.lp_raw,
        correction=correction,
        boundary_budget=boundary_budget(m),
    )


def sumrule_report(
    alpha, m: int, N: int, grid_size: int | None = None, method: str = QUADRATURE
) -> SumRuleReport:
    """Both sides of the order-``m`` sum rule for the first ``N`` coefficients.

    ``method="quadrature"`` synthesizes ``w_N`` on the grid and integrates by
    the trapezoid rule; ``method="exact"`` uses :func:`spectral_side_exact`
    (``grid_size`` is then reported as 0).
    """
    m = check_order(m)
    a = as_alpha(alpha)
    N = int(N)
    if not 0 <= N <= a.size:
        raise GridTooCoarse(f"N={N} exceeds the {a.size} available coefficients")
    head = a[:N]
    if method == QUADRATURE:
        if grid_size is None:
            grid_size = default_grid_size(N)
        spectral = spectral_side(bernstein_szego_weight(head, grid_size), m)
    elif method == EXACT:
        grid_size = 0
        spectral = float(spectral_side_exact(head, m)[-1])
    else:
        raise BadParameter(f"unknown method {method!r}")
    return _build_report(m, N, int(grid_size), spectral, coefficient_side(head, m))


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("OPUC_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, items):
    """Order-preserving map, threaded up to ``OPUC_THREADS`` workers."""
    items = list(items)
    n = worker_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def sumrule_series(
    alpha,
    m: int,
    N_list: Sequence[int],
    grid_rule: Callable[[int], int] = default_grid_size,
    method: str = QUADRATURE,
) -> list[SumRuleReport]:
    a = as_alpha(alpha)
    if method == EXACT:
        exact = spectral_side_exact(a, m)
        return [
            _build_report(m, int(N), 0, float(exact[N]), coefficient_side(a[:N], m))
            for N in N_list
        ]
    return parallel_map(lambda N: sumrule_report(a, m, N, grid_rule(N), method), N_list)


@dataclass(frozen=True)
class RelativeBound:
    eps: float
    C: float
    N_at_max: int


def relative_bound_probe(reports: Sequence[SumRuleReport], eps_grid) -> list[RelativeBound]:
    """Smallest ``C_ε >= 0`` with ``correction_N >= -ε energy_N - C_ε`` on the series."""
    if not reports:
        raise EmptySeries("relative_bound_probe needs at least one report")
    out = []
    for eps in eps_grid:
        gaps = [-r.correction - eps * r.energy for r in reports]
        i = int(np.argmax(gaps))
        out.append(RelativeBound(eps=float(eps), C=max(0.0, gaps[i]), N_at_max=reports[i].N))
    return out


def saturated(Ns: Sequence[int], values: Sequence[float], atol=1e-3, rtol=1e-3) -> bool:
    """``|s(N_max) - s(N_max/2)| < max(atol, rtol |s(N_max)|)``.

    Falls back to the previous entry when ``N_max/2`` was not computed.
    """
    if len(values) < 2:
        return False
    last = values[-1]
    half = dict(zip(Ns, values)).get(Ns[-1] // 2, values[-2])
    return abs(last - half) < max(atol, rtol * abs(last))


@dataclass
class NecessityVerdict:
    family: str
    m: int
    series: list[SumRuleReport]
    spectral_bounded: bool
    energy_converged: bool
    lp_converged: bool
    atol: float = 1e-3
    rtol: float = 1e-3
    threshold: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        """A bounded spectral side must come with converged coefficient sums."""
        return (not self.spectral_bounded) or (self.energy_converged and self.lp_converged)

    @property
    def text(self) -> str:
        if self.spectral_bounded:
            if self.consistent:
                return "spectral side saturates and so do energy and lp sums: consistent"
            return "spectral side saturates but a coefficient sum does not: INCONSISTENT"
        return "spectral side does not saturate: no constraint on the coefficients"

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "m": self.m,
            "flags": {
                "spectral_bounded": self.spectral_bounded,
                "energy_converged": self.energy_converged,
                "lp_converged": self.lp_converged,
                "consistent": self.consistent,
            },
            "rule": {"atol": self.atol, "rtol": self.rtol, "threshold": self.threshold},
            "verdict": self.text,
            "series": [r.to_dict() for r in self.series],
        }


def necessity_probe(
    family,
    m: int,
    N_list: Sequence[int],
    grid_rule: Callable[[int], int] = default_grid_size,
    method: str = QUADRATURE,
    atol: float = 1e-3,
    rtol: float = 1e-3,
    threshold: float | None = None,
    label: str | None = None,
) -> NecessityVerdict:
    """Evaluate a family along increasing truncations and flag saturation.

    ``family`` is anything with ``generate()`` and ``label`` (a
    :class:`~opuc_sumrules.families.FamilySpec`) or a plain coefficient array.
    ``threshold``, when given, additionally caps ``sup_N (-spectral)``.
    """
    Ns = [int(n) for n in N_list]
    if not Ns:
        raise EmptySeries("N_list is empty")
    if any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise BadParameter("N_list must be strictly increasing")
    if hasattr(family, "generate"):
        alpha = family.generate()
        label = label or family.label
    else:
        alpha = as_alpha(family)
        label = label or "custom"
    series = sumrule_series(alpha[: Ns[-1]], m, Ns, grid_rule, method)
    spectral = [r.spectral for r in series]
    bounded = saturated(Ns, spectral, atol, rtol)
    if threshold is not None:
        bounded = bounded and max(-s for s in spectral) <= threshold
    return NecessityVerdict(
        family=label,
        m=m,
        series=series,
        spectral_bounded=bounded,
        energy_converged=saturated(Ns, [r.energy for r in series], atol, rtol),
        lp_converged=saturated(Ns, [r.lp_raw for r in series], atol, rtol),
        atol=atol,
        rtol=rtol,
        threshold=threshold,
    )
