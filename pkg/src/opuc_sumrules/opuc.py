"""Szegő recurrence, Bernstein–Szegő weights and the moment problem.

Conventions
-----------
Moments are ``c_k = ∫ e^{-ikθ} dμ(θ)``, so that ``c_1 = α_0``.  The inner
product is ``<f, g> = ∫ conj(f) g dμ``.  A finite coefficient sequence
``α_0..α_{N-1}`` is identified with its Bernstein–Szegő measure

    w_N(θ) = ∏(1 - |α_n|²) / |Φ_N^*(e^{iθ})|²,

whose Verblunsky coefficients vanish from index N on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    GridTooCoarse,
    InvalidCoefficient,
    NonpositiveWeight,
    NonUnitPoint,
    NotPositiveDefinite,
    NyquistViolation,
)

UNIT_TOL = 1e-12
DEGENERACY_TOL = 1e-12
MIN_GRID = 16

# log|Φ*| is accumulated from products of this many Möbius factors at a time;
# each factor lies in [0.05, 1.95] for |α| ≤ 0.95, so 32 of them stay in range.
_LOG_CHUNK = 32


def as_alpha(values) -> np.ndarray:
    """Validate a coefficient sequence and return it as a complex array."""
    if isinstance(values, VerblunskySeq):
        return values.values
    arr = np.asarray(values, dtype=np.complex128).reshape(-1)
    if arr.size and not np.all(np.isfinite(arr)):
        raise InvalidCoefficient("coefficients must be finite")
    if arr.size and np.max(np.abs(arr)) >= 1.0:
        n = int(np.argmax(np.abs(arr)))
        raise InvalidCoefficient(f"|alpha_{n}| = {abs(arr[n])!r} >= 1")
    return arr


@dataclass(frozen=True)
class VerblunskySeq:
    """Finite Verblunsky sequence, implicitly extended by zeros."""

    values: np.ndarray

    def __post_init__(self):
        arr = as_alpha(np.array(self.values, dtype=np.complex128, copy=True))
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self):
        return self.values.size

    def truncate(self, n: int) -> "VerblunskySeq":
        return VerblunskySeq(self.values[:n])


@dataclass(frozen=True)
class SzegoPolyPair:
    phi: complex
    phi_star: complex
    degree: int
    point: complex


def szego_eval(alpha, z: complex) -> SzegoPolyPair:
    """Evaluate ``Φ_N(z)`` and ``Φ_N^*(z)`` on the unit circle by the Szegő recurrence."""
    a = as_alpha(alpha)
    z = complex(z)
    if abs(abs(z) - 1.0) > UNIT_TOL:
        raise NonUnitPoint(f"|z| = {abs(z)!r} is not 1")
    phi = phi_star = 1.0 + 0.0j
    for an in a:
        phi, phi_star = z * phi - an.conjugate() * phi_star, phi_star - an * z * phi
    return SzegoPolyPair(phi=phi, phi_star=phi_star, degree=a.size, point=z)


def next_pow2(n: int) -> int:
    return 1 << max(0, int(n) - 1).bit_length()


def default_grid_size(n: int, factor: int = 8) -> int:
    """Smallest power of two that is ``>= factor * n`` and ``>= 16``."""
    return max(MIN_GRID, next_pow2(factor * max(int(n), 1)))


def angular_grid(grid_size: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(grid_size) / grid_size


@dataclass(frozen=True)
class WeightGrid:
    """Strictly positive weight sampled on ``θ_j = 2πj/M``.

    The weight is stored through ``log_w`` so that exponentially small values
    (weights of near-gapped measures at large N) survive the round trip to the
    log integrand without underflowing.
    """

    log_w: np.ndarray
    _w: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        lw = np.array(self.log_w, dtype=np.float64, copy=True).reshape(-1)
        if lw.size == 0:
            raise GridTooCoarse("empty weight grid")
        if not np.all(np.isfinite(lw)):
            raise NonpositiveWeight("weight has nonpositive or nonfinite samples")
        lw.setflags(write=False)
        object.__setattr__(self, "log_w", lw)

    @classmethod
    def from_values(cls, w) -> "WeightGrid":
        w = np.asarray(w, dtype=np.float64).reshape(-1)
        if w.size and not np.all(w > 0):
            j = int(np.argmin(w))
            raise NonpositiveWeight(f"w[{j}] = {w[j]!r} <= 0")
        with np.errstate(divide="ignore"):
            grid = cls(np.log(w))
        object.__setattr__(grid, "_w", w.copy())
        return grid

    @property
    def grid_size(self) -> int:
        return self.log_w.size

    @property
    def theta(self) -> np.ndarray:
        return angular_grid(self.grid_size)

    @property
    def w(self) -> np.ndarray:
        if self._w is not None:
            return self._w
        return np.exp(self.log_w)

    @property
    def normalization(self) -> float:
        return math.fsum(self.w) / self.grid_size


def log_phi_star_abs2(alpha, theta: np.ndarray) -> np.ndarray:
    """``log|Φ_N^*(e^{iθ})|²`` at the given angles, overflow-free.

    Runs the recurrence on the Blaschke ratio ``B_n = Φ_n / Φ_n^*``,

        B_{n+1} = (z B_n - conj(α_n)) / (1 - α_n z B_n),
        Φ_{n+1}^* = Φ_n^* (1 - α_n z B_n),

    which keeps every intermediate on the unit circle.
    """
    a = as_alpha(alpha)
    z = np.exp(1j * np.asarray(theta, dtype=np.float64))
    b = np.ones_like(z)
    prod = np.ones_like(z)
    acc = np.zeros(z.shape, dtype=np.float64)
    for n, an in enumerate(a):
        u = z * b
        factor = 1.0 - an * u
        b = (u - an.conjugate()) / factor
        b /= np.abs(b)
        prod *= factor
        if (n + 1) % _LOG_CHUNK == 0:
            acc += np.log(np.abs(prod))
            prod[:] = 1.0
    acc += np.log(np.abs(prod))
    return 2.0 * acc


def log_norm_product(alpha) -> float:
    """``Σ log(1 - |α_n|²)``, the log of ``∏ ρ_n²``."""
    a = as_alpha(alpha)
    return math.fsum(np.log1p(-np.abs(a) ** 2))


def bernstein_szego_weight(alpha, grid_size: int | None = None) -> WeightGrid:
    """Sample the Bernstein–Szegő weight of ``alpha`` on a uniform grid."""
    a = as_alpha(alpha)
    if grid_size is None:
        grid_size = default_grid_size(a.size)
    grid_size = int(grid_size)
    if grid_size < MIN_GRID or grid_size < 8 * a.size:
        raise GridTooCoarse(
            f"grid_size={grid_size} needs >= max({MIN_GRID}, 8*N={8 * a.size})"
        )
    theta = angular_grid(grid_size)
    return WeightGrid(log_norm_product(a) - log_phi_star_abs2(a, theta))


def log_phi_star_taylor(alpha, order: int) -> np.ndarray:
    """Taylor coefficients of ``log Φ_n^*(z)`` at ``z = 0`` for every prefix.

    Row ``n`` holds ``a_0..a_order`` of ``log Φ_n^*`` (``a_0 = 0``) for the
    first ``n`` coefficients, ``n = 0..N``.  The same Blaschke recurrence as
    :func:`log_phi_star_abs2` is run on truncated power series, so the result
    is exact up to rounding and independent of any quadrature.
    """
    a = as_alpha(alpha)
    d = int(order) + 1
    out = np.zeros((a.size + 1, d), dtype=np.complex128)
    b = [1.0 + 0j] + [0j] * (d - 1)
    log_s = [0j] * d
    for n, an in enumerate(a):
        u = [0j] + b[:-1]
        v = [an * x for x in u]  # v(0) = 0
        den = [1.0 - v[0]] + [-x for x in v[1:]]
        num = [u[0] - an.conjugate()] + u[1:]
        b = _series_mul(num, _series_inv(den))
        # log(1 - v) = -Σ v^j / j, truncated
        vp = v
        for j in range(1, d):
            for k in range(d):
                log_s[k] -= vp[k] / j
            vp = _series_mul(vp, v)
        out[n + 1] = log_s
    return out


def _series_mul(x, y):
    d = len(x)
    return [sum(x[i] * y[k - i] for i in range(k + 1)) for k in range(d)]


def _series_inv(x):
    d = len(x)
    r = [1.0 / x[0]] + [0j] * (d - 1)
    for k in range(1, d):
        r[k] = -sum(x[j] * r[k - j] for j in range(1, k + 1)) / x[0]
    return r


@dataclass(frozen=True)
class MomentSeq:
    """Trigonometric moments ``c_0..c_K``; negative indices by conjugation."""

    c: np.ndarray

    def __post_init__(self):
        arr = np.array(self.c, dtype=np.complex128, copy=True).reshape(-1)
        arr.setflags(write=False)
        object.__setattr__(self, "c", arr)

    @property
    def K(self) -> int:
        return self.c.size - 1

    def toeplitz(self) -> np.ndarray:
        k = np.arange(self.c.size)
        diff = k[:, None] - k[None, :]
        t = self.c[np.abs(diff)]
        return np.where(diff >= 0, t, np.conj(t))


def moments_from_weight(w: WeightGrid, K: int) -> MomentSeq:
    """Trapezoid moments ``c_k = (1/M) Σ_j w_j e^{-ikθ_j}`` via one FFT."""
    M = w.grid_size
    K = int(K)
    if K < 0 or K >= M / 2:
        raise NyquistViolation(f"K={K} must satisfy 0 <= K < grid_size/2 = {M / 2}")
    c = np.fft.fft(w.w)[: K + 1] / M
    return MomentSeq(c)


def verblunsky_from_moments(c: MomentSeq, N: int | None = None) -> VerblunskySeq:
    """Levinson-type recursion recovering ``α_0..α_{N-1}`` from moments.

    Moments are normalized by ``c_0`` first; the Verblunsky coefficients of a
    measure do not depend on its total mass.
    """
    cc = np.asarray(c.c if isinstance(c, MomentSeq) else c, dtype=np.complex128)
    if N is None:
        N = cc.size - 1
    N = int(N)
    if N > cc.size - 1:
        raise NyquistViolation(f"need K >= N, got K={cc.size - 1}, N={N}")
    if cc.size == 0 or not (cc[0].real > 0 and abs(cc[0].imag) <= 1e-12 * abs(cc[0])):
        raise NotPositiveDefinite("c_0 must be real and positive")
    cbar = np.conj(cc / cc[0].real)
    phi = np.ones(1, dtype=np.complex128)
    energy = 1.0
    alpha = np.zeros(N, dtype=np.complex128)
    for n in range(N):
        # <1, zΦ_n> = conj(α_n) <1, Φ_n^*>,  <1, Φ_n^*> = ||Φ_n||²
        an = np.conj(np.dot(phi, cbar[1 : n + 2]) / energy)
        if not np.isfinite(an) or abs(an) >= 1.0 - DEGENERACY_TOL:
            raise NotPositiveDefinite(f"|alpha_{n}| = {abs(an)!r} reached the unit circle")
        alpha[n] = an
        star = np.conj(phi[::-1])
        phi = np.concatenate(([0j], phi)) - np.conj(an) * np.concatenate((star, [0j]))
        energy *= 1.0 - abs(an) ** 2
    return VerblunskySeq(alpha)


def moments_from_verblunsky(alpha, K: int) -> MomentSeq:
    """Exact moments ``c_0..c_K`` of the Bernstein–Szegő measure of ``alpha``.

    Inverse of :func:`verblunsky_from_moments`: each step solves the same
    orthogonality relation for the one new moment it introduces.
    """
    a = as_alpha(alpha)
    K = int(K)
    cbar = np.zeros(K + 1, dtype=np.complex128)
    cbar[0] = 1.0
    phi = np.ones(1, dtype=np.complex128)
    energy = 1.0
    for n in range(K):
        an = a[n] if n < a.size else 0j
        cbar[n + 1] = np.conj(an) * energy - np.dot(phi[:-1], cbar[1 : n + 1])
        star = np.conj(phi[::-1])
        phi = np.concatenate(([0j], phi)) - np.conj(an) * np.concatenate((star, [0j]))
        energy *= 1.0 - abs(an) ** 2
    return MomentSeq(np.conj(cbar))
