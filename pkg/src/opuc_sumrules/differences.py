"""Shift/difference operators, ℓ^p norms and Toeplitz forms with the weight symbols.

``Δ = S - 1`` with ``(Sα)_n = α_{n+1}``.  Sequences are finite and read as
two-sided sequences vanishing outside their support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BadParameter

PADDED = "padded"
INTERIOR = "interior"
MAX_ORDER = 3


def check_order(m: int, lo: int = 0) -> int:
    if int(m) != m or not lo <= m <= MAX_ORDER:
        raise BadParameter(f"difference order m={m!r} outside {lo}..{MAX_ORDER}")
    return int(m)


def stencil(m: int) -> np.ndarray:
    """Coefficients ``(-1)^{m-k} C(m, k)`` of ``α_{n+k}`` in ``(Δ^m α)_n``."""
    return np.array([(-1) ** (m - k) * math.comb(m, k) for k in range(m + 1)], dtype=float)


def difference(alpha, m: int, convention: str = PADDED) -> np.ndarray:
    """``Δ^m α``.

    ``padded`` returns indices ``n = -m..N-1`` (length ``N + m``), i.e. every
    entry the zero extension can make nonzero; ``interior`` returns
    ``n = 0..N-1-m``, the entries that only see the given window.
    """
    m = check_order(m)
    x = np.asarray(alpha, dtype=np.complex128).reshape(-1)
    n = x.size
    if n == 0:
        return x.copy()
    s = stencil(m)
    if convention == PADDED:
        xp = np.concatenate((np.zeros(m, complex), x, np.zeros(m, complex)))
        length = n + m
    elif convention == INTERIOR:
        xp = x
        length = max(n - m, 0)
    else:
        raise BadParameter(f"unknown convention {convention!r}")
    out = np.zeros(length, dtype=np.complex128)
    for k, sk in enumerate(s):
        out += sk * xp[k : k + length]
    return out


def lp_sum(seq, p: int) -> float:
    """``Σ |x_n|^p`` with compensated summation."""
    if int(p) != p or p < 2 or p % 2:
        raise BadParameter(f"p={p!r} must be an even integer >= 2")
    x = np.abs(np.asarray(seq, dtype=np.complex128).reshape(-1))
    return math.fsum(x**p)


def lp_norm(seq, p: int) -> float:
    return lp_sum(seq, p) ** (1.0 / p)


@dataclass(frozen=True)
class WeightSymbol:
    """Fourier coefficients of ``(1 - cos θ)^m``, exact rationals.

    ``h[ℓ + m]`` is the coefficient of ``e^{iℓθ}`` for ``ℓ = -m..m``.
    """

    m: int
    h: tuple[Fraction, ...]

    def coeff(self, ell: int) -> Fraction:
        if abs(ell) > self.m:
            return Fraction(0)
        return self.h[ell + self.m]

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        total = np.full(theta.shape, float(self.coeff(0)))
        for ell in range(1, self.m + 1):
            total += 2.0 * float(self.coeff(ell)) * np.cos(ell * theta)
        return total

    def __str__(self):
        return ", ".join(f"h[{ell}]={self.coeff(ell)}" for ell in range(-self.m, self.m + 1))


def weight_symbol_coeffs(m: int) -> WeightSymbol:
    """Expand ``(1 - (z + 1/z)/2)^m`` as a Laurent polynomial in ``z``."""
    m = check_order(m)
    # coefficients indexed by exponent + m
    poly = [Fraction(0)] * (2 * m + 1)
    poly[m] = Fraction(1)
    factor = {-1: Fraction(-1, 2), 0: Fraction(1), 1: Fraction(-1, 2)}
    for _ in range(m):
        nxt = [Fraction(0)] * (2 * m + 1)
        for i, ci in enumerate(poly):
            if ci:
                for e, f in factor.items():
                    nxt[i + e] += ci * f
        poly = nxt
    return WeightSymbol(m=m, h=tuple(poly))


def autocorrelation(alpha, max_lag: int) -> np.ndarray:
    """``r_ℓ = Σ_n α_{n+ℓ} conj(α_n)`` for ``ℓ = 0..max_lag`` (zero extension)."""
    x = np.asarray(alpha, dtype=np.complex128).reshape(-1)
    r = np.zeros(max_lag + 1, dtype=np.complex128)
    for ell in range(min(max_lag, x.size - 1) + 1):
        prods = x[ell:] * np.conj(x[: x.size - ell])
        r[ell] = complex(math.fsum(prods.real), math.fsum(prods.imag))
    return r


def toeplitz_quadratic_form(alpha, sym: WeightSymbol) -> float:
    """``Σ_ℓ h_ℓ Σ_n α_{n+ℓ} conj(α_n)`` over the zero-padded sequence.

    Real because the symbol is real and even: the ``±ℓ`` terms pair into
    ``2 h_ℓ Re r_ℓ``.
    """
    r = autocorrelation(alpha, sym.m)
    terms = [float(sym.coeff(0)) * r[0].real]
    terms += [2.0 * float(sym.coeff(ell)) * r[ell].real for ell in range(1, sym.m + 1)]
    return math.fsum(terms)


def difference_energy(alpha, m: int, convention: str = PADDED) -> float:
    """Raw energy ``Σ_n |(Δ^m α)_n|²``."""
    return lp_sum(difference(alpha, m, convention), 2)


def weighted_energy(alpha, m: int, convention: str = PADDED) -> float:
    """``2^{-m} Σ |Δ^m α|²``; equals the symbol's Toeplitz form when padded."""
    return difference_energy(alpha, m, convention) / 2**m
