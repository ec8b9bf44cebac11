"""Residual polynomials ``R(P) = Σ_j c_j P^j`` and their telescoping certificates.

``P^j`` substitutes to the shifted power ``|α_{n+j}|^{2k}``, so ``R(P)``
acts on ``a_n = |α_n|^{2k}`` as the difference operator ``Σ_j c_j S^j``.
When the moments ``Σ_j c_j j^ℓ`` vanish for ``ℓ < k`` that operator equals
``(S - 1)^k b(S)`` and its partial sums collapse to boundary values.

Coefficients are exact :class:`fractions.Fraction` objects throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import BadParameter, NotDivisible
from .opuc import as_alpha


def _fraction(x) -> Fraction:
    try:
        return Fraction(x)
    except (TypeError, ValueError) as exc:
        raise BadParameter(f"coefficient {x!r} is not rational") from exc


@dataclass(frozen=True)
class ResidualPolynomial:
    c: tuple[Fraction, ...]
    required_order: int = 2

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(_fraction(x) for x in self.c))
        if self.required_order < 0:
            raise BadParameter("required_order must be >= 0")

    @property
    def J(self) -> int:
        return len(self.c) - 1

    def moment(self, ell: int) -> Fraction:
        # Python's 0**0 == 1, so ell = 0 counts the j = 0 coefficient
        return sum((cj * j**ell for j, cj in enumerate(self.c)), Fraction(0))


@dataclass(frozen=True)
class QuotientStencil:
    """``b`` with ``Σ c_j z^j = (z - 1)^k Σ b_i z^i``."""

    b: tuple[Fraction, ...]
    k: int

    def expand(self) -> tuple[Fraction, ...]:
        out = list(self.b)
        for _ in range(self.k):
            out = [Fraction(0)] + out  # z * out
            for i in range(len(out) - 1):
                out[i] -= out[i + 1]
        return tuple(out)

    @property
    def l1(self) -> Fraction:
        return sum((abs(x) for x in self.b), Fraction(0))


def phi_power_substitute(alpha, j: int, k: int) -> np.ndarray:
    """``n ↦ |α_{n+j}|^{2k}`` for ``n = 0..N-1-j``."""
    if j < 0:
        raise BadParameter("j must be >= 0")
    if k not in (1, 2, 3):
        raise BadParameter("k must be 1, 2 or 3")
    a = as_alpha(alpha)
    return np.abs(a[j:]) ** (2 * k)


def moment_conditions(poly: ResidualPolynomial) -> list[bool]:
    return [poly.moment(ell) == 0 for ell in range(poly.required_order + 1)]


def _divide_once(c: Sequence[Fraction]) -> tuple[list[Fraction], Fraction]:
    """Synthetic division of ``Σ c_j z^j`` by ``z - 1``: (quotient, remainder)."""
    acc = Fraction(0)
    q_desc = []
    for coef in reversed(c):
        acc += coef
        q_desc.append(acc)
    rem = q_desc.pop()
    return list(reversed(q_desc)), rem


def divide_by_difference(poly: ResidualPolynomial, k: int) -> QuotientStencil:
    if k < 0:
        raise BadParameter("k must be >= 0")
    c = list(poly.c)
    for step in range(k):
        if not c:
            break
        c, rem = _divide_once(c)
        if rem != 0:
            raise NotDivisible(f"remainder {rem} after {step} divisions by (z - 1)")
    return QuotientStencil(b=tuple(c) or (Fraction(0),), k=k)


@dataclass(frozen=True)
class TelescopingCertificate:
    c: tuple[Fraction, ...]
    b: tuple[Fraction, ...]
    k: int
    A: float
    bound: float
    N_list: tuple[int, ...]
    partial_sums: np.ndarray

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.partial_sums))) if self.partial_sums.size else 0.0

    @property
    def holds(self) -> bool:
        return self.max_abs <= self.bound

    def summary(self) -> str:
        rel = "<=" if self.holds else ">"
        return f"divisible; bound B={self.bound:.17g}; max|S_N|={self.max_abs:.17g} {rel} B"


def certified_bound(quotient: QuotientStencil, A: float) -> float:
    """Bound on ``|Σ_{n=0}^N Σ_j c_j a_{n+j}|`` for ``|a_n| <= A``.

    The sum equals ``(Δ^{k-1} g)_{N+1} - (Δ^{k-1} g)_0`` with ``g = b(S) a``:
    two boundary terms, each at most ``2^{k-1} ||g||_∞ <= 2^{k-1} A Σ|b_i|``.
    For ``k = 0`` there is no telescoping and no finite certificate.
    """
    if quotient.k == 0:
        return math.inf
    return 2 * 2 ** (quotient.k - 1) * A * float(quotient.l1)


def telescoping_partial_sums(
    poly: ResidualPolynomial,
    a,
    N_list: Iterable[int] | None = None,
    k: int = 3,
    A: float | None = None,
) -> TelescopingCertificate:
    """Brute-force ``S_N = Σ_{n=0}^N Σ_j c_j a_{n+j}`` next to its certificate.

    ``a`` is zero beyond its window.  ``A`` defaults to ``max |a_n|``.
    """
    quotient = divide_by_difference(poly, k)
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    if A is None:
        A = float(np.max(np.abs(a))) if a.size else 0.0
    if a.size and np.max(np.abs(a)) > A:
        raise BadParameter(f"sequence exceeds the stated bound A={A}")
    Ns = tuple(range(a.size)) if N_list is None else tuple(int(n) for n in N_list)
    length = max(Ns) + 1 if Ns else 0
    padded = np.zeros(length + len(poly.c))
    padded[: min(a.size, padded.size)] = a[: padded.size]
    local = np.zeros(length)
    for j, cj in enumerate(poly.c):
        if cj:
            local += float(cj) * padded[j : j + length]
    sums = np.cumsum(local)
    return TelescopingCertificate(
        c=poly.c,
        b=quotient.b,
        k=k,
        A=float(A),
        bound=certified_bound(quotient, float(A)),
        N_list=Ns,
        partial_sums=sums[list(Ns)] if Ns else np.zeros(0),
    )
