"""Deterministic Verblunsky families and the sweep runner.

Random draws use NumPy's PCG64 bit generator seeded with a 64-bit integer,
so every family is reproducible bit-for-bit across platforms.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import BadParameter
from .opuc import default_grid_size
from .sumrule import QUADRATURE, parallel_map, sumrule_report

KINDS = ("power", "logdecay", "oscillatory", "alternating", "sparse", "random")
AMPLITUDE_CAP = 0.95
SWEEP_COLUMNS = (
    "family", "kind", "params", "m", "N", "grid_size",
    "spectral", "energy", "log_sum", "lp_raw", "correction",
)

_DEFAULTS = {
    "power": {"a": 0.5, "gamma": 1.0},
    "logdecay": {"a": 0.5},
    "oscillatory": {"a": 0.5, "gamma": 1.0, "phi": 1.0},
    "alternating": {"a": 0.5},
    "sparse": {"a": 0.5, "gap": 1},
    "random": {"a": 0.5, "seed": 0},
}


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    N: int
    params: dict = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BadParameter(f"unknown family kind {self.kind!r}")
        unknown = set(self.params) - set(_DEFAULTS[self.kind])
        if unknown:
            raise BadParameter(f"{self.kind}: unknown parameters {sorted(unknown)}")
        if int(self.N) != self.N or self.N < 0:
            raise BadParameter(f"N={self.N!r} must be a nonnegative integer")
        merged = {**_DEFAULTS[self.kind], **self.params}
        _check_params(self.kind, merged)
        object.__setattr__(self, "params", merged)
        object.__setattr__(self, "N", int(self.N))
        if not self.label:
            object.__setattr__(self, "label", f"{self.kind}({self.param_string()})")

    def param_string(self) -> str:
        return ";".join(f"{k}={v!r}" for k, v in sorted(self.params.items()))

    def generate(self) -> np.ndarray:
        return generate(self)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "N": self.N, "params": dict(self.params), "label": self.label}

    @classmethod
    def from_dict(cls, d: dict) -> "FamilySpec":
        try:
            return cls(kind=d["kind"], N=d["N"], params=dict(d.get("params", {})),
                       label=d.get("label", ""))
        except KeyError as exc:
            raise BadParameter(f"family spec lacks field {exc}") from exc


def _check_params(kind: str, p: dict) -> None:
    a = p["a"]
    if not 0 < a <= AMPLITUDE_CAP:
        raise BadParameter(f"amplitude a={a!r} must lie in (0, {AMPLITUDE_CAP}]")
    if kind == "logdecay" and a / np.log(2.0) > AMPLITUDE_CAP:
        # α_0 = a / log 2 is the largest entry
        raise BadParameter(f"logdecay needs a <= {AMPLITUDE_CAP * np.log(2.0):.4f} so that |α_0| <= cap")
    if "gamma" in p and not p["gamma"] > 0:
        raise BadParameter(f"gamma={p['gamma']!r} must be > 0")
    if "gap" in p and (int(p["gap"]) != p["gap"] or p["gap"] < 1):
        raise BadParameter(f"gap={p['gap']!r} must be an integer >= 1")
    if "seed" in p and (int(p["seed"]) != p["seed"] or not 0 <= p["seed"] < 2**64):
        raise BadParameter(f"seed={p['seed']!r} must be an integer in [0, 2^64)")
    if "phi" in p and not np.isfinite(p["phi"]):
        raise BadParameter("phase must be finite")


def uniform_disk(rng: np.random.Generator, size: int, radius: float) -> np.ndarray:
    """i.i.d. uniform points of the open disk by rejection from the square."""
    out = np.empty(size, dtype=np.complex128)
    filled = 0
    while filled < size:
        batch = max(16, 2 * (size - filled))
        x = rng.uniform(-1.0, 1.0, batch)
        y = rng.uniform(-1.0, 1.0, batch)
        keep = x * x + y * y < 1.0
        z = (x[keep] + 1j * y[keep])[: size - filled]
        out[filled : filled + z.size] = z
        filled += z.size
    return radius * out


def generate(spec: FamilySpec) -> np.ndarray:
    p, N = spec.params, spec.N
    n = np.arange(N, dtype=np.float64)
    a = float(p["a"])
    if spec.kind == "power":
        out = a * (n + 2.0) ** (-float(p["gamma"]))
    elif spec.kind == "logdecay":
        out = a / np.log(n + 2.0)
    elif spec.kind == "oscillatory":
        out = a * np.exp(1j * n * float(p["phi"])) * (n + 2.0) ** (-float(p["gamma"]))
    elif spec.kind == "alternating":
        out = a * np.where(np.arange(N) % 2 == 0, 1.0, -1.0)
    elif spec.kind == "sparse":
        out = np.zeros(N)
        idx = int(p["gap"])
        while idx < N:
            out[idx] = a
            idx *= 2
    else:
        rng = np.random.Generator(np.random.PCG64(int(p["seed"])))
        out = uniform_disk(rng, N, a)
    return np.asarray(out, dtype=np.complex128)


def load_specs(text: str) -> list[FamilySpec]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadParameter(f"invalid JSON: {exc}") from exc
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list) or not all(isinstance(d, dict) for d in data):
        raise BadParameter("expected a family spec object or a list of them")
    return [FamilySpec.from_dict(d) for d in data]


def sweep(
    specs: Sequence[FamilySpec],
    m_list: Sequence[int],
    N_list: Sequence[int],
    grid_rule: Callable[[int], int] = default_grid_size,
    method: str = QUADRATURE,
) -> list[dict]:
    """Evaluate every ``(spec, m, N)`` and return rows in :data:`SWEEP_COLUMNS` order."""
    for spec in specs:
        if any(N > spec.N for N in N_list):
            raise BadParameter(f"{spec.label}: N_list exceeds generated length {spec.N}")
    alphas = {id(s): s.generate() for s in specs}
    jobs = list(itertools.product(specs, m_list, N_list))

    def run(job):
        spec, m, N = job
        r = sumrule_report(alphas[id(spec)], m, N, grid_rule(N), method)
        return {"family": spec.label, "kind": spec.kind, "params": spec.param_string(),
                **{k: getattr(r, k) for k in SWEEP_COLUMNS[3:]}}

    return parallel_map(run, jobs)
