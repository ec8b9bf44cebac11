"""Command-line front end.

Exit status: 0 on success, 1 on validation errors, 2 on numerical failures.
Errors go to stderr as a single ``error: <Kind>: <message>`` line.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import formats
from .differences import (
    INTERIOR,
    PADDED,
    difference_energy,
    toeplitz_quadratic_form,
    weight_symbol_coeffs,
)
from .errors import BadParameter, NumericalFailure, SumRuleError, ValidationError
from .families import SWEEP_COLUMNS, load_specs, sweep
from .opuc import (
    bernstein_szego_weight,
    default_grid_size,
    moments_from_weight,
    verblunsky_from_moments,
)
from .residual import phi_power_substitute, telescoping_partial_sums
from .sumrule import EXACT, QUADRATURE, REPORT_COLUMNS, necessity_probe, sumrule_series


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise BadParameter(f"expected comma-separated integers, got {text!r}") from exc


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise BadParameter(f"cannot read {path}: {exc.strerror}") from exc


def _human(csv_text: str) -> str:
    rows = [line.split(",") for line in csv_text.strip().splitlines()]
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows) + "\n"


def _emit(out, text: str, human: bool = False):
    out.write(_human(text) if human else text)


def cmd_verblunsky(args, out):
    moments = formats.moments_from_json(_read(args.input))
    alpha = verblunsky_from_moments(moments, args.count)
    out.write(formats.alpha_to_json(alpha))


def cmd_weight(args, out):
    alpha = formats.alpha_from_json(_read(args.input))
    grid = args.grid or default_grid_size(len(alpha))
    out.write(formats.weight_to_csv(bernstein_szego_weight(alpha, grid)))


def cmd_moments(args, out):
    w = formats.weight_from_csv(_read(args.input))
    out.write(formats.moments_to_json(moments_from_weight(w, args.count)))


def cmd_sumrule(args, out):
    alpha = formats.alpha_from_json(_read(args.input)).values
    Ns = _int_list(args.truncations)
    method = EXACT if args.exact else QUADRATURE
    reports = sumrule_series(alpha, args.m, Ns, lambda N: default_grid_size(N, args.grid_factor),
                             method)
    rows = [r.to_dict() for r in reports]
    _emit(out, formats.format_rows(rows, REPORT_COLUMNS), args.human)


def cmd_energy(args, out):
    alpha = formats.alpha_from_json(_read(args.input)).values
    sym = weight_symbol_coeffs(args.m)
    raw = difference_energy(alpha, args.m, args.convention)
    row = {
        "m": args.m,
        "convention": args.convention,
        "length": alpha.size,
        "raw_energy": raw,
        "weighted_energy": raw / 2**args.m,
        "toeplitz_form": toeplitz_quadratic_form(alpha, sym),
        "symbol": " ".join(str(sym.coeff(ell)) for ell in range(-args.m, args.m + 1)),
    }
    _emit(out, formats.format_rows([row], list(row)), args.human)


def cmd_residual(args, out):
    poly = formats.residual_from_json(_read(args.poly))
    alpha = formats.alpha_from_json(_read(args.alpha)).values
    a = phi_power_substitute(alpha, 0, args.power)
    cert = telescoping_partial_sums(poly, a, k=args.k, A=args.A)
    rows = [{"N": n, "partial_sum": s} for n, s in zip(cert.N_list, cert.partial_sums)]
    out.write(formats.format_rows(rows, ("N", "partial_sum")))
    out.write(f"# certificate: {cert.summary()}\n")
    if not cert.holds:
        raise NumericalFailure(f"certificate violated: {cert.summary()}")


def cmd_probe(args, out):
    specs = load_specs(_read(args.input))
    if len(specs) != 1:
        raise BadParameter("probe takes exactly one family spec")
    Ns = _int_list(args.truncations)
    method = EXACT if args.exact else QUADRATURE
    verdict = necessity_probe(specs[0], args.m, Ns, method=method,
                              atol=args.atol, rtol=args.rtol, threshold=args.threshold)
    out.write(json.dumps(verdict.to_dict(), indent=2) + "\n")


def cmd_sweep(args, out):
    specs = load_specs(_read(args.input))
    method = EXACT if args.exact else QUADRATURE
    rows = sweep(specs, _int_list(args.m), _int_list(args.truncations), method=method)
    text = formats.format_rows(rows, SWEEP_COLUMNS)
    if args.out:
        Path(args.out).write_text(text)
    else:
        _emit(out, text, args.human)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="opuc-sumrules", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("verblunsky", help="moments JSON -> coefficient JSON")
    s.add_argument("input", nargs="?", default="-")
    s.add_argument("--count", type=int, default=None, help="number of coefficients (default K)")
    s.set_defaults(func=cmd_verblunsky)

    s = sub.add_parser("weight", help="coefficient JSON -> Bernstein-Szego weight CSV")
    s.add_argument("input", nargs="?", default="-")
    s.add_argument("--grid", type=int, default=None)
    s.set_defaults(func=cmd_weight)

    s = sub.add_parser("moments", help="weight CSV -> moments JSON")
    s.add_argument("input", nargs="?", default="-")
    s.add_argument("--count", type=int, required=True, help="highest moment index K")
    s.set_defaults(func=cmd_moments)

    s = sub.add_parser("sumrule", help="coefficient JSON -> report CSV")
    s.add_argument("input", nargs="?", default="-")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--truncations", required=True, help="comma-separated N values")
    s.add_argument("--grid-factor", type=int, default=8)
    s.add_argument("--exact", action="store_true", help="quadrature-free spectral side")
    s.add_argument("--human", action="store_true")
    s.set_defaults(func=cmd_sumrule)

    s = sub.add_parser("energy", help="coefficient JSON -> difference energy table")
    s.add_argument("input", nargs="?", default="-")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--convention", choices=(PADDED, INTERIOR), default=PADDED)
    s.add_argument("--human", action="store_true")
    s.set_defaults(func=cmd_energy)

    s = sub.add_parser("residual", help="residual polynomial + coefficients -> certificate")
    s.add_argument("poly")
    s.add_argument("alpha")
    s.add_argument("--k", type=int, default=3, help="divisibility order")
    s.add_argument("--power", type=int, default=3, help="a_n = |alpha_n|^(2*power)")
    s.add_argument("--A", type=float, default=1.0, help="a priori bound on |a_n|")
    s.set_defaults(func=cmd_residual)

    s = sub.add_parser("probe", help="family spec JSON -> necessity verdict JSON")
    s.add_argument("input", nargs="?", default="-")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--truncations", default="64,128,256,512,1024")
    s.add_argument("--atol", type=float, default=1e-3)
    s.add_argument("--rtol", type=float, default=1e-3)
    s.add_argument("--threshold", type=float, default=None)
    s.add_argument("--exact", action="store_true")
    s.set_defaults(func=cmd_probe)

    s = sub.add_parser("sweep", help="family spec list -> dataset CSV")
    s.add_argument("input", nargs="?", default="-")
    s.add_argument("--m", default="1,2,3")
    s.add_argument("--truncations", default="64,128,256")
    s.add_argument("--out", default=None)
    s.add_argument("--exact", action="store_true")
    s.add_argument("--human", action="store_true")
    s.set_defaults(func=cmd_sweep)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        args.func(args, out)
    except NumericalFailure as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2
    except SumRuleError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
