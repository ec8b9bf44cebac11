"""Sweep the standard families over m = 1..3 and print a necessity verdict for each.

    python3 scripts/necessity_trends.py --out trends.csv
"""

import argparse

from opuc_sumrules import FamilySpec, necessity_probe, sweep
from opuc_sumrules.families import SWEEP_COLUMNS
from opuc_sumrules.formats import format_rows

FAMILIES = [
    FamilySpec("power", 2048, {"a": 0.5, "gamma": 1.0}),
    FamilySpec("oscillatory", 2048, {"a": 0.5, "gamma": 1.0, "phi": 1.0}),
    FamilySpec("logdecay", 2048, {"a": 0.6}),
    FamilySpec("sparse", 2048, {"a": 0.5, "gap": 3}),
    FamilySpec("alternating", 2048, {"a": 0.5}),
]


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--truncations", default="128,256,512,1024,2048")
    p.add_argument("--out", default=None, help="write the full sweep CSV here")
    p.add_argument("--exact", action="store_true", help="quadrature-free spectral side")
    args = p.parse_args()
    Ns = [int(x) for x in args.truncations.split(",")]
    method = "exact" if args.exact else "quadrature"

    for spec in FAMILIES:
        for m in (1, 2, 3):
            v = necessity_probe(spec, m, Ns, method=method)
            z = [r.spectral for r in v.series]
            print(f"{spec.label:40s} m={m}  Z(N_max)={z[-1]:12.6g}  "
                  f"bounded={v.spectral_bounded!s:5s} energy={v.energy_converged!s:5s} "
                  f"lp={v.lp_converged!s:5s}  {v.text}")
    if args.out:
        rows = sweep(FAMILIES, [1, 2, 3], Ns, method=method)
        with open(args.out, "w") as fh:
            fh.write(format_rows(rows, SWEEP_COLUMNS))


if __name__ == "__main__":
    main()
