"""Tabulate the inferred relative-bound constant C_eps along N doublings.

C_eps is the smallest C >= 0 with correction_N >= -eps * energy_N - C on the
series N <= N_max, reported for each N_max.
"""

import argparse

from opuc_sumrules import FamilySpec, relative_bound_probe
from opuc_sumrules.sumrule import sumrule_series


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--kind", default="power")
    p.add_argument("--a", type=float, default=0.5)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--eps", default="0,0.1,0.25,0.5,1")
    p.add_argument("--truncations", default="64,128,256,512,1024")
    args = p.parse_args()
    Ns = [int(x) for x in args.truncations.split(",")]
    eps = [float(x) for x in args.eps.split(",")]
    alpha = FamilySpec(args.kind, Ns[-1], {"a": args.a}).generate()
    reports = sumrule_series(alpha, args.m, Ns)

    print("N_max," + ",".join(f"C(eps={e:g})" for e in eps) + ",correction,energy")
    for i, r in enumerate(reports):
        bounds = relative_bound_probe(reports[: i + 1], eps)
        print(f"{r.N}," + ",".join(f"{b.C:.6g}" for b in bounds)
              + f",{r.correction:.6g},{r.energy:.6g}")


if __name__ == "__main__":
    main()
