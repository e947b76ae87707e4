"""Measure the phase of <T,t|gamma,t> by quadrature and compare it with each candidate reading.

Usage: python3 scripts/overlap_arbitration.py [--m 2] [--F 1.5] [--hbar 1] [--csv out.csv]
"""
import argparse
import csv
import sys

from noether_lab import qwave
from noether_lab.report import overlap_tuples


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=float, default=2.0)
    ap.add_argument("--F", type=float, default=1.5)
    ap.add_argument("--hbar", type=float, nargs="+", default=[1.0, 0.5])
    ap.add_argument("--tol", type=float, default=1e-5)
    ap.add_argument("--csv", default=None)
    args = ap.parse_args(argv)

    rows = []
    for hb in args.hbar:
        g = qwave.MomentumGrid(4096, -40.0, 40.0, hbar=hb, m=args.m, F=args.F)
        for T, gam, t in overlap_tuples(g) + [(0.7, -1.3, 0.0)]:
            arb = qwave.arbitrate_overlap(g, T, gam, t)
            rows.append({"hbar": hb, "T": T, "gamma": gam, "t": t, "phase": arb.measured_phase, **arb.deviations, "matches": " ".join(arb.matches(args.tol)) or "-"})

    names = list(qwave.PHASE_CANDIDATES)
    print(f"{'hbar':>5} {'T':>6} {'gamma':>6} {'t':>5} {'phase':>10} " + " ".join(f"{n:>12}" for n in names) + "  matches")
    for r in rows:
        print(f"{r['hbar']:5.2f} {r['T']:6.2f} {r['gamma']:6.2f} {r['t']:5.2f} {r['phase']:10.6f} " + " ".join(f"{r[n]:12.3e}" for n in names) + f"  {r['matches']}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
