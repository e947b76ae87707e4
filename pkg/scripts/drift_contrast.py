"""Charge drift of Verlet, implicit midpoint and RK4 on the constant-force and oscillator models.

The constant-force charges T and gamma do not commute with H, yet all three
integrators hold them to round-off; on the oscillator the symplectic methods
keep the energy error bounded while RK4 drifts secularly.

Usage: python3 scripts/drift_contrast.py [--h 0.01] [--n 10000]
"""
import argparse
import sys

import numpy as np

from noether_lab import integrate as integ
from noether_lab import models
from noether_lab.phasespace import make_state


def _max_drift(tr, f):
    return float(np.max(np.abs(integ.drift(tr, f))))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--h", type=float, default=0.01)
    ap.add_argument("--n", type=int, default=10_000)
    args = ap.parse_args(argv)

    cf = models.constant_force_system(1.0, [1.0])
    osc = models.harmonic_system([1.0])
    print(f"h = {args.h}, n = {args.n}")
    print(f"{'method':>9} {'cf T0':>10} {'cf gamma0':>10} {'H 1st 10%':>10} {'H last 10%':>10} {'osc ReA0':>10}")
    for method in integ.METHODS:
        a = integ.integrate(method, cf.system, make_state([0.2], [-0.3], 0.0), args.h, args.n)
        b = integ.integrate(method, osc.system, make_state([1.0], [0.0], 0.0), args.h, args.n)
        dH = np.abs(integ.drift(b, osc.system.hamiltonian))
        k = max(1, len(dH) // 10)
        early, late = float(np.max(dH[:k])), float(np.max(dH[-k:]))
        print(
            f"{method:>9} {_max_drift(a, cf.T(0)):10.2e} {_max_drift(a, cf.gamma(0)):10.2e} "
            f"{early:10.2e} {late:10.2e} {_max_drift(b, osc.charges['ReA0']):10.2e}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
