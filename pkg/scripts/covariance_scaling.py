"""How the equation-of-motion residual of a transformed trajectory scales with eps.

For generators linear in (q, p) (every charge of the constant-force and
oscillator models) the flow is exactly linear and the eps**2 term is absent:
what remains is round-off or an O(eps h**2) cross term with the integrator
error.  The quartic oscillator H = p^2/2 + q^4/4 shows the genuine eps**2 term.

Usage: python3 scripts/covariance_scaling.py [--h 1e-3] [--n 400]
"""
import argparse
import sys

import numpy as np

from noether_lab import models, noether
from noether_lab.integrate import verlet
from noether_lab.phasespace import Observable, SystemSpec, make_state

EPS = (1e-2, 5e-3, 2.5e-3, 1.25e-3)


def quartic():
    H = Observable(lambda q, p, t: 0.5 * p[0] ** 2 + 0.25 * q[0] ** 4, 1, "H")
    return SystemSpec(1, H, "quartic", separable=True, grad_q=lambda q, p: q**3, grad_p=lambda q, p: p)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--h", type=float, default=1e-3)
    ap.add_argument("--n", type=int, default=400)
    args = ap.parse_args(argv)

    cf = models.constant_force_system(1.0, [1.0])
    osc = models.harmonic_system([1.0])
    qs = quartic()
    cases = [
        ("constant_force H", cf.system.hamiltonian, cf.system),
        ("constant_force T0", cf.T(0), cf.system),
        ("constant_force gamma0", cf.gamma(0), cf.system),
        ("harmonic ReA0", osc.charges["ReA0"], osc.system),
        ("quartic H", qs.hamiltonian, qs),
    ]
    s0 = make_state([1.0], [0.2], 0.0)
    print(f"excess = max |series(eps) - series(0)|, h = {args.h}, n = {args.n}")
    print(f"{'generator':>22} " + " ".join(f"{e:>10.2e}" for e in EPS) + "   successive ratios")
    for name, f, sys_ in cases:
        traj = verlet(sys_, s0, args.h, args.n)
        base = noether.covariance_series(f, sys_, traj, 0.0)
        ex = [float(np.max(np.abs(noether.covariance_series(f, sys_, traj, e) - base))) for e in EPS]
        ratios = [a / b if b else float("inf") for a, b in zip(ex, ex[1:])]
        print(f"{name:>22} " + " ".join(f"{e:10.2e}" for e in ex) + "   " + " ".join(f"{r:6.2f}" for r in ratios))
    return 0


if __name__ == "__main__":
    sys.exit(main())
