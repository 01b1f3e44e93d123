"""Evolve the KK preset and report how well l = lam/9 and two conserved densities hold."""

import argparse
from fractions import Fraction

import numpy as np

from pcflows import evolution as ev
from pcflows.diffpoly import DiffPoly
from pcflows.spectral import Grid1D


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--lam", type=float, default=9.0)
    p.add_argument("--N", type=int, default=256)
    p.add_argument("--dt", type=float, default=1e-4)
    p.add_argument("--tend", type=float, default=0.2)
    p.add_argument("--init-k", default="0.1*cos(x) + 0.05*sin(2*x)")
    p.add_argument("--out", help="optional run JSON")
    args = p.parse_args()

    flow = ev.preset("kk", lam=args.lam)
    g = Grid1D(args.N)
    tr = ev.evolve(flow, ev.initial_state(flow, g, {"k": args.init_k}),
                   ev.SolverConfig(dt=args.dt, t_end=args.tend, snapshot_stride=10))
    k = DiffPoly.var("k")
    # the second density is found by hz.conserved_density_check along hz.KK_RHS
    tab = ev.monitor_densities(tr, [k, k ** 3 + Fraction(3, 8) * k.dx() ** 2], ["k", "k^3 + 3/8 k_x^2"])
    print(f"snapshots {len(tr)}, t_final {tr.times[-1]:.4g}")
    print(f"max |l - lam/9| = {np.abs(tr.fields['l'] - args.lam / 9).max():.3e}")
    for row in tab.rows():
        print(f"density {row['density']}: relative drift {row['max_rel_drift']:.3e}")
    # generated modes n rotate at frequency ~n^5, so the time stencil needs
    # snapshots far denser than the ones above; use a short window
    for spacing in (1e-4, 5e-5, 2.5e-5):
        short = ev.evolve(flow, ev.initial_state(flow, g, {"k": args.init_k}),
                          ev.SolverConfig(dt=2.5e-5, t_end=0.005, snapshot_stride=round(spacing / 2.5e-5)))
        print(f"zero-curvature residual, snapshot spacing {spacing:.1e}: "
              f"{ev.zero_curvature_residual(short, order=4).max:.3e}")
    if args.out:
        ev.write_run_json(tr, args.out)


if __name__ == "__main__":
    main()
