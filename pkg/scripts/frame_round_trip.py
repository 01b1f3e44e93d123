"""Integrate the Legendrian Frenet system for k = cos x, l = 1 and recover the invariants."""

import argparse

import numpy as np

from pcflows import frames as fr
from pcflows.spectral import Grid1D


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--N", type=int, default=64)
    p.add_argument("--motions", type=int, default=10)
    args = p.parse_args()

    g = Grid1D(args.N)
    prof = fr.InvariantProfile(np.cos(g.x), np.ones(g.N))
    F = fr.frenet_integrate(prof, "legendrian", fr.standard_frame(), g, substeps=16)
    print(f"frame defect along the integration {F.defect():.2e}")
    for i in range(args.motions + 1):
        A = np.eye(3) if i == 0 else fr.random_su21(i)
        jets = [J[:, :, 0] @ A.T for J in fr.frame_jets(F, prof, 3)]
        _, back = fr.adapt_legendrian(jets[0], g, jets=jets)
        label = "identity" if i == 0 else f"motion {i:2d}"
        print(f"{label:>10}: |dk| = {np.abs(back.k - prof.k).max():.2e}  |dl| = {np.abs(back.l - prof.l).max():.2e}")


if __name__ == "__main__":
    main()
