"""Zero-curvature residual of Boussinesq runs under dt refinement, for both time stencils."""

import argparse

from pcflows.verify import boussinesq_zero_curvature


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--N", type=int, default=256)
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--dt0", type=float, default=0.04)
    args = p.parse_args()

    dts = [args.dt0 / 2 ** i for i in range(args.levels)]
    print(f"{'dt':>10} {'midpoint':>12} {'ratio':>7} {'5-point':>12} {'ratio':>7}")
    r2 = boussinesq_zero_curvature(args.N, dts, order=2)
    r4 = boussinesq_zero_curvature(args.N, dts, order=4)
    for i, dt in enumerate(dts):
        q2 = f"{r2[i - 1] / r2[i]:7.2f}" if i else " " * 7
        q4 = f"{r4[i - 1] / r4[i]:7.2f}" if i else " " * 7
        print(f"{dt:10.5f} {r2[i]:12.3e} {q2} {r4[i]:12.3e} {q4}")


if __name__ == "__main__":
    main()
