"""Observed time-convergence orders of the Schwarzian KdV and double-cover residuals."""

from pcflows import evolution as ev
from pcflows.verify import phase_convergence


def main():
    dts = [0.01, 0.005, 0.0025, 0.00125]
    for lam in (0.5, 1.0):
        r = phase_convergence("schwarz", lam, dts, 0.2, 0.2)
        print(f"schwarz lam={lam}: residuals " + " ".join(f"{x:.2e}" for x in r)
              + " | orders " + " ".join(f"{o:.2f}" for o in ev.observed_orders(r)))
    r = phase_convergence("pinkall", 2.0, [2 * d for d in dts], 0.1, 0.4)
    print("double cover: residuals " + " ".join(f"{x:.2e}" for x in r)
          + " | orders " + " ".join(f"{o:.2f}" for o in ev.observed_orders(r)))
    wrong = phase_convergence("pinkall", 2.0, [0.01], 0.1, 0.4, time_scale=1.0)[0]
    print(f"double cover with t = tau (wrong scale): residual {wrong:.2e}")


if __name__ == "__main__":
    main()
