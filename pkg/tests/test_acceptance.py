"""Acceptance criteria 1-12, one test each.

Every test records a one-line PASS/FAIL verdict; the lines are echoed at
the end of the pytest run (see ``conftest.py``) and printed inline with
``pytest -s``.
"""

import subprocess
import sys
import time

import numpy as np

from pcflows import evolution as ev
from pcflows import frames as fr
from pcflows import hierarchies as hz
from pcflows import uv
from pcflows.diffpoly import DiffPoly, parse_expr, weight_of
from pcflows.fixtures import closed_legendrian_lift, closed_transverse_lift, sextactic_phase
from pcflows.spectral import Grid1D
from pcflows.verify import boussinesq_zero_curvature, phase_convergence

RESULTS: list[str] = []


def record(n: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n:2d}: {title} | {detail}"
    print(line)
    RESULTS.append(line)
    assert ok, line


def clear_caches():
    for name in dir(hz):
        fn = getattr(hz, name)
        if hasattr(fn, "cache_clear"):
            fn.cache_clear()


def timed(fn):
    clear_caches()
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


U, V = "u", "v"


def test_criterion_01_seeds():
    def run():
        P = lambda s, vars_=(U, V): parse_expr(s, vars_)  # noqa: E731
        checks = [
            hz.boussinesq_flow(0).components == (P("u_x"), P("v_x")),
            hz.boussinesq_flow(1).components == (P("v_x"), P("1/3 u_xxx + 8/3 u u_x")),
            hz.kdv_flow(0)[0] == parse_expr("k_x", ("k",)),
            hz.kdv_flow(1)[0] == parse_expr("k_xxx - 3 k k_x", ("k",)),
            hz.kk_flow(0)[0] == P("u_x"),
            # leading term u_{5}: the printed fourth derivative cannot be
            # homogeneous with the remaining terms
            hz.kk_flow(1)[0] == P("u_{5} + 5 u u_xxx + 25/2 u_x u_xx + 5 u^2 u_x"),
        ]
        return checks
    checks, secs = timed(run)
    record(1, "symbolic seeds", all(checks) and secs < 1.0, f"{sum(checks)}/6 exact in {secs:.3f} s (< 1 s)")


def test_criterion_02_bouthm():
    res, secs = timed(lambda: [hz.verify_bouthm(n) for n in range(5)])
    ok = all(r.passed and all(p.is_zero() for p in r.residual) for r in res)
    record(2, "Boussinesq hierarchy induced for n = 0..4", ok and secs < 30,
           f"{sum(r.passed for r in res)}/5 zero residual in {secs:.2f} s (< 30 s)")


def test_criterion_03_kkthm():
    res, secs = timed(lambda: [hz.verify_kkthm(j) for j in range(3)])
    ok = all(r.passed for r in res)
    record(3, "KK flows u_t = K_{j+2}/9 - 3 K_j for j = 0..2", ok and secs < 60,
           f"{sum(r.passed for r in res)}/3 zero residual in {secs:.2f} s (< 60 s)")


def test_criterion_04_skew():
    B = hz.boussinesq_B()
    ok = B.adjoint() == -B and B == hz.boussinesq_B_symmetric()
    record(4, "operator B is skew-adjoint", ok, "adjoint(B) + B == 0 structurally; both printed forms agree")


def test_criterion_05_constraints():
    nonstretch = [hz.nonstretch_residual(*hz.kk_ah_u(j)) for j in range(3)]
    res = []
    for name, c in (("mikex", hz.mikex_coeffs()), ("sinkex", hz.sinkex_coeffs(0)),
                    ("tgzero", hz.lpreserving_coeffs(-hz.m)), ("tgzero general h", hz.lpreserving_coeffs())):
        fl = hz.transverse_induced_flow(c, check=False)
        res.append((name, fl.constraint1.is_zero() and (fl.constraint2 is None or fl.constraint2.is_zero())))
    ok = all(p.is_zero() for p in nonstretch) and all(r for _, r in res)
    record(5, "constraint identities", ok,
           f"nonstretch zero for j=0..2: {all(p.is_zero() for p in nonstretch)}; "
           + ", ".join(f"{n}: {r}" for n, r in res))


def test_criterion_06_densities():
    fl = hz.transverse_induced_flow(hz.sinkex_coeffs(0))
    flow = {"k": fl.k_t, "m": fl.m_t}
    out = []
    for i, rho in enumerate(hz.sinkex_densities()):
        v = hz.conserved_density_check(rho, flow)
        w = weight_of(rho, hz.TRANSVERSE_WEIGHTS)
        out.append((v.passed, w == 2 * (i + 1), w))
    # the exactness test must reject a density that is not conserved
    k = DiffPoly.var("k")
    control = hz.conserved_density_check(k ** 3, flow).passed
    ok = all(a and b for a, b, _ in out) and not control
    record(6, "sinkex densities rho_1..rho_3", ok,
           "exact: " + ", ".join(str(a) for a, _, _ in out) + "; weights " + ", ".join(str(w) for *_, w in out)
           + f"; k^3 control rejected: {not control}")


def _run(flow, exprs, dt=1e-4, t_end=0.2, N=256):
    g = Grid1D(N, 2 * np.pi)
    return ev.evolve(flow, ev.initial_state(flow, g, exprs), ev.SolverConfig(dt=dt, t_end=t_end, snapshot_stride=100))


def test_criterion_07_preservation():
    kk = _run(ev.preset("kk", lam=9.0), {"k": "0.1*cos(x)"})
    d_kk = float(np.abs(kk.fields["l"] - 1.0).max())
    # lam = 1: l = 1/9 is not exactly representable, so cancellation is not trivial
    kk1 = _run(ev.preset("kk", lam=1.0), {"k": "0.1*cos(x) + 0.05*sin(2*x)"})
    d_kk1 = float(np.abs(kk1.fields["l"] - 1.0 / 9.0).max())
    kdv = _run(ev.preset("kdv"), {"k": "0.3*cos(x) + 0.1*sin(2*x)", "l": "0"})
    d_kdv = float(np.abs(kdv.fields["l"]).max())
    bsq = _run(ev.preset("boussinesq"), {"k": "0.1*cos(x)", "l": "0.05*sin(x)"})
    d_bsq = max(float(np.abs(a.mean(axis=1) - a[0].mean()).max()) for a in bsq.fields.values())
    ok = d_kk < 1e-6 and d_kk1 < 1e-6 and d_kdv < 1e-8 and d_bsq < 1e-9
    record(7, "numeric preservation (N=256, dt=1e-4, t<=0.2)", ok,
           f"KK |l - lam/9| = {d_kk:.1e} (lam=9), {d_kk1:.1e} (lam=1) (< 1e-6); KdV |l| = {d_kdv:.1e} (< 1e-8); "
           f"Boussinesq mean drift = {d_bsq:.1e} (< 1e-9)")


def test_criterion_08_zero_curvature():
    r4 = boussinesq_zero_curvature(256, [0.04, 0.02, 0.01], order=4)
    ratios = [a / b for a, b in zip(r4[:-1], r4[1:])]
    r2 = boussinesq_zero_curvature(256, [0.02, 0.01], order=2)
    small = boussinesq_zero_curvature(256, [1e-4], order=2)[0]
    ok = min(ratios) >= 4 and small < 1e-4
    record(8, "zero-curvature residual (Boussinesq)", ok,
           f"halving ratios {', '.join(f'{x:.2f}' for x in ratios)} (>= 4, five-point stencil); "
           f"midpoint-stencil ratio {r2[0] / r2[1]:.2f}; residual at dt=1e-4 = {small:.1e} (< 1e-4)")


def test_criterion_09_frames():
    g = Grid1D(64)
    # k = cos x, l = 1 from a valid initial frame
    p = fr.InvariantProfile(np.cos(g.x), np.ones(g.N))
    F = fr.frenet_integrate(p, "legendrian", fr.standard_frame(), g, substeps=16)
    _, back = fr.adapt_legendrian(F.gamma, g, jets=[J[:, :, 0] for J in fr.frame_jets(F, p, 3)])
    err = max(float(np.abs(back.k - p.k).max()), float(np.abs(back.l - p.l).max()))
    # closed curve, sampled derivatives only
    fld, prof = fr.adapt_legendrian(closed_legendrian_lift(g), g)
    F = fr.frenet_integrate(prof, "legendrian", fld.frames[0], g, substeps=32)
    _, back = fr.adapt_legendrian(F.gamma, g)
    err = max(err, float(np.abs(back.k - prof.k).max()), float(np.abs(back.l - prof.l).max()))
    g2 = Grid1D(128)
    gt = closed_transverse_lift(g2)
    _, q0 = fr.adapt_transverse(gt, g2)
    gamma = closed_legendrian_lift(g)
    motion = 0.0
    for seed in range(10):
        A = fr.random_su21(1000 + seed)
        _, pp = fr.adapt_legendrian(gamma @ A.T, g)
        _, qq = fr.adapt_transverse(gt @ A.T, g2)
        motion = max(motion, float(np.abs(pp.k - prof.k).max()), float(np.abs(pp.l - prof.l).max()),
                     *(float(np.abs(getattr(qq, n) - getattr(q0, n)).max()) for n in "klm"))
    record(9, "frame round trip and SU(2,1) invariance", err < 1e-6 and motion < 1e-6,
           f"round-trip error {err:.1e} (< 1e-6); max change under 10 motions {motion:.1e} (< 1e-6)")


def test_criterion_10_schwarzian_kdv():
    orders = {}
    for lam in (0.5, 1.0):
        orders[lam] = ev.observed_orders(phase_convergence("schwarz", lam, [0.01, 0.005, 0.0025], 0.2, 0.2))
    dc = ev.observed_orders(phase_convergence("pinkall", 2.0, [0.02, 0.01, 0.005], 0.1, 0.4))
    control = phase_convergence("pinkall", 2.0, [0.01], 0.1, 0.4, time_scale=1.0)[0]
    ok = all(min(o) >= 2 for o in orders.values()) and min(dc) >= 2 and control > 1e-2
    record(10, "Schwarzian KdV and double cover convergence", ok,
           "; ".join(f"lam={k}: orders {', '.join(f'{x:.2f}' for x in o)}" for k, o in orders.items())
           + f"; double cover orders {', '.join(f'{x:.2f}' for x in dc)} (>= 2); t = tau control residual {control:.1e}")


def test_criterion_11_indicatrix():
    g = Grid1D(64)
    phi = sextactic_phase(g)
    k = fr.sextactic_curvature(phi, g.L)
    ind = fr.indicatrix_framing(fr.sextactic_framing(phi, g), k)
    lN = float(np.abs(ind.l_N).max())
    e1 = float(np.abs(ind.k_N - fr.normal_indicatrix_curvature(k, g.L)).max())
    e2 = float(np.abs(ind.k_N - fr.normal_indicatrix_curvature_schwarzian(k, g.L)).max())
    record(11, "sextactic normal indicatrix", lN < 1e-6 and e1 < 1e-8 and e2 < 1e-8,
           f"|l_N| = {lN:.1e} (< 1e-6); k_N error {e1:.1e} / {e2:.1e} for the two formulas (< 1e-8)")


def test_criterion_12_cli_gate():
    t0 = time.perf_counter()
    res = subprocess.run([sys.executable, "-m", "pcflows", "verify", "--suite", "all"],
                         capture_output=True, text=True, check=False)
    secs = time.perf_counter() - t0
    last = res.stdout.strip().splitlines()[-1] if res.stdout.strip() else res.stderr[-200:]
    record(12, "verify --suite all", res.returncode == 0 and secs < 600,
           f"exit {res.returncode}, {secs:.1f} s (< 600 s); {last}")


# keep the symbolic zero-curvature machinery honest alongside criterion 8
def test_boussinesq_V_symbolic_zero_curvature():
    assert uv.is_zero_matrix(uv.legendrian_zero_curvature(hz.boussinesq_coeffs()))
