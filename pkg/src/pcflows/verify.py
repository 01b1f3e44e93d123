"""Property suites behind ``pcflows verify``.

Every check is a named callable returning ``(passed, value, threshold,
detail)``.  Suites run checks on a thread pool (``PCFLOWS_WORKERS``) and
assemble the report in definition order, so the output does not depend on
scheduling.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import evolution as ev
from . import frames as fr
from . import hierarchies as hz
from . import uv
from .diffpoly import DiffPoly, d_x_inverse, euler_op, parse_expr, weight_of
from .fixtures import closed_legendrian_lift, closed_transverse_lift, hopf_fiber_lift, sextactic_phase
from .spectral import Grid1D

SUITES = ("algebra", "theorems", "densities", "numeric")


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    value: float | None
    threshold: float | None
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        num = "" if self.value is None else f"  value={self.value:.3e}"
        thr = "" if self.threshold is None else f" (< {self.threshold:.0e})"
        return f"[{mark}] {self.suite}/{self.name}{num}{thr}  {self.detail}".rstrip()


@dataclass
class Report:
    results: list[CheckResult]
    seconds: float

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[str]:
        return [f"{r.suite}/{r.name}" for r in self.results if not r.passed]

    def to_json(self) -> dict:
        return {"passed": self.passed, "failures": self.failures,
                "n_checks": len(self.results), "seconds": round(self.seconds, 3),
                "results": [asdict(r) for r in self.results]}

    def summary(self) -> str:
        lines = [r.line() for r in self.results]
        n_ok = sum(r.passed for r in self.results)
        lines.append(f"{n_ok}/{len(self.results)} checks passed in {self.seconds:.1f} s")
        return "\n".join(lines)


Check = Callable[[bool], tuple]
_REGISTRY: dict[str, list[tuple[str, Check]]] = {s: [] for s in SUITES}


def check(suite: str, name: str):
    def deco(fn):
        _REGISTRY[suite].append((name, fn))
        return fn
    return deco


def _zero(polys) -> tuple:
    polys = list(polys)
    bad = [str(p) for p in polys if not p.is_zero()]
    return (not bad, None, None, "; ".join(bad)[:300])


def _verification(v: hz.Verification) -> tuple:
    bad = [str(r) for r in v.residual if not r.is_zero()]
    return (v.passed, None, None, v.detail or "; ".join(bad)[:300])


# -- algebra ------------------------------------------------------------------

_k, _l, _m, _u, _v = (DiffPoly.var(n) for n in "klmuv")


@check("algebra", "boussinesq seeds")
def _seeds_bsq(fast):
    f0 = hz.boussinesq_flow(0).components
    f1 = hz.boussinesq_flow(1).components
    want0 = [_u.dx(), _v.dx()]
    want1 = [_v.dx(), DiffPoly.scalar(hz.F(1, 3)) * _u.dx(3) + hz.F(8, 3) * _u * _u.dx()]
    return _zero([a - b for a, b in zip(list(f0) + list(f1), want0 + want1)])


@check("algebra", "kdv seeds")
def _seeds_kdv(fast):
    return _zero([hz.kdv_flow(0)[0] - _k.dx(), hz.kdv_flow(1)[0] - (_k.dx(3) - 3 * _k * _k.dx())])


@check("algebra", "kk seeds")
def _seeds_kk(fast):
    K1 = _u.dx(5) + 5 * _u * _u.dx(3) + hz.F(25, 2) * _u.dx() * _u.dx(2) + 5 * _u * _u * _u.dx()
    return _zero([hz.kk_flow(0)[0] - _u.dx(), hz.kk_flow(1)[0] - K1])


@check("algebra", "B skew-adjoint")
def _skew(fast):
    B = hz.boussinesq_B()
    ok = B.adjoint() == -B and B == hz.boussinesq_B_symmetric()
    return (ok, None, None, "")


@check("algebra", "homotopy inverse of D")
def _dinv(fast):
    samples = ["k*k_x*l_xx", "k^3*k_x + l*l_xxx", "k_x^2*k_xx", "u*v_x + u_x*v"]
    bad = []
    for s in samples:
        p = parse_expr(s, ("k", "l", "u", "v"))
        if d_x_inverse(p.dx()).dx() != p.dx() or any(not euler_op(p.dx(), n).is_zero() for n in p.variables()):
            bad.append(s)
    return (not bad, None, None, ", ".join(bad))


@check("algebra", "legendrian zero curvature (general a, h)")
def _zc_leg(fast):
    c = hz.LegendrianFlowCoeffs(DiffPoly.var("a"), DiffPoly.var("h"))
    return (uv.is_zero_matrix(uv.legendrian_zero_curvature(c)), None, None, "")


@check("algebra", "boussinesq V matches explicit matrix")
def _bsq_v(fast):
    V = uv.legendrian_V_sym(hz.boussinesq_coeffs())
    W = uv.boussinesq_V_printed()
    return (all((a - b).is_zero() for ra, rb in zip(V, W) for a, b in zip(ra, rb)), None, None, "")


@check("algebra", "transverse zero curvature (presets)")
def _zc_tr(fast):
    bad = [n for n, c in (("mikex", hz.mikex_coeffs()), ("sinkex", hz.sinkex_coeffs(0)),
                          ("tgzero", hz.lpreserving_coeffs()))
           if not uv.is_zero_matrix(uv.transverse_zero_curvature(c))]
    return (not bad, None, None, ", ".join(bad))


@check("algebra", "weight homogeneity of flows")
def _weights(fast):
    ok = all(hz.boussinesq_weights_ok(hz.boussinesq_flow(n)) for n in range(3))
    ok &= all(weight_of(hz.kdv_flow(j)[0], hz.KDV_WEIGHTS) == 2 * j + 3 for j in range(3))
    return (ok, None, None, "")


# -- theorems -----------------------------------------------------------------

for _n in range(5):
    check("theorems", f"bouthm n={_n}")(lambda fast, n=_n: _verification(hz.verify_bouthm(n)))
for _j in range(3):
    check("theorems", f"sexthm j={_j}")(lambda fast, j=_j: _verification(hz.verify_sexthm(j)))
for _j in range(3):
    check("theorems", f"kkthm j={_j}")(lambda fast, j=_j: _verification(hz.verify_kkthm(j)))


@check("theorems", "kk reduction at l = lam/9")
def _kkred(fast):
    return _verification(hz.verify_kk_reduction())


@check("theorems", "kkr is the h = 9 potential flow")
def _kkanons(fast):
    return _verification(hz.kkr_as_anons())


@check("theorems", "nonstretch for kk_ah(j), j=0..2")
def _nonstretch(fast):
    return _zero(hz.nonstretch_residual(*hz.kk_ah_u(j)) for j in range(3))


@check("theorems", "transverse constraints (mikex, sinkex, tgzero)")
def _constraints(fast):
    res = []
    for c in (hz.mikex_coeffs(), hz.sinkex_coeffs(0), hz.lpreserving_coeffs(-hz.m)):
        fl = hz.transverse_induced_flow(c, check=False)
        res.append(fl.constraint1)
        if fl.constraint2 is not None:
            res.append(fl.constraint2)
    return _zero(res)


# -- densities -----------------------------------------------------------------

def _sinkex_flow():
    fl = hz.transverse_induced_flow(hz.sinkex_coeffs(0))
    return {"k": fl.k_t, "m": fl.m_t}


for _i in range(3):
    def _dens(fast, i=_i):
        rho = hz.sinkex_densities()[i]
        v = hz.conserved_density_check(rho, _sinkex_flow(), f"rho{i + 1}")
        w = weight_of(rho, hz.TRANSVERSE_WEIGHTS)
        ok = v.passed and w == 2 * (i + 1)
        return (ok, None, None, f"weight {w}")
    check("densities", f"rho{_i + 1} conserved along sinkex")(_dens)


@check("densities", "k^3 not conserved along sinkex (control)")
def _dens_control(fast):
    v = hz.conserved_density_check(_k * _k * _k, _sinkex_flow(), "k^3")
    return (not v.passed, None, None, "correctly rejected" if not v.passed else "unexpectedly exact")


# -- numeric ---------------------------------------------------------------------

@check("numeric", "kk preserves l = lam/9")
def _pres_kk(fast):
    g = Grid1D(128 if fast else 256)
    f = ev.preset("kk", lam=9.0)
    tr = ev.evolve(f, ev.initial_state(f, g, {"k": "0.1*cos(x)"}),
                   ev.SolverConfig(dt=1e-4, t_end=0.05 if fast else 0.2, snapshot_stride=100))
    v = float(np.abs(tr.fields["l"] - 1.0).max())
    return (v < 1e-6, v, 1e-6, "")


@check("numeric", "kdv reduction preserves l = 0")
def _pres_kdv(fast):
    g = Grid1D(128 if fast else 256)
    f = ev.preset("kdv")
    tr = ev.evolve(f, ev.initial_state(f, g, {"k": "0.1*cos(x)", "l": "0"}),
                   ev.SolverConfig(dt=1e-4, t_end=0.05 if fast else 0.2, snapshot_stride=100))
    v = float(np.abs(tr.fields["l"]).max())
    return (v < 1e-8, v, 1e-8, "")


@check("numeric", "boussinesq conserves means")
def _pres_bsq(fast):
    g = Grid1D(128 if fast else 256)
    f = ev.preset("boussinesq")
    tr = ev.evolve(f, ev.initial_state(f, g, {"k": "0.1*cos(x)", "l": "0"}),
                   ev.SolverConfig(dt=1e-3, t_end=0.2, snapshot_stride=10))
    v = max(float(np.abs(a.mean(axis=1) - a[0].mean()).max()) for a in tr.fields.values())
    return (v < 1e-9, v, 1e-9, "")


@check("numeric", "sinkex and mikex preserve l = lam")
def _pres_tr(fast):
    g = Grid1D(128 if fast else 256)
    worst = 0.0
    for name in ("sinkex", "mikex"):
        f = ev.preset(name, lam=2.0)
        tr = ev.evolve(f, ev.initial_state(f, g, {"k": "0.1*cos(x)", "m": "0.1*sin(x)"}),
                       ev.SolverConfig(dt=1e-3, t_end=0.1, snapshot_stride=10))
        worst = max(worst, float(np.abs(tr.fields["l"] - 2.0).max()))
    return (worst < 1e-6, worst, 1e-6, "")


def boussinesq_zero_curvature(N: int, dts, order: int, t_end: float = 0.2, amp: float = 0.1):
    """Max zero-curvature residual of Boussinesq runs for each ``dt``."""
    g = Grid1D(N)
    f = ev.preset("boussinesq")
    s0 = ev.initial_state(f, g, {"k": f"{amp}*cos(x)", "l": "0"})
    return [ev.zero_curvature_residual(ev.evolve(f, s0, ev.SolverConfig(dt=dt, t_end=t_end)), order=order).max
            for dt in dts]


@check("numeric", "zero curvature converges (boussinesq)")
def _zc_conv(fast):
    r = boussinesq_zero_curvature(128 if fast else 256, [0.04, 0.02, 0.01], order=4)
    ratios = [a / b for a, b in zip(r[:-1], r[1:])]
    mid = boussinesq_zero_curvature(128 if fast else 256, [0.02, 0.01], order=2)
    return (min(ratios) >= 4, min(ratios), None,
            f"ratios {', '.join(f'{x:.2f}' for x in ratios)}; midpoint stencil ratio {mid[0] / mid[1]:.2f}")


@check("numeric", "zero curvature small at dt = 1e-4")
def _zc_small(fast):
    t_end = 0.02 if fast else 0.2
    v = boussinesq_zero_curvature(128 if fast else 256, [1e-4], order=2, t_end=t_end)[0]
    return (v < 1e-4, v, 1e-4, "")


@check("numeric", "reconstruction path independence")
def _recon(fast):
    g = Grid1D(64)
    f = ev.preset("boussinesq")
    tr = ev.evolve(f, ev.initial_state(f, g, {"k": "0.1*cos(x)", "l": "0"}),
                   ev.SolverConfig(dt=0.01, t_end=0.2, snapshot_stride=2))
    fam = ev.reconstruct_curve_family(tr, fr.standard_frame())
    return (fam.path_defect < 1e-5, fam.path_defect, 1e-5, f"su(2,1) defect {fam.su21_defect:.1e}")


@check("numeric", "translation reparametrizes the curve")
def _transl(fast):
    from .spectral import trig_interpolate

    g = Grid1D(64)
    fld, prof = fr.adapt_legendrian(closed_legendrian_lift(g), g)
    f = ev.preset("translation")
    tr = ev.evolve(f, ev.GridState(0.0, {"k": prof.k, "l": prof.l}, g),
                   ev.SolverConfig(dt=0.01, t_end=0.2, snapshot_stride=5))
    Z = ev.reconstruct_curve_family(tr, fld.frames[0]).affine_curves()
    worst = 0.0
    for i, t in enumerate(tr.times):
        shifted = np.stack([trig_interpolate(Z[0, :, c].real, g.L, g.x + t)
                            + 1j * trig_interpolate(Z[0, :, c].imag, g.L, g.x + t) for c in range(2)], -1)
        worst = max(worst, float(np.abs(Z[i] - shifted).max()))
    return (worst < 1e-5, worst, 1e-5, "")


@check("numeric", "sinkex density drift")
def _dens_drift(fast):
    g = Grid1D(128 if fast else 256)
    f = ev.preset("sinkex")
    tr = ev.evolve(f, ev.initial_state(f, g, {"k": "0.3*cos(x)", "m": "0.5+0.4*sin(x)"}),
                   ev.SolverConfig(dt=1e-3, t_end=0.5, snapshot_stride=50))
    tab = ev.monitor_densities(tr, hz.sinkex_densities()[:2])
    v = float(tab.drift.max())
    return (v < 1e-6, v, 1e-6, "")


@check("numeric", "legendrian frame round trip")
def _roundtrip(fast):
    g = Grid1D(64)
    fld, prof = fr.adapt_legendrian(closed_legendrian_lift(g), g)
    F = fr.frenet_integrate(prof, "legendrian", fld.frames[0], g, substeps=32)
    _, back = fr.adapt_legendrian(F.gamma, g)
    worst = max(float(np.abs(back.k - prof.k).max()), float(np.abs(back.l - prof.l).max()))
    # an arbitrary (non-closing) profile through exact jets
    p = fr.InvariantProfile(-1.5 + 0.5 * np.cos(g.x), 1.0 + 0.3 * np.sin(g.x))
    F = fr.frenet_integrate(p, "legendrian", fr.standard_frame(), g, substeps=16)
    _, back = fr.adapt_legendrian(F.gamma, g, jets=[J[:, :, 0] for J in fr.frame_jets(F, p, 3)])
    worst = max(worst, float(np.abs(back.k - p.k).max()), float(np.abs(back.l - p.l).max()))
    return (worst < 1e-6, worst, 1e-6, "")


@check("numeric", "invariants under 10 SU(2,1) motions")
def _motions(fast):
    g = Grid1D(64)
    gamma = closed_legendrian_lift(g)
    _, p0 = fr.adapt_legendrian(gamma, g)
    gt = closed_transverse_lift(Grid1D(128))
    _, q0 = fr.adapt_transverse(gt, Grid1D(128))
    worst = 0.0
    for seed in range(10):
        A = fr.random_su21(seed)
        _, p = fr.adapt_legendrian(gamma @ A.T, g)
        _, q = fr.adapt_transverse(gt @ A.T, Grid1D(128))
        worst = max(worst, float(np.abs(p.k - p0.k).max()), float(np.abs(p.l - p0.l).max()),
                    float(np.abs(q.k - q0.k).max()), float(np.abs(q.l - q0.l).max()),
                    float(np.abs(q.m - q0.m).max()))
    return (worst < 1e-6, worst, 1e-6, "")


@check("numeric", "hopf fiber flagged (l = 0)")
def _hopf(fast):
    g = Grid1D(64)
    _, p = fr.adapt_transverse(hopf_fiber_lift(g), g)
    v = float(np.abs(p.l).max())
    return (v < 1e-8 and bool(p.flags["hopf_fiber"]), v, 1e-8, "")


@check("numeric", "sextactic indicatrix")
def _indicatrix(fast):
    g = Grid1D(64)
    phi = sextactic_phase(g)
    k = fr.sextactic_curvature(phi, g.L)
    ind = fr.indicatrix_framing(fr.sextactic_framing(phi, g), k)
    lN = float(np.abs(ind.l_N).max())
    f1 = fr.normal_indicatrix_curvature(k, g.L)
    f2 = fr.normal_indicatrix_curvature_schwarzian(k, g.L)
    kerr = max(float(np.abs(ind.k_N - f1).max()), float(np.abs(ind.k_N - f2).max()))
    return (lN < 1e-6 and kerr < 1e-8, kerr, 1e-8, f"|l_N| = {lN:.1e}")


def phase_convergence(preset: str, lam: float, dts, amp: float, t_end: float, N: int = 64,
                      time_scale: float = 0.5, order: int = 4):
    g = Grid1D(N)
    f = ev.preset(preset, lam=lam)
    s0 = ev.phase_state(g, amp * np.sin(g.x))
    out = []
    for dt in dts:
        tr = ev.evolve(f, s0, ev.SolverConfig(dt=dt, t_end=t_end))
        if preset == "schwarz":
            out.append(ev.verify_schwarzian_kdv(tr, lam, order=order).max)
        else:
            out.append(ev.verify_double_cover(tr, time_scale, order=order).max)
    return out


for _lam in (0.5, 1.0):
    def _sk(fast, lam=_lam):
        r = phase_convergence("schwarz", lam, [0.01, 0.005, 0.0025], 0.2, 0.2)
        o = min(ev.observed_orders(r))
        return (o >= 2, o, None, "observed orders " + ", ".join(f"{x:.2f}" for x in ev.observed_orders(r)))
    check("numeric", f"schwarzian kdv convergence lam={_lam}")(_sk)


@check("numeric", "double cover convergence")
def _dc(fast):
    r = phase_convergence("pinkall", 2.0, [0.02, 0.01, 0.005], 0.1, 0.4)
    neg = phase_convergence("pinkall", 2.0, [0.01], 0.1, 0.4, time_scale=1.0)[0]
    o = min(ev.observed_orders(r))
    return (o >= 2 and neg > 1e-2, o, None, f"t = tau control residual {neg:.2e}")


# -- runner ------------------------------------------------------------------------

def _run_one(suite: str, name: str, fn: Check, fast: bool) -> CheckResult:
    t0 = time.perf_counter()
    try:
        passed, value, threshold, detail = fn(fast)
    except Exception as exc:  # a crashing check is a failing check
        passed, value, threshold, detail = False, None, None, f"{type(exc).__name__}: {exc}"
    value = None if value is None else float(value)
    return CheckResult(suite, name, bool(passed), value, threshold, detail, time.perf_counter() - t0)


def workers_from_env(default: int = 4) -> int:
    raw = os.environ.get("PCFLOWS_WORKERS")
    if raw is None:
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        return default


def run_suite(suite: str = "all", fast: bool = False, workers: int | None = None) -> Report:
    suites = SUITES if suite == "all" else (suite,)
    for s in suites:
        if s not in _REGISTRY:
            raise KeyError(f"unknown suite {s!r}")
    jobs = [(s, n, fn) for s in suites for n, fn in _REGISTRY[s]]
    t0 = time.perf_counter()
    with ThreadPoolExecutor(max_workers=workers or workers_from_env()) as pool:
        futures = [pool.submit(_run_one, s, n, fn, fast) for s, n, fn in jobs]
        results = [f.result() for f in futures]
    return Report(results, time.perf_counter() - t0)


def report_json(report: Report) -> str:
    return json.dumps(report.to_json(), indent=1, sort_keys=True)
