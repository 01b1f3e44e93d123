"""Pseudo-spectral time evolution of curve invariants and frame reconstruction.

The constant-coefficient linear self-terms of each equation (``k_xxx``,
``k^(5)``, ...) are split off and handled exactly in Fourier space; the
default stepper is ETDRK4, with Lawson integrating-factor RK4 and plain RK4
as alternatives.  Runs are deterministic given the configuration.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.linalg import expm

from . import hierarchies as hz
from .diffpoly import DiffPoly, parse_expr
from .frames import (InvalidFrame, InvariantProfile, NullFrame, frame_defect, frenet_integrate,
                     is_null_frame, legendrian_U, schwarzian_from_derivs, transverse_U)
from .spectral import Grid1D, lowpass_mask, periodic_integral, spectral_tail
from .uv import compile_matrix, legendrian_V_sym, transverse_V_sym


class BlowUp(RuntimeError):
    def __init__(self, t_last: float, value: float, trajectory: "Trajectory"):
        self.t_last = t_last
        self.value = value
        self.trajectory = trajectory
        super().__init__(f"solution exceeded threshold (max {value:.3e}); last good time {t_last:.6g}")


class PathDependence(RuntimeError):
    pass


@dataclass
class GridState:
    t: float
    fields: dict[str, np.ndarray]
    grid: Grid1D

    def __post_init__(self):
        for name, a in self.fields.items():
            a = np.asarray(a, dtype=float)
            if a.shape != (self.grid.N,):
                raise ValueError(f"{name} has shape {a.shape}, expected ({self.grid.N},)")
            if not np.all(np.isfinite(a)):
                raise ValueError(f"{name} contains non-finite values")
            self.fields[name] = a


@dataclass
class SolverConfig:
    dt: float
    t_end: float
    dealias: bool = True
    scheme: str = "etdrk4"         # etdrk4 | ifrk4 | rk4
    snapshot_stride: int = 1
    max_mode: int | None = None    # optional low-pass filter (ill-posed systems)
    blowup: float = 1e6
    auto_substep: bool = False
    safety: float = 0.8

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.t_end < 0:
            raise ValueError("t_end must be non-negative")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.snapshot_stride < 1:
            raise ValueError("snapshot_stride must be >= 1")


SCHEMES = ("etdrk4", "ifrk4", "rk4")


# -- compiled right-hand sides ----------------------------------------------

class _Jets:
    """Spectral derivatives of the state, computed lazily and cached."""

    def __init__(self, hats: Mapping[str, np.ndarray], grid: Grid1D):
        self.hats = hats
        self.grid = grid
        self.kappa = grid.wavenumbers
        self.cache: dict[tuple[str, int], np.ndarray] = {}

    def __call__(self, name: str, order: int) -> np.ndarray:
        key = (name, order)
        if key not in self.cache:
            sym = (1j * self.kappa) ** order
            if order % 2 == 1:
                sym[-1] = 0
            self.cache[key] = np.fft.irfft(self.hats[name] * sym, n=self.grid.N)
        return self.cache[key]


@dataclass
class _Term:
    coef: float
    factors: tuple[tuple[str, int, int], ...]   # (name, order, power)


def _compile_terms(p: DiffPoly, constants: Mapping[str, float]) -> list[_Term]:
    out = []
    for mono, c in p.items():
        coef = float(c)
        fs = []
        for (name, order), pw in mono:
            if name in p.constants:
                if name not in constants:
                    raise KeyError(f"no value for constant {name!r}")
                coef *= float(constants[name]) ** pw
            else:
                fs.append((name, order, pw))
        out.append(_Term(coef, tuple(fs)))
    return out


def _eval_terms(terms: list[_Term], jets: _Jets, n: int) -> np.ndarray:
    acc = np.zeros(n)
    for t in terms:
        v = np.full(n, t.coef)
        for name, order, pw in t.factors:
            v = v * jets(name, order) ** pw
        acc += v
    return acc


def _speed_terms(terms: list[_Term], jets: _Jets, kmax: float) -> float:
    """Crude bound on the explicit part's spectral radius (for step control)."""
    s = 0.0
    for t in terms:
        mags = [np.abs(jets(name, o)).max() ** pw for name, o, pw in t.factors]
        for i, (name, o, pw) in enumerate(t.factors):
            others = math.prod(m for j, m in enumerate(mags) if j != i)
            base = pw * (np.abs(jets(name, o)).max() ** (pw - 1) if pw > 1 else 1.0)
            s += abs(t.coef) * others * base * kmax ** o
    return s


@dataclass
class FlowSpec:
    """A flow for a set of periodic real fields.

    ``rhs`` maps each variable to a DiffPoly right-hand side.  Phase-type
    flows that are not polynomial supply ``rhs_callable`` instead (returning
    the explicit part) together with a ``linear`` symbol.
    """

    name: str
    geometry: str                                   # legendrian | transverse | phase
    variables: tuple[str, ...]
    rhs: dict[str, DiffPoly] = field(default_factory=dict)
    constants: dict[str, float] = field(default_factory=dict)
    linear: dict[str, dict[int, float]] = field(default_factory=dict)
    rhs_callable: Callable | None = None
    speed_callable: Callable | None = None
    V: list | None = None
    max_mode: int | None = None
    meta: dict = field(default_factory=dict)

    def describe(self) -> dict:
        return {"name": self.name, "geometry": self.geometry, "variables": list(self.variables),
                "rhs": {v: str(p) for v, p in self.rhs.items()},
                "constants": self.constants, "max_mode": self.max_mode, **self.meta}


def split_linear(p: DiffPoly, var: str, constants: Mapping[str, float]) -> tuple[dict[int, float], DiffPoly]:
    """Split off constant-coefficient terms linear in ``var`` alone."""
    lin: dict[int, float] = {}
    rest = {}
    for mono, c in p.items():
        dep = [(f, pw) for f, pw in mono if f[0] not in p.constants]
        if len(dep) == 1 and dep[0][1] == 1 and dep[0][0][0] == var:
            coef = float(c)
            for (name, _), pw in mono:
                if name in p.constants:
                    coef *= float(constants[name]) ** pw
            lin[dep[0][0][1]] = lin.get(dep[0][0][1], 0.0) + coef
        else:
            rest[mono] = c
    return lin, DiffPoly(rest, p.constants)


def polynomial_flow(name: str, geometry: str, rhs: Mapping[str, DiffPoly],
                    constants: Mapping[str, float] | None = None, V=None,
                    max_mode: int | None = None, meta: dict | None = None) -> FlowSpec:
    constants = dict(constants or {})
    linear = {}
    for var, p in rhs.items():
        lin, _ = split_linear(p, var, constants)
        linear[var] = lin
    return FlowSpec(name, geometry, tuple(rhs), dict(rhs), constants, linear, V=V,
                    max_mode=max_mode, meta=dict(meta or {}))


# -- presets ----------------------------------------------------------------

def legendrian_flow(c: hz.LegendrianFlowCoeffs, name: str = "legendrian", constants=None,
                    max_mode=None, meta=None) -> FlowSpec:
    k_t, l_t = hz.legendrian_induced_flow(c)
    return polynomial_flow(name, "legendrian", {"k": k_t, "l": l_t}, constants,
                           V=legendrian_V_sym(c), max_mode=max_mode,
                           meta={"a": str(c.a), "h": str(c.h), **(meta or {})})


def transverse_flow(c: hz.TransverseFlowCoeffs, name: str = "transverse", constants=None,
                    max_mode=None, meta=None) -> FlowSpec:
    fl = hz.transverse_induced_flow(c)
    rhs = {"k": fl.k_t, "l": fl.l_t, "m": fl.m_t}
    return polynomial_flow(name, "transverse", rhs, constants, V=transverse_V_sym(c), max_mode=max_mode,
                           meta={"a": str(c.a), "b": str(c.b), "h": str(c.h), "v": str(fl.v), **(meta or {})})


def _phase_flow(name: str, coefficient: float, lam: float, L: float) -> FlowSpec:
    """``phi_t = c [S(phi) + lam phi_x^2] phi_x`` for ``phi = s x + psi``.

    The state is the periodic part ``psi``; the slope ``s`` is stored in
    ``meta`` and set by :func:`phase_state`.
    """

    def explicit(jets: _Jets, slope: float) -> dict[str, np.ndarray]:
        d1 = slope + jets("psi", 1)
        d2 = jets("psi", 2)
        return {"psi": coefficient * (-1.5 * d2 ** 2 / d1 + lam * d1 ** 3)}

    def speed(jets: _Jets, slope: float, kmax: float) -> float:
        d1 = slope + jets("psi", 1)
        d2 = jets("psi", 2)
        r2 = 3 * np.abs(d2 / d1).max() * kmax ** 2
        r1 = (1.5 * (d2 / d1) ** 2 + 3 * abs(lam) * d1 ** 2).max() * kmax
        return abs(coefficient) * (r1 + r2)

    return FlowSpec(name, "phase", ("psi",), linear={"psi": {3: coefficient}},
                    rhs_callable=explicit, speed_callable=speed,
                    meta={"coefficient": coefficient, "lambda": lam})


def preset(name: str, lam: float = 9.0, j: int = 0, speed: float = 1.0) -> FlowSpec:
    """Named flows.

    ``translation``, ``boussinesq``, ``kdv``, ``kk`` (Legendrian);
    ``mikex``, ``sinkex``, ``tgzero`` (transverse, ``l = lam`` or ``l = 0``);
    ``schwarz`` (``phi`` flow, parameter ``lam``) and ``pinkall``.
    """
    if name == "translation":
        c = hz.translation_coeffs(DiffPoly.scalar(Fraction(speed).limit_denominator(10 ** 9)))
        return legendrian_flow(c, name)
    if name == "boussinesq":
        # the induced system is the ill-posed "bad" Boussinesq system; a
        # low-pass filter keeps short runs meaningful
        return legendrian_flow(hz.boussinesq_coeffs(), name, max_mode=8)
    if name == "kdv":
        return legendrian_flow(hz.kdv_coeffs(), name)
    if name == "kk":
        return legendrian_flow(hz.kkr_coeffs(), name, {"lam": lam}, meta={"l0": lam / 9})
    if name == "mikex":
        return transverse_flow(hz.mikex_coeffs(), name, {"lam": lam}, max_mode=8, meta={"l0": lam})
    if name == "sinkex":
        return transverse_flow(hz.sinkex_coeffs(j), name, {"lam": lam}, meta={"l0": lam})
    if name == "tgzero":
        c = hz.lpreserving_coeffs(-hz.m)
        return transverse_flow(c, name, meta={"l0": 0.0})
    if name == "schwarz":
        return _phase_flow(name, 1.0, lam, 2 * np.pi)
    if name == "pinkall":
        # theta_tau = [S(theta)/2 + theta_x^2] theta_x
        return _phase_flow(name, 0.5, 2.0, 2 * np.pi)
    raise KeyError(f"unknown preset {name!r}")


PRESETS = ("translation", "boussinesq", "kdv", "kk", "mikex", "sinkex", "tgzero", "schwarz", "pinkall")


def custom_flow(geometry: str, a: str, h: str, b: str | None = None, v: str | None = None,
                lam: float | None = None, name: str = "custom") -> FlowSpec:
    """Flow from coefficient expressions in the invariants (diffpoly grammar).

    Transverse flows with ``lam`` set are restricted to ``l = lam``; ``v``
    may then be omitted and is solved from the first constraint.  A
    :class:`~pcflows.hierarchies.ConstraintViolation` is raised when the
    coefficients do not satisfy the constraints.
    """
    consts = ("lam",)
    aliases = {"ℓ": "l", "λ": "lam"}
    if geometry == "legendrian":
        vars_ = ("k", "l")
        P = lambda s: parse_expr(s, vars_, consts, aliases)  # noqa: E731
        c = hz.LegendrianFlowCoeffs(P(a), P(h))
        cv = {"lam": lam} if lam is not None else {}
        return legendrian_flow(c, name, cv)
    if geometry == "transverse":
        vars_ = ("k", "l", "m")
        P = lambda s: parse_expr(s, vars_, consts, aliases)  # noqa: E731
        c = hz.TransverseFlowCoeffs(P(a), P(b or "0"), P(h), None if v is None else P(v),
                                    hz.lam if lam is not None else None)
        cv = {"lam": lam} if lam is not None else {}
        return transverse_flow(c, name, cv, meta={"l0": lam} if lam is not None else None)
    raise ValueError(f"unknown geometry {geometry!r}")


# -- initial data -------------------------------------------------------------

_ALLOWED = {"sin": np.sin, "cos": np.cos, "pi": np.pi}


def eval_initial(expr: str, grid: Grid1D) -> np.ndarray:
    """Evaluate an initial-condition expression in ``x`` on the grid.

    The grammar is numbers, ``x``, ``pi``, ``sin``, ``cos`` and
    arithmetic; anything else is rejected.
    """
    import ast

    tree = ast.parse(expr, mode="eval")
    ok = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Call, ast.Name, ast.Load, ast.Constant,
          ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd)
    for node in ast.walk(tree):
        if not isinstance(node, ok):
            raise ValueError(f"unsupported syntax in {expr!r}: {type(node).__name__}")
        if isinstance(node, ast.Name) and node.id not in _ALLOWED and node.id != "x":
            raise ValueError(f"unknown name {node.id!r} in {expr!r}")
        if isinstance(node, ast.Constant) and not isinstance(node.value, (int, float)):
            raise ValueError(f"bad constant in {expr!r}")
    env = dict(_ALLOWED, x=grid.x)
    val = eval(compile(tree, "<init>", "eval"), {"__builtins__": {}}, env)  # noqa: S307
    return np.broadcast_to(np.asarray(val, dtype=float), (grid.N,)).copy()


def phase_state(grid: Grid1D, psi: np.ndarray, slope: float | None = None) -> GridState:
    """State for a phase flow; ``phi = slope x + psi`` with slope ``2 pi / L`` by default."""
    st = GridState(0.0, {"psi": psi}, grid)
    st.slope = 2 * np.pi / grid.L if slope is None else slope  # type: ignore[attr-defined]
    return st


# -- solver -----------------------------------------------------------------

@dataclass
class Trajectory:
    flow: FlowSpec
    config: SolverConfig
    grid: Grid1D
    times: np.ndarray
    fields: dict[str, np.ndarray]          # name -> (n_snap, N)
    diagnostics: dict = field(default_factory=dict)
    slope: float | None = None

    def state(self, i: int) -> GridState:
        return GridState(float(self.times[i]), {n: a[i].copy() for n, a in self.fields.items()}, self.grid)

    def __len__(self) -> int:
        return len(self.times)

    def to_json(self) -> dict:
        snaps = [{"t": float(t), **{n: a[i].tolist() for n, a in self.fields.items()}}
                 for i, t in enumerate(self.times)]
        return {"config": asdict(self.config), "flow": self.flow.describe(),
                "grid": self.grid.to_json(), "snapshots": snaps,
                "diagnostics": _jsonable(self.diagnostics)}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    return x


class _Stepper:
    def __init__(self, flow: FlowSpec, grid: Grid1D, cfg: SolverConfig, slope: float | None):
        self.flow, self.grid, self.cfg, self.slope = flow, grid, cfg, slope
        self.kappa = grid.wavenumbers
        max_mode = cfg.max_mode if cfg.max_mode is not None else flow.max_mode
        self.mask = lowpass_mask(grid, cfg.dealias, max_mode).astype(float)
        self.kmax = float(self.kappa[self.mask > 0].max())
        self.vars = flow.variables
        if flow.rhs_callable is None:
            self.terms = {}
            for v in self.vars:
                lin, rest = split_linear(flow.rhs[v], v, flow.constants)
                full = flow.rhs[v] if cfg.scheme == "rk4" else rest
                self.terms[v] = _compile_terms(full, flow.constants)
        self.sym = {}
        for v in self.vars:
            s = np.zeros_like(self.kappa, dtype=complex)
            if cfg.scheme != "rk4":
                for order, c in flow.linear.get(v, {}).items():
                    term = c * (1j * self.kappa) ** order
                    if order % 2 == 1:
                        term[-1] = 0
                    s = s + term
            self.sym[v] = s
        self.explicit_linear = cfg.scheme == "rk4" and flow.rhs_callable is not None
        self._etd: dict = {}

    def nonlinear(self, hats: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
        jets = _Jets(hats, self.grid)
        N = self.grid.N
        if self.flow.rhs_callable is not None:
            phys = self.flow.rhs_callable(jets, self.slope)
            if self.explicit_linear:
                for v in self.vars:
                    for order, c in self.flow.linear.get(v, {}).items():
                        phys[v] = phys[v] + c * jets(v, order)
        else:
            phys = {v: _eval_terms(self.terms[v], jets, N) for v in self.vars}
        return {v: np.fft.rfft(phys[v]) * self.mask for v in self.vars}

    def speed(self, hats) -> float:
        jets = _Jets(hats, self.grid)
        if self.flow.rhs_callable is not None:
            s = self.flow.speed_callable(jets, self.slope, self.kmax)
            if self.explicit_linear:
                s += sum(abs(c) * self.kmax ** o for lin in self.flow.linear.values() for o, c in lin.items())
            return float(s)
        return max(_speed_terms(self.terms[v], jets, self.kmax) for v in self.vars)

    def step(self, hats, dt):
        if self.cfg.scheme == "etdrk4":
            return self._etdrk4(hats, dt)
        # Lawson integrating-factor RK4; with a zero symbol this is plain RK4
        E = {v: np.exp(self.sym[v] * dt / 2) for v in self.vars}
        a = self.nonlinear(hats)
        u1 = {v: E[v] * (hats[v] + dt / 2 * a[v]) for v in self.vars}
        b = self.nonlinear(u1)
        u2 = {v: E[v] * hats[v] + dt / 2 * b[v] for v in self.vars}
        c = self.nonlinear(u2)
        u3 = {v: E[v] ** 2 * hats[v] + dt * E[v] * c[v] for v in self.vars}
        d = self.nonlinear(u3)
        return {v: (E[v] ** 2 * hats[v]
                    + dt / 6 * (E[v] ** 2 * a[v] + 2 * E[v] * (b[v] + c[v]) + d[v])) * self.mask
                for v in self.vars}

    def _etd_coefficients(self, dt):
        if dt not in self._etd:
            # phi-functions by contour averaging (avoids cancellation near 0)
            r = np.exp(2j * np.pi * (np.arange(1, 65) - 0.5) / 64)
            co = {}
            for v in self.vars:
                z = self.sym[v] * dt
                Z = z[:, None] + r[None, :]
                eZ = np.exp(Z)
                co[v] = (np.exp(z), np.exp(z / 2),
                         dt * np.mean((np.exp(Z / 2) - 1) / Z, axis=1),
                         dt * np.mean((-4 - Z + eZ * (4 - 3 * Z + Z ** 2)) / Z ** 3, axis=1),
                         dt * np.mean((2 + Z + eZ * (Z - 2)) / Z ** 3, axis=1),
                         dt * np.mean((-4 - 3 * Z - Z ** 2 + eZ * (4 - Z)) / Z ** 3, axis=1))
            self._etd[dt] = co
        return self._etd[dt]

    def _etdrk4(self, hats, dt):
        co = self._etd_coefficients(dt)
        V = self.vars
        Nu = self.nonlinear(hats)
        a = {v: co[v][1] * hats[v] + co[v][2] * Nu[v] for v in V}
        Na = self.nonlinear(a)
        b = {v: co[v][1] * hats[v] + co[v][2] * Na[v] for v in V}
        Nb = self.nonlinear(b)
        c = {v: co[v][1] * a[v] + co[v][2] * (2 * Nb[v] - Nu[v]) for v in V}
        Nc = self.nonlinear(c)
        return {v: (co[v][0] * hats[v] + co[v][3] * Nu[v] + 2 * co[v][4] * (Na[v] + Nb[v])
                    + co[v][5] * Nc[v]) * self.mask for v in V}


def evolve(flow: FlowSpec, s0: GridState, cfg: SolverConfig) -> Trajectory:
    """Integrate ``flow`` from ``s0``; snapshots every ``snapshot_stride`` steps of ``dt``.

    With ``auto_substep`` each step of ``dt`` is split into equal substeps
    small enough for the explicit part (re-estimated at every snapshot).
    """
    grid = s0.grid
    missing = set(flow.variables) - set(s0.fields)
    if missing:
        raise ValueError(f"initial state lacks {sorted(missing)}")
    slope = getattr(s0, "slope", None)
    st = _Stepper(flow, grid, cfg, slope)
    hats = {v: np.fft.rfft(s0.fields[v]) * st.mask for v in flow.variables}
    tails = {v: spectral_tail(s0.fields[v]) for v in flow.variables}
    cfl_speed = st.speed(hats)
    n_steps = int(round(cfg.t_end / cfg.dt))
    if abs(n_steps * cfg.dt - cfg.t_end) > 1e-9 * max(1.0, cfg.t_end):
        raise ValueError("t_end must be a multiple of dt")
    if n_steps % cfg.snapshot_stride:
        # otherwise the final state would silently not be recorded
        raise ValueError(f"{n_steps} steps is not a multiple of snapshot_stride={cfg.snapshot_stride}")
    times = [s0.t]
    snaps = {v: [np.fft.irfft(hats[v], n=grid.N)] for v in flow.variables}
    substeps_used = []
    t = s0.t
    sub = 1
    for i in range(n_steps):
        if cfg.auto_substep and i % cfg.snapshot_stride == 0:
            spd = st.speed(hats)
            sub = max(1, math.ceil(cfg.dt * spd / (2.5 * cfg.safety))) if spd > 0 else 1
            substeps_used.append(sub)
        h = cfg.dt / sub
        for _ in range(sub):
            hats = st.step(hats, h)
        t = s0.t + (i + 1) * cfg.dt
        phys = {v: np.fft.irfft(hats[v], n=grid.N) for v in flow.variables}
        peak = max(float(np.abs(a).max()) if np.all(np.isfinite(a)) else np.inf for a in phys.values())
        if not np.isfinite(peak) or peak > cfg.blowup:
            traj = Trajectory(flow, cfg, grid, np.array(times), {v: np.array(a) for v, a in snaps.items()},
                              {"blowup": True}, slope)
            raise BlowUp(s0.t + i * cfg.dt, peak, traj)
        if (i + 1) % cfg.snapshot_stride == 0:
            times.append(t)
            for v in flow.variables:
                snaps[v].append(phys[v])
    diag = {"initial_spectral_tail": tails,
            "explicit_cfl_number": cfg.dt * cfl_speed,
            "max_substeps": max(substeps_used) if substeps_used else 1,
            "steps": n_steps,
            "final_spectral_tail": {v: spectral_tail(snaps[v][-1]) for v in flow.variables}}
    return Trajectory(flow, cfg, grid, np.array(times), {v: np.array(a) for v, a in snaps.items()}, diag, slope)


def initial_state(flow: FlowSpec, grid: Grid1D, exprs: Mapping[str, str]) -> GridState:
    """Initial state from expressions; missing invariants take preset defaults."""
    fields = {}
    for v in flow.variables:
        if v in exprs:
            fields[v] = eval_initial(exprs[v], grid)
        elif v == "l" and "l0" in flow.meta:
            fields[v] = np.full(grid.N, float(flow.meta["l0"]))
        elif v == "psi":
            fields[v] = np.zeros(grid.N)
        else:
            raise ValueError(f"no initial data for {v!r}")
    if flow.geometry == "phase":
        return phase_state(grid, fields["psi"])
    return GridState(0.0, fields, grid)


# -- zero curvature -----------------------------------------------------------

def _U_of(flow: FlowSpec, fields: Mapping[str, np.ndarray]) -> np.ndarray:
    if flow.geometry == "legendrian":
        return legendrian_U(fields["k"], fields["l"])
    if flow.geometry == "transverse":
        return transverse_U(fields["k"], fields["l"], fields["m"])
    raise ValueError("zero curvature needs a Legendrian or transverse flow")


def _stencil(order: int):
    if order == 2:
        return None
    if order == 4:
        return np.array([1, -8, 0, 8, -1]) / 12.0
    raise ValueError("stencil order must be 2 or 4")


@dataclass
class ResidualSeries:
    times: np.ndarray
    values: np.ndarray

    @property
    def max(self) -> float:
        return float(self.values.max()) if self.values.size else 0.0


def zero_curvature_residual(traj: Trajectory, flow: FlowSpec | None = None, order: int = 2) -> ResidualSeries:
    """``max |U_t - V_x - [U, V]|`` over x at interior times.

    ``order=2`` uses centered differences at snapshot midpoints (state
    averaged there); ``order=4`` uses the five-point stencil at snapshots.
    """
    flow = flow or traj.flow
    if flow.V is None:
        raise ValueError("flow has no V matrix")
    if len(traj) < (2 if order == 2 else 5):
        raise ValueError("not enough snapshots")
    grid = traj.grid
    Vn = compile_matrix(flow.V, grid, flow.constants)
    times = traj.times
    dt = float(np.diff(times).mean())
    fields = traj.fields

    def H(state, Ut):
        arrays = {n: a for n, a in state.items()}
        U = _U_of(flow, arrays)
        V = Vn(**arrays)
        from .spectral import spectral_derivative
        Vx = spectral_derivative(V, grid.L, 1, axis=0)
        return np.abs(Ut - Vx - (U @ V - V @ U)).max()

    out_t, out_v = [], []
    if order == 2:
        for i in range(len(times) - 1):
            mid = {n: 0.5 * (a[i] + a[i + 1]) for n, a in fields.items()}
            Ut = (_U_of(flow, {n: a[i + 1] for n, a in fields.items()})
                  - _U_of(flow, {n: a[i] for n, a in fields.items()})) / dt
            out_t.append(0.5 * (times[i] + times[i + 1]))
            out_v.append(H(mid, Ut))
    else:
        w = _stencil(4)
        for i in range(2, len(times) - 2):
            Ut = sum(w[j] * _U_of(flow, {n: a[i - 2 + j] for n, a in fields.items()}) for j in range(5)) / dt
            out_t.append(times[i])
            out_v.append(H({n: a[i] for n, a in fields.items()}, Ut))
    return ResidualSeries(np.array(out_t), np.array(out_v))


# -- reconstruction -----------------------------------------------------------

@dataclass
class CurveFamily:
    times: np.ndarray
    frames: np.ndarray              # (n_snap, N, 3, 3)
    path_defect: float
    su21_defect: float
    grid: Grid1D

    def affine_curves(self) -> np.ndarray:
        """Affine coordinates ``(Z1, Z2)`` of ``e0`` for every snapshot."""
        g = self.frames[..., :, 0]
        return g[..., 1:] / g[..., :1]

    def to_csv_rows(self):
        Z = self.affine_curves()
        for i, t in enumerate(self.times):
            for j, x in enumerate(self.grid.x):
                z1, z2 = Z[i, j]
                yield [x, t, z1.real, z1.imag, z2.real, z2.imag]


def _time_magnus(F: np.ndarray, Vs: Sequence[np.ndarray], dt: float) -> list[np.ndarray]:
    """Integrate ``F_t = F V`` through snapshot samples ``Vs`` (batched over x).

    V between snapshots is the cubic through the four nearest samples; each
    interval takes a two-point Gauss Magnus step.
    """
    out = [F]
    n = len(Vs)
    c1, c2 = 0.5 - np.sqrt(3) / 6, 0.5 + np.sqrt(3) / 6
    for i in range(n - 1):
        lo = min(max(i - 1, 0), max(n - 4, 0))
        idx = list(range(lo, min(lo + 4, n)))
        def interp(s):
            # Lagrange interpolation in the local index variable
            acc = 0
            for a in idx:
                w = 1.0
                for b in idx:
                    if b != a:
                        w *= (i + s - b) / (a - b)
                acc = acc + w * Vs[a]
            return acc
        V1, V2 = interp(c1), interp(c2)
        omega = 0.5 * dt * (V1 + V2) + (np.sqrt(3) / 12) * dt * dt * (V1 @ V2 - V2 @ V1)
        F = F @ expm(omega)
        out.append(F)
    return out


def reconstruct_curve_family(traj: Trajectory, F0, flow: FlowSpec | None = None,
                             substeps: int = 8, max_path_defect: float | None = None) -> CurveFamily:
    """Frames ``F(x, t)`` on the snapshot grid from ``F(0, 0) = F0``.

    Route A: ``F_t = F V`` along ``x = 0`` then ``F_x = F U`` at each time.
    Route B: ``F_x = F U`` at ``t = 0`` then ``F_t = F V`` at every x.
    ``path_defect`` is the max difference between the two.
    """
    flow = flow or traj.flow
    F0 = F0.matrix if isinstance(F0, NullFrame) else np.asarray(F0, dtype=complex)
    if not is_null_frame(F0, 1e-9):
        raise InvalidFrame(f"initial frame defect {frame_defect(F0):.3e}")
    grid = traj.grid
    Vn = compile_matrix(flow.V, grid, flow.constants)
    Vs = [Vn(**{n: a[i] for n, a in traj.fields.items()}) for i in range(len(traj))]
    dt = float(np.diff(traj.times).mean()) if len(traj) > 1 else 0.0

    def profile(i):
        f = {n: a[i] for n, a in traj.fields.items()}
        return InvariantProfile(f["k"], f["l"], f.get("m"))

    # route A
    along = _time_magnus(F0, [V[0] for V in Vs], dt)
    A = np.stack([frenet_integrate(profile(i), flow.geometry, along[i], grid, substeps, tol=1e-6).frames
                  for i in range(len(traj))])
    # route B
    start = frenet_integrate(profile(0), flow.geometry, F0, grid, substeps).frames
    B = np.stack(_time_magnus(start, Vs, dt))
    defect = float(np.abs(A - B).max())
    if max_path_defect is not None and defect > max_path_defect:
        raise PathDependence(f"path-independence defect {defect:.3e}")
    return CurveFamily(traj.times.copy(), A, defect, frame_defect(A), grid)


# -- conserved quantities ------------------------------------------------------

@dataclass
class DriftTable:
    """Integrals of each density per snapshot.

    ``drift`` is ``max_t |I(t) - I(0)|`` divided by ``max_t  int |rho| dx``,
    so a density whose integral starts at zero still gets a finite ratio.
    """

    names: list[str]
    values: np.ndarray              # (n_density, n_snap)
    abs_drift: np.ndarray
    drift: np.ndarray

    def rows(self):
        for n, v, a, d in zip(self.names, self.values, self.abs_drift, self.drift):
            yield {"density": n, "initial": float(v[0]), "final": float(v[-1]),
                   "max_abs_drift": float(a), "max_rel_drift": float(d)}


def monitor_densities(traj: Trajectory, densities: Sequence[DiffPoly], names: Sequence[str] | None = None,
                      constants: Mapping[str, float] | None = None) -> DriftTable:
    consts = {**traj.flow.constants, **(constants or {})}
    grid = traj.grid
    vals, sizes = [], []
    for rho in densities:
        terms = _compile_terms(rho, consts)
        row, size = [], 0.0
        for i in range(len(traj)):
            hats = {n: np.fft.rfft(a[i]) for n, a in traj.fields.items()}
            dens = _eval_terms(terms, _Jets(hats, grid), grid.N)
            row.append(periodic_integral(dens, grid.L))
            size = max(size, periodic_integral(np.abs(dens), grid.L))
        vals.append(row)
        sizes.append(size)
    vals = np.array(vals)
    absd = np.abs(vals - vals[:, :1]).max(axis=1)
    rel = np.where(np.array(sizes) > 0, absd / np.maximum(sizes, 1e-300), 0.0)
    return DriftTable(list(names or [str(r) for r in densities]), vals, absd, rel)


# -- Schwarzian KdV and the double cover ----------------------------------------

def _phase_jets(traj: Trajectory, i: int, orders: int = 4, scale: float = 1.0):
    grid = traj.grid
    psi = traj.fields["psi"][i]
    hats = {"psi": np.fft.rfft(psi)}
    jets = _Jets(hats, grid)
    s = traj.slope if traj.slope is not None else 2 * np.pi / grid.L
    d = [scale * (s + jets("psi", 1))] + [scale * jets("psi", o) for o in range(2, orders + 1)]
    return d


def _time_derivative(series: np.ndarray, dt: float, order: int) -> tuple[np.ndarray, slice]:
    if order == 2:
        return (series[2:] - series[:-2]) / (2 * dt), slice(1, -1)
    w = _stencil(4)
    n = series.shape[0]
    out = sum(w[j] * series[j:n - 4 + j] for j in range(5)) / dt
    return out, slice(2, -2)


def verify_schwarzian_kdv(traj: Trajectory, lam: float, order: int = 4) -> ResidualSeries:
    """Residual of ``u_t = u_xxx - 3 u u_x`` for ``u = -[S(phi) + lam phi_x^2]``."""
    grid = traj.grid
    us = []
    for i in range(len(traj)):
        d1, d2, d3, _ = _phase_jets(traj, i)
        us.append(-(schwarzian_from_derivs(d1, d2, d3) + lam * d1 ** 2))
    us = np.array(us)
    dt = float(np.diff(traj.times).mean())
    ut, sl = _time_derivative(us, dt, order)
    from .spectral import spectral_derivative
    res = []
    for u, u_t in zip(us[sl], ut):
        rhs = spectral_derivative(u, grid.L, 3) - 3 * u * spectral_derivative(u, grid.L, 1)
        res.append(np.abs(u_t - rhs).max())
    return ResidualSeries(traj.times[sl], np.array(res))


def verify_double_cover(traj: Trajectory, time_scale: float = 0.5, order: int = 4) -> ResidualSeries:
    """Map a ``theta`` run (time ``tau``) to ``phi = 2 theta``, ``t = time_scale tau``.

    Returns the residual of ``phi_t = [S(phi) + phi_x^2/2] phi_x``.  The
    correct scale is ``1/2``; ``time_scale=1`` is a negative control.
    """
    phis = 2 * traj.fields["psi"]
    dtau = float(np.diff(traj.times).mean())
    pt, sl = _time_derivative(phis, dtau * time_scale, order)
    res = []
    for i, p_t in zip(range(len(traj))[sl], pt):
        d1, d2, d3, _ = _phase_jets(traj, i, scale=2.0)
        rhs = (schwarzian_from_derivs(d1, d2, d3) + 0.5 * d1 ** 2) * d1
        res.append(np.abs(p_t - rhs).max())
    return ResidualSeries(traj.times[sl] * time_scale, np.array(res))


def observed_orders(values: Sequence[float]) -> list[float]:
    """``log2`` of successive ratios for a halving sequence."""
    return [float(np.log2(a / b)) for a, b in zip(values[:-1], values[1:])]


def write_run_json(traj: Trajectory, path, extra: dict | None = None) -> None:
    data = traj.to_json()
    data["diagnostics"].update(_jsonable(extra or {}))
    with open(path, "w") as fh:
        json.dump(data, fh, sort_keys=True, indent=1)


def write_family_csv(family: CurveFamily, path) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "t", "re_Z1", "im_Z1", "re_Z2", "im_Z2"])
        for row in family.to_csv_rows():
            w.writerow([repr(float(v)) for v in row])


def config_hash(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, default=str).encode()).hexdigest()
