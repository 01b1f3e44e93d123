"""Command-line front end: ``pcflows {hierarchy,simulate,frames,verify}``.

Exit codes: 0 success, 1 verification or numeric failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import evolution as ev
from . import frames as fr
from . import hierarchies as hz
from .diffpoly import NotExact, ParseError, to_latex
from .spectral import Grid1D

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

# expression-size budget per hierarchy (largest index generated on request)
MAX_ORDER = {"boussinesq": 8, "kdv": 6, "kk": 6}


class InputError(Exception):
    pass


@dataclass
class RunManifest:
    command: list[str]
    config_hash: str
    seed: int
    artifacts: list[str] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    created: str = ""

    def write(self, path: Path) -> None:
        path.write_text(json.dumps(asdict(self), indent=1, sort_keys=True))


# -- hierarchy -------------------------------------------------------------------

def cmd_hierarchy(args) -> int:
    if args.order < 0 or args.order > MAX_ORDER[args.system]:
        print(f"error: --order must be in 0..{MAX_ORDER[args.system]} for {args.system}", file=sys.stderr)
        return EXIT_INPUT
    gen = {"boussinesq": hz.boussinesq_flow, "kdv": hz.kdv_flow, "kk": hz.kk_flow}[args.system]
    try:
        flow = gen(args.order)
    except NotExact as exc:
        print(f"generation failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.format == "json":
        print(json.dumps(flow.to_json(), indent=1, sort_keys=True))
    elif args.format == "latex":
        parts = [to_latex(c) for c in flow.components]
        print(parts[0] if len(parts) == 1 else r"\begin{bmatrix} " + r" \\ ".join(parts) + r" \end{bmatrix}")
    else:
        print(flow.text())
    return EXIT_OK


# -- simulate ----------------------------------------------------------------------

SIM_DEFAULTS = {
    "preset": None, "geometry": "legendrian", "a": None, "h": None, "b": None, "v": None,
    "lam": None, "N": 256, "L": 2 * np.pi, "dt": 1e-4, "tend": 0.2, "stride": 100,
    "scheme": "etdrk4", "dealias": True, "max_mode": None, "blowup": 1e6,
    "init_k": "0.1*cos(x)", "init_l": None, "init_m": "0", "init_psi": "0.2*sin(x)",
    "out": None, "csv": None, "seed": 0,
}


def merge_config(args, defaults: dict) -> dict:
    """Flags > config file > defaults."""
    cfg = dict(defaults)
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(data, dict) or any(isinstance(v, (dict, list)) for v in data.values()):
            raise InputError("config file must be a flat JSON object")
        unknown = set(data) - set(defaults)
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(data)
    for key in defaults:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return cfg


def _build_flow(cfg: dict) -> ev.FlowSpec:
    lam = None if cfg["lam"] is None else float(cfg["lam"])
    if cfg["preset"]:
        return ev.preset(cfg["preset"], lam=9.0 if lam is None else lam)
    if cfg["a"] is None or cfg["h"] is None:
        raise InputError("give --preset or both --a and --h")
    # for transverse flows --lambda restricts to l = lambda
    return ev.custom_flow(cfg["geometry"], cfg["a"], cfg["h"], cfg["b"], cfg["v"], lam=lam)


def _initial(flow: ev.FlowSpec, grid: Grid1D, cfg: dict) -> ev.GridState:
    exprs = {}
    for var in flow.variables:
        key = "init_" + var
        if cfg.get(key) is not None:
            exprs[var] = cfg[key]
    if "l" in flow.variables and "l" not in exprs and "l0" not in flow.meta:
        exprs["l"] = "0"
    return ev.initial_state(flow, grid, exprs)


def run_simulation(cfg: dict) -> tuple[dict, ev.Trajectory]:
    """Run the configured simulation; returns (summary, trajectory)."""
    grid = Grid1D(int(cfg["N"]), float(cfg["L"]))
    flow = _build_flow(cfg)
    s0 = _initial(flow, grid, cfg)
    sc = ev.SolverConfig(dt=float(cfg["dt"]), t_end=float(cfg["tend"]), dealias=bool(cfg["dealias"]),
                         scheme=cfg["scheme"], snapshot_stride=int(cfg["stride"]),
                         max_mode=cfg["max_mode"], blowup=float(cfg["blowup"]))
    traj = ev.evolve(flow, s0, sc)
    summary: dict = {"flow": flow.name, "snapshots": len(traj), "t_final": float(traj.times[-1])}
    drift = {}
    for var, arr in traj.fields.items():
        drift[f"mean_{var}"] = float(np.abs(arr.mean(axis=1) - arr[0].mean()).max())
    if "l" in traj.fields:
        drift["l_max_change"] = float(np.abs(traj.fields["l"] - traj.fields["l"][0]).max())
    summary["drift"] = drift
    if flow.V is not None and len(traj) >= 2:
        summary["zero_curvature_residual"] = ev.zero_curvature_residual(traj).max
    summary["diagnostics"] = ev._jsonable(traj.diagnostics)
    return summary, traj


def cmd_simulate(args, argv) -> int:
    try:
        cfg = merge_config(args, SIM_DEFAULTS)
        summary, traj = run_simulation(cfg)
    except hz.ConstraintViolation as exc:
        print(f"constraint violation: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ev.BlowUp as exc:
        print(f"blow-up: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (InputError, ParseError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    artifacts = []
    if cfg["out"]:
        out = Path(cfg["out"])
        ev.write_run_json(traj, out, {"summary": summary})
        artifacts.append(str(out))
    if cfg["csv"]:
        if traj.flow.V is None:
            print("error: --csv needs a Legendrian or transverse flow", file=sys.stderr)
            return EXIT_INPUT
        family = ev.reconstruct_curve_family(traj, fr.standard_frame())
        summary["path_independence_defect"] = family.path_defect
        ev.write_family_csv(family, Path(cfg["csv"]))
        artifacts.append(cfg["csv"])
    if cfg["out"]:
        RunManifest(list(argv), ev.config_hash(cfg), int(cfg["seed"]), artifacts, summary,
                    time.strftime("%Y-%m-%dT%H:%M:%S")).write(Path(str(cfg["out"]) + ".manifest.json"))
    print(json.dumps(summary, indent=1, sort_keys=True))
    return EXIT_OK


# -- frames -----------------------------------------------------------------------

def cmd_frames(args) -> int:
    try:
        x, gamma = fr.read_lift_csv(args.input)
        grid = fr.grid_from_samples(x)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        if args.type == "legendrian":
            _, prof = fr.adapt_legendrian(gamma, grid)
        else:
            _, prof = fr.adapt_transverse(gamma, grid)
    except fr.FrameError as exc:
        contact = np.abs(fr.verify_contact(gamma, grid.L)).max()
        print(f"{type(exc).__name__}: {exc} (max |<G_x, G>| = {contact:.3e})", file=sys.stderr)
        return EXIT_FAIL
    out = prof.to_json(grid)
    out["type"] = args.type
    try:
        out["arclength_integrand"] = fr.arclength_integrand(gamma, grid).cube_root.tolist()
    except fr.DegenerateOsculation:
        out["arclength_integrand"] = None
    text = json.dumps(out, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text)
    return EXIT_OK


# -- verify -----------------------------------------------------------------------

def cmd_verify(args) -> int:
    from .verify import report_json, run_suite

    report = run_suite(args.suite, fast=args.fast)
    if args.json:
        Path(args.json).write_text(report_json(report))
    if args.format == "json":
        print(report_json(report))
    else:
        print(report.summary())
        if not report.passed:
            print("failing: " + ", ".join(report.failures))
    return EXIT_OK if report.passed else EXIT_FAIL


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pcflows", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    h = sub.add_parser("hierarchy", help="print a hierarchy flow")
    h.add_argument("--system", choices=["boussinesq", "kdv", "kk"], required=True)
    h.add_argument("--order", type=int, required=True)
    h.add_argument("--format", choices=["text", "json", "latex"], default="text")

    s = sub.add_parser("simulate", help="evolve invariants of a curve flow")
    s.add_argument("--config")
    s.add_argument("--preset", choices=ev.PRESETS)
    s.add_argument("--geometry", choices=["legendrian", "transverse"])
    s.add_argument("--a")
    s.add_argument("--h")
    s.add_argument("--b")
    s.add_argument("--v")
    s.add_argument("--lambda", dest="lam", type=float)
    s.add_argument("--N", type=int)
    s.add_argument("--L", type=float)
    s.add_argument("--dt", type=float)
    s.add_argument("--tend", type=float)
    s.add_argument("--stride", type=int)
    s.add_argument("--scheme", choices=ev.SCHEMES)
    s.add_argument("--no-dealias", dest="dealias", action="store_const", const=False)
    s.add_argument("--max-mode", dest="max_mode", type=int)
    s.add_argument("--blowup", type=float)
    for var in ("k", "l", "m", "psi"):
        s.add_argument(f"--init-{var}", dest=f"init_{var}")
    s.add_argument("--out")
    s.add_argument("--csv")
    s.add_argument("--seed", type=int)

    f = sub.add_parser("frames", help="invariants of a sampled lift")
    f.add_argument("--input", required=True)
    f.add_argument("--type", choices=["legendrian", "transverse"], required=True)
    f.add_argument("--out")

    v = sub.add_parser("verify", help="run property suites")
    v.add_argument("--suite", choices=["algebra", "theorems", "densities", "numeric", "all"], default="all")
    v.add_argument("--fast", action="store_true")
    v.add_argument("--json")
    v.add_argument("--format", choices=["text", "json"], default="text")
    return p


_EXPR_FLAGS = {"--a", "--h", "--b", "--v", "--init-k", "--init-l", "--init-m", "--init-psi"}


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--a -k`` into ``--a=-k`` so expressions may start with a minus."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _EXPR_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.command == "hierarchy":
        return cmd_hierarchy(args)
    if args.command == "simulate":
        return cmd_simulate(args, ["pcflows"] + argv)
    if args.command == "frames":
        return cmd_frames(args)
    return cmd_verify(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
