import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pcflows import evolution as ev
from pcflows import frames as fr
from pcflows import hierarchies as hz
from pcflows.diffpoly import DiffPoly, parse_expr
from pcflows.spectral import Grid1D, trig_interpolate

k = DiffPoly.var("k")


class TestConfig:
    @pytest.mark.parametrize("kw", [{"dt": 0}, {"dt": 0.1, "t_end": -1}, {"scheme": "euler"},
                                    {"snapshot_stride": 0}])
    def test_rejects(self, kw):
        args = {"dt": 0.1, "t_end": 1.0, **kw}
        with pytest.raises(ValueError):
            ev.SolverConfig(**args)

    def test_t_end_multiple_of_dt(self):
        f = ev.preset("kdv")
        s0 = ev.initial_state(f, Grid1D(16), {"k": "cos(x)", "l": "0"})
        with pytest.raises(ValueError):
            ev.evolve(f, s0, ev.SolverConfig(dt=0.03, t_end=0.1))

    def test_grid_state_validation(self):
        g = Grid1D(8)
        with pytest.raises(ValueError):
            ev.GridState(0.0, {"k": np.zeros(4)}, g)
        with pytest.raises(ValueError):
            ev.GridState(0.0, {"k": np.full(8, np.nan)}, g)


class TestInitial:
    def test_grammar(self):
        g = Grid1D(16)
        assert np.allclose(ev.eval_initial("0.5 + 2*sin(3*x)**2 - cos(x)/pi", g),
                           0.5 + 2 * np.sin(3 * g.x) ** 2 - np.cos(g.x) / np.pi)
        assert np.allclose(ev.eval_initial("2", g), 2.0)

    @pytest.mark.parametrize("bad", ["__import__('os')", "exp(x)", "x.real", "[x]", "'a'", "lambda: 1", "y"])
    def test_grammar_rejects(self, bad):
        with pytest.raises((ValueError, SyntaxError)):
            ev.eval_initial(bad, Grid1D(16))

    def test_defaults_from_preset(self):
        f = ev.preset("kk", lam=9.0)
        s0 = ev.initial_state(f, Grid1D(16), {"k": "cos(x)"})
        assert np.all(s0.fields["l"] == 1.0)
        with pytest.raises(ValueError):
            ev.initial_state(ev.preset("kdv"), Grid1D(16), {"k": "cos(x)"})


class TestFlowSpecs:
    def test_split_linear(self):
        lin, rest = ev.split_linear(hz.kdv_flow(1)[0], "k", {})
        assert lin == {3: 1.0}
        assert rest == -3 * k * k.dx()

    def test_split_linear_with_constant(self):
        p = parse_expr("lam*k_xxx + k*k_x + l_x", ("k", "l"), ("lam",))
        lin, rest = ev.split_linear(p, "k", {"lam": 2.0})
        assert lin == {3: 2.0}
        assert rest == parse_expr("k*k_x + l_x", ("k", "l"))

    @pytest.mark.parametrize("name", ev.PRESETS)
    def test_presets_build(self, name):
        f = ev.preset(name)
        assert f.name == name and f.variables
        assert json.dumps(f.describe())

    def test_unknown_preset(self):
        with pytest.raises(KeyError):
            ev.preset("nope")

    def test_custom_flows(self):
        f = ev.custom_flow("legendrian", "-k", "0")
        assert f.rhs["k"] == hz.kdv_flow(1)[0]
        t = ev.custom_flow("transverse", "1", "-2*k/lam", v="(m + 3*k^2)/(3*lam)", lam=2.0)
        assert t.meta["l0"] == 2.0
        with pytest.raises(hz.ConstraintViolation):
            ev.custom_flow("transverse", "k", "0", v="0")
        with pytest.raises(ValueError):
            ev.custom_flow("planar", "k", "0")


def _shift(f, L, s):
    x = np.arange(f.size) * L / f.size
    return trig_interpolate(f, L, x + s)


class TestSolver:
    @pytest.mark.parametrize("scheme", ev.SCHEMES)
    def test_translation_is_a_shift(self, scheme):
        g = Grid1D(32)
        f = ev.preset("translation")
        s0 = ev.initial_state(f, g, {"k": "cos(x) + 0.3*sin(2*x)", "l": "0.5*cos(3*x)"})
        tr = ev.evolve(f, s0, ev.SolverConfig(dt=0.01, t_end=0.5, scheme=scheme, snapshot_stride=10))
        # exponential integrators treat the transport term exactly; rk4 is O(dt^4)
        tol = 1e-7 if scheme == "rk4" else 1e-12
        for v in "kl":
            assert np.abs(tr.fields[v][-1] - _shift(s0.fields[v], g.L, 0.5)).max() < tol

    @settings(max_examples=20)
    @given(st.floats(-2, 2), st.lists(st.floats(-1, 1), min_size=3, max_size=3))
    def test_translation_speed_property(self, c, a):
        g = Grid1D(16)
        f = ev.preset("translation", speed=c)
        k0 = a[0] * np.cos(g.x) + a[1] * np.sin(2 * g.x) + a[2]
        s0 = ev.GridState(0.0, {"k": k0, "l": np.zeros(16)}, g)
        tr = ev.evolve(f, s0, ev.SolverConfig(dt=0.05, t_end=0.2, snapshot_stride=4, dealias=False))
        assert np.abs(tr.fields["k"][-1] - _shift(k0, g.L, c * 0.2)).max() < 1e-6

    def test_schemes_agree(self):
        g = Grid1D(64)
        f = ev.preset("kdv")
        s0 = ev.initial_state(f, g, {"k": "0.3*cos(x)", "l": "0.2*sin(x)"})
        out = {}
        for scheme, dt in (("etdrk4", 1e-3), ("ifrk4", 1e-3), ("rk4", 2e-4)):
            tr = ev.evolve(f, s0, ev.SolverConfig(dt=dt, t_end=0.1, scheme=scheme, snapshot_stride=10))
            out[scheme] = tr.fields["k"][-1]
        assert np.abs(out["etdrk4"] - out["ifrk4"]).max() < 1e-8
        assert np.abs(out["etdrk4"] - out["rk4"]).max() < 1e-8

    @settings(max_examples=15)
    @given(st.lists(st.floats(-0.3, 0.3), min_size=4, max_size=4))
    def test_kdv_conserves_mean(self, a):
        g = Grid1D(32)
        f = ev.preset("kdv")
        k0 = a[0] + a[1] * np.cos(g.x) + a[2] * np.sin(2 * g.x)
        l0 = a[3] * np.cos(g.x)
        tr = ev.evolve(f, ev.GridState(0.0, {"k": k0, "l": l0}, g),
                       ev.SolverConfig(dt=1e-3, t_end=0.05, snapshot_stride=10))
        assert np.abs(tr.fields["k"].mean(axis=1) - k0.mean()).max() < 1e-12

    def test_deterministic(self):
        g = Grid1D(64)
        f = ev.preset("kk")
        s0 = ev.initial_state(f, g, {"k": "0.1*cos(x)"})
        cfg = ev.SolverConfig(dt=1e-3, t_end=0.02, snapshot_stride=5)
        a, b = ev.evolve(f, s0, cfg), ev.evolve(f, s0, cfg)
        assert all(np.array_equal(a.fields[v], b.fields[v]) for v in f.variables)

    def test_blowup(self):
        g = Grid1D(64)
        f = ev.preset("boussinesq")
        f.max_mode = None  # unfiltered: the induced system is ill-posed
        s0 = ev.initial_state(f, g, {"k": "0.5*cos(x)", "l": "0.1*sin(3*x)"})
        with pytest.raises(ev.BlowUp) as info:
            ev.evolve(f, s0, ev.SolverConfig(dt=1e-3, t_end=2.0, blowup=1e3, snapshot_stride=10))
        exc = info.value
        assert 0 <= exc.t_last < 2.0 and exc.value > 1e3
        assert exc.trajectory.diagnostics["blowup"]

    def test_missing_variable(self):
        with pytest.raises(ValueError):
            ev.evolve(ev.preset("kdv"), ev.GridState(0.0, {"k": np.zeros(8)}, Grid1D(8)),
                      ev.SolverConfig(dt=0.1, t_end=0.1))

    def test_trajectory_json(self, tmp_path):
        g = Grid1D(16)
        f = ev.preset("kdv")
        tr = ev.evolve(f, ev.initial_state(f, g, {"k": "cos(x)", "l": "0"}),
                       ev.SolverConfig(dt=1e-3, t_end=0.01, snapshot_stride=5))
        ev.write_run_json(tr, tmp_path / "r.json", {"note": np.float64(1.5)})
        data = json.loads((tmp_path / "r.json").read_text())
        assert len(data["snapshots"]) == 3 and data["diagnostics"]["note"] == 1.5
        assert ev.config_hash({"a": 1}) == ev.config_hash({"a": 1})
        assert tr.state(1).t == pytest.approx(0.005)


class TestZeroCurvature:
    def test_stationary_state(self):
        g = Grid1D(32)
        f = ev.preset("kdv")
        s0 = ev.initial_state(f, g, {"k": "0.7", "l": "0"})
        tr = ev.evolve(f, s0, ev.SolverConfig(dt=0.01, t_end=0.1))
        assert ev.zero_curvature_residual(tr).max < 1e-9
        assert ev.zero_curvature_residual(tr, order=4).max < 1e-9

    def test_tampered_trajectory_detected(self):
        g = Grid1D(32)
        f = ev.preset("kdv")
        tr = ev.evolve(f, ev.initial_state(f, g, {"k": "0.7", "l": "0"}), ev.SolverConfig(dt=0.01, t_end=0.1))
        tr.fields["l"] = tr.fields["l"] + 0.5 * tr.times[:, None] * np.cos(g.x)
        assert ev.zero_curvature_residual(tr).max > 0.1

    def test_transverse_flow(self):
        g = Grid1D(64)
        f = ev.preset("sinkex", lam=2.0)
        s0 = ev.initial_state(f, g, {"k": "0.1*cos(x)", "m": "0.1*sin(x)"})
        tr = ev.evolve(f, s0, ev.SolverConfig(dt=1e-3, t_end=0.05))
        assert ev.zero_curvature_residual(tr, order=4).max < 1e-6

    def test_errors(self):
        g = Grid1D(16)
        f = ev.preset("schwarz")
        tr = ev.evolve(f, ev.phase_state(g, np.zeros(16)), ev.SolverConfig(dt=0.01, t_end=0.02))
        with pytest.raises(ValueError):
            ev.zero_curvature_residual(tr)
        with pytest.raises(ValueError):
            ev._stencil(3)


class TestReconstruction:
    def test_flat_profile(self):
        g = Grid1D(16)
        f = ev.preset("kdv")
        tr = ev.evolve(f, ev.initial_state(f, g, {"k": "0", "l": "0"}),
                       ev.SolverConfig(dt=0.05, t_end=0.2))
        F0 = fr.standard_frame().matrix
        fam = ev.reconstruct_curve_family(tr, F0)
        from scipy.linalg import expm
        want = np.stack([F0 @ expm(x * fr.legendrian_U(0.0, 0.0)) for x in g.x])
        assert np.abs(fam.frames - want[None]).max() < 1e-10
        assert fam.path_defect < 1e-12

    def test_path_independence_and_csv(self, tmp_path):
        g = Grid1D(32)
        f = ev.preset("kdv")
        tr = ev.evolve(f, ev.initial_state(f, g, {"k": "0.2*cos(x)", "l": "0"}),
                       ev.SolverConfig(dt=0.01, t_end=0.1, snapshot_stride=2))
        fam = ev.reconstruct_curve_family(tr, fr.standard_frame())
        assert fam.path_defect < 1e-6 and fam.su21_defect < 1e-8
        ev.write_family_csv(fam, tmp_path / "f.csv")
        lines = (tmp_path / "f.csv").read_text().splitlines()
        assert lines[0] == "x,t,re_Z1,im_Z1,re_Z2,im_Z2" and len(lines) == 1 + 32 * len(tr)

    def test_path_dependence_raised(self):
        g = Grid1D(32)
        f = ev.preset("kdv")
        tr = ev.evolve(f, ev.initial_state(f, g, {"k": "0.2*cos(x)", "l": "0"}),
                       ev.SolverConfig(dt=0.01, t_end=0.1, snapshot_stride=2))
        tr.fields["l"] = tr.fields["l"] + tr.times[:, None]
        with pytest.raises(ev.PathDependence):
            ev.reconstruct_curve_family(tr, fr.standard_frame(), max_path_defect=1e-6)

    def test_invalid_frame(self):
        g = Grid1D(16)
        f = ev.preset("kdv")
        tr = ev.evolve(f, ev.initial_state(f, g, {"k": "0", "l": "0"}), ev.SolverConfig(dt=0.1, t_end=0.1))
        with pytest.raises(fr.InvalidFrame):
            ev.reconstruct_curve_family(tr, np.eye(3))


class TestDensities:
    def _run(self):
        g = Grid1D(64)
        f = ev.preset("kdv")
        return ev.evolve(f, ev.initial_state(f, g, {"k": "0.5*cos(x)", "l": "0"}),
                         ev.SolverConfig(dt=1e-3, t_end=0.3, snapshot_stride=50))

    def test_conserved(self):
        tab = ev.monitor_densities(self._run(), [k, k * k, k ** 3 + k.dx() ** 2])
        assert tab.drift.max() < 1e-8
        assert [r["density"] for r in tab.rows()] == ["k", "k^2", "k_x^2 + k^3"]

    def test_control_drifts(self):
        tab = ev.monitor_densities(self._run(), [k ** 4])
        assert tab.drift[0] > 1e-4


class TestPhaseFlows:
    def test_linear_phase_is_stationary_kdv(self):
        g = Grid1D(32)
        f = ev.preset("schwarz", lam=0.5)
        tr = ev.evolve(f, ev.phase_state(g, np.zeros(32)), ev.SolverConfig(dt=0.01, t_end=0.1))
        r = ev.verify_schwarzian_kdv(tr, 0.5)
        assert r.max < 1e-10

    def test_schwarzian_kdv_small(self):
        g = Grid1D(64)
        f = ev.preset("schwarz", lam=1.0)
        tr = ev.evolve(f, ev.phase_state(g, 0.2 * np.sin(g.x)), ev.SolverConfig(dt=0.0025, t_end=0.1))
        assert ev.verify_schwarzian_kdv(tr, 1.0).max < 1e-4
        # the residual detects a wrong lambda
        assert ev.verify_schwarzian_kdv(tr, 0.5).max > 1e-2

    def test_double_cover_control(self):
        g = Grid1D(64)
        f = ev.preset("pinkall")
        tr = ev.evolve(f, ev.phase_state(g, 0.1 * np.sin(g.x)), ev.SolverConfig(dt=0.005, t_end=0.2))
        good = ev.verify_double_cover(tr, 0.5).max
        bad = ev.verify_double_cover(tr, 1.0).max
        assert good < 1e-5 < 1e-2 < bad

    def test_observed_orders(self):
        assert ev.observed_orders([16.0, 4.0, 1.0]) == [2.0, 2.0]


def test_final_state_always_recorded():
    f = ev.preset("kdv")
    s0 = ev.initial_state(f, Grid1D(16), {"k": "cos(x)", "l": "0"})
    with pytest.raises(ValueError, match="snapshot_stride"):
        ev.evolve(f, s0, ev.SolverConfig(dt=0.01, t_end=0.1, snapshot_stride=3))
    tr = ev.evolve(f, s0, ev.SolverConfig(dt=0.01, t_end=0.1, snapshot_stride=5))
    assert tr.times[-1] == pytest.approx(0.1)
