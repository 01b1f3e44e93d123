from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pcflows import hierarchies as hz
from pcflows import uv
from pcflows.diffpoly import DiffPoly, parse_expr, weight_of
from pcflows.spectral import Grid1D

from strategies import diffpolys

k, l, m, u, v = (DiffPoly.var(n) for n in "klmuv")


class TestBoussinesq:
    def test_seeds(self):
        assert hz.boussinesq_flow(0).components == (u.dx(), v.dx())
        f1 = hz.boussinesq_flow(1)
        assert f1.text() == "[v_x, 1/3 u_xxx + 8/3 u u_x]"

    @pytest.mark.parametrize("n", range(3))
    def test_recursion_steps_by_two(self, n):
        nxt = hz.boussinesq_recursion(list(hz.boussinesq_flow(n).components))
        assert tuple(nxt) == hz.boussinesq_flow(n + 2).components

    @pytest.mark.parametrize("n", range(4))
    def test_homogeneous(self, n):
        assert hz.boussinesq_weights_ok(hz.boussinesq_flow(n))

    def test_B_skew(self):
        B = hz.boussinesq_B()
        assert B.adjoint() == -B

    def test_negative_index(self):
        with pytest.raises(ValueError):
            hz.boussinesq_cosymmetry(-1)

    @pytest.mark.parametrize("n", range(3))
    def test_theorem(self, n):
        assert hz.verify_bouthm(n).passed

    def test_json(self):
        data = hz.boussinesq_flow(1).to_json()
        assert data["hierarchy"] == "boussinesq" and len(data["components"]) == 2


class TestKdV:
    def test_seeds(self):
        assert hz.kdv_flow(0)[0] == k.dx()
        assert str(hz.kdv_flow(1)[0]) == "k_xxx - 3 k k_x"

    @pytest.mark.parametrize("j", range(3))
    def test_weights(self, j):
        assert weight_of(hz.kdv_flow(j)[0], hz.KDV_WEIGHTS) == 2 * j + 3

    def test_reduction_matches_legendrian_flow(self):
        k_t, _ = hz.legendrian_induced_flow(hz.kdv_coeffs())
        assert k_t == hz.kdv_flow(1)[0]

    @pytest.mark.parametrize("rho", ["k", "k^2", "k^3 + k_x^2"])
    def test_conserved_densities(self, rho):
        p = parse_expr(rho, ("k",))
        assert hz.conserved_density_check(p, {"k": hz.kdv_flow(1)[0]}).passed

    def test_non_conserved(self):
        assert not hz.conserved_density_check(k ** 4, {"k": hz.kdv_flow(1)[0]}).passed

    @pytest.mark.parametrize("j", range(3))
    def test_sextactic_theorem(self, j):
        assert hz.verify_sexthm(j).passed


class TestKK:
    def test_seed_leading_order(self):
        K1 = hz.kk_flow(1)[0]
        assert K1.max_order("u") == 5
        assert K1.terms[((("u", 5), 1),)] == 1

    @pytest.mark.parametrize("j", range(3))
    def test_theorem(self, j):
        assert hz.verify_kkthm(j).passed

    @pytest.mark.parametrize("j", range(3))
    def test_nonstretch(self, j):
        assert hz.nonstretch_residual(*hz.kk_ah_u(j)).is_zero()

    def test_reduction(self):
        assert hz.verify_kk_reduction().passed
        assert hz.kkr_as_anons().passed


class TestLegendrian:
    @given(diffpolys(variables=("k", "l"), max_terms=3, max_order=2),
           diffpolys(variables=("k", "l"), max_terms=3, max_order=2))
    def test_zero_curvature_any_coefficients(self, a, h):
        c = hz.LegendrianFlowCoeffs(a, h)
        assert uv.is_zero_matrix(uv.legendrian_zero_curvature(c))

    def test_translation(self):
        assert hz.legendrian_induced_flow(hz.translation_coeffs()) == (k.dx(), l.dx())

    def test_V_matches_explicit(self):
        V = uv.legendrian_V_sym(hz.boussinesq_coeffs())
        W = uv.boussinesq_V_printed()
        assert all((a - b).is_zero() for ra, rb in zip(V, W) for a, b in zip(ra, rb))

    def test_V_in_lie_algebra_numerically(self):
        g = Grid1D(32)
        c = hz.LegendrianFlowCoeffs(k * l - k.dx(), l + k * k)
        Vn = uv.compile_matrix(uv.legendrian_V_sym(c), g)(k=np.cos(g.x), l=0.5 + np.sin(g.x))
        assert uv.lie_algebra_defect(Vn) < 1e-12


class TestTransverse:
    @pytest.mark.parametrize("coeffs", [hz.mikex_coeffs(), hz.sinkex_coeffs(0), hz.sinkex_coeffs(1),
                                        hz.lpreserving_coeffs(), hz.lpreserving_coeffs(-m)])
    def test_presets_zero_curvature(self, coeffs):
        assert uv.is_zero_matrix(uv.transverse_zero_curvature(coeffs))
        hz.transverse_induced_flow(coeffs)  # constraints hold

    def test_violation_reports_residual(self):
        c = hz.TransverseFlowCoeffs(a=k, b=DiffPoly.scalar(0), h=DiffPoly.scalar(0),
                                    v=DiffPoly.scalar(0))
        with pytest.raises(hz.ConstraintViolation) as info:
            hz.transverse_induced_flow(c)
        assert "constraint1" in info.value.residuals

    def test_solve_v_needs_constant(self):
        with pytest.raises(ValueError):
            hz.solve_v(hz.TransverseFlowCoeffs(k, k, k))

    @pytest.mark.parametrize("i", range(3))
    def test_sinkex_densities(self, i):
        fl = hz.transverse_induced_flow(hz.sinkex_coeffs(0))
        rho = hz.sinkex_densities()[i]
        assert hz.conserved_density_check(rho, {"k": fl.k_t, "m": fl.m_t}).passed
        assert weight_of(rho, hz.TRANSVERSE_WEIGHTS) == 2 * (i + 1)

    def test_density_check_missing_variable(self):
        with pytest.raises(KeyError):
            hz.conserved_density_check(m, {"k": k})


@given(st.integers(-3, 3), st.integers(1, 4))
def test_translation_scaling(num, den):
    c = Fraction(num, den)
    k_t, l_t = hz.legendrian_induced_flow(hz.translation_coeffs(DiffPoly.scalar(c)))
    assert k_t == c * k.dx() and l_t == c * l.dx()
