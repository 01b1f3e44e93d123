"""Symbolic Frenet pairs ``(U, V)`` and the zero-curvature identity.

Complex differential polynomials are pairs ``(re, im)`` of real
:class:`DiffPoly` values; the dependent variables themselves are real.
``H = U_t - V_x - [U, V]`` is computed symbolically with ``U_t`` expressed
through the induced evolutions, giving an independent check of those
evolutions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .diffpoly import DiffPoly, compile_numeric
from .hierarchies import (LegendrianFlowCoeffs, TransverseFlowCoeffs, legendrian_induced_flow,
                          solve_v, transverse_induced_flow)

F = Fraction


@dataclass(frozen=True)
class CPoly:
    re: DiffPoly
    im: DiffPoly

    @classmethod
    def of(cls, x) -> "CPoly":
        if isinstance(x, CPoly):
            return x
        if isinstance(x, DiffPoly):
            return cls(x, DiffPoly())
        if isinstance(x, complex):
            return cls(DiffPoly.scalar(Fraction(x.real)), DiffPoly.scalar(Fraction(x.imag)))
        return cls(DiffPoly.scalar(x), DiffPoly())

    def __add__(self, o) -> "CPoly":
        o = CPoly.of(o)
        return CPoly(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> "CPoly":
        return CPoly(-self.re, -self.im)

    def __sub__(self, o) -> "CPoly":
        return self + (-CPoly.of(o))

    def __rsub__(self, o) -> "CPoly":
        return CPoly.of(o) - self

    def __mul__(self, o) -> "CPoly":
        o = CPoly.of(o)
        return CPoly(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "CPoly":
        return CPoly(self.re, -self.im)

    def dx(self, n: int = 1) -> "CPoly":
        return CPoly(self.re.dx(n), self.im.dx(n))

    def subs(self, mapping) -> "CPoly":
        return CPoly(self.re.subs(mapping), self.im.subs(mapping))

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def __str__(self) -> str:
        if self.im.is_zero():
            return str(self.re)
        if self.re.is_zero():
            return f"i ({self.im})"
        return f"({self.re}) + i ({self.im})"


I = CPoly(DiffPoly(), DiffPoly.scalar(1))
Matrix = list  # 3x3 nested lists of CPoly


def _v(name: str, order: int = 0) -> DiffPoly:
    return DiffPoly.var(name, order)


def mat(rows) -> Matrix:
    return [[CPoly.of(e) for e in row] for row in rows]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    n, m, p = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = CPoly.of(0)
            for t in range(m):
                acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def madd(A: Matrix, B: Matrix, s: int = 1) -> Matrix:
    return [[a + b * s for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mdx(A: Matrix) -> Matrix:
    return [[a.dx() for a in row] for row in A]


def msubs(A: Matrix, mapping) -> Matrix:
    return [[a.subs(mapping) for a in row] for row in A]


def algebra_matrix(f: CPoly, g: CPoly, h: DiffPoly, z: CPoly, j: DiffPoly) -> Matrix:
    """The general element of the frame Lie algebra."""
    return mat([[f, z, j],
                [g, f.conj() - f, -(I * z.conj())],
                [h, I * g.conj(), -f.conj()]])


# -- Legendrian -----------------------------------------------------------

k, l, m = _v("k"), _v("l"), _v("m")


def legendrian_U_sym(kk: DiffPoly = k, ll: DiffPoly = l) -> Matrix:
    return mat([[0, kk, ll], [1, 0, -(I * kk)], [0, I, 0]])


def legendrian_V_sym(c: LegendrianFlowCoeffs) -> Matrix:
    a, h = c.a, c.h
    third, sixth = F(1, 3), F(1, 6)
    f = CPoly(-a.dx(), third * (k * h - F(1, 2) * h.dx(2)))
    g = CPoly(a, F(1, 2) * h.dx())
    z = CPoly(a * k + h * l - a.dx(2),
              sixth * (2 * h * k.dx() + 5 * k * h.dx() - h.dx(3)))
    j = (a * l - sixth * h.dx(4) + F(4, 3) * k * h.dx(2) + F(7, 6) * h.dx() * k.dx()
         + h * (third * k.dx(2) - k * k))
    return algebra_matrix(f, g, h, z, j)


def boussinesq_V_printed() -> Matrix:
    """The explicit V of the Boussinesq realization, entered as printed."""
    t = F(1, 3)
    return mat([[CPoly(DiffPoly(), -t * k), CPoly(-l, -t * k.dx()), k * k - t * k.dx(2)],
                [0, CPoly(DiffPoly(), 2 * t * k), CPoly(t * k.dx(), l)],
                [-1, 0, CPoly(DiffPoly(), -t * k)]])


def zero_curvature(U: Matrix, V: Matrix, U_t: Matrix) -> Matrix:
    UV = matmul(U, V)
    VU = matmul(V, U)
    return [[U_t[i][j] - V[i][j].dx() - (UV[i][j] - VU[i][j]) for j in range(3)] for i in range(3)]


def legendrian_zero_curvature(c: LegendrianFlowCoeffs) -> Matrix:
    """``H`` with ``U_t`` from the induced ``(k_t, l_t)``; identically zero iff consistent."""
    k_t, l_t = legendrian_induced_flow(c)
    return zero_curvature(legendrian_U_sym(), legendrian_V_sym(c), _legendrian_Ut(k_t, l_t))


def _legendrian_Ut(k_t: DiffPoly, l_t: DiffPoly) -> Matrix:
    return mat([[0, k_t, l_t], [0, 0, -(I * k_t)], [0, 0, 0]])


# -- transverse -----------------------------------------------------------

def transverse_U_sym(kk: DiffPoly = k, ll: DiffPoly = l, mm: DiffPoly = m) -> Matrix:
    return mat([[I * kk, ll, mm], [0, -2 * (I * kk), -(I * ll)], [1, 0, I * kk]])


def _transverse_Ut(k_t, l_t, m_t) -> Matrix:
    return mat([[I * k_t, l_t, m_t], [0, -2 * (I * k_t), -(I * l_t)], [0, 0, I * k_t]])


def transverse_V_sym(c: TransverseFlowCoeffs) -> Matrix:
    a, b, h = c.a, c.b, c.h
    v = solve_v(c) if c.v is None else c.v
    f = CPoly(-F(1, 2) * h.dx(), v)
    g = CPoly(a, b)
    z = CPoly(3 * a * k + h * l - b.dx(), -3 * b * k - a.dx())
    j = a * l + h * m - F(1, 2) * h.dx(2)
    V = algebra_matrix(f, g, h, z, j)
    if c.ell_constant is not None:
        V = msubs(V, {"l": c.ell_constant})
    return V


def transverse_zero_curvature(c: TransverseFlowCoeffs) -> Matrix:
    fl = transverse_induced_flow(c, check=False)
    ll = c.ell_constant if c.ell_constant is not None else l
    U = transverse_U_sym(k, ll, m)
    return zero_curvature(U, transverse_V_sym(c), _transverse_Ut(fl.k_t, fl.l_t, fl.m_t))


def is_zero_matrix(H: Matrix) -> bool:
    return all(e.is_zero() for row in H for e in row)


# -- numerics ---------------------------------------------------------------

@dataclass
class NumericMatrix:
    """A symbolic matrix compiled to grid evaluators (constants bound)."""

    entries: list

    def __call__(self, **arrays) -> np.ndarray:
        n = next(np.size(a) for a in arrays.values() if np.ndim(a) == 1)
        out = np.zeros((n, 3, 3), dtype=complex)
        for i in range(3):
            for j in range(3):
                re, im = self.entries[i][j]
                out[:, i, j] = re(**arrays) + 1j * im(**arrays)
        return out


def compile_matrix(A: Matrix, grid, constants: Mapping[str, float] | None = None) -> NumericMatrix:
    consts = dict(constants or {})

    def comp(p: DiffPoly) -> Callable:
        ev = compile_numeric(p, grid)
        names = {n for n, _ in p.factors()}

        def call(**arrays):
            vals = {**consts, **arrays}
            return ev(**{n: vals[n] for n in names})
        return call

    return NumericMatrix([[(comp(e.re), comp(e.im)) for e in row] for row in A])


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


def lie_algebra_defect(V: np.ndarray) -> float:
    """Max of ``|V^T S + S conj(V)|`` and ``|tr V|`` (frame-algebra condition)."""
    from .frames import S_GRAM

    Vt = np.swapaxes(V, -1, -2)
    return float(max(np.abs(Vt @ S_GRAM + S_GRAM @ np.conj(V)).max(),
                     np.abs(np.trace(V, axis1=-2, axis2=-1)).max()))


__all__: Sequence[str] = [n for n in dir() if not n.startswith("_")]
