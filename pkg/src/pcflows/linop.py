"""Matrices of linear differential operators with differential-polynomial coefficients.

A scalar entry is a finite sum ``sum_r c_r D^r`` stored as ``{r: c_r}``.
Compositions such as ``D o c`` are re-expanded with the Leibniz rule, so
every operator has one canonical form and equality is structural.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from .diffpoly import DiffPoly, d_x

ScalarOp = dict  # {order: DiffPoly}


def _clean(entry: Mapping[int, DiffPoly]) -> dict[int, DiffPoly]:
    return {r: c for r, c in sorted(entry.items()) if not c.is_zero()}


def _add(a: ScalarOp, b: ScalarOp) -> ScalarOp:
    out = dict(a)
    for r, c in b.items():
        out[r] = out[r] + c if r in out else c
    return _clean(out)


def _scale(a: ScalarOp, s) -> ScalarOp:
    return _clean({r: c * s for r, c in a.items()})


def _compose(a: ScalarOp, b: ScalarOp) -> ScalarOp:
    # (c D^r) o (e D^s) = c sum_i C(r,i) e^(i) D^(r-i+s)
    out: ScalarOp = {}
    for r, c in a.items():
        for s, e in b.items():
            deriv = e
            for i in range(r + 1):
                if i:
                    deriv = d_x(deriv)
                if deriv.is_zero():
                    break
                term = c * deriv * comb(r, i)
                key = r - i + s
                out[key] = out[key] + term if key in out else term
    return _clean(out)


def _adjoint(a: ScalarOp) -> ScalarOp:
    # (c D^r)* = (-D)^r o c = (-1)^r sum_i C(r,i) c^(i) D^(r-i)
    out: ScalarOp = {}
    for r, c in a.items():
        deriv = c
        for i in range(r + 1):
            if i:
                deriv = d_x(deriv)
            if deriv.is_zero():
                break
            term = deriv * ((-1) ** r * comb(r, i))
            key = r - i
            out[key] = out[key] + term if key in out else term
    return _clean(out)


def _apply(a: ScalarOp, f: DiffPoly) -> DiffPoly:
    result = DiffPoly({}, f.constants)
    if not a:
        return result
    derivs = [f]
    for _ in range(max(a)):
        derivs.append(d_x(derivs[-1]))
    for r, c in a.items():
        result = result + c * derivs[r]
    return result


class LinDiffOp:
    """``rows x cols`` matrix of scalar differential operators.

    Supports ``+``, ``-``, scalar ``*``, composition with ``@``, application
    with :meth:`apply` (or calling the operator) and :meth:`adjoint`.
    """

    __slots__ = ("entries",)

    def __init__(self, entries: Sequence[Sequence[Mapping[int, DiffPoly]]]):
        rows = [tuple(_clean(e) for e in row) for row in entries]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("operator matrix must be rectangular and non-empty")
        self.entries = tuple(rows)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.entries[0])

    # -- builders -------------------------------------------------------
    @classmethod
    def scalar(cls, entry: Mapping[int, DiffPoly | int | Fraction]) -> "LinDiffOp":
        return cls([[{r: c if isinstance(c, DiffPoly) else DiffPoly.scalar(c)
                      for r, c in entry.items()}]])

    @classmethod
    def matrix(cls, ops: Sequence[Sequence["LinDiffOp | int"]]) -> "LinDiffOp":
        rows = []
        for row in ops:
            out = []
            for op in row:
                if isinstance(op, LinDiffOp):
                    if op.shape != (1, 1):
                        raise ValueError("matrix() expects scalar operators")
                    out.append(op.entries[0][0])
                elif op == 0:
                    out.append({})
                else:
                    raise TypeError(f"cannot place {op!r} in an operator matrix")
            rows.append(out)
        return cls(rows)

    def __getitem__(self, idx: tuple[int, int]) -> "LinDiffOp":
        i, j = idx
        return LinDiffOp([[self.entries[i][j]]])

    # -- algebra --------------------------------------------------------
    def _check_same(self, other: "LinDiffOp"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "LinDiffOp") -> "LinDiffOp":
        self._check_same(other)
        return LinDiffOp([[_add(a, b) for a, b in zip(ra, rb)]
                          for ra, rb in zip(self.entries, other.entries)])

    def __neg__(self) -> "LinDiffOp":
        return self * -1

    def __sub__(self, other: "LinDiffOp") -> "LinDiffOp":
        return self + (-other)

    def __mul__(self, s) -> "LinDiffOp":
        if isinstance(s, (int, Fraction, DiffPoly)):
            return LinDiffOp([[_scale(e, s) for e in row] for row in self.entries])
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other: "LinDiffOp") -> "LinDiffOp":
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ValueError(f"cannot compose {self.shape} with {other.shape}")
        rows = []
        for i in range(n):
            row = []
            for j in range(m):
                acc: ScalarOp = {}
                for t in range(k):
                    acc = _add(acc, _compose(self.entries[i][t], other.entries[t][j]))
                row.append(acc)
            rows.append(row)
        return LinDiffOp(rows)

    def adjoint(self) -> "LinDiffOp":
        n, m = self.shape
        return LinDiffOp([[_adjoint(self.entries[i][j]) for i in range(n)] for j in range(m)])

    def apply(self, f: Sequence[DiffPoly] | DiffPoly) -> list[DiffPoly]:
        if isinstance(f, DiffPoly):
            f = [f]
        n, m = self.shape
        if len(f) != m:
            raise ValueError(f"operator with {m} columns applied to vector of length {len(f)}")
        out = []
        for i in range(n):
            acc = DiffPoly()
            for j in range(m):
                acc = acc + _apply(self.entries[i][j], f[j])
            out.append(acc)
        return out

    __call__ = apply

    def subs(self, mapping) -> "LinDiffOp":
        return LinDiffOp([[{r: c.subs(mapping) for r, c in e.items()} for e in row]
                          for row in self.entries])

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinDiffOp):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(tuple(tuple(tuple(e.items()) for e in row) for row in self.entries))

    def __repr__(self) -> str:
        return f"LinDiffOp({self})"

    def __str__(self) -> str:
        def entry_text(e):
            if not e:
                return "0"
            parts = []
            for r, c in sorted(e.items(), reverse=True):
                d = "" if r == 0 else ("D" if r == 1 else f"D^{r}")
                if not d:
                    parts.append(f"({c})")
                elif c == 1:
                    parts.append(d)
                else:
                    parts.append(f"({c}) {d}")
            return " + ".join(parts)
        return "[" + "; ".join(", ".join(entry_text(e) for e in row) for row in self.entries) + "]"


def D(n: int = 1) -> LinDiffOp:
    """The total derivative operator ``D^n``."""
    return LinDiffOp.scalar({n: 1})


def mult(c: DiffPoly | int | Fraction) -> LinDiffOp:
    """Multiplication by ``c`` as an operator."""
    return LinDiffOp.scalar({0: c})


def identity(n: int = 1) -> LinDiffOp:
    return LinDiffOp([[{0: DiffPoly.scalar(1)} if i == j else {} for j in range(n)]
                      for i in range(n)])
