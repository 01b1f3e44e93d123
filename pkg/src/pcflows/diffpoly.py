"""Exact differential polynomials in one independent variable x.

A :class:`DiffPoly` is a finite sum of rational multiples of monomials in
jet coordinates ``u``, ``u_x``, ``u_xx``, ... of a set of dependent
variables.  Formal constants (e.g. ``lam``) are declared per polynomial and
have zero x-derivative.  Order-zero factors may carry negative powers so that
formal inverses such as ``k^-1`` or ``1/lam`` can be written; everything that
needs genuine polynomials (exactness, antiderivatives) refuses them.

Text syntax::

    1/3 u_xxx + 8/3 u u_x      implicit multiplication by juxtaposition
    (u_xx + 2*u^2)*u_x         explicit '*', integer powers with '^'
    u'''  u'{5}  u_{5}         alternative derivative suffixes
"""

from __future__ import annotations

import json
import re
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Union

import numpy as np

__all__ = [
    "DiffPoly",
    "NotExact",
    "ParseError",
    "UndeclaredVariable",
    "NonHomogeneous",
    "WeightScheme",
    "parse_expr",
    "d_x",
    "d_x_inverse",
    "euler_op",
    "is_exact",
    "weight_of",
    "compile_numeric",
    "ALIASES",
]

Scalar = Union[int, Fraction]
# A factor is (variable name, derivative order); a monomial is a sorted tuple
# of ((name, order), power) pairs with nonzero powers.
Factor = tuple[str, int]
Monomial = tuple[tuple[Factor, int], ...]

ALIASES = {"ℓ": "l", "λ": "lam"}


class NotExact(ValueError):
    """Raised when an antiderivative is requested for a non-exact polynomial."""

    def __init__(self, poly: "DiffPoly", residuals: Mapping[str, "DiffPoly"]):
        self.poly = poly
        self.residuals = dict(residuals)
        bad = ", ".join(f"E_{v}={r}" for v, r in self.residuals.items())
        super().__init__(f"{poly} is not a total derivative ({bad})")


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        pointer = " " * pos + "^"
        super().__init__(f"{message} at position {pos}\n  {text}\n  {pointer}")


class UndeclaredVariable(ParseError):
    pass


def _monomial_key(mono: Monomial):
    degree = sum(p for _, p in mono)
    top = max((o for (_, o), _ in mono), default=-1)
    return (degree, -top, mono)


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial | None:
    powers = dict(m1)
    for f, p in m2:
        powers[f] = powers.get(f, 0) + p
    return tuple(sorted((f, p) for f, p in powers.items() if p != 0))


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


class DiffPoly:
    """Immutable exact differential polynomial.

    Parameters
    ----------
    terms : mapping from monomial to rational coefficient
    constants : names treated as x-independent formal constants
    """

    __slots__ = ("_terms", "_items", "_hash", "constants")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None,
                 constants: Iterable[str] = ()):
        clean = {}
        for mono, c in (terms or {}).items():
            c = _as_fraction(c)
            if c != 0:
                mono = tuple(sorted((f, p) for f, p in mono if p != 0))
                clean[mono] = clean.get(mono, Fraction(0)) + c
                if clean[mono] == 0:
                    del clean[mono]
        self._items = tuple(sorted(clean.items(), key=lambda kv: _monomial_key(kv[0])))
        self._terms = dict(self._items)
        self._hash = None
        self.constants = frozenset(constants)

    # -- constructors ---------------------------------------------------
    @classmethod
    def var(cls, name: str, order: int = 0, constants: Iterable[str] = ()) -> "DiffPoly":
        return cls({(((name, order), 1),): 1}, constants)

    @classmethod
    def const(cls, name: str) -> "DiffPoly":
        """A formal constant symbol such as ``lam``."""
        return cls({(((name, 0), 1),): 1}, {name})

    @classmethod
    def scalar(cls, c: Scalar, constants: Iterable[str] = ()) -> "DiffPoly":
        return cls({(): c}, constants)

    @classmethod
    def zero(cls) -> "DiffPoly":
        return cls()

    # -- basic protocol -------------------------------------------------
    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> tuple[tuple[Monomial, Fraction], ...]:
        return self._items

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __bool__(self) -> bool:
        return bool(self._items)

    def is_zero(self) -> bool:
        return not self._items

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = DiffPoly.scalar(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self._items == other._items

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._items)
        return self._hash

    def __repr__(self) -> str:
        return f"DiffPoly({str(self)!r})"

    def __str__(self) -> str:
        return to_text(self)

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "DiffPoly":
        if isinstance(other, DiffPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return DiffPoly.scalar(other)
        return NotImplemented

    def __add__(self, other) -> "DiffPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self._terms)
        for mono, c in other._items:
            terms[mono] = terms.get(mono, Fraction(0)) + c
        return DiffPoly(terms, self.constants | other.constants)

    __radd__ = __add__

    def __neg__(self) -> "DiffPoly":
        return DiffPoly({m: -c for m, c in self._items}, self.constants)

    def __sub__(self, other) -> "DiffPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "DiffPoly":
        return (-self) + other

    def __mul__(self, other) -> "DiffPoly":
        if isinstance(other, (int, Fraction)):
            return DiffPoly({m: c * other for m, c in self._items}, self.constants)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict[Monomial, Fraction] = defaultdict(Fraction)
        for m1, c1 in self._items:
            for m2, c2 in other._items:
                terms[_mono_mul(m1, m2)] += c1 * c2
        return DiffPoly(terms, self.constants | other.constants)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "DiffPoly":
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        if n < 0:
            return self.inverse() ** (-n)
        result = DiffPoly.scalar(1, self.constants)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "DiffPoly":
        """Formal inverse of a single monomial built from order-zero factors."""
        if len(self._items) != 1:
            raise ValueError(f"cannot invert non-monomial {self}")
        (mono, c), = self._items
        if any(order != 0 for (_, order), _ in mono):
            raise ValueError(f"cannot invert {self}: contains derivatives")
        return DiffPoly({tuple((f, -p) for f, p in mono): 1 / c}, self.constants)

    def __truediv__(self, other) -> "DiffPoly":
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, DiffPoly):
            return self * other.inverse()
        return NotImplemented

    # -- structure ------------------------------------------------------
    def with_constants(self, constants: Iterable[str]) -> "DiffPoly":
        return DiffPoly(self._terms, self.constants | frozenset(constants))

    def factors(self) -> set[Factor]:
        return {f for mono, _ in self._items for f, _ in mono}

    def variables(self) -> set[str]:
        """Dependent variables that occur (formal constants excluded)."""
        return {name for name, _ in self.factors() if name not in self.constants}

    def symbols(self) -> set[str]:
        return {name for name, _ in self.factors()}

    def max_order(self, name: str | None = None) -> int:
        orders = [o for n, o in self.factors()
                  if n not in self.constants and (name is None or n == name)]
        return max(orders, default=-1)

    def degree_split(self) -> dict[int, "DiffPoly"]:
        """Split into components homogeneous in the dependent variables."""
        parts: dict[int, dict] = defaultdict(dict)
        for mono, c in self._items:
            d = sum(p for (n, _), p in mono if n not in self.constants)
            parts[d][mono] = c
        return {d: DiffPoly(t, self.constants) for d, t in parts.items()}

    def has_negative_powers(self, dependent_only: bool = True) -> bool:
        for mono, _ in self._items:
            for (n, _), p in mono:
                if p < 0 and not (dependent_only and n in self.constants):
                    return True
        return False

    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    # -- calculus -------------------------------------------------------
    def partial(self, name: str, order: int = 0) -> "DiffPoly":
        """Partial derivative with respect to the jet coordinate ``name_order``."""
        key = (name, order)
        terms: dict[Monomial, Fraction] = defaultdict(Fraction)
        for mono, c in self._items:
            powers = dict(mono)
            p = powers.get(key, 0)
            if p == 0:
                continue
            powers[key] = p - 1
            terms[tuple(sorted(powers.items()))] += c * p
        return DiffPoly(terms, self.constants)

    def dx(self, n: int = 1) -> "DiffPoly":
        result = self
        for _ in range(n):
            result = _total_derivative(result)
        return result

    def subs(self, mapping: Mapping[str, "DiffPoly | Scalar"]) -> "DiffPoly":
        """Substitute dependent variables; ``v_n`` becomes the n-th x-derivative."""
        mapping = {k: (v if isinstance(v, DiffPoly) else DiffPoly.scalar(v))
                   for k, v in mapping.items()}
        cache: dict[Factor, DiffPoly] = {}

        def image(f: Factor) -> DiffPoly:
            if f not in cache:
                name, order = f
                if order == 0:
                    cache[f] = mapping[name]
                else:
                    cache[f] = image((name, order - 1)).dx()
            return cache[f]

        consts = set(self.constants)
        for v in mapping.values():
            consts |= v.constants
        result = DiffPoly({}, consts)
        for mono, c in self._items:
            term = DiffPoly.scalar(c, consts)
            rest = []
            for f, p in mono:
                if f[0] in mapping and f[0] not in self.constants:
                    term = term * image(f) ** p
                else:
                    rest.append((f, p))
            result = result + term * DiffPoly({tuple(rest): 1}, consts)
        return result

    def eval_terms(self, jets: Mapping[Factor, np.ndarray | float]):
        """Evaluate numerically from precomputed jet arrays ``{(name, order): array}``."""
        total = 0.0
        for mono, c in self._items:
            val = float(c)
            for f, p in mono:
                val = val * (jets[f] ** p if p != 1 else jets[f])
            total = total + val
        return total

    # -- serialization --------------------------------------------------
    def to_json(self) -> dict:
        return {
            "terms": [
                {"coeff": f"{c.numerator}/{c.denominator}",
                 "factors": [[n, o, p] for (n, o), p in mono]}
                for mono, c in self._items
            ],
            "constants": sorted(self.constants),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "DiffPoly":
        terms = {}
        for t in data["terms"]:
            mono = tuple(((n, int(o)), int(p)) for n, o, p in t["factors"])
            terms[tuple(sorted(mono))] = Fraction(t["coeff"])
        return cls(terms, data.get("constants", ()))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _total_derivative(p: DiffPoly) -> DiffPoly:
    terms: dict[Monomial, Fraction] = defaultdict(Fraction)
    for mono, c in p.items():
        powers = dict(mono)
        for (name, order), e in mono:
            if name in p.constants:
                continue
            new = dict(powers)
            new[(name, order)] = e - 1
            new[(name, order + 1)] = new.get((name, order + 1), 0) + 1
            terms[tuple(sorted((f, q) for f, q in new.items() if q != 0))] += c * e
    return DiffPoly(terms, p.constants)


def d_x(p: DiffPoly) -> DiffPoly:
    """Total x-derivative (Leibniz rule, constants have zero derivative)."""
    return _total_derivative(p)


def euler_op(p: DiffPoly, var: str) -> DiffPoly:
    """Variational derivative ``sum_j (-D)^j dp/d(var_j)``."""
    result = DiffPoly({}, p.constants)
    for j in range(p.max_order(var), -1, -1):
        # Horner form: E = P_0 - D(P_1 - D(P_2 - ...))
        result = p.partial(var, j) - d_x(result)
    return result


def is_exact(p: DiffPoly) -> bool:
    if p.constant_term() != 0 or p.has_negative_powers():
        return False
    constant_only = any(
        all(n in p.constants for (n, _), _ in mono) for mono, _ in p.items()
    )
    if constant_only:
        return False
    return all(euler_op(p, v).is_zero() for v in p.variables())


def d_x_inverse(p: DiffPoly) -> DiffPoly:
    """Antiderivative without constant term; raises :class:`NotExact` otherwise.

    Exactness is decided by the Euler operators.  The antiderivative comes from
    the homotopy integral, which on the degree-d component reduces to
    ``(1/d) * sum_v sum_{i>=1} sum_{j<i} v_j (-D)^(i-1-j) dp/dv_i``.
    """
    if p.is_zero():
        return p
    if p.has_negative_powers():
        raise ValueError(f"antiderivative needs a polynomial, got {p}")
    residuals = {v: euler_op(p, v) for v in sorted(p.variables())}
    bad = {v: r for v, r in residuals.items() if not r.is_zero()}
    parts = p.degree_split()
    if 0 in parts:
        bad.setdefault("1", parts[0])
    if bad:
        raise NotExact(p, bad)
    result = DiffPoly({}, p.constants)
    for degree, part in parts.items():
        acc = DiffPoly({}, p.constants)
        for v in sorted(part.variables()):
            for i in range(1, part.max_order(v) + 1):
                dp = part.partial(v, i)
                if dp.is_zero():
                    continue
                inner = dp
                for j in range(i - 1, -1, -1):
                    # inner == (-D)^(i-1-j) dp
                    acc = acc + DiffPoly.var(v, j) * inner
                    inner = -d_x(inner)
        result = result + acc * Fraction(1, degree)
    if d_x(result) != p:  # pragma: no cover - guards the homotopy formula
        raise ArithmeticError(f"antiderivative check failed for {p}")
    return result


# -- weights ---------------------------------------------------------------

@dataclass(frozen=True)
class NonHomogeneous:
    weights: dict
    terms: tuple

    def __bool__(self) -> bool:
        return False


class WeightScheme(dict):
    """Variable weights; each x-derivative adds one."""

    def of_monomial(self, mono: Monomial) -> Fraction:
        w = Fraction(0)
        for (name, order), p in mono:
            if name not in self:
                raise KeyError(f"no weight assigned to {name!r}")
            w += (Fraction(self[name]) + order) * p
        return w


def weight_of(p: DiffPoly, w: Mapping[str, Scalar]) -> Fraction | int | NonHomogeneous:
    """Common weight of all terms, or :class:`NonHomogeneous` listing them."""
    scheme = w if isinstance(w, WeightScheme) else WeightScheme(w)
    by_weight: dict[Fraction, list] = defaultdict(list)
    for mono, c in p.items():
        by_weight[scheme.of_monomial(mono)].append(DiffPoly({mono: c}, p.constants))
    if len(by_weight) == 1:
        (value,) = by_weight
        return int(value) if value.denominator == 1 else value
    if not by_weight:
        return NonHomogeneous({}, ())
    return NonHomogeneous(
        {(int(k) if k.denominator == 1 else k): [str(t) for t in v]
         for k, v in by_weight.items()},
        tuple(str(t) for v in by_weight.values() for t in v),
    )


# -- printing --------------------------------------------------------------

def _factor_text(name: str, order: int) -> str:
    return name if order == 0 else f"{name}_{'x' * order}"


def _coeff_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def to_text(p: DiffPoly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for idx, (mono, c) in enumerate(p.items()):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = []
        for (name, order), power in mono:
            s = _factor_text(name, order)
            body.append(s if power == 1 else f"{s}^{power}")
        pieces = ([] if (mag == 1 and body) else [_coeff_text(mag)]) + body
        text = " ".join(pieces)
        if idx == 0:
            out.append(text if sign == "+" else f"-{text}")
        else:
            out.append(f"{sign} {text}")
    return " ".join(out)


def to_latex(p: DiffPoly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for idx, (mono, c) in enumerate(p.items()):
        mag = abs(c)
        body = []
        for (name, order), power in mono:
            tex = {"l": r"\ell", "lam": r"\lambda"}.get(name, name)
            if order:
                tex = f"{tex}_{{{'x' * order}}}" if order <= 3 else f"{tex}^{{({order})}}"
            if power != 1:
                tex = f"{{{tex}}}^{{{power}}}"
            body.append(tex)
        if mag == 1 and body:
            coeff = ""
        elif mag.denominator == 1:
            coeff = str(mag.numerator)
        else:
            coeff = rf"\tfrac{{{mag.numerator}}}{{{mag.denominator}}}"
        text = coeff + " ".join(body)
        if idx == 0:
            out.append(text if c > 0 else f"-{text}")
        else:
            out.append(("+ " if c > 0 else "- ") + text)
    return " ".join(out)


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<name>[^\W\d]\w*)(?P<deriv>(?:'\{\d+\}|'+))?
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)
_SUFFIX = re.compile(r"^(?P<base>.+?)_(?:(?P<xs>x+)|\{(?P<n>\d+)\})$")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        # underscore-brace derivatives are not covered by \w; splice them in
        m = re.compile(r"([^\W\d]\w*_\{\d+\})").match(text, pos)
        if m:
            tokens.append(("name", m.group(1), "", pos))
            pos = m.end()
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        if m.group("ws"):
            pass
        elif m.group("num"):
            tokens.append(("num", m.group("num"), "", pos))
        elif m.group("name"):
            tokens.append(("name", m.group("name"), m.group("deriv") or "", pos))
        else:
            tokens.append(("op", m.group("op"), "", pos))
        pos = m.end()
    tokens.append(("end", "", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, variables, constants, aliases):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.aliases = dict(ALIASES if aliases is None else aliases)
        self.variables = {self.aliases.get(v, v) for v in variables}
        self.constants = {self.aliases.get(c, c) for c in constants}

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            raise ParseError(f"expected {op!r}", self.text, tok[3])

    def parse(self) -> DiffPoly:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", self.text, 0)
        result = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[1]!r}", self.text, tok[3])
        return result.with_constants(self.constants)

    def expr(self) -> DiffPoly:
        result = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def _starts_atom(self, tok) -> bool:
        return tok[0] in ("num", "name") or (tok[0] == "op" and tok[1] == "(")

    def term(self) -> DiffPoly:
        result = self.unary()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "*/":
                self.take()
                rhs = self.unary()
                if tok[1] == "*":
                    result = result * rhs
                else:
                    try:
                        result = result / rhs
                    except (ValueError, ZeroDivisionError) as exc:
                        raise ParseError(f"cannot divide by {rhs}: {exc}", self.text, tok[3])
            elif self._starts_atom(tok):
                result = result * self.power()
            else:
                return result

    def power(self) -> DiffPoly:
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] in "+-":
                sign = -1 if self.take()[1] == "-" else 1
            exp_tok = self.take()
            if exp_tok[0] != "num" or not exp_tok[1].isdigit():
                raise ParseError("expected integer exponent", self.text, exp_tok[3])
            try:
                return base ** (sign * int(exp_tok[1]))
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(str(exc), self.text, exp_tok[3])
        return base

    def unary(self) -> DiffPoly:
        # sign binds looser than '^': -k^2 == -(k^2)
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            val = self.unary()
            return -val if tok[1] == "-" else val
        return self.power()

    def atom(self) -> DiffPoly:
        tok = self.take()
        kind, value, deriv, pos = tok
        if kind == "num":
            return DiffPoly.scalar(Fraction(value))
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "name":
            name, order = value, 0
            name = self.aliases.get(name, name)
            if name not in self.variables and name not in self.constants:
                m = _SUFFIX.match(value)
                if m:
                    base = self.aliases.get(m.group("base"), m.group("base"))
                    if base in self.variables:
                        name = base
                        order = len(m.group("xs")) if m.group("xs") else int(m.group("n"))
            if deriv:
                order += int(deriv[2:-1]) if deriv.startswith("'{") else len(deriv)
            if name in self.constants:
                if order:
                    return DiffPoly.scalar(0)
                return DiffPoly.const(name)
            if name not in self.variables:
                raise UndeclaredVariable(f"undeclared variable {value!r}", self.text, pos)
            return DiffPoly.var(name, order)
        if kind == "end":
            raise ParseError("unexpected end of expression", self.text, pos)
        raise ParseError(f"unexpected token {value!r}", self.text, pos)


def parse_expr(text: str, variables: Iterable[str] = ("u",), constants: Iterable[str] = (),
               aliases: Mapping[str, str] | None = None) -> DiffPoly:
    """Parse ``text`` into a canonical :class:`DiffPoly`.

    >>> str(parse_expr("1/3*u_xxx + 8/3*u*u_x"))
    '1/3 u_xxx + 8/3 u u_x'
    """
    return _Parser(text, variables, constants, aliases).parse()


# -- numerics --------------------------------------------------------------

def compile_numeric(p: DiffPoly, grid) -> Callable[..., np.ndarray]:
    """Return ``f(**arrays) -> array`` evaluating ``p`` on a periodic grid.

    Derivatives of the supplied arrays are spectral (see :mod:`pcflows.spectral`).
    Formal constants must be passed as scalars.
    """
    from .spectral import spectral_derivative

    needed: dict[str, int] = {}
    for name, order in p.factors():
        needed[name] = max(needed.get(name, 0), order)

    def evaluate(**arrays) -> np.ndarray:
        missing = sorted(set(needed) - set(arrays))
        if missing:
            raise KeyError(f"missing values for {', '.join(missing)}")
        jets = {}
        for name, top in needed.items():
            value = arrays[name]
            if name in p.constants or np.ndim(value) == 0:
                jets[(name, 0)] = float(value)
                for order in range(1, top + 1):
                    jets[(name, order)] = 0.0
                continue
            value = np.asarray(value, dtype=float)
            if value.shape != (grid.N,):
                raise ValueError(f"{name} has shape {value.shape}, expected ({grid.N},)")
            for order in range(top + 1):
                jets[(name, order)] = value if order == 0 else spectral_derivative(value, grid.L, order)
        out = p.eval_terms(jets)
        return np.broadcast_to(np.asarray(out, dtype=float), (grid.N,)).copy()

    return evaluate
