"""Hypothesis strategies for differential polynomials."""

from fractions import Fraction

from hypothesis import strategies as st

from pcflows.diffpoly import DiffPoly

coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=6).filter(lambda c: c != 0)


@st.composite
def monomials(draw, variables=("k", "l"), max_order=3, max_factors=3):
    n = draw(st.integers(0, max_factors))
    factors = {}
    for _ in range(n):
        f = (draw(st.sampled_from(variables)), draw(st.integers(0, max_order)))
        factors[f] = factors.get(f, 0) + draw(st.integers(1, 2))
    return tuple(sorted(factors.items()))


@st.composite
def diffpolys(draw, variables=("k", "l"), max_terms=4, max_order=3):
    n = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(n):
        terms[draw(monomials(variables, max_order))] = draw(coefficients)
    return DiffPoly(terms)


def scalar(c) -> DiffPoly:
    return DiffPoly.scalar(Fraction(c))
