from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from cwb.exactpoly import Poly

NAMES = ("d", "l", "m", "a", "b")


@st.composite
def polys(draw, names=NAMES, max_terms=4, max_deg=3):
    """Small random polynomials with rational coefficients."""
    p = Poly()
    for _ in range(draw(st.integers(0, max_terms))):
        c = Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 3)))
        term = Poly.const(c)
        for v in names:
            e = draw(st.integers(0, max_deg))
            if e:
                term = term * Poly.var(v) ** e
        p = p + term
    return p
