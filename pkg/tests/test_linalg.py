from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cwb.cohom import cocycle_rows
from cwb.exactpoly import Poly, RatFn, SpecializationError
from cwb.lca import builtin
from cwb.linalg import (
    Mat, apply, echelon, in_span, nullspace_rows, quotient, same_span, solve_affine,
)
from oracles import cocycle_dims

a = Poly.var("a")


def test_identity_has_trivial_nullspace():
    assert Mat([[1, 0], [0, 1]]).nullspace().dim == 0


def test_parametric_pivot_is_recorded():
    M = Mat([[a - 1, 0]])
    ns = M.nullspace()
    assert ns.dim == 1
    assert ns.genericity == [a - 1]
    # specialization oracle: generic point keeps the dimension, the pivot zero raises it
    assert M.specialize({"a": 2}).nullspace().dim == 1
    assert M.specialize({"a": 1}).nullspace().dim == 2


def test_specializing_into_a_vanishing_denominator_names_it():
    M = Mat([[RatFn(Poly.const(1), a - 1), 0]])
    with pytest.raises(SpecializationError) as err:
        M.specialize({"a": 1})
    assert err.value.poly == a - 1


def _cocycle_mat(A, D):
    rows = cocycle_rows(A, D)
    ncols = A.n ** 2 * (D + 1)
    return Mat([[r.get(c, 0) for c in range(ncols)] for r in rows])


def test_vir_cocycle_space_matches_dense_oracle():
    A = builtin("Vir")
    ns = nullspace_rows(cocycle_rows(A, 6), 7)
    assert ns.dim == 2 == cocycle_dims(A, 6)
    # the basis spans alpha = l and alpha = l^3
    assert same_span(ns.basis, [{1: Fraction(1)}, {3: Fraction(1)}], 7)


def test_special_point_raises_the_cocycle_dimension():
    M = _cocycle_mat(builtin("TSV"), 4)
    generic = M.nullspace().dim
    at20 = M.specialize({"a": 2, "b": 0}).nullspace().dim
    assert at20 == cocycle_dims(builtin("TSV", a=2, b=0), 4)
    assert at20 > generic


def test_numeric_specialization_is_well_defined():
    M = _cocycle_mat(builtin("TSV"), 3).specialize({"a": 0, "b": 0})
    assert all(x.num.is_constant() for r in M.rows for x in r)


def test_solutions_satisfy_the_system():
    rows = cocycle_rows(builtin("TSV"), 4)
    ns = nullspace_rows(rows, 9 * 5)
    for v in ns.basis:
        assert all(x == 0 for x in apply(rows, v))


def test_quotient_and_span():
    e = [{0: Fraction(1)}, {1: Fraction(1)}, {2: Fraction(1)}]
    reps, _, _ = quotient([e[0]], e, 3)
    assert len(reps) == 2
    assert not any(in_span(r, [e[0]], 3) for r in reps)
    assert in_span({0: Fraction(2), 1: Fraction(3)}, e[:2], 3)
    assert not in_span({2: Fraction(1)}, e[:2], 3)


def test_affine_solve_keeps_early_unknowns_free():
    # u + v - 2 = 0
    sol = solve_affine([{"u": Fraction(1), "v": Fraction(1), None: Fraction(-2)}], ["u", "v"])
    assert sol.consistent and sol.free == ["u"]
    assert sol.dependent["v"] == RatFn(2 - Poly.var("u"))
    bad = solve_affine([{"u": Fraction(1)}, {"u": Fraction(1), None: Fraction(1)}], ["u"])
    assert not bad.consistent


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=4))
def test_rank_nullity(rows):
    sparse = [{j: Fraction(x) for j, x in enumerate(r) if x} for r in rows]
    E = echelon(sparse, 4)
    ns = nullspace_rows(sparse, 4)
    assert E.rank + ns.dim == 4
    for v in ns.basis:
        assert all(x == 0 for x in apply(sparse, v))
