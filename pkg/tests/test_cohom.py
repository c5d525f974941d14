from __future__ import annotations

from fractions import Fraction

import pytest

from cwb.branches import explore
from cwb.cohom import (
    coboundary_preimage, coboundary_vectors, cochain_from_table, extend, is_coboundary,
    is_cocycle, same_h2, section_shift, solve_cocycles, solve_cocycles_quadratic, verify_solution,
)
from cwb.dsl import parse_poly as P
from cwb.exactpoly import Poly
from cwb.gdb import v_ab
from cwb.lca import builtin, check_jacobi, make_presentation
from cwb.linalg import same_span
from oracles import cocycle_dims


def spans_mod_b2(sol, tables) -> bool:
    """Representatives span the same classes as the given cochain tables."""
    want = [cochain_from_table(sol.A, sol.D, t) for t in tables]
    B = sol.B2.basis
    return same_span(list(sol.H2) + B, want + B, sol.ncols)


def test_vir():
    sol = solve_cocycles(builtin("Vir"))
    assert sol.dims == {"Z2": 2, "B2": 1, "H2": 1}
    assert spans_mod_b2(sol, [{("L", "L"): P("l^3")}])


def test_tsv_generic():
    sol = solve_cocycles(builtin("TSV"))
    assert sol.dims["H2"] == 1
    assert spans_mod_b2(sol, [{("L", "L"): P("l^3")}])
    assert P("a - 1") in sol.genericity
    assert verify_solution(sol).passed


def test_branching_reaches_the_special_points():
    points = {tuple(sorted(asg.items())): res.dims["H2"]
              for asg, res, _ in explore(solve_cocycles, builtin("TSV"))}
    F = Fraction
    assert points[(("a", F(2)), ("b", F(0)))] == 3
    assert points[(("a", F(1)), ("b", F(0)))] == 3
    assert points[(("a", F(0)), ("b", F(0)))] == 3


def test_tsv_00_representatives():
    sol = solve_cocycles(builtin("TSV", a=0, b=0))
    assert sol.dims["H2"] == 3
    assert spans_mod_b2(sol, [{("L", "L"): P("l^3")}, {("L", "Y"): P("1")}, {("L", "Y"): P("l")}])
    assert sol.rendered() == ["a(L,L)=l^3", "b(L,Y)=l", "c(L,Y)=1"]


def test_tsv_10_representatives():
    sol = solve_cocycles(builtin("TSV", a=1, b=0))
    assert sol.dims["H2"] == 3
    extra = [{("L", "Y"): P("l^2")}, {("Y", "M"): P("1")}]
    for t in extra:
        v = cochain_from_table(sol.A, sol.D, t)
        assert is_cocycle(sol.A, v, sol.D) and not is_coboundary(sol.A, v, sol.D)
    assert spans_mod_b2(sol, [{("L", "L"): P("l^3")}] + extra)


@pytest.mark.parametrize("ab,h2", [((0, 0), 3), ((2, 0), 3), ((1, 0), 3), ((1, 5), 1), ((2, 3), 1)])
def test_special_points(ab, h2):
    sol = solve_cocycles(builtin("TSV", a=ab[0], b=ab[1]))
    assert sol.dims["H2"] == h2
    assert verify_solution(sol).passed


@pytest.mark.parametrize("ab", [(0, 0), (2, 0), (1, 0), (1, 5)])
def test_cocycle_dimension_matches_dense_oracle(ab):
    A = builtin("TSV", a=ab[0], b=ab[1])
    assert solve_cocycles(A, 4).dims["Z2"] == cocycle_dims(A, 4)


def test_tsv_c():
    sol = solve_cocycles(builtin("TSVc"))
    assert sol.dims["H2"] == 1 and P("c") in sol.genericity
    sol0 = solve_cocycles(builtin("TSVc", c=0))
    assert sol0.dims == {"Z2": 4, "B2": 2, "H2": 2}
    assert spans_mod_b2(sol0, [{("L", "L"): P("l^3")}, {("L", "M"): P("1"), ("Y", "Y"): P("-2*l")}])


@pytest.mark.parametrize("name,kw", [("Vir", {}), ("TSV", {}), ("TSV", {"a": 1, "b": 0}), ("TSVc", {})])
def test_stable_in_the_degree_bound(name, kw):
    A = builtin(name, **kw)
    s6, s8 = solve_cocycles(A, 6), solve_cocycles(A, 8)
    assert s6.dims["H2"] == s8.dims["H2"]
    lifted = [cochain_from_table(A, 8, s6.table(v)) for v in s6.H2]
    assert same_span(lifted + s8.B2.basis, list(s8.H2) + s8.B2.basis, s8.ncols)


def test_representatives_are_not_coboundaries():
    sol = solve_cocycles(builtin("TSV", a=2, b=0))
    for v in sol.H2:
        assert is_cocycle(sol.A, v, sol.D)
        assert not is_coboundary(sol.A, v, sol.D)


@pytest.mark.parametrize("ab", [None, (0, 0), (2, 0), (1, 0), (1, 5)])
def test_quadratic_route_agrees(ab):
    kw = {} if ab is None else {"a": ab[0], "b": ab[1]}
    A, G = builtin("TSV", **kw), v_ab(**kw)
    assert same_h2(solve_cocycles(A), solve_cocycles_quadratic(G))


def test_linear_term_is_removed_by_a_shift():
    # alpha(L, L) = A l is the coboundary of phi(L) = A/2
    A = builtin("Vir")
    vec = cochain_from_table(A, 6, {("L", "L"): P("7*l")})
    pre = coboundary_preimage(A, vec, 6)
    assert pre["L"] == Fraction(7, 2)


def test_virasoro_extension():
    V = extend(builtin("Vir"), {("L", "L"): P("l^3") / 12})
    assert V.gens == ("L", "C")
    assert V.table[0][0] == (P("d + 2*l"), P("1/12*l^3"))
    assert check_jacobi(V).passed


def test_tsv0_extension():
    A = builtin("TSVc", c=0)
    E = extend(A, {("L", "M"): P("1"), ("Y", "Y"): P("-2*l")})
    assert E.table[0][2] == (Poly(), Poly(), P("d"), P("1"))
    assert check_jacobi(E).passed


def test_zero_cocycle_gives_the_direct_sum():
    A = builtin("TSV", a=2, b=1)
    E = extend(A, {}, 6)
    assert check_jacobi(E).passed
    assert all(E.table[i][j][3].is_zero() for i in range(3) for j in range(3))


def test_non_cocycle_is_rejected():
    with pytest.raises(ValueError):
        extend(builtin("Vir"), {("L", "L"): P("l^2")})


def test_coboundary_extension_is_split_by_the_section_shift():
    A = builtin("TSV", a=2, b=1)
    B = coboundary_vectors(A, 6)
    vec: dict = {}
    for k, c in zip(range(3), (3, -1, 2)):
        for col, x in B[k].items():
            vec[col] = vec.get(col, 0) + c * x
    E = extend(A, vec, 6)
    shifted = section_shift(E, coboundary_preimage(A, vec, 6))
    direct = extend(A, {}, 6)
    assert shifted.same_table(direct)


@pytest.mark.parametrize("ab", [None, (0, 0), (1, 0)])
def test_each_representative_extends(ab):
    kw = {} if ab is None else {"a": ab[0], "b": ab[1]}
    sol = solve_cocycles(builtin("TSV", **kw))
    for v in sol.H2:
        E = extend(sol.A, v, sol.D)
        assert E.n == 4 and check_jacobi(E).passed


def test_central_generator_avoids_existing_names():
    A = make_presentation("X", ["C"], [], {})
    assert extend(A, {}, 2).gens == ("C", "Z")
