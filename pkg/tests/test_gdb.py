from __future__ import annotations

import random
from fractions import Fraction

import pytest

from cwb.dsl import parse_poly as P
from cwb.gdb import (
    GdBialgebra, GdError, change_basis, check_all, check_gd_compat, check_lie, check_novikov,
    from_quadratic, to_quadratic, v_ab,
)
from cwb.lca import builtin


def same_products(G, H) -> bool:
    return G.basis == H.basis and G.circ == H.circ and G.lie == H.lie


def test_v_ab_axioms():
    G = v_ab()
    assert all(r.passed for r in check_all(G))


def test_nonabelian_lie_product_is_not_novikov():
    G = GdBialgebra.from_products("aff", ["x", "y"], {("x", "y"): {"y": 1}, ("y", "x"): {"y": -1}}, {})
    assert not check_novikov(G).passed


def test_one_dimensional_unit():
    G = GdBialgebra.from_products("e", ["e"], {("e", "e"): {"e": 1}}, {})
    assert check_novikov(G).passed and check_lie(G).passed and check_gd_compat(G).passed


def test_shifted_lie_bracket_breaks_compatibility():
    V = v_ab()
    circ = {(V.basis[i], V.basis[j]): {V.basis[k]: V.circ[i][j][k] for k in range(3) if V.circ[i][j][k]}
            for i in range(3) for j in range(3)}
    lie = {("L", "Y"): {"Y": P("1 - b")}, ("L", "M"): {"M": P("-2*b")}}
    G = GdBialgebra.from_products("V'", V.basis, circ, lie)
    assert check_novikov(G).passed
    rep = check_gd_compat(G)
    assert not rep.passed


def test_zero_lie_bracket_is_compatible():
    V = v_ab(a=5, b=0)
    assert check_gd_compat(V).passed


def test_quadratic_algebra_of_v_ab_is_tsv():
    assert to_quadratic(v_ab()).same_table(builtin("TSV"))
    assert same_products(from_quadratic(builtin("TSV")), v_ab())


def test_tsv_c_is_not_quadratic():
    with pytest.raises(GdError) as err:
        from_quadratic(builtin("TSVc"))
    assert "d^2" in str(err.value) and "[Y Y]" in str(err.value)


def test_invalid_bialgebra_has_no_quadratic_algebra():
    G = GdBialgebra.from_products("aff", ["x", "y"], {("x", "y"): {"y": 1}, ("y", "x"): {"y": -1}}, {})
    with pytest.raises(GdError):
        to_quadratic(G)


def _seed_instances():
    """Valid bialgebras of dimension at most 3."""
    out = [
        GdBialgebra.from_products("e", ["e"], {("e", "e"): {"e": 1}}, {}),
        GdBialgebra.from_products("z", ["x", "y"], {}, {("x", "y"): {"y": 1}}),
        GdBialgebra.from_products("c2", ["x", "y"], {("x", "x"): {"x": 1}, ("x", "y"): {"y": 1},
                                                    ("y", "x"): {"y": 1}}, {}),
    ]
    for a, b in [(0, 0), (2, 0), (1, 3), (Fraction(3, 2), 7), (-1, Fraction(1, 2))]:
        out.append(v_ab(a=a, b=b))
    return out


def _random_invertible(rng, n):
    while True:
        T = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        # triangular plus a random permutation-free shear keeps it invertible
        for i in range(n):
            T[i][i] = Fraction(rng.choice([-2, -1, 1, 2]))
            for j in range(i):
                T[i][j] = Fraction(0)
        if rng.random() < 0.5:
            T = [list(r) for r in zip(*T)]
        return T


def random_valid_instances(count=20, seed=11):
    rng = random.Random(seed)
    seeds = _seed_instances()
    out = []
    for _ in range(count):
        G = rng.choice(seeds)
        out.append(change_basis(G, _random_invertible(rng, G.dim)))
    return out


@pytest.mark.parametrize("G", random_valid_instances(), ids=lambda G: f"{G.name}{G.dim}")
def test_round_trip(G):
    assert all(r.passed for r in check_all(G))
    assert same_products(from_quadratic(to_quadratic(G)), G)


def test_change_basis_round_trip():
    T = [[Fraction(1), Fraction(2), 0], [0, Fraction(1), 0], [0, 0, Fraction(3)]]
    Tinv = [[Fraction(1), Fraction(-2), 0], [0, Fraction(1), 0], [0, 0, Fraction(1, 3)]]
    V = v_ab(a=2, b=1)
    assert same_products(change_basis(change_basis(V, T), Tinv), V)
