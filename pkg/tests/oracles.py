"""Independent sympy computations used to cross-check the exact engine."""

from __future__ import annotations

from itertools import product

import sympy as sp

from cwb.branches import to_sympy

d, l, m = sp.symbols("d l m")


def sympy_table(A):
    return [[[to_sympy(p) if p else sp.Integer(0) for p in A.table[i][j]]
             for j in range(A.n)] for i in range(A.n)]


def cocycle_dims(A, D):
    """dim Z^2 at degree bound D by direct expansion of the cocycle identities.

    Requires a presentation without free parameters.
    """
    n = A.n
    T = sympy_table(A)
    c = {(i, j, t): sp.Symbol(f"c_{i}_{j}_{t}") for i, j, t in product(range(n), range(n), range(D + 1))}

    def alpha(i, j, lam):
        return sum(c[i, j, t] * lam ** t for t in range(D + 1))

    eqs = []
    for i, j in product(range(n), repeat=2):
        e = sp.expand(alpha(i, j, l) + alpha(j, i, -l))
        eqs.extend(sp.Poly(e, l).coeffs() if e != 0 else [])
    for i, j, k in product(range(n), repeat=3):
        e = 0
        for r in range(n):
            e += T[j][k][r].subs({d: l, l: m}, simultaneous=True) * alpha(i, r, l)
            e -= T[i][k][r].subs({d: m, l: l}, simultaneous=True) * alpha(j, r, m)
            e -= T[i][j][r].subs({d: -l - m, l: l}, simultaneous=True) * alpha(r, k, l + m)
        e = sp.expand(e)
        if e != 0:
            eqs.extend(sp.Poly(e, l, m).coeffs())
    unknowns = list(c.values())
    M, _ = sp.linear_eq_to_matrix(eqs, unknowns)
    return len(unknowns) - M.rank()
