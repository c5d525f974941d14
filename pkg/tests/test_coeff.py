from __future__ import annotations

from cwb.coeff import (
    build_window, check_symbolic_indices, check_window_jacobi, coeff_bracket, compare_closed_form,
)
from cwb.exactpoly import Poly
from cwb.lca import builtin


def test_witt_relation():
    A = builtin("Vir")
    assert coeff_bracket(A, 0, 2, 0, 3) == {(0, 4): Poly.const(-1)}
    assert coeff_bracket(A, 0, 5, 0, 1) == {(0, 5): Poly.const(4)}


def test_vir_window_jacobi():
    assert check_window_jacobi(build_window(builtin("Vir"), 6)).passed


def test_tsv_window_jacobi():
    assert check_window_jacobi(build_window(builtin("TSV", a=2, b=1), 5)).passed


def test_corrupted_constant_is_caught():
    win = build_window(builtin("TSV", a=2, b=1), 3)
    key = (0, 1, 1, 1)
    win.brackets[key] = {k: c + 1 for k, c in win.brackets[key].items()}
    rep = check_window_jacobi(win)
    assert not rep.passed
    assert len(rep.witness["indices"]) >= 2


def test_closed_forms_symbolic():
    assert check_symbolic_indices(builtin("TSV"), "TSV(a,b)").passed
    assert check_symbolic_indices(builtin("TSVc"), "TSV(c)").passed


def test_closed_forms_on_window():
    assert compare_closed_form(build_window(builtin("TSV"), 6), "TSV(a,b)").passed
    assert compare_closed_form(build_window(builtin("TSVc"), 6), "TSV(c)").passed


def test_closed_form_detects_a_wrong_family():
    win = build_window(builtin("TSV", a=1, b=0), 2)
    assert not compare_closed_form(win, "TSV(a,b)", {"a": 2, "b": 0}).passed
