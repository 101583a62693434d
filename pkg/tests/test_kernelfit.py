import random
from math import gcd

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from lacunary.bigpoly import IntPolynomial
from lacunary.errors import KernelFitError
from lacunary.indexsets import ALL, EVENS, Explicit, Progression
from lacunary.kernelfit import (
    IntegerMatrix,
    build_constraints,
    integer_kernel,
    minimal_ansatz,
    rational_nullity,
    support_fit,
)

P = IntPolynomial
M = IntegerMatrix.from_rows


def oracle_matrix(p, allowed, L):
    # hand expansion of the coefficients of P*Q as linear forms in q_0..q_L
    d = len(p) - 1
    rows = []
    for n in range(L + d + 1):
        if n in allowed:
            continue
        rows.append([p[n - i] if 0 <= n - i <= d else 0 for i in range(L + 1)])
    return rows


def oracle_min_L(p, allowed):
    # first L whose constraint system has a nontrivial rational solution (sympy rank)
    for L in range(80):
        rows = oracle_matrix(p, allowed, L)
        rank = sympy.Matrix(rows).rank() if rows else 0
        if rank < L + 1:
            return L
    raise AssertionError("no L found")


def test_minimal_ansatz_examples():
    assert minimal_ansatz(2, Progression(0, 3)) == 4
    assert minimal_ansatz(1, ALL) == 0
    # 40 is the fourth member of {10, 20, ...}: L + 3 >= 40
    assert minimal_ansatz(3, Progression(10, 10)) == 37
    with pytest.raises(KernelFitError, match="set too sparse at bound"):
        minimal_ansatz(3, Explicit([1, 2], bound=50))


def test_build_constraints_examples():
    m = build_constraints(P([1, 1, 1]), Progression(0, 3), 1)
    assert m.rows == ((1, 1), (1, 1)) and m.row_labels == (1, 2)
    assert build_constraints(P([0, 1]), ALL, 5).rows == ()
    m = build_constraints(P([1, 1]), EVENS, 1)
    assert m.rows == ((1, 1),) and m.row_labels == (1,)


def test_integer_kernel_examples():
    assert integer_kernel(M([[1, 1]])) == [(1, -1)]
    assert integer_kernel(M([[1, 0], [0, 1]])) == []
    assert integer_kernel(M([[1, 1], [1, 1]])) == [(1, -1)]


def test_support_fit_examples():
    fit = support_fit(P([1, 1, 1]), Progression(0, 3))
    assert fit.Q == P([-1, 1]) and fit.product == P([-1, 0, 0, 1])
    fit = support_fit(P([1, 1]), EVENS)
    assert fit.Q == P([-1, 1]) and fit.product == P([-1, 0, 1])
    fit = support_fit(P([0, 1]), Explicit([1, 5, 9], bound=40))
    assert fit.Q == P([1]) and fit.product == P([0, 1])
    assert fit.to_dict()["Q"] == ["1"]


def test_support_fit_exhaustive_small():
    # oracle: among all Q with deg <= 1 and entries in [-2, 2], the working ones are +-(z - 1)
    found = []
    for q0 in range(-2, 3):
        for q1 in range(-2, 3):
            if (q0, q1) == (0, 0):
                continue
            prod = P([1, 1, 1]) * P([q0, q1])
            if all(prod[n] == 0 for n in range(prod.degree + 1) if n % 3):
                found.append((q0, q1))
    assert sorted(found) == [(-2, 2), (-1, 1), (1, -1), (2, -2)]
    assert support_fit(P([1, 1, 1]), Progression(0, 3)).Q.coeffs in [(-1, 1)]


def test_support_fit_errors():
    with pytest.raises(KernelFitError, match="set too sparse at bound"):
        support_fit(P([1, 1, 1]), Explicit([0, 4], bound=12))
    with pytest.raises(KernelFitError):
        support_fit(P([]), ALL)


small_mats = st.integers(1, 5).flatmap(lambda n: st.lists(
    st.lists(st.integers(-4, 4), min_size=n, max_size=n), max_size=5).map(lambda rows: M(rows, n)))


@given(small_mats)
def test_kernel_against_sympy(m):
    basis = integer_kernel(m)
    sm = sympy.Matrix(m.rows) if m.rows else sympy.zeros(0, m.ncols)
    assert len(basis) == m.ncols - sm.rank()
    assert rational_nullity(m) == len(basis)
    for v in basis:
        assert all(x == 0 for x in m.apply(v))
        g = 0
        for x in v:
            g = gcd(g, x)
        assert g == 1
    if basis:
        # the lattice basis spans the rational kernel
        assert sympy.Matrix(basis).rank() == len(basis)


@given(st.lists(st.integers(-5, 5), min_size=2, max_size=7), st.integers(1, 4), st.integers(0, 3))
def test_fit_oracle_progressions(coeffs, step, offset):
    if coeffs[-1] == 0:
        coeffs[-1] = 1
    s = Progression(offset % step, step)
    _check_fit(coeffs, s, set(range(offset % step, 200, step)))


def _check_fit(coeffs, s, allowed):
    p = P(coeffs)
    fit = support_fit(p, s)
    assert fit.Q.degree is not None and fit.Q.content() == 1
    assert fit.Q.coeffs[-1] > 0 and fit.m <= fit.L_used
    prod = p * fit.Q
    assert prod == fit.product
    assert all(prod[n] == 0 for n in range(prod.degree + 1) if n not in allowed)
    assert fit.L_used == oracle_min_L(list(p.coeffs), allowed)


def test_fit_oracle_random_dense_sets():
    rng = random.Random(20240611)
    for _ in range(25):
        d = rng.randint(1, 6)
        coeffs = [rng.randint(-5, 5) for _ in range(d)] + [rng.choice([-5, -3, -1, 1, 2, 4])]
        members = [n for n in range(61) if rng.random() < 0.5]
        while len(members) < 21:
            members = sorted(set(members) | {rng.randint(0, 60)})
        s = Explicit(members, bound=60)
        try:
            _check_fit(coeffs, s, set(members))
        except KernelFitError as exc:
            assert "set too sparse at bound" in str(exc)
