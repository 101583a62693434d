import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lacunary.algebraic import enumerate_unit_ball, make_algebraic, rational
from lacunary.bigpoly import IntPolynomial
from lacunary.engines import CoefficientSeries, build_thm1, build_thm2, build_thm3, build_thm4
from lacunary.errors import VerificationError
from lacunary.indexsets import ALL, EVENS, Progression, sumset
from lacunary.verify import (
    block_union_count,
    check_density_claims,
    check_derivative_algebraic,
    check_lacunarity,
    check_mahler_blocks,
    check_partial_witnesses,
    check_radius,
    check_support,
    check_thm4_hypothesis,
    verify_series,
    zero_density,
)

P = IntPolynomial
HALF, MHALF, THIRD = rational("1/2"), rational("-1/2"), rational("1/3")
ZERO = rational(0)
ENUM = enumerate_unit_ball(4, 1, 3).numbers
ZETA = make_algebraic(P([1, 2, 4]), complex(-0.25, 0.43))


@pytest.fixture(scope="module")
def thm3():
    return build_thm3([ZERO, HALF, MHALF], 1, 4, "000")


def test_support_examples():
    f = build_thm1(ALL, EVENS, ENUM, 3, "00")
    assert check_support(f, sumset(ALL, EVENS, f.horizon)).passed
    edited = CoefficientSeries((1, 0, 2, 0, 0, 7, 3), 6)
    r = check_support(edited, EVENS)
    assert not r.passed and r.witness["index"] == 5
    assert check_support(CoefficientSeries((), 10), Progression(3, 7)).passed


def test_partial_witness_check():
    f = build_thm2(ALL, ALL, ENUM, 3, "00")
    assert check_partial_witnesses(f, ALL, ALL).passed
    bad = CoefficientSeries((1,), 3)     # 0 = a_1 + b_1 needs i = j
    r = check_partial_witnesses(bad, ALL, ALL)
    assert not r.passed and r.witness["index"] == 0


def test_lacunarity_examples(thm3):
    f = build_thm1(ALL, ALL, ENUM, 4, "000")
    r = check_lacunarity(f)
    assert r.passed
    ratios = [Fraction(row["ratio"]) for row in r.details["rows"]]
    assert [q > k for k, q in enumerate(ratios, 1)] == [True, True, True]
    constant_gap = CoefficientSeries(tuple(1 if n % 3 == 0 else 0 for n in range(30)), 29)
    r = check_lacunarity(constant_gap)
    assert not r.passed and r.witness["k"] >= 1
    assert check_lacunarity(thm3).passed
    assert all(row["ok"] for row in check_lacunarity(thm3).details["rows"])
    with pytest.raises(VerificationError, match="too few blocks"):
        check_lacunarity(build_thm3([ZERO], 1, 2, "0"))


def test_derivative_examples():
    f = build_thm1(ALL, ALL, [ZERO, HALF], 2, "0")
    r = check_derivative_algebraic(f, 1, 0)
    assert r.passed and r.details["head_value"] == [str(f.coefficient(0))]
    r = check_derivative_algebraic(f, 2, 1)
    assert r.passed and r.details["head_rational"]
    # oracle: differentiate the head block polynomial directly and evaluate at 1/2
    b = f.blocks[0]
    head = (b.factor.shift(b.t)).derivative(1).eval_exact(Fraction(1, 2))
    b2 = f.blocks[1]
    head += (b2.factor.shift(b2.t)).derivative(1).eval_exact(Fraction(1, 2))
    assert Fraction(r.details["head_value"][0]) == head.re
    with pytest.raises(VerificationError, match="enum too short"):
        check_derivative_algebraic(f, 3, 0)
    with pytest.raises(VerificationError, match="enum too short"):
        check_derivative_algebraic(CoefficientSeries((0, 1, 0, 0, 1, 1), 5), 1, 0)


def test_derivative_tail_failure():
    from lacunary.engines import Block, BlockSeries
    blocks = (Block(1, 0, 1, P([0, 1]), 1, 0), Block(2, 5, 1, P([-1, 2]), 1, 0), Block(3, 20, 1, P([1, 1]), 1, 0))
    fake = BlockSeries("thm1", blocks, 100, numbers=(ZERO, HALF, THIRD))
    r = check_derivative_algebraic(fake, 2, 0)
    assert not r.passed and r.witness == {"k": 3}


def test_mahler_examples(thm3):
    r = check_mahler_blocks(thm3, HALF)
    assert r.details["classification"] == "eventually-zero" and r.details["depth"] == 2
    r = check_mahler_blocks(thm3, THIRD)
    assert r.details["classification"] == "no-vanishing-tail"
    # oracle: direct exact evaluation of every block at 1/3
    for b, v in zip(thm3.blocks, r.details["values"]):
        expected = b.scalar * Fraction(1, 3) ** b.t * b.factor.eval_exact(Fraction(1, 3)).re
        assert Fraction(v[0]) == expected != 0
    r = check_mahler_blocks(thm3, ZERO)
    assert r.details["depth"] == 1
    with pytest.raises(VerificationError):
        check_mahler_blocks(thm3, rational(1))


@settings(max_examples=30)
@given(st.fractions(min_value=-Fraction(19, 20), max_value=Fraction(19, 20), max_denominator=20))
def test_mahler_classifies_outsiders(beta):
    f = build_thm3([ZERO, HALF, MHALF], 1, 3, "00")
    label = check_mahler_blocks(f, rational(beta)).details["classification"]
    if beta in (0, Fraction(1, 2), Fraction(-1, 2)):
        assert label == "eventually-zero"
    else:
        assert label == "no-vanishing-tail"


def test_density_examples(thm3):
    rows = check_density_claims(thm3)
    assert all(r.passed for r in rows)
    exact = [r for r in rows if r.details["k"] >= 2]
    for r in exact:
        assert Fraction(r.details["ratio"]) <= Fraction(1, r.details["k"])
    # oracle: count the block union by brute force
    spans = {n for b in thm3.blocks for n in range(b.t, b.t + b.D + 1)}
    for x in (5, 16, 60, 200):
        assert block_union_count(thm3, x) == sum(1 for n in spans if n <= x)


def test_density_thm4():
    psi = build_thm4(P([0, 0, 0, 1]), [ZERO, HALF, ZETA, ZETA.conjugate()], 300)
    (r,) = check_density_claims(psi)
    assert r.passed and r.details["zeros"] >= 197
    assert zero_density(psi, 300) >= Fraction(2, 3) - Fraction(3, 300)


def test_density_single_block():
    f = build_thm3([ZERO], 1, 1)
    rows = check_density_claims(f)
    statuses = [r.details["status"] for r in rows]
    assert statuses == ["undefined", "precondition unmet"]
    assert all(r.passed for r in rows)
    assert not all(r.passed for r in check_density_claims(f, strict=True))


def test_radius_examples():
    r = check_radius(build_thm3([ZERO], 1, 3, "00"))
    assert r.details["rows"][0]["c_root"][0].startswith("1.0000")
    f = build_thm3([ZERO, THIRD, rational("-1/3")], Fraction(1, 2), 2, "0")
    assert f.blocks[1].t == 16 and f.blocks[1].scalar == 65536
    r = check_radius(f)
    row = r.details["rows"][0]
    assert row["c_root"][0] <= "2.0" <= row["c_root"][1] or row["c_root"][0].startswith("1.9999")
    assert r.details["exact_hit"] and r.details["exact_value"] == "2"
    for row in r.details["rows"]:
        assert row["H_le_t"]


def test_thm4_hypothesis_examples():
    sq = P([0, 0, 1])
    assert check_thm4_hypothesis(sq, [ZERO, HALF, MHALF]).passed
    r = check_thm4_hypothesis(sq, [ZERO, HALF])
    assert not r.passed and r.witness["approx"].startswith("(-0.5")
    assert check_thm4_hypothesis(P([0, 0, 0, 1]), [ZERO, HALF, ZETA, ZETA.conjugate()]).passed


def test_report_is_serializable_and_idempotent(thm3):
    a = verify_series(thm3, alphas=[THIRD]).to_dict()
    b = verify_series(thm3, alphas=[THIRD]).to_dict()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["passed"]
    with pytest.raises(VerificationError, match="unknown check"):
        verify_series(thm3, checks=["nope"])


def test_head_value_rational_for_rational_alpha():
    f = build_thm1(ALL, ALL, ENUM, 3, "00")
    for i in (1, 2, 3):
        for m in (0, 1, 2):
            r = check_derivative_algebraic(f, i, m)
            assert r.passed and r.details["head_rational"]


@settings(max_examples=30)
@given(st.integers(0, 12), st.lists(st.integers(-4, 4), min_size=1, max_size=5).filter(any), st.integers(0, 3),
       st.integers(1, 5))
def test_block_derivative_matches_direct(t, coeffs, m, scalar):
    from lacunary.engines import Block
    from lacunary.algebraic import reduce
    from lacunary.verify import _block_derivative
    b = Block(1, t, scalar, P(coeffs), 0, 0)
    for alpha in (HALF, ZETA):
        direct = reduce((b.factor.shift(t) * scalar).derivative(m), alpha)
        assert _block_derivative(b, alpha, m) == direct
