import dataclasses
from fractions import Fraction as F

import pytest
from hypothesis import given, settings as hsettings, strategies as st

import oracle
from cyclicdeg.config import settings
from cyclicdeg.density import (
    DensityError,
    HorizonExceeded,
    approach_rational,
    check_witness,
    is_prime,
    limit_term,
    next_prime_cong1,
    oracle_product,
    quaternion_tail,
    smallest_order_q_unit,
    term_value,
    witness_from_terms,
)
from cyclicdeg.formulas import csd_quaternion


def test_is_prime_against_sieve():
    N = 5000
    sieve = [True] * N
    sieve[0] = sieve[1] = False
    for i in range(2, N):
        if sieve[i]:
            for j in range(i * i, N, i):
                sieve[j] = False
    assert [n for n in range(N) if is_prime(n)] == [n for n in range(N) if sieve[n]]
    assert is_prime(2 ** 61 - 1) and not is_prime(2 ** 61 + 1)


def test_next_prime_cong1():
    assert next_prime_cong1(3, 2) == 7
    assert next_prime_cong1(3, 8) == 13
    assert next_prime_cong1(7, 2, exclude={29}) == 43
    with pytest.raises(DensityError):
        next_prime_cong1(4, 2)
    with pytest.raises(HorizonExceeded):
        next_prime_cong1(3, 8, horizon=12)


def test_smallest_order_q_unit():
    assert smallest_order_q_unit(3, 7) == 2
    assert smallest_order_q_unit(5, 11) == 3
    with pytest.raises(DensityError):
        smallest_order_q_unit(3, 11)


@pytest.mark.parametrize("q,n,p", [(3, 1, 7), (3, 2, 7), (2, 1, 5), (2, 2, 5), (5, 1, 11), (3, 1, 13)])
def test_term_formula_matches_independent_oracle(q, n, p):
    k = smallest_order_q_unit(q, p)
    R = oracle.metacyclic(p, q ** n, k)
    top = R.closure([(0, 1)])
    assert term_value(q, n, p) == oracle.csd_relative(R, top)
    value, limit = limit_term(q, n, p)
    assert limit == F(n, n + 1) < value


def test_term_tends_to_limit():
    values = [term_value(3, 2, p) for p in (7, 19, 37, 1000003)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert values[-1] - F(2, 3) < F(1, 10 ** 5)


def test_approach_one_half():
    w = approach_rational(1, 2, F(1, 100))
    assert [(t.q, t.n, t.p, t.k) for t in w.terms] == [(3, 1, 151, 32)]
    assert w.value == F(26, 51) and w.error == F(1, 102)
    assert w.specs == ["Zsd(151,3,32)"]
    assert check_witness(w) == []


def test_approach_two_fifths():
    w = approach_rational(2, 5, F(1, 20))
    assert [t.q for t in w.terms] == [3, 7, 11]
    assert [t.n for t in w.terms] == [2, 3, 4]
    assert [t.p for t in w.terms] == [61, 71, 67]
    assert w.error == F(1459, 35750) < F(1, 20)


def test_approach_endpoints():
    one = approach_rational(3, 3, F(1, 10))
    assert one.value == 1 and one.terms == () and one.error == 0
    zero = approach_rational(0, 1, F(1, 10))
    assert zero.quaternion_n is not None and zero.value < F(1, 10)
    assert csd_quaternion(zero.quaternion_n - 1) >= F(1, 10)
    assert zero.specs == [f"Q{2 ** zero.quaternion_n}"]


@pytest.mark.parametrize("a,b,tol", [(3, 2, F(1)), (-1, 2, F(1)), (1, 0, F(1)), (1, 2, F(0)), (1, 2, F(-1))])
def test_approach_rejects_bad_input(a, b, tol):
    with pytest.raises(DensityError):
        approach_rational(a, b, tol)


def test_approach_horizon(monkeypatch):
    monkeypatch.setattr(settings, "prime_horizon", 100)
    with pytest.raises(HorizonExceeded):
        approach_rational(1, 2, F(1, 1000))


def test_check_witness_catches_tampering():
    w = approach_rational(1, 2, F(1, 100))
    bad_value = dataclasses.replace(w, value=w.value + 1)
    assert check_witness(bad_value)
    t = dataclasses.replace(w.terms[0], p=149)
    assert check_witness(dataclasses.replace(w, terms=(t,)))
    assert check_witness(dataclasses.replace(w, tol=F(1, 1000)))


def test_oracle_product_on_small_witness():
    w = witness_from_terms([(3, 1, 7), (2, 1, 5)])
    per_factor, whole = oracle_product(w)
    assert per_factor == whole == w.value == F(10, 21)


def test_oracle_product_rejects_large_factors():
    w = approach_rational(2, 5, F(1, 20))
    with pytest.raises(DensityError):
        oracle_product(w)


def test_quaternion_tail():
    rows = quaternion_tail(20)
    assert rows[0] == (3, F(1))
    assert dict(rows)[10] == F(5732, 70756)
    assert rows[-1][1] < F(1, 100)
    with pytest.raises(DensityError):
        quaternion_tail(2)


@hsettings(max_examples=25)
@given(st.integers(1, 6), st.integers(1, 6), st.sampled_from([F(1, 10), F(1, 50), F(1, 300)]))
def test_witness_error_below_tolerance(a, extra, tol):
    b = a + extra
    if extra > 3:
        return  # keep the prime searches short
    w = approach_rational(a, b, tol)
    assert w.error < tol
    assert w.value > F(a, b)
    assert check_witness(w) == []
    primes = [x for t in w.terms for x in (t.q, t.p)]
    assert len(primes) == len(set(primes))
