# tests/test_factorize.py
import numpy as np
import pytest
from sympy import isprime

import config
from sieve.factorize import (
    build_table,
    factor,
    factor_modulus,
    modulus_stream,
    moduli,
    primes_up_to,
)


@pytest.fixture(scope="module")
def table():
    return build_table(10**4)


def test_factor_examples(table):
    assert factor(table, 1) == []
    assert factor(table, 12) == [(2, 2), (3, 1)]
    assert factor(table, 9973) == [(9973, 1)]
    assert factor(table, 10**4) == [(2, 4), (5, 4)]


def test_factor_out_of_range(table):
    with pytest.raises(ValueError, match="outside"):
        factor(table, 10**4 + 1)
    with pytest.raises(ValueError):
        factor(table, 0)


def test_factorization_reconstructs_every_modulus(table):
    for n in range(1, table.limit + 1):
        product = 1
        for p, k in factor(table, n):
            assert isprime(p)
            product *= p**k
        assert product == n


def test_factors_ascending(table):
    for n in (360, 9240, 9999):
        primes = [p for p, _ in factor(table, n)]
        assert primes == sorted(primes)


def test_factor_modulus_agrees_with_table(table):
    for n in range(1, 2000):
        assert factor_modulus(n) == factor(table, n)


def test_build_table_limits(monkeypatch):
    with pytest.raises(ValueError, match="limit must be at least 1"):
        build_table(0)
    monkeypatch.setattr(config, "FACTOR_TABLE_MAX_LIMIT", 100)
    with pytest.raises(ValueError, match="limit too large"):
        build_table(101)


def test_smallest_table():
    t = build_table(1)
    assert factor(t, 1) == []
    assert list(moduli(t)) == [1]
    assert len(primes_up_to(t)) == 0


def test_prime_count(table):
    assert len(primes_up_to(table)) == 1229


def test_moduli_filters():
    t = build_table(30)
    assert moduli(t, "prime").tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    squarefree = moduli(t, "squarefree").tolist()
    assert squarefree[:8] == [1, 2, 3, 5, 6, 7, 10, 11]
    assert 4 not in squarefree and 18 not in squarefree and 30 in squarefree
    assert moduli(t, "all").tolist() == list(range(1, 31))
    with pytest.raises(ValueError, match="unknown moduli filter"):
        moduli(t, "odd")


def test_modulus_stream_pairs_n_with_factorization():
    t = build_table(12)
    stream = list(modulus_stream(t, "squarefree"))
    assert stream[0] == (1, [])
    assert (6, [(2, 1), (3, 1)]) in stream
    assert all(isinstance(n, int) for n, _ in stream)


def test_factor_modulus_beyond_table():
    assert factor_modulus(1) == []
    assert factor_modulus(2**61 - 1) == [(2**61 - 1, 1)]
    assert factor_modulus(2**40 * 3**5) == [(2, 40), (3, 5)]
    with pytest.raises(ValueError, match="cannot factor 0"):
        factor_modulus(0)


def test_table_is_read_only(table):
    with pytest.raises(ValueError):
        table.spf[5] = 0
    assert table.spf.dtype == np.uint32


@pytest.fixture(scope="module")
def desk_table():
    return build_table(10**5)


@pytest.mark.slow
def test_every_modulus_reconstructs_at_desk_scale(desk_table):
    for n, fac in modulus_stream(desk_table, "all"):
        product = 1
        for p, k in fac:
            product *= p**k
        assert product == n
        assert all(isprime(p) for p, _ in fac)


@pytest.mark.slow
def test_prime_stream_matches_primality_test(desk_table):
    expected = [n for n in range(1, desk_table.limit + 1) if isprime(n)]
    assert moduli(desk_table, "prime").tolist() == expected
    assert [n for n, _ in modulus_stream(desk_table, "prime")] == expected
