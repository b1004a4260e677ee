# tests/test_stats.py
import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

import config
from algebra.polynomial import IntPolynomial
from analysis.stats import (
    SequenceSpec,
    box_count,
    box_count_1d,
    build_sequence,
    counting_ratio,
    counting_ratios,
    diagonal_concentration,
    normalization_bracket,
    pair_arrays,
    point_set_discrepancy,
    prime_log_mass,
    split_prime_density,
    star_discrepancy_2d,
    weyl_average,
    weyl_average_1d,
    weyl_average_prefix,
)
from congruence.roots import brute_force_roots, build_root_table
from sieve.factorize import build_table, primes_up_to

GOLDEN = (1 + math.sqrt(5)) / 2
FREQUENCIES = [(1, 0), (0, 1), (1, 1), (2, -3)]


@pytest.fixture
def seq5(x2p1):
    return build_sequence(SequenceSpec(x2p1, x2p1, 5))


def test_sequence_order(seq5):
    a, b, n = pair_arrays(seq5)
    assert a.tolist() == [0, 1, 2, 2, 3, 3]
    assert b.tolist() == [0, 1, 2, 3, 2, 3]
    assert n.tolist() == [1, 2, 5, 5, 5, 5]
    assert seq5.M == 6


def test_sequence_spec_validation(x2p1):
    with pytest.raises(ValueError, match="zero polynomial"):
        SequenceSpec(IntPolynomial(()), x2p1, 10)
    with pytest.raises(ValueError, match="degree too small"):
        SequenceSpec(x2p1, IntPolynomial((1, 1)), 10)
    with pytest.raises(ValueError, match="not primitive"):
        SequenceSpec(IntPolynomial((2, 0, 2)), x2p1, 10)
    with pytest.raises(ValueError, match="unknown moduli filter"):
        SequenceSpec(x2p1, x2p1, 10, "odd")


def test_weyl_average_by_hand(seq5):
    assert weyl_average(seq5, 1, 0) == pytest.approx((1 - 1 - 2 * GOLDEN) / 6)
    assert weyl_average(seq5, 0, 0) == 1


def test_weyl_trivial_frequency_is_one(x2p1, x2m2):
    seq = build_sequence(SequenceSpec(x2p1, x2m2, 500, "squarefree"))
    assert weyl_average(seq, 0, 0) == 1


def test_weyl_accepts_spec(x2p1):
    spec = SequenceSpec(x2p1, x2p1, 5)
    assert weyl_average(spec, 1, 0) == pytest.approx((1 - 1 - 2 * GOLDEN) / 6)


def test_weyl_matches_pairwise_sum(x2p1, x2m2):
    seq = build_sequence(SequenceSpec(x2p1, x2m2, 300))
    a, b, n = pair_arrays(seq)
    for h1, h2 in FREQUENCIES:
        direct = sum(cmath.exp(2j * math.pi * (h1 * int(u) + h2 * int(v)) / int(m)) for u, v, m in zip(a, b, n))
        assert weyl_average(seq, h1, h2) == pytest.approx(direct / len(n), abs=1e-12)


def test_no_pairs():
    f, g = IntPolynomial((1, 0, 1)), IntPolynomial((1, 1, 1))
    seq = build_sequence(SequenceSpec(f, g, 2, "prime"))
    with pytest.raises(ValueError, match="no root pairs below cutoff"):
        weyl_average(seq, 1, 0)


def test_weyl_parallel_equals_sequential(monkeypatch, x2p1, x2m2):
    monkeypatch.setattr(config, "BLOCK_SIZE", 64)
    seq = build_sequence(SequenceSpec(x2p1, x2m2, 3000))
    for h1, h2 in FREQUENCIES:
        serial = weyl_average(seq, h1, h2, threads=1)
        for threads in (2, 8):
            assert weyl_average(seq, h1, h2, threads=threads) == serial


def test_box_count_open_intervals(seq5):
    whole = box_count(seq5, (0, 1, 0, 1))
    assert (whole.inside, whole.total) == (5, 6)
    assert whole.fraction == pytest.approx(5 / 6)
    quarter = box_count(seq5, ("0", "1/2", "0", "1/2"))
    # (1/2, 1/2) sits on the boundary and is excluded
    assert quarter.inside == 1
    assert quarter.area == Fraction(1, 4)
    assert quarter.deviation == pytest.approx(1 / 6 - 1 / 4)


def test_box_partition(x2p1, x2m2):
    seq = build_sequence(SequenceSpec(x2p1, x2m2, 2000))
    half = Fraction(1, 2)
    parts = [(0, half, 0, half), (half, 1, 0, half), (0, half, half, 1), (half, 1, half, 1)]
    total = sum(box_count(seq, r).inside for r in parts)
    a, b, n = pair_arrays(seq)
    on_edges = sum(
        1 for u, v, m in zip(a.tolist(), b.tolist(), n.tolist())
        if u == 0 or v == 0 or 2 * u == m or 2 * v == m
    )
    assert total == seq.M - on_edges


@pytest.mark.parametrize("rect", [(0.5, 0.5, 0, 1), (0, 1.5, 0, 1), (0, 1, 0), (-0.1, 0.2, 0, 1)])
def test_malformed_rectangle(seq5, rect):
    with pytest.raises(ValueError, match="malformed rectangle"):
        box_count(seq5, rect)


def test_normalization_bracket(seq5):
    b = normalization_bracket(seq5, 3)
    assert (b.N, b.total, b.last) == (5, 6, 4)
    assert b.holds
    b = normalization_bracket(seq5, 1)
    assert (b.N, b.total, b.last) == (1, 1, 1)
    b = normalization_bracket(seq5, 6)
    assert (b.N, b.total) == (5, 6)
    with pytest.raises(ValueError, match="fewer than 7 pairs"):
        normalization_bracket(seq5, 7)


def test_prefix_average(seq5):
    prefix = weyl_average_prefix(seq5, 1, 0, 3)
    expected = (1 - 1 + cmath.exp(2j * math.pi * 0.4)) / 3
    assert prefix.value == pytest.approx(expected)
    assert prefix.bracket.N == 5
    assert prefix.within_bound
    full = weyl_average_prefix(seq5, 1, 1, 6)
    assert full.value == pytest.approx(weyl_average(seq5, 1, 1))


def test_one_dimensional_sequence(x2p1):
    roots = build_root_table(x2p1, build_table(5))
    assert weyl_average_1d(roots, 1) == pytest.approx(-GOLDEN / 4)
    assert box_count_1d(roots, (0, 1)) == pytest.approx(0.75)
    assert box_count_1d(roots, ("1/3", "2/3")) == pytest.approx(0.75)


def test_discrepancy_of_uniform_grid():
    R = 256
    xs = np.repeat(np.arange(R), R)
    ys = np.tile(np.arange(R), R)
    d = point_set_discrepancy(xs, ys, R, grid_resolution=R)
    assert d.lower == 0
    assert d.upper == pytest.approx((2 * R - 1) / R**2)


def test_discrepancy_bracket_is_tight(x2p1, x2m2):
    seq = build_sequence(SequenceSpec(x2p1, x2m2, 3000))
    for R in (16, 64):
        d = star_discrepancy_2d(seq, R)
        assert 0 <= d.lower <= d.upper <= d.lower + 2 / R + 1e-12
        assert d.resolution == R


def test_discrepancy_threads_agree(monkeypatch, x2p1):
    monkeypatch.setattr(config, "BLOCK_SIZE", 100)
    seq = build_sequence(SequenceSpec(x2p1, x2p1, 2000))
    assert star_discrepancy_2d(seq, 32, threads=1) == star_discrepancy_2d(seq, 32, threads=4)


def test_counting_ratio_by_hand(x2p1):
    assert counting_ratio(SequenceSpec(x2p1, x2p1, 10)) == pytest.approx(2.7 / math.log(10))


def test_counting_ratio_ignores_filter(x2p1):
    a = counting_ratio(SequenceSpec(x2p1, x2p1, 50, "prime"))
    b = counting_ratio(SequenceSpec(x2p1, x2p1, 50, "all"))
    assert a == b


def test_counting_ratios_match_single_calls(x2p1, x2m2):
    many = counting_ratios(x2p1, x2m2, [10, 100, 1000])
    for x, value in zip([10, 100, 1000], many):
        assert value == pytest.approx(counting_ratio(SequenceSpec(x2p1, x2m2, x)))


def test_counting_ratio_needs_x_at_least_3(x2p1):
    with pytest.raises(ValueError, match="x >= 3"):
        counting_ratio(SequenceSpec(x2p1, x2p1, 2))


def test_split_densities(x2p1, x2m2):
    d = split_prime_density(x2p1, x2p1, 10**4)
    assert d.primes == 1229
    assert d.f == pytest.approx(609 / 1229)
    assert d.joint == d.f
    mixed = split_prime_density(x2p1, x2m2, 10**4)
    assert mixed.joint == pytest.approx(0.25, abs=0.04)
    table = build_table(10**4)
    eight = sum(1 for p in primes_up_to(table).tolist() if p % 8 == 1)
    assert mixed.joint == pytest.approx(eight / 1229)


def test_split_density_needs_100_primes_range(x2p1):
    with pytest.raises(ValueError, match="x >= 100"):
        split_prime_density(x2p1, x2p1, 99)


def test_prime_log_mass(x2p1, x2m2):
    y = 200
    expected = sum(
        len(brute_force_roots(x2p1, p)) * len(brute_force_roots(x2m2, p)) * math.log(p)
        for p in primes_up_to(build_table(y)).tolist()
    ) / y
    assert prime_log_mass(x2p1, x2m2, y) == pytest.approx(expected)
    assert prime_log_mass(x2p1, x2m2, y) > 0


def test_diagonal_on_prime_moduli(x2p1):
    seq = build_sequence(SequenceSpec(x2p1, x2p1, 10**4, "prime"))
    assert diagonal_concentration(seq) == 1.0
    tiny = build_sequence(SequenceSpec(x2p1, x2p1, 2, "prime"))
    assert tiny.M == 1
    assert diagonal_concentration(tiny) == 1.0


def test_diagonal_breaks_on_all_moduli(x2p1):
    seq = build_sequence(SequenceSpec(x2p1, x2p1, 100))
    assert diagonal_concentration(seq, 0) < 1.0
    assert diagonal_concentration(seq, "1/2") == 1.0


def test_diagonal_requires_identical_polynomials(x2p1, x2m2):
    with pytest.raises(ValueError, match="counterexample requires identical polynomials"):
        diagonal_concentration(SequenceSpec(x2p1, x2m2, 10, "prime"))


@pytest.mark.parametrize("eps", ["-1/4", -1, Fraction(-1, 1000)])
def test_diagonal_rejects_negative_eps(seq5, eps):
    with pytest.raises(ValueError, match="eps must be non-negative"):
        diagonal_concentration(seq5, eps)


def test_truncate_matches_fresh_build(x2p1, x2m2):
    big = build_sequence(SequenceSpec(x2p1, x2m2, 1000))
    small = build_sequence(SequenceSpec(x2p1, x2m2, 300))
    cut = big.truncate(300)
    assert cut.M == small.M
    assert cut.spec.limit == 300
    assert weyl_average(cut, 2, -3) == weyl_average(small, 2, -3)


def test_single_point_discrepancy():
    d = point_set_discrepancy([0], [0], 1, grid_resolution=256)
    # every anchored box with u, v > 0 holds the whole mass
    assert d.lower == pytest.approx(1 - 1 / 256**2)
    assert d.upper == 1.0


def test_counting_ratio_matches_direct_sum(x2p1):
    x = 10**3
    r = [0] + [len(brute_force_roots(x2p1, n)) for n in range(1, x + 1)]
    primes = primes_up_to(build_table(x)).tolist()
    log_product = math.fsum(math.log1p(r[p] ** 2 / p) for p in primes)
    expected = x * math.exp(log_product) / (math.log(x) * sum(c * c for c in r))
    value = counting_ratio(SequenceSpec(x2p1, x2p1, x))
    assert 0 < value < math.inf
    assert value == pytest.approx(expected, rel=1e-12)


@pytest.mark.slow
def test_diagonal_on_all_moduli_at_desk_scale(x2p1):
    value = diagonal_concentration(SequenceSpec(x2p1, x2p1, 10**4))
    # recorded from an independent enumeration of all pairs
    assert value == pytest.approx(0.5707620528771384, rel=1e-12)
    assert value < 1.0


@pytest.mark.slow
def test_discrepancy_decreases_at_desk_scale(x2p1):
    seq = build_sequence(SequenceSpec(x2p1, x2p1, 10**5))
    early = star_discrepancy_2d(seq.truncate(10**4))
    late = star_discrepancy_2d(seq)
    assert early.lower == pytest.approx(0.034743, abs=1e-6)
    assert late.lower == pytest.approx(0.029299, abs=1e-6)
    assert late.lower < early.lower
