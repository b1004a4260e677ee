# analysis/selftest.py
"""Exact-identity suites run by ``--mode selftest``.

Each suite returns a SuiteResult; the run fails if any suite records a failure.
The root finder is injectable so a deliberately broken one can be checked to
trip the brute-force suite.
"""
import random
from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import Callable, Dict, List, Optional, Sequence

from sympy import primerange

import config
from algebra.polynomial import IntPolynomial
from analysis.expsum import exp_sum, verify_parseval, verify_twisted_mult
from analysis.stats import SequenceSpec, build_sequence, weyl_average, weyl_average_prefix
from congruence.roots import PrimePowerRoots, RootSet, brute_force_roots, roots_mod_n
from sieve.factorize import factor_modulus
from utils.helpers import status

RootFn = Callable[[IntPolynomial, int], Sequence[int]]

SELFTEST_POLYNOMIALS = (
    IntPolynomial((1, 0, 1)),
    IntPolynomial((-2, 0, 1)),
    IntPolynomial((-1, -1, 0, 1)),
)


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, message: str) -> None:
        self.failures.append(message)


class PipelineRoots:
    """The production root path (factor, lift, CRT) behind the RootFn signature."""

    def __init__(self):
        self._caches: Dict[IntPolynomial, PrimePowerRoots] = {}

    def cache(self, f: IntPolynomial) -> PrimePowerRoots:
        if f not in self._caches:
            self._caches[f] = PrimePowerRoots(f)
        return self._caches[f]

    def __call__(self, f: IntPolynomial, n: int) -> Sequence[int]:
        return roots_mod_n(f, n, factor_modulus(n), self.cache(f)).roots


def _coprime_pairs(rng: random.Random, count: int, bound: int) -> List[tuple]:
    pairs = []
    while len(pairs) < count:
        m = rng.randint(2, bound // 2)
        n = rng.randint(2, max(2, bound // m))
        if m * n <= bound and gcd(m, n) == 1:
            pairs.append((m, n))
    return pairs


def brute_force_suite(root_fn: RootFn, limit: int = 2000) -> SuiteResult:
    result = SuiteResult("brute-force roots")
    for f in SELFTEST_POLYNOMIALS:
        for n in range(1, limit + 1):
            result.checked += 1
            got = list(root_fn(f, n))
            want = brute_force_roots(f, n)
            if got != want:
                result.fail(f"f={f} n={n}: got {got}, expected {want}")
    return result


def multiplicativity_suite(root_fn: RootFn, pairs: int = 500, bound: int = 10**4, seed: int = None) -> SuiteResult:
    result = SuiteResult("multiplicativity of r")
    rng = random.Random(config.SELFTEST_SEED if seed is None else seed)
    for f in SELFTEST_POLYNOMIALS:
        for m, n in _coprime_pairs(rng, pairs, bound):
            result.checked += 1
            rm, rn, rmn = len(root_fn(f, m)), len(root_fn(f, n)), len(root_fn(f, m * n))
            if rmn != rm * rn:
                result.fail(f"f={f}: r({m * n})={rmn} but r({m})*r({n})={rm * rn}")
    return result


def hensel_suite(root_fn: RootFn, prime_bound: Optional[int] = None, power_bound: int = 10**5) -> SuiteResult:
    """r(p^k) = r(p) at primes not dividing lc(f)*disc(f), for every p^k <= power_bound (k >= 2)."""
    result = SuiteResult("Hensel stability")
    if prime_bound is None:
        prime_bound = isqrt(power_bound) + 1
    primes = [int(p) for p in primerange(2, prime_bound)]
    for f in SELFTEST_POLYNOMIALS:
        bad = f.leading_coefficient * f.discriminant
        for p in primes:
            if bad % p == 0:
                continue
            rp = len(root_fn(f, p))
            q = p * p
            while q <= power_bound:
                result.checked += 1
                rq = len(root_fn(f, q))
                if rq != rp:
                    result.fail(f"f={f}: r({q})={rq} but r({p})={rp}")
                q *= p
    return result


def parseval_suite(root_fn: RootFn, limit: int = 500) -> SuiteResult:
    result = SuiteResult("Parseval")
    for f in SELFTEST_POLYNOMIALS:
        for n in range(1, limit + 1):
            result.checked += 1
            rs = RootSet(modulus=n, roots=tuple(root_fn(f, n)))
            residual = verify_parseval(rs)
            if residual > config.PARSEVAL_TOLERANCE * n * max(rs.count, 1):
                result.fail(f"f={f} n={n}: residual {residual:.3e}")
    return result


def twisted_suite(pairs: int = 200, bound: int = 10**6, seed: int = None) -> SuiteResult:
    result = SuiteResult("twisted multiplicativity")
    rng = random.Random((config.SELFTEST_SEED if seed is None else seed) + 1)
    for f in SELFTEST_POLYNOMIALS:
        cache = PrimePowerRoots(f)
        for n, n2 in _coprime_pairs(rng, pairs, bound):
            h, h2 = rng.randint(-50, 50), rng.randint(-50, 50)
            result.checked += 1
            first, second = verify_twisted_mult(f, n, n2, h, h2, cache)
            r1 = len(roots_mod_n(f, n, factor_modulus(n), cache).roots)
            r2 = len(roots_mod_n(f, n2, factor_modulus(n2), cache).roots)
            tolerance = config.TWISTED_TOLERANCE * (r1 * r2 + 1)
            if first > tolerance or second > tolerance:
                result.fail(f"f={f} n={n} n'={n2} h={h} h'={h2}: residuals {first:.3e}, {second:.3e}")
    return result


def conjugate_suite(root_fn: RootFn, limit: int = 300, frequencies: Sequence[int] = (1, 2, 7)) -> SuiteResult:
    """S(-h;n) is the complex conjugate of S(h;n)."""
    result = SuiteResult("conjugate symmetry")
    for f in SELFTEST_POLYNOMIALS:
        for n in range(1, limit + 1):
            rs = RootSet(modulus=n, roots=tuple(root_fn(f, n)))
            for h in frequencies:
                result.checked += 1
                gap = abs(exp_sum(rs, -h).value - exp_sum(rs, h).value.conjugate())
                if gap > config.CONJUGATE_TOLERANCE * max(rs.count, 1):
                    result.fail(f"f={f} n={n} h={h}: gap {gap:.3e}")
    return result


def determinism_suite(x: int = 20000, thread_counts: Sequence[int] = (1, 2, 8)) -> SuiteResult:
    result = SuiteResult("determinism across thread counts")
    f, g = SELFTEST_POLYNOMIALS[0], SELFTEST_POLYNOMIALS[1]
    seq = build_sequence(SequenceSpec(f, g, x))
    for h1, h2 in config.DEFAULT_FREQUENCIES:
        values = [weyl_average(seq, h1, h2, threads=t) for t in thread_counts]
        result.checked += 1
        if any(v != values[0] for v in values[1:]):
            result.fail(f"({h1},{h2}): {values}")
    return result


def prefix_suite(x: int = 5000, cuts: Sequence[int] = (1, 7, 100, 1000)) -> SuiteResult:
    """Averages over the first M pairs stay within r(N)s(N) of the modulus sum; at M = all pairs they agree."""
    result = SuiteResult("prefix normalization")
    f, g = SELFTEST_POLYNOMIALS[0], SELFTEST_POLYNOMIALS[1]
    seq = build_sequence(SequenceSpec(f, g, x))
    for h1, h2 in config.DEFAULT_FREQUENCIES:
        for M in [m for m in cuts if m < seq.M] + [seq.M]:
            result.checked += 1
            prefix = weyl_average_prefix(seq, h1, h2, M)
            if not prefix.within_bound:
                result.fail(f"({h1},{h2}) M={M}: |prefix|={abs(prefix.value):.3e} outside the bracket")
            if M == seq.M and abs(prefix.value - weyl_average(seq, h1, h2)) > config.TWISTED_TOLERANCE:
                result.fail(f"({h1},{h2}): full prefix {prefix.value} differs from the Weyl average")
    return result


def run_selftest(root_fn: Optional[RootFn] = None) -> List[SuiteResult]:
    root_fn = root_fn or PipelineRoots()
    suites = [
        lambda: brute_force_suite(root_fn),
        lambda: multiplicativity_suite(root_fn),
        lambda: hensel_suite(root_fn),
        lambda: parseval_suite(root_fn),
        lambda: twisted_suite(),
        lambda: conjugate_suite(root_fn),
        lambda: determinism_suite(),
        lambda: prefix_suite(),
    ]
    results = []
    for suite in suites:
        res = suite()
        status(f"[{'+' if res.passed else '!'}] {res.name}: {res.checked} checks, {len(res.failures)} failures")
        results.append(res)
    return results


def print_summary(results: Sequence[SuiteResult]) -> None:
    for res in results:
        verdict = "PASS" if res.passed else "FAIL"
        print(f"{verdict} {res.name}: {res.checked - len(res.failures)}/{res.checked}")
        for message in res.failures[:5]:
            print(f"    {message}")
        if len(res.failures) > 5:
            print(f"    ... {len(res.failures) - 5} more")
