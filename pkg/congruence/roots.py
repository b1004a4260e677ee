# congruence/roots.py
import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_degree, gf_edf_zassenhaus, gf_gcd, gf_monic, gf_pow_mod, gf_sub

import config
from algebra.polynomial import IntPolynomial, derivative, evaluate, reduce_mod
from sieve.factorize import Factorization, FactorTable, modulus_stream, moduli, primes_up_to

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RootSet:
    """Sorted roots of f mod n, representatives taken from [0, n)."""

    modulus: int
    roots: Tuple[int, ...]

    def __post_init__(self):
        roots = self.roots
        if any(b <= a for a, b in zip(roots, roots[1:])):
            raise ValueError("roots must be strictly increasing")
        if roots and (roots[0] < 0 or roots[-1] >= self.modulus):
            raise ValueError(f"roots must lie in [0, {self.modulus})")

    @property
    def count(self) -> int:
        return len(self.roots)


@dataclass(frozen=True)
class NormalizedRoots:
    """A_i^n = a_i^n / n, kept as integer numerators over the common denominator n."""

    modulus: int
    numerators: Tuple[int, ...]

    def as_fractions(self) -> List[Fraction]:
        return [Fraction(a, self.modulus) for a in self.numerators]

    def as_floats(self) -> np.ndarray:
        return np.array(self.numerators, dtype=np.float64) / self.modulus


def normalized_roots(rs: RootSet) -> NormalizedRoots:
    return NormalizedRoots(modulus=rs.modulus, numerators=rs.roots)


def _residue_roots(f: IntPolynomial, m: int) -> List[int]:
    """Every residue in [0, m) where f vanishes mod m, by vectorized Horner."""
    xs = np.arange(m, dtype=np.int64)
    acc = np.zeros(m, dtype=np.int64)
    for c in reversed(f.coeffs):
        acc = (acc * xs + (c % m)) % m
    return np.flatnonzero(acc == 0).tolist()


def brute_force_roots(f: IntPolynomial, n: int) -> List[int]:
    """Exhaustive search over [0, n); the oracle every faster path is checked against."""
    if n < 1:
        raise ValueError(f"modulus must be positive, got {n}")
    if n >= 2**31:
        return [a for a in range(n) if evaluate(f, a, n) == 0]
    return _residue_roots(f, n)


def _split_roots(fp: list, p: int) -> List[int]:
    """Distinct roots of fp over GF(p): gcd with x^p - x, then equal-degree splitting."""
    _, fp = gf_monic(fp, p, ZZ)
    x = [ZZ.one, ZZ.zero]
    linear = gf_gcd(fp, gf_sub(gf_pow_mod(x, p, fp, p, ZZ), x, p, ZZ), p, ZZ)
    if gf_degree(linear) <= 0:
        return []
    return sorted(int(-h[-1] % p) for h in gf_edf_zassenhaus(linear, 1, p, ZZ))


def roots_mod_p(f: IntPolynomial, p: int) -> List[int]:
    fp = reduce_mod(f, p)
    if not fp:
        raise ValueError("polynomial vanishes mod p")
    if p <= config.BRUTE_FORCE_ROOT_LIMIT:
        return _residue_roots(f, p)
    return _split_roots(fp, p)


def _lift_once(
    f: IntPolynomial, df: IntPolynomial, p: int, roots: Sequence[int], prev_modulus: int
) -> List[int]:
    """Roots mod p*prev_modulus lying over ``roots`` mod prev_modulus."""
    modulus = prev_modulus * p
    lifted = []
    for mu in roots:
        if evaluate(df, mu, p):
            # Newton step; the lift is unique when f'(mu) is a unit
            inv = pow(evaluate(df, mu, modulus), -1, modulus)
            lifted.append((mu - evaluate(f, mu, modulus) * inv) % modulus)
        else:
            lifted.extend(
                c for c in range(mu, modulus, prev_modulus) if evaluate(f, c, modulus) == 0
            )
    return sorted(lifted)


def lift_roots(f: IntPolynomial, p: int, k: int) -> List[int]:
    if k < 1:
        raise ValueError("exponent must be at least 1")
    if p**k > config.PRIME_POWER_MAX:
        raise ValueError("prime power too large")
    roots = roots_mod_p(f, p)
    df = derivative(f)
    modulus = p
    for _ in range(2, k + 1):
        if not roots:
            break
        roots = _lift_once(f, df, p, roots, modulus)
        modulus *= p
    return roots


class PrimePowerRoots:
    """Roots of f mod p^k, computed once per (p, k) and kept for the whole run.

    Reads are lock-free; inserts are serialized so the cache can be shared by
    worker threads.
    """

    def __init__(self, f: IntPolynomial):
        self.f = f
        self._df = derivative(f)
        self._roots: Dict[Tuple[int, int], Tuple[int, ...]] = {}
        self._lock = threading.RLock()

    def __len__(self) -> int:
        return len(self._roots)

    def get(self, p: int, k: int) -> Tuple[int, ...]:
        cached = self._roots.get((p, k))
        if cached is not None:
            return cached
        with self._lock:
            cached = self._roots.get((p, k))
            if cached is not None:
                return cached
            if k == 1:
                roots = tuple(roots_mod_p(self.f, p))
            else:
                if p**k > config.PRIME_POWER_MAX:
                    raise ValueError("prime power too large")
                below = self.get(p, k - 1)
                roots = tuple(_lift_once(self.f, self._df, p, below, p ** (k - 1)))
            self._roots[(p, k)] = roots
            return roots

    def count(self, p: int, k: int) -> int:
        return len(self.get(p, k))


def crt_combine(roots_a: Sequence[int], m: int, roots_b: Sequence[int], q: int) -> List[int]:
    """All x mod m*q with x = u mod m and x = v mod q, for coprime m, q."""
    inv = pow(m, -1, q)
    return sorted(u + m * ((v - u) * inv % q) for u in roots_a for v in roots_b)


def roots_mod_n(
    f: IntPolynomial,
    n: int,
    fac: Factorization,
    cache: Optional[PrimePowerRoots] = None,
) -> RootSet:
    product = 1
    for p, k in fac:
        product *= p**k
    if product != n:
        raise ValueError(f"factorization {fac} does not match modulus {n}")
    if n == 1:
        return RootSet(modulus=1, roots=(0,))
    roots: List[int] = [0]
    m = 1
    for p, k in fac:
        q = p**k
        local = cache.get(p, k) if cache is not None else lift_roots(f, p, k)
        if not local:
            return RootSet(modulus=n, roots=())
        roots = crt_combine(roots, m, local, q)
        m *= q
    return RootSet(modulus=n, roots=tuple(roots))


def root_counts_up_to(
    f: IntPolynomial,
    t: FactorTable,
    filter: str = "all",
    cache: Optional[PrimePowerRoots] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """(moduli, r(n)) for the filtered moduli up to t.limit.

    r is assembled multiplicatively from the cached r(p^k), so no root lists
    for composite n are ever built.
    """
    cache = cache if cache is not None else PrimePowerRoots(f)
    x = t.limit
    counts = np.ones(x + 1, dtype=np.int64)
    counts[0] = 0
    for p in primes_up_to(t).tolist():
        q, k = p, 1
        while q <= x:
            r = cache.count(p, k)
            if r != 1:
                multiples = np.arange(q, x + 1, q)
                exact = multiples[(multiples // q) % p != 0]
                counts[exact] *= r
            q *= p
            k += 1
    selected = moduli(t, filter)
    return selected, counts[selected]


@dataclass(frozen=True)
class RootTable:
    """Root sets for a run of moduli, stored flat (CSR style).

    Roots of the i-th modulus are roots[offsets[i]:offsets[i + 1]].
    """

    moduli: np.ndarray
    offsets: np.ndarray
    roots: np.ndarray

    def __len__(self) -> int:
        return len(self.moduli)

    @property
    def counts(self) -> np.ndarray:
        return np.diff(self.offsets)

    @property
    def total(self) -> int:
        return int(self.offsets[-1])

    def owners(self) -> np.ndarray:
        """Row index of every stored root."""
        return np.repeat(np.arange(len(self.moduli)), self.counts)

    def root_moduli(self) -> np.ndarray:
        """Modulus of every stored root."""
        return np.repeat(self.moduli, self.counts)

    def root_set(self, i: int) -> RootSet:
        start, stop = self.offsets[i], self.offsets[i + 1]
        return RootSet(modulus=int(self.moduli[i]), roots=tuple(self.roots[start:stop].tolist()))

    def __iter__(self) -> Iterator[RootSet]:
        for i in range(len(self.moduli)):
            yield self.root_set(i)

    def slice(self, start: int, stop: int) -> "RootTable":
        lo, hi = self.offsets[start], self.offsets[stop]
        return RootTable(
            moduli=self.moduli[start:stop],
            offsets=self.offsets[start : stop + 1] - lo,
            roots=self.roots[lo:hi],
        )

    def truncate(self, x: int) -> "RootTable":
        """Prefix of the table with moduli <= x."""
        return self.slice(0, int(np.searchsorted(self.moduli, x, side="right")))

    @classmethod
    def from_root_sets(cls, root_sets: Sequence[RootSet]) -> "RootTable":
        counts = np.fromiter((rs.count for rs in root_sets), dtype=np.int64, count=len(root_sets))
        offsets = np.zeros(len(root_sets) + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])
        flat = np.fromiter(
            (mu for rs in root_sets for mu in rs.roots), dtype=np.int64, count=int(offsets[-1])
        )
        mods = np.array([rs.modulus for rs in root_sets], dtype=np.int64)
        return cls(moduli=mods, offsets=offsets, roots=flat)


def build_root_table(
    f: IntPolynomial,
    t: FactorTable,
    filter: str = "all",
    cache: Optional[PrimePowerRoots] = None,
    known: Optional[Mapping[int, Tuple[int, ...]]] = None,
) -> RootTable:
    """Root sets for every filtered modulus up to t.limit.

    ``known`` maps moduli to roots read back from an on-disk cache; those moduli
    are not recomputed.
    """
    cache = cache if cache is not None else PrimePowerRoots(f)
    root_sets = []
    reused = 0
    for n, fac in modulus_stream(t, filter):
        if known is not None and n in known:
            root_sets.append(RootSet(modulus=n, roots=tuple(known[n])))
            reused += 1
        else:
            root_sets.append(roots_mod_n(f, n, fac, cache))
    logger.debug(
        "root table for %s: %d moduli, %d from disk cache, %d prime powers cached",
        f, len(root_sets), reused, len(cache),
    )
    return RootTable.from_root_sets(root_sets)
