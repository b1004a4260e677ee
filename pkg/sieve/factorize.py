# sieve/factorize.py
import logging
from dataclasses import dataclass
from math import isqrt
from typing import Iterator, List, Tuple

import numpy as np
from sympy import factorint

import config

logger = logging.getLogger(__name__)

MODULI_FILTERS = ("all", "prime", "squarefree")

Factorization = List[Tuple[int, int]]


@dataclass(frozen=True)
class FactorTable:
    """Smallest prime factor of every n <= limit (spf[1] = 1, spf[0] unused)."""

    limit: int
    spf: np.ndarray

    def __post_init__(self):
        self.spf.setflags(write=False)


def build_table(x: int) -> FactorTable:
    if x < 1:
        raise ValueError("limit must be at least 1")
    if x > config.FACTOR_TABLE_MAX_LIMIT:
        raise ValueError("limit too large")
    spf = np.zeros(x + 1, dtype=np.uint32)
    for p in range(2, isqrt(x) + 1):
        if spf[p]:
            continue
        multiples = spf[p * p :: p]
        multiples[multiples == 0] = p
    untouched = np.flatnonzero(spf == 0)
    spf[untouched] = untouched
    spf[0] = 0
    logger.debug("built smallest-prime-factor table up to %d", x)
    return FactorTable(limit=x, spf=spf)


def factor(t: FactorTable, n: int) -> Factorization:
    if not 1 <= n <= t.limit:
        raise ValueError(f"modulus {n} outside [1, {t.limit}]")
    pairs = []
    while n > 1:
        p = int(t.spf[n])
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        pairs.append((p, k))
    return pairs


def factor_modulus(n: int) -> Factorization:
    """Canonical factorization of a modulus that is not covered by a table."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    return sorted((int(p), int(k)) for p, k in factorint(n).items())


def primes_up_to(t: FactorTable) -> np.ndarray:
    n = np.arange(t.limit + 1)
    return n[(n >= 2) & (t.spf == n)]


def _squarefree_mask(t: FactorTable) -> np.ndarray:
    mask = np.ones(t.limit + 1, dtype=bool)
    mask[0] = False
    for p in primes_up_to(t):
        sq = int(p) * int(p)
        if sq > t.limit:
            break
        mask[sq::sq] = False
    return mask


def moduli(t: FactorTable, filter: str = "all") -> np.ndarray:
    """Ascending moduli in [1, limit] that pass ``filter``."""
    if filter == "all":
        return np.arange(1, t.limit + 1)
    if filter == "prime":
        return primes_up_to(t)
    if filter == "squarefree":
        return np.flatnonzero(_squarefree_mask(t))
    raise ValueError(f"unknown moduli filter {filter!r}; expected one of {MODULI_FILTERS}")


def modulus_stream(t: FactorTable, filter: str = "all") -> Iterator[Tuple[int, Factorization]]:
    for n in moduli(t, filter):
        n = int(n)
        yield n, factor(t, n)

