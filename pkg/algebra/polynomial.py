# algebra/polynomial.py
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd, isqrt
from typing import List, Optional, Sequence, Set, Tuple

from sympy import Poly, Symbol, nextprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_ddf_zassenhaus, gf_degree, gf_from_int_poly, gf_monic

import config

logger = logging.getLogger(__name__)

PROVED_IRREDUCIBLE = "proved-irreducible"
PROVED_REDUCIBLE = "proved-reducible"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial with ascending coefficients (coeffs[0] is the constant term)."""

    coeffs: Tuple[int, ...]

    def __post_init__(self):
        coeffs = [int(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading_coefficient(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: int) -> int:
        return evaluate(self, x)

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coeffs) or "0"

    @cached_property
    def discriminant(self) -> int:
        return discriminant(self)


@dataclass(frozen=True)
class IrreducibilityEvidence:
    verdict: str
    reason: str
    prime: Optional[int] = None
    patterns: dict = field(default_factory=dict)


def parse_polynomial(text: str) -> IntPolynomial:
    """Parse "1,0,1" (ascending coefficients) into x^2 + 1."""
    tokens = text.split(",")
    coeffs = []
    column = 1
    for position, token in enumerate(tokens, 1):
        stripped = token.strip()
        try:
            coeffs.append(int(stripped))
        except ValueError:
            raise ValueError(
                f"invalid coefficient {stripped!r} at position {position} "
                f"(column {column}) in {text!r}"
            ) from None
        column += len(token) + 1
    poly = IntPolynomial(tuple(coeffs))
    if poly.is_zero():
        raise ValueError("zero polynomial")
    return poly


def evaluate(p: IntPolynomial, x: int, modulus: Optional[int] = None) -> int:
    """Horner evaluation, reduced mod ``modulus`` at every step when given."""
    acc = 0
    if modulus is None:
        for c in reversed(p.coeffs):
            acc = acc * x + c
        return acc
    for c in reversed(p.coeffs):
        acc = (acc * x + c) % modulus
    return acc


def derivative(p: IntPolynomial) -> IntPolynomial:
    return IntPolynomial(tuple(i * c for i, c in enumerate(p.coeffs) if i > 0))


def content(p: IntPolynomial) -> int:
    if p.is_zero():
        raise ValueError("zero polynomial")
    return reduce(gcd, p.coeffs)


X = Symbol("x")


def to_sympy(p: IntPolynomial) -> Poly:
    return Poly(list(reversed(p.coeffs)) or [0], X, domain=ZZ)


def reduce_mod(p: IntPolynomial, q: int) -> list:
    """Coefficients of p mod q in galoistools order (highest degree first)."""
    return ZZ.map(gf_from_int_poly(list(reversed(p.coeffs)), q))


def resultant(a: IntPolynomial, b: IntPolynomial) -> int:
    """Res(a, b), exact over the integers."""
    if a.is_zero() or b.is_zero():
        return 0
    return int(to_sympy(a).resultant(to_sympy(b)))


def discriminant(p: IntPolynomial) -> int:
    """disc(p) = (-1)^(n(n-1)/2) Res(p, p') / lc(p)."""
    if p.degree < 2:
        raise ValueError("degree too small")
    return int(to_sympy(p).discriminant())


def degree_pattern(p: IntPolynomial, q: int) -> List[int]:
    """Sorted degrees of the irreducible factors of p mod q.

    q must not divide lc(p) * disc(p), so the reduction stays squarefree of full degree.
    """
    _, monic = gf_monic(reduce_mod(p, q), q, ZZ)
    return sorted(d for h, d in gf_ddf_zassenhaus(monic, q, ZZ) for _ in range(gf_degree(h) // d))


def _divisors(n: int) -> List[int]:
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def rational_roots(p: IntPolynomial) -> List[Fraction]:
    """All rational roots, by the rational root test on the primitive part."""
    coeffs = list(p.coeffs)
    roots = set()
    # strip factors of x
    while coeffs and coeffs[0] == 0:
        roots.add(Fraction(0))
        coeffs.pop(0)
    if len(coeffs) <= 1:
        return sorted(roots)
    a0, an = coeffs[0], coeffs[-1]
    if max(abs(a0), abs(an)) > config.RATIONAL_ROOT_COEFF_LIMIT:
        raise ValueError("coefficients too large for the rational root test")
    reduced = IntPolynomial(tuple(coeffs))
    for num in _divisors(a0):
        for den in _divisors(an):
            if gcd(num, den) != 1:
                continue
            for cand in (Fraction(num, den), Fraction(-num, den)):
                # den^deg * p(num/den) clears denominators
                value = sum(
                    c * cand.numerator**i * cand.denominator ** (reduced.degree - i)
                    for i, c in enumerate(reduced.coeffs)
                )
                if value == 0:
                    roots.add(cand)
    return sorted(roots)


def _subset_sums(pattern: Sequence[int]) -> Set[int]:
    sums = {0}
    for d in pattern:
        sums |= {s + d for s in sums}
    return sums


def _small_primes(count: int, avoid: int) -> List[int]:
    primes, q = [], 1
    while len(primes) < count:
        q = int(nextprime(q))
        if avoid % q:
            primes.append(q)
    return primes


def irreducibility_evidence(
    p: IntPolynomial, prime_budget: int = None
) -> IrreducibilityEvidence:
    """Certify (ir)reducibility over Q where a cheap certificate exists.

    Reducible: a rational root. Irreducible: degree <= 3 without rational roots,
    an irreducible reduction mod some prime, or factor-degree patterns mod
    several primes with no common proper subset sum. Anything else is
    inconclusive; x^4 + 1 is the classic case, it splits mod every prime.
    """
    if prime_budget is None:
        prime_budget = config.IRREDUCIBILITY_PRIME_BUDGET
    if p.degree < 2:
        raise ValueError("degree too small")
    if content(p) != 1:
        raise ValueError("polynomial is not primitive")

    roots = None
    try:
        roots = rational_roots(p)
    except ValueError as e:
        logger.debug("skipping rational root test: %s", e)
    if roots:
        return IrreducibilityEvidence(PROVED_REDUCIBLE, f"rational root {roots[0]}")

    if p.discriminant == 0:
        return IrreducibilityEvidence(PROVED_REDUCIBLE, "repeated factor (zero discriminant)")

    avoid = p.leading_coefficient * p.discriminant
    degree = p.degree
    admissible = set(range(1, degree))
    patterns = {}
    for q in _small_primes(prime_budget, avoid):
        pattern = degree_pattern(p, q)
        patterns[q] = pattern
        if pattern == [degree]:
            return IrreducibilityEvidence(
                PROVED_IRREDUCIBLE, f"irreducible mod {q}", prime=q, patterns=patterns
            )
        admissible &= _subset_sums(pattern)
        if not admissible:
            return IrreducibilityEvidence(
                PROVED_IRREDUCIBLE,
                "mod-p factor degree patterns are incompatible",
                patterns=patterns,
            )

    if roots is not None and degree <= 3:
        return IrreducibilityEvidence(
            PROVED_IRREDUCIBLE, "degree <= 3 with no rational root", patterns=patterns
        )
    return IrreducibilityEvidence(
        INCONCLUSIVE, f"no certificate within {prime_budget} primes", patterns=patterns
    )


def check_hypotheses(p: IntPolynomial) -> IrreducibilityEvidence:
    """Validate the standing assumptions: nonzero, primitive, degree > 1."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p.degree < 2:
        raise ValueError("degree too small")
    if content(p) != 1:
        raise ValueError("polynomial is not primitive")
    return irreducibility_evidence(p)
