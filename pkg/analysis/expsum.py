# analysis/expsum.py
from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence, Tuple

import numpy as np

from algebra.polynomial import IntPolynomial
from congruence.roots import PrimePowerRoots, RootSet, RootTable, roots_mod_n
from sieve.factorize import factor_modulus


@dataclass(frozen=True)
class ExpSumValue:
    """S(h;n) or S(h1,h2;n) with the modulus and frequency it was taken at."""

    real: float
    imag: float
    modulus: int
    frequency: Tuple[int, ...]

    @property
    def value(self) -> complex:
        return complex(self.real, self.imag)

    def __abs__(self) -> float:
        return abs(self.value)


def _centered_residues(numerators: np.ndarray, h: int, n: np.ndarray) -> np.ndarray:
    """h*mu mod n, shifted into (-n/2, n/2], computed in integers."""
    r = (np.mod(h, n) * numerators) % n
    return np.where(2 * r > n, r - n, r)


def _phase_sum(roots: Sequence[int], h: int, n: int) -> complex:
    if not roots:
        return 0j
    if n < 2**31:
        mu = np.asarray(roots, dtype=np.int64)
        r = _centered_residues(mu, h % n, np.int64(n))
        return complex(np.exp(2j * np.pi * (r / n)).sum())
    # moduli past int64-safe products: reduce with Python ints
    res = [(h * mu) % n for mu in roots]
    frac = np.array([(r - n if 2 * r > n else r) / n for r in res], dtype=np.float64)
    return complex(np.exp(2j * np.pi * frac).sum())


def exp_sum(rs: RootSet, h: int) -> ExpSumValue:
    """S(h;n) = sum of e(h*mu/n) over the roots mu."""
    s = _phase_sum(rs.roots, h, rs.modulus)
    return ExpSumValue(s.real, s.imag, rs.modulus, (h,))


def joint_exp_sum(rs_f: RootSet, rs_g: RootSet, h1: int, h2: int) -> ExpSumValue:
    """S(h1,h2;n); the double sum factors into S_f(h1;n) * S_g(h2;n)."""
    if rs_f.modulus != rs_g.modulus:
        raise ValueError(f"modulus mismatch: {rs_f.modulus} != {rs_g.modulus}")
    s = _phase_sum(rs_f.roots, h1, rs_f.modulus) * _phase_sum(rs_g.roots, h2, rs_g.modulus)
    return ExpSumValue(s.real, s.imag, rs_f.modulus, (h1, h2))


def exp_sums_by_modulus(table: RootTable, h: int) -> np.ndarray:
    """S(h;n) for every row of a root table, as a complex array."""
    owners = table.owners()
    n = table.moduli[owners]
    if abs(h) >= 2**62:
        h = np.array([h % int(m) for m in table.moduli], dtype=np.int64)[owners]
    r = _centered_residues(table.roots, h, n)
    phases = np.exp(2j * np.pi * (r / n))
    size = len(table)
    real = np.bincount(owners, weights=phases.real, minlength=size)
    imag = np.bincount(owners, weights=phases.imag, minlength=size)
    return real + 1j * imag


def parseval_sum(rs: RootSet, h: int = 1) -> float:
    """sum_{a=1..n} |S(a*h;n)|^2."""
    n = rs.modulus
    if not rs.roots:
        return 0.0
    a = np.arange(1, n + 1, dtype=np.int64)
    mu = np.asarray(rs.roots, dtype=np.int64)
    ah = (a * (h % n)) % n
    r = (ah[:, None] * mu[None, :]) % n
    r = np.where(2 * r > n, r - n, r)
    sums = np.exp(2j * np.pi * (r / n)).sum(axis=1)
    return float(np.sum(sums.real**2 + sums.imag**2))


def verify_parseval(rs: RootSet) -> float:
    """|sum_a |S(a;n)|^2 - n*r(n)|; orthogonality makes the identity exact."""
    return abs(parseval_sum(rs, 1) - rs.modulus * rs.count)


def _root_set(f: IntPolynomial, n: int, cache: Optional[PrimePowerRoots]) -> RootSet:
    return roots_mod_n(f, n, factor_modulus(n), cache)


def verify_twisted_mult(
    f: IntPolynomial,
    n: int,
    n2: int,
    h: int,
    h2: int,
    cache: Optional[PrimePowerRoots] = None,
) -> Tuple[float, float]:
    """Residuals of the two twisted multiplicativity identities for coprime n, n2.

    First:  S(h;n) S(h2;n2) = S(h*n2 + h2*n; n*n2)
    Second: S(h;n*n2) = S(h*inv(n2) mod n; n) S(h*inv(n) mod n2; n2)
    """
    if gcd(n, n2) != 1:
        raise ValueError(f"moduli {n} and {n2} are not coprime")
    rs_n, rs_n2 = _root_set(f, n, cache), _root_set(f, n2, cache)
    rs_nn = _root_set(f, n * n2, cache)

    left = exp_sum(rs_n, h).value * exp_sum(rs_n2, h2).value
    right = exp_sum(rs_nn, h * n2 + h2 * n).value
    first = abs(left - right)

    inv_n2 = pow(n2, -1, n)
    inv_n = pow(n, -1, n2)
    whole = exp_sum(rs_nn, h).value
    split = exp_sum(rs_n, h * inv_n2).value * exp_sum(rs_n2, h * inv_n).value
    second = abs(whole - split)
    return first, second
