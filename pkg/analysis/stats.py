# analysis/stats.py
"""Equidistribution statistics of the normalized root-pair sequence Z.

Z runs over the moduli n in ascending order and, inside one modulus, over the
pairs (mu/n, nu/n) with mu then nu ascending. Per-modulus quantities are
computed from the two root tables directly; pairs are only materialized where
a statistic cannot be factored through r(n) and s(n).
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np

import config
from algebra.polynomial import IntPolynomial, content
from analysis.expsum import exp_sums_by_modulus
from congruence.roots import PrimePowerRoots, RootTable, build_root_table, root_counts_up_to
from sieve.factorize import MODULI_FILTERS, FactorTable, build_table, primes_up_to

logger = logging.getLogger(__name__)

T = TypeVar("T")
Rational = Union[Fraction, int, float, str]
Rectangle = Tuple[Fraction, Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class SequenceSpec:
    f: IntPolynomial
    g: IntPolynomial
    limit: int
    moduli: str = "all"

    def __post_init__(self):
        for name, poly in (("f", self.f), ("g", self.g)):
            if poly.is_zero():
                raise ValueError("zero polynomial")
            if poly.degree < 2:
                raise ValueError(f"{name}: degree too small")
            if content(poly) != 1:
                raise ValueError(f"{name}: polynomial is not primitive")
        if self.limit < 1:
            raise ValueError("cutoff must be at least 1")
        if self.moduli not in MODULI_FILTERS:
            raise ValueError(f"unknown moduli filter {self.moduli!r}")

    @property
    def D(self) -> int:
        return self.f.degree * self.g.degree


@dataclass(frozen=True)
class PairSequence:
    """Root tables of f and g over the same moduli: the data behind Z up to a cutoff."""

    spec: SequenceSpec
    f_roots: RootTable
    g_roots: RootTable

    @property
    def moduli(self) -> np.ndarray:
        return self.f_roots.moduli

    @property
    def pair_counts(self) -> np.ndarray:
        return self.f_roots.counts * self.g_roots.counts

    @property
    def M(self) -> int:
        return int(self.pair_counts.sum())

    def truncate(self, x: int) -> "PairSequence":
        return PairSequence(
            spec=replace(self.spec, limit=x),
            f_roots=self.f_roots.truncate(x),
            g_roots=self.g_roots.truncate(x),
        )

    def slice(self, start: int, stop: int) -> "PairSequence":
        return PairSequence(self.spec, self.f_roots.slice(start, stop), self.g_roots.slice(start, stop))

    def blocks(self, size: Optional[int] = None) -> List[Tuple[int, int]]:
        size = size or config.BLOCK_SIZE
        rows = len(self.moduli)
        return [(lo, min(lo + size, rows)) for lo in range(0, rows, size)]


def build_sequence(
    spec: SequenceSpec,
    table: Optional[FactorTable] = None,
    f_cache: Optional[PrimePowerRoots] = None,
    g_cache: Optional[PrimePowerRoots] = None,
    f_known=None,
    g_known=None,
) -> PairSequence:
    if table is None or table.limit != spec.limit:
        table = build_table(spec.limit)
    f_cache = f_cache if f_cache is not None else PrimePowerRoots(spec.f)
    if g_cache is None:
        g_cache = f_cache if spec.g == spec.f else PrimePowerRoots(spec.g)
    f_roots = build_root_table(spec.f, table, spec.moduli, f_cache, f_known)
    if spec.g == spec.f and g_known is f_known:
        g_roots = f_roots
    else:
        g_roots = build_root_table(spec.g, table, spec.moduli, g_cache, g_known)
    return PairSequence(spec, f_roots, g_roots)


def _as_sequence(seq: Union[PairSequence, SequenceSpec]) -> PairSequence:
    return build_sequence(seq) if isinstance(seq, SequenceSpec) else seq


def _map_blocks(fn: Callable[[int, int], T], blocks: Sequence[Tuple[int, int]], threads: int) -> List[T]:
    """Apply fn to every block; the result list is always in block order."""
    if threads <= 1 or len(blocks) <= 1:
        return [fn(lo, hi) for lo, hi in blocks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda b: fn(*b), blocks))


def _require_pairs(seq: PairSequence) -> int:
    M = seq.M
    if M == 0:
        raise ValueError("no root pairs below cutoff")
    return M


def weyl_sum(seq: PairSequence, h1: int, h2: int, threads: int = 1) -> complex:
    """sum_{n <= x} S(h1,h2;n), reduced block by block in ascending order."""

    def block(lo: int, hi: int) -> complex:
        sf = exp_sums_by_modulus(seq.f_roots.slice(lo, hi), h1)
        sg = exp_sums_by_modulus(seq.g_roots.slice(lo, hi), h2)
        return complex(np.sum(sf * sg))

    total = 0j
    for part in _map_blocks(block, seq.blocks(), threads):
        total += part
    return total


def weyl_average(
    seq: Union[PairSequence, SequenceSpec], h1: int, h2: int, threads: int = 1
) -> complex:
    """(sum_{n<=x} S(h1,h2;n)) / (sum_{n<=x} r(n)s(n))."""
    seq = _as_sequence(seq)
    M = _require_pairs(seq)
    return weyl_sum(seq, h1, h2, threads) / M


def pair_arrays(seq: PairSequence) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Numerators a, b and modulus n of every pair of Z, in sequence order."""
    rf, rg = seq.f_roots.counts, seq.g_roots.counts
    pc = rf * rg
    total = int(pc.sum())
    rows = np.repeat(np.arange(len(pc)), pc)
    starts = np.zeros(len(pc), dtype=np.int64)
    np.cumsum(pc[:-1], out=starts[1:])
    local = np.arange(total, dtype=np.int64) - starts[rows]
    i, j = local // rg[rows], local % rg[rows]
    a = seq.f_roots.roots[seq.f_roots.offsets[rows] + i]
    b = seq.g_roots.roots[seq.g_roots.offsets[rows] + j]
    return a, b, seq.moduli[rows]


@dataclass(frozen=True)
class NormalizationBracket:
    M: int
    N: int
    total: int
    last: int

    @property
    def holds(self) -> bool:
        return self.M <= self.total <= self.M + self.last


def normalization_bracket(seq: Union[PairSequence, SequenceSpec], M: int) -> NormalizationBracket:
    """M <= sum_{n<=N} r(n)s(n) <= M + r(N)s(N), N the modulus of the M-th pair."""
    seq = _as_sequence(seq)
    if M < 1:
        raise ValueError("M must be at least 1")
    cumulative = np.cumsum(seq.pair_counts)
    if not len(cumulative) or cumulative[-1] < M:
        raise ValueError(f"sequence has fewer than {M} pairs")
    idx = int(np.searchsorted(cumulative, M, side="left"))
    bracket = NormalizationBracket(
        M=M, N=int(seq.moduli[idx]), total=int(cumulative[idx]), last=int(seq.pair_counts[idx])
    )
    if not bracket.holds:
        raise ValueError(f"normalization bracket violated: {bracket}")
    return bracket


@dataclass(frozen=True)
class PrefixAverage:
    """(1/M) sum_{i<=M} e(h1 Z_i^1 + h2 Z_i^2) with its comparison to the modulus sum."""

    value: complex
    bracket: NormalizationBracket
    modulus_sum: complex

    @property
    def within_bound(self) -> bool:
        # |sum over first M pairs| <= |sum_{n<=N} S(h1,h2;n)| + r(N)s(N)
        return abs(self.value) * self.bracket.M <= abs(self.modulus_sum) + self.bracket.last + 1e-9 * self.bracket.M


def weyl_average_prefix(seq: Union[PairSequence, SequenceSpec], h1: int, h2: int, M: int) -> PrefixAverage:
    """The pair-index normalization of the Weyl average, over the first M terms of Z."""
    seq = _as_sequence(seq)
    bracket = normalization_bracket(seq, M)
    head = seq.truncate(bracket.N)
    a, b, n = pair_arrays(head)
    a, b, n = a[:M], b[:M], n[:M]
    r = (np.mod(h1, n) * a % n + np.mod(h2, n) * b % n) % n
    r = np.where(2 * r > n, r - n, r)
    value = complex(np.exp(2j * np.pi * (r / n)).sum()) / M
    return PrefixAverage(value=value, bracket=bracket, modulus_sum=weyl_sum(head, h1, h2))


def as_fraction(value: Rational) -> Fraction:
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def check_rectangle(rect: Sequence[Rational]) -> Rectangle:
    if len(rect) != 4:
        raise ValueError("malformed rectangle: expected (alpha, beta, gamma, delta)")
    alpha, beta, gamma, delta = (as_fraction(v) for v in rect)
    if not (0 <= alpha < beta <= 1 and 0 <= gamma < delta <= 1):
        raise ValueError(f"malformed rectangle ({alpha}, {beta}) x ({gamma}, {delta})")
    return alpha, beta, gamma, delta


def _scaled_compare_arrays(num: np.ndarray, n: np.ndarray, bound: Fraction):
    """Return (num * bound.den, bound.num * n) without int64 overflow."""
    p, q = bound.numerator, bound.denominator
    limit = 2**62
    if len(n) == 0 or int(n.max()) * max(abs(p), q, 1) < limit:
        return num * q, n * p
    return num.astype(object) * q, n.astype(object) * p


def _open_interval_mask(num: np.ndarray, n: np.ndarray, lo: Fraction, hi: Fraction) -> np.ndarray:
    """lo < num/n < hi, decided on exact rationals."""
    left, right = _scaled_compare_arrays(num, n, lo)
    above = left > right
    left, right = _scaled_compare_arrays(num, n, hi)
    below = left < right
    return np.asarray(above & below, dtype=bool)


def _counts_in(table: RootTable, lo: Fraction, hi: Fraction) -> np.ndarray:
    mask = _open_interval_mask(table.roots, table.root_moduli(), lo, hi)
    return np.bincount(table.owners()[mask], minlength=len(table)).astype(np.int64)


@dataclass(frozen=True)
class BoxCount:
    rect: Rectangle
    inside: int
    total: int

    @property
    def fraction(self) -> float:
        return self.inside / self.total

    @property
    def area(self) -> Fraction:
        alpha, beta, gamma, delta = self.rect
        return (beta - alpha) * (delta - gamma)

    @property
    def deviation(self) -> float:
        return self.fraction - float(self.area)


def box_count(seq: Union[PairSequence, SequenceSpec], rect: Sequence[Rational]) -> BoxCount:
    """Share of pairs of Z in the open box (alpha, beta) x (gamma, delta)."""
    seq = _as_sequence(seq)
    alpha, beta, gamma, delta = rect = check_rectangle(rect)
    M = _require_pairs(seq)
    cf = _counts_in(seq.f_roots, alpha, beta)
    cg = _counts_in(seq.g_roots, gamma, delta)
    return BoxCount(rect=rect, inside=int(np.dot(cf, cg)), total=M)


def weyl_average_1d(roots: RootTable, h: int) -> complex:
    """Weyl average of the one-dimensional sequence mu/n of a single polynomial."""
    total = roots.total
    if total == 0:
        raise ValueError("no roots below cutoff")
    return complex(np.sum(exp_sums_by_modulus(roots, h))) / total


def box_count_1d(roots: RootTable, interval: Sequence[Rational]) -> float:
    lo, hi = (as_fraction(v) for v in interval)
    if not 0 <= lo < hi <= 1:
        raise ValueError(f"malformed interval ({lo}, {hi})")
    if roots.total == 0:
        raise ValueError("no roots below cutoff")
    return int(_counts_in(roots, lo, hi).sum()) / roots.total


@dataclass(frozen=True)
class MarginalStats:
    """Statistics of mu/n and nu/n taken one coordinate at a time."""

    h: int
    interval: Tuple[Fraction, Fraction]
    weyl_f: complex
    weyl_g: complex
    share_f: float
    share_g: float


def marginal_stats(seq: PairSequence, h: int = 1, interval: Sequence[Rational] = (0, "1/2")) -> MarginalStats:
    lo, hi = (as_fraction(v) for v in interval)
    return MarginalStats(
        h=h,
        interval=(lo, hi),
        weyl_f=weyl_average_1d(seq.f_roots, h),
        weyl_g=weyl_average_1d(seq.g_roots, h),
        share_f=box_count_1d(seq.f_roots, (lo, hi)),
        share_g=box_count_1d(seq.g_roots, (lo, hi)),
    )


@dataclass(frozen=True)
class DiscrepancyBracket:
    lower: float
    upper: float
    resolution: int


def _anchored_counts(f_roots: RootTable, g_roots: RootTable, resolution: int, threads: int) -> np.ndarray:
    """E[i, j] = #pairs with A < i/R and B < j/R, for 0 <= i, j <= R."""
    R = resolution

    def cumulative(table: RootTable) -> np.ndarray:
        # a root mu/n is below i/R exactly when i > floor(mu*R/n)
        start = table.roots * R // table.root_moduli() + 1
        hist = np.zeros((len(table), R + 1), dtype=np.float64)
        np.add.at(hist, (table.owners(), start), 1.0)
        return np.cumsum(hist, axis=1)

    def block(lo: int, hi: int) -> np.ndarray:
        F = cumulative(f_roots.slice(lo, hi))
        G = cumulative(g_roots.slice(lo, hi))
        return F.T @ G

    blocks = [(lo, min(lo + config.BLOCK_SIZE, len(f_roots))) for lo in range(0, len(f_roots), config.BLOCK_SIZE)]
    counts = np.zeros((R + 1, R + 1), dtype=np.float64)
    for part in _map_blocks(block, blocks, threads):
        counts += part
    return counts


def _discrepancy_bracket(f_roots: RootTable, g_roots: RootTable, resolution: int, threads: int) -> DiscrepancyBracket:
    if resolution < 2:
        raise ValueError("grid resolution must be at least 2")
    M = int(np.dot(f_roots.counts, g_roots.counts))
    if M == 0:
        raise ValueError("no root pairs below cutoff")
    empirical = _anchored_counts(f_roots, g_roots, resolution, threads) / M
    grid = np.arange(resolution + 1) / resolution
    area = np.outer(grid, grid)
    lower = float(np.max(np.abs(empirical - area)))
    # any anchored box lies between two neighbouring grid boxes
    over = empirical[1:, 1:] - area[:-1, :-1]
    under = area[1:, 1:] - empirical[:-1, :-1]
    upper = max(lower, float(np.max(over)), float(np.max(under)))
    return DiscrepancyBracket(lower=lower, upper=upper, resolution=resolution)


def star_discrepancy_2d(
    seq: Union[PairSequence, SequenceSpec], grid_resolution: int = None, threads: int = 1
) -> DiscrepancyBracket:
    """Bracket on sup |empirical([0,u) x [0,v)) - u*v| from a regular anchor grid.

    The lower end is the largest deviation seen at a grid anchor; the upper end
    bounds every anchored box by its neighbouring grid boxes, and never exceeds
    lower + 2/resolution.
    """
    seq = _as_sequence(seq)
    grid_resolution = grid_resolution or config.DEFAULT_GRID_RESOLUTION
    return _discrepancy_bracket(seq.f_roots, seq.g_roots, grid_resolution, threads)


def point_set_discrepancy(
    xs: Sequence[int], ys: Sequence[int], denominator: int, grid_resolution: int = None
) -> DiscrepancyBracket:
    """Same estimator for an explicit point set (x_k/den, y_k/den)."""
    grid_resolution = grid_resolution or config.DEFAULT_GRID_RESOLUTION
    size = len(xs)
    mods = np.full(size, denominator, dtype=np.int64)
    offsets = np.arange(size + 1, dtype=np.int64)
    ft = RootTable(moduli=mods, offsets=offsets, roots=np.asarray(xs, dtype=np.int64))
    gt = RootTable(moduli=mods, offsets=offsets, roots=np.asarray(ys, dtype=np.int64))
    return _discrepancy_bracket(ft, gt, grid_resolution, threads=1)


def _caches(f, g, f_cache, g_cache) -> Tuple[PrimePowerRoots, PrimePowerRoots]:
    if f_cache is None:
        f_cache = PrimePowerRoots(f)
    if g_cache is None:
        g_cache = f_cache if g == f else PrimePowerRoots(g)
    return f_cache, g_cache


def _ratio_from_counts(x: int, rf: np.ndarray, rg: np.ndarray, primes: np.ndarray) -> float:
    """Counting ratio from r, s indexed by n - 1 (moduli 1..limit)."""
    if x < 3:
        raise ValueError("counting ratio needs x >= 3")
    total = int(np.dot(rf[:x], rg[:x]))
    ps = primes[primes <= x]
    rs = rf[ps - 1] * rg[ps - 1]
    log_product = math.fsum(np.log1p(rs / ps).tolist())
    return x * math.exp(log_product) / (math.log(x) * total)


def counting_ratios(
    f: IntPolynomial,
    g: IntPolynomial,
    cutoffs: Sequence[int],
    table: Optional[FactorTable] = None,
    f_cache: Optional[PrimePowerRoots] = None,
    g_cache: Optional[PrimePowerRoots] = None,
) -> List[float]:
    """Counting ratio at each cutoff; the sum runs over all n <= x."""
    top = max(cutoffs)
    if table is None or table.limit < top:
        table = build_table(top)
    f_cache, g_cache = _caches(f, g, f_cache, g_cache)
    _, rf = root_counts_up_to(f, table, "all", f_cache)
    rg = rf if g == f else root_counts_up_to(g, table, "all", g_cache)[1]
    primes = primes_up_to(table)
    return [_ratio_from_counts(x, rf, rg, primes) for x in cutoffs]


def counting_ratio(spec: SequenceSpec, table: Optional[FactorTable] = None, **caches) -> float:
    """x * prod_{p<=x}(1 + r(p)s(p)/p) / (log x * sum_{n<=x} r(n)s(n))."""
    return counting_ratios(spec.f, spec.g, [spec.limit], table, **caches)[0]


@dataclass(frozen=True)
class SplitDensities:
    f: float
    g: float
    joint: float
    primes: int


def split_prime_density(
    f: IntPolynomial,
    g: IntPolynomial,
    x: int,
    table: Optional[FactorTable] = None,
    f_cache: Optional[PrimePowerRoots] = None,
    g_cache: Optional[PrimePowerRoots] = None,
) -> SplitDensities:
    """Share of primes p <= x with r(p) = deg f, with s(p) = deg g, and with both."""
    if x < 100:
        raise ValueError("split densities need x >= 100")
    if table is None or table.limit < x:
        table = build_table(x)
    f_cache, g_cache = _caches(f, g, f_cache, g_cache)
    primes = [p for p in primes_up_to(table).tolist() if p <= x]
    split_f = np.array([f_cache.count(p, 1) == f.degree for p in primes])
    split_g = np.array([g_cache.count(p, 1) == g.degree for p in primes])
    total = len(primes)
    return SplitDensities(
        f=int(split_f.sum()) / total,
        g=int(split_g.sum()) / total,
        joint=int((split_f & split_g).sum()) / total,
        primes=total,
    )


def prime_log_mass(
    f: IntPolynomial,
    g: IntPolynomial,
    y: int,
    table: Optional[FactorTable] = None,
    f_cache: Optional[PrimePowerRoots] = None,
    g_cache: Optional[PrimePowerRoots] = None,
) -> float:
    """(1/y) sum_{p<=y} r(p)s(p) log p."""
    if y < 1:
        raise ValueError("y must be at least 1")
    if table is None or table.limit < y:
        table = build_table(y)
    f_cache, g_cache = _caches(f, g, f_cache, g_cache)
    primes = [p for p in primes_up_to(table).tolist() if p <= y]
    terms = [f_cache.count(p, 1) * g_cache.count(p, 1) * math.log(p) for p in primes]
    return math.fsum(terms) / y


def diagonal_concentration(seq: Union[PairSequence, SequenceSpec], eps: Rational = 0, threads: int = 1) -> float:
    """Share of pairs within torus distance eps of the diagonals y = x and y = 1 - x."""
    seq = _as_sequence(seq)
    if seq.spec.f != seq.spec.g:
        raise ValueError("counterexample requires identical polynomials")
    eps = as_fraction(eps)
    if eps < 0:
        raise ValueError("eps must be non-negative")
    M = _require_pairs(seq)
    p, q = eps.numerator, eps.denominator

    def block(lo: int, hi: int) -> int:
        a, b, n = pair_arrays(seq.slice(lo, hi))
        if len(n) and int(n.max()) * 2 * max(p, q, 1) >= 2**62:
            a, b, n = a.astype(object), b.astype(object), n.astype(object)
        width = n * p
        dist = np.minimum.reduce([np.abs(a - b), np.abs(a + b - n), a + b, 2 * n - a - b])
        return int(np.count_nonzero(dist * q <= width))

    near = sum(_map_blocks(block, seq.blocks(), threads))
    return near / M


@dataclass
class CheckpointReport:
    x: int
    M: int
    weyl: Dict[Tuple[int, int], complex] = field(default_factory=dict)
    boxes: List[BoxCount] = field(default_factory=list)
    discrepancy: Optional[DiscrepancyBracket] = None
    counting_ratio: Optional[float] = None
    densities: Optional[SplitDensities] = None
    prime_log_mass: Optional[float] = None
    marginals: Optional[MarginalStats] = None
    diagonal: Optional[float] = None
    bracket: Optional[NormalizationBracket] = None


@dataclass
class EquidistReport:
    f: IntPolynomial
    g: IntPolynomial
    moduli: str
    grid_resolution: int
    eps: Fraction
    frequencies: List[Tuple[int, int]] = field(default_factory=list)
    rectangles: List[Rectangle] = field(default_factory=list)
    polynomials: Dict[str, dict] = field(default_factory=dict)
    checkpoints: List[CheckpointReport] = field(default_factory=list)

    @property
    def D(self) -> int:
        return self.f.degree * self.g.degree
