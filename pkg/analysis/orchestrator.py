# analysis/orchestrator.py
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import config
from algebra.polynomial import INCONCLUSIVE, PROVED_REDUCIBLE, IntPolynomial, check_hypotheses, parse_polynomial
from analysis import selftest
from analysis.report import WeylRow
from analysis.stats import (
    CheckpointReport,
    EquidistReport,
    PairSequence,
    Rectangle,
    SequenceSpec,
    box_count,
    build_sequence,
    counting_ratios,
    diagonal_concentration,
    marginal_stats,
    normalization_bracket,
    prime_log_mass,
    split_prime_density,
    star_discrepancy_2d,
    weyl_average,
)
from congruence.root_cache import cache_file_for, read_root_cache, write_root_cache
from congruence.roots import PrimePowerRoots, RootTable, build_root_table
from sieve.factorize import MODULI_FILTERS, FactorTable, build_table
from utils.helpers import default_checkpoints, status


@dataclass
class RunConfig:
    """Everything a run needs, already parsed from the command line."""

    f: str
    g: Optional[str] = None
    x: int = 1000
    checkpoints: List[int] = field(default_factory=list)
    moduli: str = config.DEFAULT_MODULI
    frequencies: List[Tuple[int, int]] = field(default_factory=lambda: list(config.DEFAULT_FREQUENCIES))
    rectangles: List[Rectangle] = field(default_factory=list)
    grid: int = config.DEFAULT_GRID_RESOLUTION
    format: str = "csv"
    out: Optional[str] = None
    cache: Optional[str] = None
    threads: int = config.DEFAULT_THREADS
    eps: Fraction = Fraction(0)
    allow_zero: bool = False

    def __post_init__(self):
        if self.x < 1:
            raise ValueError("x must be at least 1")
        if not self.checkpoints:
            self.checkpoints = default_checkpoints(self.x)
        if any(b <= a for a, b in zip(self.checkpoints, self.checkpoints[1:])) or self.checkpoints[-1] != self.x:
            raise ValueError("checkpoints must be ascending and end at x")
        if self.moduli not in MODULI_FILTERS:
            raise ValueError(f"unknown moduli filter {self.moduli!r}")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        if self.eps < 0:
            raise ValueError("eps must be non-negative")


class EquidistributionExperiment:
    """Runs the root, Weyl and equidistribution experiments for one (f, g) pair."""

    def __init__(self, run: RunConfig):
        self.run = run
        self.f = parse_polynomial(run.f)
        self.g = parse_polynomial(run.g) if run.g else self.f
        self._table: Optional[FactorTable] = None
        self._caches: Dict[IntPolynomial, PrimePowerRoots] = {}

    def table(self) -> FactorTable:
        if self._table is None:
            status(f"[*] Sieving smallest prime factors up to {self.run.x}...")
            self._table = build_table(self.run.x)
        return self._table

    def prime_powers(self, poly: IntPolynomial) -> PrimePowerRoots:
        if poly not in self._caches:
            self._caches[poly] = PrimePowerRoots(poly)
        return self._caches[poly]

    def _known(self, poly: IntPolynomial) -> Optional[dict]:
        if not self.run.cache:
            return None
        path = cache_file_for(self.run.cache, poly)
        try:
            known = read_root_cache(path, poly)
        except OSError as e:
            raise OSError(f"cannot read root cache {path}: {e.strerror or e}") from e
        if known:
            status(f"[+] Loaded {len(known)} cached root sets from {path}")
        return known

    def _save(self, poly: IntPolynomial, known: Optional[dict], table: RootTable) -> None:
        if not self.run.cache:
            return
        path = cache_file_for(self.run.cache, poly)
        try:
            lines = write_root_cache(path, poly, known or {}, table)
        except OSError as e:
            raise OSError(f"cannot write root cache {path}: {e.strerror or e}") from e
        status(f"[+] Root cache {path}: {lines} moduli")

    def root_table(self, poly: IntPolynomial) -> RootTable:
        known = self._known(poly)
        status(f"[*] Computing roots of f={poly} for {self.run.moduli} moduli up to {self.run.x}...")
        table = build_root_table(poly, self.table(), self.run.moduli, self.prime_powers(poly), known)
        self._save(poly, known, table)
        return table

    def check_polynomials(self) -> Dict[str, dict]:
        meta = {}
        for name, poly in (("f", self.f), ("g", self.g)):
            evidence = check_hypotheses(poly)
            if evidence.verdict == INCONCLUSIVE:
                status(f"[-] Could not certify {name}={poly} irreducible ({evidence.reason}); proceeding")
            elif evidence.verdict == PROVED_REDUCIBLE:
                status(f"[-] {name}={poly} is reducible ({evidence.reason}); proceeding")
            meta[name] = {
                "coeffs": list(poly.coeffs),
                "degree": poly.degree,
                "discriminant": poly.discriminant,
                "irreducibility": evidence.verdict,
                "reason": evidence.reason,
            }
        return meta

    def sequence(self) -> PairSequence:
        spec = SequenceSpec(self.f, self.g, self.run.x, self.run.moduli)
        f_roots = self.root_table(self.f)
        g_roots = f_roots if self.g == self.f else self.root_table(self.g)
        seq = PairSequence(spec, f_roots, g_roots)
        status(f"[+] Sequence built: {seq.M} root pairs over {len(seq.moduli)} moduli")
        return seq

    def _frequencies(self) -> List[Tuple[int, int]]:
        freqs = list(dict.fromkeys(self.run.frequencies))
        if not freqs:
            raise ValueError("no frequencies given")
        if (0, 0) in freqs and not self.run.allow_zero:
            raise ValueError("frequency (0,0) is trivial; pass --allow-zero to include it")
        return freqs

    def roots(self) -> RootTable:
        return self.root_table(self.f)

    def weyl(self) -> List[WeylRow]:
        freqs = self._frequencies()
        self.check_polynomials()
        seq = self.sequence()
        rows = []
        for x in self.run.checkpoints:
            sub = seq.truncate(x)
            if sub.M == 0:
                raise ValueError(f"no root pairs below cutoff x={x}")
            status(f"[*] Weyl averages at x={x} (M={sub.M})...")
            for h1, h2 in freqs:
                rows.append(WeylRow(x, h1, h2, weyl_average(sub, h1, h2, self.run.threads), sub.M))
        return rows

    def equidist(self) -> EquidistReport:
        freqs = self._frequencies()
        report = EquidistReport(
            f=self.f,
            g=self.g,
            moduli=self.run.moduli,
            grid_resolution=self.run.grid,
            eps=self.run.eps,
            frequencies=freqs,
            rectangles=list(self.run.rectangles),
            polynomials=self.check_polynomials(),
        )
        seq = self.sequence()
        threads = self.run.threads

        caches = {"f_cache": self.prime_powers(self.f), "g_cache": self.prime_powers(self.g)}
        ratio_points = [x for x in self.run.checkpoints if x >= 3]
        ratios = {}
        if ratio_points:
            status("[*] Counting ratios...")
            values = counting_ratios(self.f, self.g, ratio_points, self.table(), **caches)
            ratios = dict(zip(ratio_points, values))

        for x in self.run.checkpoints:
            sub = seq.truncate(x)
            cp = CheckpointReport(x=x, M=sub.M, counting_ratio=ratios.get(x))
            cp.prime_log_mass = prime_log_mass(self.f, self.g, x, self.table(), **caches)
            if x >= 100:
                cp.densities = split_prime_density(self.f, self.g, x, self.table(), **caches)
            if sub.M == 0:
                status(f"[-] No root pairs below x={x}; skipping sequence statistics")
                report.checkpoints.append(cp)
                continue
            status(f"[*] Checkpoint x={x} (M={sub.M})...")
            cp.weyl = {(h1, h2): weyl_average(sub, h1, h2, threads) for h1, h2 in freqs}
            cp.boxes = [box_count(sub, rect) for rect in self.run.rectangles]
            cp.marginals = marginal_stats(sub)
            cp.discrepancy = star_discrepancy_2d(sub, self.run.grid, threads)
            cp.bracket = normalization_bracket(sub, sub.M)
            if self.f == self.g:
                cp.diagonal = diagonal_concentration(sub, self.run.eps, threads)
            report.checkpoints.append(cp)
        status(f"[+] Report complete: {len(report.checkpoints)} checkpoints")
        return report


def cmd_roots(run: RunConfig) -> RootTable:
    return EquidistributionExperiment(run).roots()


def cmd_weyl(run: RunConfig) -> List[WeylRow]:
    return EquidistributionExperiment(run).weyl()


def cmd_equidist(run: RunConfig) -> EquidistReport:
    return EquidistributionExperiment(run).equidist()


def cmd_selftest(root_fn: Optional[selftest.RootFn] = None) -> int:
    """Run every exact-identity suite; 0 when all pass, 1 otherwise."""
    status("[*] Running self-test suites...")
    results = selftest.run_selftest(root_fn)
    selftest.print_summary(results)
    failed = [r.name for r in results if not r.passed]
    if failed:
        status(f"[!] Self-test failed: {', '.join(failed)}")
        return 1
    status("[+] All self-test suites passed.")
    return 0
