# congruence/root_cache.py
"""On-disk cache of root sets.

One file per polynomial, one line per modulus in the form ``n:r:mu1,mu2,...``
(decimal, roots ascending). Lines starting with ``#`` are comments; the first
one records the polynomial the file belongs to.
"""
import logging
from pathlib import Path
from typing import Dict, Tuple, Union

from algebra.polynomial import IntPolynomial
from congruence.roots import RootTable

logger = logging.getLogger(__name__)

RootMap = Dict[int, Tuple[int, ...]]


def cache_file_for(directory: Union[str, Path], f: IntPolynomial) -> Path:
    name = "_".join(str(c) for c in f.coeffs)
    return Path(directory) / f"roots_{name}.txt"


def parse_cache_line(line: str) -> Tuple[int, Tuple[int, ...]]:
    fields = line.split(":")
    if len(fields) != 3:
        raise ValueError(f"expected 'n:r:roots', got {line!r}")
    n, r = int(fields[0]), int(fields[1])
    roots = tuple(int(mu) for mu in fields[2].split(",")) if fields[2] else ()
    if len(roots) != r:
        raise ValueError(f"modulus {n}: count {r} does not match {len(roots)} roots")
    if any(not 0 <= mu < n for mu in roots) or list(roots) != sorted(set(roots)):
        raise ValueError(f"modulus {n}: roots must be distinct, ascending and in [0, n)")
    return n, roots


def format_cache_line(n: int, roots: Tuple[int, ...]) -> str:
    return f"{n}:{len(roots)}:{','.join(str(mu) for mu in roots)}"


def read_root_cache(path: Union[str, Path], f: IntPolynomial) -> RootMap:
    """Load a cache file; a missing file is an empty cache."""
    path = Path(path)
    if not path.exists():
        return {}
    known: RootMap = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if line.startswith("# f=") and line[4:] != str(f):
                    raise ValueError(f"{path}:{lineno}: cache belongs to f={line[4:]}, not f={f}")
                continue
            try:
                n, roots = parse_cache_line(line)
            except ValueError as e:
                raise ValueError(f"{path}:{lineno}: {e}") from None
            known[n] = roots
    logger.debug("read %d cached root sets from %s", len(known), path)
    return known


def write_root_cache(path: Union[str, Path], f: IntPolynomial, known: RootMap, table: RootTable) -> int:
    """Merge ``table`` into ``known`` and rewrite the file. Returns lines written."""
    path = Path(path)
    merged = dict(known)
    for rs in table:
        merged[rs.modulus] = rs.roots
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# f={f}\n")
        for n in sorted(merged):
            fh.write(format_cache_line(n, merged[n]) + "\n")
    return len(merged)
