# analysis/report.py
"""CSV and JSON rendering of run results.

Every float passes through utils.helpers.format_number (CSV) or round_number
(JSON), so both formats carry the same 12-significant-digit values.
"""
import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

from analysis.stats import CheckpointReport, EquidistReport, Rectangle
from congruence.roots import RootTable
from utils.helpers import format_number, round_number

FORMATS = ("csv", "json")


@dataclass(frozen=True)
class WeylRow:
    x: int
    h1: int
    h2: int
    value: complex
    M: int


def rect_label(rect: Rectangle) -> str:
    return ":".join(str(v) for v in rect)


def _csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else (v if isinstance(v, str) else format_number(v)) for v in row])
    return buf.getvalue()


def _json(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _maybe(value: Optional[float]):
    return None if value is None else round_number(value)


# roots


def roots_to_csv(table: RootTable) -> str:
    rows = ([rs.modulus, rs.count, " ".join(str(mu) for mu in rs.roots)] for rs in table)
    return _csv(["n", "r", "roots"], rows)


def roots_to_json(table: RootTable, f) -> str:
    return _json(
        {
            "f": str(f),
            "roots": [{"n": rs.modulus, "r": rs.count, "roots": list(rs.roots)} for rs in table],
        }
    )


# weyl


def weyl_to_csv(rows: Sequence[WeylRow]) -> str:
    return _csv(
        ["x", "h1", "h2", "re", "im", "abs", "M"],
        ([r.x, r.h1, r.h2, r.value.real, r.value.imag, abs(r.value), r.M] for r in rows),
    )


def weyl_to_json(rows: Sequence[WeylRow], f, g) -> str:
    return _json(
        {
            "f": str(f),
            "g": str(g),
            "rows": [
                {
                    "x": r.x,
                    "h1": r.h1,
                    "h2": r.h2,
                    "re": round_number(r.value.real),
                    "im": round_number(r.value.imag),
                    "abs": round_number(abs(r.value)),
                    "M": r.M,
                }
                for r in rows
            ],
        }
    )


# equidist


def equidist_header(report: EquidistReport) -> List[str]:
    header = ["x", "M"]
    header += [f"abs_W_{h1}_{h2}" for h1, h2 in report.frequencies]
    for i in range(len(report.rectangles)):
        header += [f"box{i}_fraction", f"box{i}_deviation"]
    header += [
        "disc_lower",
        "disc_upper",
        "counting_ratio",
        "density_f",
        "density_g",
        "density_joint",
        "prime_log_mass",
        "marginal_abs_W_f",
        "marginal_abs_W_g",
        "marginal_share_f",
        "marginal_share_g",
        "diagonal",
        "bracket_N",
    ]
    return header


def _equidist_row(report: EquidistReport, cp: CheckpointReport) -> list:
    row = [cp.x, cp.M]
    row += [abs(cp.weyl[h]) if h in cp.weyl else None for h in report.frequencies]
    if cp.boxes:
        for box in cp.boxes:
            row += [box.fraction, box.deviation]
    else:
        row += [None, None] * len(report.rectangles)
    disc, dens, marg = cp.discrepancy, cp.densities, cp.marginals
    row += [
        disc.lower if disc else None,
        disc.upper if disc else None,
        cp.counting_ratio,
        dens.f if dens else None,
        dens.g if dens else None,
        dens.joint if dens else None,
        cp.prime_log_mass,
        abs(marg.weyl_f) if marg else None,
        abs(marg.weyl_g) if marg else None,
        marg.share_f if marg else None,
        marg.share_g if marg else None,
        cp.diagonal,
        cp.bracket.N if cp.bracket else None,
    ]
    return row


def equidist_to_csv(report: EquidistReport) -> str:
    return _csv(equidist_header(report), (_equidist_row(report, cp) for cp in report.checkpoints))


def _checkpoint_json(cp: CheckpointReport) -> dict:
    out = {
        "x": cp.x,
        "M": cp.M,
        "weyl": [
            {
                "h1": h1,
                "h2": h2,
                "re": round_number(w.real),
                "im": round_number(w.imag),
                "abs": round_number(abs(w)),
            }
            for (h1, h2), w in cp.weyl.items()
        ],
        "boxes": [
            {
                "rect": rect_label(box.rect),
                "inside": box.inside,
                "total": box.total,
                "fraction": round_number(box.fraction),
                "deviation": round_number(box.deviation),
            }
            for box in cp.boxes
        ],
        "discrepancy": None,
        "counting_ratio": _maybe(cp.counting_ratio),
        "densities": None,
        "prime_log_mass": _maybe(cp.prime_log_mass),
        "marginals": None,
        "diagonal": _maybe(cp.diagonal),
        "bracket": None,
    }
    if cp.discrepancy:
        out["discrepancy"] = {
            "lower": round_number(cp.discrepancy.lower),
            "upper": round_number(cp.discrepancy.upper),
            "resolution": cp.discrepancy.resolution,
        }
    if cp.densities:
        out["densities"] = {
            "f": round_number(cp.densities.f),
            "g": round_number(cp.densities.g),
            "joint": round_number(cp.densities.joint),
            "primes": cp.densities.primes,
        }
    if cp.marginals:
        m = cp.marginals
        out["marginals"] = {
            "h": m.h,
            "interval": f"{m.interval[0]}:{m.interval[1]}",
            "abs_W_f": round_number(abs(m.weyl_f)),
            "abs_W_g": round_number(abs(m.weyl_g)),
            "share_f": round_number(m.share_f),
            "share_g": round_number(m.share_g),
        }
    if cp.bracket:
        out["bracket"] = {
            "M": cp.bracket.M,
            "N": cp.bracket.N,
            "total": cp.bracket.total,
            "last": cp.bracket.last,
        }
    return out


def equidist_to_json(report: EquidistReport) -> str:
    return _json(
        {
            "f": str(report.f),
            "g": str(report.g),
            "D": report.D,
            "moduli": report.moduli,
            "grid_resolution": report.grid_resolution,
            "eps": str(report.eps),
            "polynomials": report.polynomials,
            "checkpoints": [_checkpoint_json(cp) for cp in report.checkpoints],
        }
    )


def emit(text: str, out: Optional[str] = None) -> None:
    """Write to ``out`` or, when no path is given, to stdout."""
    if out is None:
        print(text, end="")
        return
    path = Path(out)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise OSError(f"cannot write report to {path}: {e.strerror or e}") from e
