# utils/helpers.py
import sys
from fractions import Fraction
from typing import List, Tuple

import config
from analysis.stats import Rectangle, check_rectangle


def status(message: str) -> None:
    """Print a progress line to stderr so stdout stays clean for CSV/JSON."""
    if config.VERBOSE:
        print(message, file=sys.stderr)


def format_number(value) -> str:
    """Fixed 12-significant-digit rendering used by every report format."""
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    return f"{float(value):.{config.SIGNIFICANT_DIGITS}g}"


def round_number(value: float) -> float:
    """The float that format_number prints, so JSON and CSV agree."""
    return float(f"{float(value):.{config.SIGNIFICANT_DIGITS}g}")


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"invalid rational number {text!r}") from None


def _items(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def parse_frequencies(text: str) -> List[Tuple[int, int]]:
    """Parse "h1:h2,h1:h2"; duplicates are dropped, first occurrence wins."""
    seen = []
    for position, item in enumerate(_items(text), 1):
        parts = item.split(":")
        try:
            if len(parts) != 2:
                raise ValueError
            pair = (int(parts[0]), int(parts[1]))
        except ValueError:
            raise ValueError(f"invalid frequency {item!r} at position {position} in {text!r}") from None
        if pair not in seen:
            seen.append(pair)
    if not seen:
        raise ValueError("no frequencies given")
    return seen


def parse_rectangles(text: str) -> List[Rectangle]:
    """Parse "a:b:c:d,..." into exact rational corners (a, b) x (c, d)."""
    rects = []
    for position, item in enumerate(_items(text), 1):
        parts = item.split(":")
        if len(parts) != 4:
            raise ValueError(f"malformed rectangle {item!r} at position {position} in {text!r}")
        rects.append(check_rectangle([parse_fraction(v) for v in parts]))
    return rects


def default_checkpoints(x: int) -> List[int]:
    """Powers of ten up to x, with x itself last."""
    points = []
    p = 10
    while p < x:
        points.append(p)
        p *= 10
    points.append(x)
    return points


def parse_checkpoints(text: str, x: int) -> List[int]:
    points = []
    for position, item in enumerate(_items(text), 1):
        try:
            points.append(int(item))
        except ValueError:
            raise ValueError(f"invalid checkpoint {item!r} at position {position} in {text!r}") from None
    if not points:
        raise ValueError("no checkpoints given")
    if any(b <= a for a, b in zip(points, points[1:])):
        raise ValueError("checkpoints must be strictly ascending")
    if points[0] < 1:
        raise ValueError("checkpoints must be at least 1")
    if points[-1] > x:
        raise ValueError(f"checkpoint {points[-1]} exceeds x={x}")
    if points[-1] != x:
        points.append(x)
    return points
