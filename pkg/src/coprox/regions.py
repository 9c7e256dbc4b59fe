"""Exact set arithmetic on the real line.

A :class:`Region` is a finite union of intervals with rational endpoints
(``fractions.Fraction``), kept in a unique normal form: intervals sorted,
pairwise disjoint and never mergeable.  Because the normal form is unique,
region equality is plain structural equality.

Infinite endpoints are the symbolic markers :data:`NEG_INF` / :data:`POS_INF`;
they are only ever compared, never used in arithmetic.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Tuple, Union

NEG_INF = -math.inf
POS_INF = math.inf

Bound = Union[Fraction, float]
Number = Union[int, Fraction, str]


class RegionSyntaxError(ValueError):
    """Raised when a region literal cannot be parsed; carries the column."""

    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at column {pos + 1}: {text!r}")

    @property
    def column(self) -> int:
        return self.pos + 1


def _rat(x) -> Bound:
    if isinstance(x, float):
        if x in (NEG_INF, POS_INF):
            return x
        raise TypeError(f"floating point endpoint {x!r}; use Fraction or int")
    if isinstance(x, str):
        s = x.strip()
        if s in ("inf", "+inf"):
            return POS_INF
        if s == "-inf":
            return NEG_INF
        return Fraction(s)
    return Fraction(x)


def _is_finite(x: Bound) -> bool:
    return x not in (NEG_INF, POS_INF)


@dataclass(frozen=True)
class Interval:
    lo: Bound
    hi: Bound
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", _rat(self.lo))
        object.__setattr__(self, "hi", _rat(self.hi))
        if self.lo == POS_INF or self.hi == NEG_INF:
            raise ValueError(f"bad infinite endpoint in {self}")
        if not _is_finite(self.lo) and self.lo_closed:
            object.__setattr__(self, "lo_closed", False)
        if not _is_finite(self.hi) and self.hi_closed:
            object.__setattr__(self, "hi_closed", False)
        if self.lo > self.hi:
            raise ValueError(f"malformed interval: lower {self.lo} > upper {self.hi}")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise ValueError(f"empty interval at {self.lo}: a point needs both ends closed")

    @classmethod
    def point(cls, q: Number) -> "Interval":
        return cls(q, q, True, True)

    @classmethod
    def closed(cls, lo, hi) -> "Interval":
        return cls(lo, hi, True, True)

    @classmethod
    def open(cls, lo, hi) -> "Interval":
        return cls(lo, hi, False, False)

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def bounded(self) -> bool:
        return _is_finite(self.lo) and _is_finite(self.hi)

    def __contains__(self, x) -> bool:
        if x < self.lo or (x == self.lo and not self.lo_closed):
            return False
        if x > self.hi or (x == self.hi and not self.hi_closed):
            return False
        return True

    def closure(self) -> "Interval":
        return Interval(self.lo, self.hi, _is_finite(self.lo), _is_finite(self.hi))

    # Sort keys.  A start at q is "before" an open start at q; an end at q
    # closed is "after" an open end at q.
    def _start_key(self):
        return (self.lo, 0 if self.lo_closed else 1)

    def _end_key(self):
        return (self.hi, 1 if self.hi_closed else 0)

    def __str__(self) -> str:
        return "%s%s,%s%s" % (
            "[" if self.lo_closed else "(",
            format_bound(self.lo),
            format_bound(self.hi),
            "]" if self.hi_closed else ")",
        )


def format_bound(x: Bound) -> str:
    if x == NEG_INF:
        return "-inf"
    if x == POS_INF:
        return "inf"
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _touch(cur: Interval, nxt: Interval) -> bool:
    """True iff ``nxt`` (sorted after ``cur``) overlaps or abuts ``cur``."""
    if nxt.lo < cur.hi:
        return True
    if nxt.lo == cur.hi:
        return cur.hi_closed or nxt.lo_closed
    return False


def normalize(intervals: Iterable[Interval]) -> "Region":
    items = sorted(intervals, key=Interval._start_key)
    out: list[Interval] = []
    for iv in items:
        if out and _touch(out[-1], iv):
            cur = out[-1]
            if iv._end_key() > cur._end_key():
                out[-1] = Interval(cur.lo, iv.hi, cur.lo_closed, iv.hi_closed)
        else:
            out.append(iv)
    return Region._raw(tuple(out))


@dataclass(frozen=True)
class Region:
    """A normalized finite union of intervals.  Build with :func:`region`,
    :func:`normalize` or :func:`parse_region`; never from unsorted input."""

    intervals: Tuple[Interval, ...] = ()

    @classmethod
    def _raw(cls, intervals: Tuple[Interval, ...]) -> "Region":
        return cls(intervals)

    # -- predicates -----------------------------------------------------
    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __contains__(self, x) -> bool:
        x = _rat(x)
        return any(x in iv for iv in self.intervals)

    @property
    def bounded(self) -> bool:
        return all(iv.bounded for iv in self.intervals)

    @property
    def is_closed(self) -> bool:
        return self.closure() == self

    def issubset(self, other: "Region") -> bool:
        return self.difference(other).is_empty

    # -- boolean operations ---------------------------------------------
    def union(self, other: "Region") -> "Region":
        if not other.intervals:
            return self
        if not self.intervals:
            return other
        return normalize(self.intervals + other.intervals)

    def complement(self) -> "Region":
        out = []
        lo, lo_closed = NEG_INF, False
        for iv in self.intervals:
            hi, hi_closed = iv.lo, not iv.lo_closed
            if iv.lo != NEG_INF and (lo < hi or (lo == hi and lo_closed and hi_closed)):
                out.append(Interval(lo, hi, lo_closed, hi_closed))
            lo, lo_closed = iv.hi, not iv.hi_closed
        if lo != POS_INF:
            out.append(Interval(lo, POS_INF, lo_closed, False))
        return Region._raw(tuple(out))

    def intersection(self, other: "Region") -> "Region":
        if not self.intervals or not other.intervals:
            return EMPTY
        out = []
        i = j = 0
        a, b = self.intervals, other.intervals
        while i < len(a) and j < len(b):
            x, y = a[i], b[j]
            lo, lo_closed = max((x.lo, not x.lo_closed), (y.lo, not y.lo_closed))
            hi_key = min(x._end_key(), y._end_key())
            hi, hi_closed = hi_key[0], bool(hi_key[1])
            lo_closed = not lo_closed
            if lo < hi or (lo == hi and lo_closed and hi_closed):
                out.append(Interval(lo, hi, lo_closed, hi_closed))
            if x._end_key() <= y._end_key():
                i += 1
            else:
                j += 1
        return Region._raw(tuple(out))

    def difference(self, other: "Region") -> "Region":
        return self.intersection(other.complement())

    __or__ = union
    __and__ = intersection
    __sub__ = difference

    def __invert__(self) -> "Region":
        return self.complement()

    # -- topology and metric -------------------------------------------
    def closure(self) -> "Region":
        return normalize(iv.closure() for iv in self.intervals)

    def interior(self) -> "Region":
        return self.complement().closure().complement()

    def is_compact(self) -> bool:
        return self.bounded and self.is_closed

    def halo(self, radius: Number) -> "Region":
        """Open ``radius``-neighbourhood ``{x : d(x, self) < radius}``."""
        r = Fraction(radius)
        if r <= 0:
            raise ValueError("halo radius must be positive")
        return normalize(
            Interval(iv.lo - r if _is_finite(iv.lo) else NEG_INF,
                     iv.hi + r if _is_finite(iv.hi) else POS_INF, False, False)
            for iv in self.intervals
        )

    def distance(self, other: "Region") -> Bound:
        return distance(self, other)

    def sample_point(self) -> Fraction:
        """A deterministic member of a nonempty region."""
        if not self.intervals:
            raise ValueError("empty region has no points")
        iv = self.intervals[0]
        if iv.lo_closed:
            return iv.lo
        if iv.hi_closed and iv.lo == NEG_INF:
            return iv.hi
        if iv.lo == NEG_INF:
            return iv.hi - 1 if iv.hi != POS_INF else Fraction(0)
        if iv.hi == POS_INF:
            return iv.lo + 1
        return (iv.lo + iv.hi) / 2

    def __str__(self) -> str:
        return format_region(self)

    def __repr__(self) -> str:
        return f"Region({format_region(self)!r})"


EMPTY = Region()
REALS = Region((Interval(NEG_INF, POS_INF, False, False),))


def region(*intervals: Interval) -> Region:
    return normalize(intervals)


def point(q: Number) -> Region:
    return Region((Interval.point(q),))


def union_all(regions: Iterable[Region]) -> Region:
    return normalize(iv for r in regions for iv in r.intervals)


def distance(a: Region, b: Region) -> Bound:
    """``inf |x - y|`` over ``x in a, y in b``; ``POS_INF`` if either is empty."""
    if not a.intervals or not b.intervals:
        return POS_INF
    best: Optional[Fraction] = None
    for x in a.intervals:
        for y in b.intervals:
            if x.hi < y.lo:
                gap = y.lo - x.hi
            elif y.hi < x.lo:
                gap = x.lo - y.hi
            else:
                return Fraction(0)
            if best is None or gap < best:
                best = gap
    return best


# -- text form -------------------------------------------------------------

_BOUND_RE = re.compile(r"\s*(-?inf|[+-]?\d+(?:\s*/\s*\d+)?)\s*")


def parse_region(text: str) -> Region:
    """Parse ``[0,1) u (2,3]``; ``empty`` (or ``{}``) is the empty region."""
    s = text.strip()
    if s in ("empty", "{}", "∅"):
        return EMPTY
    intervals = []
    pos = 0
    n = len(text)

    def skip(p):
        while p < n and text[p].isspace():
            p += 1
        return p

    pos = skip(pos)
    while True:
        if pos >= n or text[pos] not in "[(":
            raise RegionSyntaxError("expected '[' or '('", text, pos)
        lo_closed = text[pos] == "["
        m = _BOUND_RE.match(text, pos + 1)
        if not m:
            raise RegionSyntaxError("expected a bound", text, pos + 1)
        lo = m.group(1)
        pos = m.end()
        if pos >= n or text[pos] != ",":
            raise RegionSyntaxError("expected ','", text, pos)
        m = _BOUND_RE.match(text, pos + 1)
        if not m:
            raise RegionSyntaxError("expected a bound", text, pos + 1)
        hi = m.group(1)
        pos = m.end()
        if pos >= n or text[pos] not in "])":
            raise RegionSyntaxError("expected ']' or ')'", text, pos)
        hi_closed = text[pos] == "]"
        start = pos
        try:
            lo_v = _parse_bound(lo)
            hi_v = _parse_bound(hi)
            if lo_v == POS_INF or hi_v == NEG_INF:
                raise ValueError("infinite bound on the wrong side")
            if (lo_v == NEG_INF and lo_closed) or (hi_v == POS_INF and hi_closed):
                raise ValueError("infinite endpoints must be open")
            intervals.append(Interval(lo_v, hi_v, lo_closed, hi_closed))
        except (ValueError, ZeroDivisionError) as exc:
            raise RegionSyntaxError(str(exc), text, start) from None
        pos = skip(pos + 1)
        if pos >= n:
            break
        if text[pos] not in "uU∪":
            raise RegionSyntaxError("expected 'u'", text, pos)
        pos = skip(pos + 1)
    return normalize(intervals)


def _parse_bound(tok: str) -> Bound:
    tok = tok.replace(" ", "")
    if tok == "inf":
        return POS_INF
    if tok == "-inf":
        return NEG_INF
    if "/" in tok:
        num, den = tok.split("/")
        if int(den) == 0:
            raise ValueError("zero denominator")
        return Fraction(int(num), int(den))
    return Fraction(int(tok))


def format_region(r: Region) -> str:
    if not r.intervals:
        return "empty"
    return " u ".join(str(iv) for iv in r.intervals)


def regions_from(values: Sequence[Union[str, Region]]) -> list[Region]:
    return [v if isinstance(v, Region) else parse_region(v) for v in values]


def random_region(rng, max_intervals: int = 3, span: int = 4, den: int = 2,
                  p_infinite: float = 0.15) -> Region:
    """Random region with endpoints on the grid ``k/den``, ``|k/den| <= span``.

    Small grids make touching and shared endpoints common, which is where
    the endpoint-flag logic is exercised.
    """
    grid = [Fraction(k, den) for k in range(-span * den, span * den + 1)]
    out = []
    for _ in range(rng.randint(0, max_intervals)):
        a, b = sorted(rng.sample(grid, 2)) if rng.random() < 0.85 else [rng.choice(grid)] * 2
        if a == b:
            out.append(Interval.point(a))
            continue
        lo = NEG_INF if rng.random() < p_infinite else a
        hi = POS_INF if rng.random() < p_infinite else b
        out.append(Interval(lo, hi, rng.random() < 0.5, rng.random() < 0.5))
    return normalize(out)
