"""Symmetric inverse semigroup elements, steps and walk connectivity.

Elements of S^k_1 are written ``x[a,b]`` and compose as
``x[a,b] * x[c,d] = delta(b,c) x[a,d]``.  The colored algebra S^3_2 is
realized through two sets ``e`` (color 1) and ``z`` (color 2) with the
multiplication ``e e = e``, ``e z = z e = z`` and ``z z = e``.  The zero
of the semigroup is never materialized; products that vanish return
``None``.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Optional, Sequence

__all__ = [
    "SisElement",
    "StepKind",
    "Walk",
    "Connectivity",
    "ConnectivityKind",
    "compose",
    "compose_pairs",
    "classify_step",
    "ez_realization",
    "connectivity",
    "parse_element",
    "parse_walk",
    "alphabet",
    "PAIR_ROWS",
    "PAIR_COLS",
]


@total_ordering
@dataclass(frozen=True)
class SisElement:
    """One generator ``x^s_{a,b}``.

    ``color`` is ``None`` for uncolored algebras.  Color ``0`` is the
    colorless placeholder used for unmatched steps of tilde walks.
    """

    domain: int
    range: int
    color: Optional[int] = None
    k: int = 3

    def __post_init__(self):
        if not (1 <= self.domain <= self.k and 1 <= self.range <= self.k):
            raise ValueError(f"indices out of range for k={self.k}: {self.domain},{self.range}")
        if self.color is not None and self.color not in (0, 1, 2):
            raise ValueError(f"bad color {self.color}")

    def _key(self):
        return (self.k, self.domain, self.range, self.color or 0)

    def __lt__(self, other):
        if not isinstance(other, SisElement):
            return NotImplemented
        return self._key() < other._key()

    @property
    def step(self) -> "StepKind":
        return classify_step(self)

    def __str__(self):
        if self.color is None:
            return f"x[{self.domain},{self.range}]"
        if self.color == 0:
            return f"xi[{self.domain},{self.range}]"
        return f"x^{self.color}[{self.domain},{self.range}]"

    __repr__ = __str__


class StepKind(enum.Enum):
    UP = 1
    DOWN = -1
    FLAT = 0

    @property
    def delta(self) -> int:
        return self.value


def classify_step(e: SisElement) -> StepKind:
    if e.domain < e.range:
        return StepKind.UP
    if e.domain > e.range:
        return StepKind.DOWN
    return StepKind.FLAT


def _mix_color(s: Optional[int], t: Optional[int]) -> Optional[int]:
    if (s is None) != (t is None):
        raise ValueError("cannot compose colored with uncolored elements")
    if s is None:
        return None
    if s == 0 or t == 0:
        raise ValueError("placeholder steps do not compose")
    # e = 1, z = 2; z z = e
    return 1 if s == t else 2


def compose(e1: SisElement, e2: SisElement) -> Optional[SisElement]:
    """Product ``e1 * e2``; ``None`` stands for the semigroup zero."""
    if e1.k != e2.k:
        raise ValueError("elements come from different alphabets")
    color = _mix_color(e1.color, e2.color)
    if e1.range != e2.domain:
        return None
    return SisElement(e1.domain, e2.range, color, e1.k)


def alphabet(k: int = 3, colored: bool = False) -> list[SisElement]:
    colors = (1, 2) if colored else (None,)
    return sorted(SisElement(a, b, s, k) for a in range(1, k + 1)
                  for b in range(1, k + 1) for s in colors)


# pair notation x_{ab,cd} for S^3_2: row label ab fixes the domain,
# the ordered column pair cd fixes range and color
PAIR_ROWS = {(1, 2): 1, (2, 3): 2, (3, 1): 3}
PAIR_COLS = {(1, 2): (1, 1), (2, 3): (2, 1), (3, 1): (3, 1),
             (2, 1): (1, 2), (3, 2): (2, 2), (1, 3): (3, 2)}


def ez_realization(ab: tuple[int, int], cd: tuple[int, int]) -> SisElement:
    """Map the pair-notation element ``x_{ab,cd}`` to ``x^s_{a,b}``.

    >>> ez_realization((1, 2), (2, 3))
    x^1[1,2]
    >>> ez_realization((2, 3), (1, 3))
    x^2[2,3]
    """
    ab, cd = tuple(ab), tuple(cd)
    if ab not in PAIR_ROWS or cd not in PAIR_COLS:
        raise ValueError(f"invalid pair indices {ab},{cd}")
    b, s = PAIR_COLS[cd]
    return SisElement(PAIR_ROWS[ab], b, s, 3)


def compose_pairs(p, q):
    """Pair-notation product, returned as a list of ``(ab, cd)`` terms.

    ``x_{ab,cd} x_{ef,gh} = d(c,e) d(d,f) x_{ab,gh} + d(c,f) d(d,e) x_{ab,hg}``
    """
    (ab, (c, d)), (ef, (g, h)) = p, q
    e, f = ef
    out = []
    if c == e and d == f:
        out.append((ab, (g, h)))
    if c == f and d == e:
        out.append((ab, (h, g)))
    return out


class ConnectivityKind(enum.Enum):
    CONNECTED = "connected"
    PARTIAL = "partially connected"
    DISCONNECTED = "disconnected"


@dataclass(frozen=True)
class Connectivity:
    kind: ConnectivityKind
    breaks: tuple[int, ...]


def connectivity(steps: Sequence[SisElement] | "Walk") -> Connectivity:
    """Classify a walk; break ``j`` means step j's range differs from step j+1's domain."""
    steps = steps.steps if isinstance(steps, Walk) else tuple(steps)
    if not steps:
        raise ValueError("empty walk")
    breaks = tuple(j for j in range(1, len(steps))
                   if steps[j - 1].range != steps[j].domain)
    if not breaks:
        kind = ConnectivityKind.CONNECTED
    elif len(breaks) == len(steps) - 1:
        kind = ConnectivityKind.DISCONNECTED
    else:
        kind = ConnectivityKind.PARTIAL
    return Connectivity(kind, breaks)


@total_ordering
@dataclass(frozen=True)
class Walk:
    steps: tuple[SisElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    @classmethod
    def from_indices(cls, seq: Sequence[int], colors: Sequence[int] | None = None, k: int = 3):
        """Build the connected walk visiting indices ``seq[0], seq[1], ...``."""
        n = len(seq) - 1
        if colors is None:
            cols = [None] * n
        else:
            cols = list(colors)
        return cls(tuple(SisElement(seq[j], seq[j + 1], cols[j], k) for j in range(n)))

    def __len__(self):
        return len(self.steps)

    def __lt__(self, other):
        return self.steps < other.steps

    @property
    def height_profile(self) -> tuple[int, ...]:
        y = [0]
        for e in self.steps:
            y.append(y[-1] + classify_step(e).delta)
        return tuple(y)

    def motzkin_valid(self, h: int | None = None) -> bool:
        y = self.height_profile
        return min(y) >= 0 and (h is None or y[-1] == h)

    @property
    def indices(self) -> tuple[int, ...]:
        return (self.steps[0].domain,) + tuple(e.range for e in self.steps)

    def __str__(self):
        return ",".join(map(str, self.steps))

    __repr__ = __str__


_ELEM = re.compile(r"\s*(xi|x)(?:\^(\d))?\[(\d),(\d)\]\s*")


def parse_element(text: str, k: int = 3) -> SisElement:
    """Parse ``x[a,b]``, ``x^s[a,b]`` or ``xi[a,b]``."""
    m = _ELEM.fullmatch(text)
    if not m:
        raise ValueError(f"cannot parse element {text!r}")
    name, s, a, b = m.groups()
    color = 0 if name == "xi" else (int(s) if s else None)
    return SisElement(int(a), int(b), color, k)


def parse_walk(text: str, k: int = 3) -> Walk:
    parts = re.findall(r"xi?(?:\^\d)?\[\d,\d\]", text)
    return Walk(tuple(parse_element(p, k) for p in parts))


def render_walk(steps: Iterable[SisElement]) -> str:
    return ",".join(map(str, steps))
