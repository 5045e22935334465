"""bc-words, their three code images, and tiling of codes by those images."""
from __future__ import annotations

import enum
import logging
import re
from dataclasses import dataclass
from typing import Optional, Sequence

from . import pansiot
from .words import period

log = logging.getLogger(__name__)


class Flavor(enum.Enum):
    RBC = "r"
    NBC = "n"
    LBC = "l"


IMAGES = {
    Flavor.RBC: {"b": "-+", "c": "-+0"},
    Flavor.NBC: {"b": "+-", "c": "+0-"},
    Flavor.LBC: {"b": "-+", "c": "0-+"},
}

# Within each flavor the two images are told apart by one symbol, so a
# regular expression parses deterministically.
_TILING = {
    Flavor.RBC: re.compile(r"(?:-\+0?)*"),
    Flavor.NBC: re.compile(r"(?:\+0?-)*"),
    Flavor.LBC: re.compile(r"(?:0?-\+)*"),
}
_TOKENS = {
    Flavor.RBC: re.compile(r"-\+0?"),
    Flavor.NBC: re.compile(r"\+0?-"),
    Flavor.LBC: re.compile(r"0?-\+"),
}

WHOLE = frozenset({Flavor.RBC, Flavor.LBC})


def check_bc(u: str) -> str:
    if set(u) - {"b", "c"}:
        raise ValueError(f"bc-word must use only 'b' and 'c': {u[:20]!r}")
    return u


def phi(u: str, flavor: Flavor = Flavor.RBC) -> str:
    table = IMAGES[flavor]
    return "".join(table[s] for s in check_bc(u))


def tile_flavors(code: str) -> frozenset:
    return frozenset(f for f, rx in _TILING.items() if rx.fullmatch(code))


def is_whole(code: str) -> bool:
    return bool(tile_flavors(code) & WHOLE)


def parse_bc(code: str, flavor: Flavor) -> str:
    """Inverse of ``phi`` for one flavor."""
    if not _TILING[flavor].fullmatch(code):
        raise ValueError(f"code is not tiled by {flavor.name}")
    return "".join("b" if len(tok) == 2 else "c" for tok in _TOKENS[flavor].findall(code))


@dataclass
class ShiftReport:
    flavors: list            # tile set of each left rotation
    violation: Optional[tuple] = None  # (clause, rotation index)

    @property
    def ok(self) -> bool:
        return self.violation is None


def shift_classification(u: str, flavor: Flavor = Flavor.RBC) -> ShiftReport:
    """Tile sets of all rotations of phi(u), with the first clause that fails.

    Clauses: 1 every rotation tiles, 2 one of any two cyclically adjacent
    rotations is whole, 3 any three adjacent rotations cover all flavors.
    """
    code = phi(u, flavor)
    if len(code) < 3:
        raise ValueError("need a code of length >= 3")
    L = len(code)
    sets = [tile_flavors(code[s:] + code[:s]) for s in range(L)]
    report = ShiftReport(sets)
    for s in range(L):
        if not sets[s]:
            report.violation = (1, s)
            return report
    for s in range(L):
        if not ((sets[s] | sets[(s + 1) % L]) & WHOLE):
            report.violation = (2, s)
            return report
    for s in range(L):
        if sets[s] | sets[(s + 1) % L] | sets[(s + 2) % L] != set(Flavor):
            report.violation = (3, s)
            return report
    return report


def _is_primitive_string(u: str) -> bool:
    p = period(u)
    return len(u) % p != 0 or p == len(u)


def is_k_bc_root(w: Sequence[int], n: int, u: str, flavor: Flavor, k: int) -> bool:
    """True when w (premise included) decodes from phi(u)^k with u primitive
    and w ends with its own premise."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not u or not _is_primitive_string(check_bc(u)):
        log.debug("bc-root %r is empty or a proper power", u[:20])
        return False
    try:
        premise, code = pansiot.encode(w, n)
    except pansiot.CodeError as exc:
        log.debug("word not encodable: %s", exc)
        return False
    if code != phi(u, flavor) * k:
        log.debug("code differs from phi(u)^k")
        return False
    if tuple(w[-n:]) != premise.letters:
        log.debug("n-suffix differs from premise")
        return False
    return True
