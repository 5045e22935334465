"""Extended Pansiot code over {-, 0, +}.

Each letter after the n-letter premise is described by the distance to the
nearest equal letter on its left: ``-`` is n-1, ``0`` is n and ``+`` is n+1.
All indices are 0-based.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

MINUS, ZERO, PLUS = "-", "0", "+"
SYMBOLS = (MINUS, ZERO, PLUS)
_SHIFT = {MINUS: -1, ZERO: 0, PLUS: 1}
_BY_SHIFT = {-1: MINUS, 0: ZERO, 1: PLUS}


class PremiseKind(enum.Enum):
    A0 = "A0"          # n distinct letters
    AMINUS = "Aminus"  # first and last letters equal, the rest distinct


class CodeError(ValueError):
    pass


@dataclass(frozen=True)
class Premise:
    letters: tuple
    kind: PremiseKind

    @property
    def n(self) -> int:
        return len(self.letters)

    @classmethod
    def of(cls, letters: Sequence[int]) -> "Premise":
        letters = tuple(int(x) for x in letters)
        return cls(letters, premise_kind(letters))

    def missing_letter(self):
        """The letter absent from an A- premise (virtually sits one step before it)."""
        if self.kind is PremiseKind.A0:
            return None
        present = set(self.letters)
        return next(a for a in range(self.n) if a not in present)

    def to_json(self) -> dict:
        return {"letters": list(self.letters), "kind": self.kind.value}


def canonical_premise(n: int, kind: PremiseKind = PremiseKind.A0) -> Premise:
    if kind is PremiseKind.A0:
        return Premise(tuple(range(n)), kind)
    return Premise(tuple(range(n - 1)) + (0,), kind)


def premise_kind(letters: Sequence[int]) -> PremiseKind:
    n = len(letters)
    if any(not 0 <= x < n for x in letters):
        raise CodeError("premise letters must lie in [0, n)")
    if len(set(letters)) == n:
        return PremiseKind.A0
    if n >= 3 and letters[0] == letters[-1] and len(set(letters[:-1])) == n - 1:
        return PremiseKind.AMINUS
    raise CodeError("premise is neither A0 nor A-")


def check_code(code: str) -> str:
    bad = set(code) - set(SYMBOLS)
    if bad:
        raise CodeError(f"code symbols must be among '-0+', got {sorted(bad)}")
    return code


def infer_premise_kind(code: str) -> PremiseKind:
    if not code:
        raise CodeError("empty code has no premise kind")
    return PremiseKind.AMINUS if code[0] == PLUS else PremiseKind.A0


def decode(premise: Premise, code: str) -> list[int]:
    """Premise letters followed by one letter per code symbol."""
    n = premise.n
    check_code(code)
    w = list(premise.letters)
    # last[a] = latest position of letter a; the missing letter of an A-
    # premise is placed at -1, before the premise.
    last = {}
    for j, a in enumerate(w):
        last[a] = j
    miss = premise.missing_letter()
    if miss is not None:
        last[miss] = -1
    for sym in code:
        j = len(w)
        src = j - (n + _SHIFT[sym])
        if src < 0:
            if src == -1 and miss is not None:
                a = miss
            elif premise.kind is PremiseKind.A0 and j == n and sym == PLUS:
                raise CodeError("Plus at start with A0 premise")
            else:
                raise CodeError(f"nearest-occurrence violated at {j}")
        else:
            a = w[src]
        if last.get(a) != src:
            raise CodeError(f"nearest-occurrence violated at {j}")
        w.append(a)
        last[a] = j
    return w


def encode(w: Sequence[int], n: int) -> tuple[Premise, str]:
    if len(w) < n:
        raise CodeError("word shorter than the alphabet cannot carry a premise")
    premise = Premise.of(w[:n])
    last = {a: j for j, a in enumerate(premise.letters)}
    miss = premise.missing_letter()
    if miss is not None:
        last[miss] = -1
    out = []
    for j in range(n, len(w)):
        a = int(w[j])
        if a not in last:
            raise CodeError(f"not codable at position {j}")
        shift = j - last[a] - n
        if shift not in _BY_SHIFT:
            raise CodeError(f"not codable at position {j}")
        out.append(_BY_SHIFT[shift])
        last[a] = j
    return premise, "".join(out)


def validate_bc_rule(code: str, n: int) -> bool:
    """No '-' after the '-','-','-' pattern at offsets n+2, n, 2, and no '0' n after a '0'.

    Positions follow the 1-based code indexing of the rule, so i > n means
    0-based index i-1 >= n.
    """
    for k in range(n, len(code)):
        s = code[k]
        if s == MINUS and k - n - 2 >= 0 and \
                code[k - n - 2] == code[k - n] == code[k - 2] == MINUS:
            return False
        if s == ZERO and code[k - n] == ZERO:
            return False
    return True


def adjacency_violations(code: str) -> list[int]:
    """Positions breaking: '-' then '+', '+' after '-', '0' between '+' and '-'.

    Only interior positions are judged, since the word may be extended on
    either side.
    """
    bad = []
    for k, s in enumerate(code):
        prev = code[k - 1] if k > 0 else None
        nxt = code[k + 1] if k + 1 < len(code) else None
        if s == MINUS and nxt is not None and nxt != PLUS:
            bad.append(k)
        elif s == PLUS and prev is not None and prev != MINUS:
            bad.append(k)
        elif s == ZERO and ((prev is not None and prev != PLUS) or (nxt is not None and nxt != MINUS)):
            bad.append(k)
    return bad


def cyclic_factor(root: str, premise: Premise, m: int, l: int) -> list[int]:
    """Length-l prefix of the word decoded from ``root`` rotated left by m.

    The premise for the rotated code is the n-suffix of what the first m
    symbols decode to under ``premise``.
    """
    if l < 1:
        raise ValueError("l must be positive")
    if not root:
        raise ValueError("empty root")
    n = premise.n
    m %= len(root)
    head = decode(premise, root[:m])
    shifted = Premise.of(head[-n:])
    rot = root[m:] + root[:m]
    reps = max(1, -(-(l - n) // len(root)))
    return decode(shifted, rot * reps)[:l]


def induced_permutation(premise: Premise, code: str) -> tuple:
    """Mapping sigma with suffix[i] = sigma(premise[i]) for an A0 premise.

    Returned as the tuple (sigma(0), ..., sigma(n-1)).
    """
    w = decode(premise, code)
    n = premise.n
    if len(set(premise.letters)) != n:
        raise CodeError("induced permutation needs an A0 premise")
    suffix = w[-n:]
    if len(set(suffix)) != n:
        raise CodeError("n-suffix is not made of distinct letters")
    sigma = [0] * n
    for a, b in zip(premise.letters, suffix):
        sigma[a] = b
    return tuple(sigma)
