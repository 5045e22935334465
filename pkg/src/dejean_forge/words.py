"""Exact period/exponent arithmetic and brute-force threshold oracles.

Words are plain sequences of non-negative ints (lists, tuples or numpy
arrays).  Exponents are ``fractions.Fraction`` so every comparison is exact.
"""
from __future__ import annotations

import string
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np
from numba import njit

Ratio = Fraction

DEFAULT_EXEMPT = frozenset({1, 2})


@dataclass(frozen=True)
class FactorWitness:
    start: int
    len: int
    period: int

    @property
    def repeat(self) -> int:
        return self.len - self.period

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.len, self.period)

    def to_json(self) -> dict:
        e = self.exponent
        return {"start": self.start, "len": self.len, "period": self.period,
                "exp": {"num": e.numerator, "den": e.denominator}}


@dataclass(frozen=True)
class EpsProfile:
    """Slack ``epsilon`` added to every repeat whose length is not in ``exempt``."""
    epsilon: Fraction = Fraction(0)
    exempt: frozenset = field(default=DEFAULT_EXEMPT)

    def __post_init__(self):
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        object.__setattr__(self, "exempt", frozenset(int(e) for e in self.exempt))
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")

    def chi(self, repeat: int) -> int:
        return 0 if repeat in self.exempt else 1


def threshold_ratio(n: int) -> Fraction:
    """Dejean's repetition threshold n/(n-1) (valid as a bound for n >= 2)."""
    if n < 2:
        raise ValueError("threshold needs n >= 2")
    return Fraction(n, n - 1)


# ---------------------------------------------------------------- text I/O

def parse_word(text: str, n: int) -> list[int]:
    """Letters a..z (n <= 26), single digits (n <= 10), or separated integers.

    A bare number is one letter when n > 10.
    """
    text = text.strip()
    if not text:
        return []
    if any(ch.isspace() or ch == "," for ch in text) or (n > 10 and text.isdigit()):
        letters = [int(tok) for tok in text.replace(",", " ").split()]
    elif n <= 26 and text.isalpha():
        letters = [ord(ch) - ord("a") for ch in text.lower()]
    elif n <= 10 and text.isdigit():
        letters = [int(ch) for ch in text]
    else:
        raise ValueError(f"cannot parse word {text[:20]!r} over {n} letters")
    check_word(letters, n)
    return letters


def format_word(w: Iterable[int], n: int) -> str:
    w = list(w)
    if n <= 26:
        return "".join(string.ascii_lowercase[x] for x in w)
    return " ".join(str(x) for x in w)


def check_word(w: Sequence[int], n: int) -> None:
    for i, x in enumerate(w):
        if not 0 <= int(x) < n:
            raise ValueError(f"letter {x} at position {i} outside alphabet of size {n}")


# ---------------------------------------------------------------- periods

def border_array(w: Sequence) -> list[int]:
    """b[i] = length of the longest proper border of w[:i+1]."""
    b = [0] * len(w)
    k = 0
    for i in range(1, len(w)):
        while k and w[i] != w[k]:
            k = b[k - 1]
        if w[i] == w[k]:
            k += 1
        b[i] = k
    return b


def period(w: Sequence) -> int:
    if len(w) == 0:
        raise ValueError("empty word has no period")
    return len(w) - border_array(w)[-1]


def exponent(w: Sequence) -> Fraction:
    if len(w) == 0:
        raise ValueError("empty word has no exponent")
    return Fraction(len(w), period(w))


def is_primitive(w: Sequence) -> bool:
    """True when the word has no proper border, i.e. exponent 1."""
    return period(w) == len(w)


def local_exponent(w: Sequence) -> tuple[Fraction, FactorWitness]:
    """Largest exponent over all factors.  Quadratic; this is the oracle."""
    if len(w) == 0:
        raise ValueError("empty word has no local exponent")
    best = Fraction(0)
    wit = None
    for i in range(len(w)):
        b = border_array(w[i:])
        for ln in range(1, len(b) + 1):
            p = ln - b[ln - 1]
            e = Fraction(ln, p)
            if wit is None or e > best or (e == best and i == wit.start and p < wit.period):
                best, wit = e, FactorWitness(i, ln, p)
    return best, wit


# ---------------------------------------------------------------- naive forbidden-factor search

def repeat_thresholds(length: int, bound: Fraction, prof: EpsProfile) -> np.ndarray:
    """t[p] = least repeat length that makes a factor of period p forbidden.

    A factor with period p and repeat e is forbidden when
    p + e + eps*chi(e) > bound*p.  Because extending a repeat keeps the
    period, every repeat length up to the maximal one is available, so the
    test for a run of maximal repeat r is simply ``r >= t[p]``.
    """
    t = np.zeros(max(length, 1), dtype=np.int64)
    big = length + 1
    eps = prof.epsilon
    for p in range(1, length):
        lim = bound * p - p
        plain = _least_int_above(lim)
        with_eps = _least_int_above(lim - eps)
        e = max(with_eps, 1)
        while e in prof.exempt:
            e += 1
        best = min(max(plain, 1), e)
        t[p] = best if best < big else big
    return t


def _least_int_above(x: Fraction) -> int:
    return int(x // 1) + 1


@njit(cache=True)
def _first_violation(w, t):
    # For every period p, runs are accumulated right to left; the leftmost
    # start with a run long enough is kept.  Returns (start, period, run).
    N = w.shape[0]
    run = np.zeros(N + 1, dtype=np.int64)
    best_i, best_p, best_r = N, 0, 0
    for p in range(1, N):
        need = t[p]
        if need > N - p:
            continue
        run[N - p] = 0
        first = -1
        first_r = 0
        for i in range(N - p - 1, -1, -1):
            if w[i] == w[i + p]:
                run[i] = run[i + 1] + 1
            else:
                run[i] = 0
            if run[i] >= need:
                first = i
                first_r = run[i]
        if first >= 0 and first < best_i:
            best_i, best_p, best_r = first, p, first_r
    return best_i, best_p, best_r


def find_forbidden_naive(w: Sequence[int], bound: Fraction,
                         prof: Optional[EpsProfile] = None) -> Optional[FactorWitness]:
    """Leftmost (then smallest-period) factor breaking the (eps, E) bound.

    The witness is the longest violating factor with that start and period.
    """
    prof = prof or EpsProfile()
    bound = Fraction(bound)
    if bound <= 1:
        raise ValueError("bound must exceed 1")
    arr = np.asarray(w, dtype=np.int64)
    if arr.size < 2:
        return None
    t = repeat_thresholds(arr.size, bound, prof)
    i, p, r = _first_violation(arr, t)
    if p == 0:
        return None
    return FactorWitness(int(i), p + _longest_violating_repeat(int(r), p, bound, prof), int(p))


def _longest_violating_repeat(r: int, p: int, bound: Fraction, prof: EpsProfile) -> int:
    for e in range(r, 0, -1):
        if p + e + prof.epsilon * prof.chi(e) > bound * p:
            return e
    raise AssertionError("run reported as violating has no violating repeat")


def is_threshold(w: Sequence[int], n: int, prof: Optional[EpsProfile] = None) -> bool:
    """Oracle verdict for the (eps, E) threshold property at n/(n-1)."""
    return find_forbidden_naive(w, threshold_ratio(n), prof) is None
