"""Scheduled forbidden-factor detector running in O(|w| log |w|) iterations.

Periods below R[0] are scanned directly.  Longer periods are split into
bands [R[i], R[i+1]); in band i only every P[i]-th position is used as an
anchor, which is enough because a forbidden factor of such a period has a
repeat longer than P[i].  For each anchor the candidates holding the same
letter inside the band window are visited through the previous-occurrence
array, and the common run around the pair is measured.

All positions are 0-based; -1 marks a letter with no earlier occurrence.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from numba import njit

from .words import EpsProfile, FactorWitness


@dataclass
class Schedule:
    n: int
    eps: Fraction
    P: list
    R: list  # R[-1] is the word length

    @property
    def bands(self) -> int:
        return len(self.P)

    def to_json(self) -> dict:
        return {"P": list(self.P), "R": list(self.R)}


def build_schedule(length: int, n: int, eps=Fraction(0), r0_min: Optional[int] = None) -> Schedule:
    eps = Fraction(eps)
    if n < 2:
        raise ValueError("n must be >= 2")
    if eps > 1:
        raise ValueError("epsilon above 1 is not supported by the band argument")
    if r0_min is None:
        r0_min = 3 * n - 2
    p0 = max(1, (r0_min - 1) // (n - 1))
    # smallest R with (R + P + eps)/R <= n/(n-1), i.e. R >= (P + eps)(n-1)
    extra = max(1, math.ceil(eps * (n - 1)))

    def lower(p):
        return p * (n - 1) + extra

    if length <= lower(p0):
        return Schedule(n, eps, [], [length])
    r = max(1, math.floor(math.log((length - 1) / (p0 * (n - 1)))))
    P, R = [], []
    for i in range(r):
        p = math.ceil(p0 * math.exp(i))
        if P and p <= P[-1]:
            p = P[-1] + 1
        if lower(p) >= length:
            break
        P.append(p)
        R.append(lower(p))
    R.append(length)
    return Schedule(n, eps, P, R)


@njit(cache=True, nogil=True)
def previous_positions(w):
    """prew[j] = distance back to the previous equal letter, 0 when none."""
    N = w.shape[0]
    size = 1
    for j in range(N):
        if w[j] + 1 > size:
            size = w[j] + 1
    last = np.full(size, -1, dtype=np.int64)
    prew = np.zeros(N, dtype=np.int64)
    for j in range(N):
        a = w[j]
        if last[a] >= 0:
            prew[j] = j - last[a]
        last[a] = j
    return prew


@njit(cache=True, nogil=True)
def _anchors(N, P, R0):
    # anchors a = N mod P + m*P that have a - R0 >= 0
    s = N % P
    first = s
    if first < R0:
        first = s + ((R0 - s + P - 1) // P) * P
    if first >= N:
        return np.zeros(0, dtype=np.int64)
    return np.arange(first, N, P).astype(np.int64)


@njit(cache=True, nogil=True)
def _start_points(w, anchors, Ri):
    # nearest position <= a - Ri holding w[a], or -1
    N = w.shape[0]
    size = 1
    for j in range(N):
        if w[j] + 1 > size:
            size = w[j] + 1
    last = np.full(size, -1, dtype=np.int64)
    pts = np.full(anchors.shape[0], -1, dtype=np.int64)
    j = 0
    for m in range(anchors.shape[0]):
        a = anchors[m]
        t = a - Ri
        while j <= t:
            last[w[j]] = j
            j += 1
        pts[m] = last[w[a]]
    return pts


def start_points(w: Sequence[int], s: Schedule, i: int) -> tuple[np.ndarray, np.ndarray]:
    """Anchors of band i and, for each, the nearest candidate position."""
    arr = np.asarray(w, dtype=np.int64)
    anchors = _anchors(arr.size, s.P[i], s.R[i])
    return anchors, _start_points(arr, anchors, s.R[i])


@njit(cache=True, nogil=True)
def _max_repeat(w, prew, anchors, pts, Rnext, max_rep, where):
    N = w.shape[0]
    iters = 0
    for m in range(anchors.shape[0]):
        a = anchors[m]
        c = pts[m]
        while c >= 0 and c > a - Rnext:
            lrep = 1
            while c - lrep >= 0 and w[c - lrep] == w[a - lrep]:
                lrep += 1
            rrep = 1
            while a + rrep < N and w[c + rrep] == w[a + rrep]:
                rrep += 1
            iters += lrep + rrep - 1
            p = a - c
            rep = lrep + rrep - 1
            if rep > max_rep[p]:
                max_rep[p] = rep
                where[p] = c - lrep + 1
            if prew[c] == 0:
                break
            c -= prew[c]
    return iters


@njit(cache=True, nogil=True)
def _small_periods(w, pmax, max_rep, where):
    N = w.shape[0]
    iters = 0
    for p in range(1, min(pmax, N)):
        run = 0
        for i in range(N - p):
            iters += 1
            if w[i] == w[i + p]:
                run += 1
                if run > max_rep[p]:
                    max_rep[p] = run
                    where[p] = i - run + 1
            else:
                run = 0
    return iters


@njit(cache=True, nogil=True)
def _flag(max_rep, n, num, den, exempt):
    # smallest p with max_rep[p] + p + eps*chi > n/(n-1) * p, else -1
    for p in range(1, max_rep.shape[0]):
        rep = max_rep[p]
        if rep == 0:
            continue
        chi = 1
        if rep < exempt.shape[0] and exempt[rep]:
            chi = 0
        if (rep + p) * den * (n - 1) + chi * num * (n - 1) > n * p * den:
            return p
    return -1


@dataclass
class FastReport:
    witness: Optional[FactorWitness]
    schedule: Schedule
    iterations: int
    band_iterations: list = field(default_factory=list)

    @property
    def threshold(self) -> bool:
        return self.witness is None

    def to_json(self) -> dict:
        out = {"threshold": self.threshold, "bands": self.schedule.to_json(),
               "iterations": self.iterations}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def max_repeat(w, s: Schedule, i: int, max_rep: np.ndarray, where: Optional[np.ndarray] = None,
               prew: Optional[np.ndarray] = None) -> int:
    """Fill max_rep for periods in band i; returns the inner iteration count."""
    arr = np.asarray(w, dtype=np.int64)
    if prew is None:
        prew = previous_positions(arr)
    if where is None:
        where = np.zeros_like(max_rep)
    anchors, pts = start_points(arr, s, i)
    return _max_repeat(arr, prew, anchors, pts, s.R[i + 1], max_rep, where)


def _default_jobs() -> int:
    env = os.environ.get("DEJEAN_FORGE_JOBS")
    return int(env) if env else 1


def check_fast_report(w: Sequence[int], n: int, prof: Optional[EpsProfile] = None,
                      schedule: Optional[Schedule] = None, trust_bc_rule: bool = False,
                      jobs: Optional[int] = None) -> FastReport:
    prof = prof or EpsProfile()
    arr = np.ascontiguousarray(w, dtype=np.int64)
    N = arr.size
    if schedule is None:
        schedule = build_schedule(max(N, 1), n, prof.epsilon)
    if N < 2:
        return FastReport(None, schedule, 0)
    max_rep = np.zeros(N, dtype=np.int64)
    where = np.zeros(N, dtype=np.int64)
    small = schedule.R[0]
    if trust_bc_rule and _bc_shortcut_applies(arr, n, prof):
        small = min(small, 1)
    iters = _small_periods(arr, small, max_rep, where) if small > 1 else 0
    prew = previous_positions(arr)
    jobs = jobs or _default_jobs()
    band_iters = []
    if jobs > 1 and schedule.bands > 1:
        def run(i):
            mr = np.zeros(N, dtype=np.int64)
            wh = np.zeros(N, dtype=np.int64)
            return max_repeat(arr, schedule, i, mr, wh, prew), mr, wh
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            for it, mr, wh in ex.map(run, range(schedule.bands)):
                band_iters.append(it)
                better = mr > max_rep
                max_rep[better] = mr[better]
                where[better] = wh[better]
    else:
        for i in range(schedule.bands):
            band_iters.append(max_repeat(arr, schedule, i, max_rep, where, prew))
    iters += sum(band_iters)
    exempt = np.zeros(N + 1, dtype=np.bool_)
    for e in prof.exempt:
        if 0 <= e <= N:
            exempt[e] = True
    eps = prof.epsilon
    p = _flag(max_rep, n, eps.numerator, eps.denominator, exempt)
    wit = None
    if p > 0:
        wit = FactorWitness(int(where[p]), int(p + max_rep[p]), int(p))
    return FastReport(wit, schedule, int(iters), band_iters)


def _bc_shortcut_applies(arr, n, prof) -> bool:
    # only for codes obeying the bc rule with 1 exempt and eps <= 1/(n-1)
    from . import pansiot
    if 1 not in prof.exempt or prof.epsilon > Fraction(1, n - 1) or n <= 5:
        return False
    try:
        _, code = pansiot.encode(arr.tolist(), n)
    except pansiot.CodeError:
        return False
    return pansiot.validate_bc_rule(code, n)


def check_fast(w: Sequence[int], n: int, prof: Optional[EpsProfile] = None, **kw) -> Optional[FactorWitness]:
    """A forbidden factor if one exists, else None.  Verdict matches the naive oracle."""
    return check_fast_report(w, n, prof, **kw).witness
