"""Multi-valued substitutions over image families.

Images are tuples of letters.  An :class:`ImageFamily` lists, for every
source letter, its ordered set of images; a flat id numbers all images
letter by letter.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .fastcheck import _small_periods, check_fast
from .words import EpsProfile


@dataclass(frozen=True)
class ImageFamily:
    n: int
    images_by_letter: tuple

    def __post_init__(self):
        groups = tuple(tuple(tuple(int(x) for x in img) for img in grp) for grp in self.images_by_letter)
        object.__setattr__(self, "images_by_letter", groups)
        flat = [img for grp in groups for img in grp]
        if not flat:
            raise ValueError("family has no images")
        L = len(flat[0])
        if any(len(img) != L for img in flat):
            raise ValueError("all images must have the same length")
        if any(not 0 <= x < self.n for img in flat for x in img):
            raise ValueError(f"image letters must lie in [0, {self.n})")
        owner = {}
        for a, grp in enumerate(groups):
            for img in grp:
                if owner.setdefault(img, a) != a:
                    raise ValueError("image sets of different letters intersect")

    @classmethod
    def from_images(cls, images: Sequence[Sequence[int]], n: int, per_letter: int = 3,
                    letters: Optional[int] = None) -> "ImageFamily":
        """Assign consecutive runs of ``per_letter`` images to letters 0, 1, ..."""
        letters = n if letters is None else letters
        need = per_letter * letters
        if len(images) < need:
            raise ValueError(f"need {need} images, got {len(images)}")
        groups = [images[per_letter * a: per_letter * (a + 1)] for a in range(letters)]
        return cls(n, tuple(groups))

    @property
    def L(self) -> int:
        return len(self.images_by_letter[0][0])

    @property
    def letters(self) -> int:
        return len(self.images_by_letter)

    @property
    def images(self) -> list:
        return [img for grp in self.images_by_letter for img in grp]

    @property
    def letter_of(self) -> list:
        return [a for a, grp in enumerate(self.images_by_letter) for _ in grp]

    def ids_of(self, a: int) -> range:
        start = sum(len(g) for g in self.images_by_letter[:a])
        return range(start, start + len(self.images_by_letter[a]))

    def to_json(self) -> dict:
        from .words import format_word
        return {"n": self.n, "L": self.L,
                "images_by_letter": [[format_word(img, self.n) for img in grp]
                                     for grp in self.images_by_letter]}

    @classmethod
    def from_json(cls, data: dict) -> "ImageFamily":
        from .words import parse_word
        n = int(data["n"])
        return cls(n, tuple(tuple(parse_word(s, n) for s in grp) for grp in data["images_by_letter"]))


@dataclass
class DeltaRelation:
    """Allowed successor images: ``allowed[(v, b)]`` is a set of ids of images of b."""
    family: ImageFamily
    allowed: dict

    @classmethod
    def full(cls, fam: ImageFamily) -> "DeltaRelation":
        # any image of b may follow any image of a letter other than b
        owner = fam.letter_of
        allowed = {}
        for v in range(len(owner)):
            for b in range(fam.letters):
                if b != owner[v]:
                    allowed[(v, b)] = frozenset(fam.ids_of(b))
        return cls(fam, allowed)

    def successors(self, v: Optional[int], b: int) -> frozenset:
        if v is None:
            return frozenset(self.family.ids_of(b))
        return self.allowed.get((v, b), frozenset())

    @property
    def delta_min(self) -> int:
        owner = self.family.letter_of
        sizes = [len(self.allowed.get((v, b), ())) for v in range(len(owner))
                 for b in range(self.family.letters) if b != owner[v]]
        return min(sizes) if sizes else 0


@dataclass
class SubstitutionState:
    counters: list
    log: list = field(default_factory=list)

    @classmethod
    def fresh(cls, letters: int) -> "SubstitutionState":
        return cls([0] * letters)

    def choose(self, a: int, k: int) -> int:
        slot = self.counters[a] % k
        self.counters[a] += 1
        self.log.append((a, slot))
        return slot


def _stack(fam: ImageFamily) -> np.ndarray:
    sizes = {len(g) for g in fam.images_by_letter}
    if len(sizes) != 1:
        raise ValueError("every letter needs the same number of images")
    return np.asarray(fam.images_by_letter, dtype=np.int64)


def three_valued_slots(w: Sequence[int], fam: ImageFamily) -> np.ndarray:
    """Slot of each position: (number of earlier equal letters) mod |V_a|."""
    arr = np.asarray(w, dtype=np.int64)
    if arr.size and (arr.min() < 0 or arr.max() >= fam.letters):
        raise ValueError("missing image set for a letter of the word")
    k = len(fam.images_by_letter[0])
    slots = np.empty(arr.size, dtype=np.int64)
    for a in np.unique(arr):
        pos = np.flatnonzero(arr == a)
        slots[pos] = np.arange(pos.size) % k
    return slots


def apply_three_valued(w: Sequence[int], fam: ImageFamily) -> np.ndarray:
    """The j-th occurrence of a letter a is replaced by V_a[(j-1) mod 3]."""
    if len(w) == 0:
        raise ValueError("word must be non-empty")
    table = _stack(fam)
    if table.shape[1] != 3:
        raise ValueError("three-valued substitution needs |V_a| = 3")
    arr = np.asarray(w, dtype=np.int64)
    slots = three_valued_slots(arr, fam)
    return table[arr, slots].reshape(-1)


def three_valued_ids(w: Sequence[int], fam: ImageFamily) -> list:
    """Flat image ids chosen by the three-valued rule."""
    arr = np.asarray(w, dtype=np.int64)
    slots = three_valued_slots(arr, fam)
    base = np.cumsum([0] + [len(g) for g in fam.images_by_letter])[:-1]
    return (base[arr] + slots).tolist()


def apply_descent_morphism(w: Sequence[int], fam: ImageFamily) -> np.ndarray:
    """Letterwise image under a bijection from the source alphabet onto the family."""
    if any(len(g) != 1 for g in fam.images_by_letter) or len(set(fam.images)) != len(fam.images):
        raise ValueError("non-bijective family")
    arr = np.asarray(w, dtype=np.int64)
    if arr.size == 0:
        return np.zeros(0, dtype=np.int64)
    if arr.min() < 0 or arr.max() >= fam.letters:
        raise ValueError("letter outside the source alphabet")
    return _stack(fam)[arr, 0].reshape(-1)


# -- critical factors -------------------------------------------------------

@dataclass(frozen=True)
class Critical:
    start: int     # 0-based start of the left repeat
    period: int    # |xy|
    repeat: int    # |x|


@dataclass
class CriticalSets:
    m: int
    E_m: list
    I_m: set = field(default_factory=set)


def _not_exponential(p: int, e: int, n: int, eps: Fraction) -> bool:
    # (p + e + eps)/p > n/(n-1)
    return (p + e + eps) * (n - 1) > n * p


def critical_factors(w: Sequence[int], n: int, prof: Optional[EpsProfile], m: int,
                     assigned: Optional[Sequence] = None) -> CriticalSets:
    """Factors xyx with |x| in E, too long for epsilon, whose right x covers m (1-based)."""
    prof = prof or EpsProfile()
    N = len(w)
    if not 1 <= m <= N:
        raise ValueError("m must lie in [1, |w|]")
    found = []
    for e in sorted(prof.exempt):
        if e < 1:
            continue
        for s in range(max(0, m - e), min(m - 1, N - e) + 1):
            for p in range(e, s + 1):
                if not _not_exponential(p, e, n, prof.epsilon):
                    break
                if all(w[s - p + t] == w[s + t] for t in range(e)):
                    found.append(Critical(s - p, p, e))
    out = CriticalSets(m, found)
    if assigned is not None:
        out.I_m = {assigned[m - 1 - c.period] for c in found}
    return out


def _critical_table(w, n, prof) -> list:
    return [set(critical_factors(w, n, prof, m).E_m) for m in range(1, len(w) + 1)]


def audit_m2(w: Sequence[int], choice: Sequence, n: int, prof: Optional[EpsProfile] = None) -> list:
    """Factors xyx (|x| in E, too long for epsilon) whose left and right x got identical images."""
    prof = prof or EpsProfile()
    bad = []
    N = len(w)
    for e in sorted(prof.exempt):
        for p in range(max(e, 1), N):
            if not _not_exponential(p, e, n, prof.epsilon):
                break
            for i in range(N - p - e + 1):
                if all(w[i + t] == w[i + p + t] for t in range(e)):
                    if all(choice[i + t] == choice[i + p + t] for t in range(e)):
                        bad.append(Critical(i, p, e))
    return bad


# -- growth -----------------------------------------------------------------

@dataclass
class GrowthReport:
    counts: dict
    delta_min: int
    E_size: int
    bound_ok: bool
    step_ok: bool
    complete: bool
    defects: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"counts": {str(k): v for k, v in sorted(self.counts.items())},
                "delta_min": self.delta_min, "E_size": self.E_size,
                "bound_ok": self.bound_ok, "step_ok": self.step_ok,
                "complete": self.complete, "defects": self.defects}


def enumerate_generalized_images(w: Sequence[int], fam: ImageFamily, rel: DeltaRelation,
                                 prof: Optional[EpsProfile] = None, cap: int = 10 ** 6,
                                 leaves: Optional[list] = None) -> GrowthReport:
    """Count, per prefix length, the image sequences allowed by M1 with the M2 exclusions.

    At position j the choice set is delta(previous image) minus the images
    sitting |xy| earlier for the critical factors that are new at j.
    ``cap`` bounds the number of visited nodes.
    """
    prof = prof or EpsProfile()
    dmin = rel.delta_min
    if dmin <= len(prof.exempt):
        raise ValueError("need delta_min > |E|")
    N = len(w)
    crit = _critical_table(w, fam.n, prof) if N else []
    new = [crit[j] - (crit[j - 1] if j else set()) for j in range(N)]
    counts = {0: 1}
    defects = []
    visited = 0
    complete = True
    chosen = [0] * N

    # iterative DFS; a frame is [position, options, next option index]
    def choices(j, prev):
        excl = {chosen[j - c.period] for c in new[j]}
        return sorted(rel.successors(prev, w[j]) - excl)

    frames = []
    if N:
        frames.append([0, choices(0, None), 0])
        if not frames[-1][1]:
            defects.append(0)
    while frames:
        j, opts, k = frames[-1]
        if k >= len(opts):
            frames.pop()
            continue
        frames[-1][2] += 1
        chosen[j] = opts[k]
        counts[j + 1] = counts.get(j + 1, 0) + 1
        visited += 1
        if visited >= cap:
            complete = False
            break
        if j + 1 == N:
            if leaves is not None:
                leaves.append(tuple(chosen))
            continue
        nxt = choices(j + 1, opts[k])
        if not nxt and (j + 1) not in defects:
            defects.append(j + 1)
        frames.append([j + 1, nxt, 0])

    bound_ok = all(counts.get(2 * t, 0) >= dmin ** t for t in range(1, N // 2 + 1))
    step_ok = True
    for m in range(1, N):  # 1-based m: letters m, m+1
        em = len(crit[m - 1])
        need = counts.get(m - 1, 0) * (dmin - em) * (em + 1)
        if counts.get(m + 1, 0) < need:
            step_ok = False
    return GrowthReport(counts, dmin, len(prof.exempt), bound_ok and complete, step_ok and complete,
                        complete, defects)


def delta_distance(rel: DeltaRelation, u: int, v: int):
    """Shortest chain u -> ... -> v in the successor digraph, counted as intermediates.

    0 when v directly follows u; ``math.inf`` when unreachable.
    """
    owner = rel.family.letter_of
    seen = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for b in range(rel.family.letters):
            for y in rel.successors(x, b) if b != owner[x] else ():
                if y == v:
                    return seen[x]
                if y not in seen:
                    seen[y] = seen[x] + 1
                    queue.append(y)
    return math.inf


@dataclass
class AltTree:
    words: set
    failures: list

    @property
    def all_threshold(self) -> bool:
        return not self.failures


def alt_image_tree(w: Sequence[int], fam: ImageFamily, alt: Sequence[int], replaced: Sequence[int],
                   depth: int, prof: Optional[EpsProfile] = None, precheck: bool = True) -> AltTree:
    """All words obtained by swapping any subset of the first ``depth`` uses of ``replaced``."""
    alt, replaced = tuple(alt), tuple(replaced)
    images = fam.images
    if replaced not in images:
        raise ValueError("replaced image is not in the family")
    if len(alt) != fam.L:
        raise ValueError("alternative image has the wrong length")
    if precheck:
        from .verify import check_l2
        swapped = ImageFamily(fam.n, tuple(tuple(alt if img == replaced else img for img in grp)
                                           for grp in fam.images_by_letter))
        if not check_l2(swapped, fam.n).passed:
            raise ValueError("family with the alternative image fails verification; refusing")
    ids = three_valued_ids(w, fam)
    target = images.index(replaced)
    where = [i for i, x in enumerate(ids) if x == target][:depth]
    out, failures = set(), []
    for mask in range(1 << len(where)):
        parts = [images[x] for x in ids]
        for b, pos in enumerate(where):
            if mask >> b & 1:
                parts[pos] = alt
        word = tuple(x for part in parts for x in part)
        out.add(word)
        if check_fast(word, fam.n, prof) is not None:
            failures.append(mask)
    return AltTree(out, failures)


def exponent_profile(w: Sequence[int], repeats: Iterable[int], max_period: Optional[int] = None) -> dict:
    """For each t, the largest exponent among factors whose repeat is at least t."""
    arr = np.ascontiguousarray(w, dtype=np.int64)
    N = arr.size
    pmax = N if max_period is None else min(N, max_period + 1)
    max_rep = np.zeros(max(N, 1), dtype=np.int64)
    where = np.zeros_like(max_rep)
    if N > 1:
        _small_periods(arr, pmax, max_rep, where)
    out = {}
    for t in repeats:
        best = None
        for p in range(1, pmax):
            r = int(max_rep[p])
            if r >= t and r > 0:
                e = Fraction(p + r, p)
                if best is None or e > best:
                    best = e
        out[t] = best
    return out
