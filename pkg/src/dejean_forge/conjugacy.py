"""Conjugacy of k-bc-root images.

Rotating a bc-root by an offset changes its image only by a renaming of
letters, namely the permutation that the skipped code prefix induces on the
premise.  Two images are then conjugate exactly when their prefix
permutations lie in the same coset of the cyclic group generated by the
permutation of the whole root.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from . import pansiot
from .bccode import Flavor, phi


class Permutation:
    """Bijection of {0..n-1} stored as the tuple of images.

    ``(a * b)(x) == a(b(x))``; acting on a word renames every letter.
    """
    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError("not a permutation")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation(self.images[x] for x in other.images)

    def __pow__(self, e: int) -> "Permutation":
        if e < 0:
            return self.inverse() ** (-e)
        out = Permutation.identity(self.n)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({list(self.images)})"

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for x, y in enumerate(self.images):
            inv[y] = x
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.images))

    def cycles(self) -> list[list[int]]:
        seen, out = set(), []
        for a in range(self.n):
            if a in seen:
                continue
            cyc, b = [], a
            while b not in seen:
                seen.add(b)
                cyc.append(b)
                b = self.images[b]
            out.append(cyc)
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if self.n else 1

    def rename(self, w: Sequence[int]) -> list[int]:
        return [self.images[x] for x in w]


def conjugate_oracle(u: Sequence, v: Sequence) -> bool:
    """Cyclic-rotation equality by searching v in u+u."""
    if len(u) != len(v):
        return False
    if not u:
        return True
    uu = list(u) + list(u)
    v = list(v)
    # prefix-function search of v in uu
    fail = [0] * len(v)
    k = 0
    for i in range(1, len(v)):
        while k and v[i] != v[k]:
            k = fail[k - 1]
        if v[i] == v[k]:
            k += 1
        fail[i] = k
    k = 0
    for x in uu:
        while k and x != v[k]:
            k = fail[k - 1]
        if x == v[k]:
            k += 1
            if k == len(v):
                return True
    return False


def induced_permutation(premise: pansiot.Premise, code: str) -> Permutation:
    return Permutation(pansiot.induced_permutation(premise, code))


def orbit_test(pi: Permutation, pi_p: Permutation, pi_q: Permutation, k: int) -> bool:
    """Is pi_p = pi^m * pi_q for some m in [0, k)?"""
    if not (pi ** k).is_identity():
        raise ValueError("not a k-root permutation")
    cur = pi_q
    for _ in range(k):
        if cur == pi_p:
            return True
        cur = pi * cur
    return False


@dataclass(frozen=True)
class ConjInstance:
    root: str          # bc-word of the reference root
    flavor: Flavor
    k: int
    offset: int        # left rotation of phi(root) in code symbols
    n: int

    @property
    def code(self) -> str:
        return phi(self.root, self.flavor)

    def root_permutation(self) -> Permutation:
        return induced_permutation(pansiot.canonical_premise(self.n), self.code)

    def prefix_permutation(self) -> Permutation:
        return induced_permutation(pansiot.canonical_premise(self.n), self.code[:self.offset % len(self.code)])

    def rotated_code(self) -> str:
        c = self.code
        s = self.offset % len(c)
        return c[s:] + c[:s]

    def image(self) -> list[int]:
        """decode(A0, rotated code ^ k) without the premise."""
        w = pansiot.decode(pansiot.canonical_premise(self.n), self.rotated_code() * self.k)
        return w[self.n:]


def same_class(a: ConjInstance, b: ConjInstance) -> bool:
    """Orbit test for two rotations of one root."""
    if (a.root, a.flavor, a.k, a.n) != (b.root, b.flavor, b.k, b.n):
        raise ValueError("instances must share root, flavor, k and n")
    return orbit_test(a.root_permutation(), a.prefix_permutation(), b.prefix_permutation(), a.k)


def canonical_conjugate(inst: ConjInstance) -> tuple:
    """Least word of pi^s * pi_i over all s, fixed cycle by cycle.

    Positions are scanned left to right.  Each new cycle of pi met by
    pi_i(x) allows the exponent to move only by multiples of the lcm r of
    the cycle lengths fixed so far, which steps through that cycle with
    stride gcd(r, len).  The least reachable letter is chosen and the
    exponent adjusted by the matching multiple of r.
    """
    return _canonical(inst.root_permutation(), inst.prefix_permutation())


def _canonical(pi: Permutation, base: Permutation) -> tuple:
    n = pi.n
    where = {}
    cyc_of = {}
    cycles = pi.cycles()
    for ci, cyc in enumerate(cycles):
        for pos, a in enumerate(cyc):
            where[a] = pos
            cyc_of[a] = ci
    t, r = 0, 1          # current exponent, and the step that keeps fixed cycles fixed
    done = set()
    for x in range(n):
        y = base(x)
        ci = cyc_of[y]
        if ci in done:
            continue
        cyc = cycles[ci]
        size = len(cyc)
        h = math.gcd(r, size)
        here = (where[y] + t) % size
        best_m = min(range(size // h), key=lambda m: cyc[(here + h * m) % size])
        if best_m:
            # need q with r*q = h*best_m (mod size)
            rh, sh = r // h, size // h
            q = (best_m * pow(rh, -1, sh)) % sh
            t += r * q
        r = math.lcm(r, size)
        done.add(ci)
    return (pi ** t * base).images


def canonical_bruteforce(pi: Permutation, base: Permutation) -> tuple:
    return min((pi ** s * base).images for s in range(pi.order()))


def class_keys(fam) -> list:
    """Canonical conjugacy key of every root of a RootFamily (rotations of w0)."""
    return [canonical_conjugate(ConjInstance(fam.w0, fam.flavor, fam.k, off, fam.n)) for off in fam.offsets]
