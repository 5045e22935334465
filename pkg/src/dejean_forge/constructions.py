"""Odd-n and even-n families of circular bc-roots and their materialized images."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from . import pansiot
from .bccode import Flavor, phi


@dataclass
class BlockSet:
    n: int
    parity: str
    d_blocks: dict            # index -> bc-word
    q_blocks: dict            # name -> tuple of d indices
    flavor: Flavor = Flavor.RBC

    def d_code(self, idx) -> str:
        return phi(self.d_blocks[idx], self.flavor)

    def q_bc(self, name) -> str:
        return "".join(self.d_blocks[i] for i in self.q_blocks[name])

    def q_code(self, name) -> str:
        return phi(self.q_bc(name), self.flavor)


@dataclass
class RootFamily:
    n: int
    k: int
    parity: str
    w0_blocks: list           # q-block names of w0 in order
    roots: list               # bc-words
    labels: list              # e.g. "-3", "03", "+3"
    offsets: list             # left rotation of phi(w0) giving phi(root)
    flavor: Flavor = Flavor.RBC
    blocks: Optional[BlockSet] = field(default=None, repr=False)

    @property
    def premise(self) -> pansiot.Premise:
        return pansiot.canonical_premise(self.n)

    @property
    def w0(self) -> str:
        return "".join(self.blocks.q_bc(q) for q in self.w0_blocks)

    def code(self, i: int) -> str:
        return phi(self.roots[i], self.flavor)


def build_blocks(n: int, flavor: Flavor = Flavor.RBC) -> BlockSet:
    if n < 5:
        raise ValueError("constructions need n >= 5")
    if n % 2:
        return _odd_blocks(n, flavor)
    if n < 6:
        raise ValueError("even construction needs n >= 6")
    return _even_blocks(n, flavor)


def _odd_blocks(n, flavor):
    m = (n - 3) // 2
    d = {}
    for i in range(0, 2 * m + 7, 2):
        d[i] = "c" + "b" * ((n + i - 5) // 2) + "c"
    q = {}
    for i in range(m):
        q[("q", i)] = (6, 0, 4, 2 * i + 8, 0, 6)
        q[("q'", i)] = (6, 0, 2 * i + 8, 4, 0, 6)
    return BlockSet(n, "odd", d, q, flavor)


_EVEN_Q = {
    ("q", 0): lambda i: ((i, 3), (0, 0), (i, 1), (i, 2), (i, 1), (0, 0)),
    ("q", 1): lambda i: ((i, 3), (0, 0), (i, 3), (i, 1), (i, 1), (0, 0)),
    ("q", 2): lambda i: ((i, 3), (0, 0), (i, 2), (i, 3), (i, 1), (0, 0)),
    ("q'", 0): lambda i: ((i, 3), (0, 0), (i, 2), (i, 1), (i, 1), (0, 0)),
    ("q'", 1): lambda i: ((i, 3), (0, 0), (i, 1), (i, 3), (i, 1), (0, 0)),
    ("q'", 2): lambda i: ((i, 3), (0, 0), (i, 3), (i, 2), (i, 1), (0, 0)),
}


def _even_blocks(n, flavor):
    h = n // 12 + 1
    d = {}
    for i in range(h + 1):
        for j in range(4):
            d[(i, j)] = "b" * ((n + 2 * j - 6) // 2) + "c" * (2 * i + 1)
    q = {}
    for i in range(h):
        for (kind, j), make in _EVEN_Q.items():
            q[(kind, j, i)] = make(i)
    return BlockSet(n, "even", d, q, flavor)


def w0_block_names(bs: BlockSet) -> list:
    n = bs.n
    if bs.parity == "odd":
        m = (n - 3) // 2
        return ([("q", 0), ("q'", 0)] + [("q", i) for i in range(m)]
                + [("q", 0), ("q'", 0)] + [("q'", i) for i in range(m)])
    h = n // 12 + 1
    first, second = [], []
    for i in range(h - 1):
        for j in range(3):
            first += [("q", j, i), ("q'", j, i)]
            second += [("q'", j, i), ("q", j, i)]
    for j in range(2):
        first += [("q", j, h - 1), ("q'", j, h - 1)]
        second += [("q'", j, h - 1), ("q", j, h - 1)]
    return first + [("q", 2, h - 1)] + second + [("q'", 2, h - 1)]


def build_roots(n: int, k: Optional[int] = None, flavor: Flavor = Flavor.RBC) -> RootFamily:
    """Whole-q-block rotations of w0, each giving a -, 0 and + root."""
    bs = build_blocks(n, flavor)
    names = w0_block_names(bs)
    if k is None:
        k = default_power(bs, names)
    qbc = [bs.q_bc(q) for q in names]
    qlen = [len(phi(x, flavor)) for x in qbc]
    minus, zero, plus = [], [], []
    for r in range(len(names)):
        seq = names[r:] + names[:r]
        w = "".join(qbc[r:] + qbc[:r])
        off = sum(qlen[:r])
        head = bs.d_blocks[bs.q_blocks[seq[0]][0]]
        tail = bs.d_blocks[bs.q_blocks[seq[-1]][-1]]
        if bs.parity == "odd" and not (head == tail == bs.d_blocks[6]):
            raise ValueError(f"rotation {r} does not start and end with d6")
        if bs.parity == "even" and bs.q_blocks[seq[-1]][-1] != (0, 0):
            raise ValueError(f"rotation {r} does not end with d(0,0)")
        u = w[len(head):len(w) - len(tail)]
        hl, tl = len(phi(head, flavor)), len(phi(tail, flavor))
        # w = head u tail; minus moves the head to the back, plus the tail to the front
        minus.append((u + tail + head, off + hl, f"-{r}"))
        zero.append((w, off, f"0{r}"))
        plus.append((tail + head + u, off - tl, f"+{r}"))
    total = sum(qlen)
    rows = minus + zero + plus
    return RootFamily(
        n=n, k=k, parity=bs.parity, w0_blocks=names,
        roots=[x[0] for x in rows], labels=[x[2] for x in rows],
        offsets=[x[1] % total for x in rows], flavor=flavor, blocks=bs,
    )


def default_power(bs: BlockSet, names: list) -> int:
    """Least multiple (>= 3) of the order of the premise permutation of w0."""
    code = "".join(bs.q_code(q) for q in names)
    sigma = pansiot.induced_permutation(pansiot.canonical_premise(bs.n), code)
    order = 1
    for c in cycle_lengths(sigma):
        order = math.lcm(order, c)
    return order * -(-3 // order)


def cycle_lengths(sigma) -> list:
    seen, out = set(), []
    for a in range(len(sigma)):
        if a in seen:
            continue
        c, b = 0, a
        while b not in seen:
            seen.add(b)
            b = sigma[b]
            c += 1
        out.append(c)
    return out


class SuffixClosureError(ValueError):
    pass


def materialize_root(fam: RootFamily, i: int, k: Optional[int] = None) -> tuple:
    """Image of root i: decode(A0, phi(root)^k) with the premise stripped."""
    k = fam.k if k is None else k
    premise = fam.premise
    w = pansiot.decode(premise, fam.code(i) * k)
    if tuple(w[-fam.n:]) != premise.letters:
        raise SuffixClosureError(f"l3.c2 violated for root {i}")
    return tuple(w[fam.n:])


def materialize(fam: RootFamily, k: Optional[int] = None) -> list:
    if (k if k is not None else fam.k) < 3:
        raise ValueError("k must be >= 3")
    return [materialize_root(fam, i, k) for i in range(len(fam.roots))]


def family_dump(fam: RootFamily, images: list) -> dict:
    from .words import format_word
    return {
        "n": fam.n, "parity": fam.parity, "k": fam.k,
        "flavor": fam.flavor.value,
        "roots": fam.roots, "labels": fam.labels,
        "images": [format_word(v, fam.n) for v in images],
        "L": len(images[0]) if images else 0,
    }
