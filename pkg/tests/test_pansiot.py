import random

import pytest
from hypothesis import assume, given, strategies as st

from dejean_forge import pansiot
from dejean_forge.pansiot import (CodeError, Premise, PremiseKind, adjacency_violations, canonical_premise,
                                  cyclic_factor, decode, encode, induced_permutation, infer_premise_kind,
                                  validate_bc_rule)
from dejean_forge.words import find_forbidden_naive, threshold_ratio

A0 = canonical_premise(5)


def test_decode_examples():
    # "-" looks back n-1 letters, "0" looks back n
    assert decode(A0, "-") == [0, 1, 2, 3, 4, 1]
    assert decode(A0, "0") == [0, 1, 2, 3, 4, 0]
    assert decode(A0, "") == [0, 1, 2, 3, 4]


def test_decode_errors():
    with pytest.raises(CodeError, match="Plus at start with A0 premise"):
        decode(A0, "+")
    # "-" appends 1, then "0" points back to position 1, which is no longer the nearest 1
    with pytest.raises(CodeError, match="nearest-occurrence violated at 6"):
        decode(A0, "-0")
    with pytest.raises(CodeError):
        decode(A0, "x")


def test_aminus_premise_allows_leading_plus():
    p = canonical_premise(5, PremiseKind.AMINUS)
    assert p.letters == (0, 1, 2, 3, 0)
    assert decode(p, "+") == [0, 1, 2, 3, 0, 4]


def test_encode_examples():
    premise, code = encode([0, 1, 2, 3, 4, 0], 5)
    assert premise == A0 and code == "0"
    assert encode([0, 1, 2, 3, 4, 1], 5) == (A0, "-")
    with pytest.raises(CodeError, match="not codable at position 5"):
        encode([0, 1, 2, 3, 4, 4], 5)
    with pytest.raises(CodeError):
        encode([0, 1], 5)


def test_infer_premise_kind():
    assert infer_premise_kind("+-") is PremiseKind.AMINUS
    assert infer_premise_kind("-+") is PremiseKind.A0
    assert infer_premise_kind("0-") is PremiseKind.A0
    with pytest.raises(CodeError):
        infer_premise_kind("")


def test_premise_kinds():
    assert Premise.of([2, 0, 1, 3, 4]).kind is PremiseKind.A0
    assert Premise.of([1, 0, 2, 1]).kind is PremiseKind.AMINUS
    with pytest.raises(CodeError):
        Premise.of([0, 0, 1, 2, 3])


@given(st.sampled_from([PremiseKind.A0, PremiseKind.AMINUS]), st.integers(4, 8),
       st.text(alphabet="-0+", max_size=60))
def test_decode_encode_roundtrip(kind, n, code):
    p = canonical_premise(n, kind)
    try:
        w = decode(p, code)
    except CodeError:
        assume(False)
    assert encode(w, n) == (p, code)
    # every decoded letter has its nearest left copy at distance n-1, n or n+1
    for j in range(n, len(w)):
        back = [d for d in range(1, j + 1) if w[j - d] == w[j]]
        if back:
            assert back[0] in (n - 1, n, n + 1)


def test_validate_bc_rule(construction):
    rf, _, _ = construction(5)
    assert validate_bc_rule(rf.code(0) * rf.k, 5)
    assert validate_bc_rule("", 5)
    assert not validate_bc_rule("0" + "-+" * 2 + "0", 5)


def test_adjacency_on_construction_codes(construction):
    for n in (5, 6):
        rf, _, _ = construction(n)
        for i in range(len(rf.roots)):
            assert adjacency_violations(rf.code(i) * 2) == []
    assert adjacency_violations("--+") == [0]


def test_cyclic_factor_zero_shift():
    root = "-+0-+-+"
    assert cyclic_factor(root, A0, 0, 5 + len(root)) == decode(A0, root)


def test_cyclic_factor_rotation_matches_long_decode():
    root = "-+0-+-+"
    long = decode(A0, root * 3)
    for m in range(len(root)):
        assert cyclic_factor(root, A0, m, 5 + len(root)) == long[m:m + 5 + len(root)]


def test_induced_permutation_of_root_power(construction):
    rf, _, _ = construction(5)
    assert induced_permutation(rf.premise, rf.code(0) * rf.k) == (0, 1, 2, 3, 4)


def test_bc_codes_have_no_short_forbidden_factor(construction):
    # periods below 3n-3 are safe in decoded bc-codes at epsilon 0
    rng = random.Random(7)
    rf, _, _ = construction(5)
    for i in rng.sample(range(len(rf.roots)), 5):
        w = decode(rf.premise, rf.code(i))
        wit = find_forbidden_naive(w, threshold_ratio(5))
        assert wit is None or wit.period >= 3 * 5 - 3
