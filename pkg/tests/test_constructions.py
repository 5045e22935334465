import pytest

from dejean_forge import pansiot
from dejean_forge.bccode import is_k_bc_root, phi
from dejean_forge.constructions import (SuffixClosureError, build_blocks, build_roots, family_dump,
                                        materialize, materialize_root, w0_block_names)
from dejean_forge.words import is_primitive


@pytest.mark.parametrize("n", [5, 7, 9])
def test_odd_block_lengths(n):
    bs = build_blocks(n)
    for i in bs.d_blocks:
        assert len(bs.d_code(i)) == n + i + 1
    for (kind, i) in bs.q_blocks:
        assert len(bs.q_code((kind, i))) == 6 * n + 2 * i + 30


@pytest.mark.parametrize("n", [6, 8, 10])
def test_even_block_lengths(n):
    bs = build_blocks(n)
    for (i, j) in bs.d_blocks:
        assert len(bs.d_code((i, j))) == n + 2 * j + 6 * i - 3
    for (kind, j, i) in bs.q_blocks:
        assert len(bs.q_code((kind, j, i))) - 24 * i in (6 * n - 4, 6 * n - 2, 6 * n)


def test_w0_shapes():
    assert len(w0_block_names(build_blocks(5))) == 6
    assert len(w0_block_names(build_blocks(6))) == 10
    rf = build_roots(5)
    assert len(phi(rf.w0)) == 360


def test_out_of_range():
    with pytest.raises(ValueError):
        build_blocks(4)


def test_default_power():
    assert [build_roots(n).k for n in (5, 6, 7, 9)] == [3, 5, 4, 4]


@pytest.mark.parametrize("n", [5, 6])
def test_images_are_distinct_primitive_roots(n, construction):
    rf, images, _ = construction(n)
    assert len(images) == 3 * len(rf.w0_blocks)
    assert len(set(images)) == len(images)
    L = len(images[0])
    assert all(len(v) == L for v in images)
    for i, v in enumerate(images):
        assert is_primitive(v)
        assert is_k_bc_root(list(rf.premise.letters) + list(v), n, rf.roots[i], rf.flavor, rf.k)


def test_root_offsets_rotate_w0(construction):
    rf, _, _ = construction(5)
    base = phi(rf.w0, rf.flavor)
    for i, off in enumerate(rf.offsets):
        assert rf.code(i) == base[off:] + base[:off]


def test_suffix_closure_error_for_bad_power():
    rf = build_roots(8, k=3)
    with pytest.raises(SuffixClosureError, match="l3.c2 violated for root 0"):
        materialize_root(rf, 0)
    with pytest.raises(ValueError):
        materialize(build_roots(5), k=2)


def test_family_dump(construction):
    rf, images, _ = construction(5)
    dump = family_dump(rf, images)
    assert dump["L"] == 1080 and len(dump["images"]) == 18
    assert dump["labels"][:2] == ["-0", "-1"]
