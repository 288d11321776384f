"""Coxeter groups against an independent oracle: words acting by reflections on R^n."""

from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crbuild.coxeter import (
    build_weyl,
    make_diagram,
    opposition_involution,
    parabolic_longest,
    parse_diagram,
)
from crbuild.errors import BadGenerator, BadType, SizeLimit, UnsupportedDiagram

LABELS = ["A1", "A2", "A3", "A4", "B3", "C2", "C3", "D4", "I2:5", "I2:6"]


def reflection_matrices(d):
    """Geometric representation: B_ij = -cos(pi / m_ij), s_i(x) = x - 2 B(e_i, x) e_i."""
    n = d.rank
    B = np.array([[-np.cos(np.pi / d.m(i, j)) for j in d.types] for i in d.types])
    mats = []
    for i in range(n):
        s = np.eye(n)
        s[i, :] -= 2 * B[i, :]
        mats.append(s)
    return mats


def oracle_lengths(d):
    """Breadth-first search on matrices; returns the sorted multiset of lengths."""
    mats = reflection_matrices(d)
    key = lambda m: tuple(np.round(m, 6).ravel())  # noqa: E731
    seen = {key(np.eye(d.rank)): 0}
    frontier = [np.eye(d.rank)]
    length = 0
    while frontier:
        length += 1
        nxt = []
        for w in frontier:
            for s in mats:
                ws = w @ s
                k = key(ws)
                if k not in seen:
                    seen[k] = length
                    nxt.append(ws)
        frontier = nxt
    return sorted(seen.values())


@pytest.mark.parametrize("label", LABELS)
def test_order_and_lengths_match_reflection_oracle(label):
    g = build_weyl(parse_diagram(label))
    assert sorted(g.lengths) == oracle_lengths(g.diagram)


@pytest.mark.parametrize("label,order,l0", [("A1", 2, 1), ("A2", 6, 3), ("A3", 24, 6),
                                            ("C2", 8, 4), ("I2:4", 8, 4), ("D4", 192, 12),
                                            ("B3", 48, 9)])
def test_orders(label, order, l0):
    g = build_weyl(parse_diagram(label))
    assert g.order == order
    assert g.longest.length == l0


def test_a1_longest_is_generator():
    g = build_weyl(parse_diagram("A1"))
    assert g.idx(g.longest) == g.generator(1)


def test_i24_longest_is_central():
    g = build_weyl(parse_diagram("I2:4"))
    w0 = g.idx(g.longest)
    assert all(g.mul(w0, w) == g.mul(w, w0) for w in range(g.order))


def test_multiply_examples():
    g = build_weyl(parse_diagram("A2"))
    s1 = g.multiply(g.identity, 1)
    assert s1.length == 1 and g.idx(s1) == g.generator(1)
    assert g.multiply(s1, 1) == g.identity
    s1s2 = g.multiply(s1, 2)
    w = g.multiply(s1s2, 1)
    assert w == g.longest and w.length == 3
    with pytest.raises(BadGenerator):
        g.multiply(s1, 3)


def test_opposition_examples():
    assert opposition_involution(build_weyl(parse_diagram("A2"))) == {1: 2, 2: 1}
    assert opposition_involution(build_weyl(parse_diagram("A3"))) == {1: 3, 2: 2, 3: 1}
    assert opposition_involution(build_weyl(parse_diagram("C2"))) == {1: 1, 2: 2}
    # D4 has even rank so w0 is central
    assert opposition_involution(build_weyl(parse_diagram("D4"))) == {i: i for i in range(1, 5)}


def test_parabolic_longest_examples():
    g = build_weyl(parse_diagram("A3"))
    assert parabolic_longest(g, {1}).length == 1
    w = parabolic_longest(g, {1, 3})
    assert w.length == 2 and g.idx(w) == g.from_word([1, 3])
    assert parabolic_longest(g, set()) == g.identity
    with pytest.raises(BadType):
        parabolic_longest(g, {4})


def test_unsupported_and_size_limit():
    with pytest.raises(UnsupportedDiagram):
        parse_diagram("E6")
    with pytest.raises(UnsupportedDiagram):
        make_diagram("D", 3)
    with pytest.raises(SizeLimit):
        build_weyl(parse_diagram("A9"))


@pytest.mark.parametrize("label", LABELS)
def test_duality_and_sigma(label):
    g = build_weyl(parse_diagram(label))
    w0 = g.idx(g.longest)
    L = g.longest.length
    assert all(g.length(w) == L - g.length(g.mul(w0, w)) for w in range(g.order))
    sigma = g.opposition
    d = g.diagram
    for i in d.types:
        assert sigma[sigma[i]] == i
        assert g.mul(g.mul(w0, g.generator(i)), w0) == g.generator(sigma[i])
        for j in d.types:
            assert d.m(sigma[i], sigma[j]) == d.m(i, j)


@pytest.mark.parametrize("label", ["A3", "C3", "D4", "I2:5"])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_deletion_property(label, data):
    g = build_weyl(parse_diagram(label))
    word = data.draw(st.lists(st.sampled_from(g.diagram.types), min_size=0, max_size=12))
    w = g.from_word(word)
    # strip letter pairs until the word is reduced; the element must not change
    while len(word) > g.length(w):
        found = None
        for a, b in ((a, b) for a in range(len(word)) for b in range(a + 1, len(word))):
            shorter = word[:a] + word[a + 1:b] + word[b + 1:]
            if g.from_word(shorter) == w:
                found = shorter
                break
        assert found is not None, f"no deletion works for {word}"
        word = found
    assert len(word) == g.length(w)


@settings(max_examples=100, deadline=None)
@given(word=st.lists(st.sampled_from([1, 2, 3]), max_size=10), i=st.sampled_from([1, 2, 3]))
def test_multiply_changes_length_by_one(word, i):
    g = build_weyl(parse_diagram("A3"))
    w = g.elements[g.from_word(word)]
    assert abs(g.multiply(w, i).length - w.length) == 1


def test_stored_words_are_reduced():
    for label in LABELS:
        g = build_weyl(parse_diagram(label))
        for k, e in enumerate(g.elements):
            assert len(e.word) == e.length
            assert g.from_word(e.word) == k


def test_reducible_i22():
    d = parse_diagram("I2:2")
    assert not d.is_irreducible()
    assert build_weyl(d).order == 4


def test_braid_relations_of_products():
    g = build_weyl(parse_diagram("B3"))
    d = g.diagram
    for i, j in product(d.types, d.types):
        word = [i, j] * d.m(i, j)
        assert g.from_word(word) == g.idx(g.identity)
