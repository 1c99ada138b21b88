from math import comb

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from compatop.partitions import (
    EnrichedPartition,
    WeightedPartition,
    alignment,
    build_operadic_poset,
    build_partition_poset,
    build_weighted_poset,
    com2_to_weighted,
    enriched_partitions,
    fiber_product,
    operadic_leq,
    rank_of,
    refines,
    set_partitions,
    split_hadamard,
    underlying_partition,
    weighted_covers,
    weighted_leq,
    weighted_leq_global,
    weighted_partitions,
)
from compatop.permutations import Permutation
from compatop.poset import FinitePoset, PosetError, is_isomorphic, is_order_isomorphism, maximal_intervals
from compatop.setoperads import builtin_operad

com, com2, perm = (builtin_operad(n) for n in ("com", "com2", "perm"))


def bell(n):
    row = [1]
    for _ in range(n - 1):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[-1]


def weighted_count(n):
    # choose the block of 1 (size k) and its weight (k choices)
    a = [1]
    for m in range(1, n + 1):
        a.append(sum(comb(m - 1, k - 1) * k * a[m - k] for k in range(1, m + 1)))
    return a[n]


def maximal_chain_lengths(P: FinitePoset):
    out = set()
    stack = [(P.bottom(), 0)]
    while stack:
        v, d = stack.pop()
        if not P.upper_covers[v]:
            out.add(d)
        for w in P.upper_covers[v]:
            stack.append((w, d + 1))
    return out


def W(*blocks):
    return WeightedPartition(tuple((tuple(b), w) for b, w in blocks))


# -- FinitePoset core -------------------------------------------------------------------

def test_chain_and_errors():
    P = FinitePoset.from_covers("abc", [("a", "b"), ("b", "c")])
    assert P.leq("a", "c") and not P.leq("c", "a")
    assert P.elements[P.bottom()] == "a" and P.elements[P.top()] == "c"
    assert P.covers() == [("a", "b"), ("b", "c")]
    with pytest.raises(PosetError):
        FinitePoset.from_covers("ab", [("a", "b"), ("b", "a")])
    with pytest.raises(PosetError):
        FinitePoset.from_leq("abc", lambda x, y: (x, y) in {("a", "b"), ("b", "c")})
    with pytest.raises(PosetError):
        P.interval("c", "a")
    with pytest.raises(PosetError):
        FinitePoset(["a", "a"], [1, 2])


@given(st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), max_size=20))
def test_covers_are_transitive_reduction(edges):
    dag = [(a, b) for a, b in edges if a < b]
    P = FinitePoset.from_covers(range(8), dag)
    G = nx.DiGraph()
    G.add_nodes_from(range(8))
    G.add_edges_from(dag)
    assert set(P.covers()) == set(nx.transitive_reduction(G).edges())
    for a in range(8):
        for b in range(8):
            assert P.leq(a, b) == (a == b or nx.has_path(G, a, b))


# -- the partition lattice -----------------------------------------------------------------

def test_set_partitions_count():
    for n in range(1, 8):
        assert len(set_partitions(n)) == bell(n)


def test_partition_poset_small():
    assert len(build_partition_poset(1)) == 1
    P3 = build_partition_poset(3)
    assert len(P3) == 5
    P4 = build_partition_poset(4)
    assert len(P4) == 15 and maximal_chain_lengths(P4) == {3}
    with pytest.raises(ValueError):
        build_partition_poset(9)


def test_refinement():
    assert refines(((1,), (2,), (3,)), ((1, 2, 3),))
    assert not refines(((1, 2), (3,)), ((1, 3), (2,)))


def test_operadic_com_is_partition_lattice():
    for n in range(1, 6):
        assert is_isomorphic(build_operadic_poset(com, n), build_partition_poset(n))[0]


# -- operadic order ------------------------------------------------------------------------------

def test_alignment():
    assert alignment([(1, 3), (2,)], (1, 2, 3)) == Permutation((1, 3, 2))
    assert alignment([(1, 2), (3,)], (1, 2, 3)).is_identity()


def test_perm_order_keeps_the_pointed_label():
    def E(*bp):
        return EnrichedPartition(tuple((b, perm.element(len(b), p)) for b, p in bp))

    a = E(((1, 3), 1), ((2,), 1))
    above = {q for q in range(1, 4) if operadic_leq(perm, a, E(((1, 2, 3), q)))}
    assert above == {1, 2}
    b = E(((1, 2), 2), ((3,), 1))
    assert {q for q in range(1, 4) if operadic_leq(perm, b, E(((1, 2, 3), q)))} == {2, 3}


def test_example_in_com2_seven():
    def D(n, i):
        return com2.element(n, i)

    alpha = EnrichedPartition((((1, 2, 6), D(3, 2)), ((5,), D(1, 0)), ((3, 4, 7), D(3, 1))))
    beta = EnrichedPartition((((1, 2, 6), D(3, 2)), ((3, 4, 5, 7), D(4, 2))))
    assert operadic_leq(com2, alpha, beta)
    # all-white and all-black decorations of the merged block are out of reach
    for i in (0, 3):
        assert not operadic_leq(com2, alpha, EnrichedPartition((((1, 2, 6), D(3, 2)), ((3, 4, 5, 7), D(4, i)))))


def test_enriched_partition_validation():
    with pytest.raises(ValueError):
        EnrichedPartition((((1, 2), com2.element(1, 0)),))
    with pytest.raises(ValueError):
        EnrichedPartition((((2,), com2.element(1, 0)),))
    e = EnrichedPartition((((2,), com.unit()), ((1,), com.unit())))
    assert e.partition == ((1,), (2,)) and str(e) == "1|2"


def test_com2_sizes():
    assert len(build_operadic_poset(com2, 4)) == 41 == weighted_count(4)
    for n in range(1, 6):
        assert len(list(enriched_partitions(com2, n))) == weighted_count(n)
    with pytest.raises(ValueError):
        build_operadic_poset(builtin_operad("as"), 5)
    with pytest.raises(ValueError):
        build_operadic_poset(com2, 7)


# -- weighted partitions -----------------------------------------------------------------------

def test_weighted_three_structure():
    P = build_weighted_poset(3)
    assert len(P) == 10
    assert len(P.maximal()) == 3 and len(P.atoms()) == 6
    assert len(P.covers()) == 18
    labels = {str(e) for e in P.elements}
    assert {"123^0", "123^1", "123^2", "12^1|3^0", "1^0|2^0|3^0"} <= labels
    top0 = P.index[W(((1, 2, 3), 0))]
    assert sorted(str(P.elements[i]) for i in P.lower_covers[top0]) == ["12^0|3^0", "13^0|2^0", "1^0|23^0"]


def test_weighted_one():
    P = build_weighted_poset(1)
    assert len(P) == 1 and P.elements[0].weight == 0


def test_weighted_sizes_and_ranges():
    for n in range(1, 6):
        assert len(build_weighted_poset(n)) == weighted_count(n)
    with pytest.raises(ValueError):
        build_weighted_poset(8)
    with pytest.raises(ValueError):
        W(((1, 2), 2))


@pytest.mark.parametrize("n", range(1, 7))
def test_definition_covers_match_local_rule(n):
    P = build_weighted_poset(n, "definition")
    assert set(P.covers()) == weighted_covers(n)


def test_seven_built_from_covers():
    P = build_weighted_poset(7)
    assert len(P) == weighted_count(7)
    assert len(P.maximal()) == 7


def test_global_inequality_alone_is_not_antisymmetric():
    a = W(((1, 2), 1), ((3, 4), 0))
    b = W(((1, 2), 0), ((3, 4), 1))
    assert weighted_leq_global(a, b) and weighted_leq_global(b, a)
    assert not weighted_leq(a, b) and not weighted_leq(b, a)


def test_weighted_leq_examples():
    bottom = W(((1,), 0), ((2,), 0), ((3,), 0), ((4,), 0))
    top2 = W(((1, 2, 3, 4), 2))
    assert weighted_leq(bottom, top2)
    assert weighted_leq(W(((1, 2), 0), ((3,), 0), ((4,), 0)), top2)
    assert not weighted_leq(W(((1, 2), 0), ((3, 4), 0)), top2)
    assert weighted_leq(W(((1, 2), 1), ((3, 4), 0)), top2)


@pytest.mark.parametrize("n", range(1, 6))
def test_com2_is_weighted(n):
    P = build_operadic_poset(com2, n)
    Wn = build_weighted_poset(n)
    assert is_order_isomorphism(P, Wn, {e: com2_to_weighted(e) for e in P.elements})
    ok, mapping = is_isomorphic(P, Wn)
    assert ok and is_order_isomorphism(P, Wn, mapping)


def test_rank_is_n_minus_blocks():
    for n in range(1, 5):
        for P in (build_weighted_poset(n), build_operadic_poset(builtin_operad("perm*com2"), n)):
            for I in maximal_intervals(P):
                assert maximal_chain_lengths(I) == {n - 1}
                for i, e in enumerate(I.elements):
                    below = I.subposet(b for b in range(len(I)) if I.leq_idx(b, i))
                    assert maximal_chain_lengths(below) == {rank_of(e)}


# -- isomorphism ------------------------------------------------------------------------------

def test_isomorphism_examples():
    assert is_isomorphic(build_partition_poset(3), build_partition_poset(3))[0]
    P4 = build_partition_poset(4)
    trunc = P4.subposet(range(10))
    assert not is_isomorphic(build_weighted_poset(3), trunc)[0]
    assert not is_isomorphic(build_weighted_poset(3), build_partition_poset(4))[0]
    assert not is_order_isomorphism(P4, P4, {})


# -- maximal intervals -----------------------------------------------------------------------

def test_maximal_intervals():
    sizes = sorted(len(I) for I in maximal_intervals(build_weighted_poset(3)))
    assert sizes == [5, 5, 8]
    P4 = build_partition_poset(4)
    (I,) = maximal_intervals(P4)
    assert len(I) == len(P4)
    two = maximal_intervals(build_operadic_poset(com2, 2))
    assert [len(I) for I in two] == [2, 2]
    with pytest.raises(PosetError):
        maximal_intervals(FinitePoset.from_covers("abc", [("a", "c"), ("b", "c")]))


# -- fiber products ---------------------------------------------------------------------------

def test_fiber_with_partition_lattice():
    for n in range(1, 5):
        Pp = build_operadic_poset(perm, n)
        F = fiber_product(Pp, build_partition_poset(n))
        assert is_order_isomorphism(F, Pp, {pair: pair[0] for pair in F.elements})


def test_fiber_diagonal():
    P = build_partition_poset(4)
    F = fiber_product(P, P)
    assert len(F) == len(P) and is_isomorphic(F, P)[0]


@pytest.mark.parametrize("n", range(1, 5))
def test_fiber_is_hadamard(n):
    H = build_operadic_poset(builtin_operad("perm*com2"), n)
    F = fiber_product(build_operadic_poset(perm, n), build_operadic_poset(com2, n))
    assert is_order_isomorphism(H, F, {e: split_hadamard(e) for e in H.elements})
    assert is_isomorphic(H, F)[0]


def test_fiber_rejects_non_monotone_projection():
    P = build_partition_poset(3)
    flip = {p: q for p, q in zip(P.elements, reversed(P.elements))}
    with pytest.raises(PosetError):
        fiber_product(P, P, f=lambda x: flip[x])


def test_underlying_partition():
    e = W(((2,), 0), ((1, 3), 1))
    assert underlying_partition(e) == ((1, 3), (2,))


# -- DOT -------------------------------------------------------------------------------------

def test_dot_is_deterministic():
    P = build_weighted_poset(3)
    dot = P.to_dot()
    assert dot == build_weighted_poset(3).to_dot()
    assert dot.count("->") == 18
    assert '"1^0|2^0|3^0" -> "12^1|3^0";' in dot
    assert dot.startswith("digraph poset {")
