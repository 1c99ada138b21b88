"""The acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run directly with ``python3 tests/test_acceptance.py`` for just the summary.
"""

import time

import pytest

from compatop import presentations as pr
from compatop.linalg import canonical_basis
from compatop.partitions import (
    build_operadic_poset,
    build_weighted_poset,
    com2_to_weighted,
    fiber_product,
    split_hadamard,
)
from compatop.poset import FinitePoset, is_isomorphic, is_order_isomorphism, maximal_intervals
from compatop.setoperads import builtin_operad, check_basic_set, check_operad_axioms, linearized_dim
from compatop.shelling import (
    check_cohen_macaulay,
    is_semimodular,
    verify_recursive_atom_ordering,
)

import conftest
from test_presentations import transcribed_com2_relations


def record(k: int, ok: bool, detail: str, elapsed: float, limit: float | None = None) -> None:
    in_time = limit is None or elapsed < limit
    budget = f" (limit {limit:g} s)" if limit is not None else ""
    line = f"criterion {k}: {'PASS' if ok and in_time else 'FAIL'} {detail} [{elapsed:.2f} s{budget}]"
    conftest.ACCEPTANCE_LINES[k] = line
    print(line)
    assert ok, line
    assert in_time, line


def timed(fn):
    t = time.perf_counter()
    result = fn()
    return result, time.perf_counter() - t


def two_chains() -> FinitePoset:
    return FinitePoset.from_covers(
        "0abcd1", [("0", "a"), ("0", "b"), ("a", "c"), ("b", "d"), ("c", "1"), ("d", "1")]
    )


def test_criterion_1_duality_reproduction():
    def run():
        lie1 = pr.catalogue("lie1")
        dual = pr.koszul_dual(lie1)
        same = dual.relations == canonical_basis(transcribed_com2_relations(), 12)
        dims = (lie1.relations.dim, dual.relations.dim, dual.relations.ambient_dim)
        return same and dims == (3, 9, 12), dims
    (ok, dims), t = timed(run)
    record(1, ok, f"dual(lie1) equals transcribed relations, dims {dims[0]}/{dims[1]} in {dims[2]}", t, 1)


def test_criterion_2_involution():
    def run():
        return {n: pr.relation_spaces_equal(pr.koszul_dual(pr.koszul_dual(pr.catalogue(n))), pr.catalogue(n))
                for n in pr.CATALOGUE}
    res, t = timed(run)
    record(2, all(res.values()) and len(res) == 4, f"double dual {res}", t, 1)


def test_criterion_3_compatible_products():
    def run():
        out = {}
        lie1, com2 = pr.catalogue("lie1"), pr.catalogue("com2")
        for n in ("lie", "com"):
            P = pr.catalogue(n)
            ident = pr.product_to_colours(P.s)
            out[f"linear:{n}"] = pr.relation_spaces_equal(pr.black_product(P, lie1), pr.build_linear_compatible(P), ident)
            out[f"total:{n}"] = pr.relation_spaces_equal(pr.white_product(P, com2), pr.build_totally_compatible(P), ident)
        return out
    res, t = timed(run)
    record(3, all(res.values()), f"products vs compatible {res}", t, 5)


def test_criterion_4_com2_sizes():
    def run():
        dims = [linearized_dim(builtin_operad("com2"), n) for n in range(1, 9)]
        q = pr.arity3_quotient(pr.catalogue("com2")).quotient_dim
        return dims, q
    (dims, q), t = timed(run)
    record(4, dims == list(range(1, 9)) and q == 3, f"dims {dims}, arity-3 quotient {q}", t)


def test_criterion_5_axioms_and_basic_set():
    scope = {"com": 5, "com2": 5, "perm": 5, "as": 4, "perm*com2": 4}

    def run():
        out = {}
        for name, n in scope.items():
            P = builtin_operad(name)
            out[name] = check_operad_axioms(P, n).passed and check_basic_set(P, n).passed
        return out
    res, t = timed(run)
    record(5, all(res.values()), f"axioms and basic-set {res}", t, 60)


def test_criterion_6_weighted_three():
    def run():
        W3 = build_weighted_poset(3)
        D3 = build_operadic_poset(builtin_operad("com2"), 3)
        facts = (len(W3), len(W3.maximal()), len(W3.atoms()), len(W3.covers()))
        return facts, is_isomorphic(W3, D3)[0]
    (facts, iso), t = timed(run)
    record(6, facts == (10, 3, 6, 18) and iso, f"(elements, maximal, atoms, edges) = {facts}, iso {iso}", t)


def test_criterion_7_isomorphisms():
    def run():
        out = {}
        for n in range(1, 6):
            D = build_operadic_poset(builtin_operad("com2"), n)
            W = build_weighted_poset(n)
            explicit = is_order_isomorphism(D, W, {e: com2_to_weighted(e) for e in D.elements})
            out[f"com2:{n}"] = explicit and is_isomorphic(D, W)[0]
        for n in range(1, 5):
            H = build_operadic_poset(builtin_operad("perm*com2"), n)
            F = fiber_product(build_operadic_poset(builtin_operad("perm"), n),
                              build_operadic_poset(builtin_operad("com2"), n))
            explicit = is_order_isomorphism(H, F, {e: split_hadamard(e) for e in H.elements})
            out[f"fiber:{n}"] = explicit and is_isomorphic(H, F)[0]
        return out
    res, t = timed(run)
    record(7, all(res.values()), f"isomorphisms {sorted(k for k, v in res.items() if v)}", t, 120)


def test_criterion_8_counterexample():
    def run():
        W4 = build_weighted_poset(4)
        (I,) = [J for J in maximal_intervals(W4)
                if str(J.elements[J.top()]) == "1234^2"]
        ok, w = is_semimodular(I, W4)
        return ok, w
    (semi, w), t = timed(run)
    got = None if w is None else (sorted([str(w.first), str(w.second)]), [str(c) for c in w.excluded_covers])
    want = (["12^0|3^0|4^0", "1^0|2^0|34^0"], ["12^0|34^0"])
    record(8, not semi and got == want, f"interval below 1234^2 non-semimodular, witness {got}", t)


def test_criterion_9_rao():
    def run():
        out = {}
        for n in range(1, 6):
            out[f"W{n}"] = all(verify_recursive_atom_ordering(I).ok for I in maximal_intervals(build_weighted_poset(n)))
        for n in range(1, 5):
            P = build_operadic_poset(builtin_operad("perm*com2"), n)
            out[f"2Perm{n}"] = all(verify_recursive_atom_ordering(I).ok for I in maximal_intervals(P))
        return out
    res, t = timed(run)
    record(9, all(res.values()), f"recursive atom orderings {res}", t, 600)


def test_criterion_10_cohen_macaulay():
    def run():
        out = {}
        for n in range(1, 5):
            for name, P in (("W", build_weighted_poset(n)),
                            ("2Perm", build_operadic_poset(builtin_operad("perm*com2"), n))):
                reps = [check_cohen_macaulay(I) for I in maximal_intervals(P)]
                out[f"{name}{n}"] = all(r.cm and not r.euler_mismatches for r in reps)
        return out
    res, t = timed(run)
    record(10, all(res.values()), f"Cohen-Macaulay with Euler cross-check {res}", t, 600)


def test_criterion_11_negative_controls():
    def run():
        P = two_chains()
        rao = verify_recursive_atom_ordering(P, "exhaustive")
        cm = check_cohen_macaulay(P)
        W4 = build_weighted_poset(4)
        (I,) = [J for J in maximal_intervals(W4) if str(J.elements[J.top()]) == "1234^1"]
        first = {str(a): k for k, a in enumerate(["12^1|3^0|4^0", "1^0|2^0|34^1"])}
        bad_order = verify_recursive_atom_ordering(I, lambda x, y: (first.get(str(y), 2), str(y)))
        return {"rao_rejected": not rao.ok, "cm_rejected": not cm.cm, "bad_ordering_rejected": not bad_order.ok}
    res, t = timed(run)
    record(11, all(res.values()), f"negative controls {res}", t)


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-s"]))
