import pytest
from hypothesis import given, strategies as st

from compatop.permutations import Permutation
from compatop.setoperads import (
    Com2,
    SetOperadElement,
    builtin_operad,
    check_basic_set,
    check_operad_axioms,
    compositions,
    hadamard_product,
    linearized_dim,
)

com, com2, perm, as_ = (builtin_operad(n) for n in ("com", "com2", "perm", "as"))


def D(n, i):
    return com2.element(n, i)


def test_sizes():
    for n in range(1, 6):
        assert len(com.enumerate(n)) == 1
        assert len(com2.enumerate(n)) == n
        assert len(perm.enumerate(n)) == n
    assert len(as_.enumerate(4)) == 24


def test_com2_composition():
    assert com2.compose(D(2, 1), [D(2, 0), D(1, 0)]) == D(3, 1)
    for n in range(1, 5):
        for i in range(n):
            assert com2.compose(D(1, 0), [D(n, i)]) == D(n, i)


def test_perm_composition_and_action():
    p = perm.element(2, 1)
    assert perm.compose(p, [perm.element(2, 2), perm.element(1, 1)]) == perm.element(3, 2)
    assert perm.compose(perm.element(2, 2), [perm.element(2, 2), perm.element(1, 1)]) == perm.element(3, 3)
    # the point follows the relabelling sigma^{-1}
    assert perm.act(perm.element(3, 1), Permutation((2, 3, 1))) == perm.element(3, 3)


def test_as_composition():
    w = as_.element(2, Permutation((2, 1)))
    x = as_.element(2, Permutation((1, 2)))
    u = as_.unit()
    assert as_.compose(w, [x, u]).payload == Permutation((3, 1, 2))


def test_cross_operad_and_arity_errors():
    with pytest.raises(TypeError):
        com2.compose(D(2, 0), [perm.element(1, 1), D(1, 0)])
    with pytest.raises(ValueError):
        com2.compose(D(2, 0), [D(1, 0)])
    with pytest.raises(ValueError):
        com2.element(2, 5)
    with pytest.raises(ValueError):
        com2.act(D(2, 0), Permutation((1, 2, 3)))
    with pytest.raises(KeyError):
        builtin_operad("bogus")


def test_hadamard_products():
    H = hadamard_product(perm, com2)
    assert len(H.enumerate(3)) == 9
    assert linearized_dim(builtin_operad("com2*com"), 5) == 5
    # Com is a unit for the Hadamard product
    C = hadamard_product(com, com2)
    to_q = {e: e.payload[1] for n in range(1, 6) for e in C.enumerate(n)}
    for n in range(1, 5):
        assert sorted((to_q[e] for e in C.enumerate(n)), key=lambda e: e.payload) == list(com2.enumerate(n))
        for p in C.enumerate(2):
            for a in C.enumerate(n):
                args = [a, C.unit()]
                assert to_q[C.compose(p, args)] == com2.compose(to_q[p], [to_q[x] for x in args])
    assert builtin_operad("perm*com2") is builtin_operad("perm*com2")


def test_linearized_dim():
    assert linearized_dim(com2, 7) == 7
    assert linearized_dim(com, 9) == 1
    assert linearized_dim(as_, 4) == 24
    for n in range(1, 9):
        assert linearized_dim(com2, n) == n


def test_compositions():
    assert list(compositions(3, 2)) == [(1, 1), (1, 2), (2, 1)]
    assert list(compositions(2, 0)) == [()]


@pytest.mark.parametrize("name,n", [("com", 5), ("com2", 5), ("perm", 5), ("as", 4), ("perm*com2", 4)])
def test_axioms(name, n):
    rep = check_operad_axioms(builtin_operad(name), n)
    assert rep.passed, rep.counterexample
    assert rep.cases > 0


@pytest.mark.parametrize("name,n", [("com", 5), ("com2", 5), ("perm", 5), ("as", 4), ("perm*com2", 4)])
def test_basic_set(name, n):
    rep = check_basic_set(builtin_operad(name), n)
    assert rep.passed, rep.counterexample


def test_basic_set_closure_under_hadamard():
    names = ["com", "com2", "perm"]
    for a in names:
        for b in names:
            if check_basic_set(builtin_operad(a), 4).passed and check_basic_set(builtin_operad(b), 4).passed:
                assert check_basic_set(hadamard_product(builtin_operad(a), builtin_operad(b)), 4).passed


class _DroppingCom2(Com2):
    """Composition forgets the white products of the inputs."""

    id = "broken"

    def _compose(self, payload, args):
        return payload


class _Collapsing(Com2):
    """An operad in which composition forgets the outer operation."""

    id = "collapse"

    def _compose(self, payload, args):
        return sum(a.payload for a in args)


def test_corrupted_operad_fails_with_witness():
    rep = check_operad_axioms(_DroppingCom2(), 3)
    assert not rep.passed
    assert "unit" in rep.counterexample
    assert rep.to_json()["counterexample"]


def test_non_basic_set_is_detected():
    rep = check_basic_set(_Collapsing(), 3)
    assert not rep.passed and "identifies" in rep.counterexample


def test_bad_bounds():
    with pytest.raises(ValueError):
        check_operad_axioms(com, 0)
    with pytest.raises(ValueError):
        check_basic_set(com, 1)


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.just(n), st.permutations(range(1, n + 1)), st.permutations(range(1, n + 1)))))
def test_perm_action_is_right_action(data):
    n, s, t = data
    s, t = Permutation(s), Permutation(t)
    for p in perm.enumerate(n):
        assert perm.act(perm.act(p, s), t) == perm.act(p, s * t)


def test_elements_are_hashable_values():
    assert SetOperadElement("com2", 2, 1) == D(2, 1)
    assert len({D(2, 1), D(2, 1), D(2, 0)}) == 2
