"""Constructors, canonical forms, isomorphism, and the bounded search."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loopforge import (
    FANO_LINES,
    InvalidParameter,
    SearchSpec,
    are_isomorphic,
    canonical_form,
    cocycle_table,
    exp2_group_check,
    gen_cml81,
    gen_cocycle,
    gen_cyclic,
    gen_elem_abelian,
    gen_product,
    is_automorphic_loop,
    relabel,
    search,
)


def test_cyclic_and_elem_abelian_shapes():
    assert gen_cyclic(1).order == 1
    assert gen_cyclic(6).mul(4, 5) == 3
    ea = gen_elem_abelian(2, 4)
    assert ea.order == 16 and ea.exponent() == 2
    ea9 = gen_elem_abelian(3, 2)
    assert ea9.order == 9 and ea9.exponent() == 3
    with pytest.raises(InvalidParameter):
        gen_elem_abelian(4, 2)  # 4 is not prime
    with pytest.raises(InvalidParameter):
        gen_cyclic(0)


def test_product_distributes_orders():
    q = gen_product(gen_cyclic(3), gen_cyclic(4))
    assert q.order == 12
    assert are_isomorphic(q, gen_cyclic(12))
    q = gen_product(gen_cyclic(2), gen_cyclic(6))
    assert not are_isomorphic(q, gen_cyclic(12))


def test_cocycle_validation():
    with pytest.raises(InvalidParameter):
        gen_cocycle(3, np.zeros((2, 3), dtype=int))  # wrong shape
    f = np.array([[0, 0, 0], [0, 1, 2], [0, 2, 1]])
    asym = f.copy()
    asym[1, 2] = 0
    with pytest.raises(InvalidParameter):
        gen_cocycle(3, asym)  # not symmetric
    shifted = f.copy()
    shifted[:, 0] = 1
    with pytest.raises(InvalidParameter):
        gen_cocycle(3, shifted)  # nonzero first column breaks the identity
    with pytest.raises(InvalidParameter):
        gen_cocycle(3, f + 5)  # entries outside Z_3
    with pytest.raises(InvalidParameter):
        cocycle_table(3, "no-such-cocycle")


def test_bilinear_cocycles_give_groups():
    q = gen_cocycle(3, cocycle_table(3, "zero"))
    assert q.is_associative()
    assert are_isomorphic(q, gen_elem_abelian(3, 2))


def test_q9_is_the_quartic_cocycle_loop(q9):
    built = gen_cocycle(3, cocycle_table(3, "quartic"))
    assert built == q9
    assert q9.is_commutative()
    assert not q9.is_associative()
    ok, witness = is_automorphic_loop(q9)
    assert not ok and witness == (3, 3, 3, 3)


def test_cml81_gate(cml81):
    assert cml81.order == 81
    assert cml81.exponent() == 3
    assert cml81.is_commutative()
    assert not cml81.is_associative()
    assert gen_cml81() is cml81 or gen_cml81() == cml81


def test_steiner_fano_table(steiner):
    xor = np.bitwise_xor.outer(np.arange(8), np.arange(8))
    assert np.array_equal(steiner.table, xor)
    for a, b, c in FANO_LINES:
        assert steiner.mul(a, b) == c


def test_relabel_round_trip():
    q = gen_cyclic(7)
    sigma = np.array([0, 3, 5, 1, 6, 2, 4])
    r = relabel(q, sigma)
    assert r.table[0].tolist() == list(range(7))  # identity stays at 0
    assert are_isomorphic(q, r)
    # a permutation that moves the identity is renormalized, not refused
    moved = relabel(q, np.array([1, 2, 3, 4, 5, 6, 0]))
    assert moved.table[0].tolist() == list(range(7))
    assert are_isomorphic(q, moved)
    with pytest.raises(InvalidParameter):
        relabel(q, np.array([0, 0, 1, 2, 3, 4, 5]))  # not a bijection


def brute_canonical_bytes(q):
    n = q.order
    best = None
    for perm in itertools.permutations(range(1, n)):
        sigma = np.array((0,) + perm)
        tb = relabel(q, sigma).table.tobytes()
        if best is None or tb < best:
            best = tb
    return best


def test_canonical_form_is_the_lex_least_relabeling(q9):
    for q in (gen_cyclic(4), gen_cyclic(5), gen_elem_abelian(2, 2)):
        assert canonical_form(q).table.tobytes() == brute_canonical_bytes(q)
    c = canonical_form(q9)
    assert c == canonical_form(c)  # idempotent


@settings(max_examples=25, deadline=None)
@given(perm=st.permutations(list(range(1, 6))))
def test_canonical_form_is_relabeling_invariant(perm):
    q = gen_cyclic(6)
    sigma = np.array([0] + list(perm))
    assert canonical_form(relabel(q, sigma)) == canonical_form(q)


def test_are_isomorphic_on_known_pairs(cml81):
    assert not are_isomorphic(gen_cyclic(4), gen_elem_abelian(2, 2))
    z27x3 = gen_product(gen_cyclic(27), gen_cyclic(3))
    assert not are_isomorphic(cml81, z27x3)


def test_search_prime_orders_find_only_the_cyclic_group():
    for p in (2, 3, 5):
        found = search(SearchSpec(order=p))
        assert len(found) == 1
        assert are_isomorphic(found[0], gen_cyclic(p))


def test_search_order_four_and_six():
    found = search(SearchSpec(order=4))
    assert len(found) == 2
    kinds = {tuple(sorted(int(v) for v in q.element_orders())) for q in found}
    assert kinds == {(1, 2, 2, 2), (1, 2, 4, 4)}
    found = search(SearchSpec(order=6))
    assert len(found) == 1 and found[0].is_associative()


def test_search_order_eight_exponent_two(a_loops):
    found = search(SearchSpec(order=8, require_exponent2=True))
    assert len(found) == 3
    groups = [q for q in found if q.is_associative()]
    assert len(groups) == 1
    assert are_isomorphic(groups[0], gen_elem_abelian(2, 3))
    for q in found:
        assert exp2_group_check(q).ok
    noncls = search(
        SearchSpec(order=8, require_exponent2=True, require_nonassociative=True)
    )
    assert [q.table.tobytes() for q in noncls] == [
        a_loops["AL8a"].table.tobytes(),
        a_loops["AL8b"].table.tobytes(),
    ]


def test_search_results_are_canonical_and_sorted():
    found = search(SearchSpec(order=4))
    for q in found:
        assert q == canonical_form(q)
    keys = [q.table.tobytes() for q in found]
    assert keys == sorted(keys)


def test_randomized_search_is_seed_deterministic():
    a = search(SearchSpec(order=6, mode="randomized", seed=7, max_nodes=40_000))
    b = search(SearchSpec(order=6, mode="randomized", seed=7, max_nodes=40_000))
    assert [q.table.tobytes() for q in a] == [q.table.tobytes() for q in b]
    for q in a:
        ok, _ = is_automorphic_loop(q)
        assert ok


def test_search_parameter_validation():
    with pytest.raises(InvalidParameter):
        search(SearchSpec(order=9))  # exhaustive above the desk-scale cap
    with pytest.raises(InvalidParameter):
        search(SearchSpec(order=6, mode="randomized"))  # seed required
    with pytest.raises(InvalidParameter):
        search(SearchSpec(order=6, mode="no-such-mode", seed=0))
    assert search(SearchSpec(order=7, require_exponent2=True)) == []


def test_search_limit_truncates():
    found = search(SearchSpec(order=4, limit=1))
    assert len(found) == 1
