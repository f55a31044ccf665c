"""Stabilizer chains checked against plain breadth-first closure."""

import numpy as np
import pytest

from loopforge import (
    DegreeMismatch,
    compose,
    gen_cyclic,
    gen_q9,
    generate,
    inn_group,
    inner_generators,
    inverse,
    mlt_group,
    perm_from,
    subgroup_equals,
)

CLOSURE_CAP = 100_000


def brute_closure(gens, cap=CLOSURE_CAP):
    """All products of the generators, by BFS over raw permutation bytes."""
    n = len(gens[0])
    seen = {tuple(range(n))}
    frontier = [np.arange(n)]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = compose(p, g)
                key = tuple(int(v) for v in q)
                if key not in seen:
                    seen.add(key)
                    nxt.append(q)
                    if len(seen) > cap:
                        raise AssertionError("closure exceeded the test cap")
        frontier = nxt
    return seen


def test_compose_is_postfix():
    # compose(p, q) applies p first, then q
    p = perm_from([1, 2, 0])
    q = perm_from([0, 2, 1])
    assert compose(p, q).tolist() == [2, 1, 0]
    assert compose(q, p).tolist() == [1, 0, 2]


def test_inverse_round_trip():
    rng = np.random.default_rng(3)
    for _ in range(20):
        p = rng.permutation(9)
        assert compose(p, inverse(p)).tolist() == list(range(9))


def test_perm_from_rejects_non_permutations():
    with pytest.raises(Exception):
        perm_from([0, 0, 1])


def test_group_order_matches_brute_closure():
    for q in (gen_cyclic(6), gen_cyclic(12), gen_q9()):
        gens = [q.left_translation(x) for x in range(q.order)]
        grp = generate(gens)
        assert grp.order() == len(brute_closure(gens))


def test_mlt_inn_orders_on_known_loops(q9, cml81):
    assert mlt_group(gen_cyclic(12)).order() == 12
    assert inn_group(gen_cyclic(12)).order() == 1
    assert mlt_group(q9).order() == 81
    assert inn_group(q9).order() == 9
    assert mlt_group(cml81).order() == 2187
    assert inn_group(cml81).order() == 27


def test_mlt_order_is_degree_times_inn_order(a_loops):
    for name, q in a_loops.items():
        assert mlt_group(q).order() == q.order * inn_group(q).order(), name


def test_cml81_mlt_matches_exhaustive_closure(cml81):
    gens = [cml81.left_translation(x) for x in range(cml81.order)]
    assert len(brute_closure(gens)) == mlt_group(cml81).order()


def test_inner_generators_span_the_inner_group(q9, a_loops):
    sample = [q9, a_loops["Z_12"], a_loops["EA(2,3)"], a_loops["AL8a"],
              a_loops["CML81"]]
    for q in sample:
        maps = [perm for _, _, perm in inner_generators(q)]
        spanned = generate(maps, degree=q.order)
        assert subgroup_equals(spanned, inn_group(q))


def test_contains_and_stabilizer(q9):
    grp = mlt_group(q9)
    for x in range(q9.order):
        assert grp.contains(q9.left_translation(x))
    assert not grp.contains(perm_from([1, 0] + list(range(2, 9))))
    stab = grp.point_stabilizer(0)
    assert stab.order() == inn_group(q9).order()


def test_degree_mismatch_rejected():
    with pytest.raises(DegreeMismatch):
        generate([perm_from([1, 0]), perm_from([0, 1, 2])])
