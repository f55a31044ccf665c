"""Subloops, normality, quotients, center, decomposition, solvability."""

import numpy as np
import pytest

from loopforge import (
    HypothesisNotMet,
    InvalidParameter,
    NotNormal,
    cauchy_audit,
    center,
    decompose,
    gen_cyclic,
    h_chain,
    hall_sylow_audit,
    is_normal,
    is_simple,
    is_solvable,
    k_chain,
    lagrange_audit,
    normal_closure,
    p_loop_check,
    quotient,
    subloop_enumerate,
    subloop_generate,
)


def brute_center(q):
    """Center membership by the textbook definition, in pure Python."""
    n, t = q.order, q.table.tolist()
    out = []
    for a in range(n):
        good = all(t[a][x] == t[x][a] for x in range(n))
        if good:
            for x in range(n):
                for y in range(n):
                    if t[a][t[x][y]] != t[t[a][x]][y]:
                        good = False
                        break
                    if t[x][t[a][y]] != t[t[x][a]][y]:
                        good = False
                        break
                    if t[x][t[y][a]] != t[t[x][y]][a]:
                        good = False
                        break
                if not good:
                    break
        if good:
            out.append(a)
    return out


def test_subloop_generation_and_enumeration():
    q = gen_cyclic(12)
    assert subloop_generate(q, [4]).members == (0, 4, 8)
    assert subloop_generate(q, []).members == (0,)
    subs = subloop_enumerate(q)
    assert sorted(s.order for s in subs) == [1, 2, 3, 4, 6, 12]


def test_induced_table_is_the_subloop_as_a_loop():
    q = gen_cyclic(12)
    sub = subloop_generate(q, [4])
    ind = sub.induced_table()
    assert ind.order == 3
    assert ind.is_associative()


def test_cml81_subloop_census(cml81):
    subs = subloop_enumerate(cml81)
    assert len(subs) == 185
    assert sorted({s.order for s in subs}) == [1, 3, 9, 27, 81]


def test_normality_in_groups_and_the_lopsided_control(lopsided6):
    q = gen_cyclic(12)
    for sub in subloop_enumerate(q):
        assert is_normal(q, sub)
    two = subloop_generate(lopsided6, [1])
    assert two.members == (0, 1)
    assert not is_normal(lopsided6, two)


def test_normal_closure_of_a_moved_subloop(lopsided6):
    ncl = normal_closure(lopsided6, 1)
    assert ncl.order == 6  # the closure swallows the whole loop
    assert is_normal(lopsided6, ncl)


def test_quotient_of_cml81_by_center_is_an_abelian_group(cml81):
    z = center(cml81)
    quo, proj = quotient(cml81, z)
    assert quo.order == 27
    assert quo.is_associative() and quo.is_commutative()
    # projection is a homomorphism onto the quotient table
    t = cml81.table
    assert np.array_equal(quo.table[proj[:, None], proj[None, :]], proj[t])
    with pytest.raises(ValueError):
        proj[0] = 5


def test_quotient_refuses_non_normal_subloops(lopsided6):
    with pytest.raises(NotNormal):
        quotient(lopsided6, subloop_generate(lopsided6, [1]))


def test_center_of_cml81_against_pure_python_oracle(cml81, q9):
    assert list(center(cml81).members) == brute_center(cml81) == [0, 1, 2]
    assert list(center(q9).members) == brute_center(q9)
    z6 = gen_cyclic(6)
    assert center(z6).order == 6


def test_k_and_h_chains_on_z12(a_loops):
    q = a_loops["Z_12"]
    levels, k = k_chain(q)
    assert k.members == (0, 4, 8)
    levels, h = h_chain(q)
    assert h.members == (0, 3, 6, 9)


def test_decompose_matches_known_splittings(a_loops, cml81):
    for name, ko, ho in (("Z_12", 3, 4), ("EA(2,4)", 1, 16), ("Z_3xZ_4", 3, 4)):
        dec = decompose(a_loops[name])
        assert (dec.K.order, dec.H.order) == (ko, ho), name
    dec = decompose(cml81)
    assert (dec.K.order, dec.H.order) == (81, 1)


def test_decompose_iso_is_a_bijective_pairing(a_loops):
    q = a_loops["Z_12"]
    dec = decompose(q)
    pairs = {tuple(row) for row in dec.iso}
    assert len(pairs) == q.order
    for x in range(q.order):
        k, h = dec.iso[x]
        assert q.mul(int(k), int(h)) == x


def test_simplicity(q9, cml81):
    assert is_simple(gen_cyclic(5))
    assert not is_simple(gen_cyclic(12))
    assert not is_simple(q9)
    assert not is_simple(cml81)


def test_solvability_certificates(a_loops, cml81, q9):
    cert = is_solvable(a_loops["Z_12"])
    assert cert.solvable and cert.certificate["kind"] == "abelian_group"
    cert = is_solvable(cml81)
    assert cert.solvable
    assert cert.certificate["kind"] == "extension"
    assert cert.certificate["normal"]["kind"] == "abelian_group"
    assert cert.certificate["quotient"]["kind"] == "abelian_group"
    assert is_solvable(q9).solvable
    for name in ("AL8a", "AL8b"):
        assert is_solvable(a_loops[name]).solvable


def walk_certificate(cert):
    """Orders multiply along every extension node."""
    if cert["kind"] == "abelian_group":
        return cert["order"]
    assert cert["kind"] == "extension"
    sub = walk_certificate(cert["normal"])
    quo = walk_certificate(cert["quotient"])
    assert sub * quo == cert["order"]
    assert len(cert["normal_members"]) == sub
    return cert["order"]


def test_certificate_chain_is_arithmetically_consistent(cml81, a_loops):
    for q in (cml81, a_loops["AL8a"], a_loops["Z_3xZ_4"]):
        cert = is_solvable(q)
        assert cert.solvable
        assert walk_certificate(cert.certificate) == q.order


def test_p_loop_check_pairs(a_loops, cml81):
    assert p_loop_check(a_loops["Z_8"], 2)
    assert p_loop_check(cml81, 3)
    assert not p_loop_check(a_loops["Z_12"], 2)
    assert not p_loop_check(a_loops["Z_12"], 3)
    with pytest.raises(InvalidParameter):
        p_loop_check(a_loops["Z_8"], 4)


def test_audits(a_loops, cml81):
    lag = lagrange_audit(cml81)
    assert lag["all_divide"] and lag["subloop_count"] == 185
    cau = cauchy_audit(a_loops["Z_12"])
    assert cau["complete"]
    assert sorted(cau["witnesses"]) == [2, 3]
    hall = hall_sylow_audit(a_loops["Z_12"], [2, 3])
    assert hall["found"] and hall["target_order"] == 12
    hall2 = hall_sylow_audit(a_loops["Z_12"], [2])
    assert hall2["found"] and hall2["target_order"] == 4
    with pytest.raises(InvalidParameter):
        hall_sylow_audit(a_loops["Z_12"], [4])


def test_structure_gates_reject_non_a_loops(q9):
    with pytest.raises(HypothesisNotMet):
        decompose(q9)
