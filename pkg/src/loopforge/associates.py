"""Derived loop operations on a commutative automorphic loop.

Two associates are constructed from a loop Q:

* the Bruck associate, ``x o y = sqrt(P_x(y^2))`` with ``P_x = L_x L_{x^-1}^-1``,
  defined when the squaring map is a bijection; the result is a left Bol loop
  with the automorphic inverse property, and powers agree with Q;

* the ``(.)``-associate, ``x (.) y = (xy \\ x * yx \\ y)^-1``, defined for any
  commutative automorphic loop; the result is a commutative power-associative
  loop with the same neutral element, and ``(x (.) y)^2 = x^2 y^2``.

Both are materialized eagerly as full tables so that every kernel predicate
applies to them unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import HypothesisNotMet, NotUniquely2Divisible, TheoremViolation
from .kernel import LoopTable, validate
from .automorphic import IdentityReport, is_automorphic_loop, is_left_bol, has_aip


@dataclass(frozen=True)
class PMap:
    """The permutation P_x = L_x L_{x^-1}^-1 together with its base point.

    For a commutative automorphic loop, P_x(0) = x^2 and P_0 is the identity.
    """

    base: int
    perm: np.ndarray

    def __call__(self, u):
        return self.perm[u]


@dataclass(frozen=True)
class AssociateTable:
    """A derived multiplication table plus the loop it came from."""

    kind: str  # "bruck" or "nlp"
    table: LoopTable
    source: LoopTable


@dataclass(frozen=True)
class GroupCertificate:
    """Explicit isomorphism onto an elementary abelian 2-group.

    ``basis`` lists the greedily chosen generators; ``iso[x]`` is the GF(2)
    coordinate vector of x packed into an integer, so the isomorphism sends
    the derived operation to bitwise xor.
    """

    ok: bool
    basis: tuple[int, ...]
    iso: tuple[int, ...]

    def __bool__(self) -> bool:
        return self.ok


def _require_commutative_a_loop(q: LoopTable) -> None:
    ok, witness = is_automorphic_loop(q)  # raises NotCommutative first
    if not ok:
        raise HypothesisNotMet(
            f"not an automorphic loop: inner map at {witness[:2]} is not a "
            f"homomorphism on {witness[2:]}"
        )


def _check_associate(q: LoopTable, raw: np.ndarray, kind: str) -> AssociateTable:
    # validate() relabels only when the identity is not already element 0;
    # the derived tables must keep the neutral element of the source
    assoc = validate(raw, identity_hint=0)
    if not np.array_equal(assoc.table, raw):
        raise TheoremViolation(f"{kind} associate moved the identity element")
    m = q.exponent()
    if not np.array_equal(q.power_table(m), assoc.power_table(m)):
        raise TheoremViolation(f"powers differ between the loop and its {kind} associate")
    return AssociateTable(kind=kind, table=assoc, source=q)


def p_map(q: LoopTable, x: int) -> PMap:
    """Return P_x = L_x L_{x^-1}^-1 as an explicit permutation.

    The two composition orders L_x L_{x^-1}^-1 and L_{x^-1}^-1 L_x must agree;
    if they do not, the loop is outside the hypothesis and the call refuses.
    """
    t, ld = q.table, q.ldiv_table
    xi = q.inverse(x)
    fwd = ld[xi, t[x]]  # u -> x^-1 \ (x u)
    rev = t[x, ld[xi]]  # u -> x (x^-1 \ u)
    if not np.array_equal(fwd, rev):
        raise HypothesisNotMet(
            f"translations by {x} and its inverse do not commute"
        )
    fwd = fwd.copy()
    fwd.setflags(write=False)
    return PMap(base=x, perm=fwd)


def bruck_associate(q: LoopTable) -> AssociateTable:
    """Build the table x o y = sqrt(P_x(y^2)).

    Requires the squaring map to be a bijection. The result is checked to be
    a left Bol loop with the automorphic inverse property, with the same
    neutral element and the same powers as the source.
    """
    rt = q.sqrt_map()  # raises NotUniquely2Divisible
    sq = q.squaring_map()
    t, ld = q.table, q.ldiv_table
    inv = q.inversion()
    raw = rt[ld[inv[:, None], t[:, sq]]]
    assoc = _check_associate(q, raw, "bruck")
    if not is_left_bol(assoc.table):
        raise TheoremViolation("bruck associate is not left Bol")
    if not has_aip(assoc.table):
        raise TheoremViolation("bruck associate lacks the automorphic inverse property")
    return assoc


def nlp_associate(q: LoopTable) -> AssociateTable:
    """Build the table x (.) y = (xy \\ x * yx \\ y)^-1.

    For a commutative automorphic loop the result is a commutative
    power-associative loop with the same neutral element and the same powers.
    """
    _require_commutative_a_loop(q)
    t, ld = q.table, q.ldiv_table
    inv = q.inversion()
    idx = np.arange(q.order)
    a = ld[t, idx[:, None]]  # (x y) \ x
    b = ld[t, idx[None, :]]  # (y x) \ y, using commutativity
    raw = inv[t[a, b]]
    assoc = _check_associate(q, raw, "nlp")
    if not assoc.table.is_commutative():
        raise TheoremViolation("derived operation is not commutative")
    if not assoc.table.is_power_associative():
        raise TheoremViolation("derived operation is not power-associative")
    return assoc


def s_translation(q: LoopTable, x: int) -> np.ndarray:
    """Row x of the derived (.)-table as a permutation: y -> x (.) y."""
    _require_commutative_a_loop(q)
    t, ld = q.table, q.ldiv_table
    inv = q.inversion()
    idx = np.arange(q.order)
    row = inv[t[ld[t[x], x], ld[t[x], idx]]]
    row.setflags(write=False)
    return row


def square_root_theorem_check(q: LoopTable) -> IdentityReport:
    """Exhaustively verify (x (.) y)^2 = x^2 y^2 and that squares are closed.

    Closure of the set {x^2} under multiplication certifies it as a subloop
    candidate; both properties are required simultaneously.
    """
    _require_commutative_a_loop(q)
    assoc = nlp_associate(q).table
    sq = q.squaring_map()
    t = q.table
    lhs = sq[assoc.table]
    rhs = t[sq[:, None], sq[None, :]]
    bad = np.argwhere(lhs != rhs)
    violations = [
        {"x": int(x), "y": int(y)} for x, y in map(tuple, bad[:16])
    ]
    squares = np.unique(sq)
    prods = t[np.ix_(squares, squares)]
    open_cells = np.argwhere(~np.isin(prods, squares))
    for i, j in map(tuple, open_cells[:16]):
        violations.append({"x": int(squares[i]), "y": int(squares[j])})
    checked = q.order * q.order + len(squares) * len(squares)
    status = "violated" if violations else "holds"
    return IdentityReport(
        ident="SquareRoot",
        status=status,
        tuples_checked=checked,
        violations=tuple(violations[:16]),
    )


def squaring_iso_check(q: LoopTable) -> bool:
    """Test whether squaring is an isomorphism from the (.)-table onto Q.

    Also cross-checks the equivalence: the Bruck associate is commutative
    exactly when squaring is an isomorphism from it onto Q. Requires odd
    order (a bijective squaring map).
    """
    if not q.is_uniquely_2_divisible():
        raise NotUniquely2Divisible("squaring is not a bijection")
    _require_commutative_a_loop(q)
    sq = q.squaring_map()
    rhs = q.table[sq[:, None], sq[None, :]]
    nlp = nlp_associate(q).table
    result = bool((sq[nlp.table] == rhs).all())
    bruck = bruck_associate(q).table
    bruck_comm = bruck.is_commutative()
    bruck_iso = bool((sq[bruck.table] == rhs).all())
    if bruck_comm != bruck_iso:
        raise TheoremViolation(
            "commutativity of the bruck associate must match squaring being "
            "an isomorphism from it"
        )
    return result


def exp2_group_check(q: LoopTable) -> GroupCertificate:
    """For an exponent-2 loop, certify that the (.)-table is an elementary
    abelian 2-group.

    Verifies associativity, x (.) x = 0, and that every translation of the
    derived table is an involution, then builds an explicit isomorphism by
    greedy basis extension (always the lowest-index element outside the
    current span).
    """
    if not (q.squaring_map() == 0).all():
        raise HypothesisNotMet("exponent is not 2")
    _require_commutative_a_loop(q)
    assoc = nlp_associate(q).table
    o = assoc.table
    n = q.order
    idx = np.arange(n)
    associative = assoc.is_associative()
    self_inverse = bool((o[idx, idx] == 0).all())
    involutive = bool((o[idx[:, None], o] == idx[None, :]).all())
    if not (associative and self_inverse and involutive):
        return GroupCertificate(ok=False, basis=(), iso=())
    basis: list[int] = []
    coord = {0: 0}
    for e in range(1, n):
        if e in coord:
            continue
        bit = 1 << len(basis)
        basis.append(e)
        for s, c in list(coord.items()):
            coord[int(o[s, e])] = c | bit
    iso = np.array([coord[i] for i in range(n)])
    if not np.array_equal(np.sort(iso), idx):
        raise TheoremViolation("greedy basis did not span the loop")
    if not (iso[o] == np.bitwise_xor.outer(iso, iso)).all():
        raise TheoremViolation("coordinates fail to carry the operation to xor")
    return GroupCertificate(ok=True, basis=tuple(basis), iso=tuple(int(v) for v in iso))
