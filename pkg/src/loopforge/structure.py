"""Structure theory of finite loops: subloops, normality, quotients, the
center, the squaring and 2-torsion chains, the odd-even direct decomposition,
simplicity, solvability, and Lagrange/Cauchy/Hall order audits.

Normality is tested as setwise invariance under the maps
L_{x,y} = L_x L_y L_{yx}^-1; for commutative loops these generate the full
inner mapping group, so the test is exact there.

Solvability uses the recursive definition: a loop is solvable when it is an
abelian group, or when some proper nontrivial normal subloop N makes both N
and Q/N solvable. The search walks normal closures in lowest-element-first
order and returns a JSON-friendly certificate of the series it found.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    CapExceeded,
    DecompositionFailed,
    HypothesisNotMet,
    IllDefined,
    InvalidParameter,
    NotNormal,
    NotSubloop,
    TheoremViolation,
)
from .kernel import LoopTable, validate
from .permgroups import inner_tensor
from .automorphic import is_automorphic_loop

SUBLOOP_CAP = 20_000


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _require_commutative_a_loop(q: LoopTable) -> None:
    ok, witness = is_automorphic_loop(q)
    if not ok:
        raise HypothesisNotMet(
            f"not an automorphic loop: inner map at {witness[:2]} is not a "
            f"homomorphism on {witness[2:]}"
        )


@dataclass(frozen=True)
class Subloop:
    """A subloop given by its sorted member set inside a parent loop."""

    parent: LoopTable
    members: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    def member_mask(self) -> np.ndarray:
        mask = np.zeros(self.parent.order, dtype=bool)
        mask[list(self.members)] = True
        return mask

    def induced_table(self) -> LoopTable:
        """The subloop as a standalone loop on {0..m-1}, members in order."""
        idx = np.array(self.members)
        sub = self.parent.table[np.ix_(idx, idx)]
        return validate(np.searchsorted(idx, sub), identity_hint=0)


@dataclass(frozen=True)
class Decomposition:
    """A direct-product splitting Q = K x H.

    K holds the odd-order elements, H the elements of 2-power order;
    ``iso[x] = (k, h)`` is the unique pair with x = k * h, and the pairing is
    a verified loop isomorphism onto the direct-product table.
    """

    K: Subloop
    H: Subloop
    iso: np.ndarray


def subloop_generate(q: LoopTable, seed=()) -> Subloop:
    """Least subloop containing the seed elements."""
    for x in seed:
        if not 0 <= int(x) < q.order:
            raise InvalidParameter(f"element {x} outside 0..{q.order - 1}")
    return Subloop(parent=q, members=q.closure(seed))


def subloop_enumerate(q: LoopTable, cap: int = SUBLOOP_CAP) -> list[Subloop]:
    """All subloops, by closing every found subloop with one extra generator.

    Complete whenever the total count stays within the cap; raises
    CapExceeded otherwise.
    """
    cached = q._memo.get("subloops")
    if cached is None:
        found = {(0,)}
        queue = [(0,)]
        while queue:
            base = queue.pop()
            inside = set(base)
            for x in range(q.order):
                if x in inside:
                    continue
                grown = q.closure(base + (x,))
                if grown not in found:
                    found.add(grown)
                    queue.append(grown)
        cached = sorted(found, key=lambda m: (len(m), m))
        q._memo["subloops"] = cached
    if len(cached) > cap:
        raise CapExceeded(f"{len(cached)} subloops exceed the cap {cap}")
    return [Subloop(parent=q, members=m) for m in cached]


def is_normal(q: LoopTable, sub: Subloop) -> bool:
    """Setwise invariance of the subloop under every inner map L_{x,y}."""
    members = list(sub.members)
    if not q.is_closed(members):
        raise NotSubloop(f"{sub.members} is not closed")
    mask = sub.member_mask()
    return bool(mask[inner_tensor(q)[:, :, members]].all())


def normal_closure(q: LoopTable, x: int) -> Subloop:
    """Least subloop containing x that is invariant under all inner maps."""
    if not 0 <= x < q.order:
        raise InvalidParameter(f"element {x} outside 0..{q.order - 1}")
    it = inner_tensor(q)
    cur = q.closure((x,))
    while True:
        images = np.unique(it[:, :, list(cur)])
        grown = q.closure(sorted(set(cur) | set(int(u) for u in images)))
        if grown == cur:
            return Subloop(parent=q, members=cur)
        cur = grown


def quotient(q: LoopTable, sub: Subloop) -> tuple[LoopTable, np.ndarray]:
    """Quotient loop modulo a normal subloop, plus the projection map.

    Cosets are the orbits of the group generated by the translations by
    subloop elements; the coset product is checked to be independent of
    representatives rather than trusted.
    """
    if not is_normal(q, sub):
        raise NotNormal(f"{sub.members} is not invariant under the inner maps")
    n, m = q.order, sub.order
    members = list(sub.members)
    up = q.table[members]  # y -> a y
    down = q.ldiv_table[members]  # y -> a \ y
    label = np.arange(n)
    while True:
        pulled = np.minimum(label[up].min(axis=0), label[down].min(axis=0))
        merged = np.minimum(label, pulled)
        if np.array_equal(merged, label):
            break
        label = merged
    reps = np.unique(label)
    if len(reps) * m != n or not (np.bincount(label, minlength=n)[reps] == m).all():
        raise IllDefined("cosets do not partition the loop into equal fibers")
    proj = np.searchsorted(reps, label)
    coset_of_product = proj[q.table]
    table = coset_of_product[np.ix_(reps, reps)]
    if not np.array_equal(coset_of_product, table[proj[:, None], proj[None, :]]):
        raise IllDefined("coset product depends on the representatives")
    out = validate(table, identity_hint=0)
    proj = proj.copy()
    proj.setflags(write=False)
    return out, proj


def center(q: LoopTable) -> Subloop:
    """Elements a with a.xy = x.ay = xa.y for all x, y."""
    cached = q._memo.get("center")
    if cached is None:
        t = q.table
        a_xy = t[:, t]  # [a, x, y] = a (x y)
        x_ay = t[:, t].transpose(1, 0, 2)  # [a, x, y] = x (a y)
        xa_y = t[t].transpose(1, 0, 2)  # [a, x, y] = (x a) y
        middle = (a_xy == x_ay).all(axis=(1, 2))
        right = (x_ay == xa_y).all(axis=(1, 2))
        cached = tuple(int(a) for a in np.flatnonzero(middle & right))
        q._memo["center"] = cached
    sub = Subloop(parent=q, members=cached)
    if not q.is_closed(list(cached)) or not is_normal(q, sub):
        raise TheoremViolation("center is not a normal subloop")
    return sub


def k_chain(q: LoopTable) -> tuple[list[Subloop], Subloop]:
    """Descending chain K_n = {x^(2^n)} down to its stable floor K.

    Every level is checked to be a normal subloop; the floor is checked to
    be exactly the odd-order elements, with odd cardinality.
    """
    _require_commutative_a_loop(q)
    sq = q.squaring_map()
    levels = []
    cur = tuple(range(q.order))
    while True:
        if not q.is_closed(list(cur)):
            raise TheoremViolation(f"squaring level {cur} is not a subloop")
        level = Subloop(parent=q, members=cur)
        if not is_normal(q, level):
            raise TheoremViolation(f"squaring level {cur} is not normal")
        levels.append(level)
        nxt = tuple(sorted({int(sq[x]) for x in cur}))
        if nxt == cur:
            break
        cur = nxt
    floor = levels[-1]
    odd = tuple(int(x) for x in np.flatnonzero(q.element_orders() % 2 == 1))
    if floor.members != odd:
        raise TheoremViolation("stable squaring level is not the odd-order part")
    if floor.order % 2 == 0:
        raise TheoremViolation("odd part has even cardinality")
    return levels, floor


def h_chain(q: LoopTable) -> tuple[list[Subloop], Subloop]:
    """Ascending chain H_n = {x : x^(2^n) = 1} up to its stable ceiling H."""
    _require_commutative_a_loop(q)
    sq = q.squaring_map()
    levels = []
    power = np.arange(q.order)  # x^(2^n), starting at n = 0
    while True:
        cur = tuple(int(x) for x in np.flatnonzero(power == 0))
        if not q.is_closed(list(cur)):
            raise TheoremViolation(f"2-torsion level {cur} is not a subloop")
        level = Subloop(parent=q, members=cur)
        if not is_normal(q, level):
            raise TheoremViolation(f"2-torsion level {cur} is not normal")
        if levels and levels[-1].members == cur:
            break
        levels.append(level)
        power = sq[power]
    return levels, levels[-1]


def decompose(q: LoopTable) -> Decomposition:
    """Split Q as K x H: odd-order part times 2-power-torsion part.

    Every element must factor uniquely as k*h, and the pairing must be a
    loop isomorphism onto the direct product of the induced tables; both
    facts are verified, not assumed.
    """
    _, k_part = k_chain(q)
    _, h_part = h_chain(q)
    n = q.order
    if set(k_part.members) & set(h_part.members) != {0}:
        raise DecompositionFailed("odd part and 2-part overlap beyond the identity")
    km, hm = k_part.order, h_part.order
    if km * hm != n:
        raise DecompositionFailed(f"|K| |H| = {km * hm} does not match order {n}")
    pair_to_elem = q.table[np.ix_(list(k_part.members), list(h_part.members))].ravel()
    if not np.array_equal(np.sort(pair_to_elem), np.arange(n)):
        raise DecompositionFailed("products k*h do not enumerate the loop")
    tk = k_part.induced_table().table
    th = h_part.induced_table().table
    product = (tk[:, None, :, None] * hm + th[None, :, None, :]).reshape(n, n)
    if not np.array_equal(
        pair_to_elem[product],
        q.table[pair_to_elem[:, None], pair_to_elem[None, :]],
    ):
        raise DecompositionFailed("pairing is not a homomorphism")
    elem_to_pair = np.empty(n, dtype=np.int64)
    elem_to_pair[pair_to_elem] = np.arange(n)
    iso = np.column_stack(
        (
            np.array(k_part.members)[elem_to_pair // hm],
            np.array(h_part.members)[elem_to_pair % hm],
        )
    )
    iso.setflags(write=False)
    return Decomposition(K=k_part, H=h_part, iso=iso)


def is_simple(q: LoopTable) -> bool:
    """True when every nonidentity element normally generates the whole loop.

    The trivial loop is not considered simple.
    """
    if q.order == 1:
        return False
    return all(normal_closure(q, x).order == q.order for x in range(1, q.order))


@dataclass(frozen=True)
class SolvabilityCertificate:
    """Outcome of the solvability search plus a checkable trace.

    The certificate is a nested dict: an ``abelian_group`` leaf, an
    ``extension`` node naming the normal subloop members and carrying
    certificates for the subloop and the quotient, or a ``no_series`` node
    when no proper nontrivial normal subloop yields a solvable pair.
    """

    solvable: bool
    certificate: dict

    def __bool__(self) -> bool:
        return self.solvable


def _solvable(q: LoopTable) -> tuple[bool, dict]:
    if q.is_associative() and q.is_commutative():
        return True, {"kind": "abelian_group", "order": q.order}
    for x in range(1, q.order):
        ncl = normal_closure(q, x)
        if ncl.order == q.order:
            continue
        ok_sub, cert_sub = _solvable(ncl.induced_table())
        if not ok_sub:
            continue
        quo, _ = quotient(q, ncl)
        ok_quo, cert_quo = _solvable(quo)
        if not ok_quo:
            continue
        return True, {
            "kind": "extension",
            "order": q.order,
            "normal_members": [int(m) for m in ncl.members],
            "normal": cert_sub,
            "quotient": cert_quo,
        }
    return False, {"kind": "no_series", "order": q.order}


def is_solvable(q: LoopTable) -> SolvabilityCertificate:
    solvable, certificate = _solvable(q)
    return SolvabilityCertificate(solvable=solvable, certificate=certificate)


def p_loop_check(q: LoopTable, p: int) -> bool:
    """Evaluate both sides of "|Q| is a power of p iff every element order is".

    The two sides are computed independently and must agree; disagreement is
    reported as a violated theorem, not absorbed.
    """
    if not _is_prime(p):
        raise InvalidParameter(f"{p} is not prime")
    _require_commutative_a_loop(q)
    n = q.order
    while n % p == 0:
        n //= p
    order_side = n == 1
    orders = q.element_orders().copy()
    while True:
        reducible = orders % p == 0
        if not reducible.any():
            break
        orders[reducible] //= p
    element_side = bool((orders == 1).all())
    if order_side != element_side:
        raise TheoremViolation(
            f"|Q| power of {p} is {order_side} but element orders say {element_side}"
        )
    return order_side


def lagrange_audit(q: LoopTable, cap: int = SUBLOOP_CAP) -> dict:
    """Check that every enumerated subloop order divides the loop order."""
    subs = subloop_enumerate(q, cap)
    orders = sorted({s.order for s in subs})
    return {
        "subloop_count": len(subs),
        "orders": orders,
        "all_divide": all(q.order % o == 0 for o in orders),
    }


def cauchy_audit(q: LoopTable) -> dict:
    """Exhibit an element of order p for every prime p dividing the order."""
    orders = q.element_orders()
    witnesses = {}
    for p in _prime_factors(q.order):
        candidates = np.flatnonzero(orders % p == 0)
        if len(candidates) == 0:
            witnesses[p] = None
            continue
        x = int(candidates[0])
        elem = q.power(x, int(orders[x]) // p)
        if int(orders[elem]) != p:
            raise TheoremViolation(f"power of {x} does not have order {p}")
        witnesses[p] = elem
    return {
        "witnesses": witnesses,
        "complete": all(v is not None for v in witnesses.values()),
    }


def hall_sylow_audit(q: LoopTable, primes, cap: int = SUBLOOP_CAP) -> dict:
    """Report whether some subloop realizes the largest pi-divisor of |Q|.

    An empirical existence probe: absence of a find is reported as absence,
    never as a disproof.
    """
    primes = sorted(set(int(p) for p in primes))
    for p in primes:
        if not _is_prime(p):
            raise InvalidParameter(f"{p} is not prime")
    target = 1
    n = q.order
    for p in primes:
        while n % p == 0:
            n //= p
            target *= p
    subs = subloop_enumerate(q, cap)
    hit = next((s for s in subs if s.order == target), None)
    return {
        "pi": primes,
        "target_order": target,
        "found": hit is not None,
        "witness_members": None if hit is None else list(hit.members),
        "subloop_count": len(subs),
    }
