"""Permutation groups on 0..n-1 via a deterministic stabilizer chain.

Permutations are numpy arrays mapping i -> p[i]. Composition is read left
to right (compose(p, q) applies p first), matching the postfix convention
x L_a L_b used throughout: translations act on the right of points.

The chain is built with the classic base-and-transversal method; base
points are chosen greedily as the lowest-index point moved by some
generator that fixes the base so far, so runs are reproducible. Element
enumeration is never done implicitly; see PermGroup.elements.
"""

from __future__ import annotations

import numpy as np

from .errors import CapExceeded, DegreeMismatch, InvalidParameter, NotCommutative
from .kernel import LoopTable


def identity_perm(n: int) -> np.ndarray:
    return np.arange(n, dtype=np.intp)


def compose(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Apply p, then q."""
    if len(p) != len(q):
        raise DegreeMismatch(f"cannot compose degrees {len(p)} and {len(q)}")
    return q[p]


def inverse(p: np.ndarray) -> np.ndarray:
    inv = np.empty_like(p)
    inv[p] = np.arange(len(p), dtype=np.intp)
    return inv


def is_identity(p: np.ndarray) -> bool:
    return bool(np.array_equal(p, np.arange(len(p))))


def perm_from(seq) -> np.ndarray:
    """Check bijectivity and return the permutation as an array."""
    p = np.asarray(seq, dtype=np.intp)
    if p.ndim != 1 or not np.array_equal(np.sort(p), np.arange(len(p))):
        raise InvalidParameter("sequence is not a permutation of 0..n-1")
    return p


def _min_moved(p: np.ndarray) -> int:
    moved = np.flatnonzero(p != np.arange(len(p)))
    return int(moved[0])


class PermGroup:
    """Group generated by permutations, with order and membership answered
    exactly from a stabilizer chain."""

    def __init__(self, generators, degree=None, base_prefix=()):
        gens = [np.asarray(g, dtype=np.intp) for g in generators]
        if degree is None:
            if not gens:
                raise InvalidParameter("degree required when there are no generators")
            degree = len(gens[0])
        for g in gens:
            if len(g) != degree:
                raise DegreeMismatch(
                    f"generator degree {len(g)} does not match {degree}"
                )
        self.degree = degree
        seen = set()
        self.generators = []
        for g in gens:
            key = g.tobytes()
            if key not in seen and not is_identity(g):
                seen.add(key)
                self.generators.append(g)
        self._build(base_prefix)

    # -- chain construction --------------------------------------------------

    def _build(self, base_prefix):
        base = [int(b) for b in base_prefix]
        strong = list(self.generators)
        for g in strong:
            if all(g[b] == b for b in base):
                base.append(_min_moved(g))
        # lvl_gens[i]: indices of strong generators fixing base[0..i-1]
        lvl_gens = [
            [k for k, g in enumerate(strong) if all(g[b] == b for b in base[:i])]
            for i in range(len(base))
        ]
        orbits = [None] * len(base)

        def recompute(i):
            orbits[i] = self._orbit_transversal(
                base[i], [strong[k] for k in lvl_gens[i]]
            )

        for i in range(len(base)):
            recompute(i)

        def strip(h, lo):
            for lev in range(lo, len(base)):
                p = int(h[base[lev]])
                u = orbits[lev].get(p)
                if u is None:
                    return h, lev
                h = compose(h, inverse(u))
            return h, len(base)

        i = len(base) - 1
        while i >= 0:
            restart = False
            orb = orbits[i]
            for p in sorted(orb):
                u_p = orb[p]
                for k in lvl_gens[i]:
                    g = strong[k]
                    q = int(g[p])
                    s = compose(compose(u_p, g), inverse(orb[q]))
                    if is_identity(s):
                        continue
                    residue, j = strip(s, i + 1)
                    if is_identity(residue):
                        continue
                    strong.append(residue)
                    new_k = len(strong) - 1
                    if j == len(base):
                        base.append(_min_moved(residue))
                        lvl_gens.append([])
                        orbits.append(None)
                    for lev in range(i + 1, j + 1):
                        lvl_gens[lev].append(new_k)
                        recompute(lev)
                    i = j
                    restart = True
                    break
                if restart:
                    break
            if not restart:
                i -= 1

        self._base = base
        self._strong = strong
        self._lvl_gens = lvl_gens
        self._orbits = orbits

    def _orbit_transversal(self, point, gens):
        """BFS orbit of point; transversal[p] maps point to p."""
        trans = {point: identity_perm(self.degree)}
        queue = [point]
        while queue:
            nxt = []
            for p in queue:
                u = trans[p]
                for g in gens:
                    q = int(g[p])
                    if q not in trans:
                        trans[q] = compose(u, g)
                        nxt.append(q)
            queue = nxt
        return trans

    # -- queries ---------------------------------------------------------------

    def order(self) -> int:
        n = 1
        for orb in self._orbits:
            n *= len(orb)
        return n

    def contains(self, p) -> bool:
        p = np.asarray(p, dtype=np.intp)
        if len(p) != self.degree:
            raise DegreeMismatch(
                f"permutation degree {len(p)} does not match group degree {self.degree}"
            )
        h = p
        for lev in range(len(self._base)):
            q = int(h[self._base[lev]])
            u = self._orbits[lev].get(q)
            if u is None:
                return False
            h = compose(h, inverse(u))
        return is_identity(h)

    def point_stabilizer(self, point: int) -> "PermGroup":
        """Subgroup fixing the given point."""
        if not (0 <= point < self.degree):
            raise InvalidParameter(f"point {point} out of range")
        if not self._base or self._base[0] != point:
            if all(int(g[point]) == point for g in self.generators):
                return self
            return PermGroup(self.generators, self.degree, base_prefix=(point,))\
                .point_stabilizer(point)
        gens = [g for g in self._strong if int(g[point]) == point]
        return PermGroup(gens, self.degree, base_prefix=tuple(self._base[1:]))

    def elements(self, cap: int = 10**6) -> list:
        """Explicit closure, BFS from the identity. Only for small groups;
        raises CapExceeded beyond the cap."""
        out = {identity_perm(self.degree).tobytes(): identity_perm(self.degree)}
        queue = [identity_perm(self.degree)]
        while queue:
            nxt = []
            for p in queue:
                for g in self.generators:
                    q = compose(p, g)
                    key = q.tobytes()
                    if key not in out:
                        if len(out) >= cap:
                            raise CapExceeded(f"group closure exceeded cap {cap}")
                        out[key] = q
                        nxt.append(q)
            queue = nxt
        return list(out.values())


def generate(generators, degree=None) -> PermGroup:
    """Group generated by the given permutations."""
    return PermGroup(generators, degree=degree)


def subgroup_equals(a: PermGroup, b: PermGroup) -> bool:
    """Mutual containment of generators plus equal order."""
    if a.degree != b.degree:
        raise DegreeMismatch(f"degrees {a.degree} and {b.degree} differ")
    if a.order() != b.order():
        return False
    return all(b.contains(g) for g in a.generators) and all(
        a.contains(g) for g in b.generators
    )


# -- loop-derived groups --------------------------------------------------------


def mlt_group(q: LoopTable) -> PermGroup:
    """Multiplication group, generated by all translations.

    For commutative tables the right translations duplicate the left ones
    and are deduped away. The base is forced to start at the identity
    element so the point stabilizer of 0 falls out of the same chain.
    """
    got = q._memo.get("mlt_group")
    if got is None:
        gens = [q.table[x] for x in range(q.order)]
        gens += [q.table[:, x] for x in range(q.order)]
        got = PermGroup(gens, q.order, base_prefix=(0,))
        q._memo["mlt_group"] = got
    return got


def inn_group(q: LoopTable) -> PermGroup:
    """Inner mapping group: the stabilizer of the identity inside Mlt."""
    got = q._memo.get("inn_group")
    if got is None:
        got = mlt_group(q).point_stabilizer(0)
        q._memo["inn_group"] = got
    return got


def inner_tensor(q: LoopTable) -> np.ndarray:
    """All inner generators at once: tensor I with I[x, y] = L_{x,y} where
    u L_{x,y} = (y(xu)) divided on the left by yx. Each row fixes 0."""
    got = q._memo.get("inner_tensor")
    if got is None:
        t, ld = q.table, q.ldiv_table
        b = t[:, t]  # b[y, x, u] = y (xu)
        got = ld[t[:, :, None], b].transpose(1, 0, 2)
        got.setflags(write=False)
        q._memo["inner_tensor"] = got
    return got


def inner_generators(q: LoopTable) -> list:
    """The maps L_{x,y} = L_x L_y L_{yx}^-1 in lex order of (x, y).

    They generate Inn(Q) when Q is commutative, which is the only case
    this library leans on; requiring commutativity keeps that honest.
    """
    if not q.is_commutative():
        raise NotCommutative("inner generators L_{x,y} need a commutative table")
    it = inner_tensor(q)
    n = q.order
    return [(x, y, it[x, y]) for x in range(n) for y in range(n)]
