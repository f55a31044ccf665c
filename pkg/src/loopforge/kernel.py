"""Cayley-table kernel: validation, translations, powers, basic predicates.

Tables are numpy int arrays. Element i of a loop of order n is the integer i,
the identity is always element 0 (validate relabels if needed), and the value
table[x, y] is the product x*y. Left division x\\y is the unique z with
x*z = y; it is read off the argsort of row x.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import (
    InvalidParameter,
    NoIdentity,
    NotLatin,
    NotUniquely2Divisible,
)

Element = int

MAX_ORDER = 255


class LoopTable:
    """A finite loop of order n presented by its Cayley table.

    Instances are immutable; derived data (inverses, powers, predicate
    results) is memoised on the instance. Construct via validate().
    """

    __slots__ = ("order", "table", "ldiv_table", "_memo")

    def __init__(self, table: np.ndarray):
        table = np.ascontiguousarray(table, dtype=np.intp)
        table.setflags(write=False)
        self.order = table.shape[0]
        self.table = table
        # row x of ldiv_table is the inverse permutation of row x of table,
        # so ldiv_table[x, y] = x \ y
        ld = np.argsort(table, axis=1)
        ld.setflags(write=False)
        self.ldiv_table = ld
        self._memo = {}

    # -- identity on the table bytes, so equal tables compare equal --------

    def __eq__(self, other):
        if not isinstance(other, LoopTable):
            return NotImplemented
        return self.order == other.order and bool(
            np.array_equal(self.table, other.table)
        )

    def __hash__(self):
        return hash((self.order, self.table.tobytes()))

    def __repr__(self):
        return f"LoopTable(order={self.order})"

    # -- elementary operations ---------------------------------------------

    def mul(self, x: Element, y: Element) -> Element:
        return int(self.table[x, y])

    def ldiv(self, x: Element, y: Element) -> Element:
        """The unique z with x*z = y."""
        return int(self.ldiv_table[x, y])

    def left_translation(self, x: Element) -> np.ndarray:
        """L_x as a permutation array: y -> x*y."""
        return self.table[x]

    def division_perm(self, x: Element) -> np.ndarray:
        """D_x as a permutation array: y -> y\\x. An involution."""
        return self.ldiv_table[:, x]

    def inversion(self) -> np.ndarray:
        """J: x -> x\\e, the inversion permutation."""
        return self.ldiv_table[:, 0]

    def inverse(self, x: Element) -> Element:
        return int(self.ldiv_table[x, 0])

    # -- powers --------------------------------------------------------------

    def _orbit(self, x: Element) -> np.ndarray:
        """Powers e, x, x^2, ... up to the first repeat of e."""
        key = ("orbit", x)
        got = self._memo.get(key)
        if got is None:
            row = self.table[x]
            out = [0]
            p = int(row[0])
            while p != 0:
                out.append(p)
                p = int(row[p])
            got = np.array(out, dtype=np.intp)
            self._memo[key] = got
        return got

    def power(self, x: Element, k: int) -> Element:
        """x^k, defined as the identity pushed k times through L_x.

        Negative k iterates the inverse translation, which by periodicity
        of the orbit is the same as reducing k mod the element order.
        """
        orb = self._orbit(x)
        return int(orb[k % len(orb)])

    def element_order(self, x: Element) -> int:
        """Least k > 0 with x^k = e."""
        return len(self._orbit(x))

    def element_orders(self) -> np.ndarray:
        got = self._memo.get("orders")
        if got is None:
            got = np.array([self.element_order(x) for x in range(self.order)])
            got.setflags(write=False)
            self._memo["orders"] = got
        return got

    def exponent(self) -> int:
        """lcm of the element orders."""
        got = self._memo.get("exponent")
        if got is None:
            got = math.lcm(*self.element_orders().tolist())
            self._memo["exponent"] = got
        return got

    def power_table(self, bound: int) -> np.ndarray:
        """Matrix P with P[x, e + bound] = x^e for -bound <= e <= bound."""
        key = ("pow_table", bound)
        got = self._memo.get(key)
        if got is None:
            got = np.empty((self.order, 2 * bound + 1), dtype=np.intp)
            for x in range(self.order):
                orb = self._orbit(x)
                exps = np.arange(-bound, bound + 1) % len(orb)
                got[x] = orb[exps]
            got.setflags(write=False)
            self._memo[key] = got
        return got

    # -- predicates ----------------------------------------------------------

    def is_commutative(self) -> bool:
        got = self._memo.get("commutative")
        if got is None:
            got = bool(np.array_equal(self.table, self.table.T))
            self._memo["commutative"] = got
        return got

    def is_associative(self) -> bool:
        got = self._memo.get("associative")
        if got is None:
            t = self.table
            # (xy)z vs x(yz), both as (x, y, z) tensors
            got = bool(np.array_equal(t[t], t[:, t].transpose(1, 0, 2)))
            self._memo["associative"] = got
        return got

    def is_power_associative(self) -> bool:
        """x^m * x^n = x^(m+n) for all x and 0 <= m, n < 2*order(x)."""
        got = self._memo.get("power_associative")
        if got is None:
            got = True
            for x in range(self.order):
                orb = self._orbit(x)
                d = len(orb)
                idx = np.arange(2 * d) % d
                pows = orb[idx]
                want = orb[(idx[:, None] + idx[None, :]) % d]
                if not np.array_equal(self.table[np.ix_(pows, pows)], want):
                    got = False
                    break
            self._memo["power_associative"] = got
        return got

    # -- squaring ------------------------------------------------------------

    def squaring_map(self) -> np.ndarray:
        """The map x -> x^2 as an array (not necessarily a permutation)."""
        got = self._memo.get("squares")
        if got is None:
            got = np.ascontiguousarray(self.table.diagonal())
            got.setflags(write=False)
            self._memo["squares"] = got
        return got

    def is_uniquely_2_divisible(self) -> bool:
        """True iff squaring is a bijection; for finite commutative loops
        this is equivalent to the order being odd."""
        sq = self.squaring_map()
        return bool(np.array_equal(np.sort(sq), np.arange(self.order)))

    def sqrt_map(self) -> np.ndarray:
        """Inverse of the squaring permutation."""
        got = self._memo.get("sqrts")
        if got is None:
            if not self.is_uniquely_2_divisible():
                raise NotUniquely2Divisible(
                    f"squaring is not a bijection on a loop of order {self.order}"
                )
            got = np.argsort(self.squaring_map())
            got.setflags(write=False)
            self._memo["sqrts"] = got
        return got

    def sqrt(self, x: Element) -> Element:
        """The unique y with y^2 = x."""
        return int(self.sqrt_map()[x])

    # -- subsets -------------------------------------------------------------

    def is_closed(self, members) -> bool:
        """Closure of a member set under mul and left division."""
        idx = np.asarray(sorted(members), dtype=np.intp)
        if len(idx) == 0:
            return False
        mask = np.zeros(self.order, dtype=bool)
        mask[idx] = True
        sub = np.ix_(idx, idx)
        return bool(mask[self.table[sub]].all() and mask[self.ldiv_table[sub]].all())

    def closure(self, seed) -> tuple:
        """Smallest member set containing the identity and the seed that is
        closed under mul and left division. Returns a sorted tuple."""
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        for s in seed:
            mask[s] = True
        while True:
            idx = np.flatnonzero(mask)
            sub = np.ix_(idx, idx)
            new = mask.copy()
            new[self.table[sub].ravel()] = True
            new[self.ldiv_table[sub].ravel()] = True
            if np.array_equal(new, mask):
                return tuple(int(i) for i in idx)
            mask = new


def _latin_failure(arr: np.ndarray, what: str):
    """Locate the first row/column that repeats a symbol."""
    n = arr.shape[0]
    want = np.arange(n)
    for i in range(n):
        line = arr[i] if what == "row" else arr[:, i]
        if not np.array_equal(np.sort(line), want):
            counts = np.bincount(line, minlength=n)
            sym = int(np.argmax(counts > 1)) if (counts > 1).any() else None
            detail = f" (repeats symbol {sym})" if sym is not None else ""
            raise NotLatin(f"{what} {i} is not a permutation of 0..{n - 1}{detail}")


def validate(raw, identity_hint: Element | None = None) -> LoopTable:
    """Check a raw square table and return a LoopTable with identity 0.

    The table must be Latin (every row and column a permutation of 0..n-1)
    and have a two-sided identity element. If the identity is not element 0
    the table is relabelled by the transposition swapping it with 0, which
    preserves the isomorphism class.
    """
    arr = np.asarray(raw)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise InvalidParameter(f"expected a nonempty square table, got shape {arr.shape}")
    n = arr.shape[0]
    if n > MAX_ORDER:
        raise InvalidParameter(f"order {n} exceeds the supported maximum {MAX_ORDER}")
    if not np.issubdtype(arr.dtype, np.integer):
        raise InvalidParameter("table entries must be integers")
    if arr.min() < 0 or arr.max() >= n:
        raise InvalidParameter(f"entries must lie in 0..{n - 1}")
    arr = arr.astype(np.intp)

    _latin_failure(arr, "row")
    _latin_failure(arr, "column")

    ident = np.arange(n)

    def is_identity(e):
        return np.array_equal(arr[e], ident) and np.array_equal(arr[:, e], ident)

    e = None
    if identity_hint is not None and 0 <= identity_hint < n and is_identity(identity_hint):
        e = identity_hint
    else:
        for cand in range(n):
            if is_identity(cand):
                e = cand
                break
    if e is None:
        raise NoIdentity("table has no two-sided identity element")

    if e != 0:
        sigma = np.arange(n)
        sigma[0], sigma[e] = e, 0
        arr = sigma[arr[np.ix_(sigma, sigma)]]
    return LoopTable(arr)
