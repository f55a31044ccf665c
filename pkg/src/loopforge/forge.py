"""Constructors for the test corpus and bounded search for small commutative
automorphic loops.

The corpus is machine-verified: gen_cml81 refuses to return a table that does
not pass its gate, and search results are filtered through the full
automorphism check and deduplicated by canonical form, so nothing enters the
corpus on trust.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, SearchTimeout, TheoremViolation
from .kernel import MAX_ORDER, LoopTable, validate
from .automorphic import is_automorphic_loop, is_moufang


def _require_prime(p: int) -> None:
    if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise InvalidParameter(f"{p} is not prime")


def gen_cyclic(n: int) -> LoopTable:
    """Cyclic group of order n."""
    if not 1 <= n <= MAX_ORDER:
        raise InvalidParameter(f"order {n} outside 1..{MAX_ORDER}")
    return validate(np.add.outer(np.arange(n), np.arange(n)) % n)


def gen_elem_abelian(p: int, k: int) -> LoopTable:
    """Elementary abelian group of order p^k, elements as base-p digit strings."""
    _require_prime(p)
    if k < 0 or p**k > MAX_ORDER:
        raise InvalidParameter(f"p^k = {p}^{k} outside 1..{MAX_ORDER}")
    n = p**k
    weights = p ** np.arange(k)
    digits = (np.arange(n)[:, None] // weights) % p
    table = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
    return validate(table.reshape(n, n))


def gen_product(a: LoopTable, b: LoopTable) -> LoopTable:
    """Direct product, elements indexed as x_a * |b| + x_b."""
    nb = b.order
    n = a.order * nb
    if n > MAX_ORDER:
        raise InvalidParameter(f"product order {n} exceeds {MAX_ORDER}")
    table = (
        a.table[:, None, :, None] * nb + b.table[None, :, None, :]
    ).reshape(n, n)
    return validate(table)


#: named cocycle families for the CLI: name -> f(a, c) on Z_p x Z_p
COCYCLES = {
    "zero": lambda a, c, p: 0,
    "quartic": lambda a, c, p: (a * a * c * c) % p,
}


def cocycle_table(p: int, name: str) -> np.ndarray:
    if name not in COCYCLES:
        raise InvalidParameter(f"unknown cocycle {name!r}; have {sorted(COCYCLES)}")
    f = COCYCLES[name]
    return np.array([[f(a, c, p) for c in range(p)] for a in range(p)])


def gen_cocycle(p: int, f: np.ndarray) -> LoopTable:
    """Central extension of Z_p by Z_p: (a,b)(c,d) = (a+c, b+d+f(a,c)).

    f must be a symmetric p x p table over Z_p with zero first column, which
    makes the result a commutative loop with identity (0,0). Quadratic f
    gives groups; the quartic cocycle at p = 3 gives the order-9 commutative
    loop that is not automorphic.
    """
    _require_prime(p)
    f = np.asarray(f)
    if f.shape != (p, p) or not np.issubdtype(f.dtype, np.integer):
        raise InvalidParameter(f"cocycle must be an integer {p}x{p} table")
    if (f < 0).any() or (f >= p).any():
        raise InvalidParameter("cocycle values must lie in 0..p-1")
    if not np.array_equal(f, f.T):
        raise InvalidParameter("cocycle must be symmetric")
    if f[:, 0].any():
        raise InvalidParameter("cocycle must vanish on the identity column")
    a = np.arange(p)
    first = (a[:, None] + a[None, :]) % p  # a + c
    table = (
        first[:, None, :, None] * p
        + (a[None, :, None, None] + a[None, None, None, :] + f[:, None, :, None]) % p
    ).reshape(p * p, p * p)
    return validate(table)


def gen_q9() -> LoopTable:
    """The canonical negative control: order 9, commutative, not automorphic."""
    return gen_cocycle(3, cocycle_table(3, "quartic"))


_CML81_CACHE: list[LoopTable] = []


def gen_cml81() -> LoopTable:
    """Commutative Moufang loop of order 81, exponent 3, nonassociative.

    Quadruples over Z_3 with a skew term on the last coordinate:
    (x1..x4)(y1..y4) = (x1+y1, x2+y2, x3+y3, x4+y4+(x1-y1)(x2 y3 - x3 y2)).
    The constructor verifies the whole advertised profile before returning;
    a failure is a build defect, not an input error.
    """
    if _CML81_CACHE:
        return _CML81_CACHE[0]
    rng = np.arange(81)
    digits = np.stack([(rng // 27) % 3, (rng // 9) % 3, (rng // 3) % 3, rng % 3], axis=1)
    x = digits[:, None, :]
    y = digits[None, :, :]
    skew = (x[..., 0] - y[..., 0]) * (x[..., 1] * y[..., 2] - x[..., 2] * y[..., 1])
    coords = (x + y) % 3
    last = (coords[..., 3] + skew) % 3
    table = coords[..., 0] * 27 + coords[..., 1] * 9 + coords[..., 2] * 3 + last
    q = validate(table)
    checks = {
        "order 81": q.order == 81,
        "commutative": q.is_commutative(),
        "exponent 3": q.exponent() == 3,
        "moufang": is_moufang(q),
        "automorphic": is_automorphic_loop(q)[0],
        "nonassociative": not q.is_associative(),
    }
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise TheoremViolation(f"order-81 construction failed its gate: {failed}")
    _CML81_CACHE.append(q)
    return q


FANO_LINES = ((1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6))


def gen_steiner_fano() -> LoopTable:
    """Steiner loop of the Fano plane: x*y = third point of the line, x*x = 0.

    With these lines each triple is {a, b, a xor b}, so the table coincides
    with the elementary abelian group of order 8: it is associative and
    automorphic, and serves as a positive exponent-2 control.
    """
    table = np.zeros((8, 8), dtype=np.int64)
    table[0] = table[:, 0] = np.arange(8)
    for a, b, c in FANO_LINES:
        table[a, b] = table[b, a] = c
        table[a, c] = table[c, a] = b
        table[b, c] = table[c, b] = a
    return validate(table)


def relabel(q: LoopTable, sigma) -> LoopTable:
    """Apply a bijective relabeling; the identity is renormalized to 0."""
    sigma = np.asarray(sigma)
    n = q.order
    if sigma.shape != (n,) or not np.array_equal(np.sort(sigma), np.arange(n)):
        raise InvalidParameter("relabeling must be a bijection on the elements")
    inv = np.empty(n, dtype=np.int64)
    inv[sigma] = np.arange(n)
    return validate(sigma[q.table[np.ix_(inv, inv)]])


def canonical_form(q: LoopTable) -> LoopTable:
    """Lexicographically least relabeling of the table that fixes element 0.

    Branch and bound over label assignments: scanning the relabeled table in
    row-major order, a label is branched over the moment it is first needed
    for a row or column, fresh values are forced onto the smallest unused
    label, and any prefix exceeding the best table so far is abandoned.
    """
    cached = q._memo.get("canonical")
    if cached is not None:
        return cached
    n = q.order
    t = q.table
    if n == 1:
        q._memo["canonical"] = q
        return q
    best: np.ndarray | None = None
    cur = np.empty(n * n, dtype=np.int64)
    cur[:n] = np.arange(n)
    new_to_old = np.full(n, -1, dtype=np.int64)
    old_to_new = np.full(n, -1, dtype=np.int64)
    new_to_old[0] = 0
    old_to_new[0] = 0

    def assign(label: int, old: int, log: list) -> None:
        new_to_old[label] = old
        old_to_new[old] = label
        log.append((label, old))

    def fresh_label() -> int:
        for l in range(1, n):
            if new_to_old[l] < 0:
                return l
        raise AssertionError("no free label")

    def scan(pos: int, strict: bool) -> None:
        nonlocal best
        log: list = []
        try:
            while pos < n * n:
                i, j = divmod(pos, n)
                target = i if new_to_old[i] < 0 else (j if new_to_old[j] < 0 else -1)
                if target >= 0:
                    # the label is needed for the first time: branch over the
                    # unassigned elements, cheapest immediate entry first
                    options = []
                    for old in range(1, n):
                        if old_to_new[old] >= 0:
                            continue
                        if target == j and new_to_old[i] >= 0:
                            v = t[new_to_old[i], old]
                            lab = old_to_new[v]
                            key = lab if lab >= 0 else (j if v == old else n)
                        else:
                            key = old
                        options.append((key, old))
                    options.sort()
                    best_at_entry = best
                    for _, old in options:
                        new_to_old[target] = old
                        old_to_new[old] = target
                        # a best found by an earlier sibling shares this
                        # prefix, so strictness cannot be carried past it
                        scan(pos, strict and best is best_at_entry)
                        new_to_old[target] = -1
                        old_to_new[old] = -1
                    return
                v = t[new_to_old[i], new_to_old[j]]
                lab = old_to_new[v]
                if lab < 0:
                    lab = fresh_label()
                    assign(lab, v, log)
                cur[pos] = lab
                if not strict and best is not None:
                    if lab > best[pos]:
                        return
                    if lab < best[pos]:
                        strict = True
                pos += 1
            if best is None or strict:
                best = cur.copy()
        finally:
            for lab, old in log:
                new_to_old[lab] = -1
                old_to_new[old] = -1

    scan(n, False)
    assert best is not None
    canon = validate(best.reshape(n, n), identity_hint=0)
    q._memo["canonical"] = canon
    return canon


def are_isomorphic(a: LoopTable, b: LoopTable) -> bool:
    """Decide isomorphism by invariants first, canonical forms as the last word."""
    if a.order != b.order:
        raise InvalidParameter("loops must have equal order")
    if a == b:
        return True
    if a.is_commutative() != b.is_commutative():
        return False
    if a.is_associative() != b.is_associative():
        return False
    if sorted(a.element_orders()) != sorted(b.element_orders()):
        return False
    return canonical_form(a) == canonical_form(b)


@dataclass(frozen=True)
class SearchSpec:
    """Parameters for the bounded search over commutative automorphic loops.

    Exhaustive mode enumerates every isomorphism class at the given order
    (allowed only up to order 8); randomized mode draws seeded restarts with
    shuffled value orders and reports whatever it finds within the budget.
    """

    order: int
    require_exponent2: bool = False
    require_nonassociative: bool = False
    limit: int | None = None
    mode: str = "exhaustive"
    seed: int | None = None
    max_nodes: int = 2_000_000
    restarts: int = 8


def _al_band_consistent(partial: np.ndarray, band: int, n: int) -> bool:
    """Sound prune: automorphic-inner-map instances fully determined by the
    filled rows 0..band must already be homomorphic. Unknown cells never
    prune."""
    # rows 0..band are complete, and by symmetry so are columns 0..band;
    # a cell is known exactly when one of its indices is within the band
    pldiv = np.full((n, n), -1, dtype=np.int64)
    for row in range(band + 1):
        pldiv[row, partial[row]] = np.arange(n)
    in_band = np.arange(n) <= band
    pair_known = in_band[:, None] | in_band[None, :]
    for x in range(band + 1):
        through_x = partial[x]  # x*u for every u
        for y in range(band + 1):
            anchor = partial[y, x]
            if anchor > band:
                continue
            inner = pldiv[anchor, partial[y, through_x]]  # u -> u L_{x,y}
            lhs = inner[partial]
            rhs = partial[inner[:, None], inner[None, :]]
            rhs_known = in_band[inner][:, None] | in_band[inner][None, :]
            bad = pair_known & rhs_known & (lhs != rhs)
            if bad.any():
                return False
    return True


def _search_tables(spec: SearchSpec, rng) -> list[np.ndarray]:
    """Backtracking over symmetric unital Latin squares with the AL prune."""
    n = spec.order
    partial = np.full((n, n), -1, dtype=np.int64)
    partial[0] = np.arange(n)
    partial[:, 0] = np.arange(n)
    row_used = [1 << r for r in range(n)]
    row_used[0] = (1 << n) - 1
    if spec.require_exponent2:
        for r in range(1, n):
            partial[r, r] = 0
            row_used[r] |= 1
    cells = [
        (r, c)
        for r in range(1, n)
        for c in range(r, n)
        if partial[r, c] < 0
    ]
    row_ends = {max(i for i, (rr, _) in enumerate(cells) if rr == r): r
                for r in {rc[0] for rc in cells}}
    full = (1 << n) - 1
    out: list[np.ndarray] = []
    nodes = 0

    def fill(k: int) -> bool:
        nonlocal nodes
        if k == len(cells):
            out.append(partial.copy())
            return spec.limit is not None and len(out) >= spec.limit
        r, c = cells[k]
        free = full & ~(row_used[r] | row_used[c])
        values = []
        while free:
            v = (free & -free).bit_length() - 1
            values.append(v)
            free &= free - 1
        if rng is not None:
            rng.shuffle(values)
        for v in values:
            nodes += 1
            if nodes > spec.max_nodes:
                raise SearchTimeout(f"node budget {spec.max_nodes} exhausted")
            bit = 1 << v
            partial[r, c] = partial[c, r] = v
            row_used[r] |= bit
            if c != r:
                row_used[c] |= bit
            band_done = row_ends.get(k)
            if band_done is None or _al_band_consistent(partial, band_done, n):
                if fill(k + 1):
                    return True
            partial[r, c] = partial[c, r] = -1
            row_used[r] &= ~bit
            if c != r:
                row_used[c] &= ~bit
        return False

    try:
        fill(0)
    except SearchTimeout:
        if rng is None:
            raise  # exhaustive mode promises completeness
    return out


def search(spec: SearchSpec) -> list[LoopTable]:
    """Find commutative automorphic loops matching the spec.

    Returns one canonical representative per isomorphism class found,
    sorted by table bytes. Exhaustive mode is complete; randomized mode
    reports finds only and proves nothing by absence.
    """
    n = spec.order
    if not 1 <= n <= MAX_ORDER:
        raise InvalidParameter(f"order {n} outside 1..{MAX_ORDER}")
    if spec.mode not in ("exhaustive", "randomized"):
        raise InvalidParameter(f"unknown mode {spec.mode!r}")
    if spec.mode == "exhaustive" and n > 8:
        raise InvalidParameter("exhaustive search is limited to order 8")
    if spec.mode == "randomized" and spec.seed is None:
        raise InvalidParameter("randomized search requires an explicit seed")
    if spec.limit is not None and spec.limit < 1:
        raise InvalidParameter("limit must be positive")
    if spec.require_exponent2 and n > 1 and n % 2:
        return []

    batches = []
    if spec.mode == "exhaustive":
        batches.append(_search_tables(spec, None))
    else:
        for attempt in range(spec.restarts):
            rng = np.random.default_rng((spec.seed, attempt))
            batches.append(_search_tables(spec, rng))

    seen: dict[LoopTable, LoopTable] = {}
    for batch in batches:
        for raw in batch:
            q = validate(raw)
            if not is_automorphic_loop(q)[0]:
                continue
            if spec.require_nonassociative and q.is_associative():
                continue
            canon = canonical_form(q)
            seen.setdefault(canon, canon)
    found = sorted(seen, key=lambda c: c.table.tobytes())
    if spec.limit is not None:
        found = found[: spec.limit]
    return found
