"""A-loop decision procedure, identity registry, and variety predicates.

The registry stores each law as an expression pair over kernel operations,
so an entry is data, not code. Element expressions are nested tuples:

    "x"                   variable
    3                     constant element
    ("mul", a, b)         a * b
    ("ldiv", a, b)        a \\ b
    ("inv", a)            a^-1
    ("pow", a, e)         a^e, e an int, an exponent variable, ("neg", e)
                          or ("two_to", v) for 2^v
    ("nlp", a, b)         the derived operation (ab\\a * ba\\b)^-1
    ("app", a, steps)     permutation chain applied to a, postfix order

Chain steps: ("L", x), ("Linv", x), ("D", x), ("J",), ("Linn", x, y) for
L_x L_y L_{yx}^-1, ("Linninv", x, y), ("P", x) for L_x L_{x^-1}^-1,
("Pinv", x), ("S", x) for y -> x nlp y, and ("iter", step, v) applying a
step |v| times (inverted when v < 0).

Permutation-valued laws compare both sides pointwise; the evaluation point
is an extra grid axis, not a quantified variable, so it does not count
toward arity. Laws quantified over four variables (elements plus exponent
symbols) check every tuple for order <= 24 and fall back to a seeded
stratified sample of at least a million tuples above that, unless full
checking is forced.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    HypothesisNotMet,
    InvalidParameter,
    NotAutomorphism,
    NotCommutative,
    TheoremViolation,
)
from .kernel import LoopTable
from .permgroups import inner_tensor

_CELL_LIMIT = 1 << 22  # grid cells evaluated in one numpy pass


# -- automorphisms -----------------------------------------------------------


def is_automorphism(q: LoopTable, phi) -> bool:
    """phi fixes 0 and phi(x*y) = phi(x)*phi(y) for all x, y."""
    phi = np.asarray(phi, dtype=np.intp)
    if len(phi) != q.order:
        return False
    if phi[0] != 0:
        return False
    t = q.table
    return bool(np.array_equal(phi[t], t[np.ix_(phi, phi)]))


def is_automorphic_loop(q: LoopTable):
    """Decide whether every inner generator L_{x,y} is an automorphism.

    Returns (True, None) or (False, (x, y, u, v)) where the witness tuple
    violates (uv)L_{x,y} = uL_{x,y} * vL_{x,y}.
    """
    got = q._memo.get("a_loop")
    if got is not None:
        return got
    if not q.is_commutative():
        raise NotCommutative("A-loop check needs a commutative table")
    n = q.order
    t = q.table
    it = inner_tensor(q).reshape(n * n, n)
    witness = None
    step = max(1, _CELL_LIMIT // (n * n))
    for lo in range(0, n * n, step):
        phis = it[lo : lo + step]
        lhs = phis[:, t]  # phi(u*v)
        rhs = t[phis[:, :, None], phis[:, None, :]]  # phi(u)*phi(v)
        bad = lhs != rhs
        if bad.any():
            k, u, v = np.argwhere(bad)[0]
            pair = lo + int(k)
            witness = (pair // n, pair % n, int(u), int(v))
            break
    got = (witness is None, witness)
    q._memo["a_loop"] = got
    return got


def has_aip(q: LoopTable) -> bool:
    """(x*y)^-1 = x^-1 * y^-1 for all pairs."""
    j = q.inversion()
    return bool(np.array_equal(j[q.table], q.table[np.ix_(j, j)]))


def fix_set(q: LoopTable, phi) -> tuple:
    """Fixed points of an automorphism, asserted closed under mul and ldiv."""
    phi = np.asarray(phi, dtype=np.intp)
    if not is_automorphism(q, phi):
        raise NotAutomorphism("fix_set requires an automorphism")
    fixed = tuple(int(x) for x in np.flatnonzero(phi == np.arange(q.order)))
    if not q.is_closed(fixed):
        raise TheoremViolation("fixed points of an automorphism must form a subloop")
    return fixed


# -- variety predicates -------------------------------------------------------


def _bol_lhs(q: LoopTable):
    """[x, y, z] -> x(y(xz))"""
    t = q.table
    n = q.order
    inner = t[:, t].transpose(1, 0, 2)  # [x, y, z] -> y(xz)
    return t[np.arange(n)[:, None, None], inner]


def is_left_bol(q: LoopTable) -> bool:
    """x(y(xz)) = (x(yx))z for all x, y, z."""
    t = q.table
    n = q.order
    xyx = t[np.arange(n)[:, None], t.T]  # [x, y] -> x(yx)
    rhs = t[xyx[:, :, None], np.arange(n)[None, None, :]]
    return bool(np.array_equal(_bol_lhs(q), rhs))


def is_moufang(q: LoopTable) -> bool:
    """x(y(xz)) = ((xy)x)z for all x, y, z."""
    t = q.table
    n = q.order
    xy_x = t[t, np.arange(n)[:, None]]  # [x, y] -> (xy)x
    rhs = t[xy_x[:, :, None], np.arange(n)[None, None, :]]
    return bool(np.array_equal(_bol_lhs(q), rhs))


def is_bruck(q: LoopTable) -> bool:
    """Left Bol plus the automorphic inverse property."""
    return is_left_bol(q) and has_aip(q)


# -- identity registry --------------------------------------------------------


@dataclass(frozen=True)
class IdentityCase:
    """One registered law: expression pair(s) plus quantifier structure."""

    ident: str
    suite: str  # "core" or "exp2"
    law: str  # human-readable statement
    elem_vars: tuple
    equations: tuple  # ((lhs, rhs), ...), all must hold
    exp_vars: tuple = ()  # integer symbols ranging over [-maxorder, maxorder]
    pow2_vars: tuple = ()  # integer symbols n used as 2^n, small range
    perm: bool = False  # compare sides pointwise as permutations
    guard: tuple | None = None  # (lhs, rhs): tuple counts only when equal
    hypothesis: tuple | None = None  # (lhs, rhs): global premise over all tuples
    arity4: bool = False  # subject to the sampling rule

    @property
    def arity(self) -> int:
        return len(self.elem_vars) + len(self.exp_vars) + len(self.pow2_vars)


@dataclass(frozen=True)
class IdentityReport:
    ident: str
    status: str  # "holds" | "violated" | "hypothesis_failed"
    tuples_checked: int
    violations: tuple = ()
    hypothesis_witness: dict | None = None
    sampled: bool = False

    @property
    def holds(self) -> bool:
        return self.status == "holds"


def _case(ident, suite, law, ev, eqs, **kw):
    return IdentityCase(ident, suite, law, ev, eqs, **kw)


_LXY = ("Linn", "x", "y")

REGISTRY: dict[str, IdentityCase] = {
    c.ident: c
    for c in [
        _case(
            "AL", "core", "(uv) L[x,y] = u L[x,y] * v L[x,y]",
            ("x", "y", "u", "v"),
            ((("app", ("mul", "u", "v"), (_LXY,)),
              ("mul", ("app", "u", (_LXY,)), ("app", "v", (_LXY,)))),),
            arity4=True,
        ),
        _case(
            "fix-x", "core", "x^n L[y,x^m] = x^n",
            ("x", "y"),
            ((("app", ("pow", "x", "n"), (("Linn", "y", ("pow", "x", "m")),)),
              ("pow", "x", "n")),),
            exp_vars=("m", "n"),
        ),
        _case(
            "switch-mn", "core", "L[x^m] L[x^n] = L[x^n] L[x^m]",
            ("x",),
            ((("app", "_p", (("L", ("pow", "x", "m")), ("L", ("pow", "x", "n")))),
              ("app", "_p", (("L", ("pow", "x", "n")), ("L", ("pow", "x", "m"))))),),
            exp_vars=("m", "n"),
            perm=True,
        ),
        _case(
            "L-commute", "core", "L[x^n] L[y,x^m] = L[y,x^m] L[x^n]",
            ("x", "y"),
            ((("app", "_p", (("L", ("pow", "x", "n")), ("Linn", "y", ("pow", "x", "m")))),
              ("app", "_p", (("Linn", "y", ("pow", "x", "m")), ("L", ("pow", "x", "n"))))),),
            exp_vars=("m", "n"),
            perm=True,
        ),
        _case(
            "D-commute", "core", "D[x^n] L[y,x^m] = L[y,x^m] D[x^n]",
            ("x", "y"),
            ((("app", "_p", (("D", ("pow", "x", "n")), ("Linn", "y", ("pow", "x", "m")))),
              ("app", "_p", (("Linn", "y", ("pow", "x", "m")), ("D", ("pow", "x", "n"))))),),
            exp_vars=("m", "n"),
            perm=True,
        ),
        _case(
            "fix-y", "core", "y^n L[y,x] = (xy \\ x)^-n",
            ("x", "y"),
            ((("app", ("pow", "y", "n"), (("Linn", "y", "x"),)),
              ("pow", ("ldiv", ("mul", "x", "y"), "x"), ("neg", "n"))),),
            exp_vars=("n",),
        ),
        _case(
            "Omnipresent", "core", "x y^2 = (xy)(xy \\ x)^-1",
            ("x", "y"),
            ((("mul", "x", ("pow", "y", 2)),
              ("mul", ("mul", "x", "y"), ("inv", ("ldiv", ("mul", "x", "y"), "x")))),),
        ),
        _case(
            "AIP", "core", "(xy)^-1 = x^-1 y^-1",
            ("x", "y"),
            ((("inv", ("mul", "x", "y")),
              ("mul", ("inv", "x"), ("inv", "y"))),),
        ),
        _case(
            "aip-linn", "core", "L[x,y] = L[x^-1,y^-1]",
            ("x", "y"),
            ((("app", "_p", (_LXY,)),
              ("app", "_p", (("Linn", ("inv", "x"), ("inv", "y")),))),),
            perm=True,
        ),
        _case(
            "rewrite1", "core", "L[x,y] = L[x^-1 \\ y]^-1 L[x] L[y]",
            ("x", "y"),
            ((("app", "_p", (_LXY,)),
              ("app", "_p", (("Linv", ("ldiv", ("inv", "x"), "y")), ("L", "x"), ("L", "y")))),),
            perm=True,
        ),
        _case(
            "rewrite2", "core", "L[x,y] = L[y] L[x^-1 \\ y]^-1 L[x]",
            ("x", "y"),
            ((("app", "_p", (_LXY,)),
              ("app", "_p", (("L", "y"), ("Linv", ("ldiv", ("inv", "x"), "y")), ("L", "x")))),),
            perm=True,
        ),
        _case(
            "cute", "core", "L[x \\ y, x] = L[(y \\ x)^-1, x]",
            ("x", "y"),
            ((("app", "_p", (("Linn", ("ldiv", "x", "y"), "x"),)),
              ("app", "_p", (("Linn", ("inv", ("ldiv", "y", "x")), "x"),))),),
            perm=True,
        ),
        _case(
            # the subscript on the last factor is ((y \ x))^-1; without the
            # inversion the law already fails on Z_5
            "tripstar", "core",
            "L[(x \\ y)^-1 \\ x]^-1 L[x \\ y] = L[y]^-1 L[(y \\ x)^-1]",
            ("x", "y"),
            ((("app", "_p", (("Linv", ("ldiv", ("inv", ("ldiv", "x", "y")), "x")),
                             ("L", ("ldiv", "x", "y")))),
              ("app", "_p", (("Linv", "y"), ("L", ("inv", ("ldiv", "y", "x")))))),),
            perm=True,
        ),
        _case(
            "D-split", "core", "D[x^2] = D[x] J D[x]",
            ("x",),
            ((("app", "_p", (("D", ("pow", "x", 2)),)),
              ("app", "_p", (("D", "x"), ("J",), ("D", "x")))),),
            perm=True,
        ),
        _case(
            "D-split2", "core", "x^2 = (y D[x]) * (y^-1 D[x])",
            ("x", "y"),
            ((("pow", "x", 2),
              ("mul", ("app", "y", (("D", "x"),)), ("app", ("inv", "y"), (("D", "x"),)))),),
        ),
        _case(
            "D-split3", "core", "x = (y^-1 D[x^-1]) * (y D[x^2])",
            ("x", "y"),
            (("x",
              ("mul", ("app", ("inv", "y"), (("D", ("inv", "x")),)),
               ("app", "y", (("D", ("pow", "x", 2)),)))),),
        ),
        _case(
            "twist-tmp2", "core", "x^-1 P[xy] = x y^2",
            ("x", "y"),
            ((("app", ("inv", "x"), (("P", ("mul", "x", "y")),)),
              ("mul", "x", ("pow", "y", 2))),),
        ),
        _case(
            "twist-tmp", "core", "L[x^-1] P[xy] = P[y] L[x]",
            ("x", "y"),
            ((("app", "_p", (("L", ("inv", "x")), ("P", ("mul", "x", "y")))),
              ("app", "_p", (("P", "y"), ("L", "x")))),),
            perm=True,
        ),
        _case(
            "twisted", "core", "P[x] P[y] P[x] = P[y P[x]]",
            ("x", "y"),
            ((("app", "_p", (("P", "x"), ("P", "y"), ("P", "x"))),
              ("app", "_p", (("P", ("app", "y", (("P", "x"),))),))),),
            perm=True,
        ),
        _case(
            "power-alt", "core", "P[x]^n = P[x^n]",
            ("x",),
            ((("app", "_p", (("iter", ("P", "x"), "n"),)),
              ("app", "_p", (("P", ("pow", "x", "n")),))),),
            exp_vars=("n",),
            perm=True,
        ),
        _case(
            "P-commute", "core",
            "if y^2 P[x] = x^2 P[y] for all pairs then y^2 P[x] = x^2 y^2",
            ("x", "y"),
            ((("app", ("pow", "y", 2), (("P", "x"),)),
              ("mul", ("pow", "x", 2), ("pow", "y", 2))),),
            hypothesis=(("app", ("pow", "y", 2), (("P", "x"),)),
                        ("app", ("pow", "x", 2), (("P", "y"),))),
        ),
        _case(
            "perms4", "core", "x nlp y = x^2 * (x \\ (xy \\ x)^-1)",
            ("x", "y"),
            ((("nlp", "x", "y"),
              ("mul", ("pow", "x", 2),
               ("ldiv", "x", ("inv", ("ldiv", ("mul", "x", "y"), "x"))))),),
        ),
        _case(
            "strangecomm", "core", "x^-1 \\ (xy \\ x) = y \\ (yx \\ y)^-1",
            ("x", "y"),
            ((("ldiv", ("inv", "x"), ("ldiv", ("mul", "x", "y"), "x")),
              ("ldiv", "y", ("inv", ("ldiv", ("mul", "y", "x"), "y")))),),
        ),
        _case(
            "SquareRoot", "core", "x^2 y^2 = (x nlp y)^2",
            ("x", "y"),
            ((("mul", ("pow", "x", 2), ("pow", "y", 2)),
              ("pow", ("nlp", "x", "y"), 2)),),
        ),
        _case(
            "S-perm", "core", "S[x] = L[x] D[x] J L[x]^-1 L[x^2]",
            ("x",),
            ((("app", "_p", (("S", "x"),)),
              ("app", "_p", (("L", "x"), ("D", "x"), ("J",), ("Linv", "x"),
                             ("L", ("pow", "x", 2))))),),
            perm=True,
        ),
        _case(
            "S-commute", "core", "S[x^n] L[y,x^m] = L[y,x^m] S[x^n]",
            ("x", "y"),
            ((("app", "_p", (("S", ("pow", "x", "n")), ("Linn", "y", ("pow", "x", "m")))),
              ("app", "_p", (("Linn", "y", ("pow", "x", "m")), ("S", ("pow", "x", "n"))))),),
            exp_vars=("m", "n"),
            perm=True,
            arity4=True,
        ),
        _case(
            "weird-square", "core",
            "(x \\ (y \\ x))^2 \\ (y^-1 (y \\ x))^2 = (x \\ y)^-2",
            ("x", "y"),
            ((("ldiv", ("pow", ("ldiv", "x", ("ldiv", "y", "x")), 2),
               ("pow", ("mul", ("inv", "y"), ("ldiv", "y", "x")), 2)),
              ("pow", ("ldiv", "x", "y"), -2)),),
        ),
        _case(
            "key", "core", "if x^(2^n) = 1 then (xy)^(2^n) = y^(2^n)",
            ("x", "y"),
            ((("pow", ("mul", "x", "y"), ("two_to", "n")),
              ("pow", "y", ("two_to", "n"))),),
            pow2_vars=("n",),
            guard=(("pow", "x", ("two_to", "n")), 0),
        ),
        # exponent-2 suite
        _case(
            "steiner", "exp2", "S[x]^2 = id",
            ("x",),
            ((("app", "_p", (("S", "x"), ("S", "x"))),
              ("app", "_p", ())),),
            perm=True,
        ),
        _case(
            "move-em", "exp2", "S[x] = L[x] D[x] L[x]^-1 = L[x]^-1 D[x] L[x]",
            ("x",),
            ((("app", "_p", (("S", "x"),)),
              ("app", "_p", (("L", "x"), ("D", "x"), ("Linv", "x")))),
             (("app", "_p", (("L", "x"), ("D", "x"), ("Linv", "x"))),
              ("app", "_p", (("Linv", "x"), ("D", "x"), ("L", "x"))))),
            perm=True,
        ),
        _case(
            "box", "exp2", "y L[z \\ (x*zy), z] S[zy] = z L[y] L[x]^-1 D[y] L[x]",
            ("x", "y", "z"),
            ((("app", "y", (("Linn", ("ldiv", "z", ("mul", "x", ("mul", "z", "y"))), "z"),
                            ("S", ("mul", "z", "y")))),
              ("app", "z", (("L", "y"), ("Linv", "x"), ("D", "y"), ("L", "x")))),),
        ),
        _case(
            "star", "exp2", "u L[v \\ (w*uv), v] = u L[v] L[w]^-1 D[v] L[w]",
            ("u", "v", "w"),
            ((("app", "u", (("Linn", ("ldiv", "v", ("mul", "w", ("mul", "u", "v"))), "v"),)),
              ("app", "u", (("L", "v"), ("Linv", "w"), ("D", "v"), ("L", "w")))),),
        ),
        _case(
            "one51", "exp2", "u L[v \\ w]^-1 L[v] L[vw,u] = wu",
            ("u", "v", "w"),
            ((("app", "u", (("Linv", ("ldiv", "v", "w")), ("L", "v"),
                            ("Linn", ("mul", "v", "w"), "u"))),
              ("mul", "w", "u")),),
        ),
        _case(
            "two09", "exp2", "v L[w,u] S[uv] = v L[w,u] L[u]^-1 L[v]",
            ("u", "v", "w"),
            ((("app", "v", (("Linn", "w", "u"), ("S", ("mul", "u", "v")))),
              ("app", "v", (("Linn", "w", "u"), ("Linv", "u"), ("L", "v")))),),
        ),
        _case(
            "almost", "exp2", "L[x]^-1 D[y] L[x] = L[y]^-1 D[x] L[y] D[xy]",
            ("x", "y"),
            ((("app", "_p", (("Linv", "x"), ("D", "y"), ("L", "x"))),
              ("app", "_p", (("Linv", "y"), ("D", "x"), ("L", "y"), ("D", ("mul", "x", "y"))))),),
            perm=True,
        ),
        _case(
            "dagger", "exp2",
            "L[x]^-1 D[y] L[x] = L[xy]^-1 S[(xy) \\ x] L[xy]",
            ("x", "y"),
            ((("app", "_p", (("Linv", "x"), ("D", "y"), ("L", "x"))),
              ("app", "_p", (("Linv", ("mul", "x", "y")),
                             ("S", ("ldiv", ("mul", "x", "y"), "x")),
                             ("L", ("mul", "x", "y"))))),),
            perm=True,
        ),
    ]
}

CORE_SUITE = tuple(c.ident for c in REGISTRY.values() if c.suite == "core")
EXP2_SUITE = tuple(c.ident for c in REGISTRY.values() if c.suite == "exp2")


# -- expression evaluation ----------------------------------------------------


def _eval_exp(e, env) -> int:
    if isinstance(e, int):
        return e
    if isinstance(e, str):
        return env[e]
    if e[0] == "neg":
        return -_eval_exp(e[1], env)
    if e[0] == "two_to":
        return 2 ** _eval_exp(e[1], env)
    raise InvalidParameter(f"bad exponent expression {e!r}")


_STEP_INVERSE = {
    "L": "Linv", "Linv": "L", "D": "D", "J": "J",
    "P": "Pinv", "Pinv": "P", "Linn": "Linninv", "Linninv": "Linn",
}


def _apply_step(u, step, q, env, bound):
    t, ld = q.table, q.ldiv_table
    kind = step[0]
    if kind == "L":
        return t[_eval(step[1], q, env, bound), u]
    if kind == "Linv":
        return ld[_eval(step[1], q, env, bound), u]
    if kind == "D":
        return ld[u, _eval(step[1], q, env, bound)]
    if kind == "J":
        return q.inversion()[u]
    if kind == "Linn":
        x = _eval(step[1], q, env, bound)
        y = _eval(step[2], q, env, bound)
        return ld[t[y, x], t[y, t[x, u]]]
    if kind == "Linninv":
        x = _eval(step[1], q, env, bound)
        y = _eval(step[2], q, env, bound)
        return ld[x, ld[y, t[t[y, x], u]]]
    if kind == "P":
        x = _eval(step[1], q, env, bound)
        return ld[q.inversion()[x], t[x, u]]
    if kind == "Pinv":
        x = _eval(step[1], q, env, bound)
        return ld[x, t[q.inversion()[x], u]]
    if kind == "S":
        x = _eval(step[1], q, env, bound)
        return _nlp(q, x, u)
    if kind == "iter":
        count = _eval_exp(step[2], env)
        inner = step[1]
        if count < 0:
            inner = (_STEP_INVERSE[inner[0]],) + inner[1:]
            count = -count
        for _ in range(count):
            u = _apply_step(u, inner, q, env, bound)
        return u
    raise InvalidParameter(f"bad chain step {step!r}")


def _nlp(q, a, b):
    t, ld = q.table, q.ldiv_table
    ab = t[a, b]
    ba = t[b, a]
    return q.inversion()[t[ld[ab, a], ld[ba, b]]]


def _eval(expr, q, env, bound):
    """Evaluate an element expression to a broadcast numpy array."""
    if isinstance(expr, str):
        return env[expr]
    if isinstance(expr, (int, np.integer)):
        return np.intp(expr)
    op = expr[0]
    t, ld = q.table, q.ldiv_table
    if op == "mul":
        return t[_eval(expr[1], q, env, bound), _eval(expr[2], q, env, bound)]
    if op == "ldiv":
        return ld[_eval(expr[1], q, env, bound), _eval(expr[2], q, env, bound)]
    if op == "inv":
        return q.inversion()[_eval(expr[1], q, env, bound)]
    if op == "pow":
        k = _eval_exp(expr[2], env)
        return q.power_table(bound)[_eval(expr[1], q, env, bound), k + bound]
    if op == "nlp":
        return _nlp(q, _eval(expr[1], q, env, bound), _eval(expr[2], q, env, bound))
    if op == "app":
        u = _eval(expr[1], q, env, bound)
        for step in expr[2]:
            u = _apply_step(u, step, q, env, bound)
        return u
    raise InvalidParameter(f"bad element expression {expr!r}")


# -- checking engine ----------------------------------------------------------


def _require_ambient(q: LoopTable, suite: str):
    if not q.is_commutative():
        raise HypothesisNotMet("ambient hypothesis failed: table is not commutative")
    ok, wit = is_automorphic_loop(q)
    if not ok:
        raise HypothesisNotMet(
            f"ambient hypothesis failed: not an A-loop, witness (x,y,u,v)={wit}"
        )
    if suite == "exp2" and not bool((q.squaring_map() == 0).all()):
        raise HypothesisNotMet("ambient hypothesis failed: loop is not of exponent 2")


def _exp_setup(q: LoopTable, case: IdentityCase):
    """Exponent variable ranges and the power-table bound covering them."""
    m = int(q.element_orders().max())
    ranges = {v: range(-m, m + 1) for v in case.exp_vars}
    bound = max(2, m)
    if case.pow2_vars:
        nmax = m.bit_length() + 1
        ranges.update({v: range(0, nmax + 1) for v in case.pow2_vars})
        bound = max(bound, 2 ** nmax)
    return ranges, bound


def _grid_env(n, names):
    """Broadcastable index grids, one axis per variable."""
    env = {}
    for i, v in enumerate(names):
        shape = [1] * len(names)
        shape[i] = n
        env[v] = np.arange(n, dtype=np.intp).reshape(shape)
    return env


def _combo_runs(q, case, ranges):
    """Yield (exp_env, elem_env, fixed_bindings, axis_names) covering all
    tuples, chunking over the first element variable when grids get big."""
    n = q.order
    names = list(case.elem_vars)
    grid_axes = names + (["_p"] if case.perm else [])
    cells = n ** len(grid_axes)
    combos = itertools.product(*(ranges[v] for v in ranges)) if ranges else [()]
    for combo in combos:
        exp_env = dict(zip(ranges, combo))
        if cells <= _CELL_LIMIT or len(names) <= 1:
            env = _grid_env(n, grid_axes)
            yield exp_env, env, {}, grid_axes
        else:
            rest = grid_axes[1:]
            for v0 in range(n):
                env = _grid_env(n, rest)
                env[names[0]] = np.intp(v0)
                yield exp_env, env, {names[0]: v0}, rest


def check_identity(
    q: LoopTable,
    ident: str,
    *,
    gate: bool = True,
    full: bool = False,
    sample_target: int = 1_000_000,
    seed: int = 0,
    violation_cap: int = 16,
) -> IdentityReport:
    """Check one registered law over all (guarded) tuples.

    With gate=True the ambient hypotheses of the law's suite are enforced
    first and HypothesisNotMet is raised when they fail; gate=False runs the
    law raw on any table. Four-variable laws on tables of order > 24 are
    sampled (seeded, stratified) unless full=True.
    """
    case = REGISTRY.get(ident)
    if case is None:
        raise InvalidParameter(f"unknown identity {ident!r}")
    if gate:
        _require_ambient(q, case.suite)
    n = q.order
    ranges, bound = _exp_setup(q, case)
    n_combos = math.prod(len(r) for r in ranges.values()) if ranges else 1
    population = n ** len(case.elem_vars) * n_combos

    if case.hypothesis:
        wit = _first_mismatch(q, case, case.hypothesis, ranges, bound)
        if wit is not None:
            return IdentityReport(
                ident, "hypothesis_failed", population, hypothesis_witness=wit
            )

    if case.arity4 and n > 24 and population > sample_target and not full:
        return _check_sampled(q, case, ranges, bound, sample_target, seed, violation_cap)

    violations = []
    checked = 0
    for exp_env, env, fixed, axes in _combo_runs(q, case, ranges):
        env_all = dict(env)
        bad = None
        gmask = None
        if case.guard is not None:
            gl = _eval(case.guard[0], q, {**env_all, **exp_env}, bound)
            gr = _eval(case.guard[1], q, {**env_all, **exp_env}, bound)
            gmask = np.broadcast_to(
                gl == gr, _axes_shape(n, axes, case, drop_point=True)
            )
            checked += int(gmask.sum())
        else:
            checked += n ** len([a for a in axes if a != "_p"])
        for lhs, rhs in case.equations:
            le = _eval(lhs, q, {**env_all, **exp_env}, bound)
            re = _eval(rhs, q, {**env_all, **exp_env}, bound)
            d = np.broadcast_to(le != re, _axes_shape(n, axes, case, drop_point=False))
            if case.perm:
                d = d.any(axis=-1)
            if gmask is not None:
                d = d & gmask
            bad = d if bad is None else (bad | d)
        if bad is not None and bad.any():
            var_axes = [a for a in axes if a != "_p"]
            for idx in np.argwhere(bad):
                if len(violations) >= violation_cap:
                    break
                binding = dict(fixed)
                binding.update({v: int(i) for v, i in zip(var_axes, idx)})
                binding.update(exp_env)
                violations.append(binding)
            if len(violations) >= violation_cap:
                break
    status = "holds" if not violations else "violated"
    return IdentityReport(case.ident, status, checked, tuple(violations))


def _axes_shape(n, axes, case, drop_point):
    names = [a for a in axes if not (drop_point and a == "_p")]
    return tuple(n for _ in names)


def _first_mismatch(q, case, eq, ranges, bound):
    """First tuple violating eq over the full grid, or None."""
    n = q.order
    for exp_env, env, fixed, axes in _combo_runs(q, case, ranges):
        le = _eval(eq[0], q, {**env, **exp_env}, bound)
        re = _eval(eq[1], q, {**env, **exp_env}, bound)
        d = np.broadcast_to(le != re, _axes_shape(n, axes, case, drop_point=False))
        if case.perm:
            d = d.any(axis=-1)
        if d.any():
            idx = np.argwhere(d)[0]
            var_axes = [a for a in axes if a != "_p"]
            binding = dict(fixed)
            binding.update({v: int(i) for v, i in zip(var_axes, idx)})
            binding.update(exp_env)
            return binding
    return None


def _check_sampled(q, case, ranges, bound, target, seed, violation_cap):
    """Stratified sample of at least `target` tuples, seeded and deterministic.

    Strata are the exponent combinations when there are any, otherwise the
    (first, second) element variable pairs; remaining variables are drawn
    uniformly with replacement.
    """
    n = q.order
    rng = np.random.default_rng(seed)
    names = list(case.elem_vars)
    violations = []
    checked = 0

    def run_block(flat, exp_env):
        nonlocal checked
        m = len(next(iter(flat.values())))
        checked += m
        env = dict(flat)
        if case.perm:
            env = {v: a[:, None] for v, a in env.items()}
            env["_p"] = np.arange(n, dtype=np.intp)[None, :]
        bad = np.zeros(m, dtype=bool)
        for lhs, rhs in case.equations:
            le = _eval(lhs, q, {**env, **exp_env}, bound)
            re = _eval(rhs, q, {**env, **exp_env}, bound)
            d = le != re
            if case.perm:
                d = d.any(axis=-1)
            bad |= np.broadcast_to(d, (m,))
        for i in np.flatnonzero(bad):
            if len(violations) >= violation_cap:
                break
            binding = {v: int(flat[v][i]) for v in names}
            binding.update(exp_env)
            violations.append(binding)

    combos = list(itertools.product(*(ranges[v] for v in ranges))) if ranges else [()]
    if len(combos) > 1:
        # stratify by exponent combination
        k = -(-target // len(combos))
        for combo in combos:
            if len(violations) >= violation_cap:
                break
            exp_env = dict(zip(ranges, combo))
            flat = {v: rng.integers(0, n, size=k).astype(np.intp) for v in names}
            run_block(flat, exp_env)
    else:
        # stratify by the first two element variables
        k = -(-target // (n * n))
        block = n * k
        for v0 in range(n):
            if len(violations) >= violation_cap:
                break
            flat = {
                names[0]: np.full(block, v0, dtype=np.intp),
                names[1]: np.repeat(np.arange(n, dtype=np.intp), k),
            }
            for v in names[2:]:
                flat[v] = rng.integers(0, n, size=block).astype(np.intp)
            run_block(flat, {})
    status = "holds" if not violations else "violated"
    return IdentityReport(
        case.ident, status, checked, tuple(violations), sampled=True
    )


def check_suite(
    q: LoopTable,
    suite: str = "core",
    only=None,
    *,
    gate: bool = True,
    full: bool = False,
    workers: int = 1,
) -> list:
    """Run a suite (or a subset) in registry order; results are deterministic
    regardless of worker count."""
    if suite == "core":
        ids = list(CORE_SUITE)
    elif suite == "exp2":
        ids = list(EXP2_SUITE)
    elif suite == "all":
        ids = list(REGISTRY)
    else:
        raise InvalidParameter(f"unknown suite {suite!r}")
    if only is not None:
        wanted = list(only)
        for w in wanted:
            if w not in REGISTRY:
                raise InvalidParameter(f"unknown identity {w!r}")
        ids = [i for i in ids if i in wanted]
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            futs = [pool.submit(check_identity, q, i, gate=gate, full=full) for i in ids]
            return [f.result() for f in futs]
    return [check_identity(q, i, gate=gate, full=full) for i in ids]
