"""Command-line front end: cayley files, analysis reports, generators, search.

The on-disk format (cayley-v1) is: line 1 holds the order n, the next n
nonblank lines hold the n rows of the table as whitespace-separated integers
in [0, n); '#' starts a comment anywhere on a line. The identity element need
not be 0 in a file (validation relabels), but emitted files always carry
identity 0, so parse followed by emit is byte-exact on normalized files.

Exit codes: 0 success, 2 bad input (parse, validation, or an operand the
requested operation does not apply to), 3 a --expect flag or a checked
identity failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .associates import bruck_associate, nlp_associate
from .automorphic import (
    CORE_SUITE,
    EXP2_SUITE,
    check_suite,
    has_aip,
    is_automorphic_loop,
)
from .errors import HypothesisNotMet, InvalidParameter, LoopError, ParseError
from .forge import (
    SearchSpec,
    are_isomorphic,
    canonical_form,
    cocycle_table,
    gen_cml81,
    gen_cocycle,
    gen_cyclic,
    gen_elem_abelian,
    gen_steiner_fano,
    search,
)
from .kernel import LoopTable, validate
from .permgroups import inn_group, mlt_group
from .structure import (
    cauchy_audit,
    center,
    decompose,
    hall_sylow_audit,
    is_normal,
    is_simple,
    is_solvable,
    lagrange_audit,
    quotient,
    subloop_enumerate,
    subloop_generate,
)


# ---------------------------------------------------------------------------
# cayley-v1 format


def parse_cayley(source) -> LoopTable:
    """Read a cayley-v1 file (path or open text handle) into a validated loop.

    Raises ParseError with a 1-based line/column position on malformed input;
    NotLatin/NoIdentity propagate from validation.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()

    n = None
    rows: list[list[int]] = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        # manual token scan keeps 1-based column positions for error reports
        tokens: list[tuple[int, int]] = []
        i = 0
        while i < len(body):
            if body[i].isspace():
                i += 1
                continue
            j = i
            while j < len(body) and not body[j].isspace():
                j += 1
            piece = body[i:j]
            try:
                val = int(piece, 10)
            except ValueError:
                raise ParseError(f"not an integer: {piece!r}", lineno, i + 1) from None
            tokens.append((val, i + 1))
            i = j
        if n is None:
            if len(tokens) != 1:
                raise ParseError(
                    "header line must hold exactly the order", lineno, tokens[1][1]
                )
            n = tokens[0][0]
            if n < 1:
                raise ParseError(f"order must be positive, got {n}", lineno, tokens[0][1])
            continue
        if len(rows) == n:
            raise ParseError("trailing data after the table", lineno, tokens[0][1])
        if len(tokens) != n:
            if len(tokens) > n:
                raise ParseError(
                    f"row {len(rows) + 1} has {len(tokens)} entries, expected {n}",
                    lineno,
                    tokens[n][1],
                )
            raise ParseError(
                f"row {len(rows) + 1} has {len(tokens)} entries, expected {n}",
                lineno,
                len(body.rstrip()) + 1,
            )
        for val, col in tokens:
            if not 0 <= val < n:
                raise ParseError(f"entry {val} outside [0, {n})", lineno, col)
        rows.append([val for val, _ in tokens])

    if n is None:
        raise ParseError("empty file: missing order header", last_line or 1)
    if len(rows) != n:
        raise ParseError(f"expected {n} rows, found {len(rows)}", last_line)
    return validate(np.array(rows, dtype=np.intp))


def emit_cayley(q: LoopTable, comment: str | None = None) -> str:
    """Serialize a loop in cayley-v1 form, identity first."""
    lines = []
    if comment:
        lines.extend(f"# {part}" for part in comment.splitlines())
    lines.append(str(q.order))
    lines.extend(" ".join(str(int(v)) for v in row) for row in q.table)
    return "\n".join(lines) + "\n"


def _write_output(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _workers() -> int:
    raw = os.environ.get("LOOPFORGE_THREADS", "1")
    try:
        w = int(raw)
    except ValueError:
        raise InvalidParameter(f"LOOPFORGE_THREADS must be an integer, got {raw!r}")
    if w < 1:
        raise InvalidParameter(f"LOOPFORGE_THREADS must be >= 1, got {w}")
    return w


# ---------------------------------------------------------------------------
# analysis report


EXPECT_CHOICES = (
    "latin",
    "commutative",
    "power-associative",
    "aip",
    "a-loop",
    "solvable",
    "simple",
)


def _suite_rows(q: LoopTable, suite: str, *, full: bool, workers: int) -> dict:
    """Per-identity summary rows; ambient failure marks the whole suite."""
    ids = list(CORE_SUITE if suite == "core" else EXP2_SUITE)
    try:
        reports = check_suite(q, suite, full=full, workers=workers)
    except HypothesisNotMet:
        return {
            ident: {
                "status": "hypothesis_failed",
                "violations": 0,
                "tuples_checked": 0,
                "sampled": False,
            }
            for ident in ids
        }
    return {
        r.ident: {
            "status": r.status,
            "violations": len(r.violations),
            "tuples_checked": int(r.tuples_checked),
            "sampled": bool(r.sampled),
        }
        for r in reports
    }


def report_document(q: LoopTable, *, full: bool = False, workers: int = 1) -> dict:
    """The full analysis pipeline as one JSON-ready document.

    Every field is always present; fields whose computation does not apply to
    the input (for example decomposition of a loop that is not a commutative
    A-loop) are null.
    """
    n = q.order
    commutative = bool(q.is_commutative())
    a_loop = None
    witness = None
    if commutative:
        ok, wit = is_automorphic_loop(q)
        a_loop = bool(ok)
        witness = None if wit is None else [int(v) for v in wit]

    orders = q.element_orders()
    histogram = {
        str(o): int((orders == o).sum()) for o in sorted({int(v) for v in orders})
    }
    exponent = int(q.exponent())

    mlt_order = int(mlt_group(q).order())
    inn_order = int(inn_group(q).order())

    try:
        center_size = center(q).order
    except LoopError:
        center_size = None
    try:
        dec = decompose(q)
        k_order: int | None = dec.K.order
        h_order: int | None = dec.H.order
        decomposition = {"K_order": k_order, "H_order": h_order, "verified": True}
    except LoopError:
        k_order = h_order = None
        decomposition = None
    try:
        simple = bool(is_simple(q))
    except LoopError:
        simple = None
    try:
        solvable = bool(is_solvable(q))
    except LoopError:
        solvable = None

    summary = _suite_rows(q, "core", full=full, workers=workers)
    if exponent == 2:
        summary.update(_suite_rows(q, "exp2", full=full, workers=workers))

    doc = {
        "order": n,
        "flags": {
            "latin": True,  # validation already enforced it
            "commutative": commutative,
            "power_associative": bool(q.is_power_associative()),
            "aip": bool(has_aip(q)),
            "a_loop": a_loop,
        },
        "a_loop_witness": witness,
        "exponent": exponent,
        "element_order_histogram": histogram,
        "mlt_order": mlt_order,
        "inn_order": inn_order,
        "center_size": center_size,
        "K_order": k_order,
        "H_order": h_order,
        "simple": simple,
        "solvable": solvable,
        "identity_suite_summary": summary,
        "decomposition": decomposition,
    }
    # internal consistency: a simple loop has trivial or full center
    if doc["simple"] and center_size not in (None, 1, n):
        raise LoopError(f"inconsistent report: simple loop with center {center_size}")
    if mlt_order != n * inn_order:
        raise LoopError("inconsistent report: |Mlt| != n * |Inn|")
    return doc


def _expect_value(doc: dict, name: str):
    flags = doc["flags"]
    return {
        "latin": flags["latin"],
        "commutative": flags["commutative"],
        "power-associative": flags["power_associative"],
        "aip": flags["aip"],
        "a-loop": flags["a_loop"],
        "solvable": doc["solvable"],
        "simple": doc["simple"],
    }[name]


def _fmt(value) -> str:
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    return str(value)


def _render_report(doc: dict) -> str:
    lines = [f"order: {doc['order']}"]
    for key, val in doc["flags"].items():
        lines.append(f"{key}: {_fmt(val)}")
    if doc["a_loop_witness"] is not None:
        lines.append(f"a_loop_witness (x,y,u,v): {tuple(doc['a_loop_witness'])}")
    lines.append(f"exponent: {doc['exponent']}")
    hist = ", ".join(f"{k}: {v}" for k, v in doc["element_order_histogram"].items())
    lines.append(f"element_order_histogram: {{{hist}}}")
    for key in ("mlt_order", "inn_order", "center_size", "K_order", "H_order",
                "simple", "solvable"):
        lines.append(f"{key}: {_fmt(doc[key])}")
    summary = doc["identity_suite_summary"]
    held = sum(1 for row in summary.values() if row["status"] == "holds")
    lines.append(f"identities: {held}/{len(summary)} hold")
    for ident, row in summary.items():
        if row["status"] != "holds":
            lines.append(f"  {ident}: {row['status']} ({row['violations']} violations)")
    dec = doc["decomposition"]
    if dec is None:
        lines.append("decomposition: null")
    else:
        lines.append(f"decomposition: K {dec['K_order']} x H {dec['H_order']} (verified)")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args) -> int:
    q = parse_cayley(args.file)
    doc = report_document(q, full=args.full, workers=_workers())
    if args.json:
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        sys.stdout.write(_render_report(doc))
    failed = [name for name in args.expect or () if _expect_value(doc, name) is not True]
    if failed:
        print(f"expectation failed: {', '.join(failed)}", file=sys.stderr)
        return 3
    return 0


def cmd_identities(args) -> int:
    q = parse_cayley(args.file)
    only = [s for s in args.only.split(",") if s] if args.only else None
    try:
        reports = check_suite(
            q, args.suite, only, gate=not args.no_gate, full=args.full,
            workers=_workers(),
        )
        rows = [
            {
                "ident": r.ident,
                "status": r.status,
                "tuples_checked": int(r.tuples_checked),
                "sampled": bool(r.sampled),
                "violations": [
                    {k: int(v) for k, v in wit.items()} for wit in r.violations
                ],
            }
            for r in reports
        ]
    except HypothesisNotMet as exc:
        if args.suite == "core":
            ids = list(CORE_SUITE)
        elif args.suite == "exp2":
            ids = list(EXP2_SUITE)
        else:
            ids = list(CORE_SUITE) + list(EXP2_SUITE)
        if only is not None:
            ids = [i for i in ids if i in only]
        print(f"ambient hypothesis failed: {exc}", file=sys.stderr)
        rows = [
            {
                "ident": ident,
                "status": "hypothesis_failed",
                "tuples_checked": 0,
                "sampled": False,
                "violations": [],
            }
            for ident in ids
        ]
    if args.json:
        sys.stdout.write(json.dumps(rows, indent=2) + "\n")
    else:
        for row in rows:
            note = " (sampled)" if row["sampled"] else ""
            line = f"{row['ident']:<16} {row['status']:<18} checked={row['tuples_checked']}{note}"
            sys.stdout.write(line + "\n")
            for wit in row["violations"][:3]:
                at = ", ".join(f"{k}={v}" for k, v in wit.items())
                sys.stdout.write(f"  violation at {at}\n")
    return 3 if any(row["status"] == "violated" for row in rows) else 0


def cmd_associate(args) -> int:
    q = parse_cayley(args.file)
    assoc = bruck_associate(q) if args.kind == "bruck" else nlp_associate(q)
    _write_output(emit_cayley(assoc.table, comment=f"{args.kind} associate"), args.out)
    return 0


def cmd_decompose(args) -> int:
    q = parse_cayley(args.file)
    dec = decompose(q)
    doc = {
        "K_order": dec.K.order,
        "H_order": dec.H.order,
        "K_members": [int(m) for m in dec.K.members],
        "H_members": [int(m) for m in dec.H.members],
        "verified": True,
    }
    if args.json:
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        sys.stdout.write(
            f"K: order {doc['K_order']}, members {doc['K_members']}\n"
            f"H: order {doc['H_order']}, members {doc['H_members']}\n"
            "iso: verified on all pairs\n"
        )
    return 0


def cmd_subloops(args) -> int:
    q = parse_cayley(args.file)
    subs = subloop_enumerate(q)
    subs = sorted(subs, key=lambda s: (s.order, s.members))
    rows = [
        {
            "order": s.order,
            "members": [int(m) for m in s.members],
            "normal": bool(is_normal(q, s)),
        }
        for s in subs
    ]
    if args.json:
        sys.stdout.write(json.dumps(rows, indent=2) + "\n")
    else:
        for row in rows:
            tag = "normal" if row["normal"] else "not normal"
            sys.stdout.write(f"order {row['order']:>3}  {tag:<10} {row['members']}\n")
        sys.stdout.write(f"total: {len(rows)} subloops\n")
    return 0


def cmd_quotient(args) -> int:
    q = parse_cayley(args.file)
    try:
        members = sorted({int(s) for s in args.subloop.split(",") if s})
    except ValueError:
        raise InvalidParameter(f"--subloop wants integers, got {args.subloop!r}") from None
    sub = subloop_generate(q, members)
    if list(sub.members) != members:
        raise InvalidParameter(
            f"{members} is not closed; its closure is {list(sub.members)}"
        )
    quo, _ = quotient(q, sub)
    comment = f"quotient by subloop {members}"
    _write_output(emit_cayley(quo, comment=comment), args.out)
    return 0


def cmd_audit(args) -> int:
    q = parse_cayley(args.file)
    run_all = not (args.lagrange or args.cauchy or args.hall)
    doc = {}
    if args.lagrange or run_all:
        doc["lagrange"] = lagrange_audit(q)
    if args.cauchy or run_all:
        got = cauchy_audit(q)
        doc["cauchy"] = {
            "witnesses": {str(p): w for p, w in got["witnesses"].items()},
            "complete": got["complete"],
        }
    if args.hall:
        try:
            primes = [int(s) for s in args.hall.split(",") if s]
        except ValueError:
            raise InvalidParameter(f"--hall wants integers, got {args.hall!r}") from None
        doc["hall"] = hall_sylow_audit(q, primes)
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return 0


def cmd_gen(args) -> int:
    if args.cyclic is not None:
        q = gen_cyclic(args.cyclic)
    elif args.elem_abelian is not None:
        p, k = args.elem_abelian
        q = gen_elem_abelian(p, k)
    elif args.cml81:
        q = gen_cml81()
    elif args.steiner_fano:
        q = gen_steiner_fano()
    else:
        raw_p, name = args.cocycle
        try:
            p = int(raw_p)
        except ValueError:
            raise InvalidParameter(f"--cocycle wants a prime, got {raw_p!r}") from None
        q = gen_cocycle(p, cocycle_table(p, name))
    _write_output(emit_cayley(q), args.out)
    return 0


def cmd_search(args) -> int:
    spec = SearchSpec(
        order=args.order,
        require_exponent2=args.exponent2,
        require_nonassociative=args.nonassociative,
        limit=args.limit,
        mode="randomized" if args.seed is not None else "exhaustive",
        seed=args.seed,
        max_nodes=args.max_nodes,
    )
    found = search(spec)
    if args.json:
        doc = {
            "order": args.order,
            "mode": spec.mode,
            "classes": [[[int(v) for v in row] for row in q.table] for q in found],
        }
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        for k, q in enumerate(found):
            if k:
                sys.stdout.write("\n")
            sys.stdout.write(emit_cayley(q, comment=f"class {k + 1} of {len(found)}"))
        print(f"found {len(found)} isomorphism classes", file=sys.stderr)
    return 0


def cmd_canon(args) -> int:
    q = parse_cayley(args.file)
    _write_output(emit_cayley(canonical_form(q)), args.out)
    return 0


def cmd_iso(args) -> int:
    a = parse_cayley(args.file_a)
    b = parse_cayley(args.file_b)
    verdict = a.order == b.order and are_isomorphic(a, b)
    sys.stdout.write(f"isomorphic: {_fmt(verdict)}\n")
    if args.expect is not None and verdict != (args.expect == "yes"):
        print(f"expectation failed: expected {args.expect}", file=sys.stderr)
        return 3
    return 0


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loopforge",
        description="Cayley-table toolkit for finite commutative automorphic loops.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full analysis report for a cayley file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.add_argument("--full", action="store_true",
                   help="exhaustive four-variable identity checks, no sampling")
    p.add_argument("--expect", action="append", choices=EXPECT_CHOICES,
                   help="fail (exit 3) unless the named property holds")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("identities", help="run an identity suite")
    p.add_argument("file")
    p.add_argument("--suite", choices=("core", "exp2", "all"), default="core")
    p.add_argument("--only", help="comma-separated identity names")
    p.add_argument("--full", action="store_true")
    p.add_argument("--no-gate", action="store_true",
                   help="skip the ambient hypothesis gate and run laws raw")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("associate", help="emit the Bruck or nlp associate table")
    p.add_argument("file")
    p.add_argument("--kind", choices=("bruck", "nlp"), required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_associate)

    p = sub.add_parser("decompose", help="odd x 2-power direct decomposition")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("subloops", help="enumerate subloops with normality flags")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_subloops)

    p = sub.add_parser("quotient", help="quotient by a normal subloop")
    p.add_argument("file")
    p.add_argument("--subloop", required=True,
                   help="comma-separated member list, e.g. 0,4,8")
    p.add_argument("--out")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("audit", help="Lagrange/Cauchy/Hall-Sylow audits")
    p.add_argument("file")
    p.add_argument("--lagrange", action="store_true")
    p.add_argument("--cauchy", action="store_true")
    p.add_argument("--hall", help="comma-separated primes, e.g. 2,3")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("gen", help="emit a constructed loop")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--cyclic", type=int, metavar="N")
    group.add_argument("--elem-abelian", type=int, nargs=2, metavar=("P", "K"))
    group.add_argument("--cml81", action="store_true")
    group.add_argument("--steiner-fano", action="store_true")
    group.add_argument("--cocycle", nargs=2, metavar=("P", "NAME"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("search", help="search commutative A-loops of one order")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--limit", type=int)
    p.add_argument("--seed", type=int,
                   help="presence selects seeded randomized mode")
    p.add_argument("--exponent2", action="store_true")
    p.add_argument("--nonassociative", action="store_true")
    p.add_argument("--max-nodes", type=int, default=2_000_000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("canon", help="canonical (lex-least) relabeling")
    p.add_argument("file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("iso", help="isomorphism test for two cayley files")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--expect", choices=("yes", "no"))
    p.set_defaults(func=cmd_iso)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return int(args.func(args))
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LoopError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
