"""Command-line entry point: ``resbool <verb> ...``.

Every report is ``key=value`` text on stdout; failures print a single
``error[<category>]: <message>`` line on stderr and exit with status 2.
"""

from __future__ import annotations

import argparse
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .constructor import ConstructionResult, build, certify, construct
from .core import TruthTable, anf, fast_walsh, parseval_check, profile
from .errors import CapacityError, ParseError, ResboolError
from .families import load_seed_functions
from .formats import format_seeds, format_table, parse_table, write_table
from .planfile import MAGIC, parse_plan, write_plan
from .published import pow2_form, reproduce_tables
from .search import search

ANF_MAX_N = 26
log = logging.getLogger("resbool")


def _int_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition("-")
    try:
        a = int(lo)
        b = int(hi) if hi else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a' or 'a-b', got {text!r}") from None
    if a > b:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return a, b


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def profile_lines(f: TruthTable) -> list[str]:
    spec = fast_walsh(f)
    p = profile(f)
    return [
        f"n={p.n}",
        f"balanced={int(p.balanced)}",
        f"m={p.resiliency}",
        f"d={p.degree}",
        f"N={p.nonlinearity}",
        f"almost_optimal={int(p.almost_optimal)}",
        f"parseval={'ok' if parseval_check(spec) else 'FAIL'}",
    ]


def _read_input(path: str):
    """A truth table or a plan, decided by the first line."""
    text = Path(path).read_text()
    if text.startswith(MAGIC):
        return parse_plan(text)
    return parse_table(text)


def construction_lines(result: ConstructionResult) -> list[str]:
    plan, cert = result.plan, result.certificate
    ints = lambda v: "-" if v is None else ",".join(map(str, v))  # noqa: E731
    if plan is None:
        sel = result.selection
        out = [
            f"variant={sel.variant}",
            f"route={sel.route}",
            f"a={ints(sel.a)}",
            f"e={ints(sel.e)}",
            f"deficit={sel.deficit}",
            "families=" + ",".join(f"k{o.k}:{o.size}" for o in sel.chosen_options),
        ]
        return out + cert.lines() + [f"N_form={pow2_form(cert.n, cert.nonlinearity_at_least)}"]
    out = [
        f"variant={plan.variant}",
        f"route={plan.route}",
        f"a={ints(plan.a)}",
        f"e={ints(plan.e)}",
        f"pivots={ints(plan.pivots)}",
        f"cprime={'-' if plan.cprime is None else plan.cprime}",
        "used=" + ",".join(f"{k}:{v}" for k, v in plan.used_counts.items()),
    ]
    out += [f"note={note}" for note in plan.notes]
    out += cert.lines()
    if result.measured is not None:
        p = result.measured
        out += [f"measured_m={p.resiliency}", f"measured_d={p.degree}", f"measured_N={p.nonlinearity}",
                "crosscheck=ok"]
    return out


def cmd_analyze(args) -> list[str]:
    obj = _read_input(args.input)
    if not isinstance(obj, TruthTable):
        obj = build(obj)
    return profile_lines(obj)


def cmd_construct(args) -> list[str]:
    kwargs = dict(plan_only=args.plan_only, seed=args.seed, allow_small=args.allow_small)
    if args.exact is not None:
        kwargs["exact"] = args.exact
    if args.no_verify:
        kwargs["verify"] = False
    variant = args.variant.upper()
    if variant == "C3":
        if not args.seeds:
            raise ParseError("construct c3 needs --seeds FILE")
        kwargs["seeds"] = load_seed_functions(args.seeds)
        kwargs["include_bent"] = not args.seeded_only
        kwargs["select"] = args.select
        kwargs["route"] = args.route
    elif variant == "C2":
        kwargs["route"] = args.route
        kwargs["pivots"] = args.pivots
        kwargs["cprime"] = args.cprime
    else:
        kwargs["select"] = args.select
    result = construct(variant, args.n, args.m, **kwargs)
    stem = args.name or f"{variant.lower()}_{args.n}_{args.m}"
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if result.plan is None:
        # selection only: there is no block assignment to write
        return ["plan=-"] + construction_lines(result)
    plan_path = out_dir / f"{stem}.plan"
    write_plan(plan_path, result.plan)
    lines = [f"plan={plan_path}"]
    if result.table is not None:
        table_path = out_dir / f"{stem}.tt"
        write_table(table_path, result.table)
        lines.append(f"table={table_path}")
    return lines + construction_lines(result)


def cmd_certify(args) -> list[str]:
    plan = parse_plan(Path(args.plan).read_text())
    cert = certify(plan, exact=False if args.bound else None)
    return cert.lines()


def cmd_search(args) -> list[str]:
    records = search(args.n, args.m, args.N, args.d, args.limit)
    text = format_seeds(records)
    if args.out:
        Path(args.out).write_text(text)
        return [f"found={len(records)}", f"seeds={args.out}"]
    return [f"found={len(records)}", *text.splitlines()]


def cmd_tables(args) -> list[str]:
    ms = range(args.m[0], args.m[1] + 1)
    rows = reproduce_tables(ms, args.n, args.table)
    lines = [row.line() for row in rows]
    flagged = sum(row.status != "match" for row in rows)
    lines.append(f"rows={len(rows)} matched={len(rows) - flagged} flagged={flagged} "
                 f"improved={sum(row.improved for row in rows)}")
    return lines


def cmd_export(args) -> list[str]:
    obj = _read_input(args.input)
    if args.format == "report":
        if isinstance(obj, TruthTable):
            text = "\n".join(profile_lines(obj)) + "\n"
        else:
            text = "\n".join(certify(obj).lines()) + "\n"
    else:
        table = obj if isinstance(obj, TruthTable) else build(obj)
        if args.format == "hex":
            text = format_table(table)
        else:
            if table.n > ANF_MAX_N:
                raise CapacityError(f"anf export limited to n <= {ANF_MAX_N}, got {table.n}")
            text = anf(table).to_string() + "\n"
    if args.out:
        Path(args.out).write_text(text)
        return [f"written={args.out}"]
    return text.splitlines()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="resbool", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"resbool {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    p.add_argument("--stamp", action="store_true", help="print a UTC timestamp on stderr")
    sub = p.add_subparsers(dest="verb", required=True)

    a = sub.add_parser("analyze", help="profile a truth-table (or plan) file")
    a.add_argument("input")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("construct", help="build a resilient function")
    c.add_argument("variant", choices=["c1", "c2", "c3", "C1", "C2", "C3"])
    c.add_argument("n", type=int)
    c.add_argument("m", type=int)
    c.add_argument("--seeds", help="seed-record file (c3)")
    c.add_argument("--plan-only", action="store_true", help="certify without building the truth table")
    c.add_argument("--seed", type=int, default=None, help="permute the block assignment")
    c.add_argument("--select", type=_int_list, default=None, help="force the families used, e.g. 1,2")
    c.add_argument("--route", choices=["auto", "plain", "prime", "monomial"], default=None)
    c.add_argument("--pivots", type=_int_list, default=None, help="1-based pivot variables (c2)")
    c.add_argument("--cprime", type=int, default=None, help="mask of the degree-raising member (c2)")
    c.add_argument("--seeded-only", action="store_true", help="c3: do not add bent families")
    c.add_argument("--exact", dest="exact", action="store_true", default=None,
                   help="exact structural certificate (n/2 <= 24)")
    c.add_argument("--bound", dest="exact", action="store_false", help="closed-form certificate only")
    c.add_argument("--no-verify", action="store_true", help="skip the exhaustive cross-check")
    c.add_argument("--allow-small", action="store_true", help="permit 8 <= n < 12")
    c.add_argument("--out-dir", default=".")
    c.add_argument("--name", default=None, help="output file stem")
    c.set_defaults(func=cmd_construct)

    ce = sub.add_parser("certify", help="certify a plan file")
    ce.add_argument("plan")
    ce.add_argument("--bound", action="store_true", help="closed-form bound only")
    ce.set_defaults(func=cmd_certify)

    s = sub.add_parser("search", help="exhaustive search over small n")
    s.add_argument("n", type=int)
    s.add_argument("--m", type=int, default=None)
    s.add_argument("--N", type=int, default=None)
    s.add_argument("--d", type=int, default=None)
    s.add_argument("--limit", type=int, default=None)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_search)

    t = sub.add_parser("tables", help="reproduce the published parameter tables")
    t.add_argument("--m", type=_int_range, default=(1, 4))
    t.add_argument("--n", type=_int_range, default=None)
    t.add_argument("--table", choices=["1", "2", "12"], default="12")
    t.set_defaults(func=cmd_tables)

    e = sub.add_parser("export", help="export a table or plan")
    e.add_argument("input")
    e.add_argument("--format", choices=["hex", "anf", "report"], required=True)
    e.add_argument("--out", default=None)
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.stamp:
        print(f"# stamp={datetime.now(timezone.utc).isoformat()}", file=sys.stderr)
    try:
        lines = args.func(args)
    except ResboolError as exc:
        print(f"error[{exc.category}]: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return 2
    for line in lines:
        print(line)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
