"""Text serialization of construction plans.

::

    resbool-plan 1
    n=16
    m=1
    variant=C1
    route=plain
    a=0,1,0
    e=-
    pivots=-
    cprime=-
    seed=-
    tail T0 n=4 name=bent2 hex=<hex>
    family F0 label=gamma k=0 e=0 declared=1
    member F0:0 vars=1,2,3,4,5,6,7,8 c=3 tail=- v=-
    ...
    phi 0 -> F0:0
    ...
    end

Variables are 1-based; ``c`` is a mask over the member's linear variables
(bit ``j`` is the ``j``-th listed variable); the tail acts on the remaining
variables in increasing order.
"""

from __future__ import annotations

import re
from pathlib import Path

from .constructor import ConstructionPlan
from .core import TruthTable
from .errors import ParseError
from .families import Component, ComponentFamily, make_component
from .formats import parse_table, table_to_hex

MAGIC = "resbool-plan 1"


def _ints(values) -> str:
    return ",".join(map(str, values)) if values else "-"


def format_plan(plan: ConstructionPlan) -> str:
    out = [MAGIC, f"n={plan.n}", f"m={plan.m}", f"variant={plan.variant}", f"route={plan.route}",
           f"a={_ints(plan.a)}", f"e={_ints(plan.e)}", f"pivots={_ints(plan.pivots)}",
           f"cprime={'-' if plan.cprime is None else plan.cprime}",
           f"seed={'-' if plan.seed is None else plan.seed}"]
    tails: dict[int, str] = {}
    for fam in plan.families:
        for comp in fam.members:
            if comp.tail is not None and id(comp.tail) not in tails:
                name = f"T{len(tails)}"
                tails[id(comp.tail)] = name
                label = comp.tail_name or "-"
                out.append(f"tail {name} n={comp.tail.n} name={label} hex={table_to_hex(comp.tail)}")
    for fi, fam in enumerate(plan.families):
        out.append(f"family F{fi} label={fam.label} k={fam.k} e={fam.e} declared={fam.declared_resiliency}")
        for mi, comp in enumerate(fam.members):
            tail = "-" if comp.tail is None else tails[id(comp.tail)]
            v = "-" if comp.tail is None else comp.tail_resiliency
            out.append(f"member F{fi}:{mi} vars={_ints(v_ + 1 for v_ in comp.linear_vars)} "
                       f"c={comp.mask} tail={tail} v={v}")
    for b, (fi, mi) in enumerate(plan.phi):
        out.append(f"phi {b} -> F{fi}:{mi}")
    out.append("end")
    return "\n".join(out) + "\n"


_KV = re.compile(r"(\w+)=(\S*)")


def _fields(line: str, lineno: int) -> dict[str, str]:
    return dict(_KV.findall(line))


def _int_tuple(text: str) -> tuple[int, ...] | None:
    return None if text == "-" else tuple(int(x) for x in text.split(","))


def _opt_int(text: str) -> int | None:
    return None if text == "-" else int(text)


def parse_plan(text: str) -> ConstructionPlan:
    lines = text.splitlines()
    if not lines or lines[0].strip() != MAGIC:
        raise ParseError(f"expected header {MAGIC!r}", line=1, column=1)
    head: dict[str, str] = {}
    i = 1
    for key in ("n", "m", "variant", "route", "a", "e", "pivots", "cprime", "seed"):
        if i >= len(lines) or not lines[i].startswith(key + "="):
            raise ParseError(f"expected '{key}=' line", line=i + 1, column=1)
        head[key] = lines[i][len(key) + 1:].strip()
        i += 1
    try:
        n, m = int(head["n"]), int(head["m"])
        a = _int_tuple(head["a"]) or ()
        e = _int_tuple(head["e"])
        pivots = _int_tuple(head["pivots"])
        cprime, seed = _opt_int(head["cprime"]), _opt_int(head["seed"])
    except ValueError as exc:
        raise ParseError(f"bad header value: {exc}", line=i) from exc
    half = n // 2
    tails: dict[str, tuple[TruthTable, str | None]] = {}
    fams: list[dict] = []
    phi: list[tuple[int, int]] = []
    ended = False
    for j in range(i, len(lines)):
        line = lines[j].strip()
        lineno = j + 1
        if not line:
            continue
        word = line.split()[0]
        try:
            if word == "tail":
                name = line.split()[1]
                f = _fields(line, lineno)
                table = parse_table(f"n={f['n']}\n{f['hex']}\n")
                tails[name] = (table, None if f["name"] == "-" else f["name"])
            elif word == "family":
                f = _fields(line, lineno)
                fams.append({"label": f["label"], "k": int(f["k"]), "e": int(f["e"]),
                             "declared": int(f["declared"]), "members": []})
            elif word == "member":
                ref = line.split()[1]
                fi, mi = (int(x) for x in ref[1:].split(":"))
                if fi != len(fams) - 1 or mi != len(fams[fi]["members"]):
                    raise ParseError(f"member {ref} out of order", line=lineno, column=8)
                f = _fields(line, lineno)
                lvars = tuple(v - 1 for v in _int_tuple(f["vars"]) or ())
                mask = int(f["c"])
                if f["tail"] == "-":
                    comp = Component(half, lvars, mask)
                else:
                    if f["tail"] not in tails:
                        raise ParseError(f"unknown tail {f['tail']}", line=lineno)
                    table, tname = tails[f["tail"]]
                    comp = make_component(mask, len(lvars), table, _opt_int(f.get("v", "-")),
                                          linear_vars=lvars, tail_name=tname)
                fams[fi]["members"].append(comp)
            elif word == "phi":
                parts = line.split()
                if len(parts) != 4 or parts[2] != "->" or int(parts[1]) != len(phi):
                    raise ParseError("expected 'phi <b> -> F<i>:<j>' in block order", line=lineno)
                fi, mi = (int(x) for x in parts[3][1:].split(":"))
                if not (0 <= fi < len(fams) and 0 <= mi < len(fams[fi]["members"])):
                    raise ParseError(f"phi target {parts[3]} does not exist", line=lineno)
                phi.append((fi, mi))
            elif word == "end":
                ended = True
                break
            else:
                raise ParseError(f"unknown record {word!r}", line=lineno, column=1)
        except (KeyError, ValueError, IndexError) as exc:
            raise ParseError(f"malformed {word} record: {exc}", line=lineno) from exc
    if not ended:
        raise ParseError("truncated plan: missing 'end'", line=len(lines) + 1)
    families = [ComponentFamily(f["label"], f["k"], tuple(f["members"]), f["declared"], f["e"]) for f in fams]
    plan = ConstructionPlan(n, m, head["variant"], head["route"], a, e, families, phi, pivots, cprime, seed)
    plan.check()
    return plan


def read_plan(path) -> ConstructionPlan:
    return parse_plan(Path(path).read_text())


def write_plan(path, plan: ConstructionPlan) -> None:
    Path(path).write_text(format_plan(plan))
