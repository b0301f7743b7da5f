import pytest

from resbool.constructor import build, certify, plan_construction
from resbool.errors import ParseError
from resbool.planfile import format_plan, parse_plan, read_plan, write_plan
from resbool.search import search


@pytest.mark.parametrize("n, m, variant, kw", [
    (16, 1, "C1", {}),
    (12, 1, "C2", {}),
    (20, 2, "C2", {}),
    (14, 1, "C1", {"seed": 5}),
    (12, 1, "C2", {"pivots": (2, 5)}),
])
def test_round_trip(n, m, variant, kw, tmp_path):
    plan = plan_construction(n, m, variant, **kw)
    text = format_plan(plan)
    back = parse_plan(text)
    assert format_plan(back) == text
    assert (back.n, back.m, back.variant, back.route, back.a, back.e, back.pivots, back.cprime, back.seed) == \
        (plan.n, plan.m, plan.variant, plan.route, plan.a, plan.e, plan.pivots, plan.cprime, plan.seed)
    assert back.phi == plan.phi
    assert certify(back) == certify(plan)
    assert build(back) == build(plan)
    path = tmp_path / "p.plan"
    write_plan(path, plan)
    assert format_plan(read_plan(path)) == text


def test_round_trip_seeded():
    seeds = search(4, 0, 4, limit=2)
    plan = plan_construction(12, 1, "C3", seeds=seeds, select=(1, 2))
    back = parse_plan(format_plan(plan))
    assert back.e == (0, 1, 0)
    assert build(back) == build(plan)


def test_phi_lines():
    text = format_plan(plan_construction(12, 1, "C1"))
    assert "phi 0 -> F0:0" in text.splitlines()
    assert text.endswith("end\n")


@pytest.mark.parametrize("mutate, line", [
    (lambda t: t.replace("resbool-plan 1", "plan"), 1),
    (lambda t: t.replace("\nm=1\n", "\nq=1\n"), 3),
    (lambda t: t.replace("end\n", ""), None),
    (lambda t: t.replace("phi 3 -> F0:3", "phi 3 -> F9:3"), None),
    (lambda t: t.replace("phi 3 -> F0:3", "phi 4 -> F0:3"), None),
])
def test_parse_errors(mutate, line):
    text = format_plan(plan_construction(12, 1, "C1"))
    with pytest.raises(ParseError) as exc:
        parse_plan(mutate(text))
    if line is not None:
        assert exc.value.line == line


def test_non_injective_phi_rejected():
    from resbool.errors import VerificationError
    text = format_plan(plan_construction(12, 1, "C1"))
    with pytest.raises(VerificationError):
        parse_plan(text.replace("phi 3 -> F0:3", "phi 3 -> F0:2"))
