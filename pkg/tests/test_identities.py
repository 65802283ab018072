import pytest

from regtrees.identities import SUITES, Outcome, SuiteContext, format_report, mult_legs, run_suites, splice
from regtrees.lincomb import LinComb
from regtrees.rules import builtin
from regtrees.trees import Tree, tree_product


@pytest.mark.parametrize("rule_name", ["hermite", "kpz", "gkpz", "phi43", "kpzbar", "gkpzbar"])
@pytest.mark.parametrize("suite", sorted(SUITES))
def test_small_suites_pass(rule_name, suite):
    ctx = SuiteContext(builtin(rule_name), 3, seed=1)
    outcomes = run_suites(ctx, [suite])
    failed = [o for o in outcomes if not o.ok]
    assert outcomes and not failed, format_report(failed)


def test_context_is_deterministic():
    a = SuiteContext(builtin("kpz"), 4, seed=5)
    b = SuiteContext(builtin("kpz"), 4, seed=5)
    assert a.plus_basis == b.plus_basis
    assert [g.x for g in a.plus_characters] == [g.x for g in b.plus_characters]


def test_splice_and_merge():
    a, b = Tree((1, 0)), Tree((0, 1))
    x = LinComb.of((a, b), 3)
    doubled = splice(x, [None, lambda t: LinComb.of((t, t))])
    assert doubled == LinComb.of((a, b, b), 3)
    merged = mult_legs(doubled, 0, 2, lambda p, q: LinComb.of(tree_product(p, q)))
    assert merged == LinComb.of((tree_product(a, b), b), 3)


def test_report_format():
    text = format_report([Outcome("law", "t", True), Outcome("law", "u", False, "2*X_0")], ["header"])
    lines = text.splitlines()
    assert lines[0] == "# header"
    assert lines[1] == "PASS\tlaw\tt"
    assert lines[2] == "FAIL\tlaw\tu\tdiff: 2*X_0"
    assert lines[-1] == "summary\tTOTAL\t1\t1"
