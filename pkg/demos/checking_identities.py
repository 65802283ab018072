"""
Checking the Hopf-algebra identities
====================================

Every identity in the package can be run on a capped basis, with seeded
characters.  This is what ``python3 -m regtrees check`` does.
"""

from regtrees.identities import SuiteContext, format_report, run_suites
from regtrees.rules import builtin

ctx = SuiteContext(builtin("kpz"), max_edges=4, seed=2)
print(len(ctx.basis), "trees,", len(ctx.plus_basis), "elements of T_+")

outcomes = run_suites(ctx, ["cointeraction", "antipode"])
report = format_report(outcomes, ["kpz, 4 edges"])
print("\n".join(line for line in report.splitlines() if line.startswith(("#", "summary"))))
