"""Reducing a noisy invariant potential to its normal form.

Start from 2 v1 v2 v3 + v1^5 + v2^5 + 3 v3^5 and add invariant terms of
higher degree.  The normal form removes every term except the cubic and
the three pure fifth powers, using vector-field exponentials only.  The
recorded gauge log replays exactly, and HH is unchanged.
"""
import json

from ainfty import CyclicAction, MCPair, hh_ranks, invariant_hh, normal_form, parse_problem
from ainfty.exparse import canonical_json
from ainfty.mcgauge import replay_log
from ainfty.series import render_series

PROBLEM = b"""
vars v1 v2 v3
trunc 13
group cyclic 5 weights 1 1 3
W = 2*v1*v2*v3 + v1^5 + v2^5 + 3*v3^5 + v1^2*v2^2*v3^2 - 1/2*v1^3*v2^2 + v1*v2^2*v3^4 + 2*v1^3*v2^3*v3^3
"""

prob = parse_problem(PROBLEM)
W, G = prob.W, prob.action
rep = normal_form(W, G, 2)

print("input :", render_series(W))
print("output:", render_series(rep.output))
print("lambda' =", rep.lam, " mu' =", [str(m) for m in rep.mu], " status:", rep.status)
print("gauge steps:")
for stage, step in zip(rep.stages, rep.log):
    print("  stage %s, degree %s: %s" % (stage["stage"], stage["degree"],
                                         step.to_dict()["field"]))

log = json.loads(canonical_json(rep.as_dict()))["gauge_log"]
print("replay of the serialised log matches:",
      render_series(replay_log(W, log)) == render_series(rep.output))

print("scaling to (-1, 1, 1, 1), as exponents of (-lambda, mu1, mu2, mu3):")
print("  epsilon:", rep.scaling["epsilon"], " verified:", rep.scaling["verified"])

for name, V in (("before", W), ("after", rep.output)):
    full = hh_ranks(MCPair(V))
    inv = invariant_hh(MCPair(V), G)
    print("HH %s: full (%d, %d), invariant (%d, %d)"
          % (name, full.even, full.odd, inv.even, inv.odd))
