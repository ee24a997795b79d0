"""The effective paradoxical decomposition of the rank-2 free group.

From the generator key the pipeline expands to a 17-element key K with
|KF| >= 3|F| for every finite F, builds the doubling graph (left g joined
to every right h in Kg), and extracts a computable perfect (1,2)-matching.
Reading the matching backwards yields total maps theta1, theta2 into K
whose level sets A_k = {m : theta1(m) = k} and B_k = {m : theta2(m) = k}
partition the group twice over: the group paradox, code by code.
"""

from folnerlab import Budget, make_group
from folnerlab.groups import parse_elements
from folnerlab.paradox import (
    build_decomposition,
    decomp_membership,
    verify_decomposition_prefix,
)

free = make_group("free:2")
K0 = parse_elements(free, "a,a^-1,b,b^-1")
decomp = build_decomposition(free, K0, 1)
print("expansion exponent n1 =", decomp.key.n1, " |K| =", len(decomp.key.K))

b = Budget(10**5)
for m in range(4):
    psi1, psi2 = decomp.psi_pair(m, b)
    th1, th2 = decomp.theta_pair(m, b)
    print("m=%d: psi = (%d, %d), theta = (%d, %d), both in K" % (
        m, psi1, psi2, th1, th2))

m = 2
t1, _ = decomp.theta_pair(m, b)
print("\ncode %d lies in A_k exactly for k = theta1(%d) = %d:" % (m, m, t1))
hits = [k for k in decomp.key.K if decomp_membership(decomp, k, m, "A", b) == "IN"]
print("  membership scan over K finds:", hits)

report = verify_decomposition_prefix(decomp, 10, Budget(10**6))
print("\nprefix verification of codes 0..9: %d records, violations: %r" % (
    len(report["resolved"]), report["violations"]))
