"""Folner sets: verification, search, the Folner function, and sequences.

A finite set F is n-Folner for D when every translate defect |F \\ xF|/|F|
is at most 1/n.  All ratios are exact rationals.
"""

from folnerlab import Budget, make_group
from folnerlab.folner import (
    folner_function,
    folner_sequence,
    is_n_folner,
    search_folner,
)
from folnerlab.groups import parse_elements

z = make_group("zd:1")
D = parse_elements(z, "+1,-1")

F = parse_elements(z, "0,+1,+2,+3,+4")
ok, defects = is_n_folner(z, F, D, 5)
print("interval of length 5, D = {+1,-1}: 5-Folner?", ok,
      " defects:", {z.decode_vector(x)[0]: str(d) for x, d in defects.items()})

cert = search_folner(z, D, 3, Budget(10**5))
print("\nsearch at n=3 found F of size", len(cert.F),
      "with max defect", cert.max_defect())

print("\nFolner function of Z against D = {+1}:")
Dp = parse_elements(z, "+1")
for n in range(1, 7):
    print("  n=%d -> minimal size %s" % (n, folner_function(z, Dp, n, Budget(10**6))))

print("\nnon-amenable contrast: free:2 against its generators stays UNKNOWN")
free = make_group("free:2")
gens = parse_elements(free, "a,a^-1,b,b^-1")
print("  search at n=4, small budget:", search_folner(free, gens, 4, Budget(3000)))

print("\neffective Folner sequence of the lamplighter (first two members):")
lam = make_group("lamplighter")
for j in (1, 2):
    cert = folner_sequence(lam, j, Budget(10**5))
    print("  j=%d: F = %s, defects all <= 1/%d" % (j, list(cert.F), j))
