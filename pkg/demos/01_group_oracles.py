"""Group oracles and their integer codings.

Every element of a built-in family is addressed by a natural number; code 0
is always the identity.  This walk-through shows the codings, the oracle
operations, and the difference between COMPUTABLE and CE presentations.
"""

from folnerlab import Budget, ball, eq_semidecide, make_group
from folnerlab.groups import parse_element, parse_elements

# -- a free group of rank 2: length-lex reduced words ----------------------

free = make_group("free:2")
a, b = parse_element(free, "a"), parse_element(free, "b")
print("free:2 codes:  e=0  a=%d  a^-1=%d  b=%d  b^-1=%d" % (
    a, free.inv(a), b, free.inv(b)))
ab = free.mult(a, b)
print("a*b has code %d, its inverse decodes back to b^-1 a^-1: %d == %d" % (
    ab, free.inv(ab), parse_element(free, "b^-1a^-1")))

print("ball of radius 2 over {a,b} has %d elements (1 + 4 + 12)" % len(
    ball(free, parse_elements(free, "a,b"), 2)))

# -- Z^d with the zig-zag/Cantor coding -------------------------------------

z2 = make_group("zd:2")
v, w = parse_element(z2, "(1,0)"), parse_element(z2, "(0,1)")
print("\nzd:2: (1,0)+(0,1) = (1,1):", z2.decode_vector(z2.mult(v, w)))

# -- the lamplighter: lamp configurations with a cursor ----------------------

lamp = make_group("lamplighter")
s, t = lamp.generator_names["s"], lamp.generator_names["t"]
tst = lamp.mult(lamp.mult(t, s), lamp.inv(t))
print("\nlamplighter: t s t^-1 decodes to", lamp.decode_element(tst),
      "(lamp toggled at position 1)")

# -- a CE presentation: Z with a redundant generator -------------------------

rz = make_group("redundant-z")
x, y = parse_element(rz, "x"), parse_element(rz, "y")
print("\nredundant-z: codes are words over x,y; x and y both denote 1")
print("eq_semidecide(x, y, 200 steps):", eq_semidecide(rz, x, y, Budget(200)))
xx = rz.mult(x, x)
print("eq_semidecide(x, x^2, 5000 steps):",
      eq_semidecide(rz, x, xx, Budget(5000)), "(never enumerated: 1 != 2)")
