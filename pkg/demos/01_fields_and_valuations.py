"""Tour of the exact field arithmetic: k = F_p(u1, u2) and K = k(t).

K carries the t-adic valuation and models a complete discrete valued field
of characteristic p; all arithmetic is exact, so valuations, residues, and
truncated Laurent expansions are computed with no precision management.
"""

from charp import FunctionField, ValuedField

print("== the residue field k = F_2(u1, u2) ==")
k = FunctionField(2, ("u1", "u2"))
u1, u2 = k.gens()
x = (u1 + u2) ** 2
print(f"(u1 + u2)^2          = {x.to_string()}   (Frobenius is additive)")
y = (u1 ** 2 - u2 ** 2) / (u1 + u2)
print(f"(u1^2 - u2^2)/(u1+u2) = {y.to_string()}   (fractions auto-reduce)")

print()
print("== the valued field K = k(t), t-adic ==")
K = ValuedField(2, ("u1", "u2"))
t = K.uniformizer()

for text in ("u1/t^2", "t^3*(1+t)", "u1 + t", "t - t"):
    e = K.parse(text)
    print(f"v({text:12s}) = {K.valuation(e)}")

print()
print("residues of integral elements (t -> 0):")
for text in ("u1 + t*u2", "1/(1+t)", "t"):
    e = K.parse(text)
    print(f"residue({text:10s}) = {K.residue(e).to_string()}")

print()
print("Laurent expansions:")
for text, n in (("1/(1-t)", 5), ("u1/t^2 + u2", 4), ("(u1+t)/(u2*t)", 4)):
    print(f"{text:15s} = {K.laurent_expand(K.parse(text), n)}")

print()
print("canonical printing round-trips exactly:")
e = K.parse("(u2 + u1*t)/(t^2 + u1)")
print(f"parsed   : {e.to_string()}")
print(f"reparsed : {K.parse(e.to_string()).to_string()}")
assert K.parse(e.to_string()) == e
