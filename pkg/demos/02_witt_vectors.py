"""Witt vectors: universal addition polynomials and layer equations.

The addition rule is derived once per (p, n) from the ghost components
over the integers; evaluating the reduced polynomials gives exact vector
arithmetic over any char-p field.  A symbol w in W_m(K) unfolds into the
defining equations x_i^p - x_i = g_i of its iterated degree-p extension.
"""

from charp import (
    FunctionField,
    GhostCalculus,
    ValuedField,
    WittVector,
    asw_layer_equations,
    witt_add,
    witt_neg,
)

print("== universal addition polynomials (p = 2, length 3) ==")
calc = GhostCalculus.get(2, 3)
for i, s in enumerate(calc.add_mod_p, 1):
    print(f"S_{i} = {s.to_string()}")
print("ghost identity w_i(S) = w_i(X) + w_i(Y) holds:",
      calc.ghost_identity_holds())

print()
print("== arithmetic in W_2 over F_2 ==")
f2 = FunctionField(2, ())
one, zero = f2.one(), f2.zero()
w = WittVector(f2, [one, zero])
print(f"(1,0) + (1,0) = {witt_add(w, w).to_strings()}   (carries like Z/4)")
print(f"-(1,0)        = {witt_neg(w).to_strings()}")

print()
print("== symbolic components ==")
sym = FunctionField(2, ("a1", "a2", "b1", "b2"))
a = WittVector(sym, [sym.var("a1"), sym.var("a2")])
b = WittVector(sym, [sym.var("b1"), sym.var("b2")])
print(f"(a1,a2) + (b1,b2) = {witt_add(a, b).to_strings()}")

print()
print("== layer equations of a symbol over K ==")
K = ValuedField(2, ("u1",))
omega = WittVector(K, [K.parse("u1/t^2"), K.zero()])
system = asw_layer_equations(omega)
for line in system.equations():
    print(f"  {line}")
print("generator shifts of the cyclic automorphism:",
      [s.to_string() for s in system.sigma_shifts])
residual = system.witt_relation_residual()
print("substituting the equations back into the Witt relation leaves:",
      [r.to_string() for r in residual])
