"""Cyclic towers: trace-one elements, additive Hilbert 90, and ascent.

Starting from one Artin-Schreier layer, each ascent step finds beta with
Tr(beta) = 1, solves sigma(alpha) - alpha = beta^p - beta in closed form,
and adjoins a new layer g^p - g = alpha with sigma(g) = g + beta.  The
result stays cyclic, which the sigma-order certificate confirms.
"""

from charp import FunctionField, TowerField, albert_ascend, albert_data

print("== a degree-3 layer over k = F_3(u1) ==")
k = FunctionField(3, ("u1",))
T = TowerField(k).adjoin_as_layer(k.var("u1"), 1)
g = T.gen(0)
print(f"relation: x1^3 - x1 = u1, sigma(x1) = x1 + 1")
print(f"sigma order     : {T.sigma_order()}")
print(f"trace(x1)       : {T.trace(g).to_string()}")
print(f"trace(x1^2)     : {T.trace(g ** 2).to_string()}")
beta = T.find_trace_one()
print(f"trace-one element: {T.describe(beta.data)}")

print()
print("== Hilbert 90 in closed form ==")
pbeta = beta ** 3 - beta
print(f"P(beta) has trace {T.trace(pbeta).to_string()}")
alpha = T.hilbert90_solve(pbeta)
print(f"alpha solves sigma(alpha) - alpha = P(beta):",
      T.apply_sigma(alpha) - alpha == pbeta)

print()
print("== one ascent: degree 3 -> degree 9 ==")
alpha, T2 = albert_ascend(T)
print(f"new tower degree {T2.degree}, sigma order {T2.sigma_order()}")
print(f"sigma-fixed subspace dimension over k: {T2.sigma_fixed_dimension()}")

print()
print("== p = 2: two ascents, degree 8, all certified ==")
k2 = FunctionField(2, ("u1",))
S = TowerField(k2).adjoin_as_layer(k2.var("u1"), 1)
for step in (1, 2):
    beta, alpha = albert_data(S)
    assert S.trace(beta).is_one()
    _, S = albert_ascend(S)
    print(f"after ascent {step}: degree {S.degree}, sigma order {S.sigma_order()}")
