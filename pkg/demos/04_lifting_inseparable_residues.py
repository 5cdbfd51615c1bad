"""Lifting purely inseparable residue data to cyclic extensions of K.

Given units a_1, ..., a_m of K whose residues are p-independent, the lift
builds a cyclic degree-p^m tower over K whose residue field is exactly
k(a_1^(1/p), ..., a_m^(1/p)).  The key bookkeeping: integral witnesses
y_i = t^(e_i) x_i whose residues generate the residue field, and a
valuation-guided choice of the t-power in each layer's right-hand side.
"""

from charp import (
    ValuedField,
    WittVector,
    cyclic_lift_inseparable,
    disjoint_pair,
    gauss_valuation,
    inertial_lift,
    tower_residue,
)

print("== m = 2 over K = F_2(u1,u2)(t) ==")
K = ValuedField(2, ("u1", "u2"))
T = cyclic_lift_inseparable(K, [K.var("u1"), K.var("u2")], fixed_subspace_check=True)
for i, layer in enumerate(T.layers):
    rhs = T.layer_rhs(i)
    print(f"layer {i + 1}: {layer.name}^2 - {layer.name} = {T.describe(rhs.data)}")
steps = T.certification["construction_steps"]
print(f"t-power choices n_i: {[s['n'] for s in steps]}")
print(f"carried-term valuations (> 0 required): "
      f"{[s['carry_valuation'] for s in steps[1:]]}")
print(f"sigma order: {T.sigma_order()} (= tower degree {T.degree})")

print()
print("== integral witnesses and residues ==")
t = K.uniformizer()
pres = T.valuation_data.presentation
for i, e in enumerate(T.valuation_data.exponents):
    y = T.lift(t ** e) * T.gen(i)
    print(f"y{i + 1} = t^{e}*x{i + 1}: gauss valuation {gauss_valuation(T, y)}, "
          f"residue {tower_residue(T, y).to_string()}, "
          f"residue^2 = {tower_residue(T, y ** 2).to_string()}")

print()
print("== the certification block ==")
for key, value in sorted(T.certification.items()):
    if key != "construction_steps":
        print(f"  {key}: {value}")

print()
print("== inertial lifts keep the defining equations over k ==")
k = K.residue_field
TI = inertial_lift(K, WittVector(k, [k.var("u1"), k.zero()]))
print(f"inertial lift of symbol (u1, 0): degree {TI.degree}, "
      f"residue tower cyclic: {TI.valuation_data.residue_tower.sigma_order()}")

print()
print("== disjoint residue pairs ==")
K4 = ValuedField(2, ("u1", "u2", "u3", "u4"))
t1, t2, rep = disjoint_pair(K4, 2, "rank2m", [K4.var(f"u{i}") for i in (1, 2, 3, 4)])
print(f"rank2m at m=2: residue intersection dimension "
      f"{rep['intersection']['dim_intersection']} (1 = trivial)")
t1b, t2b, repb = disjoint_pair(
    K, 1, "rank-m-as", [K.var("u1")], as_witness=k.var("u1")
)
print(f"rank-m-as at m=1: disjoint {repb['disjointness']} ({repb['reason'][:48]}...)")
