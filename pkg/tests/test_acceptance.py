"""Acceptance suite: the eight desk-scale criteria, one test each.

Each test prints a single PASS line (visible with ``pytest -s`` or ``-v``);
tolerances are exact equality throughout, with the stated wall-clock
budgets asserted where given.
"""

import random
import time

from charp.cli import main
from charp.fields import FunctionField, ValuedField
from charp.serialize import report_to_dict, verify_document, write_document
from charp.algebra import (
    build_algebra,
    center_dimension,
    division_certificate,
    inseparable_subfield_certificate,
    semiramified_residue,
    theorem2_demo,
)
from charp.towers import (
    TowerField,
    albert_data,
    albert_ascend,
    cyclic_lift_inseparable,
    disjoint_pair,
    gauss_valuation,
    tower_residue,
)
from charp.witt import GhostCalculus, WittVector, witt_add, witt_neg


def _report(num, label, t0):
    print(f"ACCEPTANCE {num} ({label}): PASS ({time.monotonic() - t0:.1f}s)")


def _witt_component(k, rng, allow_dense_fraction):
    """Small random element of F_p(u1,u2); denominators stay monomial at
    length 3, where iterated p^2-th powers would otherwise blow up."""
    num = k.random_element(rng, degree=2, terms=2)
    roll = rng.random()
    if roll < 0.25 and not num.is_zero():
        mono = k.from_poly(k.ring.monomial(tuple(rng.randrange(3) for _ in range(2))))
        return num / mono
    if roll < 0.4 and allow_dense_fraction:
        den = k.random_element(rng, degree=1, terms=2)
        if not den.is_zero():
            return num / den
    return num


def test_acceptance_1_witt_group_laws():
    t0 = time.monotonic()
    total = 0
    for p in (2, 3):
        k = FunctionField(p, ("u1", "u2"))
        for n in (1, 2, 3):
            assert GhostCalculus.get(p, n).ghost_identity_holds()
            rng = random.Random(100 * p + n)
            vectors = []
            for _ in range(34):
                comps = [_witt_component(k, rng, n <= 2) for _ in range(n)]
                vectors.append(WittVector(k, comps))
            total += len(vectors)
            for i in range(0, len(vectors) - 2, 3):
                a, b, c = vectors[i : i + 3]
                assert witt_add(witt_add(a, b), c) == witt_add(a, witt_add(b, c))
                assert witt_add(a, b) == witt_add(b, a)
            for a in vectors:
                assert witt_add(a, witt_neg(a)).is_zero()
    assert total >= 200
    elapsed = time.monotonic() - t0
    assert elapsed < 30, f"witt laws took {elapsed:.1f}s"
    _report(1, "witt group laws", t0)


def test_acceptance_2_albert_ascent():
    t0 = time.monotonic()
    for p in (2, 3):
        k = FunctionField(p, ("u1",))
        tower = TowerField(k).adjoin_as_layer(k.var("u1"), 1)
        assert tower.sigma_order() == p
        ascents = 2 if p == 2 else 1
        for step in range(ascents):
            beta, alpha = albert_data(tower)
            assert tower.trace(beta).is_one()
            lhs = tower.apply_sigma(alpha) - alpha
            assert lhs == beta ** p - beta  # sigma(alpha) - alpha = P(beta)
            _, tower = albert_ascend(tower)
            assert tower.sigma_order() == p ** (2 + step)
    elapsed = time.monotonic() - t0
    assert elapsed < 120, f"albert ascent took {elapsed:.1f}s"
    _report(2, "albert ascent", t0)


CONFIGS = [(2, 1), (2, 2), (3, 1)]


def _lift_tower(p, m):
    K = ValuedField(p, tuple(f"u{i + 1}" for i in range(m)))
    gens = [K.var(f"u{i + 1}") for i in range(m)]
    return K, cyclic_lift_inseparable(K, gens, fixed_subspace_check=True)


def test_acceptance_3_cyclic_lift_bundle():
    t0 = time.monotonic()
    for p, m in CONFIGS:
        K, T = _lift_tower(p, m)
        cert = T.certification
        assert T.degree == p ** m
        assert cert["sigma_order"] == p ** m
        assert cert["fixed_subspace_dimension"] == 1
        assert cert["valuation"]["p_independent"] is True
        assert all(cert["valuation"]["residue_relations"])
        assert all(cert["valuation"]["residue_units"])
        # Y_i^p = a_i, re-checked directly against the presentation
        pres = T.valuation_data.presentation
        t = K.uniformizer()
        for i in range(m):
            y = T.lift(t ** T.valuation_data.exponents[i]) * T.gen(i)
            assert tower_residue(T, y ** p) == pres.embed(T.valuation_data.classes[i])
        for step in cert["construction_steps"][1:]:
            assert step["carry_valuation"] > 0
    elapsed = time.monotonic() - t0
    assert elapsed < 300, f"lift bundle took {elapsed:.1f}s"
    _report(3, "cyclic lift of inseparable residues", t0)


def test_acceptance_4_gauss_valuation():
    t0 = time.monotonic()
    for p, m in CONFIGS:
        K, T = _lift_tower(p, m)
        rng = random.Random(10 * p + m)
        for _ in range(100):
            z = T.random_element(rng)
            w = T.random_element(rng)
            vz, vw = gauss_valuation(T, z), gauss_valuation(T, w)
            assert gauss_valuation(T, z * w) == vz + vw
            vs = gauss_valuation(T, z + w)
            assert vs >= min(vz, vw)
            if vz != vw:
                assert vs == min(vz, vw)
        for _ in range(25):
            c = K.random_element(rng)
            assert gauss_valuation(T, T.lift(c)) == K.valuation(c)
    _report(4, "gauss valuation laws", t0)


def test_acceptance_5_disjoint_pairs():
    t0 = time.monotonic()
    for m, unames in ((1, ("u1", "u2")), (2, ("u1", "u2", "u3", "u4"))):
        K = ValuedField(2, unames)
        gens = [K.var(u) for u in unames]
        _, _, rep = disjoint_pair(K, m, "rank2m", gens)
        assert rep["intersection"]["dim_intersection"] == 1
    K = ValuedField(2, ("u1",))
    k = K.residue_field
    _, t2, rep = disjoint_pair(K, 1, "rank-m-as", [K.var("u1")], as_witness=k.var("u1"))
    assert rep["disjointness"] == "by-type"
    seed = t2.valuation_data.seed_certificate
    assert not seed.member and seed.verify(k)
    _report(5, "disjoint residue pairs", t0)


def test_acceptance_6_division_criterion():
    t0 = time.monotonic()
    for p, m in CONFIGS:
        K, T = _lift_tower(p, m)
        A = build_algebra(T, K.uniformizer())
        cert = division_certificate(A, seed=0, trials=100)
        assert cert.verdict
        assert cert.evidence["probes"]["all_nonzero"]
        assert cert.evidence["probes"]["count"] == 100
        assert center_dimension(A) == 1
        vg = semiramified_residue(A, inseparable_subfield_certificate(A))
        assert vg.total_degree == p ** (2 * m)
        assert vg.value_index == vg.residue_degree == p ** m
    elapsed = time.monotonic() - t0
    assert elapsed < 300, f"division criterion took {elapsed:.1f}s"
    _report(6, "division criterion and fundamental equality", t0)


def test_acceptance_7_presentation_fidelity():
    t0 = time.monotonic()
    from charp.towers import inertial_lift

    K = ValuedField(2, ("u1", "u2"))
    k = K.residue_field
    L = inertial_lift(K, WittVector(k, [k.var("u1"), k.zero()]))
    A = build_algebra(L, K.uniformizer())
    x1, x2 = L.gen(0), L.gen(1)
    conj = [A.conjugate_by_y(A.scalar(x)) for x in (x1, x2)]
    shifted = witt_add(WittVector(L, [x1, x2]), WittVector(L, [L.one(), L.zero()]))
    assert conj[0] == A.scalar(shifted.components[0])
    assert conj[1] == A.scalar(shifted.components[1])
    _report(7, "crossed-product presentation fidelity", t0)


def test_acceptance_8_end_to_end_reports(tmp_path):
    t0 = time.monotonic()
    for p, m in CONFIGS:
        unames = tuple(f"u{i + 1}" for i in range(2 * m))
        K = ValuedField(p, unames)
        gens = [K.var(u) for u in unames]
        slot = K.uniformizer()
        t1, t2, algebras, report = theorem2_demo(
            K, m, "rank2m", gens, slot, seed=0, trials=100
        )
        config = {
            "p": p,
            "m": m,
            "case": "rank2m",
            "gens": [g.to_string() for g in gens],
            "as_witness": None,
            "b": "t",
            "seed": 0,
            "trials": 100,
            "u_vars": list(unames),
        }
        doc = report_to_dict(K, config, [t1, t2], algebras, report, reproducible=True)
        ok, problems = verify_document(doc)
        assert ok, problems
        path = tmp_path / f"report_{p}_{m}.json"
        write_document(doc, str(path))
        assert main(["verify", str(path)]) == 0
        assert report["assumed_steps"]  # the linkage step stays labeled assumed
    _report(8, "end-to-end reports re-verify offline", t0)
