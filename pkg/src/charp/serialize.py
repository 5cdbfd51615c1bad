"""JSON artifacts and their offline re-verification.

Every emitted document carries the witnesses needed to recheck its own
certification block from scratch: verification rebuilds the objects from
the stored expressions (which re-runs the structural identity checks) and
recomputes every certificate, comparing field by field.  Any single-field
mutation of a certification block therefore fails verification.

Documents are deterministic: keys sorted, expressions canonical, probe
logs seeded.  Timestamps live in a ``meta`` section that verification
ignores and that ``reproducible`` mode omits entirely.
"""

import datetime
import json

from . import algebra as algebra_mod
from . import pstructure
from .errors import CharpError
from .fields import FunctionField, ValuedField
from .pstructure import ASClassCertificate, PIndependenceCertificate
from .towers import (
    InertialWitnessData,
    InseparableWitnessData,
    ResidueFieldPresentation,
    TowerElement,
    TowerField,
    certify_tower,
)

SCHEMA_TOWER = "charp/tower-v1"
SCHEMA_ALGEBRA = "charp/algebra-v1"
SCHEMA_REPORT = "charp/report-v1"
SCHEMA_WITT = "charp/witt-v1"


def canonical_json(doc):
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def write_document(doc, path):
    with open(path, "w") as fh:
        fh.write(canonical_json(doc))


def load_document(path):
    with open(path) as fh:
        return json.load(fh)


def _meta():
    return {"generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat()}


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------


def field_descriptor(field):
    if isinstance(field, ValuedField):
        return {
            "p": field.p,
            "model": "k(t)",
            "u_vars": list(field.unames),
            "t_var": field.tname,
        }
    return {"p": field.p, "model": "k", "u_vars": list(field.names)}


def field_from_descriptor(d):
    if d["model"] == "k(t)":
        return ValuedField(d["p"], tuple(d["u_vars"]), d.get("t_var", "t"))
    return FunctionField(d["p"], tuple(d["u_vars"]))


# ---------------------------------------------------------------------------
# towers
# ---------------------------------------------------------------------------


def _data_to_json(base, data, level):
    if level == 0:
        return base.to_string(data)
    return [_data_to_json(base, c, level - 1) for c in data]


def _data_from_json(base, doc, level):
    if level == 0:
        return base.parse(doc)
    return tuple(_data_from_json(base, c, level - 1) for c in doc)


def tower_to_dict(tower, reproducible=True):
    base = tower.base
    layers = []
    for i, layer in enumerate(tower.layers):
        entry = {
            "generator": layer.name,
            "rhs": _data_to_json(base, layer.rhs, i),
            "sigma_shift": _data_to_json(base, layer.sigma_shift, i),
        }
        if layer.witness_exponent is not None:
            entry["witness_exponent"] = layer.witness_exponent
        if layer.residue_class is not None:
            entry["residue_class"] = layer.residue_class.to_string()
        layers.append(entry)

    data = tower.valuation_data
    if data is None:
        valuation = {"kind": "none"}
    elif isinstance(data, InseparableWitnessData):
        k = base.residue_field
        valuation = {
            "kind": data.kind,
            "witness_exponents": list(data.exponents),
            "residue_classes": [c.to_string() for c in data.classes],
            "p_certificate": data.p_certificate.to_dict(k),
        }
    else:
        valuation = {
            "kind": data.kind,
            "residue_tower": tower_to_dict(data.residue_tower, reproducible=True),
            "seed_certificate": data.seed_certificate.to_dict(base.residue_field),
        }

    cert = tower.certification or certify_tower(tower)
    cert = dict(cert)
    provenance = {}
    if "construction_steps" in cert:
        provenance["construction_steps"] = cert.pop("construction_steps")
    doc = {
        "schema": SCHEMA_TOWER,
        "base": field_descriptor(base),
        "layers": layers,
        "valuation": valuation,
        "certification": cert,
    }
    if provenance:
        doc["provenance"] = provenance
    if not reproducible:
        doc["meta"] = _meta()
    return doc


def _p_certificate_from_dict(k, d):
    elements = [k.parse(e) for e in d["elements"]]
    return PIndependenceCertificate(elements, d["verdict"], d["witness"], d["report"])


def _as_certificate_from_dict(k, d):
    f = k.parse(d["element"])
    if d["member"]:
        witness = k.parse(d["witness"])
    else:
        witness = d["witness"]["degree_obstruction"]
    return ASClassCertificate(f, d["member"], witness)


def tower_from_dict(doc):
    if doc.get("schema") != SCHEMA_TOWER:
        raise CharpError(f"not a tower document: {doc.get('schema')!r}")
    base = field_from_descriptor(doc["base"])
    tower = TowerField(base)
    k = base.residue_field if isinstance(base, ValuedField) else base
    for i, entry in enumerate(doc["layers"]):
        rhs = TowerElement(tower, _data_from_json(base, entry["rhs"], i))
        shift = TowerElement(tower, _data_from_json(base, entry["sigma_shift"], i))
        residue_class = entry.get("residue_class")
        tower = tower.adjoin_as_layer(
            rhs,
            shift,
            name=entry["generator"],
            witness_exponent=entry.get("witness_exponent"),
            residue_class=k.parse(residue_class) if residue_class else None,
        )
    val = doc.get("valuation", {"kind": "none"})
    if val["kind"] == "inseparable-residues":
        classes = [k.parse(c) for c in val["residue_classes"]]
        tower.valuation_data = InseparableWitnessData(
            val["witness_exponents"],
            classes,
            _p_certificate_from_dict(k, val["p_certificate"]),
            ResidueFieldPresentation(k, classes),
        )
    elif val["kind"] == "inertial-lift":
        residue_tower = tower_from_dict(val["residue_tower"])
        tower.valuation_data = InertialWitnessData(
            residue_tower, _as_certificate_from_dict(k, val["seed_certificate"])
        )
    cert = dict(doc.get("certification") or {})
    steps = doc.get("provenance", {}).get("construction_steps")
    if steps is not None:
        cert["construction_steps"] = steps
    tower.certification = cert or None
    return tower


def verify_tower_dict(doc):
    """Rebuild the tower from its witnesses and recompute its certification."""
    problems = []
    try:
        tower = tower_from_dict(doc)
    except CharpError as exc:
        return False, [f"structure: {exc}"]
    stored = doc.get("certification", {})
    with_subspace = "fixed_subspace_dimension" in stored
    fresh = certify_tower(tower, fixed_subspace=with_subspace)
    for key in sorted(set(stored) | set(fresh)):
        if stored.get(key) != fresh.get(key):
            problems.append(
                f"certification.{key}: stored {stored.get(key)!r} != "
                f"recomputed {fresh.get(key)!r}"
            )
    val = doc.get("valuation", {})
    if val.get("kind") == "inseparable-residues":
        k = tower.base.residue_field
        cert = _p_certificate_from_dict(k, val["p_certificate"])
        if not (cert.verdict and cert.verify(k)):
            problems.append("valuation.p_certificate failed re-verification")
    if val.get("kind") == "inertial-lift":
        k = tower.base.residue_field
        seed = _as_certificate_from_dict(k, val["seed_certificate"])
        if seed.member or not seed.verify(k):
            problems.append("valuation.seed_certificate failed re-verification")
    return not problems, problems


# ---------------------------------------------------------------------------
# algebras
# ---------------------------------------------------------------------------


def algebra_block(entry, reproducible=True):
    """Serialize one demo algebra entry (algebra plus its certificates)."""
    A = entry["algebra"]
    return {
        "schema": SCHEMA_ALGEBRA,
        "tower": tower_to_dict(A.subfield, reproducible=reproducible),
        "slot": A.base.to_string(A.slot),
        "division": entry["division"].to_dict(),
        "certification": {
            "center_dimension": entry["center_dimension"],
            "inseparable_subfield": entry["inseparable_subfield"],
            "value_group": entry["value_group"].to_dict(),
        },
    }


def verify_algebra_block(doc):
    problems = []
    ok, tower_problems = verify_tower_dict(doc["tower"])
    problems.extend(f"tower.{p}" for p in tower_problems)
    try:
        tower = tower_from_dict(doc["tower"])
        K = tower.base
        slot = K.parse(doc["slot"])
        A = algebra_mod.build_algebra(tower, slot)
    except CharpError as exc:
        return False, problems + [f"structure: {exc}"]

    stored_div = doc.get("division", {})
    probes = stored_div.get("evidence", {}).get("probes", {})
    fresh_div = algebra_mod.division_certificate(
        A, seed=probes.get("seed", 0), trials=probes.get("count", 100)
    ).to_dict()
    if stored_div != fresh_div:
        problems.append("division certificate does not recompute identically")

    stored_cert = doc.get("certification", {})
    fresh_cert = {
        "center_dimension": algebra_mod.center_dimension(A),
        "inseparable_subfield": algebra_mod.inseparable_subfield_certificate(A),
        "value_group": algebra_mod.semiramified_residue(
            A, algebra_mod.inseparable_subfield_certificate(A)
        ).to_dict(),
    }
    for key in sorted(set(stored_cert) | set(fresh_cert)):
        if stored_cert.get(key) != fresh_cert.get(key):
            problems.append(
                f"certification.{key}: stored {stored_cert.get(key)!r} != "
                f"recomputed {fresh_cert.get(key)!r}"
            )
    return not problems, problems


# ---------------------------------------------------------------------------
# end-to-end reports
# ---------------------------------------------------------------------------


def report_to_dict(K, config, towers, algebras, report, reproducible=True):
    doc = {
        "schema": SCHEMA_REPORT,
        "config": config,
        "base": field_descriptor(K),
        "towers": [tower_to_dict(t, reproducible=reproducible) for t in towers],
        "algebras": [algebra_block(e, reproducible=reproducible) for e in algebras],
        "pair": report["pair"],
        "shared_inseparable_subfield": report["shared_inseparable_subfield"],
        "conclusion": report["conclusion"],
        "assumed_steps": report["assumed_steps"],
    }
    if not reproducible:
        doc["meta"] = _meta()
    return doc


def verify_report_dict(doc):
    problems = []
    towers = []
    for i, tdoc in enumerate(doc.get("towers", [])):
        ok, tp = verify_tower_dict(tdoc)
        problems.extend(f"towers[{i}].{p}" for p in tp)
        towers.append(tower_from_dict(tdoc) if ok else None)
    for i, adoc in enumerate(doc.get("algebras", [])):
        ok, ap = verify_algebra_block(adoc)
        problems.extend(f"algebras[{i}].{p}" for p in ap)

    pair = doc.get("pair", {})
    if pair.get("case") == "rank2m" and all(t is not None for t in towers):
        k = towers[0].base.residue_field
        res1 = towers[0].valuation_data.classes
        res2 = towers[1].valuation_data.classes
        trivial, rep = pstructure.subfield_intersection_trivial(k, res1, res2)
        if not trivial or rep != pair.get("intersection"):
            problems.append("pair.intersection does not recompute identically")
    elif pair.get("case") == "rank-m-as" and towers and towers[1] is not None:
        data = towers[1].valuation_data
        if not isinstance(data, InertialWitnessData):
            problems.append("pair: second tower is not an inertial lift")
        if pair.get("disjointness") != "by-type":
            problems.append("pair.disjointness mismatch")

    shared = doc.get("shared_inseparable_subfield", {})
    slots = {a.get("slot") for a in doc.get("algebras", [])}
    if len(slots) != 1 or shared.get("slot") not in slots:
        problems.append("algebras do not share the inseparable subfield slot")
    return not problems, problems


# ---------------------------------------------------------------------------
# witt vectors and dispatch
# ---------------------------------------------------------------------------


def witt_to_dict(vector):
    return {
        "schema": SCHEMA_WITT,
        "p": vector.p,
        "n": vector.n,
        "field": field_descriptor(vector.field),
        "components": vector.to_strings(),
    }


def verify_document(doc):
    """Dispatch on the schema field; returns (ok, problem lines)."""
    schema = doc.get("schema")
    if schema == SCHEMA_TOWER:
        return verify_tower_dict(doc)
    if schema == SCHEMA_ALGEBRA:
        return verify_algebra_block(doc)
    if schema == SCHEMA_REPORT:
        return verify_report_dict(doc)
    if schema == SCHEMA_WITT:
        try:
            field = field_from_descriptor(doc["field"])
            for c in doc["components"]:
                field.parse(c)
            return True, []
        except (CharpError, KeyError) as exc:
            return False, [f"witt: {exc}"]
    return False, [f"unknown schema {schema!r}"]
