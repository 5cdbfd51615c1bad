"""Command-line front end.

Subcommands:

* ``lift``    -- build a cyclic tower over K with prescribed inseparable
                 residue generators; writes tower JSON.
* ``witt``    -- add/neg on Witt vectors, or print the layer equations of a
                 symbol.
* ``demo``    -- the full two-algebra pipeline; writes a report JSON.
* ``verify``  -- recheck any emitted document offline from its witnesses.

Exit codes: 0 pass, 1 certificate or construction failure, 2 usage error.
A JSON config file can preload any flag; explicit flags win.  The env var
``CHARP_WITT_CACHE`` names a directory for cached universal Witt
polynomials.
"""

import argparse
import json
import re
import sys
from dataclasses import dataclass, field

from . import serialize
from .algebra import theorem2_demo
from .errors import CharpError
from .expressions import tokenize
from .fields import FunctionField, ValuedField
from .towers import cyclic_lift_inseparable
from .witt import LENGTH_BOUND_DEFAULT, WittVector, asw_layer_equations, witt_add, witt_neg


@dataclass
class JobConfig:
    p: int = 2
    m: int = 1
    case: str = "rank2m"
    gens: list = field(default_factory=list)
    as_witness: str = None
    b: str = "t"
    vars: list = None
    seed: int = 0
    trials: int = 100
    witt_len_bound: int = LENGTH_BOUND_DEFAULT
    out: str = None
    reproducible: bool = False

    @classmethod
    def from_args(cls, args):
        cfg = cls()
        if getattr(args, "config", None):
            with open(args.config) as fh:
                stored = json.load(fh)
            for key, value in stored.items():
                if not hasattr(cfg, key):
                    raise CharpError(f"unknown config key {key!r}")
                setattr(cfg, key, value)
        for key in vars(cfg):
            value = getattr(args, key, None)
            if value is not None:
                setattr(cfg, key, value)
        if isinstance(cfg.gens, str):
            cfg.gens = _split_list(cfg.gens)
        if isinstance(cfg.vars, str):
            cfg.vars = _split_list(cfg.vars)
        return cfg


def _split_list(text):
    return [part.strip() for part in text.split(",") if part.strip()]


def _names_in(expressions):
    names = set()
    for text in expressions:
        for kind, value, _ in tokenize(text):
            if kind == "name":
                names.add(value)
    return names


def _natural_key(name):
    m = re.match(r"([A-Za-z_]+)(\d*)$", name)
    if not m:
        return (name, 0)
    return (m.group(1), int(m.group(2) or 0))


def _valued_field(cfg, expressions):
    """K = F_p(u-vars)(t); u-vars from --vars or inferred from expressions."""
    if cfg.vars:
        unames = [n for n in cfg.vars if n != "t"]
    else:
        unames = sorted(_names_in(expressions) - {"t"}, key=_natural_key)
    if not unames:
        raise CharpError("no residue variables; pass --vars or use u-variables")
    return ValuedField(cfg.p, tuple(unames))


def _print_cert_lines(block, prefix=""):
    for key in sorted(block):
        value = block[key]
        if isinstance(value, dict):
            _print_cert_lines(value, prefix=f"{prefix}{key}.")
        else:
            print(f"  {prefix}{key}: {value}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_lift(args):
    cfg = JobConfig.from_args(args)
    if not cfg.gens:
        raise CharpError("lift needs --gens")
    if len(cfg.gens) != cfg.m:
        raise CharpError(f"lift needs exactly m = {cfg.m} generators")
    K = _valued_field(cfg, cfg.gens)
    lifts = [K.parse(g) for g in cfg.gens]
    tower = cyclic_lift_inseparable(K, lifts, fixed_subspace_check=True)
    doc = serialize.tower_to_dict(tower, reproducible=cfg.reproducible)
    out = cfg.out or "tower.json"
    serialize.write_document(doc, out)
    print(f"tower of degree {tower.degree} over {K!r} -> {out}")
    _print_cert_lines(doc["certification"])
    return 0


def _witt_context(cfg, vectors):
    names = _names_in(",".join(vectors).split(","))
    if cfg.vars:
        unames = [n for n in cfg.vars if n != "t"]
        has_t = "t" in cfg.vars or "t" in names
    else:
        unames = sorted(names - {"t"}, key=_natural_key)
        has_t = "t" in names
    if has_t:
        return ValuedField(cfg.p, tuple(unames))
    return FunctionField(cfg.p, tuple(unames))


def _parse_vector(field_, text, n):
    parts = _split_list(text)
    if len(parts) != n:
        raise CharpError(f"expected {n} components, got {len(parts)}")
    return WittVector(field_, [field_.parse(p) for p in parts])


def cmd_witt(args):
    cfg = JobConfig.from_args(args)
    n = args.len
    if n > cfg.witt_len_bound:
        raise CharpError(
            f"length {n} exceeds the configured bound {cfg.witt_len_bound}"
        )
    field_ = _witt_context(cfg, args.vectors)
    if args.witt_op == "add":
        a = _parse_vector(field_, args.vectors[0], n)
        b = _parse_vector(field_, args.vectors[1], n)
        result = witt_add(a, b, cfg.witt_len_bound)
    elif args.witt_op == "neg":
        a = _parse_vector(field_, args.vectors[0], n)
        result = witt_neg(a, cfg.witt_len_bound)
    else:  # layers
        omega = _parse_vector(field_, args.vectors[0], n)
        system = asw_layer_equations(omega, length_bound=cfg.witt_len_bound)
        for line in system.equations():
            print(line)
        residual = system.witt_relation_residual()
        if any(not r.is_zero() for r in residual):
            raise CharpError("layer equations failed the Witt-relation check")
        if cfg.out:
            serialize.write_document(serialize.witt_to_dict(omega), cfg.out)
        return 0
    print(",".join(result.to_strings()))
    if cfg.out:
        serialize.write_document(serialize.witt_to_dict(result), cfg.out)
    return 0


def cmd_demo(args):
    cfg = JobConfig.from_args(args)
    if not cfg.gens:
        raise CharpError("demo needs --gens")
    expressions = list(cfg.gens) + [cfg.b] + ([cfg.as_witness] if cfg.as_witness else [])
    K = _valued_field(cfg, expressions)
    gens = [K.parse(g) for g in cfg.gens]
    slot = K.parse(cfg.b)
    witness = K.residue_field.parse(cfg.as_witness) if cfg.as_witness else None
    t1, t2, algebras, report = theorem2_demo(
        K, cfg.m, cfg.case, gens, slot,
        as_witness=witness, seed=cfg.seed, trials=cfg.trials,
    )
    config_block = {
        "p": cfg.p,
        "m": cfg.m,
        "case": cfg.case,
        "gens": cfg.gens,
        "as_witness": cfg.as_witness,
        "b": cfg.b,
        "seed": cfg.seed,
        "trials": cfg.trials,
        "u_vars": list(K.unames),
    }
    doc = serialize.report_to_dict(
        K, config_block, [t1, t2], algebras, report, reproducible=cfg.reproducible
    )
    out = cfg.out or "report.json"
    serialize.write_document(doc, out)
    print(f"demo (p={cfg.p}, m={cfg.m}, case={cfg.case}) -> {out}")
    for i, entry in enumerate(algebras, 1):
        print(
            f"  algebra {i}: division={entry['division'].verdict} "
            f"center_dim={entry['center_dimension']} "
            f"value_group={entry['value_group'].to_dict()}"
        )
    print(f"  assumed steps: {len(report['assumed_steps'])}")
    return 0


def cmd_verify(args):
    doc = serialize.load_document(args.path)
    ok, problems = serialize.verify_document(doc)
    schema = doc.get("schema", "?")
    if ok:
        print(f"VERIFIED {schema} ({args.path})")
        return 0
    print(f"FAILED {schema} ({args.path})", file=sys.stderr)
    for line in problems:
        print(f"  {line}", file=sys.stderr)
    return 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="charp",
        description="cyclic towers, Witt vectors, and division algebras "
        "over char-p discrete valued fields",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON config file; flags override")
        sp.add_argument("--p", type=int, default=None, help="the prime p")
        sp.add_argument("--vars", default=None, help="comma-separated residue variables")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", default=None, help="output JSON path")
        sp.add_argument(
            "--reproducible", action="store_true", default=None,
            help="omit timestamps for byte-identical output",
        )
        sp.add_argument("--witt-bound", dest="witt_len_bound", type=int, default=None)

    lift = sub.add_parser("lift", help="cyclic tower with inseparable residue")
    common(lift)
    lift.add_argument("--m", type=int, default=None, help="number of layers")
    lift.add_argument("--gens", default=None, help="comma-separated unit lifts")
    lift.set_defaults(func=cmd_lift)

    witt = sub.add_parser("witt", help="Witt vector operations")
    common(witt)
    witt.add_argument("witt_op", choices=["add", "neg", "layers"])
    witt.add_argument("--len", type=int, required=True, help="vector length")
    witt.add_argument("vectors", nargs="+", help="comma-separated components")
    witt.set_defaults(func=cmd_witt)

    demo = sub.add_parser("demo", help="two division algebras with disjoint residues")
    common(demo)
    demo.add_argument("--m", type=int, default=None)
    demo.add_argument("--case", choices=["rank2m", "rank-m-as"], default=None)
    demo.add_argument("--gens", default=None)
    demo.add_argument("--as-witness", dest="as_witness", default=None)
    demo.add_argument("--b", default=None, help="slot expression")
    demo.add_argument("--trials", type=int, default=None, help="norm probe count")
    demo.set_defaults(func=cmd_demo)

    verify = sub.add_parser("verify", help="recheck an emitted JSON document")
    verify.add_argument("path")
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CharpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ZeroDivisionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
