"""p-power structure of k = F_p(u1,...,ur): p-th powers, p-independence,
membership in the Artin-Schreier image, and subfield intersections.

Linear algebra "over k^p" is done through the substitution isomorphism
k^p = F_p(u1^p,...,ur^p) -> F_p(v1,...,vr), so every rank computation runs
over an ordinary rational function field in fresh variables.  Every verdict
returned here carries a witness that re-checks in time polynomial in its
size, independent of how the verdict was found.
"""

import itertools
from math import gcd

from . import linalg
from .errors import CertificateError, EmptyList, Undecided
from .fields import FunctionField, MultiPoly


def p_rank(field):
    """log_p [k : k^p] for k = F_p(u1,...,ur); one per transcendental."""
    return len(field.names)


def is_pth_power(x):
    """Return g with g^p = x, or None.

    Decided by checking that all partial derivatives vanish (the kernel of
    d: k -> Omega_k is exactly k^p here), then dividing exponents by p.
    """
    k = x.field
    if x.is_zero():
        return k.zero()
    for s in range(len(k.names)):
        if not x.derivative(s).is_zero():
            return None
    p = k.p

    def root(poly):
        table = {}
        for e, c in poly.table.items():
            if any(v % p for v in e):
                return None
            table[tuple(v // p for v in e)] = c  # c^(1/p) = c on F_p
        return MultiPoly(k.ring, table)

    rn, rd = root(x.num), root(x.den)
    if rn is None or rd is None:
        return None
    g = k._make(rn, rd)
    if g ** p != x:
        raise CertificateError("p-th root extraction produced a bad root")
    return g


# ---------------------------------------------------------------------------
# coordinates over k^p
# ---------------------------------------------------------------------------


def _fresh_field(k):
    return FunctionField(k.p, tuple(f"v{i + 1}" for i in range(len(k.names))))


def _coords_over_kp(k, v_field, z):
    """Write z = sum_f c_f * u^f with f in {0..p-1}^r and c_f in k^p.

    Returns {f: image of c_f in F_p(v)} using u_i^p -> v_i.  Multiplying
    numerator and denominator by den^(p-1) puts the denominator in k^p.
    """
    p = k.p
    num = z.num * (z.den ** (p - 1))
    buckets = {}
    for e, c in num.table.items():
        q = tuple(x // p for x in e)
        f = tuple(x % p for x in e)
        buckets.setdefault(f, {})[q] = c
    den_v = MultiPoly(v_field.ring, dict(z.den.table))
    return {
        f: v_field._make(MultiPoly(v_field.ring, t), den_v)
        for f, t in buckets.items()
    }


def _coordinate_matrix(k, v_field, elements):
    """Rows of k^p-coordinates for the given elements, on a shared basis."""
    coords = [_coords_over_kp(k, v_field, z) for z in elements]
    basis = sorted({f for c in coords for f in c})
    rows = [
        [c.get(f, v_field.zero()) for f in basis]
        for c in coords
    ]
    return rows, basis


def _monomial_range(k, elements):
    """All products prod a_j^(e_j) with e in {0..p-1}^n, keyed by e."""
    p = k.p
    out = {}
    for e in itertools.product(range(p), repeat=len(elements)):
        m = k.one()
        for a, d in zip(elements, e):
            if d:
                m = m * a ** d
        out[e] = m
    return out


def _vsub_to_kp(k, x):
    """Map an element of F_p(v) back into k^p via v_i -> u_i^p."""

    def back(poly):
        return MultiPoly(
            k.ring, {tuple(p * x for x in e): c for e, c in poly.table.items()}
        )

    p = k.p
    return k._make(back(x.num), back(x.den))


# ---------------------------------------------------------------------------
# p-independence
# ---------------------------------------------------------------------------


class PIndependenceCertificate:
    """Verdict plus a witness that re-checks on its own.

    Independent: the u-columns of a full-rank Jacobian minor and its
    determinant.  Dependent: a k^p-linear dependency among the monomials
    prod a_j^(e_j), e in {0..p-1}^n.
    """

    def __init__(self, elements, verdict, witness, report):
        self.elements = list(elements)
        self.verdict = verdict
        self.witness = witness
        self.report = report

    def verify(self, field):
        a = self.elements
        if self.verdict:
            cols = self.witness["columns"]
            if len(cols) != len(a):
                return False
            minor = [[z.derivative(s) for s in cols] for z in a]
            d = linalg.det(minor, field)
            return (not d.is_zero()) and d.to_string() == self.witness["determinant"]
        coeffs = {
            tuple(e): field.parse(expr) for e, expr in self.witness["dependency"]
        }
        if all(c.is_zero() for c in coeffs.values()):
            return False
        acc = field.zero()
        for e, c in coeffs.items():
            m = field.one()
            for z, d in zip(a, e):
                if d:
                    m = m * z ** d
            acc = acc + c * m
        return acc.is_zero()

    def to_dict(self, field):
        return {
            "elements": [field.to_string(a) for a in self.elements],
            "verdict": self.verdict,
            "witness": self.witness,
            "report": self.report,
        }


def p_independent(field, elements):
    """Certificate that the elements are (or are not) p-independent over k^p.

    The verdict comes from the rank of the monomial coordinate matrix over
    k^p; it is dual-checked against the Jacobian criterion (rank of
    [da_j/du_s] over k) and the two must agree.
    """
    if not elements:
        raise EmptyList("p_independent needs at least one element")
    if any(a.is_zero() for a in elements):
        raise ValueError("p_independent requires nonzero elements")
    n = len(elements)
    p = field.p
    v_field = _fresh_field(field)

    monomials = _monomial_range(field, elements)
    order = sorted(monomials)
    rows, basis = _coordinate_matrix(field, v_field, [monomials[e] for e in order])
    mono_rank = linalg.rank(rows, v_field)
    independent_mono = mono_rank == p ** n

    jac = [[a.derivative(s) for s in range(len(field.names))] for a in elements]
    _, pivots = linalg.row_reduce(jac, field)
    independent_jac = len(pivots) == n

    if independent_mono != independent_jac:
        raise CertificateError(
            "monomial and Jacobian p-independence criteria disagree"
        )

    report = {
        "monomial_rank": mono_rank,
        "monomial_count": p ** n,
        "jacobian_rank": len(pivots),
    }
    if independent_mono:
        minor = [[a.derivative(s) for s in pivots] for a in elements]
        d = linalg.det(minor, field)
        if d.is_zero():
            raise CertificateError("Jacobian pivot minor is singular")
        witness = {
            "kind": "jacobian_minor",
            "columns": list(pivots),
            "column_names": [field.names[s] for s in pivots],
            "determinant": d.to_string(),
        }
        return PIndependenceCertificate(elements, True, witness, report)

    # extract a dependency among the monomials: kernel of the transpose
    cols = list(range(len(order)))
    transposed = [[rows[j][i] for j in cols] for i in range(len(basis))]
    kern = linalg.kernel_basis(transposed, v_field)
    if not kern:
        raise CertificateError("dependent verdict but empty kernel")
    vec = kern[0]
    dependency = [
        (list(e), _vsub_to_kp(field, c).to_string())
        for e, c in zip(order, vec)
        if not c.is_zero()
    ]
    witness = {"kind": "dependency", "dependency": dependency}
    cert = PIndependenceCertificate(elements, False, witness, report)
    if not cert.verify(field):
        raise CertificateError("dependency witness failed re-verification")
    return cert


# ---------------------------------------------------------------------------
# Artin-Schreier classes
# ---------------------------------------------------------------------------


class ASClassCertificate:
    """Membership certificate for f against the image of x -> x^p - x."""

    def __init__(self, element, member, witness):
        self.element = element
        self.member = member
        self.witness = witness  # member: g with g^p - g = f; else degree obstruction

    def verify(self, field):
        f = self.element
        if self.member:
            g = self.witness
            return g ** field.p - g == f
        if not f.is_polynomial():
            return False
        d = f.num.total_degree()
        return d == self.witness and d > 0 and gcd(d, field.p) == 1

    def to_dict(self, field):
        return {
            "element": field.to_string(self.element),
            "member": self.member,
            "witness": field.to_string(self.witness)
            if self.member
            else {"degree_obstruction": self.witness},
        }


def _monomials_up_to(r, d):
    def rec(i, budget):
        if i == r:
            yield ()
            return
        for x in range(budget + 1):
            for rest in rec(i + 1, budget - x):
                yield (x,) + rest

    return list(rec(0, d))


def not_in_AS_image(field, f):
    """Decide whether f lies in the image of x -> x^p - x on k.

    Certified fragment: polynomial f.  Positive total degree coprime to p
    certifies non-membership (any solution is integral over F_p[u], hence a
    polynomial, and p * deg g = deg f is then impossible).  Otherwise a
    bounded polynomial ansatz of degree <= deg f searches for a witness;
    failure raises Undecided rather than ever guessing.
    """
    p = field.p
    if f.is_zero():
        return ASClassCertificate(f, True, field.zero())
    if not f.is_polynomial():
        raise Undecided("membership is only decided for polynomial inputs")
    d = f.num.total_degree()
    if d > 0 and gcd(d, p) == 1:
        return ASClassCertificate(f, False, d)

    r = len(field.names)
    candidates = _monomials_up_to(r, d)
    row_index = {}
    columns = []
    for e in candidates:
        pe = tuple(p * x for x in e)
        col = {}
        col[pe] = field.base.add(col.get(pe, 0), 1)
        col[e] = field.base.sub(col.get(e, 0), 1)
        col = {m: c for m, c in col.items() if c % p}
        columns.append(col)
        for m in col:
            row_index.setdefault(m, len(row_index))
    for m in f.num.table:
        row_index.setdefault(m, len(row_index))

    rows = [[0] * len(candidates) for _ in range(len(row_index))]
    for j, col in enumerate(columns):
        for m, c in col.items():
            rows[row_index[m]][j] = c
    rhs = [0] * len(row_index)
    for m, c in f.num.table.items():
        rhs[row_index[m]] = c

    sol = linalg.solve(rows, rhs, field.base)
    if sol is None:
        raise Undecided(
            f"no polynomial witness of degree <= {d}; outside the certified fragment"
        )
    table = {e: c for e, c in zip(candidates, sol) if c % p}
    g = field.from_poly(field.ring.from_table(table))
    cert = ASClassCertificate(f, True, g)
    if not cert.verify(field):
        raise CertificateError("ansatz produced an invalid witness")
    return cert


# ---------------------------------------------------------------------------
# subfield intersections
# ---------------------------------------------------------------------------


def subfield_intersection_trivial(field, set1, set2):
    """Is k^p(set1) intersect k^p(set2) = k^p, inside k^p(set1 union set2)?

    Works with the monomial bases of the two spans over k^p; the dimension
    of the intersection is dim V1 + dim V2 - dim(V1 + V2).  Dimension 1
    (the shared constants) means the generated subfields of k meet in k,
    because intersection commutes with p-th powers for these extensions.
    Returns (verdict, report).
    """
    union = []
    for a in set1 + set2:
        if all(a != b for b in union):
            union.append(a)
    cert = p_independent(field, union)
    if not cert.verdict:
        from .errors import PIndependenceFailed

        raise PIndependenceFailed("combined generator set is not p-independent")

    v_field = _fresh_field(field)
    m1 = _monomial_range(field, set1)
    m2 = _monomial_range(field, set2)
    all_elems = [m1[e] for e in sorted(m1)] + [m2[e] for e in sorted(m2)]
    rows, _ = _coordinate_matrix(field, v_field, all_elems)
    rows1 = rows[: len(m1)]
    rows2 = rows[len(m1):]
    d1 = linalg.rank(rows1, v_field)
    d2 = linalg.rank(rows2, v_field)
    d_sum = linalg.rank(rows1 + rows2, v_field)
    d_int = d1 + d2 - d_sum
    report = {
        "dim_span1": d1,
        "dim_span2": d2,
        "dim_sum": d_sum,
        "dim_intersection": d_int,
        "p_independence": cert.report,
    }
    return d_int == 1, report
