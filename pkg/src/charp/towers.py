"""Iterated degree-p extension towers with an explicit cyclic automorphism.

A tower over a base field B (either k or K = k(t)) is a chain of layers

    L_i = L_{i-1}[g_i],   g_i^p - g_i = r_i,   r_i in L_{i-1},

together with generator images sigma(g_i) = g_i + s_i, s_i in L_{i-1},
which pin down an automorphism fixing B pointwise.  Elements are nested
coefficient vectors: degree-<p polynomials in the top generator whose
coefficients live one layer down.

The interesting constructions:

* ``albert_ascend``          -- extend a cyclic tower one more layer using a
                                trace-one element and additive Hilbert 90.
* ``cyclic_lift_inseparable``-- build a cyclic tower over K whose residue
                                field is k(a_1^(1/p),...,a_m^(1/p)), keeping
                                integral witnesses y_i = t^(e_i) g_i whose
                                residues generate it.
* ``inertial_lift``          -- move a full-degree tower over k to K with
                                unchanged defining equations.
* ``disjoint_pair``          -- two weakly unramified cyclic towers whose
                                residue fields intersect in k.

Degrees are certified by sigma-order plus residue data, never by
factoring; every built tower re-checks its shift identities.
"""

import itertools

from . import linalg
from .errors import (
    CertificateError,
    DegenerateSymbol,
    MissingCertificate,
    MissingWitness,
    NegativeValuation,
    NotCyclic,
    PIndependenceFailed,
    ShapeMismatch,
    ShiftConditionFailed,
    TraceNotZero,
)
from .fields import INFINITY, RationalFunction, ValuedField
from .pstructure import not_in_AS_image, p_independent
from .witt import asw_layer_equations


class Layer:
    """One Artin-Schreier step: relation data plus the automorphism shift."""

    def __init__(self, name, rhs, sigma_shift, witness_exponent=None, residue_class=None):
        self.name = name
        self.rhs = rhs  # nested data, one level below this layer
        self.sigma_shift = sigma_shift  # nested data, one level below
        self.witness_exponent = witness_exponent  # e with y = t^e * g integral
        self.residue_class = residue_class  # class in k with residue(y)^p = class

    def __eq__(self, other):
        if not isinstance(other, Layer):
            return NotImplemented
        return (
            self.name == other.name
            and self.rhs == other.rhs
            and self.sigma_shift == other.sigma_shift
        )

    def __hash__(self):
        return hash(self.name)


class TowerElement:
    """An element of a tower, always written at the tower's full height."""

    __slots__ = ("tower", "data")

    def __init__(self, tower, data):
        self.tower = tower
        self.data = data

    def _pair(self, other):
        t = self.tower
        if isinstance(other, TowerElement):
            if other.tower is t or other.tower.layers == t.layers:
                if other.tower.base != t.base:
                    raise ShapeMismatch("towers over different bases")
                return self.data, other.data, t
            if len(other.tower.layers) < len(t.layers):
                lifted = t.lift(other)
                return self.data, lifted.data, t
            if len(other.tower.layers) > len(t.layers):
                lifted = other.tower.lift(self)
                return lifted.data, other.data, other.tower
            raise ShapeMismatch("elements of incompatible towers")
        return self.data, t.lift(other).data, t

    def __add__(self, other):
        a, b, t = self._pair(other)
        return TowerElement(t, t._add(a, b, t.level))

    __radd__ = __add__

    def __neg__(self):
        t = self.tower
        return TowerElement(t, t._neg(self.data, t.level))

    def __sub__(self, other):
        a, b, t = self._pair(other)
        return TowerElement(t, t._add(a, t._neg(b, t.level), t.level))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b, t = self._pair(other)
        return TowerElement(t, t._mul(a, b, t.level))

    __rmul__ = __mul__

    def __pow__(self, n):
        t = self.tower
        if n < 0:
            return TowerElement(t, t._inv(self.data, t.level)) ** (-n)
        return TowerElement(t, t._pow(self.data, n, t.level))

    def __truediv__(self, other):
        a, b, t = self._pair(other)
        return TowerElement(t, t._mul(a, t._inv(b, t.level), t.level))

    def __rtruediv__(self, other):
        return self.tower.lift(other) / self

    def inv(self):
        t = self.tower
        return TowerElement(t, t._inv(self.data, t.level))

    def frobenius(self):
        return self ** self.tower.p

    def is_zero(self):
        return self.tower._is_zero(self.data, self.tower.level)

    def is_one(self):
        return self == self.tower.one()

    def __eq__(self, other):
        try:
            a, b, t = self._pair(other)
        except ShapeMismatch:
            return NotImplemented
        return a == b

    def as_base(self):
        """The base-field value of a base-valued element, else None."""
        return self.tower._as_base(self.data, self.tower.level)

    def __repr__(self):
        return f"<tower elt {self.tower.describe(self.data)}>"


class TowerField:
    """A tower of Artin-Schreier layers over k or K, with automorphism data."""

    def __init__(self, base, layers=()):
        self.base = base
        self.p = base.characteristic
        if self.p == 0:
            raise ValueError("towers need a char-p base field")
        self.layers = tuple(layers)
        self.valuation_data = None
        self.certification = None
        self._zero_cache = [base.zero()]
        self._one_cache = [base.one()]
        for level in range(1, self.level + 1):
            z = self._zero_cache[level - 1]
            o = self._one_cache[level - 1]
            self._zero_cache.append((z,) * self.p)
            self._one_cache.append((o,) + (z,) * (self.p - 1))
        self._sigma_order = None
        self._trace_one = None

    # -- shape ---------------------------------------------------------------

    @property
    def level(self):
        return len(self.layers)

    @property
    def degree(self):
        return self.p ** self.level

    @property
    def characteristic(self):
        return self.p

    def prefix(self, level):
        """The subtower consisting of the first ``level`` layers."""
        t = TowerField(self.base, self.layers[:level])
        return t

    def layer_names(self):
        return [layer.name for layer in self.layers]

    # -- element construction ---------------------------------------------------

    def zero(self):
        return TowerElement(self, self._zero_cache[self.level])

    def one(self):
        return TowerElement(self, self._one_cache[self.level])

    def from_int(self, n):
        return self.lift(self.base.from_int(n))

    def lift(self, x):
        """Coerce an int, base element, or prefix-tower element upward."""
        if isinstance(x, TowerElement):
            if x.tower is self or x.tower.layers == self.layers:
                return TowerElement(self, x.data)
            if x.tower.layers != self.layers[: len(x.tower.layers)]:
                raise ShapeMismatch("element does not come from a subtower")
            return TowerElement(self, self._embed(x.data, len(x.tower.layers)))
        if isinstance(x, int):
            x = self.base.from_int(x)
        if isinstance(x, RationalFunction):
            if x.field != self.base:
                raise ShapeMismatch("scalar is not in the tower base")
            return TowerElement(self, self._embed(x, 0))
        raise ShapeMismatch(f"cannot lift {x!r} into the tower")

    def gen(self, i):
        """The i-th layer generator (0-based), at the tower's full height."""
        key = tuple(1 if j == i else 0 for j in range(self.level))
        return self.monomial(key)

    def generators(self):
        return [self.gen(i) for i in range(self.level)]

    def monomial(self, exps):
        return self.element_from_flat({tuple(exps): self.base.one()})

    def element_from_flat(self, table):
        data = self._unflatten(table, self.level)
        return TowerElement(self, data)

    def flatten(self, x):
        """Coefficients of x on the basis prod g_i^(d_i), 0 <= d_i < p."""
        out = {}
        self._flatten(self.lift(x).data, self.level, (), out)
        return out

    # -- field protocol (top-level elements) -----------------------------------

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def inv(self, a):
        return a.inv()

    def pow(self, a, n):
        return a ** n

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a.is_zero()

    def is_one(self, a):
        return a.is_one()

    def frobenius(self, a):
        return a ** self.p

    def to_string(self, a):
        return self.describe(self.lift(a).data)

    # -- nested-data arithmetic ---------------------------------------------------

    def _zero(self, level):
        return self._zero_cache[level]

    def _one(self, level):
        return self._one_cache[level]

    def _is_zero(self, a, level):
        if level == 0:
            return a.is_zero()
        return all(self._is_zero(c, level - 1) for c in a)

    def _as_base(self, a, level):
        if level == 0:
            return a
        for c in a[1:]:
            if not self._is_zero(c, level - 1):
                return None
        return self._as_base(a[0], level - 1)

    def _embed(self, a, from_level, to_level=None):
        to_level = self.level if to_level is None else to_level
        data = a
        for level in range(from_level, to_level):
            data = (data,) + (self._zero(level),) * (self.p - 1)
        return data

    def _add(self, a, b, level):
        if level == 0:
            return a + b
        return tuple(self._add(x, y, level - 1) for x, y in zip(a, b))

    def _neg(self, a, level):
        if level == 0:
            return -a
        return tuple(self._neg(x, level - 1) for x in a)

    def _mul(self, a, b, level):
        if level == 0:
            return a * b
        p = self.p
        low = level - 1
        zero = self._zero(low)
        conv = [zero] * (2 * p - 1)
        for i, x in enumerate(a):
            if self._is_zero(x, low):
                continue
            for j, y in enumerate(b):
                if self._is_zero(y, low):
                    continue
                conv[i + j] = self._add(conv[i + j], self._mul(x, y, low), low)
        rhs = self.layers[level - 1].rhs
        for d in range(2 * p - 2, p - 1, -1):
            c = conv[d]
            if self._is_zero(c, low):
                continue
            conv[d - p + 1] = self._add(conv[d - p + 1], c, low)
            conv[d - p] = self._add(conv[d - p], self._mul(c, rhs, low), low)
        return tuple(conv[:p])

    def _pow(self, a, n, level):
        result = self._one(level)
        base = a
        while n:
            if n & 1:
                result = self._mul(result, base, level)
            n >>= 1
            if n:
                base = self._mul(base, base, level)
        return result

    def _inv(self, a, level):
        if level == 0:
            return a.inv()
        if self._is_zero(a, level):
            raise ZeroDivisionError("inverse of zero in tower")
        low = level - 1
        p = self.p
        rhs = self.layers[level - 1].rhs
        # modulus g^p - g - r as a coefficient list over the layer below
        modulus = [self._neg(rhs, low), self._neg(self._one(low), low)]
        modulus += [self._zero(low)] * (p - 2)
        modulus.append(self._one(low))
        g, s, _ = self._poly_xgcd(list(a), modulus, low)
        if len(g) != 1:
            raise ZeroDivisionError(
                "element is a zero divisor: layer relation is reducible"
            )
        ginv = self._inv(g[0], low)
        inv = [self._mul(c, ginv, low) for c in s]
        inv += [self._zero(low)] * (p - len(inv))
        if len(inv) > p:
            raise CertificateError("inverse has excessive degree")
        return tuple(inv[:p])

    # polynomial helpers over level-`level` coefficients
    def _trim(self, f, level):
        while f and self._is_zero(f[-1], level):
            f.pop()
        return f

    def _poly_xgcd(self, f, g, level):
        """Extended gcd of coefficient lists, coefficients one level down."""
        f = self._trim(list(f), level)
        g = self._trim(list(g), level)
        r0, r1 = f, g
        s0, s1 = [self._one(level)], []
        t0, t1 = [], [self._one(level)]

        def sub_scaled(a, b, c, shift):
            # a - c * x^shift * b
            out = list(a) + [self._zero(level)] * max(
                0, len(b) + shift - len(a)
            )
            for i, bc in enumerate(b):
                out[i + shift] = self._add(
                    out[i + shift], self._neg(self._mul(c, bc, level), level), level
                )
            return self._trim(out, level)

        while r1:
            # divide r0 by r1
            q = []
            rem = list(r0)
            lead_inv = self._inv(r1[-1], level)
            while len(rem) >= len(r1) and rem:
                shift = len(rem) - len(r1)
                c = self._mul(rem[-1], lead_inv, level)
                q.append((c, shift))
                rem = sub_scaled(rem, r1, c, shift)
            new_s, new_t = s0, t0
            for c, shift in q:
                new_s = sub_scaled(new_s, s1, c, shift)
                new_t = sub_scaled(new_t, t1, c, shift)
            r0, r1 = r1, rem
            s0, s1 = s1, new_s
            t0, t1 = t1, new_t
        return r0, s0, t0

    def _flatten(self, a, level, suffix, out):
        if level == 0:
            key = suffix
            if not a.is_zero():
                out[key] = a
            return
        for j, c in enumerate(a):
            self._flatten(c, level - 1, (j,) + suffix, out)

    def _unflatten(self, table, level):
        if level == 0:
            vals = [v for k, v in table.items() if not v.is_zero()]
            if len(vals) > 1:
                raise ValueError("overlapping flat keys")
            return vals[0] if vals else self.base.zero()
        buckets = [{} for _ in range(self.p)]
        for key, v in table.items():
            if len(key) != level:
                raise ValueError("flat key of wrong length")
            j = key[-1]
            buckets[j][key[:-1]] = v
        return tuple(self._unflatten(b, level - 1) for b in buckets)

    def describe(self, data):
        flat = {}
        self._flatten(data, self.level, (), flat)
        if not flat:
            return "0"
        names = self.layer_names()
        parts = []
        for key in sorted(flat, reverse=True):
            c = flat[key]
            factors = []
            cs = c.to_string()
            if cs != "1" or all(d == 0 for d in key):
                factors.append(f"({cs})" if ("+" in cs or "/" in cs) else cs)
            for name, d in zip(names, key):
                if d == 1:
                    factors.append(name)
                elif d > 1:
                    factors.append(f"{name}^{d}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    # -- the automorphism -------------------------------------------------------

    def _sigma(self, a, level):
        if level == 0:
            return a
        low = level - 1
        shift = self.layers[level - 1].sigma_shift
        gen_image = (shift, self._one(low)) + (self._zero(low),) * (self.p - 2)
        acc = self._embed(self._sigma(a[-1], low), low, level)
        for j in range(self.p - 2, -1, -1):
            acc = self._mul(acc, gen_image, level)
            acc = self._add(acc, self._embed(self._sigma(a[j], low), low, level), level)
        return acc

    def apply_sigma(self, x):
        x = self.lift(x)
        return TowerElement(self, self._sigma(x.data, self.level))

    def sigma_pow(self, x, e):
        x = self.lift(x)
        for _ in range(e % max(self.sigma_order(), 1)):
            x = self.apply_sigma(x)
        return x

    def sigma_order(self):
        """Least e >= 1 with sigma^e fixing every generator."""
        if self._sigma_order is None:
            if self.level == 0:
                self._sigma_order = 1
            else:
                gens = self.generators()
                images = gens
                order = 0
                while True:
                    images = [self.apply_sigma(g) for g in images]
                    order += 1
                    if all(i == g for i, g in zip(images, gens)):
                        break
                    if order > self.degree:
                        raise NotCyclic("automorphism order exceeds the tower degree")
                self._sigma_order = order
        return self._sigma_order

    def _require_cyclic(self):
        if self.sigma_order() != self.degree:
            raise NotCyclic(
                f"sigma order {self.sigma_order()} != tower degree {self.degree}"
            )

    def trace(self, x):
        """Sum of the sigma-conjugates; lands in the base field."""
        self._require_cyclic()
        x = self.lift(x)
        acc = x
        cur = x
        for _ in range(self.degree - 1):
            cur = self.apply_sigma(cur)
            acc = acc + cur
        val = acc.as_base()
        if val is None:
            raise CertificateError("trace failed to be sigma-invariant")
        return val

    def norm(self, x):
        self._require_cyclic()
        x = self.lift(x)
        acc = x
        cur = x
        for _ in range(self.degree - 1):
            cur = self.apply_sigma(cur)
            acc = acc * cur
        val = acc.as_base()
        if val is None:
            raise CertificateError("norm failed to be sigma-invariant")
        return val

    def find_trace_one(self):
        """A basis monomial scaled to have trace exactly 1."""
        if self._trace_one is not None:
            return self._trace_one
        self._require_cyclic()
        for exps in sorted(itertools.product(range(self.p), repeat=self.level)):
            mono = self.monomial(exps)
            tr = self.trace(mono)
            if not tr.is_zero():
                beta = mono * self.lift(tr.inv())
                if not self.trace(beta).is_one():
                    raise CertificateError("trace normalization failed")
                self._trace_one = beta
                return beta
        raise AssertionError(
            "no basis monomial has nonzero trace; separable towers always have one"
        )

    def hilbert90_solve(self, c):
        """alpha with sigma(alpha) - alpha = c, for trace-zero c.

        Uses the closed partial-sum formula
            alpha = - sum_i (sum_{j<i} sigma^j(c)) * sigma^i(theta)
        with theta of trace one; the defining identity is re-checked before
        returning.
        """
        c = self.lift(c)
        if not self.trace(c).is_zero():
            raise TraceNotZero("hilbert90_solve needs a trace-zero input")
        theta = self.find_trace_one()
        acc = self.zero()
        partial = self.zero()
        sig_theta = theta
        sig_c = c
        for _ in range(self.degree):
            acc = acc + partial * sig_theta
            partial = partial + sig_c
            sig_c = self.apply_sigma(sig_c)
            sig_theta = self.apply_sigma(sig_theta)
        alpha = -acc
        if self.apply_sigma(alpha) - alpha != c:
            raise CertificateError("hilbert90 postcondition failed")
        return alpha

    # -- extension ---------------------------------------------------------------

    def adjoin_as_layer(
        self, rhs, sigma_shift, name=None, witness_exponent=None, residue_class=None
    ):
        """One more layer g^p - g = rhs with sigma(g) = g + sigma_shift.

        The shift must satisfy s^p - s = sigma(rhs) - rhs in the current
        tower; that identity is exactly what makes the extended sigma a
        well-defined ring map.
        """
        rhs = self.lift(rhs)
        shift = self.lift(sigma_shift)
        delta = self.apply_sigma(rhs) - rhs
        if shift ** self.p - shift != delta:
            raise ShiftConditionFailed(
                "sigma shift does not satisfy s^p - s = sigma(r) - r"
            )
        name = name or f"x{self.level + 1}"
        layer = Layer(
            name,
            rhs.data,
            shift.data,
            witness_exponent=witness_exponent,
            residue_class=residue_class,
        )
        return TowerField(self.base, self.layers + (layer,))

    def layer_rhs(self, i):
        """The defining right-hand side of layer i, at full height."""
        return TowerElement(self, self._embed(self.layers[i].rhs, i))

    def layer_shift(self, i):
        return TowerElement(self, self._embed(self.layers[i].sigma_shift, i))

    def random_element(self, rng, terms=2, coeff_degree=1):
        table = {}
        for _ in range(terms):
            key = tuple(rng.randrange(self.p) for _ in range(self.level))
            c = self.base.random_element(rng, degree=coeff_degree, terms=1)
            if not c.is_zero():
                table[key] = c
        if not table:
            return self.one()
        return self.element_from_flat(table)

    def sigma_fixed_dimension(self):
        """Dimension over the base of the kernel of sigma - id."""
        keys = sorted(itertools.product(range(self.p), repeat=self.level))
        index = {k: i for i, k in enumerate(keys)}
        cols = []
        for k in keys:
            img = self.apply_sigma(self.monomial(k))
            flat = self.flatten(img)
            col = [flat.get(k2, self.base.zero()) for k2 in keys]
            col[index[k]] = col[index[k]] - self.base.one()
            cols.append(col)
        rows = [[cols[j][i] for j in range(len(keys))] for i in range(len(keys))]
        return len(linalg.kernel_basis(rows, self.base))

    def __repr__(self):
        rels = ", ".join(
            f"{layer.name}^{self.p}-{layer.name}=..." for layer in self.layers
        )
        return f"TowerField(base={self.base!r}, layers=[{rels}])"


# ---------------------------------------------------------------------------
# valuation data carried by weakly unramified towers
# ---------------------------------------------------------------------------


class ResidueFieldPresentation:
    """l = k[Y_1,...,Y_m] with Y_i^p = a_i; a field when the a_i are
    p-independent (which the builders certify)."""

    def __init__(self, field, classes, names=None):
        self.field = field
        self.classes = list(classes)
        self.names = list(names or (f"Y{i + 1}" for i in range(len(self.classes))))

    @property
    def rank(self):
        return len(self.classes)

    def zero(self):
        return PresentationElement(self, {})

    def one(self):
        return self.embed(self.field.one())

    def embed(self, c):
        if c.is_zero():
            return self.zero()
        return PresentationElement(self, {(0,) * self.rank: c})

    def gen(self, i):
        key = tuple(1 if j == i else 0 for j in range(self.rank))
        return PresentationElement(self, {key: self.field.one()})

    def monomial(self, exps):
        return PresentationElement(self, {tuple(exps): self.field.one()})

    def degree_over_k(self):
        return self.field.p ** self.rank


class PresentationElement:
    """Element of a purely inseparable residue presentation."""

    __slots__ = ("pres", "table")

    def __init__(self, pres, table):
        self.pres = pres
        self.table = {e: c for e, c in table.items() if not c.is_zero()}

    def __add__(self, other):
        table = dict(self.table)
        for e, c in other.table.items():
            s = table.get(e, self.pres.field.zero()) + c
            if s.is_zero():
                table.pop(e, None)
            else:
                table[e] = s
        return PresentationElement(self.pres, table)

    def __mul__(self, other):
        p = self.pres.field.p
        table = {}
        for e1, c1 in self.table.items():
            for e2, c2 in other.table.items():
                c = c1 * c2
                e = []
                for i, (a, b) in enumerate(zip(e1, e2)):
                    s = a + b
                    q, rem = divmod(s, p)
                    if q:
                        c = c * self.pres.classes[i] ** q
                    e.append(rem)
                e = tuple(e)
                s = table.get(e, self.pres.field.zero()) + c
                if s.is_zero():
                    table.pop(e, None)
                else:
                    table[e] = s
        return PresentationElement(self.pres, table)

    def __pow__(self, n):
        out = self.pres.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def is_zero(self):
        return not self.table

    def __eq__(self, other):
        return isinstance(other, PresentationElement) and self.table == other.table

    def to_string(self):
        if not self.table:
            return "0"
        parts = []
        for e in sorted(self.table, reverse=True):
            cs = self.table[e].to_string()
            factors = []
            if cs != "1" or all(d == 0 for d in e):
                factors.append(f"({cs})" if ("+" in cs or "/" in cs) else cs)
            for name, d in zip(self.pres.names, e):
                if d == 1:
                    factors.append(name)
                elif d > 1:
                    factors.append(f"{name}^{d}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"<residue {self.to_string()}>"


class InseparableWitnessData:
    """Integral witnesses y_i = t^(e_i) g_i with p-independent residues."""

    kind = "inseparable-residues"

    def __init__(self, exponents, classes, p_certificate, presentation):
        self.exponents = list(exponents)
        self.classes = list(classes)
        self.p_certificate = p_certificate
        self.presentation = presentation


class InertialWitnessData:
    """The residue extension is the same tower read over k."""

    kind = "inertial-lift"

    def __init__(self, residue_tower, seed_certificate):
        self.residue_tower = residue_tower
        self.seed_certificate = seed_certificate

    @property
    def exponents(self):
        return [0] * self.residue_tower.level


def gauss_valuation(tower, x):
    """min over the y-monomial basis of the coefficient valuations.

    Requires valuation data (integral witnesses with certified residues);
    restricted to K it is the t-adic valuation.
    """
    data = tower.valuation_data
    if data is None:
        raise MissingCertificate("tower carries no valuation data")
    K = tower.base
    flat = tower.flatten(x)
    best = INFINITY
    for key, z in flat.items():
        v = K.valuation(z) - sum(d * e for d, e in zip(key, data.exponents))
        if v < best:
            best = v
    return best


def tower_residue(tower, x):
    """Residue in the presented field l = k(classes^(1/p)), for v(x) >= 0."""
    data = tower.valuation_data
    if data is None:
        raise MissingCertificate("tower carries no valuation data")
    if not isinstance(data, InseparableWitnessData):
        raise MissingCertificate("residue presentation requires inseparable witnesses")
    v = gauss_valuation(tower, x)
    if v is INFINITY:
        return data.presentation.zero()
    if v < 0:
        raise NegativeValuation(f"element has Gauss valuation {v} < 0")
    K = tower.base
    t = K.uniformizer()
    out = data.presentation.zero()
    for key, z in tower.flatten(x).items():
        s = sum(d * e for d, e in zip(key, data.exponents))
        w = z / t ** s if s else z
        c = K.residue(w)
        if not c.is_zero():
            out = out + data.presentation.embed(c) * data.presentation.monomial(key)
    return out


def inertial_residue(tower, x):
    """Residue of an integral element of an inertial lift, in the k-tower."""
    data = tower.valuation_data
    if not isinstance(data, InertialWitnessData):
        raise MissingCertificate("tower is not an inertial lift")
    if gauss_valuation(tower, x) < 0:
        raise NegativeValuation("element is not integral")
    K = tower.base
    table = {key: K.residue(z) for key, z in tower.flatten(x).items()}
    table = {key: c for key, c in table.items() if not c.is_zero()}
    return data.residue_tower.element_from_flat(table)


# ---------------------------------------------------------------------------
# Albert's ascent
# ---------------------------------------------------------------------------


def albert_data(tower):
    """(beta, alpha): trace-one element and a Hilbert-90 solution for P(beta).

    beta^p - beta has trace zero because trace commutes with Frobenius and
    Tr(beta) = 1, so sigma(alpha) - alpha = beta^p - beta is solvable.
    """
    beta = tower.find_trace_one()
    p_beta = beta ** tower.p - beta
    alpha = tower.hilbert90_solve(p_beta)
    return beta, alpha


def albert_ascend(tower, c_shift=None, name=None):
    """Extend a cyclic tower of degree p^e to a cyclic tower of degree p^(e+1).

    The new layer is g^p - g = c + alpha with sigma(g) = g + beta; the base
    shift c (zero by default) does not affect cyclicity, which is certified
    by recomputing the sigma order.
    """
    if tower.level == 0:
        raise ValueError("ascend from at least one layer; adjoin the first directly")
    tower._require_cyclic()
    beta, alpha = albert_data(tower)
    rhs = alpha if c_shift is None else alpha + tower.lift(c_shift)
    bigger = tower.adjoin_as_layer(rhs, beta, name=name)
    if bigger.sigma_order() != bigger.degree:
        raise CertificateError("ascended tower failed the sigma-order certificate")
    return alpha, bigger


# ---------------------------------------------------------------------------
# cyclic lifts of purely inseparable residue extensions
# ---------------------------------------------------------------------------


def cyclic_lift_inseparable(K, lifts, fixed_subspace_check=False):
    """A cyclic degree-p^m tower over K whose residue field is
    k(a_1^(1/p), ..., a_m^(1/p)) for the residues a_i of the given units.

    Layer 1 is g^p - g = a_1/t^p.  Each later layer takes the Hilbert-90
    element alpha of the previous tower, picks the least n >= 1 with
    p^n > -v(alpha), and adjoins g^p - g = a_i/t^(p^n) + alpha, which keeps
    the whole tower cyclic while the integral witness y_i = t^(p^(n-1)) g_i
    has residue a_i^(1/p).  Every step is certified.
    """
    if not isinstance(K, ValuedField):
        raise ShapeMismatch("cyclic_lift_inseparable needs the valued base K")
    p = K.p
    k = K.residue_field
    residues = []
    for a in lifts:
        if K.valuation(a) != 0:
            raise ValueError(f"lift {a.to_string()} is not a unit")
        residues.append(K.residue(a))
    cert = p_independent(k, residues)
    if not cert.verdict:
        raise PIndependenceFailed("residues of the lifts are not p-independent")

    t = K.uniformizer()
    tower = TowerField(K)
    steps = []
    for i, a in enumerate(lifts):
        if i == 0:
            n = 1
            rhs = a / t ** p
            shift = 1
            beta_val = None
        else:
            tower._require_cyclic()
            beta, alpha = albert_data(tower)
            v_alpha = gauss_valuation(tower, alpha)
            n = 1
            while p ** n <= -v_alpha:
                n += 1
            rhs = tower.lift(a / t ** (p ** n)) + alpha
            shift = beta
            beta_small = tower.lift(t ** (p ** n)) * alpha
            beta_val = gauss_valuation(tower, beta_small)
            if not beta_val > 0:
                raise CertificateError(
                    f"carried term has Gauss valuation {beta_val}, expected > 0"
                )
        tower = tower.adjoin_as_layer(
            rhs,
            shift,
            witness_exponent=p ** (n - 1),
            residue_class=residues[i],
        )
        tower.valuation_data = InseparableWitnessData(
            [layer.witness_exponent for layer in tower.layers],
            residues[: i + 1],
            cert,
            ResidueFieldPresentation(k, residues[: i + 1]),
        )
        steps.append({"layer": i + 1, "n": n, "carry_valuation": beta_val})

    tower.certification = certify_tower(tower, fixed_subspace=fixed_subspace_check)
    tower.certification["construction_steps"] = steps
    if not certification_passed(tower.certification):
        raise CertificateError(f"lift certification failed: {tower.certification}")
    return tower


# ---------------------------------------------------------------------------
# inertial lifts
# ---------------------------------------------------------------------------


def _map_leaves(data, level, f):
    if level == 0:
        return f(data)
    return tuple(_map_leaves(c, level - 1, f) for c in data)


def inertial_lift_tower(K, k_tower, seed_certificate):
    """Read a full-degree tower over k as a tower over K, same equations."""
    if k_tower.base != K.residue_field:
        raise ShapeMismatch("tower is not over the residue field of K")
    lifted = TowerField(K)
    for i, layer in enumerate(k_tower.layers):
        rhs = TowerElement(
            lifted, lifted._embed(_map_leaves(layer.rhs, i, K.from_residue), i)
        )
        shift = TowerElement(
            lifted, lifted._embed(_map_leaves(layer.sigma_shift, i, K.from_residue), i)
        )
        lifted = lifted.adjoin_as_layer(rhs, shift, name=layer.name, witness_exponent=0)
    lifted.valuation_data = InertialWitnessData(k_tower, seed_certificate)
    lifted.certification = certify_tower(lifted)
    if not certification_passed(lifted.certification):
        raise CertificateError("inertial lift certification failed")
    return lifted


def asw_tower_over(field, system):
    """Instantiate extracted layer equations as an actual tower over their field."""
    tower = TowerField(field)
    for i in range(system.length):
        gens = tower.generators() + [tower.zero()] * (system.length - tower.level)
        coerce = lambda c: tower.lift(c)
        rhs = system.right_hand_sides[i].evaluate(gens, tower, coerce=coerce)
        shift = system.sigma_shifts[i].evaluate(gens, tower, coerce=coerce)
        tower = tower.adjoin_as_layer(rhs, shift)
    return tower


def inertial_lift(K, omega):
    """Lift the extension of a Witt symbol over k to a weakly unramified
    cyclic tower over K.

    Full degree over k holds exactly when the first component misses the
    image of x -> x^p - x; that is certified on the polynomial fragment and
    Undecided propagates from there.  A zero or degenerate symbol is
    rejected.
    """
    k = K.residue_field
    if omega.field != k:
        raise ShapeMismatch("symbol must have components in the residue field k")
    if omega.is_zero():
        raise DegenerateSymbol("zero symbol defines a split extension")
    as_cert = not_in_AS_image(k, omega.components[0])
    if as_cert.member:
        raise DegenerateSymbol(
            "first component is in the Artin-Schreier image; the first layer splits"
        )
    system = asw_layer_equations(omega)
    k_tower = asw_tower_over(k, system)
    if k_tower.sigma_order() != k_tower.degree:
        raise DegenerateSymbol("tower over k is not cyclic of full degree")
    return inertial_lift_tower(K, k_tower, as_cert)


# ---------------------------------------------------------------------------
# disjoint residue pairs
# ---------------------------------------------------------------------------

CASE_RANK_2M = "rank2m"
CASE_RANK_M_AS = "rank-m-as"


def disjoint_pair(K, m, case, gens, as_witness=None):
    """Two weakly unramified cyclic degree-p^m towers over K whose residue
    fields intersect in k.

    ``rank2m``: 2m p-independent units; the residue fields are generated by
    disjoint p-independent sets and the intersection certificate is computed
    by subfield linear algebra.  ``rank-m-as``: m units plus a polynomial f
    outside the Artin-Schreier image; the second tower is the inertial lift
    of an ascended tower over k seeded by f, so its residue field is
    separable over k while the first is purely inseparable.
    Returns (tower1, tower2, report).
    """
    from .pstructure import subfield_intersection_trivial

    k = K.residue_field
    if case == CASE_RANK_2M:
        if len(gens) != 2 * m:
            raise ValueError(f"case {case} needs exactly {2 * m} generators")
        t1 = cyclic_lift_inseparable(K, gens[:m])
        t2 = cyclic_lift_inseparable(K, gens[m:])
        res1 = t1.valuation_data.classes
        res2 = t2.valuation_data.classes
        trivial, rep = subfield_intersection_trivial(k, res1, res2)
        if not trivial:
            raise CertificateError("residue subfields do not intersect trivially")
        report = {
            "case": case,
            "intersection": rep,
            "disjointness": "computed",
        }
        return t1, t2, report

    if case == CASE_RANK_M_AS:
        if len(gens) != m:
            raise ValueError(f"case {case} needs exactly {m} generators")
        if as_witness is None:
            raise MissingWitness("case rank-m-as needs an Artin-Schreier witness f")
        as_cert = not_in_AS_image(k, as_witness)
        if as_cert.member:
            raise CertificateError(
                "witness lies in the Artin-Schreier image; no degree-p layer"
            )
        t1 = cyclic_lift_inseparable(K, gens)
        k_tower = TowerField(k).adjoin_as_layer(as_witness, 1)
        while k_tower.level < m:
            _, k_tower = albert_ascend(k_tower)
        t2 = inertial_lift_tower(K, k_tower, as_cert)
        report = {
            "case": case,
            "disjointness": "by-type",
            "reason": (
                "first residue field is purely inseparable over k, second is "
                "separable over k; they meet in k"
            ),
            "as_certificate_member": as_cert.member,
        }
        return t1, t2, report

    raise ValueError(f"unknown case {case!r}")


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------


def certify_tower(tower, fixed_subspace=True, rng_samples=5):
    """Recompute the tower's certification block from scratch."""
    import random

    checks = {}
    checks["degree"] = tower.degree
    order = tower.sigma_order()
    checks["sigma_order"] = order
    checks["cyclic"] = order == tower.degree

    # sigma fixes the base and is multiplicative on random pairs
    rng = random.Random(0)
    fixes = True
    for _ in range(rng_samples):
        c = tower.base.random_element(rng)
        if tower.apply_sigma(tower.lift(c)) != tower.lift(c):
            fixes = False
    checks["sigma_fixes_base"] = fixes
    mult = True
    for _ in range(rng_samples):
        x = tower.random_element(rng)
        y = tower.random_element(rng)
        if tower.apply_sigma(x * y) != tower.apply_sigma(x) * tower.apply_sigma(y):
            mult = False
    checks["sigma_multiplicative_samples"] = mult

    shift_ok = []
    for i in range(tower.level):
        sub = tower.prefix(i)
        r = TowerElement(sub, tower.layers[i].rhs)
        s = TowerElement(sub, tower.layers[i].sigma_shift)
        delta = sub.apply_sigma(r) - r
        shift_ok.append(bool(s ** tower.p - s == delta))
    checks["shift_conditions"] = shift_ok

    if fixed_subspace:
        checks["fixed_subspace_dimension"] = tower.sigma_fixed_dimension()

    data = tower.valuation_data
    if data is None:
        checks["valuation"] = {"kind": "none"}
    elif isinstance(data, InseparableWitnessData):
        K = tower.base
        t = K.uniformizer()
        units = []
        relations = []
        for i in range(tower.level):
            y = tower.lift(t ** data.exponents[i]) * tower.gen(i)
            units.append(gauss_valuation(tower, y) == 0)
            target = data.presentation.embed(data.classes[i])
            relations.append(
                tower_residue(tower, y) == data.presentation.gen(i)
                and tower_residue(tower, y ** tower.p) == target
            )
        checks["valuation"] = {
            "kind": data.kind,
            "witness_exponents": list(data.exponents),
            "p_independent": bool(
                data.p_certificate.verdict and data.p_certificate.verify(K.residue_field)
            ),
            "residue_units": units,
            "residue_relations": relations,
            "residue_degree": data.presentation.degree_over_k(),
        }
    else:
        K = tower.base
        k_tower = data.residue_tower
        match = []
        for i in range(tower.level):
            sub = tower.prefix(i)
            sub.valuation_data = InertialWitnessData(
                k_tower.prefix(i), data.seed_certificate
            )
            r = TowerElement(sub, tower.layers[i].rhs)
            if i == 0:
                expected = k_tower.layers[0].rhs
                got = K.residue(r.as_base())
                match.append(got == expected)
            else:
                got = inertial_residue(sub, r)
                expected = TowerElement(k_tower.prefix(i), k_tower.layers[i].rhs)
                match.append(got == expected)
        checks["valuation"] = {
            "kind": data.kind,
            "residue_tower_sigma_order": k_tower.sigma_order(),
            "residue_tower_cyclic": k_tower.sigma_order() == k_tower.degree,
            "seed_certificate": bool(
                (not data.seed_certificate.member)
                and data.seed_certificate.verify(K.residue_field)
            ),
            "rhs_residues_match": match,
            "residue_degree": k_tower.degree,
        }
    return checks


def certification_passed(checks):
    def ok(value):
        if isinstance(value, bool):
            return value
        if isinstance(value, list):
            return all(ok(v) for v in value)
        if isinstance(value, dict):
            return all(
                ok(v)
                for key, v in value.items()
                if isinstance(v, (bool, list, dict))
            )
        return True

    if not checks.get("cyclic", False):
        return False
    if "fixed_subspace_dimension" in checks and checks["fixed_subspace_dimension"] != 1:
        return False
    return ok(checks)


def weakly_unramified_certificate(tower):
    """The residue-degree certificate needed by the division criterion."""
    data = tower.valuation_data
    if data is None:
        raise MissingCertificate("tower has no weakly-unramified certificate")
    checks = tower.certification or certify_tower(tower, fixed_subspace=False)
    val = checks.get("valuation", {})
    if val.get("kind") not in ("inseparable-residues", "inertial-lift"):
        raise MissingCertificate("tower has no weakly-unramified certificate")
    if val.get("residue_degree") != tower.degree:
        raise CertificateError("residue degree does not match the tower degree")
    return {"kind": val["kind"], "residue_degree": val["residue_degree"]}
