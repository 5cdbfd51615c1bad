"""Exact coefficient domains for characteristic-p constructions.

The layers, from the bottom up:

* ``PrimeField(p)``        -- F_p, elements are plain ints in [0, p).
* ``Rationals()``          -- exact rationals, used only to derive universal
                              Witt polynomials over the integers.
* ``PolynomialRing``       -- sparse multivariate polynomials, generic over
                              any coefficient field implementing the small
                              ring protocol used throughout this package
                              (zero/one/from_int/add/sub/neg/mul/...).
* ``FunctionField(p, us)`` -- k = F_p(u1,...,ur) as canonical fractions of
                              polynomials; equality is representation
                              equality.
* ``ValuedField(p, us)``   -- K = k(t) with the t-adic valuation, residue
                              map onto k, and Laurent expansion.  K is an
                              exact working model of the completed field
                              k((t)): every construction in this package
                              stays inside k(t).

All values are immutable after construction; every operation is a pure
function of its inputs.
"""

import math
from fractions import Fraction

from .errors import NegativeValuation, ShapeMismatch

INFINITY = math.inf


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class PrimeField:
    """The prime field F_p.  Elements are ints reduced mod p."""

    def __init__(self, p):
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p

    @property
    def characteristic(self):
        return self.p

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        if n < 0:
            return self.inv(pow(a, -n, self.p))
        return pow(a, n, self.p)

    def eq(self, a, b):
        return (a - b) % self.p == 0

    def is_zero(self, a):
        return a % self.p == 0

    def is_one(self, a):
        return a % self.p == 1

    def frobenius(self, a):
        return a % self.p  # x^p = x on F_p

    def elements(self):
        return range(self.p)

    def to_string(self, a):
        return str(a % self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


class Rationals:
    """Exact rational numbers; characteristic 0."""

    characteristic = 0

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return 1 / a

    def div(self, a, b):
        return a / b

    def pow(self, a, n):
        return a ** n

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a == 0

    def is_one(self, a):
        return a == 1

    def to_string(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Rationals")

    def __repr__(self):
        return "Rationals()"


class PolynomialRing:
    """Sparse multivariate polynomials over a coefficient field.

    Exponent vectors are tuples of non-negative ints; no zero coefficient
    is ever stored, so the zero polynomial has an empty table.
    """

    def __init__(self, coeff, names):
        self.coeff = coeff
        self.names = tuple(names)
        self.nvars = len(self.names)

    @property
    def characteristic(self):
        return self.coeff.characteristic

    def _poly(self, table):
        return MultiPoly(self, table)

    def zero(self):
        return self._poly({})

    def one(self):
        return self.from_coeff(self.coeff.one())

    def from_coeff(self, c):
        if self.coeff.is_zero(c):
            return self.zero()
        return self._poly({(0,) * self.nvars: c})

    def from_int(self, n):
        return self.from_coeff(self.coeff.from_int(n))

    def from_table(self, table):
        clean = {tuple(e): c for e, c in table.items() if not self.coeff.is_zero(c)}
        return self._poly(clean)

    def gen(self, i):
        e = [0] * self.nvars
        e[i] = 1
        return self._poly({tuple(e): self.coeff.one()})

    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exps, c=None):
        c = self.coeff.one() if c is None else c
        if self.coeff.is_zero(c):
            return self.zero()
        return self._poly({tuple(exps): c})

    # ring protocol on MultiPoly values, for generic algorithms
    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def pow(self, a, n):
        return a ** n

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a.is_zero()

    def is_one(self, a):
        return a.is_one()

    def to_string(self, a):
        return a.to_string()

    def __eq__(self, other):
        return (
            isinstance(other, PolynomialRing)
            and other.coeff == self.coeff
            and other.names == self.names
        )

    def __hash__(self):
        return hash(("PolynomialRing", self.coeff, self.names))

    def __repr__(self):
        return f"PolynomialRing({self.coeff!r}, {self.names})"


class MultiPoly:
    """A sparse multivariate polynomial, immutable by convention."""

    __slots__ = ("ring", "table")

    def __init__(self, ring, table):
        self.ring = ring
        self.table = table

    # -- structure ---------------------------------------------------------

    def is_zero(self):
        return not self.table

    def is_one(self):
        if len(self.table) != 1:
            return False
        e, c = next(iter(self.table.items()))
        return all(x == 0 for x in e) and self.ring.coeff.is_one(c)

    def is_constant(self):
        return all(all(x == 0 for x in e) for e in self.table)

    def constant_value(self):
        if self.is_zero():
            return self.ring.coeff.zero()
        (e, c), = self.table.items()
        if any(x != 0 for x in e):
            raise ValueError("not a constant polynomial")
        return c

    def total_degree(self):
        if self.is_zero():
            return -1
        return max(sum(e) for e in self.table)

    def degree_in(self, var):
        if self.is_zero():
            return -1
        return max(e[var] for e in self.table)

    def variables(self):
        seen = set()
        for e in self.table:
            for i, x in enumerate(e):
                if x:
                    seen.add(i)
        return sorted(seen)

    def lex_leading(self):
        """(exponent, coefficient) of the lexicographically largest monomial."""
        e = max(self.table)
        return e, self.table[e]

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise ShapeMismatch("polynomials from different rings")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        K = self.ring.coeff
        table = dict(self.table)
        for e, c in other.table.items():
            s = K.add(table.get(e, K.zero()), c)
            if K.is_zero(s):
                table.pop(e, None)
            else:
                table[e] = s
        return MultiPoly(self.ring, table)

    __radd__ = __add__

    def __neg__(self):
        K = self.ring.coeff
        return MultiPoly(self.ring, {e: K.neg(c) for e, c in self.table.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        K = self.ring.coeff
        if not self.table or not other.table:
            return self.ring.zero()
        table = {}
        for e1, c1 in self.table.items():
            for e2, c2 in other.table.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = K.mul(c1, c2)
                s = K.add(table.get(e, K.zero()), c)
                if K.is_zero(s):
                    table.pop(e, None)
                else:
                    table[e] = s
        return MultiPoly(self.ring, table)

    __rmul__ = __mul__

    def scale(self, c):
        K = self.ring.coeff
        if K.is_zero(c):
            return self.ring.zero()
        return MultiPoly(self.ring, {e: K.mul(v, c) for e, v in self.table.items()})

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        if n == 0:
            return self.ring.one()
        p = self.ring.characteristic
        if p and n >= p:
            # x^n = prod_i Frob^i(x^(d_i)) for n = sum d_i p^i, exact in char p
            result = self.ring.one()
            base = self
            while n:
                n, d = divmod(n, p)
                if d:
                    result = result * base._small_pow(d)
                if n:
                    base = base.frobenius()
            return result
        return self._small_pow(n)

    def _small_pow(self, n):
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def frobenius(self):
        """The p-th power, using additivity of Frobenius in char p."""
        p = self.ring.characteristic
        if not p:
            raise ValueError("frobenius needs positive characteristic")
        K = self.ring.coeff
        return MultiPoly(
            self.ring,
            {tuple(x * p for x in e): K.frobenius(c) for e, c in self.table.items()},
        )

    def derivative(self, var):
        K = self.ring.coeff
        p = self.ring.characteristic
        table = {}
        for e, c in self.table.items():
            if e[var] == 0:
                continue
            m = K.mul(c, K.from_int(e[var]))
            if K.is_zero(m):
                continue
            e2 = list(e)
            e2[var] -= 1
            e2 = tuple(e2)
            s = K.add(table.get(e2, K.zero()), m)
            if K.is_zero(s):
                table.pop(e2, None)
            else:
                table[e2] = s
        return MultiPoly(self.ring, table)

    def evaluate(self, values, target, coerce=None):
        """Substitute ``values`` (elements of ``target``) for the variables.

        ``coerce`` maps a coefficient into ``target``; by default
        coefficients are assumed to be integer-like and go through
        ``target.from_int``.
        """
        if coerce is None:
            coerce = lambda c: target.from_int(int(c))
        powers = [{} for _ in range(self.ring.nvars)]

        def power(i, n):
            cache = powers[i]
            if n not in cache:
                cache[n] = target.pow(values[i], n)
            return cache[n]

        acc = target.zero()
        for e, c in self.table.items():
            term = coerce(c)
            for i, x in enumerate(e):
                if x:
                    term = target.mul(term, power(i, x))
            acc = target.add(acc, term)
        return acc

    # -- comparison and printing -------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ring == other.ring and self.table == other.table

    def __hash__(self):
        return hash((self.ring, frozenset(self.table.items())))

    def to_string(self):
        if self.is_zero():
            return "0"
        K = self.ring.coeff
        parts = []
        for e in sorted(self.table, reverse=True):
            c = self.table[e]
            factors = []
            if not K.is_one(c) or all(x == 0 for x in e):
                factors.append(K.to_string(c))
            for name, x in zip(self.ring.names, e):
                if x == 1:
                    factors.append(name)
                elif x > 1:
                    factors.append(f"{name}^{x}")
            parts.append("*".join(factors))
        return "+".join(parts)

    def __repr__(self):
        return f"<poly {self.to_string()}>"


# ---------------------------------------------------------------------------
# polynomial gcd: content/primitive-part recursion, one variable at a time
# ---------------------------------------------------------------------------


def poly_exact_div(f, g):
    """Quotient f/g when g divides f exactly (lex long division)."""
    ring = f.ring
    K = ring.coeff
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if g.is_one():
        return f
    q = {}
    r = dict(f.table)
    ge, gc = g.lex_leading()
    gc_inv = K.inv(gc)
    while r:
        re = max(r)
        diff = tuple(a - b for a, b in zip(re, ge))
        if any(d < 0 for d in diff):
            raise ValueError("division is not exact")
        c = K.mul(r[re], gc_inv)
        q[diff] = c
        for e2, c2 in g.table.items():
            e = tuple(a + b for a, b in zip(diff, e2))
            s = K.sub(r.get(e, K.zero()), K.mul(c, c2))
            if K.is_zero(s):
                r.pop(e, None)
            else:
                r[e] = s
    return MultiPoly(ring, q)


def _as_univariate(f, var):
    """View f as a polynomial in one variable with MultiPoly coefficients."""
    ring = f.ring
    coeffs = {}
    for e, c in f.table.items():
        d = e[var]
        e2 = list(e)
        e2[var] = 0
        e2 = tuple(e2)
        bucket = coeffs.setdefault(d, {})
        bucket[e2] = c
    return {d: MultiPoly(ring, t) for d, t in sorted(coeffs.items())}


def _from_univariate(ring, var, coeffs):
    table = {}
    for d, poly in coeffs.items():
        for e, c in poly.table.items():
            e2 = list(e)
            e2[var] = d
            table[tuple(e2)] = c
    return MultiPoly(ring, table)


def _gcd_list(polys):
    g = None
    for f in polys:
        g = f if g is None else poly_gcd(g, f)
        if g.is_one():
            return g
    return g


def _normalize(f):
    """Scale so the lex-leading coefficient is one."""
    if f.is_zero():
        return f
    _, c = f.lex_leading()
    K = f.ring.coeff
    if K.is_one(c):
        return f
    return f.scale(K.inv(c))


def _gcd_univariate(f, g, var):
    K = f.ring.coeff
    a, b = f, g
    while not b.is_zero():
        # reduce a mod b in the single variable var
        ua = _as_univariate(a, var)
        ub = _as_univariate(b, var)
        db = max(ub)
        lb = ub[db]
        lb_inv_needed = True
        while ua and max(ua) >= db:
            da = max(ua)
            la = ua[da]
            if lb_inv_needed:
                # coefficients here are constants of the base field
                lb_c = lb.constant_value()
                lb_inv = K.inv(lb_c)
                lb_inv_needed = False
            factor = la.scale(lb_inv)
            for d2, c2 in ub.items():
                d = da - db + d2
                cur = ua.get(d, f.ring.zero())
                new = cur - factor * c2
                if new.is_zero():
                    ua.pop(d, None)
                else:
                    ua[d] = new
        a, b = b, _from_univariate(f.ring, var, ua)
    return _normalize(a)


def _pseudo_rem(f, g, var):
    """Pseudo-remainder of f by g in the given variable."""
    ring = f.ring
    uf = _as_univariate(f, var)
    ug = _as_univariate(g, var)
    dg = max(ug)
    lg = ug[dg]
    r = uf
    while r and max(r) >= dg:
        dr = max(r)
        lr = r[dr]
        new = {}
        for d, c in r.items():
            new[d] = c * lg
        for d2, c2 in ug.items():
            d = dr - dg + d2
            cur = new.get(d, ring.zero())
            val = cur - lr * c2
            if val.is_zero():
                new.pop(d, None)
            else:
                new[d] = val
        r = {d: c for d, c in new.items() if not c.is_zero()}
    return _from_univariate(ring, var, r)


def _content_pp(f, var):
    u = _as_univariate(f, var)
    content = _gcd_list(list(u.values()))
    if content.is_one():
        return content, f
    return content, poly_exact_div(f, content)


def poly_gcd(f, g):
    """Monic gcd over the coefficient field, by primitive remainder sequences."""
    if f.is_zero():
        return _normalize(g)
    if g.is_zero():
        return _normalize(f)
    if f.is_constant() or g.is_constant():
        return f.ring.one()
    if f.table == g.table:
        return _normalize(f)
    if len(f.table) == 1 or len(g.table) == 1:
        # gcd with a monomial: componentwise minimum over all monomials
        mins = None
        for poly in (f, g):
            for e in poly.table:
                mins = e if mins is None else tuple(min(a, b) for a, b in zip(mins, e))
        return f.ring.monomial(mins)
    fvars = set(f.variables()) | set(g.variables())
    if len(fvars) == 1:
        return _gcd_univariate(f, g, fvars.pop())
    var = max(fvars)
    cf, pf = _content_pp(f, var)
    cg, pg = _content_pp(g, var)
    c = poly_gcd(cf, cg)
    a, b = pf, pg
    while not b.is_zero():
        r = _pseudo_rem(a, b, var)
        if r.is_zero():
            a, b = b, r
        else:
            _, rp = _content_pp(r, var)
            a, b = b, rp
    return _normalize(c * a)


# ---------------------------------------------------------------------------
# rational function fields
# ---------------------------------------------------------------------------


class RationalFunction:
    """Canonical fraction num/den of polynomials: gcd removed, den monic-lex."""

    __slots__ = ("field", "num", "den", "_val")

    def __init__(self, field, num, den):
        self.field = field
        self.num = num
        self.den = den
        self._val = None

    # -- predicates ----------------------------------------------------------

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num.is_one() and self.den.is_one()

    def is_polynomial(self):
        return self.den.is_one()

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.field != self.field:
                raise ShapeMismatch("elements of different function fields")
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.table == other.den.table:
            return self.field._make(self.num + other.num, self.den)
        return self.field._make(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(self.field, -self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.field.zero()
        # cancel crosswise first to keep products small
        a, b = self.num, other.den
        g = poly_gcd(a, b)
        if not g.is_one():
            a, b = poly_exact_div(a, g), poly_exact_div(b, g)
        c, d = other.num, self.den
        g = poly_gcd(c, d)
        if not g.is_one():
            c, d = poly_exact_div(c, g), poly_exact_div(d, g)
        return self.field._make_reduced(a * c, b * d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero in function field")
        return self * RationalFunction(other.field, other.den, other.num)

    def __rtruediv__(self, other):
        return self.field.from_int(other) / self

    def inv(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in function field")
        return self.field._make(self.den, self.num)

    def __pow__(self, n):
        if n == 0:
            return self.field.one()
        if n < 0:
            return self.inv() ** (-n)
        return self.field._make_reduced(self.num ** n, self.den ** n)

    def frobenius(self):
        return RationalFunction(self.field, self.num.frobenius(), self.den.frobenius())

    def derivative(self, var):
        num = self.num.derivative(var) * self.den - self.num * self.den.derivative(var)
        return self.field._make(num, self.den * self.den)

    # -- comparison and printing ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return (
            self.field == other.field
            and self.num.table == other.num.table
            and self.den.table == other.den.table
        )

    def __hash__(self):
        return hash(
            (self.field, frozenset(self.num.table.items()), frozenset(self.den.table.items()))
        )

    def to_string(self):
        if self.den.is_one():
            return self.num.to_string()
        return f"({self.num.to_string()})/({self.den.to_string()})"

    def __repr__(self):
        return f"<{self.to_string()}>"

    def valuation(self):
        return self.field.valuation(self)


class FunctionField:
    """k = F_p(names): exact rational functions in canonical form."""

    def __init__(self, p, names):
        self.base = PrimeField(p)
        self.ring = PolynomialRing(self.base, names)
        self.p = p
        self.names = self.ring.names

    @property
    def characteristic(self):
        return self.p

    # -- construction ----------------------------------------------------------

    def _make_reduced(self, num, den):
        """Canonicalize a fraction already known to need only normalization."""
        if num.is_zero():
            return RationalFunction(self, self.ring.zero(), self.ring.one())
        if not den.is_constant():
            _, lc = den.lex_leading()
            if not self.base.is_one(lc):
                c = self.base.inv(lc)
                num, den = num.scale(c), den.scale(c)
        else:
            c = self.base.inv(den.constant_value())
            num, den = num.scale(c), self.ring.one()
        return RationalFunction(self, num, den)

    def _make(self, num, den):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return RationalFunction(self, self.ring.zero(), self.ring.one())
        if not den.is_one():
            g = poly_gcd(num, den)
            if not g.is_one():
                num, den = poly_exact_div(num, g), poly_exact_div(den, g)
        return self._make_reduced(num, den)

    def zero(self):
        return RationalFunction(self, self.ring.zero(), self.ring.one())

    def one(self):
        return RationalFunction(self, self.ring.one(), self.ring.one())

    def from_int(self, n):
        return RationalFunction(self, self.ring.from_int(n), self.ring.one())

    def from_poly(self, poly):
        if poly.ring != self.ring:
            raise ShapeMismatch("polynomial from a different ring")
        return RationalFunction(self, poly, self.ring.one())

    def gen(self, i):
        return self.from_poly(self.ring.gen(i))

    def gens(self):
        return [self.gen(i) for i in range(self.ring.nvars)]

    def var(self, name):
        return self.gen(self.names.index(name))

    # -- field protocol ---------------------------------------------------------

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
        return a.frobenius()

    def to_string(self, a):
        return a.to_string()

    def parse(self, text):
        from .expressions import parse_expression

        return parse_expression(self, text)

    def random_element(self, rng, degree=2, terms=2, fraction=False):
        """A small random element, deterministic in ``rng``."""
        def random_poly():
            table = {}
            for _ in range(terms):
                e = [0] * self.ring.nvars
                budget = rng.randrange(degree + 1)
                for _ in range(budget):
                    if self.ring.nvars:
                        e[rng.randrange(self.ring.nvars)] += 1
                c = rng.randrange(1, self.p)
                table[tuple(e)] = c
            return self.ring.from_table(table)

        num = random_poly()
        if fraction:
            den = random_poly()
            while den.is_zero():
                den = random_poly()
            return self._make(num, den)
        return self.from_poly(num)

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and other.p == self.p
            and other.names == self.names
        )

    def __hash__(self):
        return hash((type(self).__name__, self.p, self.names))

    def __repr__(self):
        vars_ = ",".join(self.names)
        return f"{type(self).__name__}(F_{self.p}({vars_}))"


class LaurentExpansion:
    """A truncated t-adic expansion: coefficients from the residue field."""

    def __init__(self, start, coeffs, precision, zero=False):
        self.start = start
        self.coeffs = list(coeffs)
        self.precision = precision
        self.zero = zero

    def __str__(self):
        if self.zero:
            return f"O(t^{self.precision}) [zero]"
        parts = []
        for i, c in enumerate(self.coeffs):
            e = self.start + i
            if c.is_zero():
                continue
            cs = c.to_string()
            if "+" in cs or "/" in cs:
                cs = f"({cs})"
            if e == 0:
                parts.append(cs)
            elif e == 1:
                parts.append(f"{cs}*t" if cs != "1" else "t")
            else:
                parts.append(f"{cs}*t^{e}" if cs != "1" else f"t^{e}")
        tail = f"O(t^{self.start + self.precision})"
        return " + ".join(parts + [tail]) if parts else tail

    def __repr__(self):
        return f"<laurent {self}>"


class ValuedField(FunctionField):
    """K = k(t) with the t-adic valuation; k = F_p(u-variables).

    Elements are flat fractions in the u-variables and t.  The valuation of
    a nonzero x is the t-order of the numerator minus the t-order of the
    denominator; the residue map sends the valuation ring onto k by t -> 0.
    """

    def __init__(self, p, unames, tname="t"):
        if tname in unames:
            raise ValueError("uniformizer name collides with a residue variable")
        super().__init__(p, tuple(unames) + (tname,))
        self.unames = tuple(unames)
        self.tname = tname
        self.t_index = len(self.unames)
        self.residue_field = FunctionField(p, self.unames)

    def uniformizer(self):
        return self.gen(self.t_index)

    def _t_order(self, poly):
        if poly.is_zero():
            return INFINITY
        return min(e[self.t_index] for e in poly.table)

    def _t_shift(self, poly, shift):
        """Multiply a polynomial by t^shift (shift may be negative)."""
        table = {}
        for e, c in poly.table.items():
            e2 = list(e)
            e2[self.t_index] += shift
            if e2[self.t_index] < 0:
                raise ValueError("negative t-exponent after shift")
            table[tuple(e2)] = c
        return MultiPoly(self.ring, table)

    def _t_graded(self, poly):
        """Split into residue-field numerator pieces by t-degree."""
        pieces = {}
        for e, c in poly.table.items():
            d = e[self.t_index]
            e2 = e[: self.t_index]
            pieces.setdefault(d, {})[e2] = c
        return {
            d: self.residue_field.ring.from_table(t) for d, t in sorted(pieces.items())
        }

    def valuation(self, x):
        if x._val is None:
            if x.is_zero():
                x._val = INFINITY
            else:
                x._val = self._t_order(x.num) - self._t_order(x.den)
        return x._val

    def residue(self, x):
        """Image in k of an element of the valuation ring (v >= 0)."""
        v = self.valuation(x)
        if v is INFINITY:
            return self.residue_field.zero()
        if v < 0:
            raise NegativeValuation(f"element has valuation {v} < 0")
        if v > 0:
            return self.residue_field.zero()
        num = self._t_shift(x.num, -self._t_order(x.num))
        den = self._t_shift(x.den, -self._t_order(x.den))
        num0 = self._t_graded(num).get(0, self.residue_field.ring.zero())
        den0 = self._t_graded(den).get(0)
        return self.residue_field._make(num0, den0)

    def laurent_expand(self, x, n_terms):
        """The first ``n_terms`` coefficients of the t-adic expansion of x."""
        if n_terms < 0:
            raise ValueError("n_terms must be non-negative")
        if x.is_zero():
            return LaurentExpansion(0, [], n_terms, zero=True)
        v = self.valuation(x)
        num = self._t_shift(x.num, -self._t_order(x.num))
        den = self._t_shift(x.den, -self._t_order(x.den))
        P = self._t_graded(num)
        Q = self._t_graded(den)
        k = self.residue_field
        q0 = k.from_poly(Q[0])
        coeffs = []
        for j in range(n_terms):
            s = k.from_poly(P.get(j, k.ring.zero()))
            for i in range(1, j + 1):
                if i in Q:
                    s = s - k.from_poly(Q[i]) * coeffs[j - i]
            coeffs.append(s / q0)
        return LaurentExpansion(v, coeffs, n_terms)

    def from_residue(self, x):
        """Embed an element of k into K (constants in t)."""
        if x.field != self.residue_field:
            raise ShapeMismatch("element is not in the residue field")

        def pad(poly):
            return MultiPoly(
                self.ring, {e + (0,): c for e, c in poly.table.items()}
            )

        return RationalFunction(self, pad(x.num), pad(x.den))

    def from_laurent(self, expansion):
        """Re-sum a truncated expansion into an element of K (for testing)."""
        t = self.uniformizer()
        acc = self.zero()
        for i, c in enumerate(expansion.coeffs):
            acc = acc + self.from_residue(c) * t ** (expansion.start + i)
        return acc

    def random_element(self, rng, degree=2, terms=2, fraction=True):
        x = super().random_element(rng, degree=degree, terms=terms, fraction=fraction)
        if x.is_zero():
            return self.one()
        return x


def frobenius(x):
    """x -> x^p on any element that knows its own Frobenius."""
    return x.frobenius()
