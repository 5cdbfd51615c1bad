"""Truncated Witt vectors of length n over a characteristic-p field.

The addition and negation rules are evaluated from universal integer
polynomials derived once per (p, n) from the ghost components

    w_i(Z) = sum_{j<=i} p^(j-1) * Z_j^(p^(i-j)),

solving w_i(S) = w_i(X) + w_i(Y) over the rationals and checking that every
division by p is exact.  The same derivation doubles as the testing oracle.
Multiplication is deliberately absent: nothing in this package needs it.

``asw_layer_equations`` turns a symbol w into the defining equations of its
iterated degree-p extension: solving F(x) - x = w layer by layer with
indeterminate lower components yields x_i^p - x_i = g_i(x_1,...,x_{i-1}).
"""

import json
import os
from fractions import Fraction

from .errors import ShapeMismatch
from .fields import MultiPoly, PolynomialRing, PrimeField, Rationals

LENGTH_BOUND_DEFAULT = 4
CACHE_ENV = "CHARP_WITT_CACHE"

_CACHE = {}


def _poly_to_jsonable(poly):
    return [[list(e), str(c)] for e, c in sorted(poly.table.items())]


def _poly_from_jsonable(ring, data):
    return ring.from_table({tuple(e): Fraction(c) for e, c in data})


class GhostCalculus:
    """Cached universal addition/negation polynomials for one (p, n)."""

    def __init__(self, p, n, add_polys, neg_polys):
        self.p = p
        self.n = n
        self.add_polys = add_polys  # over Q in X1..Xn, Y1..Yn
        self.neg_polys = neg_polys  # over Q in X1..Xn
        fp = PrimeField(p)
        self.add_ring_p = PolynomialRing(fp, add_polys[0].ring.names)
        self.neg_ring_p = PolynomialRing(fp, neg_polys[0].ring.names)
        self.add_mod_p = [self._reduce(s, self.add_ring_p) for s in add_polys]
        self.neg_mod_p = [self._reduce(s, self.neg_ring_p) for s in neg_polys]

    def _reduce(self, poly, ring):
        return ring.from_table({e: int(c) % self.p for e, c in poly.table.items()})

    # -- derivation ---------------------------------------------------------

    @staticmethod
    def ghost(p, i, components, ring):
        """w_i of a vector with entries in ``ring`` (1-based i)."""
        acc = ring.zero()
        for j in range(1, i + 1):
            acc = acc + ring.from_int(p ** (j - 1)) * components[j - 1] ** (
                p ** (i - j)
            )
        return acc

    @classmethod
    def _derive(cls, p, n):
        Q = Rationals()
        xy_names = tuple(f"X{i + 1}" for i in range(n)) + tuple(
            f"Y{i + 1}" for i in range(n)
        )
        Rxy = PolynomialRing(Q, xy_names)
        X = [Rxy.gen(i) for i in range(n)]
        Y = [Rxy.gen(n + i) for i in range(n)]
        Rx = PolynomialRing(Q, tuple(f"X{i + 1}" for i in range(n)))

        def solve_layers(ring, target):
            # target(i) = w_i of the unknown vector; peel off p^(i-1) * S_i
            out = []
            for i in range(1, n + 1):
                rhs = target(i)
                for j in range(1, i):
                    rhs = rhs - ring.from_int(p ** (j - 1)) * out[j - 1] ** (
                        p ** (i - j)
                    )
                scale = Fraction(1, p ** (i - 1))
                s = rhs.scale(scale)
                if any(c.denominator != 1 for c in s.table.values()):
                    raise ArithmeticError("inexact division in ghost solving")
                out.append(s)
            return out

        add = solve_layers(
            Rxy, lambda i: cls.ghost(p, i, X, Rxy) + cls.ghost(p, i, Y, Rxy)
        )
        neg = solve_layers(Rx, lambda i: -cls.ghost(p, i, [Rx.gen(j) for j in range(n)], Rx))
        return cls(p, n, add, neg)

    @classmethod
    def get(cls, p, n, length_bound=LENGTH_BOUND_DEFAULT):
        if n < 1:
            raise ValueError("Witt length must be at least 1")
        if n > length_bound:
            raise ValueError(
                f"Witt length {n} exceeds the configured bound {length_bound}"
            )
        key = (p, n)
        if key in _CACHE:
            return _CACHE[key]
        calc = cls._load(p, n) or cls._derive(p, n)
        calc._store()
        return _CACHE.setdefault(key, calc)

    # -- optional on-disk cache ----------------------------------------------

    @classmethod
    def _cache_path(cls, p, n):
        root = os.environ.get(CACHE_ENV)
        if not root:
            return None
        return os.path.join(root, f"witt_p{p}_n{n}.json")

    @classmethod
    def _load(cls, p, n):
        path = cls._cache_path(p, n)
        if not path or not os.path.exists(path):
            return None
        try:
            with open(path) as fh:
                data = json.load(fh)
            Q = Rationals()
            Rxy = PolynomialRing(Q, tuple(data["xy_names"]))
            Rx = PolynomialRing(Q, tuple(data["x_names"]))
            add = [_poly_from_jsonable(Rxy, d) for d in data["add"]]
            neg = [_poly_from_jsonable(Rx, d) for d in data["neg"]]
            return cls(p, n, add, neg)
        except (OSError, ValueError, KeyError):
            return None

    def _store(self):
        path = self._cache_path(self.p, self.n)
        if not path or os.path.exists(path):
            return
        os.makedirs(os.path.dirname(path), exist_ok=True)
        data = {
            "xy_names": list(self.add_polys[0].ring.names),
            "x_names": list(self.neg_polys[0].ring.names),
            "add": [_poly_to_jsonable(s) for s in self.add_polys],
            "neg": [_poly_to_jsonable(s) for s in self.neg_polys],
        }
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(data, fh)
        os.replace(tmp, path)

    # -- symbolic self-check ---------------------------------------------------

    def ghost_identity_holds(self):
        """w_i(S) = w_i(X) + w_i(Y) and w_i(N) = -w_i(X), identically over Q."""
        Rxy = self.add_polys[0].ring
        X = [Rxy.gen(i) for i in range(self.n)]
        Y = [Rxy.gen(self.n + i) for i in range(self.n)]
        Rx = self.neg_polys[0].ring
        Xn = [Rx.gen(i) for i in range(self.n)]
        for i in range(1, self.n + 1):
            lhs = self.ghost(self.p, i, self.add_polys, Rxy)
            rhs = self.ghost(self.p, i, X, Rxy) + self.ghost(self.p, i, Y, Rxy)
            if lhs != rhs:
                return False
            lhs = self.ghost(self.p, i, self.neg_polys, Rx)
            if lhs != -self.ghost(self.p, i, Xn, Rx):
                return False
        return True


class WittVector:
    """A length-n Witt vector with components in a char-p coefficient field."""

    __slots__ = ("field", "components")

    def __init__(self, field, components):
        if field.characteristic == 0:
            raise ValueError("Witt vectors here live over char-p fields")
        self.field = field
        self.components = tuple(components)

    @property
    def p(self):
        return self.field.characteristic

    @property
    def n(self):
        return len(self.components)

    def _check(self, other):
        if self.field != other.field or self.n != other.n:
            raise ShapeMismatch("Witt vectors of different shape")

    def __add__(self, other):
        return witt_add(self, other)

    def __sub__(self, other):
        return witt_sub(self, other)

    def __neg__(self):
        return witt_neg(self)

    def __eq__(self, other):
        if not isinstance(other, WittVector):
            return NotImplemented
        return (
            self.field == other.field
            and self.n == other.n
            and all(self.field.eq(a, b) for a, b in zip(self.components, other.components))
        )

    def is_zero(self):
        return all(self.field.is_zero(c) for c in self.components)

    def frobenius(self):
        return WittVector(self.field, [self.field.frobenius(c) for c in self.components])

    def to_strings(self):
        return [self.field.to_string(c) for c in self.components]

    def __repr__(self):
        return "W(" + ", ".join(self.to_strings()) + ")"


def witt_zero(field, n):
    return WittVector(field, [field.zero()] * n)


def _evaluate_coeff_int(poly, values, target):
    return poly.evaluate(values, target)


def witt_add(a, b, length_bound=LENGTH_BOUND_DEFAULT):
    a._check(b)
    calc = GhostCalculus.get(a.p, a.n, length_bound)
    values = list(a.components) + list(b.components)
    comps = [_evaluate_coeff_int(s, values, a.field) for s in calc.add_mod_p]
    return WittVector(a.field, comps)


def witt_neg(a, length_bound=LENGTH_BOUND_DEFAULT):
    calc = GhostCalculus.get(a.p, a.n, length_bound)
    values = list(a.components)
    comps = [_evaluate_coeff_int(s, values, a.field) for s in calc.neg_mod_p]
    return WittVector(a.field, comps)


def witt_sub(a, b, length_bound=LENGTH_BOUND_DEFAULT):
    return witt_add(a, witt_neg(b, length_bound), length_bound)


def witt_frobenius(a):
    return a.frobenius()


def witt_verschiebung(a):
    """Shift components down one slot; F(V(a)) = V(F(a)) = p-fold sum of a."""
    return WittVector(a.field, (a.field.zero(),) + a.components[:-1])


# ---------------------------------------------------------------------------
# Artin-Schreier-Witt layer equations
# ---------------------------------------------------------------------------


class ASWLayerSystem:
    """Defining data x_i^p - x_i = g_i(x_1,...,x_{i-1}) extracted from a symbol.

    ``sigma_shifts`` are the generator shifts of the canonical automorphism,
    read off from adding (1, 0, ..., 0) in Witt coordinates:
    sigma(x_i) = x_i + s_i(x_1,...,x_{i-1}).
    """

    def __init__(self, omega, ring, right_hand_sides, sigma_shifts):
        self.omega = omega
        self.ring = ring
        self.right_hand_sides = right_hand_sides
        self.sigma_shifts = sigma_shifts

    @property
    def length(self):
        return len(self.right_hand_sides)

    def _reduce_var(self, poly, i, p):
        g = self.right_hand_sides[i]
        xi = self.ring.gen(i)
        while True:
            bad = [(e, c) for e, c in poly.table.items() if e[i] >= p]
            if not bad:
                return poly
            keep = {e: c for e, c in poly.table.items() if e[i] < p}
            poly = MultiPoly(self.ring, keep)
            for e, c in bad:
                e2 = list(e)
                e2[i] -= p
                mono = self.ring.monomial(tuple(e2), c)
                poly = poly + mono * (xi + g)

    def reduce_modulo_layers(self, poly):
        """Normal form of ``poly`` modulo all relations x_i^p = x_i + g_i."""
        p = self.omega.p
        for i in reversed(range(self.length)):
            poly = self._reduce_var(poly, i, p)
        return poly

    def witt_relation_residual(self):
        """F(x) - x - omega, reduced modulo the layer relations.

        All components vanish identically exactly when the extracted
        equations solve the defining Witt relation.
        """
        R = self.ring
        p = self.omega.p
        xs = R.gens()
        frob = WittVector(R, [x ** p for x in xs])
        plain = WittVector(R, xs)
        diff = witt_sub(frob, plain, length_bound=max(LENGTH_BOUND_DEFAULT, self.length))
        residual = []
        for i, d in enumerate(diff.components):
            r = d - R.from_coeff(self.omega.components[i])
            residual.append(self.reduce_modulo_layers(r))
        return residual

    def instantiate(self, index, values, target, coerce):
        """Evaluate g_index (or a shift) at concrete lower-layer generators."""
        return self.right_hand_sides[index].evaluate(values, target, coerce=coerce)

    def equations(self):
        p = self.omega.p
        out = []
        for i, g in enumerate(self.right_hand_sides):
            name = self.ring.names[i]
            out.append(f"{name}^{p} - {name} = {g.to_string()}")
        return out


def asw_layer_equations(omega, var_prefix="x", length_bound=LENGTH_BOUND_DEFAULT):
    """Extract the layer equations of the extension attached to ``omega``.

    Works over any char-p coefficient field; the right-hand sides are
    polynomials in the lower generators with coefficients from the symbol's
    field, g_1 being the first component itself.
    """
    field = omega.field
    p, m = omega.p, omega.n
    R = PolynomialRing(field, tuple(f"{var_prefix}{i + 1}" for i in range(m)))
    xs = R.gens()
    calc = GhostCalculus.get(p, m, max(length_bound, m))

    def embed(c):
        return R.from_coeff(c)

    frob = [x ** p for x in xs]
    neg_x = [s.evaluate(xs, R, coerce=lambda c: R.from_int(int(c))) for s in calc.neg_mod_p]
    diff = [
        s.evaluate(frob + neg_x, R, coerce=lambda c: R.from_int(int(c)))
        for s in calc.add_mod_p
    ]
    gs = []
    for i in range(m):
        carry = diff[i] - (xs[i] ** p - xs[i])
        if carry.degree_in(i) > 0:
            raise ArithmeticError("carry term involves its own layer generator")
        gs.append(embed(omega.components[i]) - carry)

    one_vec = [R.one()] + [R.zero()] * (m - 1)
    shifted = [
        s.evaluate(xs + one_vec, R, coerce=lambda c: R.from_int(int(c)))
        for s in calc.add_mod_p
    ]
    shifts = []
    for i in range(m):
        s = shifted[i] - xs[i]
        if s.degree_in(i) > 0:
            raise ArithmeticError("sigma shift involves its own layer generator")
        shifts.append(s)
    return ASWLayerSystem(omega, R, gs, shifts)
