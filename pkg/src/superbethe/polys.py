"""Univariate polynomials and reduced rational functions in x over a
FieldSpec, together with the shift calculus: f[k] = f(x - k*h), discrete
log derivatives, Casorati determinants and the skew linear solver.
"""

from __future__ import annotations

from .scalars import INFINITY, FieldSpec, Scalar, ScalarError
from . import linalg


class Poly:
    """Dense univariate polynomial; coefficients ascending, top one nonzero."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field, coeffs):
        cs = [field.scalar(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)
        self._hash = None

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def zero(field):
        return Poly(field, ())

    @staticmethod
    def one(field):
        return Poly(field, (field.one,))

    @staticmethod
    def x(field):
        return Poly(field, (field.zero, field.one))

    @staticmethod
    def from_roots(field, roots, lead=1):
        p = Poly(field, (field.scalar(lead),))
        for r in roots:
            p = p * Poly(field, (-field.scalar(r), field.one))
        return p

    # -- basic structure ---------------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def is_one(self):
        return len(self.coeffs) == 1 and self.coeffs[0].is_one()

    def is_constant(self):
        return len(self.coeffs) <= 1

    def lead(self):
        if not self.coeffs:
            raise ScalarError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k):
        return self.coeffs[k] if 0 <= k <= self.degree else self.field.zero

    def monic(self):
        if self.is_zero():
            raise ScalarError("zero polynomial cannot be normalized monic")
        lc = self.lead()
        if lc.is_one():
            return self
        return Poly(self.field, [c / lc for c in self.coeffs])

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1].is_one()

    # -- arithmetic ---------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, RatFunc):
            return NotImplemented
        return Poly(self.field, (self.field.scalar(other),))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        cs = list(a)
        for i, c in enumerate(b):
            cs[i] = cs[i] + c
        return Poly(self.field, cs)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.field)
        zero = self.field.zero
        cs = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                cs[i + j] = cs[i + j] + a * b
        return Poly(self.field, cs)

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        den = other.coeffs
        inv = self.field.one / other.lead()
        q = [self.field.zero] * max(len(rem) - len(den) + 1, 0)
        while len(rem) >= len(den):
            c = rem[-1] * inv
            k = len(rem) - len(den)
            q[k] = c
            for i in range(len(den)):
                rem[k + i] = rem[k + i] - c * den[i]
            while rem and rem[-1].is_zero():
                rem.pop()
        return Poly(self.field, q), Poly(self.field, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divexact(self, other):
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ScalarError("inexact polynomial division")
        return q

    def divides(self, other):
        """True when self divides other exactly."""
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    def gcd(self, other):
        a, b = self, self._coerce(other)
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return a
        return a.monic()

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise TypeError("polynomial powers take nonnegative integers")
        result = Poly.one(self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Scalar)):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def key(self):
        return tuple(c.key() for c in self.coeffs)

    # -- evaluation and substitution ------------------------------------------------

    def eval(self, v):
        v = self.field.scalar(v)
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    def compose_add(self, t):
        """p(x + t) for a scalar t."""
        t = self.field.scalar(t)
        if t.is_zero() or self.is_zero():
            return self
        # Horner in (x + t)
        shift_x = Poly(self.field, (t, self.field.one))
        acc = Poly.zero(self.field)
        for c in reversed(self.coeffs):
            acc = acc * shift_x + Poly(self.field, (c,))
        return acc

    def shift(self, k):
        """The shifted polynomial p[k](x) = p(x - k*h)."""
        if not isinstance(k, int):
            raise TypeError("shift exponent must be an integer")
        return self.compose_add(-self.field.h * k)

    def derivative(self):
        return Poly(self.field, [c * i for i, c in enumerate(self.coeffs)][1:])

    def has_simple_roots(self):
        if self.degree <= 0:
            return True
        return self.gcd(self.derivative()).degree == 0

    # -- parameter handling -----------------------------------------------------------

    def involves(self, name):
        return any(c.involves(name) for c in self.coeffs)

    def clear_param_denominators(self):
        """Multiply by the coefficient denominators so that every coefficient
        is a parameter polynomial (denominator one)."""
        p = self
        for c in self.coeffs:
            den = c.denominator_scalar()
            if not den.is_one():
                p = p * Poly(self.field, (den,))
        return p

    def specialize(self, name, value):
        """Substitute a parameter value; `value` may be INFINITY, selecting
        the top coefficient layer in the parameter (projective limit)."""
        if value is INFINITY:
            p = self.clear_param_denominators()
            top = max((c.param_degree(name) for c in p.coeffs), default=0)
            return Poly(self.field, [c.param_part(name, top) for c in p.coeffs])
        return Poly(self.field, [c.subst_param(name, value) for c in self.coeffs])

    # -- root extraction ----------------------------------------------------------------

    def roots(self):
        """All roots in the field with multiplicities, plus the unsplit factor.

        Returns (list of (root, multiplicity), leftover monic Poly).
        """
        if self.is_zero():
            raise ScalarError("zero polynomial has every root")
        p = self.monic()
        found = []
        while p.degree >= 1:
            r = _find_root(p)
            if r is None:
                break
            lin = Poly(self.field, (-r, self.field.one))
            mult = 0
            while lin.divides(p):
                p = p.divexact(lin)
                mult += 1
            found.append((r, mult))
        return found, p

    # -- rendering ------------------------------------------------------------------------

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            cs = str(c)
            wrap = any(op in cs[1:] for op in "+-/") or "/" in cs
            if i == 0:
                parts.append(f"({cs})" if wrap else cs)
            else:
                mono = "x" if i == 1 else f"x**{i}"
                if c.is_one():
                    parts.append(mono)
                elif cs == "-1":
                    parts.append(f"-{mono}")
                else:
                    parts.append((f"({cs})" if wrap else cs) + f"*{mono}")
        out = parts[0]
        for term in parts[1:]:
            if term.startswith("-"):
                out += f" - {term[1:]}"
            else:
                out += f" + {term}"
        return out

    def __repr__(self):
        return f"Poly({self})"


def _find_root(p):
    """One root of a monic polynomial over the field, or None."""
    field = p.field
    if any(c.involves(name) for c in p.coeffs for name in field.params):
        return None
    if p.degree == 1:
        return -p.coeffs[0]
    if p.degree == 2:
        b, c = p.coeffs[1], p.coeffs[0]
        disc = b * b - 4 * c
        s = disc.sqrt()
        if s is None:
            return None
        return (-b + s) / 2
    # rational root search for rational coefficients
    if all(c.is_rational() for c in p.coeffs):
        fracs = [c.as_fraction() for c in p.coeffs]
        lcm = 1
        for f in fracs:
            den = int(f.denominator)
            g = _gcd_int(lcm, den)
            lcm = lcm // g * den
        ints = [int(f * lcm) for f in fracs]
        a0, an = ints[0], ints[-1]
        if a0 == 0:
            return field.zero
        for pp in _divisors(abs(a0)):
            for qq in _divisors(abs(an)):
                for sgn in (1, -1):
                    cand = field.scalar((sgn * pp, qq))
                    if p.eval(cand).is_zero():
                        return cand
    return None


def _gcd_int(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n):
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


class RatFunc:
    """Reduced fraction of polynomials; denominator monic and coprime to the
    numerator."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field, num, den=None):
        if not isinstance(num, Poly):
            num = Poly(field, (field.scalar(num),))
        if den is None:
            den = Poly.one(field)
        elif not isinstance(den, Poly):
            den = Poly(field, (field.scalar(den),))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            den = Poly.one(field)
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num = num.divexact(g)
                den = den.divexact(g)
            lc = den.lead()
            if not lc.is_one():
                num = Poly(field, [c / lc for c in num.coeffs])
                den = den.monic()
        self.field = field
        self.num = num
        self.den = den
        self._hash = None

    @staticmethod
    def zero(field):
        return RatFunc(field, Poly.zero(field))

    @staticmethod
    def one(field):
        return RatFunc(field, Poly.one(field))

    @staticmethod
    def x(field):
        return RatFunc(field, Poly.x(field))

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return bool(self.num)

    def is_one(self):
        return self.num.is_one() and self.den.is_one()

    def is_polynomial(self):
        return self.den.is_one()

    def as_poly(self):
        if not self.is_polynomial():
            raise ScalarError("rational function is not a polynomial")
        return self.num

    def is_constant(self):
        return self.num.is_constant() and self.den.is_one()

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(self.field, other)
        return RatFunc(self.field, Poly(self.field, (self.field.scalar(other),)))

    def __add__(self, other):
        other = self._coerce(other)
        return RatFunc(
            self.field,
            self.num * other.den + other.num * self.den,
            self.den * other.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.field, -self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        return RatFunc(self.field, self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.field, self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("rational powers take integer exponents")
        if k < 0:
            return (RatFunc.one(self.field) / self) ** (-k)
        result = RatFunc.one(self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (RatFunc, Poly, int, Scalar)):
            other = self._coerce(other)
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num.key(), self.den.key()))
        return self._hash

    def shift(self, k):
        """f[k](x) = f(x - k*h)."""
        return RatFunc(self.field, self.num.shift(k), self.den.shift(k))

    def eval(self, v):
        dv = self.den.eval(v)
        if dv.is_zero():
            raise ZeroDivisionError(f"pole at {v}")
        return self.num.eval(v) / dv

    def monic_normalized(self):
        """Scale so the numerator is monic (projective representative)."""
        if self.is_zero():
            return self
        lc = self.num.lead()
        if lc.is_one():
            return self
        out = RatFunc(self.field, self.num.monic(), self.den)
        return out

    def involves(self, name):
        return self.num.involves(name) or self.den.involves(name)

    def specialize(self, name, value):
        if value is INFINITY:
            raise ScalarError("infinity specialization is defined on polynomials")
        num = self.num.specialize(name, value)
        den = self.den.specialize(name, value)
        return RatFunc(self.field, num, den)

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc({self})"


# ---------------------------------------------------------------------------
# shift calculus operations


def shift(f, k):
    """f[k](x) = f(x - k*h) for Poly or RatFunc."""
    return f.shift(k)


def dlog(f):
    """Discrete logarithmic derivative f / f[1]; multiplicative."""
    if isinstance(f, Poly):
        f = RatFunc(f.field, f)
    if f.is_zero():
        raise ZeroDivisionError("discrete log derivative of zero")
    return f / f.shift(1)


def casorati(sign, gs):
    """Casorati determinant det(g_j(x +- (i-1)h)) of r functions.

    `sign` is '+'/+1 or '-'/-1; the minus variant is the default discrete
    Wronskian Wr.
    """
    gs = list(gs)
    if not gs:
        raise ValueError("casorati needs at least one function")
    field = gs[0].field
    s = 1 if sign in (1, "+", "+1") else -1
    gs = [g if isinstance(g, RatFunc) else RatFunc(field, g) for g in gs]
    rows = [[g.shift(-s * i) for g in gs] for i in range(len(gs))]
    return linalg.det(rows, RatFunc.zero(field), RatFunc.one(field))


def wr(gs):
    """Discrete Wronskian Wr = Wr^- of a list of functions."""
    return casorati(-1, gs)


def wr_pair(s, g1, g2):
    """Two-argument signed Wronskian g1*g2[-s] - g2*g1[-s]."""
    if s not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if isinstance(g1, Poly):
        g1 = RatFunc(g1.field, g1)
    g2 = g1._coerce(g2)
    return g1 * g2.shift(-s) - g2 * g1.shift(-s)


def solve_skew_linear(A, B, C, s, deg_bound):
    """Affine space of polynomials w with A*w[-s] + B*w = C, deg w <= deg_bound.

    Returns (particular, homogeneous_basis); particular is None when the
    system is inconsistent (the family is empty).
    """
    if s not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if deg_bound < 0:
        raise ValueError("degree bound must be nonnegative")
    field = A.field
    ncols = deg_bound + 1
    shifted_x = []  # (x + s*h)^k expansions
    xs = Poly.one(field)
    step = Poly(field, (field.h * s, field.one))
    images = []
    for k in range(ncols):
        mono = Poly(field, [field.zero] * k + [field.one])
        img = A * xs + B * mono  # A * (x+s h)^k + B * x^k
        images.append(img)
        xs = xs * step
    nrows = max([img.degree for img in images] + [C.degree]) + 1
    rows = [[images[j].coeff(i) for j in range(ncols)] for i in range(nrows)]
    rhs = [C.coeff(i) for i in range(nrows)]
    part, basis = linalg.solve_affine(rows, rhs, field.zero, field.one)
    if part is None:
        return None, []
    particular = Poly(field, part)
    hom = [Poly(field, b) for b in basis]
    return particular, hom


def indep_over_constants(gs):
    """Exact linear independence of rational functions over the constants."""
    gs = list(gs)
    if not gs:
        return True
    field = gs[0].field
    gs = [g if isinstance(g, RatFunc) else RatFunc(field, g) for g in gs]
    den = Poly.one(field)
    for g in gs:
        den = den.divexact(den.gcd(g.den)) * g.den
    cleared = [g.num * den.divexact(g.den) for g in gs]
    ncols = max(p.degree for p in cleared) + 1
    rows = [[p.coeff(j) for j in range(ncols)] for p in cleared]
    return linalg.rank(rows) == len(gs)


def reduce_mod_span(w, basis):
    """Reduce w modulo the span of `basis` by eliminating leading terms."""
    echelon = {}  # degree -> monic-lead representative
    for b in basis:
        while not b.is_zero() and b.degree in echelon:
            e = echelon[b.degree]
            b = b - e * Poly(b.field, (b.lead() / e.lead(),))
        if not b.is_zero():
            echelon[b.degree] = b
    for d in sorted(echelon, reverse=True):
        if not w.is_zero() and w.degree >= d:
            c = w.coeff(d) / echelon[d].lead()
            if not c.is_zero():
                w = w - echelon[d] * Poly(w.field, (c,))
    return w
