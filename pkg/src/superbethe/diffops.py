"""The skew ring of difference operators and its fraction calculus.

Operators are finite series sum_j a_j * tau^j with rational-function
coefficients, where tau f = f[1] tau (f[1](x) = f(x - h)).  The ring is
Euclidean on both sides; right division drives gcds, left division drives
common right multiples, and together they decide equality of operator
fractions D0 * D1^(-1).

First-order factors are kept in witnessed form (1 - q * ln'(g) * tau)^s:
the witness g spans the kernel (after twisting by the multiplier q), and
adjacent factors of opposite sign can be swapped in closed form, which is
what moves every inverse factor to the right when a factored operator is
converted to a fraction.
"""

from __future__ import annotations

from .polys import Poly, RatFunc, dlog
from .scalars import ScalarError


class DegenerateSwapError(ArithmeticError):
    """Raised when an odd-even swap hits equal adjacent factors."""

    def __init__(self, position=None):
        self.position = position
        where = "" if position is None else f" at position {position}"
        super().__init__(f"degenerate factor swap{where}: equal adjacent factors")


class DiffOp:
    """Difference operator sum a_j tau^j, coefficients ascending in j."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field, coeffs):
        cs = []
        for c in coeffs:
            if isinstance(c, RatFunc):
                cs.append(c)
            elif isinstance(c, Poly):
                cs.append(RatFunc(field, c))
            else:
                cs.append(RatFunc(field, Poly(field, (field.scalar(c),))))
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)
        self._hash = None

    @staticmethod
    def zero(field):
        return DiffOp(field, ())

    @staticmethod
    def one(field):
        return DiffOp(field, (RatFunc.one(field),))

    @staticmethod
    def tau(field, k=1):
        return DiffOp(field, [RatFunc.zero(field)] * k + [RatFunc.one(field)])

    @property
    def order(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def is_one(self):
        return len(self.coeffs) == 1 and self.coeffs[0].is_one()

    def constant_term(self):
        return self.coeffs[0] if self.coeffs else RatFunc.zero(self.field)

    def lead(self):
        if not self.coeffs:
            raise ScalarError("zero operator has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1].is_one()

    def coeff(self, j):
        if 0 <= j <= self.order:
            return self.coeffs[j]
        return RatFunc.zero(self.field)

    def _coerce(self, other):
        if isinstance(other, DiffOp):
            return other
        return DiffOp(self.field, (other,))

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        cs = list(a)
        for i, c in enumerate(b):
            cs[i] = cs[i] + c
        return DiffOp(self.field, cs)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return DiffOp.zero(self.field)
        zero = RatFunc.zero(self.field)
        cs = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero():
                    continue
                cs[i + j] = cs[i + j] + a * b.shift(i)
        return DiffOp(self.field, cs)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, DiffOp):
            return self.field == other.field and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(hash(c) for c in self.coeffs))
        return self._hash

    def apply(self, u):
        """Apply to a rational function: sum a_j * u[j]."""
        if isinstance(u, Poly):
            u = RatFunc(self.field, u)
        acc = RatFunc.zero(self.field)
        for j, a in enumerate(self.coeffs):
            if not a.is_zero():
                acc = acc + a * u.shift(j)
        return acc

    def apply_twisted(self, q, u):
        """Apply to the twisted function e^{kappa x} u with e^{kappa h} = q.

        Returns the rational part of the image; the exponential prefactor
        is common to every term.
        """
        if isinstance(u, Poly):
            u = RatFunc(self.field, u)
        q = self.field.scalar(q)
        acc = RatFunc.zero(self.field)
        qp = self.field.one
        for j, a in enumerate(self.coeffs):
            if not a.is_zero():
                acc = acc + a * u.shift(j) * (self.field.one / qp)
            qp = qp * q
        return acc

    def right_divmod(self, other):
        """Q, R with self = Q * other + R and ord R < ord other."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero operator")
        rem = list(self.coeffs)
        n = other.order
        lead = other.lead()
        q = [RatFunc.zero(self.field)] * max(len(rem) - n, 0)
        while len(rem) - 1 >= n and rem:
            k = len(rem) - 1 - n
            c = rem[-1] / lead.shift(k)
            q[k] = c
            for i, b in enumerate(other.coeffs):
                rem[k + i] = rem[k + i] - c * b.shift(k)
            while rem and rem[-1].is_zero():
                rem.pop()
        return DiffOp(self.field, q), DiffOp(self.field, rem)

    def left_divmod(self, other):
        """Q, R with self = other * Q + R and ord R < ord other."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero operator")
        rem = list(self.coeffs)
        n = other.order
        lead = other.lead()
        q = [RatFunc.zero(self.field)] * max(len(rem) - n, 0)
        while len(rem) - 1 >= n and rem:
            k = len(rem) - 1 - n
            c = (rem[-1] / lead).shift(-n)
            q[k] = c
            for i, b in enumerate(other.coeffs):
                rem[k + i] = rem[k + i] - b * c.shift(i)
            while rem and rem[-1].is_zero():
                rem.pop()
        return DiffOp(self.field, q), DiffOp(self.field, rem)

    def right_div_exact(self, other):
        q, r = self.right_divmod(other)
        if not r.is_zero():
            raise ScalarError("inexact right operator division")
        return q

    def scale_right(self, alpha):
        """self * alpha for a rational function alpha."""
        return self * DiffOp(self.field, (alpha,))

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for j, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            cs = str(c)
            if j == 0:
                parts.append(cs)
            else:
                t = "tau" if j == 1 else f"tau**{j}"
                parts.append(t if c.is_one() else f"({cs})*{t}")
        return " + ".join(parts)

    def __repr__(self):
        return f"DiffOp({self})"


def right_gcd(a, b):
    """Greatest common right divisor, monic."""
    while not b.is_zero():
        a, b = b, a.right_divmod(b)[1]
    if a.is_zero():
        return a
    return a.scale_right(RatFunc.one(a.field) / a.lead().shift(-a.order))


def common_right_multiple(b, d):
    """U, V with b * U = d * V != 0, from the left Euclidean scheme."""
    if b.is_zero() or d.is_zero():
        raise ZeroDivisionError("common multiple of a zero operator")
    field = b.field
    r0, r1 = b, d
    u0, v0 = DiffOp.one(field), DiffOp.zero(field)
    u1, v1 = DiffOp.zero(field), DiffOp.one(field)
    while not r1.is_zero():
        q, r2 = r0.left_divmod(r1)
        r0, r1 = r1, r2
        u0, u1 = u1, u0 - u1 * q
        v0, v1 = v1, v0 - v1 * q
    # b*u1 + d*v1 == 0 and u1, v1 nonzero
    return u1, -v1


class FactorWitness:
    """First-order factor (1 - q * ln'(g) * tau)^sign with witness g.

    The witness is stored with monic numerator; it spans the kernel of the
    untwisted factor, and e^{kappa x} g (with e^{kappa h} = q) spans the
    kernel of the twisted one.
    """

    __slots__ = ("g", "sign", "q")

    def __init__(self, g, sign, q=None):
        if isinstance(g, Poly):
            g = RatFunc(g.field, g)
        if g.is_zero():
            raise ValueError("factor witness must be nonzero")
        if sign not in (1, -1):
            raise ValueError("factor sign must be +1 or -1")
        self.g = g.monic_normalized()
        self.sign = sign
        self.q = g.field.one if q is None else g.field.scalar(q)
        if self.q.is_zero():
            raise ValueError("twist multiplier must be nonzero")

    @property
    def field(self):
        return self.g.field

    def coefficient(self):
        """The tau-coefficient q * g / g[1]."""
        return dlog(self.g) * RatFunc(self.field, Poly(self.field, (self.q,)))

    def operator(self):
        """The first-order operator 1 - q ln'(g) tau."""
        return DiffOp(self.field, (RatFunc.one(self.field), -self.coefficient()))

    def kernel(self):
        """The witness; the factor annihilates it (twisted by q)."""
        img = self.operator().apply_twisted(self.q, self.g)
        if not img.is_zero():
            raise ScalarError("factor does not annihilate its witness")
        return self.g

    def __eq__(self, other):
        if isinstance(other, FactorWitness):
            return self.g == other.g and self.sign == other.sign and self.q == other.q
        return NotImplemented

    def __hash__(self):
        return hash((self.g, self.sign, self.q))

    def __repr__(self):
        tw = "" if self.q.is_one() else f", q={self.q}"
        return f"FactorWitness({self.g}, {self.sign:+d}{tw})"


def odd_even_swap(a, b, orientation="+"):
    """Swap a mixed adjacent factor pair of a (1|1)-rational operator.

    orientation '+': given (1 - a tau)(1 - b tau)^(-1), return (c, d) with
    the same operator equal to (1 - c tau)^(-1)(1 - d tau).
    orientation '-': the inverse transformation from (c, d) back to (a, b).
    Equal inputs are rejected (degenerate swap).
    """
    if a == b:
        raise DegenerateSwapError()
    if orientation in ("+", 1, +1):
        m = dlog(a - b)
        return (b.shift(1) * m, a.shift(1) * m)
    if orientation in ("-", -1):
        c, d = a, b
        p = c - d
        ratio = p / p.shift(-1)
        return (d.shift(-1) * ratio, c.shift(-1) * ratio)
    raise ValueError("orientation must be '+' or '-'")


def _swap_witnessed(neg, pos, position=None):
    """Rewrite factor pair neg^(-1) * pos^(+1) as pos'^(+1) * neg'^(-1)."""
    p = neg.coefficient() - pos.coefficient()
    if p.is_zero():
        raise DegenerateSwapError(position)
    new_pos = FactorWitness((pos.g / p).shift(-1), +1, pos.q)
    new_neg = FactorWitness((neg.g / p).shift(-1), -1, neg.q)
    return new_pos, new_neg


class FractionalForm:
    """A fraction D0 * D1^(-1) of difference operators."""

    __slots__ = ("d0", "d1")

    def __init__(self, d0, d1):
        self.d0 = d0
        self.d1 = d1

    def __eq__(self, other):
        if isinstance(other, FractionalForm):
            return self.d0 == other.d0 and self.d1 == other.d1
        return NotImplemented

    def __repr__(self):
        return f"FractionalForm(({self.d0}) * ({self.d1})^-1)"


class FactoredRatOp:
    """Ordered product of witnessed first-order factors and their inverses."""

    __slots__ = ("field", "factors", "_fraction")

    def __init__(self, field, factors):
        self.field = field
        self.factors = tuple(factors)
        self._fraction = None

    def parity(self):
        return tuple(f.sign for f in self.factors)

    def __eq__(self, other):
        if isinstance(other, FactoredRatOp):
            return self.factors == other.factors
        return NotImplemented

    def __repr__(self):
        return f"FactoredRatOp({list(self.factors)})"

    def to_minimal_fraction(self):
        """Commute every inverse factor to the right, multiply out, and
        reduce by the common right divisor; D1 comes out monic.
        """
        if self._fraction is not None:
            return self._fraction
        factors = list(self.factors)
        moved = True
        while moved:
            moved = False
            for i in range(len(factors) - 1):
                if factors[i].sign == -1 and factors[i + 1].sign == +1:
                    pos, neg = _swap_witnessed(factors[i], factors[i + 1], i)
                    factors[i], factors[i + 1] = pos, neg
                    moved = True
        d0 = DiffOp.one(self.field)
        for f in factors:
            if f.sign == +1:
                d0 = d0 * f.operator()
        d1 = DiffOp.one(self.field)
        for f in reversed(factors):
            if f.sign == -1:
                d1 = d1 * f.operator()
        g = right_gcd(d0, d1)
        if g.order > 0:
            d0 = d0.right_div_exact(g)
            d1 = d1.right_div_exact(g)
        if not d1.is_monic():
            alpha = (RatFunc.one(self.field) / d1.lead()).shift(-d1.order)
            d0 = d0.scale_right(alpha)
            d1 = d1.scale_right(alpha)
        self._fraction = FractionalForm(d0, d1)
        return self._fraction

    def rat_equal(self, other):
        """Equality in the division ring of rational difference operators."""
        fa = self.to_minimal_fraction()
        fb = other.to_minimal_fraction()
        return fractions_equal(fa, fb)


def fractions_equal(fa, fb):
    """Whether A*B^(-1) = C*D^(-1), via a common right multiple of B, D."""
    a, b = fa.d0, fa.d1
    c, d = fb.d0, fb.d1
    if b.is_zero() or d.is_zero():
        raise ZeroDivisionError("fraction with zero denominator operator")
    u, v = common_right_multiple(b, d)
    return a * u == c * v


def witness_kernel(factor):
    """Kernel witness of a factor, checked by annihilation."""
    return factor.kernel()
