"""Exact coefficient arithmetic for the shift calculus.

Scalars live in a small field tower: rationals, an optional quadratic
extension Q(sqrt(d)), and an optional rational-function layer in at most
two named parameters.  Every value is kept in a canonical form (reduced
fractions, a + b*sqrt(d) with both parts reduced, parameter fractions with
gcd 1 and leading denominator coefficient 1), so equality is plain
structural comparison.

Internally a scalar is a fraction of "parameter polynomials".  A parameter
polynomial is a dict mapping exponent tuples (one entry per parameter) to
quadratic coefficients (a, b) meaning a + b*sqrt(d).  Fields without
parameters use the empty exponent tuple throughout, and their denominators
are always folded into the numerator.
"""

from __future__ import annotations

import ast
from math import isqrt

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as _Q

_Q0 = _Q(0)
_Q1 = _Q(1)

INFINITY = object()  # sentinel for projective specialization at infinity


class ScalarError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# quadratic coefficients: pairs (a, b) of exact rationals, value a + b*sqrt(d)

_QZERO = (_Q0, _Q0)
_QONE = (_Q1, _Q0)


def _qadd(u, v):
    return (u[0] + v[0], u[1] + v[1])


def _qsub(u, v):
    return (u[0] - v[0], u[1] - v[1])


def _qneg(u):
    return (-u[0], -u[1])


def _qmul(u, v, d):
    a, b = u
    c, e = v
    if b or e:
        return (a * c + d * b * e, a * e + b * c)
    return (a * c, _Q0)


def _qinv(u, d):
    a, b = u
    if b:
        nrm = a * a - d * b * b  # nonzero: d is not a rational square
        return (a / nrm, -b / nrm)
    if not a:
        raise ZeroDivisionError("scalar division by zero")
    return (_Q1 / a, _Q0)


# ---------------------------------------------------------------------------
# parameter polynomials: dict {exponent tuple: quad}, zero entries stripped


def _pp_const(q, nv):
    if q[0] or q[1]:
        return {(0,) * nv: q}
    return {}


def _pp_add(p, q):
    r = dict(p)
    for k, v in q.items():
        s = _qadd(r.get(k, _QZERO), v)
        if s[0] or s[1]:
            r[k] = s
        else:
            r.pop(k, None)
    return r


def _pp_neg(p):
    return {k: _qneg(v) for k, v in p.items()}


def _pp_mul(p, q, d):
    r = {}
    for k1, v1 in p.items():
        for k2, v2 in q.items():
            k = tuple(a + b for a, b in zip(k1, k2)) if k1 else k2
            s = _qmul(v1, v2, d)
            t = _qadd(r.get(k, _QZERO), s)
            if t[0] or t[1]:
                r[k] = t
            else:
                r.pop(k, None)
    return r


def _pp_scale(p, q, d):
    if not (q[0] or q[1]):
        return {}
    return {k: _qmul(v, q, d) for k, v in p.items()}


def _pp_lead(p):
    # graded lexicographic leading exponent
    return max(p, key=lambda k: (sum(k), k))


def _pp_is_const(p):
    return not p or (len(p) == 1 and not any(next(iter(p))))


def _pp_degree_in(p, idx):
    return max((k[idx] for k in p), default=0)


def _pp_part(p, idx, e):
    # coefficient of param_idx**e, with that exponent slot zeroed
    r = {}
    for k, v in p.items():
        if k[idx] == e:
            kk = list(k)
            kk[idx] = 0
            r[tuple(kk)] = v
    return r


def _pp_subst(p, idx, val, d):
    # substitute a constant quad for one parameter
    r = {}
    for k, v in p.items():
        c = v
        for _ in range(k[idx]):
            c = _qmul(c, val, d)
        kk = list(k)
        kk[idx] = 0
        kk = tuple(kk)
        t = _qadd(r.get(kk, _QZERO), c)
        if t[0] or t[1]:
            r[kk] = t
        else:
            r.pop(kk, None)
    return r


# dense univariate layer used by gcd/exact-division (coefficients are quads)


def _d1_trim(a):
    while a and not (a[-1][0] or a[-1][1]):
        a.pop()
    return a


def _d1_mul(a, b, d):
    if not a or not b:
        return []
    r = [_QZERO] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if not (u[0] or u[1]):
            continue
        for j, v in enumerate(b):
            r[i + j] = _qadd(r[i + j], _qmul(u, v, d))
    return _d1_trim(r)


def _d1_sub(a, b):
    n = max(len(a), len(b))
    r = []
    for i in range(n):
        u = a[i] if i < len(a) else _QZERO
        v = b[i] if i < len(b) else _QZERO
        r.append(_qsub(u, v))
    return _d1_trim(r)


def _d1_scale(a, q, d):
    return _d1_trim([_qmul(u, q, d) for u in a])


def _d1_divmod(a, b, d):
    if not b:
        raise ZeroDivisionError("parameter polynomial division by zero")
    a = list(a)
    inv = _qinv(b[-1], d)
    q = [_QZERO] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = _qmul(a[-1], inv, d)
        k = len(a) - len(b)
        q[k] = c
        for i in range(len(b)):
            a[k + i] = _qsub(a[k + i], _qmul(c, b[i], d))
        _d1_trim(a)
        if len(a) >= len(b) and not (a[-1][0] or a[-1][1]):
            _d1_trim(a)
    return q, a


def _d1_gcd(a, b, d):
    a, b = list(a), list(b)
    while b:
        a, b = b, _d1_divmod(a, b, d)[1]
    if a:
        a = _d1_scale(a, _qinv(a[-1], d), d)
    return a


def _to_dense(p, nv):
    # nv == 1 -> list of quads; nv == 2 -> list (over second exp) of lists
    if nv == 1:
        n = _pp_degree_in(p, 0) + 1 if p else 0
        r = [_QZERO] * n
        for k, v in p.items():
            r[k[0]] = v
        return _d1_trim(r)
    n2 = _pp_degree_in(p, 1) + 1 if p else 0
    r = [[] for _ in range(n2)]
    for k, v in p.items():
        row = r[k[1]]
        while len(row) <= k[0]:
            row.append(_QZERO)
        row[k[0]] = v
    return [_d1_trim(row) for row in r]


def _from_dense(a, nv):
    p = {}
    if nv == 1:
        for i, v in enumerate(a):
            if v[0] or v[1]:
                p[(i,)] = v
        return p
    for j, row in enumerate(a):
        for i, v in enumerate(row):
            if v[0] or v[1]:
                p[(i, j)] = v
    return p


def _d2_trim(a):
    while a and not a[-1]:
        a.pop()
    return a


def _d2_content(a, d):
    c = []
    for row in a:
        c = _d1_gcd(c, row, d)
        if len(c) == 1:
            break
    return c


def _d2_primitive(a, d):
    c = _d2_content(a, d)
    if not c or len(c) == 1:
        return [list(r) for r in a], c
    return [_d1_divmod(r, c, d)[0] for r in a], c


def _d2_prem(a, b, d):
    # pseudo remainder of a by b in (F[u])[v]
    a = [list(r) for r in a]
    lb = b[-1]
    while len(a) >= len(b) and a:
        la = a[-1]
        k = len(a) - len(b)
        na = [_d1_mul(r, lb, d) for r in a]
        for i in range(len(b)):
            na[k + i] = _d1_sub(na[k + i], _d1_mul(la, b[i], d))
        a = _d2_trim(na)
    return a


def _pp_gcd(p, q, nv, d):
    if not p:
        return _pp_normalize_lead(dict(q), d)
    if not q:
        return _pp_normalize_lead(dict(p), d)
    if nv == 0 or _pp_is_const(p) or _pp_is_const(q):
        return {(0,) * nv: _QONE}
    if nv == 1:
        g = _d1_gcd(_to_dense(p, 1), _to_dense(q, 1), d)
        return _from_dense(g, 1)
    a, ca = _d2_primitive(_to_dense(p, 2), d)
    b, cb = _d2_primitive(_to_dense(q, 2), d)
    cont = _d1_gcd(ca, cb, d)
    while b:
        r = _d2_trim(_d2_prem(a, b, d))
        if r:
            r, _ = _d2_primitive(r, d)
        a, b = b, r
    if len(a) == 1:
        g = {k: v for k, v in _from_dense([cont], 2).items()}
    else:
        g = _from_dense([_d1_mul(row, cont, d) for row in a], 2)
    return _pp_normalize_lead(g, d)


def _pp_divexact(p, g, nv, d):
    if _pp_is_const(g):
        inv = _qinv(g.get((0,) * nv, _QZERO), d)
        return _pp_scale(p, inv, d)
    if nv == 1:
        q, r = _d1_divmod(_to_dense(p, 1), _to_dense(g, 1), d)
        if r:
            raise ScalarError("inexact parameter division")
        return _from_dense(q, 1)
    # division in (F[u])[v] with exact coefficient divisions
    a = _to_dense(p, 2)
    b = _to_dense(g, 2)
    q = [[] for _ in range(max(len(a) - len(b) + 1, 0))]
    while a and len(a) >= len(b):
        qc, rc = _d1_divmod(a[-1], b[-1], d)
        if rc:
            raise ScalarError("inexact parameter division")
        k = len(a) - len(b)
        q[k] = qc
        na = [list(r) for r in a]
        for i in range(len(b)):
            na[k + i] = _d1_sub(na[k + i], _d1_mul(qc, b[i], d))
        a = _d2_trim(na)
    if a:
        raise ScalarError("inexact parameter division")
    return _from_dense(q, 2)


def _pp_normalize_lead(p, d):
    if not p:
        return p
    lead = p[_pp_lead(p)]
    if lead == _QONE:
        return p
    return _pp_scale(p, _qinv(lead, d), d)


def _squarefree(n):
    n = abs(n)
    if n in (0, 1):
        return False
    i = 2
    while i * i <= n:
        if n % (i * i) == 0:
            return False
        i += 1
    return True


class FieldSpec:
    """Configured exact field: Q, optionally extended by sqrt(d), optionally
    with up to two transcendental parameters, plus the shift step h.

    Elements of the field are `Scalar` objects carrying a reference to their
    FieldSpec; arithmetic between different field specs is rejected.
    """

    __slots__ = ("d", "params", "_nv", "h", "zero", "one", "_one_pp", "_sig")

    def __init__(self, d=None, params=(), h=1):
        if d is not None:
            if not isinstance(d, int) or not _squarefree(d) or d == 1:
                raise ValueError("radical must be a squarefree integer != 0, 1")
        params = tuple(params)
        if len(params) > 2:
            raise ValueError("at most two parameters supported")
        if len(set(params)) != len(params):
            raise ValueError("parameter names must be distinct")
        for name in params:
            if not name.isidentifier() or name in ("x", "r"):
                raise ValueError(f"bad parameter name {name!r}")
        self.d = d
        self.params = params
        self._nv = len(params)
        self._one_pp = {(0,) * self._nv: _QONE}
        self.zero = Scalar(self, {}, self._one_pp)
        self.one = Scalar(self, dict(self._one_pp), self._one_pp)
        self.h = self.scalar(h)
        if self.h.is_zero():
            raise ValueError("shift step h must be nonzero")
        self._sig = (self.d, self.params, _freeze(self.h._n), _freeze(self.h._d))

    @property
    def signature(self):
        return self._sig

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self._sig == other._sig

    def __hash__(self):
        return hash(self._sig)

    def __repr__(self):
        bits = []
        if self.d is not None:
            bits.append(f"d={self.d}")
        if self.params:
            bits.append(f"params={self.params}")
        if self.h != self.one:
            bits.append(f"h={self.h}")
        return f"FieldSpec({', '.join(bits)})"

    # -- element constructors ------------------------------------------------

    def _make(self, n, d):
        """Build a scalar from raw fraction parts, normalizing."""
        if not n:
            return self.zero
        if _pp_is_const(d):
            q = d.get((0,) * self._nv, _QZERO)
            if not (q[0] or q[1]):
                raise ZeroDivisionError("scalar division by zero")
            if q != _QONE:
                n = _pp_scale(n, _qinv(q, self.d), self.d)
            return Scalar(self, n, self._one_pp)
        g = _pp_gcd(n, d, self._nv, self.d)
        if not _pp_is_const(g):
            n = _pp_divexact(n, g, self._nv, self.d)
            d = _pp_divexact(d, g, self._nv, self.d)
        lead = d[_pp_lead(d)]
        if lead != _QONE:
            inv = _qinv(lead, self.d)
            n = _pp_scale(n, inv, self.d)
            d = _pp_scale(d, inv, self.d)
        if _pp_is_const(d):
            return self._make(n, d)
        return Scalar(self, n, d)

    def scalar(self, v):
        """Coerce an int, rational, 2-tuple, text expression or Scalar."""
        if isinstance(v, Scalar):
            if v.field is not self and v.field != self:
                raise ScalarError("scalar from a different field")
            return v
        if isinstance(v, int):
            return self._make(_pp_const((_Q(v), _Q0), self._nv), dict(self._one_pp))
        if isinstance(v, tuple) and len(v) == 2:
            return self.scalar(v[0]) / self.scalar(v[1])
        if isinstance(v, str):
            return self.parse(v)
        try:
            q = _Q(v)
        except Exception:
            raise TypeError(f"cannot coerce {v!r} to a scalar") from None
        return self._make(_pp_const((q, _Q0), self._nv), dict(self._one_pp))

    def radical(self):
        if self.d is None:
            raise ScalarError("field has no quadratic extension")
        return self._make(_pp_const((_Q0, _Q1), self._nv), dict(self._one_pp))

    def param(self, name):
        idx = self.params.index(name)
        key = tuple(1 if i == idx else 0 for i in range(self._nv))
        return Scalar(self, {key: _QONE}, self._one_pp)

    # -- text syntax -----------------------------------------------------------

    def parse(self, text):
        """Parse scalar text: rationals "3/2", the radical "1/2*r",
        parameters by name, and +,-,*,/,** combinations thereof."""
        try:
            tree = ast.parse(str(text).replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise ScalarError(f"bad scalar text {text!r}: {exc}") from None
        return self._eval_node(tree.body, text)

    def _eval_node(self, node, text):
        if isinstance(node, ast.Constant):
            if isinstance(node.value, int):
                return self.scalar(node.value)
            raise ScalarError(f"non-exact literal in {text!r}")
        if isinstance(node, ast.Name):
            if node.id == "r":
                return self.radical()
            if node.id in self.params:
                return self.param(node.id)
            raise ScalarError(f"unknown symbol {node.id!r} in {text!r}")
        if isinstance(node, ast.UnaryOp):
            v = self._eval_node(node.operand, text)
            if isinstance(node.op, ast.USub):
                return -v
            if isinstance(node.op, ast.UAdd):
                return v
        if isinstance(node, ast.BinOp):
            a = self._eval_node(node.left, text)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ScalarError(f"exponent must be an integer literal in {text!r}")
                return a ** node.right.value
            b = self._eval_node(node.right, text)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                return a / b
        raise ScalarError(f"unsupported construct in scalar text {text!r}")


def _freeze(p):
    return tuple(sorted((k, v[0], v[1]) for k, v in p.items()))


class Scalar:
    """Immutable element of a FieldSpec, in canonical form."""

    __slots__ = ("field", "_n", "_d", "_hash")

    def __init__(self, field, n, d):
        self.field = field
        self._n = n
        self._d = d
        self._hash = None

    # -- predicates ------------------------------------------------------------

    def is_zero(self):
        return not self._n

    def __bool__(self):
        return bool(self._n)

    def is_one(self):
        return self._d == self.field._one_pp and self._n == self.field._one_pp

    def is_constant(self):
        """No parameter dependence (may still involve the radical)."""
        return _pp_is_const(self._n) and _pp_is_const(self._d)

    def is_rational(self):
        if not self.is_constant():
            return False
        q = self._const_quad()
        return not q[1]

    def is_integer(self):
        if not self.is_rational():
            return False
        q = self._const_quad()[0]
        return q.denominator == 1

    def involves(self, name):
        idx = self.field.params.index(name)
        return any(k[idx] for k in self._n) or any(k[idx] for k in self._d)

    def _const_quad(self):
        if not self.is_constant():
            raise ScalarError("scalar is not constant")
        nq = self._n.get((0,) * self.field._nv, _QZERO)
        return nq

    def as_fraction(self):
        if not self.is_rational():
            raise ScalarError("scalar is not rational")
        return self._const_quad()[0]

    def as_int(self):
        f = self.as_fraction()
        if f.denominator != 1:
            raise ScalarError("scalar is not an integer")
        return int(f.numerator)

    # -- arithmetic --------------------------------------------------------------

    def _check(self, other):
        if isinstance(other, Scalar):
            if other.field is self.field or other.field == self.field:
                return other
            raise ScalarError("mixing scalars from different fields")
        return self.field.scalar(other)

    def __add__(self, other):
        other = self._check(other)
        f = self.field
        if self._d is f._one_pp and other._d is f._one_pp:
            return f._make(_pp_add(self._n, other._n), dict(f._one_pp))
        n = _pp_add(_pp_mul(self._n, other._d, f.d), _pp_mul(other._n, self._d, f.d))
        return f._make(n, _pp_mul(self._d, other._d, f.d))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, _pp_neg(self._n), self._d)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) + (-self)

    def __mul__(self, other):
        other = self._check(other)
        f = self.field
        n = _pp_mul(self._n, other._n, f.d)
        if self._d is f._one_pp and other._d is f._one_pp:
            return f._make(n, dict(f._one_pp))
        return f._make(n, _pp_mul(self._d, other._d, f.d))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("scalar division by zero")
        f = self.field
        return f._make(_pp_mul(self._n, other._d, f.d), _pp_mul(self._d, other._n, f.d))

    def __rtruediv__(self, other):
        return self._check(other) / self

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("scalar powers take integer exponents")
        if k < 0:
            return (self.field.one / self) ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Scalar):
            if other.field is not self.field and other.field != self.field:
                return False
            return self._n == other._n and self._d == other._d
        if isinstance(other, (int,)):
            return self == self.field.scalar(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((_freeze(self._n), _freeze(self._d)))
        return self._hash

    def key(self):
        """Hashable canonical key (field-independent content)."""
        return (_freeze(self._n), _freeze(self._d))

    # -- parameter specialization ---------------------------------------------

    def subst_param(self, name, value):
        """Substitute a constant scalar for a parameter."""
        f = self.field
        idx = f.params.index(name)
        value = f.scalar(value)
        if not value.is_constant():
            raise ScalarError("substitution value must be constant")
        q = value._const_quad()
        n = _pp_subst(self._n, idx, q, f.d)
        d = _pp_subst(self._d, idx, q, f.d)
        return f._make(n, d)

    def param_degree(self, name):
        if self._d != self.field._one_pp:
            raise ScalarError("clear denominators before degree extraction")
        return _pp_degree_in(self._n, self.field.params.index(name)) if self._n else 0

    def param_part(self, name, e):
        if self._d != self.field._one_pp:
            raise ScalarError("clear denominators before part extraction")
        f = self.field
        return f._make(_pp_part(self._n, f.params.index(name), e), dict(f._one_pp))

    def denominator_scalar(self):
        """The denominator as a scalar (denominator 1)."""
        f = self.field
        return Scalar(f, dict(self._d), f._one_pp)

    # -- square roots (constant scalars only) -----------------------------------

    def sqrt(self):
        """Exact square root within the field, or None."""
        if not self.is_constant():
            return None
        f = self.field
        a, b = self._const_quad()
        if not b:
            root = _rat_sqrt(a)
            if root is not None:
                return f.scalar(root)
            if f.d is not None and a != 0:
                q = a / f.d
                root = _rat_sqrt(q)
                if root is not None:
                    return f.scalar(root) * f.radical()
            return None
        if f.d is None:
            return None
        nrm = _rat_sqrt(a * a - f.d * b * b)
        if nrm is None:
            return None
        for sg in (nrm, -nrm):
            u2 = (a + sg) / 2
            u = _rat_sqrt(u2)
            if u is not None and u != 0:
                v = b / (2 * u)
                cand = f.scalar(u) + f.scalar(v) * f.radical()
                if cand * cand == self:
                    return cand
        return None

    # -- rendering ---------------------------------------------------------------

    def __str__(self):
        if self.is_zero():
            return "0"
        num = _pp_text(self._n, self.field)
        if self._d == self.field._one_pp:
            return num
        den = _pp_text(self._d, self.field)
        return f"({num})/({den})"

    def __repr__(self):
        return f"Scalar({self})"


def _rat_sqrt(q):
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = isqrt(int(num)), isqrt(int(den))
    if rn * rn == num and rd * rd == den:
        return _Q(rn, rd)
    return None


def _quad_text(q, need_wrap):
    a, b = q
    if not b:
        return (str(a), a < 0)
    if not a:
        if b == 1:
            return ("r", False)
        if b == -1:
            return ("-r", True)
        return (f"{b}*r", b < 0)
    bs = "r" if b == 1 else ("-r" if b == -1 else f"{b}*r")
    s = f"{a} + {bs}" if b > 0 else f"{a} - {bs[1:]}"
    if need_wrap:
        return (f"({s})", False)
    return (s, False)


def _pp_text(p, field):
    terms = []
    for k in sorted(p, key=lambda k: (sum(k), k), reverse=True):
        mono = "*".join(
            name if e == 1 else f"{name}**{e}"
            for name, e in zip(field.params, k)
            if e
        )
        coef, neg = _quad_text(p[k], bool(mono))
        if mono:
            if coef == "1":
                term = mono
            elif coef == "-1":
                term = f"-{mono}"
            else:
                term = f"{coef}*{mono}"
        else:
            term = coef
        terms.append(term)
    out = terms[0]
    for term in terms[1:]:
        if term.startswith("-"):
            out += f" - {term[1:]}"
        else:
            out += f" + {term}"
    return out
