"""Parity sequences, weight data, the T/phi/psi polynomial system, Bethe
equation residuals, genericity tests and transfer-matrix eigenvalues."""

from __future__ import annotations

from .polys import Poly, RatFunc
from .scalars import ScalarError


class ModelError(ValueError):
    pass


class ParitySeq:
    """A +-1 sequence with m plus signs and n minus signs."""

    __slots__ = ("signs", "m", "n")

    def __init__(self, signs):
        signs = tuple(signs)
        if not signs or any(s not in (1, -1) for s in signs):
            raise ModelError("parity sequence entries must be +-1")
        self.signs = signs
        self.m = sum(1 for s in signs if s == 1)
        self.n = len(signs) - self.m

    @staticmethod
    def standard(m, n):
        return ParitySeq((1,) * m + (-1,) * n)

    def is_standard(self):
        return self.signs == (1,) * self.m + (-1,) * self.n

    def __len__(self):
        return len(self.signs)

    def __getitem__(self, i):
        """1-based sign access s_i."""
        return self.signs[i - 1]

    def __iter__(self):
        return iter(self.signs)

    def __eq__(self, other):
        return isinstance(other, ParitySeq) and self.signs == other.signs

    def __hash__(self):
        return hash(self.signs)

    def __repr__(self):
        return "(" + ",".join("+" if s == 1 else "-" for s in self.signs) + ")"

    def swapped(self, i):
        """The sequence with entries i, i+1 exchanged (1-based)."""
        s = list(self.signs)
        s[i - 1], s[i] = s[i], s[i - 1]
        return ParitySeq(s)

    def sigma(self):
        """The permutation attached to the sequence, as a 1-based tuple."""
        out = []
        for i in range(1, len(self.signs) + 1):
            if self[i] == 1:
                out.append(sum(1 for j in range(1, i + 1) if self[j] == 1))
            else:
                out.append(self.m + sum(1 for j in range(1, i + 1) if self[j] == -1))
        return tuple(out)

    def s_plus(self):
        """s_i^+ = number of plus signs strictly after position i."""
        sig = self.signs
        return tuple(
            sum(1 for j in range(i + 1, len(sig)) if sig[j] == 1)
            for i in range(len(sig))
        )

    def s_minus(self):
        """s_i^- = number of minus signs strictly before position i."""
        sig = self.signs
        return tuple(
            sum(1 for j in range(i) if sig[j] == -1) for i in range(len(sig))
        )


def parity_data(s):
    """(sigma, s^+, s^-) for a parity sequence."""
    return s.sigma(), s.s_plus(), s.s_minus()


def all_parity_sequences(m, n):
    """Every parity sequence with m plus and n minus signs."""
    out = []

    def rec(prefix, mm, nn):
        if mm == 0 and nn == 0:
            out.append(ParitySeq(prefix))
            return
        if mm:
            rec(prefix + [1], mm - 1, nn)
        if nn:
            rec(prefix + [-1], mm, nn - 1)

    rec([], m, n)
    return out


class WeightData:
    """Weights, evaluation points and the optional diagonal twist.

    Weights are polynomial gl(m|n) weights in standard coordinates: weakly
    decreasing nonnegative integer tuples of length m+n obeying the hook
    condition lambda_{m+j} > 0 => j <= lambda_m.  The evaluation points must
    be h-generic and twist multipliers pairwise distinct.
    """

    __slots__ = ("field", "m", "n", "weights", "z", "twist", "_tcache")

    def __init__(self, field, m, n, weights, z, twist=None):
        self.field = field
        self.m = m
        self.n = n
        self.weights = tuple(tuple(int(w) for w in lam) for lam in weights)
        self.z = tuple(field.scalar(v) for v in z)
        if len(self.z) != len(self.weights):
            raise ModelError("need one evaluation point per weight")
        for lam in self.weights:
            self._check_weight(lam)
        if twist is not None:
            twist = tuple(field.scalar(q) for q in twist)
            if len(twist) != m + n:
                raise ModelError("twist needs one multiplier per row")
            if any(q.is_zero() for q in twist):
                raise ModelError("twist multipliers must be nonzero")
            if len({q.key() for q in twist}) != len(twist):
                raise ModelError("twist multipliers must be pairwise distinct")
        self.twist = twist
        self._tcache = {}

    @property
    def p(self):
        return len(self.weights)

    def _check_weight(self, lam):
        if len(lam) != self.m + self.n:
            raise ModelError(f"weight {lam} has wrong length")
        if any(a < 0 for a in lam):
            raise ModelError(f"weight {lam} has negative entries")
        if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
            raise ModelError(f"weight {lam} is not weakly decreasing")
        lam_m = lam[self.m - 1] if self.m else 0
        for j in range(1, self.n + 1):
            if lam[self.m + j - 1] > 0 and j > lam_m:
                raise ModelError(f"weight {lam} violates the hook condition")

    def is_h_generic(self):
        """No two evaluation points differ by an integer multiple of h.

        Testable rather than enforced: residuals and the two-dimensional
        appendix model are meaningful without it, the population machinery
        requires it.
        """
        for i in range(len(self.z)):
            for j in range(i + 1, len(self.z)):
                if ((self.z[i] - self.z[j]) / self.field.h).is_integer():
                    return False
        return True

    def typical(self):
        """Some weight has lambda_m >= n."""
        if self.m == 0:
            return False
        return any(lam[self.m - 1] >= self.n for lam in self.weights)

    def tsystem(self, s):
        key = s.signs
        if key not in self._tcache:
            self._tcache[key] = compute_T(s, self)
        return self._tcache[key]


def weight_transform(lam, s):
    """Weight coordinates with respect to a parity sequence."""
    m = s.m
    sig = s.sigma()
    sp = s.s_plus()
    sm = s.s_minus()
    out = []
    for i in range(1, len(s) + 1):
        base = lam[sig[i - 1] - 1]
        if s[i] == 1:
            out.append(base - min(sm[i - 1], base))
        else:
            extra = sum(
                1 for j in range(1, sp[i - 1] + 1) if lam[m - j] > sm[i - 1]
            )
            out.append(base + extra)
    return tuple(out)


class TSystem:
    """The polynomials T_i^s with the phi/psi pair at each odd position."""

    __slots__ = ("parity", "T", "phi", "psi", "weights_s")

    def __init__(self, parity, T, phi, psi, weights_s):
        self.parity = parity
        self.T = T
        self.phi = phi
        self.psi = psi
        self.weights_s = weights_s

    def ratio(self, i):
        """The polynomial T_i^s (T_{i+1}^s)^(-s_i s_{i+1}) (1-based i)."""
        s = self.parity
        if s[i] == s[i + 1]:
            return self.T[i - 1].divexact(self.T[i])
        return self.T[i - 1] * self.T[i]


def compute_T(s, W):
    """T_i^s(x) = prod_k prod_{j<=lambda_i^(k,s)} (x - z_k + s_i j h)."""
    field = W.field
    h = field.h
    weights_s = tuple(weight_transform(lam, s) for lam in W.weights)
    T = []
    for i in range(1, len(s) + 1):
        roots = []
        for k, lam in enumerate(weights_s):
            for j in range(1, lam[i - 1] + 1):
                roots.append(W.z[k] - field.scalar(s[i] * j) * h)
        T.append(Poly.from_roots(field, roots))
    phi, psi = {}, {}
    for i in range(1, len(s)):
        if s[i] != s[i + 1]:
            proots, qroots = [], []
            for k, lam in enumerate(weights_s):
                if lam[i - 1] + lam[i] != 0:
                    proots.append(W.z[k] - field.scalar(s[i] * lam[i - 1]) * h)
                    qroots.append(W.z[k] - field.scalar(s[i + 1] * lam[i]) * h)
            phi[i] = Poly.from_roots(field, proots)
            psi[i] = Poly.from_roots(field, qroots)
    tsys = TSystem(s, tuple(T), phi, psi, weights_s)
    for i in range(1, len(s)):
        tsys.ratio(i)  # raises if the required division is inexact
    return tsys


class BetheNode:
    """A candidate solution: parity sequence plus a projective tuple of
    monic polynomials y_1..y_{m+n-1} (and its twist ordering, if any)."""

    __slots__ = ("parity", "ys", "twist", "_key")

    def __init__(self, parity, ys, twist=None):
        ys = tuple(ys)
        if any(y.is_zero() for y in ys):
            raise ModelError("zero polynomial cannot represent a solution")
        if len(ys) != len(parity) - 1:
            raise ModelError("need one polynomial per inner position")
        self.parity = parity
        self.ys = tuple(y.monic() for y in ys)
        self.twist = tuple(twist) if twist is not None else None
        self._key = None

    @property
    def field(self):
        return self.ys[0].field if self.ys else None

    def y(self, i):
        """y_i with the boundary convention y_0 = y_{m+n} = 1 (1-based)."""
        if i == 0 or i == len(self.parity):
            return Poly.one(self.field)
        return self.ys[i - 1]

    def degrees(self):
        return tuple(y.degree for y in self.ys)

    def key(self):
        if self._key is None:
            tw = tuple(q.key() for q in self.twist) if self.twist else None
            self._key = (self.parity.signs, tuple(y.key() for y in self.ys), tw)
        return self._key

    def __eq__(self, other):
        return isinstance(other, BetheNode) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def involves(self, name):
        return any(y.involves(name) for y in self.ys)

    def specialize(self, name, value):
        return BetheNode(
            self.parity,
            [y.specialize(name, value) for y in self.ys],
            self.twist,
        )

    def with_swapped_twist(self, i):
        if self.twist is None:
            return None
        tw = list(self.twist)
        tw[i - 1], tw[i] = tw[i], tw[i - 1]
        return tuple(tw)

    def __repr__(self):
        ys = ", ".join(str(y) for y in self.ys)
        return f"BetheNode({self.parity}; {ys})"


def bae_residuals(node, W, troots):
    """Left sides of the Bethe equations at the given roots.

    `troots` lists, per color i, the scalar roots of y_i (with multiplicity).
    The allowed cancellations are applied first; a vanishing surviving
    denominator is an error.  A solution has every residual equal to one.
    """
    field = W.field
    h = field.h
    s = node.parity
    tsys = W.tsystem(s)
    lam_s = tsys.weights_s
    out = []
    nin = len(s) - 1
    if len(troots) != nin:
        raise ModelError("need one root list per color")
    for i in range(1, nin + 1):
        li = len(troots[i - 1])
        for j in range(li):
            t = field.scalar(troots[i - 1][j])
            val = field.one
            if node.twist is not None:
                val = node.twist[i - 1] / node.twist[i]
            for k in range(W.p):
                a = s[i] * lam_s[k][i - 1]
                b = s[i + 1] * lam_s[k][i]
                if a == b:
                    continue  # cancellation of equal evaluation factors
                num = t - W.z[k] + field.scalar(a) * h
                den = t - W.z[k] + field.scalar(b) * h
                if den.is_zero():
                    raise ModelError(
                        f"vanishing denominator t - z_{k+1} + s_{i+1} lam h at color {i}"
                    )
                val = val * num / den
            if i >= 2:
                for tr in troots[i - 2]:
                    tr = field.scalar(tr)
                    num = t - tr + field.scalar(s[i]) * h
                    den = t - tr
                    if den.is_zero():
                        raise ModelError(f"colliding roots of colors {i-1}, {i}")
                    val = val * num / den
            if s[i] == s[i + 1]:
                for r in range(li):
                    if r == j:
                        continue
                    tr = field.scalar(troots[i - 1][r])
                    num = t - tr - field.scalar(s[i]) * h
                    den = t - tr + field.scalar(s[i + 1]) * h
                    if den.is_zero():
                        raise ModelError(f"self-interaction pole at color {i}")
                    val = val * num / den
            if i < nin:
                for tr in troots[i]:
                    tr = field.scalar(tr)
                    num = t - tr
                    den = t - tr - field.scalar(s[i + 1]) * h
                    if den.is_zero():
                        raise ModelError(f"colliding roots of colors {i}, {i+1}")
                    val = val * num / den
            out.append((i, j, val))
    return out


def isotropic_divisibility(node, W):
    """For each isotropic position, whether y_i divides the fermionic right
    side (the multiplicity admissibility condition)."""
    s = node.parity
    tsys = W.tsystem(s)
    result = {}
    for i in range(1, len(s)):
        if s[i] == s[i + 1]:
            continue
        rhs = _fermionic_rhs(node, i, tsys, W)
        result[i] = rhs.is_zero() or node.y(i).divides(rhs)
    return result


def _fermionic_rhs(node, i, tsys, W):
    s = node.parity
    if node.twist is None:
        qi = qj = None
    else:
        qi, qj = node.twist[i - 1], node.twist[i]
    a = tsys.phi[i] * node.y(i - 1).shift(-s[i]) * node.y(i + 1)
    b = tsys.psi[i] * node.y(i - 1) * node.y(i + 1).shift(-s[i])
    if qi is not None:
        a = a * Poly(a.field, (qi,))
        b = b * Poly(b.field, (qj,))
    return a - b


def is_generic(node, W):
    """Genericity of the tuple with respect to parity, weights and points.

    Returns (flag, diagnostics); each diagnostic names the violated clause.
    """
    s = node.parity
    tsys = W.tsystem(s)
    problems = []
    for i in range(1, len(s)):
        yi = node.y(i)
        if s[i] * s[i + 1] == 1:
            if not yi.has_simple_roots():
                problems.append(f"y_{i} has a repeated root")
            if yi.gcd(yi.shift(1)).degree > 0:
                problems.append(f"y_{i} shares a root with y_{i}[1]")
        for label, other in (
            (f"y_{i-1}", node.y(i - 1)),
            (f"y_{i-1}[-s_{i}]", node.y(i - 1).shift(-s[i])),
            (f"y_{i+1}[s_{i+1}]", node.y(i + 1).shift(s[i + 1])),
        ):
            if yi.gcd(other).degree > 0:
                problems.append(f"y_{i} shares a root with {label}")
        if yi.gcd(tsys.ratio(i)).degree > 0:
            problems.append(f"y_{i} shares a root with T_{i}(T_{i+1})^(-s s)")
    return not problems, problems


def eigenvalue(node, W):
    """Transfer-matrix eigenvalue attached to the tuple (twisted if the node
    carries a twist ordering)."""
    field = W.field
    s = node.parity
    tsys = W.tsystem(s)
    total = RatFunc.zero(field)
    for a in range(1, len(s) + 1):
        Ta = RatFunc(field, tsys.T[a - 1])
        ya1 = RatFunc(field, node.y(a - 1))
        ya = RatFunc(field, node.y(a))
        term = (
            (Ta / Ta.shift(s[a]))
            * (ya1.shift(-s[a]) / ya1)
            * (ya.shift(s[a]) / ya)
        )
        coef = field.scalar(s[a])
        if node.twist is not None:
            coef = coef * node.twist[a - 1]
        total = total + term * RatFunc(field, Poly(field, (coef,)))
    return total


def weight_at_infinity(s, W, l):
    """Coordinates of the weight at infinity for degree vector l."""
    if len(l) != len(s) - 1:
        raise ModelError("degree vector has wrong length")
    lam_s = [weight_transform(lam, s) for lam in W.weights]
    out = []
    for j in range(1, len(s) + 1):
        total = sum(lam[j - 1] for lam in lam_s)
        lj = l[j - 1] if j <= len(l) else 0
        lj1 = l[j - 2] if j >= 2 else 0
        out.append(total - lj + lj1)
    return tuple(out)
