"""Reproduction procedures and populations.

A bosonic move (equal adjacent signs) trades y_i for any other polynomial
solution of the signed Wronskian equation and yields a projective family;
a fermionic move (opposite signs) divides the cross term by y_i, shifts
the quotient, and swaps the two signs.  The closure of a seed solution
under all moves is the population; the witnessed operator built from any
member is the population invariant.

Exploration runs in two modes.  Symbolic mode carries a single projective
parameter (the worked three-component example is the target shape) and
refuses inputs that would need two simultaneous parameters.  Sampled mode
draws parameter values from a seeded pool, retrying when a sample lands on
a non-generic member.
"""

from __future__ import annotations

import random

from .diffops import FactoredRatOp, FactorWitness
from .model import BetheNode, ModelError, is_generic, eigenvalue, _fermionic_rhs
from .polys import Poly, RatFunc, reduce_mod_span, solve_skew_linear
from .scalars import INFINITY


class ReproductionError(ArithmeticError):
    pass


class ParameterBudgetError(ReproductionError):
    """Symbolic exploration would need a second simultaneous parameter."""


def _bosonic_rhs(node, i, W):
    tsys = W.tsystem(node.parity)
    s = node.parity
    return tsys.ratio(i) * node.y(i - 1).shift(-s[i]) * node.y(i + 1)


class BosonicFamily:
    """The affine family of solutions in one bosonic direction.

    Members are c1 * particular + c2 * y_i projectively; (0 : 1) is the
    original node and the affine chart member(c) realizes particular - c*y_i
    (so c = infinity returns the original node).
    """

    __slots__ = ("node", "direction", "particular", "homogeneous")

    def __init__(self, node, direction, particular, homogeneous):
        self.node = node
        self.direction = direction
        self.particular = particular
        self.homogeneous = homogeneous

    def member(self, c):
        if c is INFINITY:
            return self.node
        c = self.node.field.scalar(c)
        i = self.direction
        ynew = self.particular - self.node.y(i) * Poly(self.node.field, (c,))
        if ynew.is_zero():
            raise ReproductionError("projective member degenerates to zero")
        ys = list(self.node.ys)
        ys[i - 1] = ynew
        return BetheNode(self.node.parity, ys, self.node.twist)

    def member_projective(self, c1, c2):
        field = self.node.field
        c1, c2 = field.scalar(c1), field.scalar(c2)
        ynew = self.particular * Poly(field, (c1,)) + self.node.y(self.direction) * Poly(field, (c2,))
        if ynew.is_zero():
            raise ReproductionError("projective member degenerates to zero")
        ys = list(self.node.ys)
        ys[self.direction - 1] = ynew
        return BetheNode(self.node.parity, ys, self.node.twist)

    def pencil(self):
        """A basis of the two-dimensional pencil swept by the family."""
        return [self.particular, self.node.y(self.direction)]


def bosonic_reproduce(node, i, W, check_generic=True):
    """Solve the signed Wronskian equation in the i-th direction.

    Requires equal adjacent signs.  Returns a BosonicFamily; raises when no
    polynomial solution exists within the degree bound.
    """
    s = node.parity
    if s[i] != s[i + 1]:
        raise ReproductionError(f"direction {i} is fermionic for this parity")
    if check_generic:
        ok, why = is_generic(node, W)
        if not ok:
            raise ReproductionError("non-generic node: " + "; ".join(why))
    if node.twist is not None:
        return _twisted_bosonic(node, i, W)
    field = node.field
    yi = node.y(i)
    C = _bosonic_rhs(node, i, W)
    bound = max(C.degree - yi.degree + 1, yi.degree)
    part, hom = solve_skew_linear(yi, -yi.shift(-s[i]), C, s[i], bound)
    if part is None:
        raise ReproductionError(f"no polynomial solution in direction {i}")
    part = reduce_mod_span(part, hom + [yi])
    if part.is_zero():
        # the original y_i itself solves the equation; keep a nonzero offset
        raise ReproductionError(f"degenerate bosonic family in direction {i}")
    return BosonicFamily(node, i, part, hom)


def _twisted_bosonic(node, i, W):
    field = node.field
    s = node.parity
    yi = node.y(i)
    q = node.twist[i - 1] / node.twist[i]
    C = _bosonic_rhs(node, i, W)
    A = yi * Poly(field, (q ** s[i],))
    bound = max(C.degree - yi.degree, 0)
    part, hom = solve_skew_linear(A, -yi.shift(-s[i]), C, s[i], bound)
    if part is None or hom:
        raise ReproductionError(
            f"twisted bosonic solution in direction {i} is not unique/existent"
        )
    ys = list(node.ys)
    ys[i - 1] = part
    return BetheNode(node.parity, ys, node.with_swapped_twist(i))


def fermionic_reproduce(node, i, W, check_generic=False):
    """Divide out y_i from the fermionic cross term and swap the signs."""
    s = node.parity
    if s[i] == s[i + 1]:
        raise ReproductionError(f"direction {i} is bosonic for this parity")
    if check_generic:
        ok, why = is_generic(node, W)
        if not ok:
            raise ReproductionError("non-generic node: " + "; ".join(why))
    tsys = W.tsystem(s)
    rhs = _fermionic_rhs(node, i, tsys, W)
    if rhs.is_zero():
        raise ReproductionError(
            f"fermionic reproduction not applicable in direction {i} (zero right side)"
        )
    yi = node.y(i)
    if not yi.divides(rhs):
        raise ReproductionError(
            f"root multiplicity condition fails in direction {i}: y_{i} does not divide"
        )
    ynew = rhs.divexact(yi).shift(s[i])
    ys = list(node.ys)
    ys[i - 1] = ynew
    return BetheNode(node.parity.swapped(i), ys, node.with_swapped_twist(i))


def twisted_reproduce(node, i, W):
    """The quasi-periodic move in direction i (both kinds; unique image)."""
    if node.twist is None:
        raise ReproductionError("node carries no twist data")
    s = node.parity
    if s[i] == s[i + 1]:
        return _twisted_bosonic(node, i, W)
    return fermionic_reproduce(node, i, W)


def verify_solution(node, W):
    """Check the reproduction criterion: every direction admits the required
    polynomial.  Returns (ok, diagnostics)."""
    s = node.parity
    problems = []
    for i in range(1, len(s)):
        try:
            if node.twist is not None:
                twisted_reproduce(node, i, W)
            elif s[i] == s[i + 1]:
                bosonic_reproduce(node, i, W, check_generic=False)
            else:
                fermionic_reproduce(node, i, W)
        except ReproductionError as exc:
            if "not applicable" in str(exc):
                continue  # identically zero right side: vacuous direction
            problems.append(f"direction {i}: {exc}")
    return not problems, problems


# ---------------------------------------------------------------------------
# population graphs


class Edge:
    __slots__ = ("src", "dst", "direction", "kind", "param")

    def __init__(self, src, dst, direction, kind, param=None):
        self.src = src
        self.dst = dst
        self.direction = direction
        self.kind = kind
        self.param = param

    def key(self):
        return (self.src, self.dst, self.direction, self.kind)

    def __repr__(self):
        return f"Edge({self.src} -> {self.dst}, i={self.direction}, {self.kind})"


class PopulationGraph:
    """Closure of a seed under reproductions, with labeled edges."""

    def __init__(self, W, mode, param=None, seed=None):
        self.W = W
        self.mode = mode
        self.param = param
        self.seed = seed
        self.rng_seed = None
        self.nodes = {}
        self.edges = []
        self._edge_keys = set()
        self.node_order = []

    def add_node(self, node):
        key = node.key()
        if key not in self.nodes:
            self.nodes[key] = node
            self.node_order.append(key)
        return key

    def replace_node(self, old_key, node):
        new_key = self.add_node(node)
        if old_key in self.nodes and old_key != new_key:
            del self.nodes[old_key]
            self.node_order = [new_key if k == old_key else k for k in self.node_order]
            seen = set()
            order = []
            for k in self.node_order:
                if k not in seen:
                    seen.add(k)
                    order.append(k)
            self.node_order = order
            for e in self.edges:
                if e.src == old_key:
                    e.src = new_key
                if e.dst == old_key:
                    e.dst = new_key
            if self.seed == old_key:
                self.seed = new_key
        return new_key

    def add_edge(self, src, dst, direction, kind, param=None):
        e = Edge(src, dst, direction, kind, param)
        canon = (min(src, dst), max(src, dst), direction, kind)
        if canon not in self._edge_keys:
            self._edge_keys.add(canon)
            self.edges.append(e)

    def parities(self):
        out = []
        for key in self.node_order:
            p = self.nodes[key].parity
            if p not in out:
                out.append(p)
        return out

    def components(self):
        """Nodes grouped by parity sequence."""
        groups = {}
        for key in self.node_order:
            node = self.nodes[key]
            groups.setdefault(node.parity.signs, []).append(node)
        return groups

    def contains(self, node):
        """Membership including symbolic families: match the tuple against a
        family at some parameter value (or at infinity)."""
        key = node.key()
        if key in self.nodes:
            return True
        if self.param is None:
            return False
        name = self.param
        for cand in self.nodes.values():
            if cand.parity != node.parity:
                continue
            if not cand.involves(name):
                continue
            value = _match_parameter(cand, node, name)
            if value is not None:
                return True
        return False


def _match_parameter(family_node, concrete, name):
    """Solve family(c) == concrete for c; returns the value, INFINITY, or None."""
    field = family_node.field
    try:
        if family_node.specialize(name, INFINITY) == concrete:
            return INFINITY
    except Exception:
        pass
    # find a component and coefficient where c appears with degree 1
    for yi_f, yi_c in zip(family_node.ys, concrete.ys):
        if not yi_f.involves(name):
            continue
        cleared = yi_f.clear_param_denominators()
        top = max(c.param_degree(name) for c in cleared.coeffs)
        if top != 1:
            continue
        # cleared = P0 + c*P1 elementwise; match monic(cleared(c)) = yi_c
        p0 = Poly(field, [c.param_part(name, 0) for c in cleared.coeffs])
        p1 = Poly(field, [c.param_part(name, 1) for c in cleared.coeffs])
        # solve (p0 + c p1) proportional to yi_c: cross-coefficients
        for j in range(max(p0.degree, p1.degree, yi_c.degree) + 1):
            for k in range(j):
                # (p0+c p1)_j * y_k == (p0+c p1)_k * y_j  -> linear in c
                a = p1.coeff(j) * yi_c.coeff(k) - p1.coeff(k) * yi_c.coeff(j)
                b = p0.coeff(j) * yi_c.coeff(k) - p0.coeff(k) * yi_c.coeff(j)
                if not a.is_zero():
                    cval = -b / a
                    try:
                        if family_node.specialize(name, cval) == concrete:
                            return cval
                    except Exception:
                        pass
    return None


def explore(seed, W, mode="symbolic", param=None, rng_seed=0, retries=16,
            samples_per_family=2, max_nodes=500, verify_seed=True):
    """Breadth-first closure of a seed solution under all reproductions."""
    if not W.is_h_generic():
        raise ModelError("population machinery needs h-generic evaluation points")
    if verify_seed:
        ok, why = verify_solution(seed, W)
        if not ok:
            raise ReproductionError("seed is not a solution: " + "; ".join(why))
    if seed.twist is not None:
        return _explore_twisted(seed, W, max_nodes)
    if mode == "symbolic":
        if param is None:
            if not W.field.params:
                raise ParameterBudgetError("symbolic mode needs a field parameter")
            param = W.field.params[0]
        return _explore_symbolic(seed, W, param, max_nodes)
    if mode == "sampled":
        return _explore_sampled(seed, W, rng_seed, retries, samples_per_family, max_nodes)
    raise ValueError(f"unknown exploration mode {mode!r}")


def _explore_symbolic(seed, W, param, max_nodes):
    if seed.involves(param):
        raise ParameterBudgetError("symbolic seed must not involve the parameter")
    graph = PopulationGraph(W, "symbolic", param=param)
    graph.seed = graph.add_node(seed)
    frontier = [graph.seed]
    cpar = W.field.param(param)
    while frontier:
        if len(graph.nodes) > max_nodes:
            raise ReproductionError("population exceeded the node cap")
        next_frontier = []
        for key in frontier:
            if key not in graph.nodes:
                continue
            node = graph.nodes[key]
            s = node.parity
            for i in range(1, len(s)):
                if s[i] == s[i + 1]:
                    new_key = _symbolic_bosonic_step(graph, key, node, i, W, param, cpar)
                    if new_key is not None:
                        next_frontier.append(new_key)
                else:
                    tsys = W.tsystem(s)
                    rhs = _fermionic_rhs(node, i, tsys, W)
                    if rhs.is_zero():
                        continue
                    img = fermionic_reproduce(node, i, W)
                    new_key = img.key()
                    fresh = new_key not in graph.nodes
                    graph.add_node(img)
                    graph.add_edge(key, new_key, i, "fermionic")
                    if fresh:
                        next_frontier.append(new_key)
        frontier = next_frontier
    return graph


def _symbolic_bosonic_step(graph, key, node, i, W, param, cpar):
    yi = node.y(i)
    others_involve = any(
        node.y(j).involves(param) for j in range(1, len(node.parity)) if j != i
    )
    if others_involve:
        if yi.involves(param):
            raise ParameterBudgetError(
                f"direction {i}: family would need a second parameter"
            )
        raise ParameterBudgetError(
            f"direction {i}: neighbors carry the parameter, cannot solve in one"
        )
    if not yi.involves(param):
        family = bosonic_reproduce(node, i, W, check_generic=False)
        rep = family.member(cpar)
        new_key = graph.replace_node(key, rep)
        graph.add_edge(new_key, new_key, i, "bosonic")
        return new_key if new_key != key else None
    # y_i carries the parameter: check the pencil closes onto the family
    pencil = _family_pencil(yi, param)
    samples = [W.field.scalar(v) for v in (0, 1, 2)]
    for v in samples:
        member = node.specialize(param, v)
        fam = bosonic_reproduce(member, i, W, check_generic=False)
        for g in fam.pencil():
            if not _in_span(g, pencil):
                raise ParameterBudgetError(
                    f"direction {i}: bosonic family escapes the symbolic pencil"
                )
    graph.add_edge(key, key, i, "bosonic")
    return None


def _family_pencil(yi, param):
    cleared = yi.clear_param_denominators()
    top = max(c.param_degree(param) for c in cleared.coeffs)
    parts = []
    for e in range(top + 1):
        p = Poly(yi.field, [c.param_part(param, e) for c in cleared.coeffs])
        if not p.is_zero():
            parts.append(p)
    return parts


def _in_span(p, basis):
    return reduce_mod_span(p, basis).is_zero()


def _explore_sampled(seed, W, rng_seed, retries, samples_per_family, max_nodes):
    rng = random.Random(rng_seed)
    pool = [v for v in range(-20, 21)]
    graph = PopulationGraph(W, "sampled")
    graph.seed = graph.add_node(seed)
    graph.rng_seed = rng_seed
    frontier = [graph.seed]
    kernel_dims = (0, 0)
    passes_without_news = 0
    known_parities = {seed.parity.signs}
    while frontier and len(graph.nodes) <= max_nodes:
        next_frontier = []
        news = False
        for key in frontier:
            node = graph.nodes[key]
            s = node.parity
            for i in range(1, len(s)):
                if s[i] == s[i + 1]:
                    try:
                        family = bosonic_reproduce(node, i, W, check_generic=False)
                    except ReproductionError:
                        continue
                    got = 0
                    for _ in range(retries):
                        if got >= samples_per_family:
                            break
                        c = W.field.scalar(rng.choice(pool))
                        try:
                            member = family.member(c)
                        except ReproductionError:
                            continue
                        if member.key() == key:
                            continue
                        ok, _why = is_generic(member, W)
                        if not ok:
                            continue
                        new_key = member.key()
                        fresh = new_key not in graph.nodes
                        graph.add_node(member)
                        graph.add_edge(key, new_key, i, "bosonic", param=c)
                        got += 1
                        if fresh:
                            next_frontier.append(new_key)
                            news = True
                else:
                    tsys = W.tsystem(s)
                    rhs = _fermionic_rhs(node, i, tsys, W)
                    if rhs.is_zero():
                        continue
                    try:
                        img = fermionic_reproduce(node, i, W)
                    except ReproductionError:
                        continue
                    new_key = img.key()
                    fresh = new_key not in graph.nodes
                    graph.add_node(img)
                    graph.add_edge(key, new_key, i, "fermionic")
                    if fresh:
                        next_frontier.append(new_key)
                        if img.parity.signs not in known_parities:
                            known_parities.add(img.parity.signs)
                            news = True
        new_dims = _kernel_dims(graph, W)
        if new_dims > kernel_dims:
            kernel_dims = new_dims
            news = True
        passes_without_news = 0 if news else passes_without_news + 1
        if passes_without_news >= 1 and len(known_parities) == len(graph.parities()):
            break
        frontier = next_frontier
    return graph


def _kernel_dims(graph, W):
    """Dimensions of the kernel-witness spans over standard-parity nodes;
    the sampled-mode stopping heuristic watches these saturate."""
    from .polys import indep_over_constants

    m, n = W.m, W.n
    vs, us = [], []
    for key in graph.node_order:
        node = graph.nodes[key]
        if not node.parity.is_standard():
            continue
        v, u = kernel_witnesses(node, W)
        if v is not None and len(vs) < m:
            if indep_over_constants(vs + [v]):
                vs.append(v)
        if u is not None and len(us) < n:
            if indep_over_constants(us + [u]):
                us.append(u)
    return (len(vs), len(us))


def kernel_witnesses(node, W):
    """The closed-form kernel members (v, u) carried by a standard node."""
    field = node.field
    m, n = W.m, W.n
    tsys = W.tsystem(node.parity)
    v = u = None
    if m >= 1:
        v = RatFunc(field, tsys.T[m - 1] * node.y(m - 1).shift(-1), node.y(m))
    if n >= 1:
        u = RatFunc(
            field,
            node.y(m + 1).shift(-1),
            tsys.T[m].shift(-1) * node.y(m),
        )
    return v, u


def _explore_twisted(seed, W, max_nodes):
    import math

    graph = PopulationGraph(W, "twisted")
    graph.seed = graph.add_node(seed)
    frontier = [graph.seed]
    cap = math.factorial(len(seed.parity))
    while frontier:
        next_frontier = []
        for key in frontier:
            node = graph.nodes[key]
            for i in range(1, len(node.parity)):
                try:
                    img = twisted_reproduce(node, i, W)
                except ReproductionError:
                    continue
                new_key = img.key()
                fresh = new_key not in graph.nodes
                graph.add_node(img)
                graph.add_edge(key, new_key, i,
                               "bosonic" if node.parity[i] == node.parity[i + 1]
                               else "fermionic")
                if fresh:
                    next_frontier.append(new_key)
        if len(graph.nodes) > max(cap, max_nodes):
            raise ReproductionError("twisted population exceeded the orbit bound")
        frontier = next_frontier
    return graph


# ---------------------------------------------------------------------------
# the invariant operator


def build_operator(node, W):
    """Witnessed factorization of the rational difference operator attached
    to the tuple: factor i has witness T_i y_{i-1}[-s_i]/y_i when s_i = +1
    and y_i[-1]/(T_i[-1] y_{i-1}) when s_i = -1, with the twist multiplier
    absorbed into the factor."""
    field = node.field
    s = node.parity
    tsys = W.tsystem(s)
    factors = []
    for i in range(1, len(s) + 1):
        q = node.twist[i - 1] if node.twist is not None else field.one
        if s[i] == 1:
            g = RatFunc(field, tsys.T[i - 1] * node.y(i - 1).shift(-1), node.y(i))
        else:
            g = RatFunc(
                field,
                node.y(i).shift(-1),
                tsys.T[i - 1].shift(-1) * node.y(i - 1),
            )
        factors.append(FactorWitness(g, s[i], q))
    return FactoredRatOp(field, factors)


class InvarianceEntry:
    __slots__ = ("label", "operator_equal", "eigenvalue_equal")

    def __init__(self, label, operator_equal, eigenvalue_equal):
        self.label = label
        self.operator_equal = operator_equal
        self.eigenvalue_equal = eigenvalue_equal

    @property
    def passed(self):
        return self.operator_equal and self.eigenvalue_equal

    def __repr__(self):
        return f"InvarianceEntry({self.label}, op={self.operator_equal}, eig={self.eigenvalue_equal})"


class InvarianceReport:
    def __init__(self, entries):
        self.entries = entries

    @property
    def passed(self):
        return all(e.passed for e in self.entries)

    def failures(self):
        return [e for e in self.entries if not e.passed]

    def __repr__(self):
        return f"InvarianceReport({len(self.entries)} checks, passed={self.passed})"


def invariance_report(graph, W, spec_values=(0, 1, 2, 5)):
    """Operator and eigenvalue invariance over every edge, with parameter
    specializations (including infinity) on symbolic nodes."""
    cache = {}

    def op_of(node):
        k = node.key()
        if k not in cache:
            cache[k] = (build_operator(node, W), eigenvalue(node, W))
        return cache[k]

    entries = []

    def compare(label, a, b):
        opa, eva = op_of(a)
        opb, evb = op_of(b)
        entries.append(InvarianceEntry(label, opa.rat_equal(opb), eva == evb))

    for e in graph.edges:
        a = graph.nodes.get(e.src)
        b = graph.nodes.get(e.dst)
        if a is None or b is None:
            continue
        if e.src == e.dst and graph.param and a.involves(graph.param):
            members = _specialized_members(a, graph.param, spec_values)
            for tag, mem in members[1:]:
                compare(f"family i={e.direction} member {members[0][0]} vs {tag}",
                        members[0][1], mem)
        else:
            compare(f"edge {e.direction} {e.kind}", a, b)
        if graph.param:
            for node in (a, b):
                if node.involves(graph.param):
                    for tag, mem in _specialized_members(node, graph.param, spec_values):
                        compare(f"edge {e.direction} {e.kind} @ {tag}", node, mem)
                    break
    return InvarianceReport(entries)


def _specialized_members(node, param, values):
    out = []
    for v in values:
        try:
            out.append((str(v), node.specialize(param, v)))
        except Exception:
            continue
    try:
        out.append(("inf", node.specialize(param, INFINITY)))
    except Exception:
        pass
    return out
