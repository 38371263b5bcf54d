"""Operators from graphs, and the weighted graph expansions built on them:
truncated star products, the reduction differential, and the quarter-plane
module actions with their wheel operators.

Every expansion is assembled exactly as a polynomial whose coefficients are
rational combinations of per-graph weight symbols; a backend then evaluates
the symbols from the exact table (reporting exactly which graphs are missing)
or from the seeded Monte Carlo estimator with entry-wise variance carried
along.  The series bookkeeping lives here: level n of a product carries
eps^n / n!, each ordered graph class enters with multiplicity 1/|Aut|, and
each aerial vertex contributes 1/2! for its ordered edge pair; with the
tabulated first-order weights this normalization is pinned by
f*g - g*f = eps*{f,g} + O(eps^2) on linear inputs.

The module actions follow the quotient-algebra normalization (the deformation
parameter is specialized to 1), which is the reading under which the shifted
generators are annihilated exactly at order one; the series order still
truncates the graph expansion.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .graphs import (Graph, GraphError, MINUS, PLUS, UNCOLORED, aut_count,
                     canonical_form, enumerate_q_n2, enumerate_reduction_family,
                     small_loop)
from .liealg import AlgebraError, SplitData
from .poly import Mono, Poly
from . import weights as weights_mod


class BackendError(Exception):
    def __init__(self, missing: list[str]):
        super().__init__("exact table has no entry for: " + "; ".join(missing))
        self.missing = missing


# ---------------------------------------------------------------------------
# Weight providers.
# ---------------------------------------------------------------------------

class ExactWeights:
    """Resolve weights from the exact table only."""

    kind = "exact"

    def resolve(self, g: Graph) -> Fraction | None:
        w = weights_mod.omega_exact(g)
        return None if w is None else w.exact


class NumericWeights:
    """Monte Carlo weights with a per-graph derived seed; falls back to the
    exact table where an entry exists (variance zero)."""

    kind = "numeric"

    def __init__(self, samples: int = 200_000, seed: int = 0, workers: int = 1,
                 use_table: bool = True):
        self.samples = samples
        self.seed = seed
        self.workers = workers
        self.use_table = use_table
        self.cache: dict[str, tuple[float, float]] = {}

    def graph_seed(self, key: str) -> int:
        digest = hashlib.sha256(key.encode()).digest()
        return (int.from_bytes(digest[:8], "big") ^ self.seed) % (2 ** 63)

    def resolve_numeric(self, g: Graph) -> tuple[float, float]:
        key = canonical_form(g)
        if key not in self.cache:
            if self.use_table:
                w = weights_mod.omega_exact(g)
                if w is not None:
                    self.cache[key] = (float(w.exact), 0.0)
                    return self.cache[key]
            w = weights_mod.omega_numeric(g, self.samples, self.graph_seed(key),
                                          self.workers)
            if w.kind == "exact":
                self.cache[key] = (float(w.exact), 0.0)
            else:
                self.cache[key] = (w.estimate, w.stderr ** 2)
        return self.cache[key]


# ---------------------------------------------------------------------------
# Weight-symbol polynomials.
# ---------------------------------------------------------------------------

class WPoly:
    """Polynomial whose coefficients are affine combinations of weight
    symbols; the None symbol is the weight-free part."""

    def __init__(self, ambient):
        self.ambient = ambient
        self.terms: dict[Mono, dict[str | None, Fraction]] = {}
        self.graphs: dict[str, Graph] = {}

    def add_poly(self, p: Poly, graph: Graph | None = None, factor=1):
        factor = Fraction(factor)
        key = None
        if graph is not None:
            key = canonical_form(graph)
            self.graphs.setdefault(key, graph)
        for mono, c in p.terms.items():
            row = self.terms.setdefault(mono, {})
            s = row.get(key, Fraction(0)) + factor * c
            if s == 0:
                row.pop(key, None)
                if not row:
                    self.terms.pop(mono)
            else:
                row[key] = s

    def eval_exact(self, provider: ExactWeights) -> Poly:
        values: dict[str, Fraction] = {}
        missing = []
        for key, g in sorted(self.graphs.items()):
            v = provider.resolve(g)
            if v is None:
                used = any(key in row for row in self.terms.values())
                if used:
                    missing.append(key)
            else:
                values[key] = v
        if missing:
            raise BackendError(missing)
        out: dict[Mono, Fraction] = {}
        for mono, row in self.terms.items():
            c = sum((coeff * (values[k] if k is not None else 1)
                     for k, coeff in row.items()), Fraction(0))
            if c != 0:
                out[mono] = c
        return Poly(self.ambient, out)

    def eval_numeric(self, provider: NumericWeights) -> "NumericResult":
        values = {k: provider.resolve_numeric(g) for k, g in self.graphs.items()}
        est: dict[Mono, float] = {}
        var: dict[Mono, float] = {}
        for mono, row in self.terms.items():
            e = v = 0.0
            for k, coeff in row.items():
                c = float(coeff)
                if k is None:
                    e += c
                else:
                    e += c * values[k][0]
                    v += c * c * values[k][1]
            if e or v:
                est[mono] = e
                var[mono] = v
        return NumericResult(self.ambient, est, var)

    def eval(self, backend):
        if backend.kind == "exact":
            return self.eval_exact(backend)
        return self.eval_numeric(backend)


@dataclass
class NumericResult:
    ambient: object
    est: dict[Mono, float]
    var: dict[Mono, float]

    def stderr_norm(self) -> float:
        return sum(v ** 0.5 for v in self.var.values())

    def est_norm(self) -> float:
        return sum(abs(e) for e in self.est.values())


# ---------------------------------------------------------------------------
# The bidifferential operator of a graph.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OperatorTerm:
    """A graph together with its weight bookkeeping and the index ranges each
    edge color may take (minus: 1..t, plus: t+1..n, uncolored: everything)."""

    graph: Graph
    split: SplitData

    def label_range(self, color: str) -> range:
        t, n = self.split.t, self.split.algebra.dim
        if color == MINUS:
            return range(0, t)
        if color == PLUS:
            return range(t, n)
        return range(0, n)


def _pi_entry(split: SplitData, a: int, b: int) -> Poly:
    g = split.algebra
    row = g.bracket(a, b)
    out = {}
    for k, c in row.items():
        e = [0] * g.dim
        e[k] = 1
        out[(tuple(e), 0)] = c
    return Poly(g, out)


def graph_operator(split: SplitData, graph: Graph, inputs: dict[str, Poly],
                   inf_label: int | None = None,
                   restriction: tuple[Fraction, ...] | None = None) -> Poly:
    """Evaluate the operator of a graph on the slot functions.

    inputs maps ground slots ('F1', 'F2') to polynomials; inf_label fixes the
    index carried by the edge to inf; restriction substitutes every
    h-coordinate after all differentiation (used on the affine slice).
    A loop edge differentiates its own vertex's bracket entry, producing the
    trace operators of the corner diagram.
    """
    term = OperatorTerm(graph, split)
    g = split.algebra
    edges = list(graph.edges)
    # quick kill: more derivatives on a slot than its degree
    for slot, p in inputs.items():
        need = sum(1 for e in edges if e[1] == slot)
        if need > 0 and p.total_deg() < need:
            return Poly.zero(g)

    out_pairs: dict[int, list[int]] = {v: [] for v in range(1, graph.n1 + 1)}
    for ei, (s, t, c) in enumerate(edges):
        out_pairs[s].append(ei)

    result = Poly.zero(g)

    def vertex_factor(v: int, chosen: dict[int, int]) -> Poly | None:
        e1, e2 = out_pairs[v]
        pi = _pi_entry(split, chosen[e1], chosen[e2])
        if pi.is_zero():
            return None
        for ei, (_, t, _c) in enumerate(edges):
            if t == v:   # in-edges derive the bracket entry; a loop derives its own
                pi = pi.diff(chosen[ei])
                if pi.is_zero():
                    return None
        return pi

    def assemble(chosen: dict[int, int]) -> Poly:
        factor = Poly.constant(g, 1)
        for v in range(1, graph.n1 + 1):
            pf = vertex_factor(v, chosen)
            if pf is None:
                return Poly.zero(g)
            factor = factor * pf
        for slot, p in inputs.items():
            ds = [chosen[ei] for ei, e in enumerate(edges) if e[1] == slot]
            piece = p
            for i in ds:
                piece = piece.diff(i)
                if piece.is_zero():
                    return Poly.zero(g)
            factor = factor * piece
        return factor

    def rec(ei: int, chosen: dict[int, int]):
        nonlocal result
        if ei == len(edges):
            result = result + assemble(chosen)
            return
        s, t, c = edges[ei]
        if t == "inf":
            if inf_label is None:
                raise AlgebraError("graph has an inf edge but no inf label given")
            chosen[ei] = inf_label
            rec(ei + 1, chosen)
            del chosen[ei]
            return
        for lab in term.label_range(c):
            chosen[ei] = lab
            # prune when this vertex pair is complete and its entry vanishes
            e1, e2 = out_pairs[s]
            if ei == max(e1, e2) and _pi_entry(split, chosen[e1], chosen[e2]).is_zero():
                continue
            rec(ei + 1, chosen)
        chosen.pop(ei, None)

    rec(0, {})
    if restriction is not None:
        for i in range(split.t):
            result = result.substitute_coord(i, restriction[i])
    return result


def apply_bidiff(split: SplitData, graph: Graph, f: Poly, g: Poly,
                 point_restriction: tuple[Fraction, ...] | None = None) -> Poly:
    """The two-ground operator of a graph applied to (f, g)."""
    if graph.n2 != 2:
        raise AlgebraError("apply_bidiff needs a two-ground graph")
    return graph_operator(split, graph, {"F1": f, "F2": g},
                          restriction=point_restriction)


def apply_reduction_op(split: SplitData, graph: Graph, f: Poly,
                       restriction: tuple[Fraction, ...]) -> list[Poly]:
    """Components (B_1(f), ..., B_t(f)) of a one-ground graph with an edge to
    inf, the inf label running over the h-indices, evaluated on the slice."""
    if not graph.inf_edges():
        raise AlgebraError("graph lacks an inf edge")
    out = []
    for i in range(split.t):
        out.append(graph_operator(split, graph, {"F1": f}, inf_label=i,
                                  restriction=restriction))
    return out


# ---------------------------------------------------------------------------
# Star products.
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _q_n2_classes(n: int, colored: bool, cap: int) -> tuple[Graph, ...]:
    return tuple(enumerate_q_n2(n, colored, cap))


def star_product_symbolic(f: Poly, g: Poly, split: SplitData, flavor: str,
                          order: int, cap: int = 4) -> WPoly:
    amb = split.algebra
    if flavor not in ("kontsevich", "cf"):
        raise AlgebraError(f"unknown star flavor {flavor!r}")
    colored = flavor == "cf"
    restriction = None
    if colored:
        if not (f.uses_only(split.q_indices()) and g.uses_only(split.q_indices())):
            raise AlgebraError("the coisotropic product needs S(q) inputs")
        restriction = tuple(-l for l in split.lam)
    out = WPoly(amb)
    out.add_poly(f * g)
    for n in range(1, order + 1):
        if n > cap:
            raise GraphError(f"enumeration bound exceeded: order {n} > cap={cap}")
        eps = Poly.eps(amb, n)
        for graph in _q_n2_classes(n, colored, cap):
            op = apply_bidiff(split, graph, f, g, point_restriction=restriction)
            if op.is_zero():
                continue
            factor = Fraction(1, aut_count(graph) * 2 ** n)
            out.add_poly(eps * op, graph=graph, factor=factor)
    return out


def star_product(f: Poly, g: Poly, split: SplitData, flavor: str = "kontsevich",
                 order: int = 2, backend=None, cap: int = 4):
    """Truncated star product: the Kontsevich flavor on all of S(g)[eps], the
    coisotropic flavor on S(q)[eps] with the affine restriction applied."""
    backend = backend or ExactWeights()
    return star_product_symbolic(f, g, split, flavor, order, cap).eval(backend)


# ---------------------------------------------------------------------------
# Reduction differential.
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _reduction_classes(i: int, cap: int) -> tuple[Graph, ...]:
    fam = enumerate_reduction_family(i, cap)
    return tuple(fam["B"] + fam["BW"])


def reduction_differential_symbolic(f: Poly, split: SplitData, order: int,
                                    with_eps: bool = True,
                                    lam_scale: Fraction = Fraction(1),
                                    cap: int = 4) -> list[WPoly]:
    """Components of the differential as weight-symbol polynomials.

    with_eps=False gives the plain sum over levels (the differential graded
    by operator degree instead of the deformation parameter); lam_scale
    rescales the character in the slice restriction (the -t*lambda family).
    """
    amb = split.algebra
    restriction = tuple(-lam_scale * l for l in split.lam)
    comps = [WPoly(amb) for _ in range(split.t)]
    for n in range(1, order + 1):
        if n > cap:
            raise GraphError(f"enumeration bound exceeded: order {n} > cap={cap}")
        eps = Poly.eps(amb, n) if with_eps else Poly.constant(amb, 1)
        for graph in _reduction_classes(n, cap):
            ops = apply_reduction_op(split, graph, f, restriction)
            for i, op in enumerate(ops):
                if op.is_zero():
                    continue
                comps[i].add_poly(eps * op, graph=graph, factor=1)
    return comps


def reduction_differential(f: Poly, split: SplitData, order: int, backend=None,
                           with_eps: bool = True, lam_scale: Fraction = Fraction(1),
                           cap: int = 4):
    """d(f) as a list of t component polynomials (one per h-generator)."""
    backend = backend or ExactWeights()
    return [w.eval(backend) for w in
            reduction_differential_symbolic(f, split, order, with_eps,
                                            lam_scale, cap)]


# ---------------------------------------------------------------------------
# Corner diagram: module actions and the wheel operators T1, T2.
# ---------------------------------------------------------------------------

def _corner_vertex_options(v: int, k: int):
    opts = [("F1", PLUS), ("F1", MINUS), (v, UNCOLORED)]
    for u in range(1, k + 1):
        if u != v:
            opts.append((u, PLUS))
            opts.append((u, MINUS))
    return opts


@lru_cache(maxsize=None)
def _corner_classes(k: int) -> tuple[Graph, ...]:
    """Connected-or-not corner graphs with k aerial vertices deriving the
    axis function; edges to the corner slot are omitted (they vanish on the
    constant corner function)."""
    from itertools import product
    if k == 0:
        return ()
    seen: dict[str, Graph] = {}
    per_vertex = []
    for v in range(1, k + 1):
        opts = _corner_vertex_options(v, k)
        per_vertex.append([(a, b) for a in opts for b in opts if a != b])
    for combo in product(*per_vertex):
        edges = []
        for v, (e1, e2) in enumerate(combo, start=1):
            edges.append((v, e1[0], e1[1]))
            edges.append((v, e2[0], e2[1]))
        try:
            g = Graph(k, 1, tuple(edges), diagram="corner")
        except GraphError:
            continue
        seen.setdefault(canonical_form(g), g)
    return tuple(seen[key] for key in sorted(seen))


def module_action_symbolic(side: str, a: Poly, b: Poly, split: SplitData,
                           order: int) -> WPoly:
    """Bimodule action at the corner, deformation parameter specialized to 1,
    restricted to the affine slice at the end.

    The corner argument must be constant at positive order: every paper
    statement exercised here acts on the constant corner function.
    """
    if side not in ("left", "right"):
        raise AlgebraError("side must be 'left' or 'right'")
    if order > 2:
        raise AlgebraError("module actions are supported up to order 2")
    amb = split.algebra
    moving, corner = (a, b) if side == "left" else (b, a)
    if order >= 1 and corner.total_deg() > 0:
        raise AlgebraError("the corner argument must be constant beyond order 0")
    restriction = tuple(-l for l in split.lam)
    out = WPoly(amb)
    prod = a * b
    for i in range(split.t):
        prod = prod.substitute_coord(i, restriction[i])
    out.add_poly(prod)
    corner_const = corner
    for k in range(1, order + 1):
        for graph in _corner_classes(k):
            op = graph_operator(split, graph, {"F1": moving},
                                restriction=restriction)
            if op.is_zero():
                continue
            if side == "right" and graph.special:
                # the loop weights are tabulated for the vertical axis only
                raise BackendError([canonical_form(graph) + " (horizontal-axis loop)"])
            op = op * corner_const
            factor = Fraction(1, aut_count(graph) * 2 ** k)
            out.add_poly(op, graph=graph, factor=factor)
    return out


def module_action(side: str, a: Poly, b: Poly, split: SplitData, order: int,
                  backend=None):
    backend = backend or ExactWeights()
    return module_action_symbolic(side, a, b, split, order).eval(backend)


def t1_t2_truncated(direction: str, f: Poly, split: SplitData, order: int,
                    backend=None) -> Poly:
    """The wheel operators: T1(f) = f *_1 1, T2(f) = 1 *_2 f, and the
    order-by-order Neumann inverse of T1 restricted to S(q)[eps]."""
    backend = backend or ExactWeights()
    if order > 2:
        raise AlgebraError("T1/T2 are supported up to order 2")
    if direction == "t1":
        return module_action("left", f, Poly.constant(split.algebra, 1),
                             split, order, backend)
    if direction == "t2":
        return module_action("right", Poly.constant(split.algebra, 1), f,
                             split, order, backend)
    if direction != "t1inv":
        raise AlgebraError("direction must be t1, t2 or t1inv")
    # pieces U_k of T1 - id on S(q)[eps], then V = sum (-U)^compositions
    one = Poly.constant(split.algebra, 1)

    def level(k: int, p: Poly) -> Poly:
        full = module_action("left", p, one, split, k, backend)
        lower = module_action("left", p, one, split, k - 1, backend) if k else p
        return full - lower

    out = f
    u1 = level(1, f) if order >= 1 else Poly.zero(split.algebra)
    if order >= 1:
        out = out - u1
    if order >= 2:
        u2 = level(2, f)
        u1u1 = level(1, u1)
        out = out - u2 + u1u1
    return out
