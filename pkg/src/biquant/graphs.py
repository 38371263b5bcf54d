"""Admissible directed graphs with aerial (type I) and ground (type II)
vertices, colored edges, and ordered per-vertex edge pairs.

Edges always leave an aerial vertex; targets are aerial vertices, the ground
slots F1/F2, or the dangling sink 'inf' whose minus-colored edge indexes the
h*-component of a reduction operator.  The per-vertex edge order is semantic
(it enters both the wedge of angle forms and the operator's index positions),
so the canonical form quotients only by relabelling of aerial vertices.

Two diagrams occur: 'half' for the upper half-plane families (star products
and the reduction differential) and 'corner' for the quarter-plane module
actions, where the first ground slot sits on the vertical axis and a single
self-edge (the small loop) is admitted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product

Target = object   # int (1-based aerial index) or "F1" | "F2" | "inf"
Edge = tuple      # (source: int, target: Target, color: "+" | "-" | ".")

PLUS, MINUS, UNCOLORED = "+", "-", "."


class GraphError(Exception):
    pass


@dataclass(frozen=True)
class Graph:
    n1: int
    n2: int
    edges: tuple[Edge, ...]
    diagram: str = "half"

    def __post_init__(self):
        problems = check_graph(self)
        if problems:
            raise GraphError("; ".join(problems))

    @property
    def special(self) -> str:
        return "small_loop" if any(e[0] == e[1] for e in self.edges) else ""

    def form_edges(self) -> tuple[Edge, ...]:
        """Edges carrying an angle form: the edge to inf carries none."""
        return tuple(e for e in self.edges if e[1] != "inf")

    def inf_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e[1] == "inf")

    def ground_edge_count(self, slot: str = "F1") -> int:
        return sum(1 for e in self.edges if e[1] == slot)

    def out_edges(self, v: int) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e[0] == v)

    def in_degree(self, v: int) -> int:
        return sum(1 for e in self.edges if e[1] == v and e[0] != v)

    def is_colored(self) -> bool:
        return any(e[2] in (PLUS, MINUS) for e in self.edges)

    def config_dim(self) -> int:
        return 2 * self.n1 + self.n2 - 2 if self.diagram == "half" else 2 * self.n1

    def wire(self) -> str:
        return format_wire(self)

    def canonical(self) -> str:
        return canonical_form(self)


def check_graph(g: Graph) -> list[str]:
    out = []
    if g.n1 < 0 or g.n2 not in (1, 2):
        out.append("need n1 >= 0 and n2 in {1, 2}")
        return out
    if g.diagram not in ("half", "corner"):
        out.append(f"unknown diagram {g.diagram!r}")
    if g.diagram == "half" and 2 * g.n1 + g.n2 - 2 < 0:
        out.append("dimension constraint 2*n1 + n2 - 2 >= 0 violated")
    grounds = {"F1"} if g.n2 == 1 else {"F1", "F2"}
    seen = set()
    inf_count = 0
    prev_source = 1
    for e in g.edges:
        if len(e) != 3:
            out.append(f"malformed edge {e!r}")
            continue
        s, t, c = e
        if not (isinstance(s, int) and 1 <= s <= g.n1):
            out.append(f"edge source {s!r} is not a type-I vertex")
            continue
        if s < prev_source:
            out.append("edges must be grouped by source in increasing order")
        prev_source = max(prev_source, s)
        if c not in (PLUS, MINUS, UNCOLORED):
            out.append(f"unknown color {c!r}")
        if isinstance(t, int):
            if not 1 <= t <= g.n1:
                out.append(f"edge target {t} out of range")
            if t == s and not (g.diagram == "corner" and c == UNCOLORED):
                out.append(f"loop at vertex {s} (only the corner small loop may loop)")
        elif t == "inf":
            inf_count += 1
            if c != MINUS:
                out.append("the edge to inf must be minus-colored")
        elif t not in grounds:
            out.append(f"unknown target {t!r}")
        key = (s, t, c)
        if key in seen:
            out.append(f"double edge {key}")
        seen.add(key)
        if c == UNCOLORED and t != s:
            if (s, t) in {(a, b) for (a, b, _) in seen - {key}}:
                out.append(f"double uncolored edge ({s},{t})")
    if inf_count > 1:
        out.append("at most one edge may point to inf")
    for v in range(1, g.n1 + 1):
        if len(g.out_edges(v)) != 2:
            out.append(f"vertex {v} must have out-degree exactly 2")
    return out


def _target_token(t: Target) -> str:
    return str(t)


def format_wire(g: Graph) -> str:
    chunks = "".join(f"({e[0]},{_target_token(e[1])},{e[2]})" for e in g.edges)
    head = f"n1={g.n1} n2={g.n2} edges={chunks}"
    if g.diagram == "corner" and not g.special:
        head = "diagram=corner " + head
    return head


def parse_wire(text: str) -> Graph:
    """Inverse of format_wire, bit-exact on round trips."""
    text = text.strip()
    diagram = "half"
    if text.startswith("diagram=corner"):
        diagram = "corner"
        text = text[len("diagram=corner"):].strip()
    parts = text.split()
    fields = {}
    for p in parts:
        if "=" not in p:
            raise GraphError(f"malformed wire field {p!r}")
        k, v = p.split("=", 1)
        fields[k] = v
    try:
        n1, n2 = int(fields["n1"]), int(fields["n2"])
    except (KeyError, ValueError):
        raise GraphError("wire format needs integer n1= and n2=")
    raw = fields.get("edges", "")
    edges = []
    if raw:
        if not raw.startswith("(") or not raw.endswith(")"):
            raise GraphError(f"malformed edges field {raw!r}")
        for item in raw[1:-1].split(")("):
            bits = item.split(",")
            if len(bits) != 3:
                raise GraphError(f"malformed edge ({item})")
            s_txt, t_txt, c = bits
            try:
                s = int(s_txt)
            except ValueError:
                raise GraphError(f"bad edge source {s_txt!r}")
            t: Target = t_txt if t_txt in ("F1", "F2", "inf") else None
            if t is None:
                try:
                    t = int(t_txt)
                except ValueError:
                    raise GraphError(f"bad edge target {t_txt!r}")
            edges.append((s, t, c))
    edges_t = tuple(edges)
    if any(e[0] == e[1] for e in edges_t):
        diagram = "corner"
    return Graph(n1=n1, n2=n2, edges=edges_t, diagram=diagram)


def _relabel(g: Graph, perm: dict[int, int]) -> str:
    """Serialize g with aerial labels permuted; per-vertex order kept."""
    groups: dict[int, list[str]] = {v: [] for v in range(1, g.n1 + 1)}
    for s, t, c in g.edges:
        nt = perm[t] if isinstance(t, int) else t
        groups[perm[s]].append(f"({_target_token(nt)},{c})")
    body = "|".join(f"{v}:" + "".join(groups[v]) for v in sorted(groups))
    return f"{g.diagram};n1={g.n1};n2={g.n2};{body}"


def canonical_form(g: Graph) -> str:
    """Minimal serialization over relabellings of the aerial vertices."""
    if g.n1 == 0:
        return _relabel(g, {})
    best = None
    for sigma in permutations(range(1, g.n1 + 1)):
        perm = {i + 1: sigma[i] for i in range(g.n1)}
        s = _relabel(g, perm)
        if best is None or s < best:
            best = s
    return best


def aut_count(g: Graph) -> int:
    """Order of the relabelling group fixing the ordered-edge structure."""
    if g.n1 == 0:
        return 1
    own = _relabel(g, {i: i for i in range(1, g.n1 + 1)})
    count = 0
    for sigma in permutations(range(1, g.n1 + 1)):
        perm = {i + 1: sigma[i] for i in range(g.n1)}
        if _relabel(g, perm) == own:
            count += 1
    return count


DEFAULT_ENUM_CAP = 4


def enumerate_q_n2(n: int, colored: bool, cap: int = DEFAULT_ENUM_CAP) -> list[Graph]:
    """All admissible graphs with n aerial and two ground vertices, every
    aerial vertex of out-degree two, deduplicated canonically and sorted."""
    if n < 0:
        raise GraphError("n must be nonnegative")
    if n > cap:
        raise GraphError(f"enumeration bound exceeded: n={n} > cap={cap}")
    if n == 0:
        return [Graph(0, 2, ())]
    colors = (PLUS, MINUS) if colored else (UNCOLORED,)
    seen: dict[str, Graph] = {}
    per_vertex: list[list[tuple]] = []
    for v in range(1, n + 1):
        targets = ["F1", "F2"] + [u for u in range(1, n + 1) if u != v]
        opts = [(t, c) for t in targets for c in colors]
        pairs = [(a, b) for a in opts for b in opts if a != b]
        per_vertex.append(pairs)
    for combo in product(*per_vertex):
        edges = []
        for v, (e1, e2) in enumerate(combo, start=1):
            edges.append((v, e1[0], e1[1]))
            edges.append((v, e2[0], e2[1]))
        try:
            g = Graph(n, 2, tuple(edges))
        except GraphError:
            continue
        seen.setdefault(canonical_form(g), g)
    return [seen[k] for k in sorted(seen)]


def _ordering_key(edge: Edge):
    # fixed convention: ground edge first, then internal by (target, color),
    # the inf edge last
    _, t, c = edge
    if t == "F1":
        return (0, 0, c)
    if t == "inf":
        return (2, 0, c)
    return (1, t, c)


def enumerate_reduction_family(i: int, cap: int = DEFAULT_ENUM_CAP,
                               ) -> dict[str, list[Graph]]:
    """The one-ground colored families with i aerial vertices, one graph per
    geometric shape under the fixed per-vertex edge-order convention.

    Returns {'B': ..., 'W': ..., 'BW': ...} keyed by the (edges-to-F,
    edge-to-inf) signature: B_i derives F i times with an inf edge, W_i
    derives F i times with none, BW_i derives F i-1 times with one.
    """
    if i < 1:
        raise GraphError("i must be >= 1")
    if i > cap:
        raise GraphError(f"enumeration bound exceeded: i={i} > cap={cap}")
    out = {"B": {}, "W": {}, "BW": {}}
    per_vertex = []
    for v in range(1, i + 1):
        opts = [("F1", PLUS), ("inf", MINUS)]
        for u in range(1, i + 1):
            if u != v:
                opts.append((u, PLUS))
                opts.append((u, MINUS))
        pairs = [frozenset((a, b)) for a in opts for b in opts if a != b]
        per_vertex.append(sorted(set(pairs), key=lambda p: sorted(map(repr, p))))
    for combo in product(*per_vertex):
        edges = []
        inf_count = 0
        f_count = 0
        for v, pair in enumerate(combo, start=1):
            for t, c in sorted(pair, key=lambda tc: _ordering_key((v, *tc))):
                edges.append((v, t, c))
                inf_count += t == "inf"
                f_count += t == "F1"
        if inf_count > 1:
            continue
        if inf_count == 1 and f_count == i:
            family = "B"
        elif inf_count == 0 and f_count == i:
            family = "W"
        elif inf_count == 1 and f_count == i - 1:
            family = "BW"
        else:
            continue
        try:
            g = Graph(i, 1, tuple(edges))
        except GraphError:
            continue
        out[family].setdefault(canonical_form(g), g)
    return {k: [v[key] for key in sorted(v)] for k, v in out.items()}


def small_loop() -> Graph:
    """The one-vertex corner graph whose operator is the trace of the adjoint
    action: a minus-colored edge to the ground function plus the loop that
    carries the d arg(z) form."""
    return Graph(1, 1, ((1, "F1", MINUS), (1, 1, UNCOLORED)), diagram="corner")


def aerial_components(g: Graph) -> list[tuple[int, ...]]:
    """Connected components of the aerial vertices (grounds and inf do not
    connect components)."""
    parent = list(range(g.n1 + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, t, _ in g.edges:
        if isinstance(t, int) and t != s:
            ra, rb = find(s), find(t)
            if ra != rb:
                parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for v in range(1, g.n1 + 1):
        groups.setdefault(find(v), []).append(v)
    return [tuple(sorted(vs)) for vs in
            sorted(groups.values(), key=lambda vs: min(vs))]


def induced_subgraph(g: Graph, vertices: tuple[int, ...]) -> Graph:
    """The component on the given aerial vertices, relabelled 1..k with the
    ground slots kept."""
    vmap = {v: k + 1 for k, v in enumerate(sorted(vertices))}
    edges = []
    for s, t, c in g.edges:
        if s in vmap:
            nt = vmap[t] if isinstance(t, int) else t
            edges.append((vmap[s], nt, c))
    return Graph(len(vertices), g.n2, tuple(edges), diagram=g.diagram)
