"""Associated graph of a surface cut along curves, and the existence decisions.

Vertices are faces, edges are curves.  A curve meeting the same face from
both sides is a loop; a one-sided curve is a twisted loop.  For odd order the
sign of the form must flip across every curve, so existence reduces to
2-colourability; for non-orientable surfaces the colouring has to live on
the orientation cover and be exchanged by the deck involution.
"""
from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .decision import Decision
from .surface import (
    CoveredSurface,
    PresentationError,
    SurfaceMap,
    SurfacePresentation,
    involution_problems,
    is_orientable,
    orientation_double_cover,
    validate,
)

EDGE = "edge"
LOOP = "loop"
TWISTED = "twisted"


@dataclass(frozen=True)
class Edge:
    id: str
    kind: str
    ends: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "ends", tuple(self.ends))

    @property
    def is_loop(self) -> bool:
        return self.kind != EDGE


@dataclass(frozen=True)
class BGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    vertex_labels: Mapping[str, object] = field(default_factory=dict)
    edge_labels: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "vertex_labels", dict(self.vertex_labels))
        object.__setattr__(self, "edge_labels", dict(self.edge_labels))

    def incident(self, v: str) -> list[Edge]:
        return [e for e in self.edges if v in e.ends]

    def signature(self, v: str) -> tuple[int, int, int]:
        kinds = Counter(e.kind for e in self.edges if v in e.ends)
        return kinds[EDGE], kinds[LOOP], kinds[TWISTED]

    def components(self) -> list[tuple[str, ...]]:
        adj = {v: set() for v in self.vertices}
        for e in self.edges:
            for a in e.ends:
                adj[a].update(e.ends)
        seen, out = set(), []
        for v in self.vertices:
            if v in seen:
                continue
            comp, queue = [], deque([v])
            seen.add(v)
            while queue:
                x = queue.popleft()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            out.append(tuple(w for w in self.vertices if w in comp))
        return out


def build_graph(p: SurfacePresentation) -> BGraph:
    edges = []
    for c in p.curves:
        if not c.two_sided:
            edges.append(Edge(c.id, TWISTED, (c.attachments[0][0],)))
        elif c.is_loop:
            edges.append(Edge(c.id, LOOP, (c.attachments[0][0],) * 2))
        else:
            edges.append(Edge(c.id, EDGE, c.faces))
    labels = {f.id: (f.euler_char, len(f.boundary_slots)) for f in p.faces}
    return BGraph(p.face_ids, edges, labels, {c.id: c.sided.value for c in p.curves})


@dataclass
class Colorability:
    """Result of :func:`two_colorable`: ``colors`` or an odd-cycle / loop ``witness``."""

    colors: dict[str, int] | None
    witness: tuple[str, ...] = ()
    witness_kind: str = ""

    def __bool__(self) -> bool:
        return self.colors is not None


def two_colorable(g: BGraph) -> Colorability:
    for e in g.edges:
        if e.is_loop:
            return Colorability(None, (e.id,), e.kind)
    adj: dict[str, list[str]] = {v: [] for v in g.vertices}
    for e in g.edges:
        a, b = e.ends
        adj[a].append(b)
        adj[b].append(a)
    colors: dict[str, int] = {}
    parent: dict[str, str | None] = {}
    for root in g.vertices:
        if root in colors:
            continue
        colors[root] = 1
        parent[root] = None
        queue = deque([root])
        while queue:
            a = queue.popleft()
            for b in adj[a]:
                if b not in colors:
                    colors[b] = -colors[a]
                    parent[b] = a
                    queue.append(b)
                elif colors[b] == colors[a]:
                    return Colorability(None, _odd_cycle(parent, a, b), "odd cycle")
    return Colorability(colors)


def _odd_cycle(parent, a, b) -> tuple[str, ...]:
    def up(x):
        out = [x]
        while parent[x] is not None:
            x = parent[x]
            out.append(x)
        return out

    pa, pb = up(a), up(b)
    on_b = set(pb)
    meet = next(x for x in pa if x in on_b)
    left = pa[: pa.index(meet) + 1]
    right = pb[: pb.index(meet)]
    return tuple(left[::-1] + right)


def is_proper_coloring(g: BGraph, colors: Mapping[str, int]) -> bool:
    if any(e.is_loop for e in g.edges):
        return False
    return all(colors[e.ends[0]] != colors[e.ends[1]] for e in g.edges)


@dataclass(frozen=True)
class GraphIsomorphism:
    vertices: Mapping[str, str]
    edges: Mapping[str, str]


def graph_isomorphisms(g1: BGraph, g2: BGraph, labels: bool = True) -> list[GraphIsomorphism]:
    """All vertex+edge bijections preserving incidence, edge kinds and (optionally) labels.

    Plain backtracking over vertices with label/degree pruning; parallel
    edges and loops in matched positions are then permuted in every way.
    """
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return []
    if Counter(e.kind for e in g1.edges) != Counter(e.kind for e in g2.edges):
        return []

    def vlabel(g, v):
        return (g.vertex_labels.get(v) if labels else None, g.signature(v))

    def elabel(g, e):
        return g.edge_labels.get(e.id) if labels else None

    def mult(g):
        m = Counter()
        for e in g.edges:
            m[(e.kind, frozenset(e.ends))] += 1
        return m

    m1, m2 = mult(g1), mult(g2)
    order = _search_order(g1)
    out: list[GraphIsomorphism] = []

    def extend(vmap: dict[str, str], used: set[str]):
        if len(vmap) == len(order):
            out.extend(_edge_bijections(g1, g2, vmap, elabel))
            return
        v = order[len(vmap)]
        for w in g2.vertices:
            if w in used or vlabel(g1, v) != vlabel(g2, w):
                continue
            ok = True
            for v2, w2 in list(vmap.items()) + [(v, w)]:
                for kind in (EDGE, LOOP, TWISTED):
                    if m1[(kind, frozenset((v, v2)))] != m2[(kind, frozenset((w, w2)))]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                vmap[v] = w
                used.add(w)
                extend(vmap, used)
                del vmap[v]
                used.discard(w)

    extend({}, set())
    return out


def _search_order(g: BGraph) -> list[str]:
    order: list[str] = []
    for comp in g.components():
        start = max(comp, key=lambda v: sum(g.signature(v)))
        queue, seen = deque([start]), {start}
        while queue:
            x = queue.popleft()
            order.append(x)
            for e in g.incident(x):
                for y in e.ends:
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
    return order


def _edge_bijections(g1, g2, vmap, elabel) -> Iterator[GraphIsomorphism]:
    groups1: dict = {}
    groups2: dict = {}
    for e in g1.edges:
        groups1.setdefault((e.kind, frozenset(vmap[a] for a in e.ends)), []).append(e)
    for e in g2.edges:
        groups2.setdefault((e.kind, frozenset(e.ends)), []).append(e)
    choices = []
    for key, es in groups1.items():
        targets = groups2.get(key, [])
        if len(targets) != len(es):
            return
        options = [
            perm
            for perm in itertools.permutations(targets)
            if all(elabel(g1, a) == elabel(g2, b) for a, b in zip(es, perm))
        ]
        if not options:
            return
        choices.append([{a.id: b.id for a, b in zip(es, perm)} for perm in options])
    for combo in itertools.product(*choices):
        emap = {}
        for part in combo:
            emap.update(part)
        yield GraphIsomorphism(dict(vmap), emap)


def presentation_isomorphisms(p: SurfacePresentation, q: SurfacePresentation) -> Iterator[SurfaceMap]:
    """Every combinatorial b-diffeomorphism ``p -> q``, with its side/direction/orientation signs.

    Graph isomorphisms fix where faces and curves go.  On top of that a loop
    may be sent to its image in either direction across, and each connected
    component has two orientation behaviours; all other signs are forced and
    inconsistent choices are discarded.
    """
    g, h = build_graph(p), build_graph(q)
    comps = p.components()
    loops = [c.id for c in p.curves if c.is_loop]
    for iso in graph_isomorphisms(g, h):
        for loop_t in itertools.product((1, -1), repeat=len(loops)):
            t = dict(zip(loops, loop_t))
            for c in p.curves:
                if c.id in t:
                    continue
                d = q.curve(iso.edges[c.id])
                if c.two_sided:
                    t[c.id] = 1 if iso.vertices[c.attachments[0][0]] == d.attachments[0][0] else -1
                else:
                    t[c.id] = 1
            for roots in itertools.product((1, -1), repeat=len(comps)):
                signs = _propagate(p, q, iso, t, [(comp[0], r) for comp, r in zip(comps, roots)])
                if signs is not None:
                    sigma, u = signs
                    yield SurfaceMap(iso.vertices, iso.edges, t, u, sigma)


def _propagate(p, q, iso, t, roots):
    sigma: dict[str, int] = {}
    u: dict[str, int] = {}
    for root, sign in roots:
        sigma[root] = sign
        queue = deque([root])
        while queue:
            a = queue.popleft()
            for c, j in p.curves_at(a):
                d = q.curve(iso.edges[c.id])
                if not c.two_sided:
                    want = sigma[a]
                    if u.setdefault(c.id, want) != want:
                        return None
                    continue
                tt = t[c.id]
                jj = j if tt == 1 else 1 - j
                if iso.vertices[a] != d.attachments[jj][0]:
                    return None
                want = sigma[a] * c.side_sign(j) * tt * d.side_sign(jj)
                if u.setdefault(c.id, want) != want:
                    return None
                b = c.attachments[1 - j][0]
                sb = c.side_sign(1 - j) * tt * want * d.side_sign(1 - jj)
                if b in sigma:
                    if sigma[b] != sb:
                        return None
                else:
                    sigma[b] = sb
                    queue.append(b)
    return sigma, u


def exists_bm(p: SurfacePresentation | CoveredSurface, m: int) -> Decision:
    """Decide whether ``p`` carries a b^m-symplectic form with exactly its curves as critical set."""
    if m < 1:
        raise ValueError(f"order m must be a positive integer, got {m}")
    if isinstance(p, CoveredSurface):
        problems = involution_problems(p.cover, p.deck)
        if problems:
            raise PresentationError("invalid deck involution: " + "; ".join(problems))
        return _exists_nonorientable(p.cover, p.deck, m)
    report = validate(p)
    if not report.ok:
        raise PresentationError("invalid presentation: " + "; ".join(map(str, report.violations)))
    orient = is_orientable(p)
    if orient:
        if m % 2 == 0:
            return Decision(True, {"colors": {f: 1 for f in p.face_ids}}, "", {"route": "orientable, even order"})
        col = two_colorable(build_graph(p))
        if col:
            return Decision(True, {"colors": col.colors}, "", {"route": "orientable, odd order"})
        return Decision.no(
            f"associated graph is not 2-colorable ({col.witness_kind}: {', '.join(col.witness)})",
            route="orientable, odd order",
            obstruction=list(col.witness),
        )
    if m % 2 == 0:
        return Decision.no(
            "surface is not orientable, so no even-order structure exists "
            f"(obstruction: {', '.join(orient.obstruction)})",
            route="non-orientable, even order",
            obstruction=list(orient.obstruction),
        )
    cover, deck = orientation_double_cover(p)
    return _exists_nonorientable(cover, deck, m)


def _exists_nonorientable(cover: SurfacePresentation, deck: SurfaceMap, m: int) -> Decision:
    route = "non-orientable, via orientation cover"
    if m % 2 == 0:
        return Decision.no("surface is not orientable, so no even-order structure exists", route=route)
    found = deck_inverting_colorings(cover, deck)
    details = {"route": route, "candidates_examined": found.candidates}
    if found.base is None:
        return Decision.no(
            f"cover graph is not 2-colorable ({found.base_failure})", obstruction=found.base_witness, **details
        )
    if not found.colorings:
        return Decision.no("deck transformation does not invert colors of any 2-coloring of the cover graph", **details)
    return Decision(True, {"cover_colors": found.colorings[0]}, "", details)


@dataclass
class DeckSearch:
    base: dict[str, int] | None
    colorings: list[dict[str, int]]
    candidates: int
    base_failure: str = ""
    base_witness: list = field(default_factory=list)


def deck_inverting_colorings(cover: SurfacePresentation, deck: SurfaceMap) -> DeckSearch:
    """Search the 2^(#components) colourings of the cover graph for those the deck exchanges."""
    g = build_graph(cover)
    col = two_colorable(g)
    if not col:
        return DeckSearch(None, [], 0, f"{col.witness_kind}: {', '.join(col.witness)}", list(col.witness))
    comps = g.components()
    good, count = [], 0
    for swaps in itertools.product((1, -1), repeat=len(comps)):
        count += 1
        colors = dict(col.colors)
        for comp, s in zip(comps, swaps):
            for v in comp:
                colors[v] *= s
        if all(colors[deck.faces[f]] == -colors[f] for f in cover.face_ids):
            good.append(colors)
    return DeckSearch(col.colors, good, count)


def to_dot(g: BGraph, colors: Mapping[str, int] | None = None, name: str = "bgraph") -> str:
    """Graphviz text; loops are self-arcs, twisted loops dashed, colours as fills."""
    fill = {1: "lightblue", -1: "salmon"}
    lines = [f"graph {_dot_id(name)} {{", "  node [shape=circle, style=filled];"]
    for v in g.vertices:
        attrs = [f"label={_dot_id(v)}"]
        attrs.append(f"fillcolor={fill[colors[v]]}" if colors and v in colors else "fillcolor=white")
        lines.append(f"  {_dot_id(v)} [{', '.join(attrs)}];")
    for e in g.edges:
        a = e.ends[0]
        b = e.ends[-1] if e.kind == EDGE else a
        attrs = [f"label={_dot_id(e.id)}"]
        if e.kind == TWISTED:
            attrs.append("style=dashed")
        lines.append(f"  {_dot_id(a)} -- {_dot_id(b)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_id(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def canonical_label(p: SurfacePresentation, max_faces: int = 7) -> str:
    """Isomorphism-invariant text label of the labelled associated graph.

    Exact (minimum encoding over all face orderings) up to ``max_faces``
    faces; beyond that a degree signature is returned, prefixed ``sig:``.
    """
    g = build_graph(p)
    orient = "o" if is_orientable(p) else "n"
    if len(g.vertices) > max_faces:
        sig = sorted((str(g.vertex_labels[v]), g.signature(v)) for v in g.vertices)
        return f"sig:{orient}:{p.euler_char}:{sig}"
    best = None
    for perm in itertools.permutations(g.vertices):
        pos = {v: i for i, v in enumerate(perm)}
        verts = tuple(g.vertex_labels[v] for v in perm)
        edges = tuple(sorted((e.kind, tuple(sorted(pos[a] for a in e.ends))) for e in g.edges))
        enc = (verts, edges)
        if best is None or enc < best:
            best = enc
    return f"{orient}:{p.euler_char}:{best}"
