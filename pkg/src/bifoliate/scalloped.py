"""Combinatorial model of planes built from fat graphs.

A fat graph here has 4-valent vertices with a cyclic order on half-edge
slots and a twist bit per edge.  A *wedge* (v, i) is the angle between slots
i and i+1 at vertex v; boundary cycles are cyclic sequences of wedges.

Unfolding the universal cover of the underlying graph gives a 4-regular
tree: its nodes are called corners and its edges lozenges.  At each corner
the four lozenge-ends are paired twice, once along Incoming boundary
cycles (s-matching) and once along Outgoing ones (u-matching).
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "INCOMING",
    "OUTGOING",
    "Edge",
    "FatGraph",
    "BoundaryCycle",
    "Violation",
    "MalformedFatGraph",
    "Inadmissible",
    "UnmatchedChains",
    "AccumulationError",
    "Lozenge",
    "LozengeComplex",
    "Chain",
    "Gluing",
    "PlaneComplex",
    "Mismatch",
    "boundary_cycles",
    "validate_admissible",
    "with_admissible_partition",
    "random_fat_graph",
    "is_orientable",
    "euler_characteristic",
    "build_lozenge_complex",
    "scalloped_chains",
    "chain_wedges",
    "build_plane_complex",
    "level_delta",
    "complex_isomorphism",
    "h_point",
    "base_interval",
    "x_infinity_points",
]

INCOMING = "Incoming"
OUTGOING = "Outgoing"


class MalformedFatGraph(ValueError):
    pass


class Inadmissible(ValueError):
    pass


class UnmatchedChains(ValueError):
    pass


class AccumulationError(ValueError):
    """The window contains an accumulation point, so the set there is infinite."""


@dataclass(frozen=True)
class Edge:
    name: str
    ends: tuple[str, str]
    twisted: bool = False


@dataclass(frozen=True)
class BoundaryCycle:
    id: int
    wedges: tuple[tuple[int, int], ...]
    edge_ends: tuple[str, ...]
    edges: tuple[str, ...]


@dataclass(frozen=True)
class Violation:
    kind: str
    where: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.where}"


@dataclass(frozen=True)
class FatGraph:
    """Vertices list half-edge labels in cyclic order.

    ``incoming`` and ``outgoing`` name boundary cycles by one wedge each.
    """

    vertices: tuple[tuple[str, ...], ...]
    edges: tuple[Edge, ...]
    incoming: tuple[tuple[int, int], ...] = ()
    outgoing: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_dict(cls, data: Mapping) -> "FatGraph":
        try:
            vertices = tuple(tuple(str(h) for h in v) for v in data["vertices"])
            edges = tuple(
                Edge(str(e["name"]), (str(e["ends"][0]), str(e["ends"][1])), bool(e.get("twisted", False)))
                for e in data["edges"]
            )
            inc = tuple((int(v), int(i)) for v, i in data.get("incoming", []))
            out = tuple((int(v), int(i)) for v, i in data.get("outgoing", []))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise MalformedFatGraph(f"bad fat graph description: {exc}") from exc
        return cls(vertices, edges, inc, out)

    @classmethod
    def from_json(cls, text: str) -> "FatGraph":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "edges": [{"name": e.name, "ends": list(e.ends), "twisted": e.twisted} for e in self.edges],
            "incoming": [list(w) for w in self.incoming],
            "outgoing": [list(w) for w in self.outgoing],
        }

    # -- structure ------------------------------------------------------------
    def slot(self) -> dict[str, tuple[int, int]]:
        out = {}
        for v, hs in enumerate(self.vertices):
            for i, h in enumerate(hs):
                if h in out:
                    raise MalformedFatGraph(f"half-edge {h!r} appears twice")
                out[h] = (v, i)
        return out

    def partner(self) -> dict[str, tuple[str, Edge]]:
        slots = self.slot()
        out: dict[str, tuple[str, Edge]] = {}
        for e in self.edges:
            for h in e.ends:
                if h not in slots:
                    raise MalformedFatGraph(f"edge {e.name!r} uses unknown half-edge {h!r}")
                if h in out:
                    raise MalformedFatGraph(f"half-edge {h!r} paired twice")
            if e.ends[0] == e.ends[1]:
                raise MalformedFatGraph(f"edge {e.name!r} pairs a half-edge with itself")
            out[e.ends[0]] = (e.ends[1], e)
            out[e.ends[1]] = (e.ends[0], e)
        missing = sorted(set(slots) - set(out))
        if missing:
            raise MalformedFatGraph(f"unpaired half-edges {missing}")
        return out

    def boundary_partition(self) -> dict[int, str]:
        cycles = boundary_cycles(self)
        where = {w: c.id for c in cycles for w in c.wedges}
        part: dict[int, str] = {}
        for kind, wedges in ((INCOMING, self.incoming), (OUTGOING, self.outgoing)):
            for w in wedges:
                if w not in where:
                    raise MalformedFatGraph(f"wedge {w} does not exist")
                cid = where[w]
                if part.get(cid, kind) != kind:
                    part[cid] = "conflict"
                else:
                    part[cid] = kind
        return part


def boundary_cycles(g: FatGraph) -> list[BoundaryCycle]:
    """Trace faces honoring twists.

    A state (h, e) leaves along half-edge h with local orientation e.  Crossing
    an edge flips e when the edge is twisted, and the next half-edge is the
    neighbour of the arrival slot in direction e.  Each boundary is traced
    twice (once per direction); the two orbits visit the same wedges.
    """
    slots = g.slot()
    partner = g.partner()

    def step(state):
        h, e = state
        h2, edge = partner[h]
        e2 = -e if edge.twisted else e
        v, i = slots[h2]
        k = len(g.vertices[v])
        wedge = (v, i if e2 == 1 else (i - 1) % k)
        return (g.vertices[v][(i + e2) % k], e2), wedge, edge.name

    order = {h: n for n, h in enumerate(h for hs in g.vertices for h in hs)}
    states = sorted(((h, e) for h in slots for e in (1, -1)), key=lambda s: (order[s[0]], -s[1]))
    seen = set()
    by_wedges: dict[frozenset, tuple] = {}
    for s in states:
        if s in seen:
            continue
        wedges, ends, names = [], [], []
        cur = s
        while cur not in seen:
            seen.add(cur)
            nxt, w, name = step(cur)
            ends.append(cur[0])
            names.append(name)
            wedges.append(w)
            cur = nxt
        key = frozenset(wedges)
        if key not in by_wedges:
            by_wedges[key] = (tuple(wedges), tuple(ends), tuple(names))
    found = sorted(by_wedges.values(), key=lambda c: min(c[0]))
    return [BoundaryCycle(i, w, e, n) for i, (w, e, n) in enumerate(found)]


def is_orientable(g: FatGraph) -> bool:
    """Whether vertex orientations can be chosen to remove every twist."""
    slots = g.slot()
    flip: dict[int, int] = {}
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(len(g.vertices))}
    for e in g.edges:
        u, v = slots[e.ends[0]][0], slots[e.ends[1]][0]
        adj[u].append((v, int(e.twisted)))
        adj[v].append((u, int(e.twisted)))
    for start in adj:
        if start in flip:
            continue
        flip[start] = 0
        todo = [start]
        while todo:
            u = todo.pop()
            for v, t in adj[u]:
                want = flip[u] ^ t
                if v not in flip:
                    flip[v] = want
                    todo.append(v)
                elif flip[v] != want:
                    return False
    return True


def euler_characteristic(g: FatGraph) -> int:
    return len(g.vertices) - len(g.edges)


def validate_admissible(g: FatGraph) -> list[Violation]:
    """Empty list when admissible."""
    out: list[Violation] = []
    for v, hs in enumerate(g.vertices):
        if len(hs) != 4:
            out.append(Violation("valence", f"vertex {v} has {len(hs)} half-edges"))
    if out:
        return out
    try:
        cycles = boundary_cycles(g)
        part = g.boundary_partition()
    except MalformedFatGraph as exc:
        return [Violation("pairing", str(exc))]
    for c in cycles:
        kind = part.get(c.id)
        if kind is None:
            out.append(Violation("partition", f"boundary cycle {c.id} is not assigned"))
        elif kind == "conflict":
            out.append(Violation("partition", f"boundary cycle {c.id} is both Incoming and Outgoing"))
    kinds = set(part.values())
    for side in (INCOMING, OUTGOING):
        if side not in kinds and "conflict" not in kinds:
            out.append(Violation("partition", f"no {side} boundary cycle"))
    if any(v.kind == "partition" for v in out):
        return out
    for e in g.edges:
        users = [part[c.id] for c in cycles for name in c.edges if name == e.name]
        if sorted(users) != [INCOMING, OUTGOING]:
            out.append(Violation("edge", f"edge {e.name!r} is traversed by {sorted(users)}"))
    return out


def with_admissible_partition(g: FatGraph) -> FatGraph | None:
    """Copy of g with an Incoming/Outgoing partition making it admissible, if any.

    Wedges on either side of a slot must lie on boundaries of opposite type,
    so this is a 2-colouring of boundary cycles.  Each connected class is
    coloured starting from its smallest wedge as Incoming.
    """
    if any(len(v) != 4 for v in g.vertices):
        return None
    cycles = boundary_cycles(g)
    where = {w: c.id for c in cycles for w in c.wedges}
    adj: dict[int, set[int]] = {c.id: set() for c in cycles}
    for v in range(len(g.vertices)):
        for i in range(4):
            a, b = where[(v, i)], where[(v, (i + 1) % 4)]
            if a == b:
                return None
            adj[a].add(b)
            adj[b].add(a)
    colour: dict[int, int] = {}
    for start in sorted(adj):
        if start in colour:
            continue
        colour[start] = 0
        todo = [start]
        while todo:
            x = todo.pop()
            for y in adj[x]:
                if y not in colour:
                    colour[y] = 1 - colour[x]
                    todo.append(y)
                elif colour[y] == colour[x]:
                    return None
    rep = {c.id: min(c.wedges) for c in cycles}
    out = FatGraph(
        g.vertices,
        g.edges,
        tuple(rep[c] for c in sorted(colour) if colour[c] == 0),
        tuple(rep[c] for c in sorted(colour) if colour[c] == 1),
    )
    return out if not validate_admissible(out) else None


def random_fat_graph(rng, n_vertices: int, twist_probability: float = 0.5) -> FatGraph:
    """Random 4-valent ribbon graph with no boundary partition."""
    labels = [f"h{i}" for i in range(4 * n_vertices)]
    rng.shuffle(labels)
    vertices = tuple(tuple(labels[4 * v : 4 * v + 4]) for v in range(n_vertices))
    pool = list(labels)
    rng.shuffle(pool)
    edges = tuple(
        Edge(f"e{i}", (pool[2 * i], pool[2 * i + 1]), rng.random() < twist_probability)
        for i in range(2 * n_vertices)
    )
    return FatGraph(vertices, edges)


# -- lozenge complexes --------------------------------------------------------


@dataclass(frozen=True)
class Lozenge:
    id: int
    edge: str
    ends: tuple[tuple[int, int], tuple[int, int]]  # (corner, slot), inner end first
    parity: int


@dataclass(frozen=True)
class Chain:
    type: str  # "s" or "u"
    lozenges: tuple[int, ...]
    joints: tuple[int, ...]  # corner between consecutive lozenges
    boundary: int  # boundary cycle id of the fat graph


@dataclass
class LozengeComplex:
    graph: FatGraph
    radius: int
    corner_vertex: list[int]  # fat graph vertex under each corner
    corner_depth: list[int]
    corner_slots: list[dict[int, int]]  # slot -> lozenge id
    lozenges: list[Lozenge]
    s_matching: dict[int, tuple[tuple[int, int], tuple[int, int]]]
    u_matching: dict[int, tuple[tuple[int, int], tuple[int, int]]]
    wedge_boundary: dict[tuple[int, int], int]
    partition: dict[int, str]
    root_wedge: tuple[int, int] | None = None

    @property
    def corners(self) -> range:
        return range(len(self.corner_vertex))

    def partner_slot(self, corner: int, slot: int, kind: str) -> int:
        match = self.s_matching if kind == "s" else self.u_matching
        for a, b in match[self.corner_vertex[corner]]:
            if slot == a:
                return b
            if slot == b:
                return a
        raise KeyError(slot)

    def neighbor(self, lozenge: int, end: int, kind: str) -> int | None:
        corner, slot = self.lozenges[lozenge].ends[end]
        return self.corner_slots[corner].get(self.partner_slot(corner, slot, kind))

    def neighbors(self, lozenge: int, kind: str) -> list[int]:
        out = [self.neighbor(lozenge, e, kind) for e in (0, 1)]
        return [x for x in out if x is not None]

    def is_interior(self, corner: int) -> bool:
        return self.corner_depth[corner] < self.radius


def _corner_matchings(g: FatGraph, part: Mapping[int, str], wedge_boundary: Mapping) -> tuple[dict, dict]:
    s_m, u_m = {}, {}
    for v in range(len(g.vertices)):
        pairs = {INCOMING: [], OUTGOING: []}
        for i in range(4):
            pairs[part[wedge_boundary[(v, i)]]].append((i, (i + 1) % 4))
        s_m[v], u_m[v] = tuple(pairs[INCOMING]), tuple(pairs[OUTGOING])
        slots_s = sorted(x for p in s_m[v] for x in p)
        slots_u = sorted(x for p in u_m[v] for x in p)
        if slots_s != [0, 1, 2, 3] or slots_u != [0, 1, 2, 3]:
            raise Inadmissible(f"wedges at vertex {v} do not alternate Incoming/Outgoing")
    return s_m, u_m


def build_lozenge_complex(
    g: FatGraph, radius: int, root_vertex: int = 0, root_wedge: tuple[int, int] | None = None
) -> LozengeComplex:
    """Unfold the universal cover of g's graph out to ``radius`` corners from the root."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    problems = validate_admissible(g)
    if problems:
        raise Inadmissible("; ".join(str(p) for p in problems))
    cycles = boundary_cycles(g)
    wedge_boundary = {w: c.id for c in cycles for w in c.wedges}
    part = g.boundary_partition()
    s_m, u_m = _corner_matchings(g, part, wedge_boundary)
    slots = g.slot()
    partner = g.partner()
    if root_wedge is not None:
        root_vertex = root_wedge[0]

    corner_vertex = [root_vertex]
    corner_depth = [0]
    corner_slots: list[dict[int, int]] = [{}]
    ends: list[tuple[tuple[int, int], tuple[int, int]]] = []
    names: list[str] = []
    queue = deque([(0, None)])  # corner, slot used by the parent lozenge
    while queue:
        c, back = queue.popleft()
        if corner_depth[c] >= radius:
            continue
        v = corner_vertex[c]
        for i in range(4):
            if i == back:
                continue
            h2, edge = partner[g.vertices[v][i]]
            v2, j = slots[h2]
            child = len(corner_vertex)
            corner_vertex.append(v2)
            corner_depth.append(corner_depth[c] + 1)
            corner_slots.append({})
            lid = len(ends)
            ends.append(((c, i), (child, j)))
            names.append(edge.name)
            corner_slots[c][i] = lid
            corner_slots[child][j] = lid
            queue.append((child, j))

    cx = LozengeComplex(
        graph=g,
        radius=radius,
        corner_vertex=corner_vertex,
        corner_depth=corner_depth,
        corner_slots=corner_slots,
        lozenges=[],
        s_matching=s_m,
        u_matching=u_m,
        wedge_boundary=wedge_boundary,
        partition=part,
        root_wedge=root_wedge,
    )
    # 2-colour the adjacency graph from the root lozenge
    provisional = [Lozenge(i, names[i], ends[i], 0) for i in range(len(ends))]
    cx.lozenges = provisional
    parity: dict[int, int] = {}
    for start in range(len(ends)):
        if start in parity:
            continue
        parity[start] = 0
        todo = deque([start])
        while todo:
            a = todo.popleft()
            for b in cx.neighbors(a, "s") + cx.neighbors(a, "u"):
                if b not in parity:
                    parity[b] = 1 - parity[a]
                    todo.append(b)
                elif parity[b] == parity[a]:
                    raise AssertionError("lozenge adjacency is not bipartite")
    cx.lozenges = [Lozenge(i, names[i], ends[i], parity[i]) for i in range(len(ends))]
    return cx


def scalloped_chains(c: LozengeComplex) -> list[Chain]:
    """Maximal paths of lozenges joined only through s- (or only u-) matchings."""
    out: list[Chain] = []
    for kind in ("s", "u"):
        done: set[int] = set()
        for start in range(len(c.lozenges)):
            if start in done:
                continue
            # walk to one end of the path
            first, prev = start, None
            while True:
                nxt = [x for x in c.neighbors(first, kind) if x != prev]
                if not nxt or nxt[0] == start:
                    break
                prev, first = first, nxt[0]
            path, joints = [first], []
            prev = None
            cur = first
            while True:
                step = None
                for e in (0, 1):
                    nb = c.neighbor(cur, e, kind)
                    if nb is not None and nb != prev:
                        step = (nb, c.lozenges[cur].ends[e][0])
                if step is None:
                    break
                prev, cur = cur, step[0]
                path.append(cur)
                joints.append(step[1])
            done.update(path)
            if joints:
                corner = joints[0]
                slot_a = next(s for s, l in c.corner_slots[corner].items() if l == path[0])
                slot_b = c.partner_slot(corner, slot_a, kind)
                bid = c.wedge_boundary[_wedge_of(c.corner_vertex[corner], slot_a, slot_b)]
            else:
                # an isolated lozenge: its single free end names the class
                lz = c.lozenges[path[0]]
                corner, slot_a = lz.ends[0]
                slot_b = c.partner_slot(corner, slot_a, kind)
                bid = c.wedge_boundary[_wedge_of(c.corner_vertex[corner], slot_a, slot_b)]
            out.append(Chain(kind, tuple(path), tuple(joints), bid))
    return out


def _wedge_of(v: int, a: int, b: int) -> tuple[int, int]:
    return (v, a) if (a + 1) % 4 == b else (v, b)


def chain_wedges(c: LozengeComplex, chain: Chain) -> list[tuple[int, int]]:
    """Fat graph wedges crossed at the joints of a chain."""
    out = []
    for k, corner in enumerate(chain.joints):
        la, lb = chain.lozenges[k], chain.lozenges[k + 1]
        sa = next(s for s, l in c.corner_slots[corner].items() if l == la)
        sb = next(s for s, l in c.corner_slots[corner].items() if l == lb)
        out.append(_wedge_of(c.corner_vertex[corner], sa, sb))
    return out


# -- plane complexes ----------------------------------------------------------


@dataclass(frozen=True)
class Gluing:
    tree_a: int
    chain_a: int
    tree_b: int
    chain_b: int
    sign: int  # level change from tree_a to tree_b


@dataclass
class PlaneComplex:
    trees: list[LozengeComplex]
    tree_graph: list[int]  # index into specs for each tree
    gluings: list[Gluing]
    parent: list[int | None] = field(default_factory=list)

    def adjacency(self) -> dict[int, list[tuple[int, int]]]:
        adj: dict[int, list[tuple[int, int]]] = {i: [] for i in range(len(self.trees))}
        for gl in self.gluings:
            adj[gl.tree_a].append((gl.tree_b, gl.sign))
            adj[gl.tree_b].append((gl.tree_a, -gl.sign))
        return adj

    def is_acyclic(self) -> bool:
        n = len(self.trees)
        if len(self.gluings) != n - 1:
            return False
        seen = {0}
        todo = [0]
        adj = self.adjacency()
        while todo:
            a = todo.pop()
            for b, _ in adj[a]:
                if b not in seen:
                    seen.add(b)
                    todo.append(b)
        return len(seen) == n


def _gluing_targets(specs) -> tuple[dict, dict]:
    """out_to_in[(i, b_out)] = (j, b_in) and its inverse, validated."""
    out_to_in, in_from_out = {}, {}
    parts = [g.boundary_partition() for g, _ in specs]
    for i, (g, table) in enumerate(specs):
        for b_out, target in table.items():
            b_out = int(b_out)
            j, b_in = int(target[0]), int(target[1])
            if parts[i].get(b_out) != OUTGOING:
                raise UnmatchedChains(f"graph {i} boundary {b_out} is not Outgoing")
            if j >= len(specs) or parts[j].get(b_in) != INCOMING:
                raise UnmatchedChains(f"target ({j}, {b_in}) is not an Incoming boundary")
            if (j, b_in) in in_from_out:
                raise UnmatchedChains(f"Incoming boundary ({j}, {b_in}) glued twice")
            out_to_in[(i, b_out)] = (j, b_in)
            in_from_out[(j, b_in)] = (i, b_out)
    for i, part in enumerate(parts):
        for b, kind in part.items():
            key = (i, b)
            if kind == OUTGOING and key not in out_to_in:
                raise UnmatchedChains(f"Outgoing boundary {key} has no gluing")
            if kind == INCOMING and key not in in_from_out:
                raise UnmatchedChains(f"Incoming boundary {key} has no gluing")
    return out_to_in, in_from_out


def _chain_through(c: LozengeComplex, chains: Sequence[Chain], kind: str, wedge) -> int:
    """Index of the chain of the given type crossing ``wedge`` at the root corner."""
    v, i = wedge
    la, lb = c.corner_slots[0].get(i), c.corner_slots[0].get((i + 1) % 4)
    for k, ch in enumerate(chains):
        if ch.type == kind and la in ch.lozenges and lb in ch.lozenges:
            return k
    raise AssertionError("glued chain not found at the root corner")


def build_plane_complex(
    specs: Sequence[tuple[FatGraph, Mapping]], depth: int, radius: int = 1
) -> PlaneComplex:
    """Trees of lozenges glued along chains, unfolded breadth-first.

    Each table maps an Outgoing boundary id of its graph to (graph index,
    Incoming boundary id).  An s-chain lifting an Incoming boundary is glued
    to a u-chain lifting the matching Outgoing boundary; the level rises by
    one from the s side to the u side.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if not specs:
        raise ValueError("no fat graphs given")
    if radius < 1 and depth > 0:
        raise ValueError("gluing needs radius >= 1")
    out_to_in, in_from_out = _gluing_targets(specs)
    cycles = [boundary_cycles(g) for g, _ in specs]

    root = build_lozenge_complex(specs[0][0], radius)
    pc = PlaneComplex([root], [0], [], [None])
    chain_cache = [scalloped_chains(root)]
    glued_chain: list[int | None] = [None]
    layer = [0]
    for _ in range(depth):
        nxt = []
        for t in layer:
            tree, gi = pc.trees[t], pc.tree_graph[t]
            for k, ch in enumerate(chain_cache[t]):
                if k == glued_chain[t]:
                    continue
                if ch.type == "s":
                    j, b = in_from_out[(gi, ch.boundary)]
                    other_kind, sign = "u", 1
                else:
                    j, b = out_to_in[(gi, ch.boundary)]
                    other_kind, sign = "s", -1
                wedge = min(cycles[j][b].wedges)
                new = build_lozenge_complex(specs[j][0], radius, root_wedge=wedge)
                new_chains = scalloped_chains(new)
                kb = _chain_through(new, new_chains, other_kind, wedge)
                idx = len(pc.trees)
                pc.trees.append(new)
                pc.tree_graph.append(j)
                pc.parent.append(t)
                chain_cache.append(new_chains)
                glued_chain.append(kb)
                pc.gluings.append(Gluing(t, k, idx, kb, sign))
                nxt.append(idx)
        layer = nxt
    assert pc.is_acyclic()
    return pc


def level_delta(pc: PlaneComplex, T1: int, T2: int) -> int:
    """Sum of gluing signs along the unique path from T1 to T2."""
    adj = pc.adjacency()
    dist = {T1: 0}
    todo = deque([T1])
    while todo:
        a = todo.popleft()
        for b, s in adj[a]:
            if b not in dist:
                dist[b] = dist[a] + s
                todo.append(b)
    assert T2 in dist, "trees are not connected"
    return dist[T2]


@dataclass(frozen=True)
class Mismatch:
    reason: str
    detail: str = ""


def complex_isomorphism(
    c1: LozengeComplex, c2: LozengeComplex, root_pair: tuple[int, int] = (0, 0)
) -> dict[int, int] | Mismatch:
    """Extend a root correspondence lozenge by lozenge, breadth-first.

    Once a lozenge-end is matched at a corner, the s-partner, u-partner and
    opposite slot there are forced, which in turn forces the far corners.
    Both ways of matching the root lozenge's ends are tried.
    """
    if c1.radius != c2.radius:
        raise ValueError(f"radii differ: {c1.radius} vs {c2.radius}")
    if not c1.lozenges or not c2.lozenges:
        if len(c1.lozenges) == len(c2.lozenges):
            return {}
        return Mismatch("shape", "one complex is empty")
    r1, r2 = root_pair
    if c1.lozenges[r1].parity != c2.lozenges[r2].parity:
        return Mismatch("parity", f"roots {r1} and {r2} have different parity")
    last: Mismatch | None = None
    for flip in (False, True):
        found = _extend(c1, c2, r1, r2, flip)
        if isinstance(found, dict):
            return found
        last = found
    assert last is not None
    return last


def _extend(c1: LozengeComplex, c2: LozengeComplex, r1: int, r2: int, flip: bool):
    e2 = c2.lozenges[r2].ends[::-1] if flip else c2.lozenges[r2].ends
    lmap: dict[int, int] = {r1: r2}
    cmap: dict[int, int] = {}
    todo = deque(zip(c1.lozenges[r1].ends, e2))
    while todo:
        (x1, s1), (x2, s2) = todo.popleft()
        if x1 in cmap:
            if cmap[x1] != x2:
                return Mismatch("shape", f"corner {x1} maps inconsistently")
            continue
        cmap[x1] = x2
        sp = (c1.partner_slot(x1, s1, "s"), c2.partner_slot(x2, s2, "s"))
        up = (c1.partner_slot(x1, s1, "u"), c2.partner_slot(x2, s2, "u"))
        op = (c1.partner_slot(x1, up[0], "s"), c2.partner_slot(x2, up[1], "s"))
        for t1, t2 in ((s1, s2), sp, up, op):
            n1, n2 = c1.corner_slots[x1].get(t1), c2.corner_slots[x2].get(t2)
            if (n1 is None) != (n2 is None):
                return Mismatch("shape", f"corner {x1} slot {t1} has no counterpart")
            if n1 is None:
                continue
            if lmap.setdefault(n1, n2) != n2:
                return Mismatch("shape", f"lozenge {n1} maps inconsistently")
            if c1.lozenges[n1].parity != c2.lozenges[n2].parity:
                return Mismatch("parity", f"lozenge {n1}")
            far1 = next(end for end in c1.lozenges[n1].ends if end != (x1, t1))
            far2 = next(end for end in c2.lozenges[n2].ends if end != (x2, t2))
            todo.append((far1, far2))
    if len(lmap) != len(c1.lozenges) or len(set(lmap.values())) != len(c2.lozenges):
        return Mismatch("shape", "lozenge counts differ")
    for a, b in lmap.items():
        for kind in ("s", "u"):
            if sorted(lmap[x] for x in c1.neighbors(a, kind)) != sorted(c2.neighbors(b, kind)):
                return Mismatch("adjacency", f"lozenge {a} ({kind})")
    return lmap


# -- the ordered set X^infinity -----------------------------------------------


def h_point(n: int) -> Fraction:
    """Endpoints of the base intervals: h(0) = 1/3, h(1) = 2/3."""
    if n > 0:
        return 1 - Fraction(1, 2 + n)
    return Fraction(1, 3 + abs(n))


def base_interval(n: int) -> tuple[Fraction, Fraction]:
    return h_point(n), h_point(n + 1)


def _index_range(lo: Fraction, hi: Fraction) -> range:
    """Indices n with h(n) possibly in [lo, hi], for 0 < lo <= hi < 1."""
    neg = int(1 / lo) - 3 + 1  # 1/(3+|n|) >= lo  =>  |n| <= 1/lo - 3
    pos = int(1 / (1 - hi)) - 2 + 1  # 1 - 1/(2+n) <= hi  =>  n <= 1/(1-hi) - 2
    return range(-max(neg, 0) - 1, max(pos, 0) + 2)


def x_infinity_points(k: int, window: tuple) -> list[tuple[Fraction, int]]:
    """Points of X^(0) ... X^(k) in the closed window, with their depth."""
    if k < 0:
        raise ValueError("k must be non-negative")
    lo, hi = (Fraction(x) for x in window)
    if lo > hi:
        raise ValueError("empty window")
    if lo <= 0 or hi >= 1:
        raise AccumulationError("X accumulates at 0 and 1; the window must lie inside (0, 1)")
    out: dict[Fraction, int] = {}

    def visit(a: Fraction, b: Fraction, depth: int) -> None:
        # g(x) = a x + b maps [0, 1] onto the current interval
        l, h = (lo - b) / a, (hi - b) / a
        if h < 0 or l > 1:
            return
        if l <= 0 <= h or l <= 1 <= h:
            raise AccumulationError(
                f"window meets the endpoint {float(b if l <= 0 else a + b):.6g}, "
                f"where depth-{depth} points accumulate"
            )
        for n in _index_range(l, h):
            x = h_point(n)
            if l <= x <= h:
                v = a * x + b
                if v in out:
                    raise AssertionError("depth labels overlap")
                out[v] = depth
        if depth < k:
            for n in _index_range(l, h):
                s, e = base_interval(n)
                if e < l or s > h:
                    continue
                visit(a * (e - s), a * s + b, depth + 1)

    visit(Fraction(1), Fraction(0), 0)
    return sorted(out.items())
