"""Finite directed multigraphs and their path calculus.

An edge e points from its source s(e) to its range r(e).  Paths are written
with the range end first: in mu = m1.m2...mn consecutive instances satisfy
r(m_{i+1}) = s(m_i), so a path is extended by appending edges at the source
end, and r(mu) = r(m1), s(mu) = s(mn).  A vertex doubles as the length-0 path
at itself.

Edges carry a multiplicity (a positive integer or infinity); an edge with
multiplicity m stands for m parallel copies, addressed as instances
(edge id, copy index).
"""
from __future__ import annotations

import json
import math
from typing import Iterable, NamedTuple

INFINITE = math.inf


class GraphError(ValueError):
    pass


class SchemaError(GraphError):
    """Raised when graph JSON violates the input schema."""


class CompositionError(GraphError):
    """Raised when paths or words are glued at mismatched vertices."""


class EdgeInstance(NamedTuple):
    edge: str
    copy: int


class Edge(NamedTuple):
    eid: str
    range_vertex: str
    source_vertex: str
    multiplicity: int | float


class Path:
    """A finite path; length 0 paths are vertices."""

    __slots__ = ("range_vertex", "source_vertex", "instances", "_hash")

    def __init__(self, range_vertex, source_vertex, instances=()):
        self.range_vertex = range_vertex
        self.source_vertex = source_vertex
        self.instances = tuple(instances)
        self._hash = hash((range_vertex, self.instances))

    def __len__(self):
        return len(self.instances)

    def __eq__(self, other):
        if not isinstance(other, Path):
            return NotImplemented
        return (self.range_vertex == other.range_vertex
                and self.instances == other.instances)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.instances:
            return f"Path({self.range_vertex!r})"
        body = ".".join(f"{e}[{c}]" if c else e for e, c in self.instances)
        return f"Path({body!r})"

    def startswith(self, other: "Path") -> bool:
        if len(other) > len(self):
            return False
        if other.range_vertex != self.range_vertex:
            return False
        return self.instances[:len(other)] == other.instances

    @property
    def is_vertex(self):
        return not self.instances


def sort_key(path: Path):
    return (len(path), path.range_vertex, path.instances)


class Graph:
    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge]):
        self.vertices = tuple(dict.fromkeys(vertices))
        vset = set(self.vertices)
        self.edges: dict[str, Edge] = {}
        for e in edges:
            e = Edge(*e)
            if e.eid in self.edges:
                raise SchemaError(f"duplicate edge id {e.eid!r}")
            if e.range_vertex not in vset:
                raise SchemaError(f"edge {e.eid!r}: unknown range {e.range_vertex!r}")
            if e.source_vertex not in vset:
                raise SchemaError(f"edge {e.eid!r}: unknown source {e.source_vertex!r}")
            if e.multiplicity != INFINITE:
                if not isinstance(e.multiplicity, int) or e.multiplicity < 1:
                    raise SchemaError(f"edge {e.eid!r}: bad multiplicity {e.multiplicity!r}")
            self.edges[e.eid] = e
        self._receivers: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        self._senders: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges.values():
            self._receivers[e.range_vertex].append(e)
            self._senders[e.source_vertex].append(e)
        for lst in self._receivers.values():
            lst.sort(key=lambda e: e.eid)
        for lst in self._senders.values():
            lst.sort(key=lambda e: e.eid)

    # -- schema ------------------------------------------------------------

    @classmethod
    def from_json(cls, data) -> "Graph":
        if not isinstance(data, dict):
            raise SchemaError("graph document must be an object")
        verts = data.get("vertices")
        if not isinstance(verts, list) or not all(isinstance(v, str) for v in verts):
            raise SchemaError('"vertices" must be a list of strings')
        if len(set(verts)) != len(verts):
            raise SchemaError("duplicate vertex id")
        raw_edges = data.get("edges", [])
        if not isinstance(raw_edges, list):
            raise SchemaError('"edges" must be a list')
        edges = []
        for i, item in enumerate(raw_edges):
            if not isinstance(item, dict):
                raise SchemaError(f"edges[{i}] must be an object")
            try:
                eid, rv, sv = item["id"], item["range"], item["source"]
            except KeyError as exc:
                raise SchemaError(f"edges[{i}] missing key {exc.args[0]!r}") from None
            mult = item.get("multiplicity", 1)
            if mult == "inf":
                mult = INFINITE
            edges.append(Edge(eid, rv, sv, mult))
        return cls(verts, edges)

    @classmethod
    def loads(cls, text: str) -> "Graph":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
        return cls.from_json(data)

    @classmethod
    def load(cls, path) -> "Graph":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.loads(fh.read())

    def to_json(self) -> dict:
        edges = []
        for e in sorted(self.edges.values(), key=lambda e: e.eid):
            item = {"id": e.eid, "range": e.range_vertex, "source": e.source_vertex}
            if e.multiplicity != 1:
                item["multiplicity"] = "inf" if e.multiplicity == INFINITE else e.multiplicity
            edges.append(item)
        return {"vertices": list(self.vertices), "edges": edges}

    # -- basic structure ---------------------------------------------------

    def receivers(self, v: str) -> list[Edge]:
        """Edges with range v, sorted by id."""
        self._check_vertex(v)
        return self._receivers[v]

    def senders(self, v: str) -> list[Edge]:
        """Edges with source v, sorted by id."""
        self._check_vertex(v)
        return self._senders[v]

    def receiver_count(self, v: str):
        """|r^-1(v)| counted with multiplicity."""
        return sum(e.multiplicity for e in self.receivers(v))

    def is_regular(self, v: str) -> bool:
        n = self.receiver_count(v)
        return 0 < n < INFINITE

    def is_singular(self, v: str) -> bool:
        return not self.is_regular(v)

    def vertex_class(self, v: str) -> str:
        return "regular" if self.is_regular(v) else "singular"

    def _check_vertex(self, v):
        if v not in self._receivers:
            raise GraphError(f"unknown vertex {v!r}")

    def instance(self, eid: str, copy: int = 0) -> EdgeInstance:
        e = self.edges.get(eid)
        if e is None:
            raise GraphError(f"unknown edge {eid!r}")
        if copy < 0 or (e.multiplicity != INFINITE and copy >= e.multiplicity):
            raise GraphError(f"edge {eid!r} has no copy {copy}")
        return EdgeInstance(eid, copy)

    def r_of(self, inst: EdgeInstance) -> str:
        return self.edges[inst.edge].range_vertex

    def s_of(self, inst: EdgeInstance) -> str:
        return self.edges[inst.edge].source_vertex

    def instance_str(self, inst: EdgeInstance) -> str:
        e = self.edges[inst.edge]
        if e.multiplicity == 1 and inst.copy == 0:
            return inst.edge
        return f"{inst.edge}[{inst.copy}]"

    # -- path construction -------------------------------------------------

    def vertex_path(self, v: str) -> Path:
        self._check_vertex(v)
        return Path(v, v)

    def make_path(self, instances: Iterable[EdgeInstance]) -> Path:
        instances = tuple(instances)
        if not instances:
            raise GraphError("make_path needs at least one instance; use vertex_path")
        for inst in instances:
            self.instance(*inst)
        for a, b in zip(instances, instances[1:]):
            if self.r_of(b) != self.s_of(a):
                raise CompositionError(
                    f"{self.instance_str(b)} (range {self.r_of(b)}) does not extend "
                    f"{self.instance_str(a)} (source {self.s_of(a)})")
        return Path(self.r_of(instances[0]), self.s_of(instances[-1]), instances)

    def path_of(self, *ids) -> Path:
        """Convenience: path from edge ids / (id, copy) pairs, or a single vertex id."""
        if len(ids) == 1 and isinstance(ids[0], str) and ids[0] in self._receivers \
                and ids[0] not in self.edges:
            return self.vertex_path(ids[0])
        insts = []
        for item in ids:
            if isinstance(item, str):
                insts.append(self.instance(item))
            else:
                insts.append(self.instance(*item))
        return self.make_path(insts)

    def concat(self, mu: Path, nu: Path) -> Path:
        """mu followed by nu; requires r(nu) = s(mu)."""
        if nu.range_vertex != mu.source_vertex:
            raise CompositionError(
                f"cannot append path with range {nu.range_vertex} at source {mu.source_vertex}")
        if not nu.instances:
            return mu
        if not mu.instances:
            return nu
        return Path(mu.range_vertex, nu.source_vertex, mu.instances + nu.instances)

    def prefix(self, mu: Path, k: int) -> Path:
        if not 0 <= k <= len(mu):
            raise ValueError(f"prefix length {k} out of range for {mu!r}")
        if k == 0:
            return self.vertex_path(mu.range_vertex)
        insts = mu.instances[:k]
        return Path(mu.range_vertex, self.s_of(insts[-1]), insts)

    def strip_prefix(self, mu: Path, k: int) -> Path:
        """The tail of mu after its length-k prefix."""
        if not 0 <= k <= len(mu):
            raise ValueError(f"prefix length {k} out of range for {mu!r}")
        insts = mu.instances[k:]
        if not insts:
            return self.vertex_path(mu.source_vertex)
        return Path(self.r_of(insts[0]), mu.source_vertex, insts)

    def path_str(self, mu: Path) -> str:
        if not mu.instances:
            return mu.range_vertex
        return ".".join(self.instance_str(i) for i in mu.instances)

    # -- enumeration -------------------------------------------------------

    def continuations(self, v: str, copies: int = 1):
        """Edge instances receivable at v; infinite families contribute `copies` copies."""
        out = []
        for e in self.receivers(v):
            n = copies if e.multiplicity == INFINITE else e.multiplicity
            for c in range(n):
                out.append(EdgeInstance(e.eid, c))
        return out

    def paths_up_to(self, depth: int, copies: int = 1) -> list[Path]:
        """All paths of length <= depth, infinite families truncated to `copies` copies.

        Deterministic order: by length, then lexicographically.
        """
        out = [self.vertex_path(v) for v in sorted(self.vertices)]
        frontier = list(out)
        for _ in range(depth):
            nxt = []
            for mu in frontier:
                for inst in self.continuations(mu.source_vertex, copies):
                    ext = Path(mu.range_vertex, self.s_of(inst), mu.instances + (inst,))
                    nxt.append(ext)
            nxt.sort(key=sort_key)
            out.extend(nxt)
            frontier = nxt
        return out

    # -- reachability ------------------------------------------------------

    def reaches(self, w: str, v: str) -> bool:
        """True iff a path mu with r(mu) = w and s(mu) = v exists (length 0 allowed)."""
        self._check_vertex(w)
        self._check_vertex(v)
        if w == v:
            return True
        seen = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for e in self._senders[x]:
                y = e.range_vertex
                if y == w:
                    return True
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return False

    def upstream(self, v: str) -> frozenset:
        """All w with w <- v, i.e. reachable from v along edges source-to-range."""
        seen = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for e in self._senders[x]:
                y = e.range_vertex
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return frozenset(seen)

    def downstream(self, v: str) -> frozenset:
        """All z with v <- z: the vertices a path from v can end at."""
        seen = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for e in self._receivers[x]:
                y = e.source_vertex
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return frozenset(seen)

    def omega_set(self, v: str) -> frozenset:
        """Vertices w != v with no path from v to w (r = w, s = v)."""
        self._check_vertex(v)
        reach = self.upstream(v)
        return frozenset(w for w in self.vertices if w != v and w not in reach)

    def shortest_path(self, w: str, v: str) -> Path | None:
        """Lexicographically least shortest path with r = w, s = v, or None."""
        self._check_vertex(w)
        self._check_vertex(v)
        if w == v:
            return self.vertex_path(w)
        # BFS from the range end, extending at the source
        best = {w: self.vertex_path(w)}
        frontier = [self.vertex_path(w)]
        while frontier:
            nxt = []
            for mu in sorted(frontier, key=sort_key):
                for inst in self.continuations(mu.source_vertex):
                    y = self.s_of(inst)
                    if y in best:
                        continue
                    ext = Path(mu.range_vertex, y, mu.instances + (inst,))
                    best[y] = ext
                    nxt.append(ext)
                    if y == v:
                        return ext
            frontier = nxt
        return None


class PIReport(NamedTuple):
    holds: bool
    breaking: frozenset
    k_witness: tuple | None
    tail_witness: tuple | None


def breaking_vertices(g: Graph) -> frozenset:
    """Infinite receivers left with finitely many, but some, receivers once
    sources in the omega set are discarded."""
    out = []
    for v in g.vertices:
        if g.receiver_count(v) != INFINITE:
            continue
        om = g.omega_set(v)
        n = sum(e.multiplicity for e in g.receivers(v) if e.source_vertex not in om)
        if 0 < n < INFINITE:
            out.append(v)
    return frozenset(out)


def condition_l(g: Graph):
    """Every loop has an entry.

    Returns (True, None) or (False, cycle) where cycle is an entry-less loop.
    A loop has no entry exactly when each of its vertices receives a single
    edge instance, so it suffices to follow unique-receiver chains.
    """
    for v in sorted(g.vertices):
        x = v
        insts = []
        for _ in range(len(g.vertices)):
            if g.receiver_count(x) != 1:
                break
            e = g.receivers(x)[0]
            insts.append(EdgeInstance(e.eid, 0))
            x = e.source_vertex
            if x == v:
                return False, g.make_path(insts)
    return True, None


def first_return_profile(g: Graph, v: str, forbidden_first=frozenset()):
    """Count loops at v that do not pass v in between, saturating at 2.

    Returns (count, loops) with count = min(true count, 2) and that many
    pairwise distinct example loops.  forbidden_first excludes instances as
    the first (range-end) edge.  Deterministic: smallest instances win.

    At the current position only instances whose source can still lead back
    to v matter; if a position ever offers two of them, two loops sharing the
    walked prefix complete via shortest continuations.  Otherwise the walk is
    forced and terminates at v.
    """
    U = g.upstream(v)

    def complete(insts):
        x = g.s_of(insts[-1])
        if x != v:
            rho = g.shortest_path(x, v)
            insts = insts + list(rho.instances)
        return g.make_path(insts)

    x = v
    prefix = []
    first = True
    for _ in range(len(g.vertices) + 1):
        allowed = []
        for e in g.receivers(x):
            if e.source_vertex not in U:
                continue
            limit = 2 + (len(forbidden_first) if first else 0)
            c = 0
            while len(allowed) < 2 and (e.multiplicity == INFINITE or c < e.multiplicity):
                if c > limit:
                    break
                inst = EdgeInstance(e.eid, c)
                if not (first and inst in forbidden_first):
                    allowed.append(inst)
                c += 1
            if len(allowed) >= 2:
                break
        if not allowed:
            return 0, []
        if len(allowed) >= 2:
            return 2, [complete(prefix + [allowed[0]]), complete(prefix + [allowed[1]])]
        prefix.append(allowed[0])
        x = g.s_of(allowed[0])
        first = False
        if x == v:
            return 1, [g.make_path(prefix)]
    raise GraphError("forced first-return walk failed to close")  # unreachable


def condition_k(g: Graph):
    """Every vertex on a loop lies on at least two first-return loops.

    Returns (True, None) or (False, (v, loop)) with the unique first-return
    loop at the offending vertex.
    """
    for v in sorted(g.vertices):
        count, loops = first_return_profile(g, v)
        if count == 1:
            return False, (v, loops[0])
    return True, None


def maximal_tails(g: Graph, max_vertices: int = 16) -> list[frozenset]:
    """All maximal tails: nonempty vertex sets T that are closed under going
    upstream, downward directed, and in which every receiving vertex receives
    from inside T.  Brute force over subsets; guarded by max_vertices.
    """
    verts = sorted(g.vertices)
    if len(verts) > max_vertices:
        raise GraphError(
            f"{len(verts)} vertices exceed the subset-enumeration bound {max_vertices}")
    up = {v: g.upstream(v) for v in verts}
    tails = []
    for mask in range(1, 1 << len(verts)):
        T = frozenset(v for i, v in enumerate(verts) if mask >> i & 1)
        if not all(up[v] <= T for v in T):
            continue
        ok = True
        for v in T:
            rec = g.receivers(v)
            if rec and not any(e.source_vertex in T for e in rec):
                ok = False
                break
        if not ok:
            continue
        for v in T:
            if not ok:
                break
            for w in T:
                if not any(v in up[y] and w in up[y] for y in T):
                    ok = False
                    break
        if ok:
            tails.append(T)
    tails.sort(key=lambda T: (len(T), tuple(sorted(T))))
    return tails


def cycle_vertices_within(g: Graph, T: frozenset) -> frozenset:
    """Vertices of T lying on a loop whose vertices all stay in T."""
    out = []
    for z in sorted(T):
        seen = set()
        stack = [z]
        found = False
        while stack and not found:
            y = stack.pop()
            for e in g.receivers(y):
                w = e.source_vertex
                if w not in T:
                    continue
                if w == z:
                    found = True
                    break
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if found:
            out.append(z)
    return frozenset(out)


def condition_pi(g: Graph, max_vertices: int = 16) -> PIReport:
    """No breaking vertices, two first returns on every loop vertex, and every
    vertex of every maximal tail flowing into a loop inside its tail."""
    brk = breaking_vertices(g)
    k_ok, k_wit = condition_k(g)
    tail_wit = None
    for T in maximal_tails(g, max_vertices):
        cyc = cycle_vertices_within(g, T)
        for v in sorted(T):
            if not (g.downstream(v) & cyc):
                tail_wit = (T, v)
                break
        if tail_wit:
            break
    holds = not brk and k_ok and tail_wit is None
    return PIReport(holds, brk, k_wit, tail_wit)
