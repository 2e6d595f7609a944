"""Paradoxical pairs on boundary pieces.

A paradoxical pair for a compact open set U is two piecewise word maps
with domain U whose images are disjoint subsets of U.  Each copy is a
homeomorph of U inside U, which is exactly what the search below hunts
for and the verifier certifies.

The search works cylinder by cylinder.  At a vertex with infinitely many
receivers it builds two loops through fresh instances of an infinite
family.  At a regular vertex it asks for two first-return loops avoiding
the excluded instances, and when only one or none exists it splits the
cylinder one level deeper and recurses.  Receiverless sources carry a
single point and admit no pair, so the search reports failure there.
"""

from .boundary import (
    CompactOpen,
    Cylinder,
    PartialWord,
    cyl_is_empty,
    set_str,
)
from .graph import Graph, INFINITE, first_return_profile
from .words import ReducedWord


class PiecewiseWord:
    """Finitely many disjoint pieces, each moved by its own word."""

    __slots__ = ("graph", "pieces")

    def __init__(self, graph: Graph, pieces):
        self.graph = graph
        self.pieces = tuple(
            (U if isinstance(U, CompactOpen) else CompactOpen(graph, [U]), w)
            for U, w in pieces)

    def domain(self) -> CompactOpen:
        out = CompactOpen.empty(self.graph)
        for U, _ in self.pieces:
            out = out.union(U)
        return out

    def image(self) -> CompactOpen:
        out = CompactOpen.empty(self.graph)
        for U, w in self.pieces:
            out = out.union(PartialWord.from_word(self.graph, w).act_set(U))
        return out

    def act_set(self, V: CompactOpen) -> CompactOpen:
        out = CompactOpen.empty(self.graph)
        for U, w in self.pieces:
            out = out.union(
                PartialWord.from_word(self.graph, w).act_set(V.intersect(U)))
        return out

    def compose(self, inner: "PiecewiseWord") -> "PiecewiseWord":
        """Apply inner first.  Pieces refine along where images land."""
        g = self.graph
        pieces = []
        for P, u in inner.pieces:
            upw = PartialWord.from_word(g, u)
            img = upw.act_set(P)
            for Q, w in self.pieces:
                hit = img.intersect(Q)
                if hit.is_empty:
                    continue
                back = upw.inverse().act_set(hit)
                pieces.append((back.intersect(P), w * u))
        return PiecewiseWord(g, pieces)

    def __repr__(self):
        inner = ", ".join(f"({set_str(U)}, {w})" for U, w in self.pieces)
        return f"PiecewiseWord([{inner}])"


def _conjugate(stem, loop, g: Graph) -> ReducedWord:
    # stem.loop.stem^-1 moves Z(stem) into Z(stem.loop)
    return ReducedWord.from_pair(g.concat(stem, loop), stem)


def infinite_loops(g: Graph, v: str, count: int, forbidden_first=frozenset()):
    """Loops at v through distinct instances of infinite receiver families.

    Instances are taken in copy order across the families that can lead
    back to v; each loop returns by the least path.  Fewer than count come
    back when the families run short, never raising.
    """
    up = g.upstream(v)
    fams = [e for e in g.receivers(v)
            if e.multiplicity == INFINITE and e.source_vertex in up]
    loops = []
    copy = 0
    while fams and len(loops) < count:
        for e in fams:
            inst = (e.eid, copy)
            if inst in forbidden_first:
                continue
            start = g.make_path([g.instance(e.eid, copy)])
            back = g.shortest_path(e.source_vertex, v)
            loops.append(g.concat(start, back))
            if len(loops) == count:
                break
        copy += 1
    return loops


def _cylinder_pair(g: Graph, cyl: Cylinder, depth: int):
    """Two (piece, word) lists for a paradoxical pair on one cylinder,
    or None when the search bottoms out."""
    if cyl_is_empty(g, cyl):
        return [], []
    v = cyl.stem.source_vertex
    if not g.receivers(v):
        return None                       # a single point cannot split
    if g.receiver_count(v) == INFINITE:
        loops = infinite_loops(g, v, 2, forbidden_first=cyl.excl)
        if len(loops) < 2:
            return None
        wa = _conjugate(cyl.stem, loops[0], g)
        wb = _conjugate(cyl.stem, loops[1], g)
        return [(cyl, wa)], [(cyl, wb)]
    n, loops = first_return_profile(g, v, forbidden_first=cyl.excl)
    if n >= 2:
        wa = _conjugate(cyl.stem, loops[0], g)
        wb = _conjugate(cyl.stem, loops[1], g)
        return [(cyl, wa)], [(cyl, wb)]
    if depth <= 0:
        return None
    side_a, side_b = [], []
    for inst in g.continuations(v):
        if inst in cyl.excl:
            continue
        ext = Cylinder(g.concat(cyl.stem, g.make_path([inst])), frozenset())
        sub = _cylinder_pair(g, ext, depth - 1)
        if sub is None:
            return None
        side_a.extend(sub[0])
        side_b.extend(sub[1])
    return side_a, side_b


def find_witness(g: Graph, U: CompactOpen, depth_cap=None):
    """A paradoxical pair on U, or None when some piece defeats the search."""
    if depth_cap is None:
        depth_cap = len(g.vertices) + 1
    side_a, side_b = [], []
    for cyl in U.parts:
        sub = _cylinder_pair(g, cyl, depth_cap)
        if sub is None:
            return None
        side_a.extend(sub[0])
        side_b.extend(sub[1])
    if not side_a:
        return None                       # U empty: nothing to duplicate
    return (PiecewiseWord(g, side_a), PiecewiseWord(g, side_b))


def verify_witness(g: Graph, U: CompactOpen, maps) -> dict:
    """Certify that the maps carry U onto pairwise disjoint subsets of U."""
    rep = {"maps": len(maps), "pieces": 0, "ok": True, "failures": []}

    def fail(msg):
        rep["ok"] = False
        rep["failures"].append(msg)

    images = []
    for i, m in enumerate(maps):
        rep["pieces"] += len(m.pieces)
        covered = CompactOpen.empty(g)
        for D, w in m.pieces:
            pw = PartialWord.from_word(g, w)
            if pw.is_empty_map:
                fail(f"map {i}: word {w} does not act")
                continue
            if not D.difference(pw.domain()).is_empty:
                fail(f"map {i}: piece {set_str(D)} leaves the domain of {w}")
            if not D.intersect(covered).is_empty:
                fail(f"map {i}: pieces overlap at {set_str(D)}")
            covered = covered.union(D)
        if covered != U:
            fail(f"map {i}: pieces do not tile the set")
        img = m.image()
        if not img.difference(U).is_empty:
            fail(f"map {i}: image escapes the set")
        images.append(img)
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            if not images[i].intersect(images[j]).is_empty:
                fail(f"images {i} and {j} meet")
    return rep


def expand_witness(g: Graph, pair, count: int):
    """Grow a pair into count maps with pairwise disjoint images in U.

    Tree leaves over the pair: b, ab, aab, ..., and a top power of a.
    Disjointness falls out of a's image being disjoint from b's inside U.
    """
    if count < 2:
        raise ValueError("count must be at least 2")
    a, b = pair
    maps = []
    lead = b
    for _ in range(count - 1):
        maps.append(lead)
        lead = a.compose(lead)
    power = a
    for _ in range(count - 2):
        power = a.compose(power)
    maps.append(power)
    return maps


def paradox_report(g: Graph, stem_depth: int = 2, copies: int = 2,
                   depth_cap=None) -> dict:
    """Search every cylinder stem up to stem_depth and certify the finds.

    holds is True when every probed cylinder carries a verified pair,
    False when any refusal or verification failure appears.
    """
    rep = {"holds": True, "stems": 0, "verified": 0,
           "refusals": [], "failures": []}
    for mu in g.paths_up_to(stem_depth, copies=copies):
        rep["stems"] += 1
        U = CompactOpen.cylinder(g, mu)
        pair = find_witness(g, U, depth_cap=depth_cap)
        if pair is None:
            rep["holds"] = False
            rep["refusals"].append(g.path_str(mu))
            continue
        check = verify_witness(g, U, list(pair))
        if check["ok"]:
            rep["verified"] += 1
        else:
            rep["holds"] = False
            rep["failures"].append((g.path_str(mu), check["failures"]))
    return rep
