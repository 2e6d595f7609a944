"""The boundary path space of a graph and the partial action of words on it.

Points are either finite paths ending at a singular vertex or eventually
periodic infinite paths, stored as prefix + primitive cycle in a canonical
form.  Open sets are finite unions of cylinders Z(stem minus exclusions),
where an exclusion set only ever reaches one level past the stem; that is
enough to close the family under intersection and difference without ever
enumerating the receivers of a vertex.
"""
from __future__ import annotations

import re
from typing import NamedTuple

from .graph import EdgeInstance, Graph, GraphError, INFINITE, Path, sort_key
from .invsgp import DomainError
from .words import ReducedWord


class BoundaryError(ValueError):
    pass


# ---------------------------------------------------------------------- points

def _primitive_root(insts):
    n = len(insts)
    for per in range(1, n + 1):
        if n % per == 0 and insts == insts[:per] * (n // per):
            return insts[:per]
    return insts


class BoundaryPoint:
    """A finite path with singular source, or prefix.cycle^inf.

    Canonical shape for the periodic kind: the cycle is primitive and the
    prefix does not end with the cycle's last instance (such a letter is
    absorbed by rotating the cycle), which makes equality literal.
    """

    __slots__ = ("graph", "prefix", "cycle", "_hash")

    def __init__(self, graph: Graph, prefix: Path, cycle: Path | None):
        if cycle is None:
            if graph.is_regular(prefix.source_vertex):
                raise BoundaryError(
                    f"finite path ending at regular vertex {prefix.source_vertex}")
        else:
            if not cycle.instances or cycle.range_vertex != cycle.source_vertex:
                raise BoundaryError("period must be a loop of positive length")
            if prefix.source_vertex != cycle.range_vertex:
                raise BoundaryError("prefix does not reach the loop")
            insts = _primitive_root(cycle.instances)
            pre = prefix.instances
            while pre and pre[-1] == insts[-1]:
                pre = pre[:-1]
                insts = (insts[-1],) + insts[:-1]
            prefix = graph.make_path(pre) if pre else graph.vertex_path(
                graph.r_of(insts[0]))
            cycle = graph.make_path(insts)
        self.graph = graph
        self.prefix = prefix
        self.cycle = cycle
        self._hash = hash((prefix, cycle))

    @classmethod
    def finite(cls, graph, mu: Path):
        return cls(graph, mu, None)

    @classmethod
    def periodic(cls, graph, prefix: Path, cycle: Path):
        return cls(graph, prefix, cycle)

    @property
    def is_finite(self):
        return self.cycle is None

    @property
    def range_vertex(self):
        return self.prefix.range_vertex

    def __len__(self):
        if not self.is_finite:
            raise BoundaryError("infinite point has no length")
        return len(self.prefix)

    def instance_at(self, i: int) -> EdgeInstance:
        if i < len(self.prefix.instances):
            return self.prefix.instances[i]
        if self.cycle is None:
            raise BoundaryError(f"index {i} past the end of a finite point")
        j = (i - len(self.prefix.instances)) % len(self.cycle.instances)
        return self.cycle.instances[j]

    def head(self, n: int) -> Path:
        """The first n instances as a path."""
        if n == 0:
            return self.graph.vertex_path(self.range_vertex)
        return self.graph.make_path([self.instance_at(i) for i in range(n)])

    def startswith(self, mu: Path) -> bool:
        if mu.range_vertex != self.range_vertex:
            return False
        if self.is_finite and len(mu) > len(self.prefix):
            return False
        return all(self.instance_at(i) == inst for i, inst in enumerate(mu.instances))

    def shift(self, k: int) -> "BoundaryPoint":
        """Drop the first k instances."""
        g = self.graph
        if self.is_finite:
            if k > len(self.prefix):
                raise BoundaryError(
                    f"cannot shift {point_str(self)} by {k}: too short")
            return BoundaryPoint(g, g.strip_prefix(self.prefix, k), None)
        pre = self.prefix.instances
        if k <= len(pre):
            rest = pre[k:]
            cyc = self.cycle
        else:
            j = (k - len(pre)) % len(self.cycle.instances)
            rest = ()
            ci = self.cycle.instances
            cyc = g.make_path(ci[j:] + ci[:j]) if j else self.cycle
        prefix = g.make_path(rest) if rest else g.vertex_path(cyc.range_vertex)
        return BoundaryPoint(g, prefix, cyc)

    def prepend(self, alpha: Path) -> "BoundaryPoint":
        g = self.graph
        return BoundaryPoint(g, g.concat(alpha, self.prefix), self.cycle)

    def __eq__(self, other):
        if not isinstance(other, BoundaryPoint):
            return NotImplemented
        return self.prefix == other.prefix and self.cycle == other.cycle

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"BoundaryPoint({point_str(self)!r})"


def _tok(inst: EdgeInstance) -> str:
    return inst.edge if inst.copy == 0 else f"{inst.edge}[{inst.copy}]"


def point_str(x: BoundaryPoint) -> str:
    if x.is_finite:
        if not x.prefix.instances:
            return x.prefix.range_vertex
        return ".".join(_tok(i) for i in x.prefix.instances)
    cyc = ".".join(_tok(i) for i in x.cycle.instances)
    if not x.prefix.instances:
        return f"({cyc})^inf"
    pre = ".".join(_tok(i) for i in x.prefix.instances)
    return f"{pre}.({cyc})^inf"


_POINT = re.compile(r"^(?:(?P<pre>[^()]*?)\.)?\((?P<cyc>[^()]+)\)\^inf$")


def parse_point(g: Graph, text: str) -> BoundaryPoint:
    text = text.strip()
    m = _POINT.match(text)
    if not m:
        if text in g.vertices:
            return BoundaryPoint.finite(g, g.vertex_path(text))
        return BoundaryPoint.finite(g, _parse_path(g, text))
    cyc = _parse_path(g, m.group("cyc"))
    pre = m.group("pre")
    if pre:
        return BoundaryPoint.periodic(g, _parse_path(g, pre), cyc)
    return BoundaryPoint.periodic(g, g.vertex_path(cyc.range_vertex), cyc)


_INST = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\[(\d+)\])?$")


def _parse_path(g: Graph, text: str) -> Path:
    insts = []
    for tok in text.split("."):
        m = _INST.match(tok.strip())
        if not m:
            raise BoundaryError(f"bad path token {tok!r}")
        insts.append(g.instance(m.group(1), int(m.group(2)) if m.group(2) else 0))
    return g.make_path(insts)


def parse_stem(g: Graph, text: str) -> Path:
    """A path or single vertex, as written in set expressions."""
    text = text.strip()
    if text in g.vertices and text not in g.edges:
        return g.vertex_path(text)
    return _parse_path(g, text)


# -------------------------------------------------------------------- cylinders

class Cylinder(NamedTuple):
    stem: Path
    excl: frozenset

    def key(self):
        return (sort_key(self.stem), tuple(sorted(self.excl)))


def make_cylinder(g: Graph, stem: Path, excl=()) -> Cylinder:
    excl = frozenset(excl)
    for inst in excl:
        g.instance(*inst)
        if g.r_of(inst) != stem.source_vertex:
            raise BoundaryError(
                f"exclusion {_tok(inst)} does not attach at {stem.source_vertex}")
    return Cylinder(stem, excl)


def cyl_is_empty(g: Graph, c: Cylinder) -> bool:
    """Empty iff the stem's source is regular and every continuation is barred."""
    v = c.stem.source_vertex
    if g.is_singular(v):
        return False
    for e in g.receivers(v):
        for k in range(e.multiplicity):
            if EdgeInstance(e.eid, k) not in c.excl:
                return False
    return True


def cyl_contains(g: Graph, c: Cylinder, x: BoundaryPoint) -> bool:
    if not x.startswith(c.stem):
        return False
    n = len(c.stem)
    if x.is_finite and len(x) == n:
        return True
    return x.instance_at(n) not in c.excl


def cyl_intersect(g: Graph, a: Cylinder, b: Cylinder):
    """The intersection, again a single cylinder (or None when disjoint)."""
    if a.stem == b.stem:
        return Cylinder(a.stem, a.excl | b.excl)
    if a.stem.startswith(b.stem):
        if a.stem.instances[len(b.stem)] in b.excl:
            return None
        return a
    if b.stem.startswith(a.stem):
        if b.stem.instances[len(a.stem)] in a.excl:
            return None
        return b
    return None


def _extend(g: Graph, stem: Path, inst: EdgeInstance) -> Path:
    return g.make_path(stem.instances + (inst,))


def cyl_difference(g: Graph, c: Cylinder, r: Cylinder) -> list[Cylinder]:
    """c minus r as a disjoint list of cylinders.

    When r sits strictly below c the complement splits along r's spine: what
    leaves the spine at each level, plus what r itself excludes at the bottom.
    """
    mu, F = c
    nu, G = r
    if nu == mu:
        return [Cylinder(_extend(g, mu, x), frozenset()) for x in sorted(G - F)]
    if nu.startswith(mu):
        etas = nu.instances[len(mu):]
        if etas[0] in F:
            return [c]
        parts = [Cylinder(mu, F | {etas[0]})]
        for j in range(1, len(etas)):
            parts.append(Cylinder(g.prefix(nu, len(mu) + j), frozenset({etas[j]})))
        for x in sorted(G):
            parts.append(Cylinder(_extend(g, nu, x), frozenset()))
        return parts
    if mu.startswith(nu):
        if mu.instances[len(nu)] in G:
            return [c]
        return []
    return [c]


class CompactOpen:
    """A finite union of cylinders, kept deduplicated and empty-free."""

    __slots__ = ("graph", "parts")

    def __init__(self, graph: Graph, parts=()):
        self.graph = graph
        keep = []
        seen = set()
        for p in parts:
            if p in seen or cyl_is_empty(graph, p):
                continue
            seen.add(p)
            keep.append(p)
        keep.sort(key=Cylinder.key)
        self.parts = tuple(keep)

    @classmethod
    def empty(cls, g):
        return cls(g, ())

    @classmethod
    def whole(cls, g):
        return cls(g, [Cylinder(g.vertex_path(v), frozenset()) for v in sorted(g.vertices)])

    @classmethod
    def cylinder(cls, g, stem: Path, excl=()):
        return cls(g, [make_cylinder(g, stem, excl)])

    @property
    def is_empty(self):
        return not self.parts

    def __contains__(self, x: BoundaryPoint):
        return any(cyl_contains(self.graph, p, x) for p in self.parts)

    def union(self, other: "CompactOpen") -> "CompactOpen":
        return CompactOpen(self.graph, self.parts + other.parts)

    def intersect(self, other: "CompactOpen") -> "CompactOpen":
        out = []
        for a in self.parts:
            for b in other.parts:
                ab = cyl_intersect(self.graph, a, b)
                if ab is not None:
                    out.append(ab)
        return CompactOpen(self.graph, out)

    def difference(self, other: "CompactOpen") -> "CompactOpen":
        parts = list(self.parts)
        for r in other.parts:
            nxt = []
            for c in parts:
                nxt.extend(cyl_difference(self.graph, c, r))
            parts = [p for p in nxt if not cyl_is_empty(self.graph, p)]
        return CompactOpen(self.graph, parts)

    def __eq__(self, other):
        if not isinstance(other, CompactOpen):
            return NotImplemented
        if self.parts == other.parts:
            return True
        return self.difference(other).is_empty and other.difference(self).is_empty

    def __hash__(self):
        raise TypeError("compact opens compare semantically; do not hash")

    def __repr__(self):
        return f"CompactOpen({set_str(self)!r})"


def set_str(U: CompactOpen) -> str:
    if not U.parts:
        return "{}"
    out = []
    for stem, excl in U.parts:
        s = stem.range_vertex if not stem.instances else ".".join(
            _tok(i) for i in stem.instances)
        if excl:
            s = f"Z({s} - {{{','.join(_tok(i) for i in sorted(excl))}}})"
        else:
            s = f"Z({s})"
        out.append(s)
    return " + ".join(out)


# ---------------------------------------------------------------- partial words

class PartialWord:
    """The partial transformation of the boundary attached to a reduced word.

    Only words shaped alpha.beta^-1 with composable pieces and matching
    sources move anything; every other word has empty domain.  The empty word
    is the identity on the whole space.
    """

    __slots__ = ("graph", "alpha", "beta", "_word")

    def __init__(self, graph: Graph, alpha: Path | None, beta: Path | None, word=None):
        self.graph = graph
        self.alpha = alpha
        self.beta = beta
        self._word = word

    @classmethod
    def identity(cls, graph):
        return cls(graph, None, None, ReducedWord())

    @classmethod
    def from_pair(cls, graph, alpha: Path, beta: Path):
        if alpha.source_vertex != beta.source_vertex:
            raise BoundaryError("pair needs a common source")
        return cls(graph, alpha, beta)

    @classmethod
    def from_word(cls, graph, word: ReducedWord) -> "PartialWord":
        if word.is_identity:
            return cls.identity(graph)
        split = word.positive_negative_split()
        if split is None:
            return cls(graph, None, None, word)
        pos, neg = split
        try:
            alpha = graph.make_path(pos) if pos else None
            beta = graph.make_path(neg) if neg else None
        except GraphError:
            return cls(graph, None, None, word)
        if alpha is None:
            alpha = graph.vertex_path(beta.source_vertex)
        if beta is None:
            beta = graph.vertex_path(alpha.source_vertex)
        if alpha.source_vertex != beta.source_vertex:
            return cls(graph, None, None, word)
        return cls(graph, alpha, beta, word)

    @property
    def is_identity(self):
        return self.alpha is None and self.beta is None and self._word is not None \
            and self._word.is_identity

    @property
    def is_empty_map(self):
        return self.alpha is None and not self.is_identity

    def word(self) -> ReducedWord:
        if self._word is not None:
            return self._word
        return ReducedWord.from_pair(self.alpha, self.beta)

    def inverse(self) -> "PartialWord":
        if self.is_identity:
            return self
        if self.is_empty_map:
            return PartialWord(self.graph, None, None, self.word().inverse())
        return PartialWord(self.graph, self.beta, self.alpha)

    def domain(self) -> CompactOpen:
        if self.is_identity:
            return CompactOpen.whole(self.graph)
        if self.is_empty_map:
            return CompactOpen.empty(self.graph)
        return CompactOpen.cylinder(self.graph, self.beta)

    def codomain(self) -> CompactOpen:
        return self.inverse().domain()

    def act_point(self, x: BoundaryPoint) -> BoundaryPoint:
        if self.is_identity:
            return x
        if self.is_empty_map or not x.startswith(self.beta):
            raise DomainError(f"{point_str(x)} is not in the domain of {self.word()}")
        if x.is_finite and len(x) < len(self.beta):
            raise DomainError(f"{point_str(x)} is shorter than the stripped prefix")
        return x.shift(len(self.beta)).prepend(self.alpha)

    def act_set(self, U: CompactOpen) -> CompactOpen:
        """The image of U intersected with the domain."""
        g = self.graph
        if self.is_identity:
            return U
        if self.is_empty_map:
            return CompactOpen.empty(g)
        out = []
        for stem, F in U.parts:
            if stem.startswith(self.beta):
                rest = g.strip_prefix(stem, len(self.beta))
                out.append(Cylinder(g.concat(self.alpha, rest), F))
            elif self.beta.startswith(stem) and len(self.beta) > len(stem):
                if self.beta.instances[len(stem)] not in F:
                    out.append(Cylinder(self.alpha, frozenset()))
        return CompactOpen(g, out)

    def __repr__(self):
        return f"PartialWord({str(self.word())!r})"


def sample_point(g: Graph, cyl: Cylinder):
    """A concrete boundary point of the cylinder, or None when it is empty.

    Deterministic: extends the stem by least allowed instances until a
    singular vertex stops the path or a vertex repeats and closes a loop.
    """
    if cyl_is_empty(g, cyl):
        return None
    stem, excl = cyl
    v = stem.source_vertex
    if g.is_singular(v):
        return BoundaryPoint.finite(g, stem)
    appended = []
    seen_at = {v: 0}
    x = v
    while True:
        step = None
        for inst in g.continuations(x, copies=len(excl) + 1):
            if not appended and inst in excl:
                continue
            step = inst
            break
        appended.append(step)
        x = g.s_of(step)
        if g.is_singular(x):
            return BoundaryPoint.finite(g, g.make_path(stem.instances + tuple(appended)))
        if x in seen_at:
            k = seen_at[x]
            pre = stem.instances + tuple(appended[:k])
            cycle = g.make_path(tuple(appended[k:]))
            prefix = g.make_path(pre) if pre else g.vertex_path(cycle.range_vertex)
            return BoundaryPoint.periodic(g, prefix, cycle)
        seen_at[x] = len(appended)


def sample_points(g: Graph, U: CompactOpen) -> list[BoundaryPoint]:
    out = []
    for part in U.parts:
        x = sample_point(g, part)
        if x is not None and x not in out:
            out.append(x)
    return out


def probe_points(g: Graph, depth: int = 3, copies: int = 2) -> list[BoundaryPoint]:
    """A deterministic spread of boundary points for checks to probe.

    Every finite point whose path fits in `depth`, and every prefix-cycle
    combination whose total length fits in it.
    """
    paths = g.paths_up_to(depth, copies=copies)
    cycles = [c for c in paths
              if c.instances and c.range_vertex == c.source_vertex]
    pts = []
    for mu in paths:
        if g.is_singular(mu.source_vertex):
            pts.append(BoundaryPoint.finite(g, mu))
        for cyc in cycles:
            if len(mu) + len(cyc) <= depth \
                    and cyc.range_vertex == mu.source_vertex:
                pts.append(BoundaryPoint.periodic(g, mu, cyc))
    out = []
    seen = set()
    for x in pts:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


# --------------------------------------------------------------- word calculus

def admissible_words(g: Graph, bound: int, copies: int = 2) -> list[ReducedWord]:
    """All words alpha.beta^-1 from composable pairs with a common source and
    total length at most the bound, the empty word included.

    Pairs sharing a last instance are skipped: their word already arises from
    the shorter pair.
    """
    paths = g.paths_up_to(bound, copies)
    seen = {ReducedWord()}
    out = [ReducedWord()]
    for alpha in paths:
        for beta in paths:
            if len(alpha) + len(beta) > bound:
                continue
            if alpha.source_vertex != beta.source_vertex:
                continue
            if alpha.instances and beta.instances \
                    and alpha.instances[-1] == beta.instances[-1]:
                continue
            w = ReducedWord.from_pair(alpha, beta)
            if w not in seen:
                seen.add(w)
                out.append(w)
    out.sort(key=ReducedWord.sort_key)
    return out


def isotropy_words(g: Graph, x: BoundaryPoint, bound: int) -> list[ReducedWord]:
    """Nontrivial words of pair length <= bound fixing x.

    A fixing word must read two head paths of x against each other, so only
    head pairs need checking.
    """
    max_i = len(x.prefix) if x.is_finite else bound
    heads = [x.head(i) for i in range(min(bound, max_i) + 1)]
    found = set()
    for j, beta in enumerate(heads):
        for i, alpha in enumerate(heads):
            if i == j or i + j > bound:
                continue
            if alpha.source_vertex != beta.source_vertex:
                continue
            pw = PartialWord.from_pair(g, alpha, beta)
            if pw.act_point(x) == x:
                found.add(pw.word())
    return sorted(found, key=ReducedWord.sort_key)


def shortest_isotropy(g: Graph, x: BoundaryPoint, bound: int):
    ws = isotropy_words(g, x, bound)
    return ws[0] if ws else None


def verify_partial_action(g: Graph, word_len: int = 3, copies: int = 2) -> dict:
    """Check the partial action laws on all reduced words up to word_len.

    The empty word must act as the identity everywhere, inverses must undo,
    and composing two word maps must restrict the map of the product word.
    """
    letters = []
    for v in sorted(g.vertices):
        for inst in g.continuations(v, copies):
            letters.append((inst, 1))
            letters.append((inst, -1))
    words = [ReducedWord()]
    seen = {ReducedWord()}
    frontier = [ReducedWord()]
    for _ in range(word_len):
        nxt = []
        for u in frontier:
            for let in letters:
                w = u * ReducedWord([let])
                if w not in seen and len(w) > len(u):
                    seen.add(w)
                    nxt.append(w)
        words.extend(nxt)
        frontier = nxt
    maps = {w: PartialWord.from_word(g, w) for w in words}

    report = {"words": len(words), "pairs": 0, "failures": []}
    ident = maps[ReducedWord()]
    if not ident.is_identity or ident.domain() != CompactOpen.whole(g):
        report["failures"].append(("identity", ReducedWord()))
    for w, pw in maps.items():
        dom = pw.domain()
        back = pw.inverse().act_set(pw.act_set(dom))
        if back != dom:
            report["failures"].append(("inverse", w))
    for u in words:
        for w in words:
            pu, pw = maps[u], maps[w]
            im_w = pw.act_set(pw.domain())
            mid = im_w.intersect(pu.domain())
            D = pw.inverse().act_set(mid)
            puw = PartialWord.from_word(g, u * w)
            report["pairs"] += 1
            if not D.difference(puw.domain()).is_empty:
                report["failures"].append(("domain", u, w))
                continue
            left = pu.act_set(pw.act_set(D))
            right = puw.act_set(D)
            if left != right:
                report["failures"].append(("composition", u, w))
                continue
            for x in sample_points(g, D):
                if pu.act_point(pw.act_point(x)) != puw.act_point(x):
                    report["failures"].append(("pointwise", u, w, x))
    return report


# --------------------------------------------------------- topological freeness

def topological_freeness_report(g: Graph, word_bound: int = 8,
                                stem_depth: int = 2, copies: int = 2) -> dict:
    """Decide whether some word fixes a whole nonempty open set.

    An entry-less loop freezes the vertex cylinder at its base to a single
    point, which the loop word fixes; that is the only way failure happens.
    Otherwise every stem cylinder gets an explicit point whose isotropy stays
    out of reach of the word bound: a finite point when the flow can reach a
    singular vertex, else an eventually periodic point whose primitive period
    is pumped past the bound.
    """
    from .graph import condition_l, first_return_profile

    l_holds, cyc = condition_l(g)
    if not l_holds:
        base = cyc.range_vertex
        x = BoundaryPoint.periodic(g, g.vertex_path(base), cyc)
        word = ReducedWord.from_path(cyc)
        pw = PartialWord.from_word(g, word)
        for inst in cyc.instances:
            assert g.receiver_count(g.r_of(inst)) == 1
        assert pw.act_point(x) == x
        return {
            "free": False,
            "entryless_loop": cyc,
            "fixed_word": word,
            "fixed_open_stem": g.vertex_path(base),
            "fixed_point": x,
        }

    witnesses = []
    for stem in g.paths_up_to(stem_depth, copies):
        v = stem.source_vertex
        down = sorted(g.downstream(v))
        x = None
        for w in down:
            if g.is_singular(w):
                rho = g.shortest_path(v, w)
                x = BoundaryPoint.finite(g, g.concat(stem, rho))
                break
        if x is None:
            for y in down:
                count, loops = first_return_profile(g, y)
                if count >= 2:
                    la, lb = loops
                    m = word_bound // len(la) + 1
                    c = la
                    for _ in range(m - 1):
                        c = g.concat(c, la)
                    c = g.concat(c, lb)
                    rho = g.shortest_path(v, y)
                    x = BoundaryPoint.periodic(g, g.concat(stem, rho), c)
                    break
        if x is None:
            raise GraphError(
                f"no aperiodic point reachable from {v} although every loop has an entry")
        leftover = isotropy_words(g, x, word_bound)
        witnesses.append({
            "stem": stem,
            "point": x,
            "isotropy_words_up_to_bound": leftover,
        })
    ok = all(not w["isotropy_words_up_to_bound"] for w in witnesses)
    return {
        "free": True,
        "verified": ok,
        "word_bound": word_bound,
        "witnesses": witnesses,
    }
