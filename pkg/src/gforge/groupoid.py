"""Germs of the boundary word action and their shift-offset normal form.

A germ is a word of the action together with a point of its domain, taken
up to agreement on a neighbourhood of that point.  The normal form of a
germ records the image point, the integer length offset, and the source
point; the merge depth is the least shift at which the image and source
tails coincide.  Two presentations define the same germ exactly when
their normal forms agree, which makes the normal form the workable
equality test.

Composition follows function order: compose(d2, d1) applies d1 first.
"""

from .boundary import (
    BoundaryPoint,
    PartialWord,
    admissible_words,
    point_str,
    sample_point,
)
from .graph import CompositionError, GraphError, INFINITE
from .words import ReducedWord


class GroupoidError(Exception):
    pass


class PTGElement:
    """A word of the action paired with a point of its domain."""

    __slots__ = ("graph", "word", "point", "_pw")

    def __init__(self, graph, word, point):
        pw = PartialWord.from_word(graph, word)
        if pw.is_empty_map:
            raise GroupoidError(f"word {word} does not act on this graph")
        if not pw.is_identity and not point.startswith(pw.beta):
            raise GroupoidError(
                f"point {point_str(point)} is outside the domain of {word}")
        self.graph = graph
        self.word = word
        self.point = point
        self._pw = pw

    def image(self):
        return self._pw.act_point(self.point)

    def __eq__(self, other):
        if not isinstance(other, PTGElement):
            return NotImplemented
        return self.word == other.word and self.point == other.point

    def __hash__(self):
        return hash((PTGElement, self.word, self.point))

    def __repr__(self):
        return f"PTGElement({str(self.word)!r}, {point_str(self.point)!r})"


class DRElement:
    """Normal form of a germ: (target, offset, source) plus merge depth.

    The witness condition is target.shift(k) == source.shift(k - offset)
    at k = merge_depth, and merge_depth is the least such k.  Equality
    and hashing use the triple only; the depth is determined by it.
    """

    __slots__ = ("target", "offset", "source", "merge_depth", "_hash")

    def __init__(self, target, offset, source, merge_depth):
        if merge_depth < 0 or merge_depth - offset < 0:
            raise GroupoidError("merge depth must cover the offset")
        if target.shift(merge_depth) != source.shift(merge_depth - offset):
            raise GroupoidError("tails do not merge at the stated depth")
        self.target = target
        self.offset = offset
        self.source = source
        self.merge_depth = merge_depth
        self._hash = hash((DRElement, target, offset, source))

    @classmethod
    def make(cls, target, offset, source, search_cap):
        """Build with the least merge depth, scanning up to search_cap."""
        for k in range(max(offset, 0), search_cap + 1):
            if target.shift(k) == source.shift(k - offset):
                return cls(target, offset, source, k)
        raise GroupoidError("no merge depth within the search cap")

    @classmethod
    def unit(cls, point):
        return cls(point, 0, point, 0)

    @property
    def is_unit(self):
        return self.offset == 0 and self.merge_depth == 0 \
            and self.source == self.target

    def key(self):
        return (point_str(self.target), self.offset, point_str(self.source))

    def __eq__(self, other):
        if not isinstance(other, DRElement):
            return NotImplemented
        return self.target == other.target and self.offset == other.offset \
            and self.source == other.source

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return (f"DRElement({point_str(self.target)!r}, {self.offset}, "
                f"{point_str(self.source)!r}, depth={self.merge_depth})")


def to_dr(element: PTGElement) -> DRElement:
    """Normal form of a presented germ.

    The word's positive part bounds the merge depth, so the scan in make
    always succeeds by that depth.
    """
    pw = element._pw
    if pw.is_identity:
        return DRElement.unit(element.point)
    y = pw.act_point(element.point)
    n = len(pw.alpha) - len(pw.beta)
    return DRElement.make(y, n, element.point, len(pw.alpha))


def to_ptg(g, d: DRElement) -> PTGElement:
    """A word presentation read off the normal form's merge witness."""
    lam = d.target.head(d.merge_depth)
    mu = d.source.head(d.merge_depth - d.offset)
    word = ReducedWord.from_pair(lam, mu)
    return PTGElement(g, word, d.source)


def ptg_equal(s: PTGElement, t: PTGElement) -> bool:
    """Same germ: same source point and matching normal forms."""
    return s.point == t.point and to_dr(s) == to_dr(t)


def compose(d2: DRElement, d1: DRElement) -> DRElement:
    """Apply d1 first.  The merge depths of the factors cap the rescan."""
    if d1.target != d2.source:
        raise CompositionError("germs do not compose: endpoint mismatch")
    cap = max(d2.merge_depth, d1.merge_depth + d2.offset)
    return DRElement.make(d2.target, d2.offset + d1.offset, d1.source, cap)


def inverse(d: DRElement) -> DRElement:
    # k - offset is the least witness on the flipped side: anything
    # smaller would shift back to beat the original minimality
    return DRElement(d.source, -d.offset, d.target, d.merge_depth - d.offset)


def all_boundary_points(g):
    """Every boundary point, for graphs whose boundary is finite.

    That needs finite multiplicities and no cycles; otherwise the space
    is infinite and this raises.
    """
    for e in g.edges.values():
        if e.multiplicity == INFINITE:
            raise GraphError("boundary space is infinite: "
                             f"edge {e.eid} has infinite multiplicity")
    for v in g.vertices:
        for inst in g.continuations(v, copies=1):
            if g.reaches(g.s_of(inst), v):
                raise GraphError("boundary space is infinite: "
                                 f"cycle through {v}")
    pts = []
    for mu in g.paths_up_to(len(g.vertices)):
        if g.is_singular(mu.source_vertex):
            pts.append(BoundaryPoint.finite(g, mu))
    return pts


def full_groupoid(g, word_bound=4):
    """All germs over a finite boundary, deduplicated by normal form."""
    pts = all_boundary_points(g)
    seen = {}
    for w in admissible_words(g, word_bound):
        pw = PartialWord.from_word(g, w)
        for x in pts:
            if pw.is_identity or x.startswith(pw.beta):
                d = to_dr(PTGElement(g, w, x))
                seen.setdefault(d.key(), d)
    return sorted(seen.values(), key=DRElement.key)


def isotropy_elements(elements):
    return [d for d in elements if d.source == d.target and not d.is_unit]


def roundtrip_report(g, word_bound, copies=2):
    """Word -> normal form -> word again, germ by germ.

    One sample point per domain part of every admissible word.  A
    failure records a germ whose normal form changed across the
    roundtrip; distinct counts normal forms seen.
    """
    rep = {"roundtrips": 0, "distinct": 0, "failures": []}
    seen = set()
    for w in admissible_words(g, word_bound, copies=copies):
        pw = PartialWord.from_word(g, w)
        for part in pw.domain().parts:
            x = sample_point(g, part)
            if x is None:
                continue
            s = PTGElement(g, w, x)
            d = to_dr(s)
            s2 = to_ptg(g, d)
            d2 = to_dr(s2)
            rep["roundtrips"] += 1
            if d2 != d or s2.point != s.point:
                rep["failures"].append((str(w), point_str(x)))
            seen.add(d.key())
    rep["distinct"] = len(seen)
    return rep
