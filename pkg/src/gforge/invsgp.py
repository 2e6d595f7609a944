"""Path-pair inverse semigroup of a graph, truncated to a finite depth.

Elements are pairs (mu, nu) of paths with a common source, together with a
zero.  (mu, nu) stands for the partial substitution sending nu.x to mu.x;
multiplication composes these, with 0 for empty overlap.  Idempotents are the
pairs (mu, mu); on them the order runs opposite to length, so the filters of
the truncated meet-semilattice are exactly the prefix chains of single paths.
"""
from __future__ import annotations

from itertools import product

from .graph import CompositionError, Graph, Path
from .words import ReducedWord


class DomainError(Exception):
    pass


class _Zero:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "0"


ZERO = _Zero()


class SgpElement:
    __slots__ = ("mu", "nu", "_hash")

    def __init__(self, mu: Path, nu: Path):
        if mu.source_vertex != nu.source_vertex:
            raise CompositionError(
                f"pair needs a common source, got {mu.source_vertex} and {nu.source_vertex}")
        self.mu = mu
        self.nu = nu
        self._hash = hash((mu, nu))

    def star(self):
        return SgpElement(self.nu, self.mu)

    @property
    def is_idempotent(self):
        return self.mu == self.nu

    def __eq__(self, other):
        if not isinstance(other, SgpElement):
            return NotImplemented
        return self.mu == other.mu and self.nu == other.nu

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"SgpElement({self.mu!r}, {self.nu!r})"


def sgp_mul(g: Graph, x, y):
    if x is ZERO or y is ZERO:
        return ZERO
    A, B, C, D = x.mu, x.nu, y.mu, y.nu
    if B.startswith(C):
        rest = g.strip_prefix(B, len(C))
        return SgpElement(A, g.concat(D, rest))
    if C.startswith(B):
        rest = g.strip_prefix(C, len(B))
        return SgpElement(g.concat(A, rest), D)
    return ZERO


def sgp_star(x):
    return ZERO if x is ZERO else x.star()


def slat_meet(g: Graph, mu: Path, nu: Path):
    """Meet of the idempotents at mu and nu: the longer of a comparable pair."""
    if mu.startswith(nu):
        return mu
    if nu.startswith(mu):
        return nu
    return None


def sigma(x) -> ReducedWord:
    """The free-group shadow mu.nu^-1 of a nonzero pair."""
    if x is ZERO:
        raise DomainError("sigma is undefined at 0")
    return ReducedWord.from_pair(x.mu, x.nu)


class Character:
    """A filter of the truncated semilattice: the prefixes of one stem."""

    __slots__ = ("stem",)

    def __init__(self, stem: Path):
        self.stem = stem

    def __contains__(self, mu: Path) -> bool:
        return self.stem.startswith(mu)

    def __eq__(self, other):
        if not isinstance(other, Character):
            return NotImplemented
        return self.stem == other.stem

    def __hash__(self):
        return hash(("chr", self.stem))

    def __repr__(self):
        return f"Character({self.stem!r})"


class TruncatedSemilattice:
    """All paths up to a depth, with infinite families capped at `copies`."""

    def __init__(self, g: Graph, depth: int, copies: int = 2):
        self.graph = g
        self.depth = depth
        self.copies = copies
        self.paths = g.paths_up_to(depth, copies)

    def elements(self) -> list[SgpElement]:
        """Every nonzero pair representable inside the truncation."""
        out = []
        for mu, nu in product(self.paths, repeat=2):
            if mu.source_vertex == nu.source_vertex:
                out.append(SgpElement(mu, nu))
        return out

    def idempotents(self) -> list[SgpElement]:
        return [SgpElement(mu, mu) for mu in self.paths]

    def characters(self) -> list[Character]:
        return [Character(mu) for mu in self.paths]

    def max_characters(self) -> list[Character]:
        """Filters with nothing above: stem at full depth or a dead-end source."""
        out = []
        for mu in self.paths:
            if len(mu) == self.depth or not self.graph.receivers(mu.source_vertex):
                out.append(Character(mu))
        return out

    def boundary(self) -> list[Character]:
        return self.max_characters()

    def act_on_character(self, s, chi: Character) -> Character:
        """Apply the substitution s to chi; stem nu.rho goes to mu.rho.

        Raises DomainError off the domain idempotent and when the image stem
        would overflow the truncation depth.
        """
        if s is ZERO:
            raise DomainError("0 acts nowhere")
        rho = chi.stem
        if not rho.startswith(s.nu):
            raise DomainError(f"{chi!r} is not in the domain of {s!r}")
        rest = self.graph.strip_prefix(rho, len(s.nu))
        stem = self.graph.concat(s.mu, rest)
        if len(stem) > self.depth:
            raise DomainError(
                f"image stem of length {len(stem)} escapes depth {self.depth}")
        return Character(stem)


def verify_partial_hom(g: Graph, depth: int, copies: int = 2) -> dict:
    """Exhaustively check sigma over a truncation.

    sigma must turn nonzero products into word products and send only
    idempotents to the empty word.
    """
    ts = TruncatedSemilattice(g, depth, copies)
    els = ts.elements()
    failures = []
    pure_failures = []
    pairs = 0
    for s, t in product(els, repeat=2):
        st = sgp_mul(g, s, t)
        if st is ZERO:
            continue
        pairs += 1
        if sigma(s) * sigma(t) != sigma(st):
            failures.append((s, t))
    for s in els:
        if sigma(s).is_identity and not s.is_idempotent:
            pure_failures.append(s)
    return {
        "elements": len(els),
        "pairs_checked": pairs,
        "failures": failures,
        "idempotent_pure_failures": pure_failures,
    }


def check_boundary_invariance(g: Graph, depth: int, copies: int = 2) -> dict:
    """Push every maximal character through every pair and see whether the
    image is maximal again.

    Images that stay below depth at a source that still receives edges say
    nothing inside a truncation (the cut hides their continuations), so they
    are skipped and counted.  Overflowing images are counted separately.
    """
    ts = TruncatedSemilattice(g, depth, copies)
    maxes = ts.max_characters()
    max_set = set(maxes)
    checked = skips = escapes = 0
    violations = []
    for s in ts.elements():
        for chi in maxes:
            if not chi.stem.startswith(s.nu):
                continue
            checked += 1
            length = len(s.mu) + len(chi.stem) - len(s.nu)
            if length > depth:
                escapes += 1
                continue
            img = ts.act_on_character(s, chi)
            saturated = (len(img.stem) == depth
                         or not g.receivers(img.stem.source_vertex))
            if not saturated:
                skips += 1
            elif img not in max_set:
                violations.append((s, chi))
    return {
        "checked": checked,
        "skips": skips,
        "escapes": escapes,
        "violations": violations,
    }
