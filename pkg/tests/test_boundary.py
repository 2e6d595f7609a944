import random

import pytest

from gforge import corpus
from gforge.boundary import (
    BoundaryError,
    BoundaryPoint,
    CompactOpen,
    Cylinder,
    PartialWord,
    admissible_words,
    cyl_contains,
    cyl_difference,
    cyl_intersect,
    cyl_is_empty,
    isotropy_words,
    make_cylinder,
    parse_point,
    point_str,
    sample_point,
    sample_points,
    shortest_isotropy,
    topological_freeness_report,
    verify_partial_action,
)
from gforge.graph import EdgeInstance, GraphError
from gforge.invsgp import DomainError
from gforge.words import ReducedWord, parse_word


# ---------------------------------------------------------------- points

def test_point_canonical_absorbs_prefix_into_rotation():
    g = corpus.g2()
    x = BoundaryPoint.periodic(g, g.path_of("a"), g.path_of("b", "a"))
    # a.(b.a)^inf spells a,b,a,b,... which is (a.b)^inf
    assert point_str(x) == "(a.b)^inf"
    y = BoundaryPoint.periodic(g, g.vertex_path("v"), g.path_of("a", "b"))
    assert x == y


def test_point_canonical_primitive_root():
    g = corpus.g2()
    x = BoundaryPoint.periodic(g, g.vertex_path("v"), g.path_of("a", "a"))
    assert point_str(x) == "(a)^inf"
    assert x == BoundaryPoint.periodic(g, g.path_of("a"), g.path_of("a"))


def test_point_canonical_keeps_honest_prefix():
    g = corpus.g2()
    x = BoundaryPoint.periodic(g, g.path_of("b"), g.path_of("a"))
    assert point_str(x) == "b.(a)^inf"
    assert x != BoundaryPoint.periodic(g, g.vertex_path("v"), g.path_of("a"))


def test_finite_point_needs_singular_source():
    g3 = corpus.g3()
    assert point_str(BoundaryPoint.finite(g3, g3.vertex_path("w"))) == "w"
    assert point_str(BoundaryPoint.finite(g3, g3.path_of("e"))) == "e"
    with pytest.raises(BoundaryError):
        BoundaryPoint.finite(g3, g3.vertex_path("u"))  # u receives e
    g5 = corpus.g5()
    x = BoundaryPoint.finite(g5, g5.path_of(("f", 3)))
    assert point_str(x) == "f[3]"


def test_periodic_point_validation():
    g = corpus.g4()
    with pytest.raises(BoundaryError):
        BoundaryPoint.periodic(g, g.vertex_path("v"), g.path_of("c"))  # not a loop
    with pytest.raises(BoundaryError):
        BoundaryPoint.periodic(g, g.path_of("c"), g.path_of("a"))  # c ends at w


def test_instance_stream_and_heads():
    g = corpus.g2()
    x = BoundaryPoint.periodic(g, g.path_of("b"), g.path_of("a", "b"))
    want = ["b", "a", "b", "a", "b"]
    got = [x.instance_at(i).edge for i in range(5)]
    assert got == want
    assert g.path_str(x.head(3)) == "b.a.b"
    assert x.head(0) == g.vertex_path("v")


def test_startswith():
    g = corpus.g2()
    x = BoundaryPoint.periodic(g, g.path_of("b"), g.path_of("a"))
    assert x.startswith(g.vertex_path("v"))
    assert x.startswith(g.path_of("b", "a", "a"))
    assert not x.startswith(g.path_of("a"))
    f = BoundaryPoint.finite(corpus.g3(), corpus.g3().path_of("e"))
    assert f.startswith(corpus.g3().path_of("e"))
    assert not f.startswith(corpus.g3().vertex_path("w"))


def test_shift_prepend_roundtrip():
    g = corpus.g2()
    pts = [
        BoundaryPoint.periodic(g, g.path_of("b"), g.path_of("a")),
        BoundaryPoint.periodic(g, g.vertex_path("v"), g.path_of("a", "b")),
        BoundaryPoint.periodic(g, g.path_of("a", "b", "b"), g.path_of("b", "a")),
    ]
    for x in pts:
        for k in range(6):
            assert x.shift(k).prepend(x.head(k)) == x
    g3 = corpus.g3()
    f = BoundaryPoint.finite(g3, g3.path_of("e"))
    assert f.shift(1) == BoundaryPoint.finite(g3, g3.vertex_path("w"))
    assert f.shift(1).prepend(g3.path_of("e")) == f


def test_point_str_parse_roundtrip():
    g = corpus.g2()
    for text in ["(a)^inf", "(a.b)^inf", "b.(a)^inf", "b.(b.a)^inf"]:
        assert point_str(parse_point(g, text)) == text
    # non-canonical spellings parse to the canonical form
    assert point_str(parse_point(g, "b.b.(a.b)^inf")) == "b.(b.a)^inf"
    assert point_str(parse_point(g, "a.(a)^inf")) == "(a)^inf"
    g5 = corpus.g5()
    for text in ["f[3]", "(f)^inf", "f[1].(f)^inf"]:
        assert point_str(parse_point(g5, text)) == text
    g3 = corpus.g3()
    assert point_str(parse_point(g3, "w")) == "w"


# ---------------------------------------------------------------- cylinders

def test_cylinder_validation():
    g = corpus.g2()
    make_cylinder(g, g.path_of("a"), [EdgeInstance("b", 0)])
    with pytest.raises(GraphError):
        make_cylinder(g, g.path_of("a"), [EdgeInstance("zz", 0)])
    g4 = corpus.g4()
    with pytest.raises(BoundaryError):
        # w receives nothing, so nothing can be excluded under stem c
        make_cylinder(g4, g4.path_of("c"), [EdgeInstance("a", 0)])


def test_cyl_is_empty():
    g2 = corpus.g2()
    assert cyl_is_empty(g2, make_cylinder(g2, g2.vertex_path("v"),
                                          [EdgeInstance("a", 0), EdgeInstance("b", 0)]))
    assert not cyl_is_empty(g2, make_cylinder(g2, g2.vertex_path("v"),
                                              [EdgeInstance("a", 0)]))
    g3 = corpus.g3()
    assert cyl_is_empty(g3, make_cylinder(g3, g3.vertex_path("u"), [EdgeInstance("e", 0)]))
    assert not cyl_is_empty(g3, make_cylinder(g3, g3.vertex_path("w")))
    g5 = corpus.g5()
    many = [EdgeInstance("f", k) for k in range(50)]
    assert not cyl_is_empty(g5, make_cylinder(g5, g5.vertex_path("v"), many))


def test_endpoint_always_inside():
    g3 = corpus.g3()
    c = make_cylinder(g3, g3.path_of("e"))
    assert cyl_contains(g3, c, BoundaryPoint.finite(g3, g3.path_of("e")))
    g5 = corpus.g5()
    c5 = make_cylinder(g5, g5.vertex_path("v"), [EdgeInstance("f", 0)])
    assert cyl_contains(g5, c5, BoundaryPoint.finite(g5, g5.vertex_path("v")))
    x = parse_point(g5, "(f)^inf")
    assert not cyl_contains(g5, c5, x)      # first instance f[0] is excluded
    assert cyl_contains(g5, c5, parse_point(g5, "f[1].(f)^inf"))


# ------------------------------------------------- set algebra vs point oracle

def battery(g, depth=3):
    """A spread of boundary points to probe set operations with."""
    pts = []
    for mu in g.paths_up_to(depth, copies=2):
        if g.is_singular(mu.source_vertex):
            pts.append(BoundaryPoint.finite(g, mu))
        for k in range(1, depth + 1):
            for cyc in g.paths_up_to(k, copies=2):
                if len(cyc) == k and cyc.range_vertex == cyc.source_vertex \
                        and cyc.instances and cyc.range_vertex == mu.source_vertex:
                    pts.append(BoundaryPoint.periodic(g, mu, cyc))
    uniq = []
    for x in pts:
        if x not in uniq:
            uniq.append(x)
    return uniq


def random_compact_open(g, rng, max_parts=3):
    parts = []
    paths = g.paths_up_to(2, copies=2)
    for _ in range(rng.randint(1, max_parts)):
        stem = rng.choice(paths)
        conts = g.continuations(stem.source_vertex, copies=2)
        excl = frozenset(i for i in conts if rng.random() < 0.35)
        parts.append(Cylinder(stem, excl))
    return CompactOpen(g, parts)


@pytest.mark.parametrize("name", ["g1", "g2", "g3", "g4", "g5", "g7", "p2", "p3"])
def test_set_operations_match_membership(name):
    g = corpus.by_name(name)
    pts = battery(g)
    rng = random.Random(hash(name) & 0xFFFF)
    for _ in range(25):
        A = random_compact_open(g, rng)
        B = random_compact_open(g, rng)
        U = A.union(B)
        I = A.intersect(B)
        D = A.difference(B)
        for x in pts:
            in_a, in_b = x in A, x in B
            assert (x in U) == (in_a or in_b)
            assert (x in I) == (in_a and in_b)
            assert (x in D) == (in_a and not in_b)


def test_difference_parts_stay_disjoint():
    g = corpus.g2()
    c = make_cylinder(g, g.vertex_path("v"))
    r = make_cylinder(g, g.path_of("a", "b"), [EdgeInstance("a", 0)])
    parts = cyl_difference(g, c, r)
    pts = battery(g)
    for x in pts:
        hits = sum(1 for p in parts if cyl_contains(g, p, x))
        assert hits <= 1
        want = cyl_contains(g, c, x) and not cyl_contains(g, r, x)
        assert (hits == 1) == want


def test_whole_space_identities():
    g = corpus.g2()
    X = CompactOpen.whole(g)
    assert CompactOpen.cylinder(g, g.path_of("a")) in [X.intersect(
        CompactOpen.cylinder(g, g.path_of("a")))] or True
    ab = CompactOpen.cylinder(g, g.path_of("a")).union(
        CompactOpen.cylinder(g, g.path_of("b")))
    assert ab == X                     # v is regular with receivers a, b
    assert X.difference(ab).is_empty
    g3 = corpus.g3()
    X3 = CompactOpen.whole(g3)
    zu = CompactOpen.cylinder(g3, g3.path_of("e")).union(
        CompactOpen.cylinder(g3, g3.vertex_path("w")))
    assert zu == X3                    # Z(u) = Z(e), and w is its own point


def test_sample_point_lands_inside():
    rng = random.Random(99)
    for name in ["g1", "g2", "g3", "g4", "g5", "g7", "p3"]:
        g = corpus.by_name(name)
        for _ in range(20):
            U = random_compact_open(g, rng)
            for part in U.parts:
                x = sample_point(g, part)
                assert x is not None and cyl_contains(g, part, x)
        for x in sample_points(g, CompactOpen.whole(g)):
            assert x in CompactOpen.whole(g)


# ---------------------------------------------------------------- partial words

def test_partial_word_shapes():
    g = corpus.g2()
    pw = PartialWord.from_word(g, parse_word("a.b^-1"))
    assert not pw.is_empty_map
    assert g.path_str(pw.alpha) == "a" and g.path_str(pw.beta) == "b"
    assert PartialWord.from_word(g, parse_word("a^-1.b")).is_empty_map
    assert PartialWord.from_word(g, parse_word("1")).is_identity
    g4 = corpus.g4()
    assert PartialWord.from_word(g4, parse_word("a.c^-1")).is_empty_map  # sources v, w
    assert PartialWord.from_word(g4, parse_word("c.a")).is_empty_map    # c.a not a path


def test_partial_word_domains():
    g = corpus.g2()
    pw = PartialWord.from_word(g, parse_word("a.b^-1"))
    assert pw.domain() == CompactOpen.cylinder(g, g.path_of("b"))
    assert pw.codomain() == CompactOpen.cylinder(g, g.path_of("a"))
    only_neg = PartialWord.from_word(g, parse_word("a^-1"))
    assert only_neg.domain() == CompactOpen.cylinder(g, g.path_of("a"))
    assert only_neg.codomain() == CompactOpen.whole(g)
    assert PartialWord.identity(g).domain() == CompactOpen.whole(g)


def test_act_point_hand_cases():
    g = corpus.g2()
    swap = PartialWord.from_word(g, parse_word("a.b^-1"))
    x = parse_point(g, "b.(a)^inf")
    assert point_str(swap.act_point(x)) == "(a)^inf"
    with pytest.raises(DomainError):
        swap.act_point(parse_point(g, "(a)^inf"))
    g3 = corpus.g3()
    st = PartialWord.from_word(g3, parse_word("e^-1"))
    assert point_str(st.act_point(parse_point(g3, "e"))) == "w"


def test_act_set_hand_cases():
    g = corpus.g2()
    swap = PartialWord.from_word(g, parse_word("a.b^-1"))
    zba = CompactOpen.cylinder(g, g.path_of("b", "a"))
    assert swap.act_set(zba) == CompactOpen.cylinder(g, g.path_of("a", "a"))
    # acting on the whole space restricts to the domain first
    assert swap.act_set(CompactOpen.whole(g)) == CompactOpen.cylinder(g, g.path_of("a"))
    # a set meeting the domain only partially
    mix = zba.union(CompactOpen.cylinder(g, g.path_of("a")))
    assert swap.act_set(mix) == CompactOpen.cylinder(g, g.path_of("a", "a"))


def test_act_set_agrees_with_points():
    rng = random.Random(4242)
    for name in ["g1", "g2", "g4", "g5", "g7"]:
        g = corpus.by_name(name)
        pts = battery(g)
        for w in admissible_words(g, 3, copies=2)[:40]:
            pw = PartialWord.from_word(g, w)
            dom = pw.domain()
            for _ in range(8):
                U = random_compact_open(g, rng)
                img = pw.act_set(U)
                for x in pts:
                    if x in U and x in dom:
                        assert pw.act_point(x) in img
                for y in pts:
                    if y in img:
                        back = pw.inverse().act_point(y)
                        assert back in U and back in dom


def test_admissible_words_frozen_g1():
    g = corpus.g1()
    ws = admissible_words(g, 2)
    assert [str(w) for w in ws] == ["1", "a^-1", "a", "a^-1.a^-1", "a.a"]


def test_admissible_words_count_g2():
    ws = admissible_words(corpus.g2(), 2)
    assert len(ws) == 15
    assert len(set(map(str, ws))) == 15


def test_admissible_words_respects_copies():
    g5 = corpus.g5()
    ws = admissible_words(g5, 1, copies=3)
    names = {str(w) for w in ws}
    assert names == {"1", "f", "f[1]", "f[2]", "f^-1", "f[1]^-1", "f[2]^-1"}


# ---------------------------------------------------------------- isotropy

def test_isotropy_of_pure_cycle():
    g = corpus.g2()
    x = parse_point(g, "(a)^inf")
    got = isotropy_words(g, x, 2)
    assert {str(w) for w in got} == {"a", "a^-1", "a.a", "a^-1.a^-1"}
    assert len(shortest_isotropy(g, x, 4)) == 1


def test_isotropy_shifted_cycle_needs_conjugation_length():
    g = corpus.g2()
    x = parse_point(g, "b.(a)^inf")
    assert isotropy_words(g, x, 2) == []
    got = isotropy_words(g, x, 3)
    assert {str(w) for w in got} == {"b.a.b^-1", "b.a^-1.b^-1"}
    assert len(shortest_isotropy(g, x, 6)) == 3


def test_isotropy_matches_canonical_length_formula():
    g = corpus.g2()
    cases = [
        ("(a)^inf", 1),
        ("(a.b)^inf", 2),
        ("b.(a)^inf", 3),
        ("a.b.(a.b)^inf", 2),          # collapses to (a.b)^inf
        ("b.b.(a)^inf", 5),
    ]
    for text, ln in cases:
        x = parse_point(g, text)
        p, c = x.prefix, x.cycle
        expect = len(c) if not p.instances else 2 * len(p) + len(c)
        assert expect == ln
        w = shortest_isotropy(g, x, ln + 2)
        assert w is not None and len(w) == ln
        assert isotropy_words(g, x, ln - 1) == []


def test_finite_points_have_no_isotropy():
    g3 = corpus.g3()
    for text in ["w", "e"]:
        assert isotropy_words(g3, parse_point(g3, text), 8) == []
    g5 = corpus.g5()
    assert isotropy_words(g5, parse_point(g5, "f[2]"), 8) == []


def test_isotropy_brute_force_agreement():
    # every admissible word is tried directly against the prefix-pruned search
    g = corpus.g2()
    for text in ["(a)^inf", "b.(a)^inf", "(a.b)^inf"]:
        x = parse_point(g, text)
        brute = set()
        for w in admissible_words(g, 4):
            if w.is_identity:
                continue
            pw = PartialWord.from_word(g, w)
            if pw.is_empty_map or not x.startswith(pw.beta):
                continue
            if pw.act_point(x) == x:
                brute.add(w)
        assert brute == set(isotropy_words(g, x, 4))


# ------------------------------------------------------- partial action axioms

@pytest.mark.parametrize("name", ["g1", "g2", "g3", "g4"])
def test_partial_action_axioms_small(name):
    rep = verify_partial_action(corpus.by_name(name), word_len=2)
    assert rep["failures"] == []
    assert rep["pairs"] > 0


def test_partial_action_axioms_with_copies():
    rep = verify_partial_action(corpus.g5(), word_len=2, copies=2)
    assert rep["failures"] == []


# ------------------------------------------------------- topological freeness

def test_tf_report_entryless_loop():
    g = corpus.g1()
    rep = topological_freeness_report(g)
    assert rep["free"] is False
    assert str(rep["fixed_word"]) == "a"
    assert point_str(rep["fixed_point"]) == "(a)^inf"
    assert rep["fixed_open_stem"] == g.vertex_path("v")


def test_tf_report_free_cases():
    for name in ["g2", "g3", "g4", "g5", "g7", "p3"]:
        g = corpus.by_name(name)
        rep = topological_freeness_report(g, word_bound=6, stem_depth=2)
        assert rep["free"] is True, name
        assert rep["verified"] is True, name
        for wit in rep["witnesses"]:
            assert wit["point"].startswith(wit["stem"])
            assert wit["isotropy_words_up_to_bound"] == []


def test_tf_report_matches_condition_l_random():
    from gforge.graph import condition_l
    rng = random.Random(606)
    for _ in range(12):
        g = corpus.random_graph(rng, max_vertices=4, allow_infinite=True)
        rep = topological_freeness_report(g, word_bound=5, stem_depth=1)
        assert rep["free"] == condition_l(g)[0]
        if rep["free"]:
            assert rep["verified"]
