"""Core simplicial machinery against brute-force combinatorial oracles."""

from itertools import product as iproduct

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcatkit.simplicial import (
    SimplexExpr,
    boundary,
    compose_maps,
    compose_words,
    empty_sset,
    enumerate_maps,
    expr,
    face_through_word,
    find_isomorphism,
    horn,
    identity_map,
    normalize_word,
    parse_expr,
    product,
    product_assoc,
    product_swap,
    product_unit_left,
    product_unit_right,
    sset_from_text,
    sset_to_text,
    standard_simplex,
    valid_words,
    weak_seq_to_word,
)


def monotone_maps(m, n):
    """Oracle: all weakly monotone maps [m] -> [n] by brute force."""
    return [t for t in iproduct(range(n + 1), repeat=m + 1)
            if all(t[i] <= t[i + 1] for i in range(m))]


def surjective_monotone(m, n):
    return [t for t in monotone_maps(m, n) if set(t) == set(range(n + 1))]


# -- degeneracy words -------------------------------------------------------

def word_to_surjection(word, n):
    """Oracle: evaluate a degeneracy word as a monotone surjection [n] -> [m]."""
    def sigma(j, k):  # collapse j, j+1 in [k]
        return [t if t <= j else t - 1 for t in range(k + 1)]

    seq = list(range(n + 1))
    k = n
    for j in reversed(word):
        # applying s_j last when reading operators means precomposing first
        pass
    # operator word (i1,...,ik) acts on presheaves by x . (sigma_{ik} ∘ ... ∘ sigma_{i1})
    total = list(range(n + 1))
    cur = n
    for j in word:  # leftmost operator = innermost map applied to indices last
        s = sigma(j, cur)
        total = [s[t] for t in total]
        cur -= 1
    return tuple(total)


class TestWords:
    def test_normal_form_counts_surjections(self):
        for n in range(5):
            for m in range(n + 1):
                assert len(valid_words(n, m)) == len(surjective_monotone(n, m))

    def test_words_encode_distinct_surjections(self):
        for n in range(5):
            for m in range(n + 1):
                seen = {word_to_surjection(w, n) for w in valid_words(n, m)}
                assert len(seen) == len(valid_words(n, m))

    @given(st.lists(st.integers(min_value=0, max_value=6), max_size=6))
    def test_normalize_idempotent(self, seq):
        once = normalize_word(seq)
        assert normalize_word(once) == once
        assert all(once[i] > once[i + 1] for i in range(len(once) - 1))

    @given(st.lists(st.integers(min_value=0, max_value=4), max_size=4),
           st.lists(st.integers(min_value=0, max_value=4), max_size=4))
    def test_compose_matches_concatenation(self, u, v):
        assert compose_words(tuple(u), normalize_word(v)) == normalize_word(tuple(u) + tuple(v))

    def test_face_cancellation(self):
        # d_1 s_0 = id and d_0 s_0 = id
        assert face_through_word(1, (0,)) == ((), None)
        assert face_through_word(0, (0,)) == ((), None)
        # d_0 s_1 = s_0 d_0
        assert face_through_word(0, (1,)) == ((0,), 0)

    def test_expr_tokens_round_trip(self):
        e = expr("ab", (2, 0))
        assert parse_expr(e.token()) == e
        assert parse_expr("v").token() == "v"


# -- standard simplices, horns, boundaries ----------------------------------

class TestStandardObjects:
    def test_delta2_counts(self):
        s = standard_simplex(2, 3)
        assert [len(s.nondeg(n)) for n in range(4)] == [3, 3, 1, 0]

    def test_delta0(self):
        s = standard_simplex(0, 2)
        assert [len(s.nondeg(n)) for n in range(3)] == [1, 0, 0]

    def test_total_level_counts_match_monotone_oracle(self):
        # total m-simplices of delta n = monotone maps [m] -> [n]
        for n in range(4):
            s = standard_simplex(n, 3)
            for m in range(4):
                assert s.total_count(m) == len(monotone_maps(m, n))

    def test_horn21_shape(self):
        h = horn(2, 1, 2)
        assert [len(h.nondeg(n)) for n in range(3)] == [3, 2, 0]
        assert set(h.nondeg(1)) == {"01", "12"}

    def test_horn10_is_vertex_zero(self):
        # generated by the face d_1, whose image is vertex 0
        h = horn(1, 0, 2)
        assert h.nondeg(0) == ("0",)
        assert not h.nondeg(1)

    def test_boundary2_shape(self):
        b = boundary(2, 2)
        assert [len(b.nondeg(n)) for n in range(3)] == [3, 3, 0]

    def test_bad_arguments_rejected(self):
        with pytest.raises(ValueError):
            standard_simplex(-1, 2)
        with pytest.raises(ValueError):
            standard_simplex(2, 1)
        with pytest.raises(ValueError):
            horn(2, 3, 2)

    def test_face_conventions(self):
        # d_0 of the edge of delta 1 is the final vertex
        s = standard_simplex(1, 3)
        e = expr("01")
        assert s.face(e, 0) == expr("1")
        assert s.face(e, 1) == expr("0")
        # d_1 s_0 v = v for a vertex, d_1 s_0 e = e for an edge
        assert s.face(expr("0", (0,)), 1) == expr("0")
        assert s.face(expr("01", (0,)), 1) == expr("01")

    def test_vertices_of_degenerate(self):
        s = standard_simplex(1, 3)
        assert s.vertices(expr("01", (1,))) == ("0", "1", "1")
        assert s.vertices(expr("01", (0,))) == ("0", "0", "1")


# -- validation --------------------------------------------------------------

class TestValidation:
    def test_good_simplex_passes(self):
        assert standard_simplex(3, 3).validate().ok

    def test_empty_passes(self):
        assert empty_sset().validate().ok

    def test_mutated_face_fails_with_named_identity(self):
        s = standard_simplex(2, 2)
        faces = dict(s.faces)
        faces[("01", 0)] = expr("0")  # wrong endpoint
        bad = type(s)(2, {n: s.nondeg(n) for n in range(3)}, faces, None, "mutant")
        report = bad.validate()
        assert not report.ok
        assert any("d_" in v and "identity" in v for v in report.violations)

    def test_dangling_reference_reported(self):
        s = standard_simplex(1, 2)
        faces = dict(s.faces)
        faces[("01", 0)] = expr("ghost")
        bad = type(s)(2, {n: s.nondeg(n) for n in range(3)}, faces, None, "mutant")
        report = bad.validate()
        assert not report.ok
        assert any("dangling" in v for v in report.violations)

    def test_simplicial_identities_on_all_corpus(self):
        for s in [standard_simplex(3, 3), boundary(3, 3), horn(3, 1, 3),
                  product(standard_simplex(1, 2), standard_simplex(1, 2))]:
            assert s.validate().ok, s.name

    def test_coskeletal_certificate_checked(self):
        assert standard_simplex(2, 3).validate(check_coskeletal=True).ok
        # the boundary of a 2-simplex is not 2-coskeletal: the full shell
        # has no filler
        b = boundary(2, 2)
        claimed = type(b)(2, {n: b.nondeg(n) for n in range(3)}, b.faces, 1, "bad-cert")
        assert not claimed.validate(check_coskeletal=True).ok


# -- products ----------------------------------------------------------------

def joint_nondeg_pairs(m, a, b):
    """Oracle: pairs of monotone maps [m] -> [a] x [b], jointly injective."""
    out = []
    for f in monotone_maps(m, a):
        for g in monotone_maps(m, b):
            if all((f[i], g[i]) != (f[i + 1], g[i + 1]) for i in range(m)):
                out.append((f, g))
    return out


class TestProduct:
    def test_square_counts_match_oracle(self):
        p = product(standard_simplex(1, 3), standard_simplex(1, 3))
        for m in range(3):
            assert len(p.nondeg(m)) == len(joint_nondeg_pairs(m, 1, 1))
        assert [len(p.nondeg(n)) for n in range(3)] == [4, 5, 2]

    def test_prism_counts_match_oracle(self):
        p = product(standard_simplex(2, 3), standard_simplex(1, 3))
        for m in range(4):
            assert len(p.nondeg(m)) == len(joint_nondeg_pairs(m, 2, 1))

    def test_product_validates(self):
        p = product(standard_simplex(2, 3), standard_simplex(1, 3))
        assert p.validate().ok

    def test_unit_laws(self):
        t = standard_simplex(2, 3)
        for p, unit in [(product(t, standard_simplex(0, 3)), product_unit_right),
                        (product(standard_simplex(0, 3), t), product_unit_left)]:
            u = unit(p)
            assert u.validate().ok
            assert find_isomorphism(p, t) is not None

    def test_swap_and_assoc_are_isomorphisms(self):
        a = standard_simplex(1, 2)
        b = standard_simplex(2, 2)
        ab, ba = product(a, b), product(b, a)
        sw = product_swap(ab, ba)
        assert sw.validate().ok
        c = standard_simplex(0, 2)
        left = product(product(a, b), c)
        right = product(a, product(b, c))
        assoc = product_assoc(left, right)
        assert assoc.validate().ok
        assert len(left.nondeg(2)) == len(right.nondeg(2))


# -- map enumeration ----------------------------------------------------------

class TestEnumerateMaps:
    def test_delta1_self_maps(self):
        d1 = standard_simplex(1, 2)
        maps = enumerate_maps(d1, d1)
        assert len(maps) == 3  # oracle: monotone maps [1] -> [1]

    def test_yoneda(self):
        # maps delta n -> T correspond to total n-simplices of T
        t = product(standard_simplex(1, 3), standard_simplex(1, 3))
        for n in range(3):
            maps = enumerate_maps(standard_simplex(n, max(2, n)), t)
            top = "".join(str(i) for i in range(n + 1))
            images = {m.assignment[top] for m in maps}
            assert len(maps) == t.total_count(n) == len(images)

    def test_terminal_target(self):
        pt = standard_simplex(0, 2)
        assert len(enumerate_maps(boundary(2, 2), pt)) == 1
        assert len(enumerate_maps(standard_simplex(0, 2), pt)) == 1

    def test_vertex_maps(self):
        t = standard_simplex(2, 2)
        assert len(enumerate_maps(standard_simplex(0, 2), t)) == 3

    def test_empty_source(self):
        maps = enumerate_maps(empty_sset(), standard_simplex(1, 2))
        assert len(maps) == 1 and maps[0].assignment == {}

    def test_maps_validate(self):
        d1 = standard_simplex(1, 2)
        d2 = standard_simplex(2, 2)
        for m in enumerate_maps(d1, d2):
            assert m.validate().ok

    def test_composition_and_identity(self):
        d1 = standard_simplex(1, 2)
        d2 = standard_simplex(2, 2)
        maps = enumerate_maps(d1, d2)
        for m in maps:
            assert compose_maps(m, identity_map(d1)) == m
            assert compose_maps(identity_map(d2), m) == m

    def test_fixed_extension(self):
        # extending the identity horn inclusion into the full simplex
        h = horn(2, 1, 2)
        d2 = standard_simplex(2, 2)
        fixed = {x: SimplexExpr((), x) for n in range(3) for x in h.nondeg(n)}
        fillers = enumerate_maps(d2, d2, fixed={k: v for k, v in fixed.items()})
        assert len(fillers) == 1  # only the identity extends it


# -- text format ---------------------------------------------------------------

class TestTextFormat:
    def test_round_trip(self):
        for s in [standard_simplex(2, 3), horn(2, 1, 2),
                  product(standard_simplex(1, 2), standard_simplex(1, 2))]:
            text = sset_to_text(s)
            back = sset_from_text(text, s.name)
            assert back.levels == s.levels
            assert back.faces == s.faces
            assert back.coskeletal_from == s.coskeletal_from

    def test_parse_error_names_line(self):
        with pytest.raises(ValueError, match="line 2"):
            sset_from_text("dim 2\nface oops\n")

    def test_comments_and_blank_lines(self):
        s = sset_from_text("# a comment\ndim 2\n\n0: v w\n")
        assert s.nondeg(0) == ("v", "w")
