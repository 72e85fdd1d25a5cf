"""Exponentials, Kan cores, mapping spaces, and square lifting."""

import random

import pytest

from qcatkit.cats import (
    boundary_two,
    contractible_groupoid,
    group_z2,
    poset_simplex,
    validate_category,
)
from qcatkit.mapping import (
    ExactnessError,
    Square,
    enumerate_prism_lifts,
    exponential,
    fill_inner_horn,
    horn_map_from_faces,
    kan_core,
    lift_square,
    mapping_space,
    object_map,
)
from qcatkit.nerve import ho, is_quasicategory, nerve
from qcatkit.simplicial import (
    SimplexExpr,
    empty_sset,
    enumerate_maps,
    expr,
    horn,
    product,
    standard_simplex,
)


class TestExponential:
    def test_unit_exponent(self):
        n1 = nerve(poset_simplex(1), 3)
        E = exponential(n1, standard_simplex(0, 2), 2)
        # maps from delta0 x deltan are n-simplices: recover N([1])
        assert [len(E.sset.nondeg(n)) for n in range(3)] == [2, 1, 0]
        assert E.sset.validate().ok

    def test_interval_into_interval(self):
        n1 = nerve(poset_simplex(1), 3)
        E = exponential(n1, standard_simplex(1, 2), 2)
        # level 0: maps delta1 -> N[1], one per total 1-simplex: 3 objects
        assert len(E.sset.nondeg(0)) == 3
        assert E.sset.validate().ok
        assert is_quasicategory(E.sset).ok

    def test_empty_exponent_gives_terminal(self):
        n1 = nerve(poset_simplex(1), 3)
        E = exponential(n1, empty_sset(), 2)
        assert [E.sset.total_count(n) for n in range(3)] == [1, 1, 1]
        assert len(E.sset.nondeg(0)) == 1
        assert not E.sset.nondeg(1) and not E.sset.nondeg(2)

    def test_levels_match_direct_enumeration(self):
        # definitional cross-check against an independent enumerator
        n1 = nerve(poset_simplex(1), 3)
        S = standard_simplex(1, 2)
        E = exponential(n1, S, 2)
        for n in range(3):
            P = product(S, standard_simplex(n, max(2, n)))
            direct = enumerate_maps(P, n1.truncate(2))
            assert E.sset.total_count(n) == len(direct)

    def test_exactness_gate(self):
        no_cert = horn(2, 1, 2)
        with pytest.raises(ExactnessError):
            exponential(no_cert, standard_simplex(0, 2), 2)

    def test_face_and_degeneracy_structure(self):
        E = exponential(nerve(poset_simplex(1), 3), standard_simplex(1, 2), 2)
        assert is_quasicategory(E.sset).ok
        pres = ho(E.sset)
        assert validate_category(pres.category).ok
        # Ho of the exponential is the arrow category of [1]: 3 objects
        assert len(pres.category.objects) == 3


class TestKanCore:
    def test_core_of_interval_is_discrete(self):
        q = nerve(poset_simplex(1), 3)
        core = kan_core(q)
        assert [len(core.nondeg(n)) for n in range(4)] == [2, 0, 0, 0]
        assert core.validate().ok

    def test_core_of_group_is_everything(self):
        q = nerve(group_z2(), 3)
        core = kan_core(q)
        assert core.levels == q.levels

    def test_core_of_point(self):
        q = standard_simplex(0, 2)
        assert kan_core(q).levels == q.levels

    def test_core_idempotent(self):
        q = nerve(boundary_two(), 3)
        core = kan_core(q)
        again = kan_core(core)
        assert again.levels == core.levels

    def test_core_preserved_by_products(self):
        a = nerve(poset_simplex(1), 3)
        b = nerve(group_z2(), 3)
        p = product(a, b)
        core_p = kan_core(p)
        direct = product(kan_core(a), kan_core(b))
        assert {n: len(core_p.nondeg(n)) for n in range(3)} == \
               {n: len(direct.nondeg(n)) for n in range(3)}


def pi0(sset):
    """Oracle: path components of a truncated simplicial set."""
    from qcatkit.util import UnionFind
    uf = UnionFind(sset.nondeg(0))
    for e in sset.nondeg(1):
        a, b = sset.edge_endpoints(SimplexExpr((), e))
        uf.union(a, b)
    return len({v for v in uf.classes().values()})


class TestMappingSpace:
    def test_pi0_matches_hom_set(self):
        q = nerve(poset_simplex(1), 3)
        for x, y, expected in [("0", "1", 1), ("1", "0", 0), ("0", "0", 1)]:
            M = mapping_space(q, x, y, 2)
            count = pi0(M.sset) if M.sset.nondeg(0) else 0
            assert count == expected, (x, y)

    def test_point_in_endo_space(self):
        q = nerve(poset_simplex(1), 3)
        M = mapping_space(q, "0", "0", 2)
        assert len(M.sset.nondeg(0)) >= 1

    def test_group_mapping_space_components(self):
        q = nerve(group_z2(), 3)
        M = mapping_space(q, "*", "*", 2)
        assert pi0(M.sset) == 2

    def test_kan_report(self):
        q = nerve(contractible_groupoid(), 3)
        M = mapping_space(q, "a", "b", 2)
        assert M.kan_report().ok

    def test_nerve_mapping_space_ho_is_discrete(self):
        q = nerve(poset_simplex(2), 3)
        M = mapping_space(q, "0", "2", 2)
        pres = ho(M.sset)
        assert not pres.category.nonidentity()


class TestHornFilling:
    def test_nerve_fillers_unique(self):
        q = nerve(poset_simplex(2), 3)
        h = horn_map_from_faces(2, 1, {0: expr("m12"), 2: expr("m01")}, q)
        assert h.validate().ok
        filler, top = fill_inner_horn(q, h)
        assert q.face(top, 1) == expr("m02")

    def test_degenerate_horn_filling(self):
        q = nerve(poset_simplex(1), 3)
        s0x = SimplexExpr((0,), "0")
        h = horn_map_from_faces(2, 1, {0: s0x, 2: s0x}, q)
        filler, top = fill_inner_horn(q, h)
        assert top == SimplexExpr((1, 0), "0")

    def test_filler_face_is_ho_composite(self):
        q = nerve(boundary_two(), 3)
        pres = ho(q)
        h = horn_map_from_faces(2, 1, {0: expr("b"), 2: expr("a")}, q)
        _, top = fill_inner_horn(q, h)
        composite = pres.cls(q.face(top, 1))
        assert composite == pres.category.compose(pres.cls(expr("b")), pres.cls(expr("a")))

    def test_outer_horn_rejected(self):
        q = nerve(poset_simplex(2), 3)
        h = horn_map_from_faces(2, 0, {1: expr("m02"), 2: expr("m01")}, q)
        with pytest.raises(ValueError, match="inner"):
            fill_inner_horn(q, h)


def all_commutative_squares(pres):
    cat = pres.category
    squares = []
    for top in sorted(cat.morphisms):
        for left in sorted(cat.morphisms):
            if cat.dom(top) != cat.dom(left):
                continue
            for right in sorted(cat.morphisms):
                if cat.dom(right) != cat.cod(top):
                    continue
                for bottom in sorted(cat.morphisms):
                    if (cat.dom(bottom) == cat.cod(left)
                            and cat.cod(bottom) == cat.cod(right)
                            and cat.compose(right, top) == cat.compose(bottom, left)):
                        squares.append(Square(pres, top, bottom, left, right))
    return squares


class TestLiftSquare:
    def test_identity_square(self):
        q = nerve(poset_simplex(1), 3)
        pres = ho(q)
        f = expr("m01")
        cls = pres.cls(f)
        idc = pres.category.identities
        sq = Square(pres, idc["0"], idc["1"], cls, cls)
        result = lift_square(q, sq, f, f)
        assert result.morphism in result.ho_exp.category.morphisms

    def test_all_squares_in_small_nerves(self):
        from qcatkit.mapping import exponential as make_exp
        for cat in [poset_simplex(1), poset_simplex(2), group_z2()]:
            q = nerve(cat, 3)
            pres = ho(q)
            E = make_exp(q, standard_simplex(1, 2), 2)
            hoE = ho(E.sset)
            for sq in all_commutative_squares(pres):
                f = pres.reps[sq.left]
                g = pres.reps[sq.right]
                result = lift_square(q, sq, f, g, E=E, ho_E=hoE)
                lifts = enumerate_prism_lifts(E, hoE, sq, f, g)
                assert result.morphism in lifts

    def test_lift_rejects_wrong_representatives(self):
        q = nerve(poset_simplex(1), 3)
        pres = ho(q)
        idc = pres.category.identities
        f = expr("m01")
        sq = Square(pres, idc["0"], idc["1"], pres.cls(f), pres.cls(f))
        with pytest.raises(ValueError):
            lift_square(q, sq, expr("0", (0,)), f)

    def test_noncommutative_square_rejected(self):
        q = nerve(boundary_two(), 3)
        pres = ho(q)
        idc = pres.category.identities
        with pytest.raises(ValueError, match="commute"):
            Square(pres, idc["0"], idc["2"], pres.cls(expr("c")), pres.cls(expr("ba")))
