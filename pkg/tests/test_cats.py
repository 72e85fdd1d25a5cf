"""Finite category layer: tables, enumeration, homotopy finiteness."""

from itertools import product as iproduct

import pytest

from qcatkit.cats import (
    FiniteCategory,
    boundary_two,
    cat_from_text,
    cat_to_text,
    compose_functors,
    constant_functor,
    contractible_groupoid,
    coproduct_cat,
    empty_category,
    enumerate_functors,
    enumerate_nats,
    equivalence_inverse,
    functor_category,
    group_z2,
    horizontal_compose,
    identity_functor,
    identity_nat,
    is_homotopy_finite,
    poset_simplex,
    product_cat,
    validate_category,
    vertical_compose,
)


def monotone_maps(m, n):
    return [t for t in iproduct(range(n + 1), repeat=m + 1)
            if all(t[i] <= t[i + 1] for i in range(m))]


class TestBuilders:
    def test_poset_counts(self):
        c = poset_simplex(1)
        assert len(c.objects) == 2 and len(c.morphisms) == 3
        assert validate_category(c).ok

    def test_boundary_two(self):
        c = boundary_two()
        assert len(c.objects) == 3
        # free generation: three generators plus the composite b.a, which
        # stays distinct from the generator c
        assert len(c.morphisms) == 7
        assert c.compose("b", "a") == "ba" != "c"
        assert validate_category(c).ok

    def test_product_counts(self):
        p = product_cat(poset_simplex(1), poset_simplex(1))
        assert len(p.objects) == 4 and len(p.morphisms) == 9
        assert validate_category(p).ok

    def test_coproduct(self):
        c = coproduct_cat(poset_simplex(0), poset_simplex(1))
        assert len(c.objects) == 3 and len(c.morphisms) == 4
        assert validate_category(c).ok

    def test_special_categories_validate(self):
        for c in [empty_category(), group_z2(), contractible_groupoid(), boundary_two()]:
            assert validate_category(c).ok, c.name


class TestValidate:
    def test_nonassociative_table_fails(self):
        # one object, three non-identity endos with a broken table
        mor = {"e": ("x", "x"), "p": ("x", "x"), "q": ("x", "x"), "r": ("x", "x")}
        compose = {}
        for g in "pqr":
            for f in "pqr":
                compose[(g, f)] = "p"
        compose[("p", "p")] = "q"
        bad = FiniteCategory(("x",), mor, compose, {"x": "e"}, "bad")
        report = validate_category(bad)
        assert not report.ok
        assert any("associativity" in v and "triple" in v for v in report.violations)

    def test_empty_passes(self):
        assert validate_category(empty_category()).ok


class TestEnumeration:
    def test_functors_between_posets_match_monotone_maps(self):
        for m in range(3):
            for n in range(3):
                fs = enumerate_functors(poset_simplex(m), poset_simplex(n))
                assert len(fs) == len(monotone_maps(m, n))

    def test_functors_validate(self):
        for F in enumerate_functors(poset_simplex(2), poset_simplex(1)):
            assert F.validate().ok

    def test_nats_of_identity(self):
        idf = identity_functor(poset_simplex(1))
        nats = enumerate_nats(idf, idf)
        assert len(nats) == 1

    def test_functor_category_unit(self):
        fc = functor_category(poset_simplex(0), poset_simplex(2))
        assert len(fc.category.objects) == 3
        assert len(fc.category.morphisms) == 6
        assert validate_category(fc.category).ok

    def test_functor_category_validates(self):
        fc = functor_category(poset_simplex(1), poset_simplex(1))
        assert len(fc.category.objects) == 3
        assert validate_category(fc.category).ok

    def test_functors_into_group(self):
        # functors [1] -> BZ/2 send the generator anywhere: 2 of them
        fs = enumerate_functors(poset_simplex(1), group_z2())
        assert len(fs) == 2

    def test_nat_compositions(self):
        fc = functor_category(poset_simplex(1), poset_simplex(2))
        C = fc.category
        assert validate_category(C).ok
        # horizontal composition of identity nats is an identity nat
        F = fc.functor_by_id["F0"]
        h = horizontal_compose(identity_nat(identity_functor(F.target)), identity_nat(F))
        assert h.validate().ok


class TestHomotopyFinite:
    def test_poset_is(self):
        ok, witness = is_homotopy_finite(poset_simplex(2))
        assert ok and witness is None

    def test_group_is_not(self):
        ok, witness = is_homotopy_finite(group_z2())
        assert not ok and "endomorphism" in witness

    def test_groupoid_is_not(self):
        ok, witness = is_homotopy_finite(contractible_groupoid())
        assert not ok and "isomorphism" in witness

    def test_boundary_two_is(self):
        assert is_homotopy_finite(boundary_two())[0]


class TestEquivalence:
    def test_identity_is_equivalence(self):
        inv = equivalence_inverse(identity_functor(poset_simplex(1)))
        assert inv is not None

    def test_groupoid_collapse_is_equivalence(self):
        E = contractible_groupoid()
        pt = poset_simplex(0)
        F = constant_functor(E, pt, "0", "collapse")
        # constant functor E -> [0]: essentially surjective and fully faithful
        inv = equivalence_inverse(F)
        assert inv is not None
        assert compose_functors(F, inv).validate().ok

    def test_poset_collapse_is_not(self):
        F = constant_functor(poset_simplex(1), poset_simplex(0), "0")
        assert equivalence_inverse(F) is None

    def test_universal_property_of_product(self):
        # functors into the product = pairs of functors into the factors
        J, K = poset_simplex(1), poset_simplex(0)
        P = product_cat(J, K)
        fs = enumerate_functors(poset_simplex(1), P)
        assert len(fs) == len(enumerate_functors(J, J)) * len(enumerate_functors(J, K))


class TestTextFormat:
    def test_round_trip(self):
        for c in [poset_simplex(2), boundary_two(), group_z2()]:
            back = cat_from_text(cat_to_text(c), c.name)
            assert back.canonical_key() == c.canonical_key()

    def test_parse_error_position(self):
        with pytest.raises(ValueError, match="line 1"):
            cat_from_text("mor broken\n")
