"""Shifts, simplicial hom levels, diagonal composition, coherent equivalences."""

import pytest

from qcatkit.cats import compose_functors, identity_functor, poset_simplex
from qcatkit.enrichment import (
    EqShiftPrederivator,
    compose_simplicial,
    embedding_check,
    enrichment_sample,
    eq_shift,
    is_coherent_equivalence,
    shift,
    simplicial_hom,
    simplicial_operator,
)
from qcatkit.nerve import nerve
from qcatkit.prederivator import (
    ClosureError,
    HoPrederivator,
    check_strict,
    identity_strict,
)
from qcatkit.simplicial import standard_simplex

SAMPLE = enrichment_sample(1)
DEEP = enrichment_sample(1, depth=1)
DEEP2 = enrichment_sample(1, depth=2)


@pytest.fixture(scope="module")
def d_point():
    return HoPrederivator(standard_simplex(0, 2), SAMPLE)


@pytest.fixture(scope="module")
def d_interval():
    return HoPrederivator(nerve(poset_simplex(1), 3), SAMPLE)


@pytest.fixture(scope="module")
def deep_interval():
    return HoPrederivator(nerve(poset_simplex(1), 3), DEEP)


@pytest.fixture(scope="module")
def deep_point():
    return HoPrederivator(standard_simplex(0, 2), DEEP)


def find_identity_level0(D):
    sh = shift(D, "[0]")
    for F in simplicial_hom(D, D, 0):
        if all(F.at(K).key() == identity_functor(sh.eval(K)).key()
               for K in F.components):
            return F
    raise AssertionError("no identity found in level 0")


class TestShift:
    def test_samples_validate(self):
        assert SAMPLE.validate().ok
        assert DEEP.validate().ok

    def test_shift_by_point_is_isomorphic(self, d_interval):
        sh = shift(d_interval, "[0]")
        for K in sh.pairings:
            assert len(sh.eval(K).objects) == len(d_interval.eval(K).objects)
            assert len(sh.eval(K).morphisms) == len(d_interval.eval(K).morphisms)

    def test_shift_unit_of_product(self, d_interval):
        # shifting by [1], the value at [0] is the value at [1] x [0]
        sh = shift(d_interval, "[1]")
        assert sh.eval("[0]") is d_interval.eval("[1]x[0]")

    def test_closure_violation_is_loud(self, d_interval):
        sh = shift(d_interval, "[1]")
        with pytest.raises(ClosureError):
            sh.paired("[1]x[1]")

    def test_double_shift_associativity_instance(self, deep_interval):
        # (D^[1])^[1] at [0] agrees with D at [1] x ([1] x [0])
        outer = shift(deep_interval, "[1]")
        assert outer.eval("[1]x[0]") is deep_interval.eval("[1]x([1]x[0])")


class TestSimplicialHom:
    def test_level0_from_point_counts_objects(self, d_point, d_interval):
        homs = simplicial_hom(d_point, d_interval, 0)
        assert len(homs) == 2

    def test_identity_present(self, d_interval):
        find_identity_level0(d_interval)

    def test_all_levels_are_strict(self, d_point, d_interval):
        for n in (0, 1):
            for F in simplicial_hom(d_point, d_interval, n):
                report = check_strict(F)
                assert report.ok, report.violations[:2]

    def test_hom_counts_match_maps(self, d_point, d_interval):
        # mapping-object levels coincide with simplicial map counts
        # (pt -> N[1]): level n has one morphism per total n-simplex
        assert len(simplicial_hom(d_point, d_interval, 1)) == 3

    def test_operators_satisfy_simplicial_identities(self, deep_point, deep_interval):
        d1 = deep_interval
        homs1 = simplicial_hom(deep_point, d1, 1)
        for F in homs1:
            d0F = simplicial_operator(d1, F, (1,), 0, 1)
            d1F = simplicial_operator(d1, F, (0,), 0, 1)
            s0d0 = simplicial_operator(d1, d0F, (0, 0), 1, 0)
            # re-degenerating a face of a degenerate element recovers it
            for G in [d0F, d1F]:
                back = simplicial_operator(d1, simplicial_operator(d1, G, (0, 0), 1, 0),
                                           (0,), 0, 1)
                assert back.key_on(G.components) == G.key()


class TestComposeSimplicial:
    def test_unit_law(self, deep_point, deep_interval):
        ident = find_identity_level0(deep_interval)
        deg = simplicial_operator(deep_interval, ident, (0, 0), 1, 0)
        for g in simplicial_hom(deep_point, deep_interval, 1):
            comp = compose_simplicial(deep_interval, deg, g, 1)
            common = sorted(set(comp.components) & set(g.components))
            assert comp.key_on(common) == g.key_on(common)

    def test_level0_reduces_to_strict_composition(self, deep_point, deep_interval):
        gs = simplicial_hom(deep_point, deep_interval, 0)
        ident = find_identity_level0(deep_interval)
        for g in gs:
            comp = compose_simplicial(deep_interval, ident, g, 0)
            for K in comp.components:
                pn_K = DEEP.products[("[0]", K)]
                direct = compose_functors(ident.at(pn_K), g.at(K))
                # the diagonal restriction at level 0 is plain composition
                assert sorted(comp.at(K).ob.values()) == sorted(direct.ob.values())

    def test_associativity_instances(self):
        # one closure layer per composition in the deepest parenthesization;
        # the doubly-nested interval power is kept out of the scope, so the
        # two parenthesizations are compared on the shapes both reach
        spine = ["[0]", "[1]", "[1]x[0]", "[1]x[1]", "[1]x([1]x[0])"]
        d0 = HoPrederivator(standard_simplex(0, 2), DEEP2)
        d1 = HoPrederivator(nerve(poset_simplex(1), 3), DEEP2)
        homs = simplicial_hom(d0, d1, 1, shapes=spine)
        endos = simplicial_hom(d1, d1, 1, shapes=spine)
        checked = 0
        for g in homs[:2]:
            for f in endos[:2]:
                for h in endos[:2]:
                    fg = compose_simplicial(d1, f, g, 1)
                    h_fg = compose_simplicial(d1, h, fg, 1)
                    hf = compose_simplicial(d1, h, f, 1)
                    hf_g = compose_simplicial(d1, hf, g, 1)
                    common = sorted(set(h_fg.components) & set(hf_g.components))
                    assert common, "no common scope for the two parenthesizations"
                    assert h_fg.key_on(common) == hf_g.key_on(common)
                    checked += 1
        assert checked == 8


class TestEqShift:
    def test_level_zero_is_plain_shift(self, d_interval):
        assert not isinstance(eq_shift(d_interval, 0), EqShiftPrederivator)

    def test_interval_invertible_arrows(self, d_interval):
        eq = eq_shift(d_interval, 1)
        assert len(eq.eval("[0]").objects) == 2  # only the identity arrows

    def test_groupoid_keeps_everything(self):
        from qcatkit.cats import contractible_groupoid
        dE = HoPrederivator(nerve(contractible_groupoid(), 3), enrichment_sample(1))
        eq = eq_shift(dE, 1)
        inner = shift(dE, "[1]")
        assert len(eq.eval("[0]").objects) == len(inner.eval("[0]").objects)

    def test_stable_under_restriction(self, d_interval):
        eq = eq_shift(d_interval, 1)
        u = SAMPLE.functors["vx_[1]_0"]
        F = eq.on_functor(u, "[0]", "[1]")
        assert F.validate().ok


class TestCoherentEquivalence:
    def test_identity_quadruple(self, d_interval):
        ident = identity_strict(d_interval)
        eq = eq_shift(d_interval, 1)
        # degenerate chain: every object goes to its constant interval diagram
        a = degenerate_chain(d_interval, eq)
        verdict = is_coherent_equivalence(ident, ident, a, a)
        assert verdict.ok, verdict.lines()

    def test_wrong_endpoint_detected(self, d_interval):
        from qcatkit.prederivator import StrictMorphism
        ident = identity_strict(d_interval)
        eq = eq_shift(d_interval, 1)
        a = degenerate_chain(d_interval, eq)
        # break one endpoint: swap a component with a non-chain functor
        K = "[0]"
        broken_comp = dict(a.components)
        C = eq.eval(K)
        other = {X: sorted(C.objects)[0] for X in a.at(K).ob}
        from qcatkit.cats import Functor
        broken_comp[K] = Functor(a.at(K).source, C, other,
                                 {m: C.identities[sorted(C.objects)[0]]
                                  for m in a.at(K).source.nonidentity()}, "broken")
        b = StrictMorphism(a.source, a.target, broken_comp, "broken-chain")
        verdict = is_coherent_equivalence(ident, ident, b, a)
        assert not verdict.ok
        assert any("vertices" in c and not p for c, p in verdict.clauses)


def degenerate_chain(D, eq):
    """The chain morphism sending an object to its constant interval diagram."""
    from qcatkit.cats import Functor
    from qcatkit.prederivator import StrictMorphism
    comps = {}
    for K in eq.inner.pairings:
        if K not in D.sample.categories:
            continue
        pname = eq.inner.paired(K)
        # constant diagrams: restrict along the projection [1] x K -> K
        proj_ob = {}
        PK = D.sample.cat(pname)
        K_cat = D.sample.cat(K)
        ob = {x: x.split(",", 1)[1][:-1] for x in PK.objects}
        ob = {x: ob[x] for x in PK.objects}
        proj = Functor(PK, K_cat,
                       {x: _snd(x) for x in PK.objects},
                       {m: _snd(m) for m in PK.nonidentity()}, f"proj2_{K}")
        star = D.on_functor(proj, pname, K)
        sub = eq.eval(K)
        comps[K] = Functor(D.eval(K), sub,
                           {X: star.ob[X] for X in D.eval(K).objects},
                           {m: star.mor[m] for m in D.eval(K).nonidentity()},
                           f"const_{K}")
    return StrictMorphism(D, eq, comps, "degenerate-chain")


def _snd(pair_token: str) -> str:
    depth = 0
    for pos, ch in enumerate(pair_token):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 1:
            return pair_token[pos + 1:-1]
    raise ValueError(pair_token)


class TestEmbedding:
    def test_point_cases(self):
        pt = standard_simplex(0, 2)
        for n in (0, 1):
            report = embedding_check(pt, pt, n)
            assert report.injective
            assert report.map_count == 1

    def test_point_into_interval(self):
        pt = standard_simplex(0, 2)
        n1 = nerve(poset_simplex(1), 3)
        report = embedding_check(pt, n1, 0)
        assert report.injective and report.map_count == 2
        report = embedding_check(pt, n1, 1)
        assert report.injective and report.map_count == 3

    def test_interval_endomorphisms(self):
        n1 = nerve(poset_simplex(1), 3)
        report = embedding_check(n1, n1, 1)
        assert report.injective
        assert report.map_count == 6  # monotone square maps
        assert report.hom_count >= report.image_size