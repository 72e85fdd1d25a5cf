"""Equivalence detectors and the agreement experiment."""

import pytest

from qcatkit.cats import contractible_groupoid, poset_simplex
from qcatkit.corpus import labeled_map_corpus
from qcatkit.nerve import nerve
from qcatkit.prederivator import HoPrederivator, standard_sample
from qcatkit.simplicial import SimplexExpr, identity_map, standard_simplex
from qcatkit.whitehead import (
    agreement_table,
    conservativity_experiment,
    induced_prederivator_morphism,
    is_equivalence,
    is_essentially_surjective,
    is_fully_faithful_1tr,
    load_labeled_corpus,
    prederivator_equivalence,
    write_labeled_corpus,
)

CORPUS = labeled_map_corpus()
BY_NAME = {name: (f, expected) for name, f, expected in CORPUS}


class TestEssentialSurjectivity:
    def test_identity(self):
        f, _ = BY_NAME["id_N[1]"]
        assert is_essentially_surjective(f).ok

    def test_collapse_hits_single_vertex(self):
        f, _ = BY_NAME["collapse_N[1]"]
        assert is_essentially_surjective(f).ok

    def test_vertex_inclusion_misses(self):
        f, _ = BY_NAME["vertex0_N[1]"]
        verdict = is_essentially_surjective(f)
        assert not verdict.ok
        assert verdict.witnesses["failing vertex"] == "1"

    def test_groupoid_point_hits_everything(self):
        f, _ = BY_NAME["point_into_E"]
        assert is_essentially_surjective(f).ok


class TestFullFaithfulness:
    def test_identity(self):
        f, _ = BY_NAME["id_N[1]"]
        assert is_fully_faithful_1tr(f).ok

    def test_collapse_not_faithful_sideways(self):
        # the interval collapse maps the empty hom (1, 0) onto a point
        f, _ = BY_NAME["collapse_N[1]"]
        verdict = is_fully_faithful_1tr(f)
        assert not verdict.ok
        assert verdict.witnesses["failing pair"] == ("1", "0")

    def test_group_collapse_merges_components(self):
        f, _ = BY_NAME["collapse_z2"]
        assert not is_fully_faithful_1tr(f).ok

    def test_groupoid_collapse_is_fully_faithful(self):
        f, _ = BY_NAME["collapse_E"]
        assert is_fully_faithful_1tr(f).ok


class TestEquivalence:
    def test_labels_match_ground_truth(self):
        for name, f, expected in CORPUS:
            verdict = is_equivalence(f)
            assert verdict.ok == expected, name
            assert verdict.label == "1-truncated surrogate"

    def test_nerve_maps_agree_with_category_search(self):
        # on nerves the surrogate decides exactly like direct search for
        # an inverse-up-to-natural-isomorphism
        from qcatkit.cats import Functor, equivalence_inverse
        swap = Functor(contractible_groupoid(), contractible_groupoid(),
                       {"a": "b", "b": "a"}, {"eab": "eba", "eba": "eab"}, "swap")
        assert equivalence_inverse(swap) is not None
        f, _ = BY_NAME["swap_E"]
        assert is_equivalence(f).ok

    def test_stability_under_identity_composition(self):
        from qcatkit.simplicial import compose_maps
        f, expected = BY_NAME["incl_N[1]_N[2]"]
        g = compose_maps(f, identity_map(f.source))
        assert is_equivalence(g).ok == expected


class TestPrederivatorEquivalence:
    def test_identity_prederivator_morphism(self):
        sample = standard_sample()
        q = nerve(poset_simplex(1), 3)
        D = HoPrederivator(q, sample)
        F = induced_prederivator_morphism(D, D, identity_map(q))
        assert prederivator_equivalence(F).ok

    def test_collapse_fails_at_base_shape(self):
        sample = standard_sample()
        f, _ = BY_NAME["collapse_N[1]"]
        DQ = HoPrederivator(f.source, sample)
        DR = HoPrederivator(f.target, sample)
        F = induced_prederivator_morphism(DQ, DR, f)
        verdict = prederivator_equivalence(F)
        assert not verdict.ok
        assert verdict.witnesses["failing shape"] == "[0]"


@pytest.fixture(scope="module")
def rows():
    return conservativity_experiment(CORPUS)


class TestAgreement:
    def test_zero_implication_violations(self, rows):
        assert all(r.implication_ok for r in rows)

    def test_ground_truth_matches(self, rows):
        for r in rows:
            assert r.matches_ground_truth, r.name

    def test_table_renders(self, rows):
        table = agreement_table(rows)
        assert "implication" in table and "VIOLATED" not in table


class TestManifest:
    def test_round_trip(self, tmp_path):
        manifest = write_labeled_corpus(CORPUS[:4], tmp_path)
        back = load_labeled_corpus(manifest)
        assert len(back) == 4
        for (n1, f1, e1), (n2, f2, e2) in zip(CORPUS[:4], back):
            assert n1 == n2 and e1 == e2
            assert f1.key() == f2.key()

    def test_parse_error_names_line(self, tmp_path):
        bad = tmp_path / "corpus.manifest"
        bad.write_text("map broken-line\n")
        with pytest.raises(ValueError, match="line 1"):
            load_labeled_corpus(bad)
