"""The standard desk-scale corpus and its deliberate mutations.

Everything the verification suite runs on lives here: the simplicial-set
corpus, its quasicategory members, single-face mutations that must fail
validation, prederivator mutations that must each fail one axiom audit,
the labeled map corpus for the equivalence-agreement experiment, and the
seeded generator of commutative squares.
"""

from __future__ import annotations

import random

from .cats import (
    FiniteCategory,
    Functor,
    NatTransf,
    boundary_two,
    constant_functor,
    contractible_groupoid,
    full_subcategory,
    group_z2,
    identity_functor,
    poset_simplex,
    product_cat,
)
from .mapping import Square
from .nerve import NerveSSet, ho, nerve, nerve_map
from .prederivator import DiaSample, HoPrederivator, Prederivator, standard_sample
from .simplicial import (
    SimplexExpr,
    SimplicialMap,
    TruncatedSSet,
    boundary,
    horn,
    identity_map,
    product,
    standard_simplex,
)


def corpus_categories() -> list:
    return [
        ("[0]", poset_simplex(0)),
        ("[1]", poset_simplex(1)),
        ("[2]", poset_simplex(2)),
        ("[3]", poset_simplex(3)),
        ("[1]x[1]", product_cat(poset_simplex(1), poset_simplex(1))),
        ("d[2]", boundary_two()),
        ("z2", group_z2()),
        ("E", contractible_groupoid()),
    ]


def corpus_ssets() -> list:
    """At least 20 presentations: simplices, shells, horns, nerves, products."""
    out = []
    for n in range(4):
        out.append((f"delta{n}", standard_simplex(n, max(2, n))))
    for n in range(1, 4):
        out.append((f"boundary{n}", boundary(n, max(2, n))))
    for n in range(1, 4):
        for i in range(n + 1):
            out.append((f"horn{n}_{i}", horn(n, i, max(2, n))))
    for name, cat in corpus_categories():
        out.append((f"N({name})", nerve(cat, 3)))
    out.append(("delta1xdelta1", product(standard_simplex(1, 3), standard_simplex(1, 3))))
    out.append(("N([1])xN([1])", product(nerve(poset_simplex(1), 3),
                                         nerve(poset_simplex(1), 3))))
    out.append(("N([1])xN(z2)", product(nerve(poset_simplex(1), 3), nerve(group_z2(), 3))))
    return out


def corpus_quasicategories() -> list:
    """The corpus members that are quasicategories: nerves and their products."""
    out = [("delta0", standard_simplex(0, 2))]
    out += [(name, s) for name, s in corpus_ssets()
            if name.startswith("N(") or name == "delta1xdelta1"]
    return out


def face_mutations(count: int = 20) -> list:
    """Single-face mutations of corpus members, each breaking an identity.

    A face of a 2- or 3-simplex is redirected to a different simplex of
    the right dimension, deterministically.
    """
    out = []
    for name, S in corpus_ssets():
        taken = 0
        for mutant in _failing_face_mutations(name, S):
            out.append(mutant)
            taken += 1
            if taken >= 2 or len(out) >= count:
                break
        if len(out) >= count:
            break
    return out[:count]


def _failing_face_mutations(name: str, S: TruncatedSSet):
    """Mutants of S, one redirected face each, that really break an identity."""
    for n in (2, 3):
        for x in S.nondeg(n):
            for i in range(n + 1):
                old = S.faces[(x, i)]
                for cand in S.total(n - 1):
                    if cand == old:
                        continue
                    faces = dict(S.faces)
                    faces[(x, i)] = cand
                    mutant = TruncatedSSet(
                        S.dim_bound,
                        {m: S.nondeg(m) for m in range(S.dim_bound + 1)},
                        faces, None, f"{name}/d{i}({x})->{cand.token()}")
                    if not mutant.validate(check_coskeletal=False).ok:
                        yield mutant
                        break


# ---------------------------------------------------------------------------
# prederivator mutations


class PatchedPrederivator(Prederivator):
    """Delegating wrapper with targeted overrides at one shape."""

    def __init__(self, base: Prederivator, patched_shape: str, patched_eval,
                 patch_restriction, patch_corestriction, name: str):
        super().__init__(base.sample, name)
        self.base = base
        self.shape = patched_shape
        self.patched_eval = patched_eval
        # patch_restriction(F, u): fix up u*: patched -> other
        # patch_corestriction(F, u): fix up u*: other -> patched
        self._patch_res = patch_restriction
        self._patch_cores = patch_corestriction

    def _eval(self, J_name: str) -> FiniteCategory:
        if J_name == self.shape:
            return self.patched_eval
        return self.base.eval(J_name)

    def _on_functor(self, u: Functor, src: str, dst: str) -> Functor:
        if src == self.shape and dst == self.shape:
            return identity_functor(self.eval(self.shape))
        base_image = self.base.on_functor(u, src, dst)
        if dst == self.shape:   # u: other -> patched, u*: patched -> other
            return self._patch_res(self, base_image, u, src, dst)
        if src == self.shape:   # u: patched -> other, u*: other -> patched
            return self._patch_cores(self, base_image, u, src, dst)
        return base_image

    def _on_nat(self, alpha: NatTransf, src: str, dst: str) -> NatTransf:
        base_image = self.base.on_nat(alpha, src, dst)
        if self.shape not in (src, dst):
            return base_image
        ustar = self.on_functor(alpha.source, src, dst)
        vstar = self.on_functor(alpha.target, src, dst)
        comps = {X: base_image.at(X) for X in ustar.source.objects}
        return NatTransf(ustar, vstar, comps, base_image.name)


def add_idempotent(C: FiniteCategory, obj: str, mid: str = "mut_e") -> FiniteCategory:
    """A copy of C with one extra non-invertible idempotent endomorphism."""
    morphisms = dict(C.morphisms)
    morphisms[mid] = (obj, obj)
    compose = dict(C.compose_table)
    compose[(mid, mid)] = mid
    for m in C.nonidentity():
        if C.dom(m) == obj:
            compose[(m, mid)] = m
        if C.cod(m) == obj:
            compose[(mid, m)] = m
    return FiniteCategory(C.objects, morphisms, compose, C.identities, f"{C.name}+e")


def _extend_restriction(mutant, base_image, u, src, dst):
    """u*: patched -> other when the patch added a morphism."""
    mor = dict(base_image.mor)
    target = base_image.target
    for m in mutant.eval(dst).nonidentity():
        if m not in mor:
            mor[m] = target.identities[base_image.ob[mutant.eval(dst).dom(m)]]
    return Functor(mutant.eval(dst), target, base_image.ob, mor, base_image.name)


def _retarget_corestriction(mutant, base_image, u, src, dst):
    """u*: other -> patched when objects and data are unchanged."""
    return Functor(base_image.source, mutant.eval(src), base_image.ob,
                   base_image.mor, base_image.name)


def der2_mutation(base: HoPrederivator) -> Prederivator:
    """Adds a pointwise-invisible idempotent: conservativity must fail."""
    shape = "[1]x[1]"
    C = base.eval(shape)
    patched = add_idempotent(C, C.objects[0])
    return PatchedPrederivator(base, shape, patched,
                               _extend_restriction, _retarget_corestriction,
                               f"{base.name}/der2-mutant")


def _restrict_restriction(mutant, base_image, u, src, dst):
    """u*: patched -> other when the patch removed objects."""
    sub = mutant.eval(dst)
    ob = {x: base_image.ob[x] for x in sub.objects}
    mor = {m: base_image.mor[m] for m in sub.nonidentity()}
    return Functor(sub, base_image.target, ob, mor, base_image.name)


def _corestrict_into_sub(mutant, base_image, u, src, dst):
    sub = mutant.eval(src)
    missing = [x for x in base_image.ob.values() if x not in sub.objects]
    if missing:
        raise ValueError(f"mutation breaks the restriction along {u.name}")
    return Functor(base_image.source, sub, base_image.ob, base_image.mor,
                   base_image.name)


def _removal_mutation(base: HoPrederivator, arrow_picker, label: str) -> Prederivator:
    from .prederivator import dia_arrow
    shape = "[1]x[1]"
    src, on_object, _ = dia_arrow(base, "[1]")
    f0 = arrow_picker(base)
    keep = [X for X in src.objects if on_object(X) != f0]
    patched = full_subcategory(base.eval(shape), keep)
    return PatchedPrederivator(base, shape, patched,
                               _restrict_restriction, _corestrict_into_sub,
                               f"{base.name}/{label}")


def der5prime_mutation(base: HoPrederivator) -> Prederivator:
    """Removes the literal diagrams of one arrow, keeping isomorphic copies.

    Strict surjectivity fails; essential surjectivity survives, so only
    the primed axiom is violated.  Use over a groupoid corpus member.
    """
    def pick(D):
        CJ = D.eval("[1]")
        for m in CJ.nonidentity():
            if CJ.is_iso(m):
                return m
        raise ValueError("no invertible non-identity arrow to hide")
    return _removal_mutation(base, pick, "der5p-mutant")


def der5_mutation(base: HoPrederivator) -> Prederivator:
    """Removes all diagrams of an arrow with no isomorphic replacement."""
    def pick(D):
        CJ = D.eval("[1]")
        for m in CJ.nonidentity():
            if not CJ.is_iso(m):
                return m
        raise ValueError("no non-invertible arrow available")
    return _removal_mutation(base, pick, "der5-mutant")


def der1_mutation(base: HoPrederivator) -> Prederivator:
    """Collapses the value at a coproduct to the terminal category."""
    shape = "[0]+[0]"
    patched = poset_simplex(0)

    def res(mutant, base_image, u, src, dst):
        target = base_image.target
        first = target.objects[0]
        return constant_functor(patched, target, first, base_image.name)

    def cores(mutant, base_image, u, src, dst):
        source = base_image.source
        return constant_functor(source, patched, "0", base_image.name)

    return PatchedPrederivator(base, shape, patched, res, cores,
                               f"{base.name}/der1-mutant")


# ---------------------------------------------------------------------------
# labeled map corpus for the equivalence experiment


def _collapse_map(q: NerveSSet, target: TruncatedSSet, vertex: str) -> SimplicialMap:
    assignment = {}
    for n in range(q.dim_bound + 1):
        for x in q.nondeg(n):
            word = tuple(range(n - 1, -1, -1))
            assignment[x] = SimplexExpr(word, vertex)
    return SimplicialMap(q, target, assignment)


def labeled_map_corpus() -> list:
    """Ten maps with ground-truth equivalence labels.

    The labels are decided by direct category-level search: a nerve map
    N(u) is an equivalence exactly when u is an equivalence of categories.
    """
    n0 = standard_simplex(0, 2)
    n1 = nerve(poset_simplex(1), 3)
    n2 = nerve(poset_simplex(2), 3)
    nE = nerve(contractible_groupoid(), 3)
    nz = nerve(group_z2(), 3)
    entries = []
    entries.append(("id_N[1]", identity_map(n1), True))
    entries.append(("id_delta0", identity_map(n0), True))
    entries.append(("collapse_N[1]", _collapse_map(n1, n0, "0"), False))
    entries.append(("vertex0_N[1]",
                    SimplicialMap(n0, n1, {"0": SimplexExpr((), "0")}), False))
    entries.append(("collapse_E", _collapse_map(nE, n0, "0"), True))
    entries.append(("point_into_E",
                    SimplicialMap(n0, nE, {"0": SimplexExpr((), "a")}), True))
    swap = Functor(contractible_groupoid(), contractible_groupoid(),
                   {"a": "b", "b": "a"},
                   {"eab": "eba", "eba": "eab"}, "swap")
    entries.append(("swap_E", nerve_map(swap, source=nE, target=nE), True))
    entries.append(("collapse_z2", _collapse_map(nz, n0, "0"), False))
    const1 = Functor(poset_simplex(1), poset_simplex(1),
                     {"0": "1", "1": "1"}, {"m01": "m11"}, "const1")
    entries.append(("const1_N[1]", nerve_map(const1, source=n1, target=n1), False))
    incl = Functor(poset_simplex(1), poset_simplex(2),
                   {"0": "0", "1": "1"}, {"m01": "m01"}, "incl01")
    entries.append(("incl_N[1]_N[2]", nerve_map(incl, source=n1, target=n2), False))
    return entries


# ---------------------------------------------------------------------------
# random commutative squares


def random_squares(pres, rng: random.Random, count: int) -> list:
    """Commutative squares sampled uniformly from the composable data."""
    cat = pres.category
    mors = sorted(cat.morphisms)
    squares = []
    guard = 0
    while len(squares) < count and guard < 10000:
        guard += 1
        top = rng.choice(mors)
        left = rng.choice([m for m in mors if cat.dom(m) == cat.dom(top)])
        right = rng.choice([m for m in mors if cat.dom(m) == cat.cod(top)])
        diag = cat.compose(right, top)
        bottoms = [m for m in mors
                   if cat.dom(m) == cat.cod(left) and cat.cod(m) == cat.cod(right)
                   and cat.compose(m, left) == diag]
        if not bottoms:
            continue
        squares.append(Square(pres, top, rng.choice(bottoms), left, right))
    return squares
