"""Simplicial structure on prederivator morphisms.

The mapping object between two prederivators has, in level n, the strict
morphisms into the shift of the target by the chain [n].  Shifts, the
diagonal composition, the invertible-chain sub-prederivator, coherent
equivalences, and the desk-scale embedding check all live here.
"""

from __future__ import annotations

from .cats import (
    FiniteCategory,
    Functor,
    NatTransf,
    compose_functors,
    constant_functor,
    full_subcategory,
    identity_functor,
    poset_simplex,
    product_cat,
)
from .nerve import nerve, nerve_product_compare
from .prederivator import (
    ClosureError,
    DiaSample,
    HoPrederivator,
    Prederivator,
    StrictMorphism,
    _left_component,
    _right_component,
    _vertex_functor,
    enumerate_strict_morphisms,
)
from .simplicial import (
    SimplexExpr,
    SimplicialMap,
    TruncatedSSet,
    compose_words,
    enumerate_maps,
    product,
    standard_simplex,
)
from .util import Budget, ensure_budget


# ---------------------------------------------------------------------------
# shifted prederivators


class ShiftedPrederivator(Prederivator):
    """K -> D(J x K), over the sub-sample where the products exist."""

    def __init__(self, D: Prederivator, J_name: str):
        sub = DiaSample(f"{D.sample.name}<<{J_name}")
        self.pairings: dict[str, str] = {}
        for K_name in D.sample.order:
            key = (J_name, K_name)
            if key in D.sample.products:
                sub.add_category(K_name, D.sample.cat(K_name))
                self.pairings[K_name] = D.sample.products[key]
        for name, u in D.sample.functors.items():
            src, dst = D.sample.functor_ends[name]
            if src in self.pairings and dst in self.pairings:
                sub.add_functor(name, src, dst, u)
        for name, a in D.sample.nats.items():
            sf, df = D.sample.nat_ends[name]
            if sf in sub.functors and df in sub.functors:
                sub.add_nat(name, sf, df, a)
        super().__init__(sub, f"{D.name}^{J_name}")
        self.base = D
        self.J_name = J_name
        self.J = D.sample.cat(J_name)

    def paired(self, K_name: str) -> str:
        if K_name not in self.pairings:
            raise ClosureError(
                f"sample lacks the product {self.J_name} x {K_name} needed by the shift")
        return self.pairings[K_name]

    def _eval(self, K_name: str) -> FiniteCategory:
        return self.base.eval(self.paired(K_name))

    def _lift_functor(self, u: Functor, src: str, dst: str) -> Functor:
        """id_J x u between the annotated product categories."""
        P_src = self.base.sample.cat(self.paired(src))
        P_dst = self.base.sample.cat(self.paired(dst))
        ob = {}
        for x in P_src.objects:
            j, k = _left_component(x), _right_component(x)
            ob[x] = f"({j},{u.ob[k]})"
        mor = {}
        for m in P_src.nonidentity():
            jm, km = _left_component(m), _right_component(m)
            mor[m] = f"({jm},{u.on_morphism(km)})"
        return Functor(P_src, P_dst, ob, mor, f"id_{self.J_name}x{u.name}")

    def _on_functor(self, u: Functor, src: str, dst: str) -> Functor:
        lifted = self._lift_functor(u, src, dst)
        return self.base.on_functor(lifted, self.paired(src), self.paired(dst))

    def _on_nat(self, alpha: NatTransf, src: str, dst: str) -> NatTransf:
        u_l = self._lift_functor(alpha.source, src, dst)
        v_l = self._lift_functor(alpha.target, src, dst)
        comps = {}
        for x in self.base.sample.cat(self.paired(src)).objects:
            j, k = _left_component(x), _right_component(x)
            comps[x] = f"({self.J.identities[j]},{alpha.at(k)})"
        lifted = NatTransf(u_l, v_l, comps, f"id x {alpha.name}")
        base_img = self.base.on_nat(lifted, self.paired(src), self.paired(dst))
        ustar = self.on_functor(alpha.source, src, dst)
        vstar = self.on_functor(alpha.target, src, dst)
        return NatTransf(ustar, vstar, dict(base_img.components), base_img.name)


def shift(D: Prederivator, J_name: str) -> ShiftedPrederivator:
    return ShiftedPrederivator(D, J_name)


def chain_embedding(sample: DiaSample, J_name: str, K_name: str, pname: str,
                    t: int) -> Functor:
    """The slice embedding K -> J x K at object t of a chain J = [j]."""
    K = sample.cat(K_name)
    chain = sample.cat(J_name)
    ob = {k: f"({t},{k})" for k in K.objects}
    mor = {m: f"({chain.identities[str(t)]},{m})" for m in K.nonidentity()}
    return Functor(K, sample.cat(pname), ob, mor, f"at{t}_{K_name}")


def chain_step_nat(sample: DiaSample, J_name: str, K_name: str, pname: str,
                   t: int) -> NatTransf:
    """The natural transformation between slice embeddings at t and t+1."""
    K = sample.cat(K_name)
    e0 = chain_embedding(sample, J_name, K_name, pname, t)
    e1 = chain_embedding(sample, J_name, K_name, pname, t + 1)
    comps = {k: f"(m{t}{t + 1},{K.identities[k]})" for k in K.objects}
    return NatTransf(e0, e1, comps, f"step{t}_{K_name}")


# ---------------------------------------------------------------------------
# enrichment samples


def enrichment_sample(n_max: int = 1, depth: int = 0) -> DiaSample:
    """A small sample closed under the products the enrichment needs.

    Base shapes [0] and [1]; chains [n] for n <= n_max with the products
    [n] x K annotated.  ``depth`` adds that many layers of nested interval
    products [1] x ([1] x ...), consumed by the diagonal composition: one
    layer per composition in the deepest parenthesization under test.
    Unit products [0] x K are annotated for every member so degenerated
    level-0 data spans all shapes.
    """
    s = DiaSample(f"enrichment{n_max}-d{depth}")
    for n in range(max(n_max, 1) + 1):
        s.add_category(f"[{n}]", poset_simplex(n))
    s.terminal = "[0]"
    base = ["[0]", "[1]"]
    for n in range(n_max + 1):
        cn = f"[{n}]"
        for K_name in base:
            pname = f"{cn}x{K_name}"
            s.add_category(pname, product_cat(s.cat(cn), s.cat(K_name)))
            s.products[(cn, K_name)] = pname
    layer = [s.products[("[1]", K)] for K in base]
    for _ in range(depth):
        nxt = []
        for K_name in layer:
            nested = f"[1]x({K_name})"
            s.add_category(nested, product_cat(s.cat("[1]"), s.cat(K_name)))
            s.products[("[1]", K_name)] = nested
            nxt.append(nested)
        layer = nxt
    if depth:
        for K_name in [name for name in s.order if "x" in name]:
            if ("[0]", K_name) not in s.products:
                pname = f"[0]x({K_name})"
                s.add_category(pname, product_cat(s.cat("[0]"), s.cat(K_name)))
                s.products[("[0]", K_name)] = pname
    if ("[0]", "[1]") in s.products:
        s.shifts["[0]"] = s.products[("[0]", "[1]")]
    if ("[1]", "[1]") in s.products:
        s.shifts["[1]"] = s.products[("[1]", "[1]")]
    for name in s.order:
        s.add_functor(f"id_{name}", name, name, identity_functor(s.cat(name)))
        if name != "[0]":
            s.add_functor(f"!{name}", name, "[0]",
                          constant_functor(s.cat(name), s.cat("[0]"), "0", f"!{name}"))
        for obj in s.cat(name).objects:
            s.add_functor(f"vx_{name}_{obj}", "[0]", name,
                          _vertex_functor(s.cat("[0]"), s.cat(name), obj))
    return s


# ---------------------------------------------------------------------------
# simplicial hom-sets and operators


def simplicial_hom(D1: Prederivator, D2: Prederivator, n: int,
                   budget: Budget = None, shapes=None) -> list:
    """Level n of the mapping object: strict morphisms D1 -> D2^{[n]}.

    ``shapes`` restricts the component scope (the default is every shape
    whose product with the chain is annotated); reports and comparisons
    must quote the scope they ran at.
    """
    if not 0 <= n <= 3:
        raise ValueError("levels 0..3 only")
    shifted = shift(D2, f"[{n}]")
    if shapes is None:
        shapes = [K for K in D1.sample.order if K in shifted.pairings]
    else:
        shapes = [K for K in shapes if K in shifted.pairings]
    return enumerate_strict_morphisms(D1, shifted, budget, shapes=shapes)


def simplicial_operator(D2: Prederivator, F: StrictMorphism, alpha: tuple,
                        m: int, n: int) -> StrictMorphism:
    """Action of a monotone map [m] -> [n] on a level-n morphism."""
    shifted_m = shift(D2, f"[{m}]")
    chain_m = D2.sample.cat(f"[{m}]")
    comps = {}
    for K_name in F.components:
        if K_name not in shifted_m.pairings:
            continue
        src_p = shifted_m.paired(K_name)
        dst_p = shift(D2, f"[{n}]").paired(K_name)
        P_m = D2.sample.cat(src_p)
        P_n = D2.sample.cat(dst_p)
        ob = {}
        for x in P_m.objects:
            t, k = _left_component(x), _right_component(x)
            ob[x] = f"({alpha[int(t)]},{k})"
        mor = {}
        for mm in P_m.nonidentity():
            tm, km = _left_component(mm), _right_component(mm)
            lo, hi = chain_m.morphisms[tm] if tm in chain_m.morphisms else (None, None)
            a, b = alpha[int(lo)], alpha[int(hi)]
            mor[mm] = f"(m{a}{b},{km})"
        alpha_x_id = Functor(P_m, P_n, ob, mor, f"a{alpha}x id_{K_name}")
        restrict = D2.on_functor(alpha_x_id, src_p, dst_p)
        comps[K_name] = compose_functors(restrict, F.at(K_name))
    return StrictMorphism(F.source, shifted_m, comps, f"{F.name}.a{alpha}")


def compose_simplicial(D3: Prederivator, f: StrictMorphism, g: StrictMorphism,
                       n: int) -> StrictMorphism:
    """Diagonal composition of level-n morphisms g: D1 -> D2^[n], f: D2 -> D3^[n].

    Shifts f by the chain and restricts along t -> (t, (t, -)), which is
    the double-shift-then-diagonal formula collapsed into one restriction.
    """
    cn = f"[{n}]"
    target = shift(D3, cn)
    comps = {}
    for K_name in g.components:
        pn_K = D3.sample.products.get((cn, K_name))
        if pn_K is None or pn_K not in f.components:
            continue
        nested = D3.sample.products.get((cn, pn_K))
        if nested is None:
            raise ClosureError(f"diagonal composition needs {cn} x ({pn_K}) in the sample")
        P_nK = D3.sample.cat(pn_K)
        P_nested = D3.sample.cat(nested)
        ob = {}
        for x in P_nK.objects:
            t, k = _left_component(x), _right_component(x)
            ob[x] = f"({t},({t},{k}))"
        mor = {}
        for m in P_nK.nonidentity():
            tm, km = _left_component(m), _right_component(m)
            mor[m] = f"({tm},({tm},{km}))"
        diag = Functor(P_nK, P_nested, ob, mor, f"diag_{cn}_{K_name}")
        restrict = D3.on_functor(diag, pn_K, nested)
        comps[K_name] = compose_functors(
            restrict, compose_functors(f.at(pn_K), g.at(K_name)))
    if not comps:
        raise ClosureError("diagonal composition has no shape with complete data")
    return StrictMorphism(g.source, target, comps, f"({f.name})*({g.name})")


# ---------------------------------------------------------------------------
# the invertible-chain sub-prederivator


class EqShiftPrederivator(Prederivator):
    """Full sub-prederivator of a chain shift on pointwise-invertible diagrams."""

    def __init__(self, D: Prederivator, n: int):
        self.inner = shift(D, f"[{n}]")
        super().__init__(self.inner.sample, f"{D.name}^eq[{n}]")
        self.base = D
        self.n = n
        self._step_cache: dict = {}

    def _chain_arrow(self, K_name: str, t: int, X: str) -> str:
        key = (K_name, t)
        if key not in self._step_cache:
            pname = self.inner.paired(K_name)
            step = chain_step_nat(self.base.sample, f"[{self.n}]", K_name, pname, t)
            self._step_cache[key] = self.base.on_nat(step, K_name, pname)
        return self._step_cache[key].at(X)

    def kept_objects(self, K_name: str) -> list:
        C = self.inner.eval(K_name)
        CK = self.base.eval(K_name)
        kept = []
        for X in C.objects:
            if all(CK.is_iso(self._chain_arrow(K_name, t, X)) for t in range(self.n)):
                kept.append(X)
        return kept

    def _eval(self, K_name: str) -> FiniteCategory:
        return full_subcategory(self.inner.eval(K_name), self.kept_objects(K_name))

    def _on_functor(self, u: Functor, src: str, dst: str) -> Functor:
        big = self.inner.on_functor(u, src, dst)
        sub_src = self.eval(dst)
        ob = {x: big.ob[x] for x in sub_src.objects}
        mor = {m: big.mor[m] for m in sub_src.nonidentity()}
        return Functor(sub_src, self.eval(src), ob, mor, big.name)

    def _on_nat(self, alpha: NatTransf, src: str, dst: str) -> NatTransf:
        big = self.inner.on_nat(alpha, src, dst)
        ustar = self.on_functor(alpha.source, src, dst)
        vstar = self.on_functor(alpha.target, src, dst)
        comps = {X: big.at(X) for X in ustar.source.objects}
        return NatTransf(ustar, vstar, comps, big.name)


def eq_shift(D: Prederivator, n: int) -> Prederivator:
    if n == 0:
        return shift(D, "[0]")
    return EqShiftPrederivator(D, n)


# ---------------------------------------------------------------------------
# coherent equivalences


def _vertex_restriction(E, K_name: str, t: int) -> Functor:
    """(slice at t)* on the value of an interval (eq-)shift."""
    inner = E.inner if isinstance(E, EqShiftPrederivator) else E
    pname = inner.paired(K_name)
    emb = chain_embedding(inner.base.sample, inner.J_name, K_name, pname, t)
    star = inner.base.on_functor(emb, K_name, pname)
    if E is not inner:
        sub = E.eval(K_name)
        star = Functor(sub, star.target, {x: star.ob[x] for x in sub.objects},
                       {m: star.mor[m] for m in sub.nonidentity()}, star.name)
    return star


class CoherenceVerdict:
    def __init__(self):
        self.ok = True
        self.clauses: list = []

    def record(self, clause: str, passed: bool):
        self.clauses.append((clause, passed))
        if not passed:
            self.ok = False

    def lines(self):
        return [f"  {'pass' if p else 'FAIL'}: {c}" for c, p in self.clauses]


def is_coherent_equivalence(F: StrictMorphism, G: StrictMorphism,
                            a: StrictMorphism, b: StrictMorphism) -> CoherenceVerdict:
    """Check the quadruple shape: the chains connect the round trips to
    the identities, vertexwise on every shared shape."""
    verdict = CoherenceVerdict()
    for label, chain_mor, left, right in [("a", a, G, F), ("b", b, F, G)]:
        E = chain_mor.target
        for K_name in sorted(chain_mor.components):
            if K_name not in left.components or K_name not in right.components:
                continue
            v0 = compose_functors(_vertex_restriction(E, K_name, 0),
                                  chain_mor.at(K_name))
            v1 = compose_functors(_vertex_restriction(E, K_name, 1),
                                  chain_mor.at(K_name))
            round_trip = compose_functors(left.at(K_name), right.at(K_name))
            ident = identity_functor(chain_mor.source.eval(K_name))
            pair = {v0.key(), v1.key()}
            verdict.record(
                f"{label} at {K_name}: vertices are the round trip and the identity",
                pair == {round_trip.key(), ident.key()}
                or (round_trip.key() == ident.key() and pair == {ident.key()}))
    return verdict


# ---------------------------------------------------------------------------
# embedding check


class EmbeddingReport:
    def __init__(self, name):
        self.name = name
        self.injective = True
        self.map_count = 0
        self.hom_count = 0
        self.image_size = 0

    @property
    def bijective_over_sample(self) -> bool:
        return self.injective and self.image_size == self.hom_count == self.map_count

    def lines(self):
        return [
            f"embedding check {self.name}: {self.map_count} simplicial maps, "
            f"{self.hom_count} strict morphisms over the sample",
            f"  injective: {'yes' if self.injective else 'NO'}",
            f"  bijective over this sample: "
            f"{'yes' if self.bijective_over_sample else 'no (informational)'}",
        ]


def _chain_shape_iso(delta_n: TruncatedSSet, chain_nerve) -> SimplicialMap:
    """Identify the standard simplex with the nerve of the chain poset."""
    assignment = {}
    for m in range(delta_n.dim_bound + 1):
        for x in delta_n.nondeg(m):
            verts = [int(ch) for ch in x]
            chain = (str(verts[0]),) + tuple(
                f"m{verts[i]}{verts[i + 1]}" for i in range(len(verts) - 1))
            assignment[x] = chain_nerve.chain_expr(chain)
    return SimplicialMap(delta_n, chain_nerve, assignment)


def _inverse_iso(iso: SimplicialMap):
    table = {img: SimplexExpr((), x) for x, img in iso.assignment.items()}

    def apply(e: SimplexExpr) -> SimplexExpr:
        base = table[SimplexExpr((), e.base)]
        return SimplexExpr(compose_words(e.word, base.word), base.base)

    return apply


def induced_strict_morphism(DQ: HoPrederivator, DR: HoPrederivator, n: int,
                            mu: SimplicialMap, shapes) -> StrictMorphism:
    """The level-n morphism induced by a map mu: Q x delta_n -> R.

    Component at K sends a K-shaped diagram nu of Q to the ([n] x K)-shaped
    diagram (t, k) -> mu(nu(k), t) of R, splitting nerve cells through the
    product comparison.
    """
    shifted = shift(DR, f"[{n}]")
    chain_nerve = nerve(DR.sample.cat(f"[{n}]"), 2)
    shape_inv = _inverse_iso(_chain_shape_iso(mu.source.right, chain_nerve))
    comps = {}
    for K_name in shapes:
        dq = DQ.data(K_name)
        pname = shifted.paired(K_name)
        dr = DR.data(pname)
        P_split = product(chain_nerve, dq.nerve)
        compare = nerve_product_compare(dr.nerve, P_split)

        def image_cell(level, q_of):
            P_target = dr.exp.products[level]
            assignment = {}
            for xs in P_target.levels.values():
                for pid in xs:
                    e1, e2 = P_target.pair_of[pid]
                    t_part, k_part = P_split.components(compare.apply(e1))
                    q_part = q_of(k_part, e2)
                    d_part = shape_inv(t_part)
                    assignment[pid] = mu.apply(mu.source.pair_expr(q_part, d_part))
            return SimplicialMap(P_target, dr.exp.T_t, assignment)

        ob = {}
        for c in dq.pres.category.objects:
            nu = DQ._underlying_map(dq.exp.cell_map[c], K_name)
            cell = image_cell(0, lambda k_part, _e2, nu=nu: nu.apply(k_part))
            ob[c] = dr.exp.locate(cell).base
        mor = {}
        P1_q = dq.exp.products[1]
        for mid in dq.pres.category.nonidentity():
            edge = dq.exp.map_of(dq.pres.reps[mid])
            cell = image_cell(
                1, lambda k_part, e2, edge=edge: edge.apply(P1_q.pair_expr(k_part, e2)))
            mor[mid] = dr.pres.cls(dr.exp.locate(cell))
        comps[K_name] = Functor(DQ.eval(K_name), shifted.eval(K_name), ob, mor)
    return StrictMorphism(DQ, shifted, comps, "induced")


def embedding_check(Q: TruncatedSSet, R: TruncatedSSet, n: int,
                    sample: DiaSample = None, budget: Budget = None) -> EmbeddingReport:
    """Injectivity of the passage from simplicial maps to strict levels.

    Surjectivity over the sample is reported, never asserted: a finite
    sample may admit strict families with no simplicial origin.
    """
    budget = ensure_budget(budget, "embedding check")
    sample = sample if sample is not None else enrichment_sample(max(n, 1))
    DQ = HoPrederivator(Q, sample, budget)
    DR = HoPrederivator(R, sample, budget)
    report = EmbeddingReport(f"{Q.name} -> {R.name} at level {n}")
    delta_n = standard_simplex(n, 2)
    P = product(Q.truncate(2), delta_n)
    maps = enumerate_maps(P, R.truncate(2), budget)
    report.map_count = len(maps)
    shifted = shift(DR, f"[{n}]")
    shapes = [K for K in sample.order if K in shifted.pairings]
    homs = simplicial_hom(DQ, DR, n, budget)
    report.hom_count = len(homs)
    images = set()
    for mu in maps:
        F = induced_strict_morphism(DQ, DR, n, mu, shapes)
        images.add(F.key())
    report.image_size = len(images & {F.key() for F in homs})
    report.injective = len(images) == len(maps)
    return report
