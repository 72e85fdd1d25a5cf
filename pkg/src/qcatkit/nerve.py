"""Nerves, horn filling, and homotopy categories of quasicategories.

The nerve of a finite category is presented by chains of composable
non-identity morphisms; it carries a 2-coskeletal certificate, so all
truncated computations with it are exact.

The homotopy category of a quasicategory has the vertices as objects and
homotopy classes of 1-simplices as morphisms.  Two parallel edges are
homotopic when they are two faces of a 2-simplex whose remaining face is
outer and degenerate; classes are the symmetric-transitive closure of that
relation (for quasicategories the one-step relation is already closed,
which the tests assert on the corpus).
"""

from __future__ import annotations

from .cats import (
    FiniteCategory,
    Functor,
    NatTransf,
    product_cat,
)
from .simplicial import (
    ProductSSet,
    SimplexExpr,
    SimplicialMap,
    TruncatedSSet,
    compose_words,
    enumerate_maps,
    horn,
    insert_letter,
    product,
    standard_simplex,
)
from .util import Budget, UnionFind, ensure_budget


# ---------------------------------------------------------------------------
# nerves


class NerveSSet(TruncatedSSet):
    """Truncated nerve of a finite category."""

    def __init__(self, J: FiniteCategory, D: int = 3):
        if D < 2:
            raise ValueError("nerve truncation must be >= 2")
        self.cat = J
        levels = {0: list(J.objects)}
        self.chain_of = {x: (x,) for x in J.objects}
        by_dom: dict = {}
        for m in J.nonidentity():
            by_dom.setdefault(J.dom(m), []).append(m)
        prev = [(x,) for x in J.objects]  # chains as (source, m1, m2, ...)
        for n in range(1, D + 1):
            cur = []
            for c in prev:
                tail = c[0] if n == 1 else J.cod(c[-1])
                for m in by_dom.get(tail, ()):
                    cur.append(c + (m,))
            ids = []
            for c in cur:
                cid = "|".join(c[1:])
                ids.append(cid)
                self.chain_of[cid] = c
            levels[n] = ids
            prev = cur
        faces = {}
        super().__init__(D, levels, faces, coskeletal_from=2, name=f"N({J.name})")
        for n in range(1, D + 1):
            for cid in self.nondeg(n):
                c = self.chain_of[cid]
                for i in range(n + 1):
                    faces[(cid, i)] = self._chain_face(c, i)
        self.faces = faces

    def _chain_face(self, c, i) -> SimplexExpr:
        src, mors = c[0], list(c[1:])
        n = len(mors)
        J = self.cat
        if i == 0:
            rest = mors[1:]
            new_src = J.cod(mors[0])
            return self.chain_expr((new_src, *rest))
        if i == n:
            return self.chain_expr((src, *mors[:-1]))
        merged = mors[:i - 1] + [J.compose(mors[i], mors[i - 1])] + mors[i + 1:]
        return self.chain_expr((src, *merged))

    def chain_expr(self, c) -> SimplexExpr:
        """Simplex expression of a chain that may contain identities."""
        src, mors = c[0], list(c[1:])
        J = self.cat
        for p, m in enumerate(mors):
            if J.is_identity(m):
                word_rest = self.chain_expr((src, *mors[:p], *mors[p + 1:]))
                return SimplexExpr(insert_letter(p, word_rest.word), word_rest.base)
        cid = c[0] if not mors else "|".join(mors)
        return SimplexExpr((), cid)

    def expr_chain(self, e: SimplexExpr):
        """The (possibly degenerate) chain presented by an expression."""
        c = self.chain_of[e.base]
        src, mors = c[0], list(c[1:])
        J = self.cat
        for j in reversed(e.word):
            # s_j inserts an identity after position j
            at = J.cod(mors[j - 1]) if j >= 1 else src
            mors.insert(j, J.identities[at])
        return (src, *mors)


def nerve(J: FiniteCategory, D: int = 3) -> NerveSSet:
    return NerveSSet(J, D)


def nerve_map(u: Functor, D: int = 3, source: NerveSSet = None, target: NerveSSet = None) -> SimplicialMap:
    """The simplicial map N(u) between truncated nerves."""
    src = source if source is not None else nerve(u.source, D)
    tgt = target if target is not None else nerve(u.target, D)
    assignment = {}
    for n in range(src.dim_bound + 1):
        for cid in src.nondeg(n):
            c = src.chain_of[cid]
            image = (u.ob[c[0]],) + tuple(u.on_morphism(m) for m in c[1:])
            assignment[cid] = tgt.chain_expr(image)
    return SimplicialMap(src, tgt, assignment)


def nerve_product_compare(NJK: NerveSSet, P: ProductSSet) -> SimplicialMap:
    """Canonical isomorphism N(J x K) -> N(J) x N(K) of presentations.

    ``NJK`` must be the nerve of a ``product_cat`` whose object and
    morphism identifiers are literal pairs, and ``P`` the product of the
    factor nerves.
    """
    NJ: NerveSSet = P.left
    NK: NerveSSet = P.right

    def split(tok: str):
        depth = 0
        for pos, ch in enumerate(tok):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 1:
                return tok[1:pos], tok[pos + 1:-1]
        raise ValueError(f"not a pair identifier: {tok!r}")

    assignment = {}
    for n in range(NJK.dim_bound + 1):
        for cid in NJK.nondeg(n):
            c = NJK.chain_of[cid]
            lefts = [split(t)[0] for t in c]
            rights = [split(t)[1] for t in c]
            e1 = NJ.chain_expr(tuple(lefts))
            e2 = NK.chain_expr(tuple(rights))
            assignment[cid] = P.pair_expr(e1, e2)
    return SimplicialMap(NJK, P, assignment)


def nerve_product_compare_inv(P: ProductSSet, NJK: NerveSSet) -> SimplicialMap:
    """Canonical isomorphism N(J) x N(K) -> N(J x K)."""
    NJ: NerveSSet = P.left
    NK: NerveSSet = P.right
    JK = NJK.cat
    assignment = {}
    for n in range(P.dim_bound + 1):
        for pid in P.nondeg(n):
            e1, e2 = P.pair_of[pid]
            c1 = NJ.expr_chain(e1)
            c2 = NK.expr_chain(e2)
            pair_chain = (f"({c1[0]},{c2[0]})",) + tuple(
                f"({m1},{m2})" for m1, m2 in zip(c1[1:], c2[1:]))
            assignment[pid] = NJK.chain_expr(pair_chain)
    return SimplicialMap(P, NJK, assignment)


# ---------------------------------------------------------------------------
# quasicategory detection


class QcatReport:
    def __init__(self, name: str, max_dim: int):
        self.name = name
        self.max_dim = max_dim
        self.ok = True
        self.unique_fillers = True
        self.witness = None
        self.horns_checked = 0
        self.by_horn: dict = {}

    def lines(self) -> list:
        head = (f"quasicategory check on {self.name} up to dim {self.max_dim}: "
                f"{'pass' if self.ok else 'FAIL'}")
        out = [head]
        for (n, i), (count, unique) in sorted(self.by_horn.items()):
            out.append(f"  horn({n},{i}): {count} instances, "
                       f"{'unique fillers' if unique else 'fillers not unique'}")
        if self.witness is not None:
            out.append(f"  unfilled horn: {self.witness}")
        return out


def _check_level2_horn(S: TruncatedSSet, report: QcatReport, budget: Budget) -> None:
    """Inner 2-horns without the generic map enumeration.

    A map from the 2-horn is exactly a composable pair of edges; a filler
    is a 2-simplex with those outer faces.
    """
    by_source: dict = {}
    for e in S.total(1):
        by_source.setdefault(S.edge_endpoints(e)[0], []).append(e)
    fillers: dict = {}
    for sigma in S.total(2):
        budget.spend()
        key = (S.face(sigma, 2), S.face(sigma, 0))
        fillers[key] = fillers.get(key, 0) + 1
    count = 0
    unique = True
    for f in S.total(1):
        for g in by_source.get(S.edge_endpoints(f)[1], ()):
            budget.spend()
            count += 1
            hits = fillers.get((f, g), 0)
            if hits == 0:
                report.ok = False
                if report.witness is None:
                    report.witness = f"horn(2,1) d2={f.token()} d0={g.token()}"
            if hits != 1:
                unique = False
    report.by_horn[(2, 1)] = (count, unique)
    report.horns_checked += count
    if not unique:
        report.unique_fillers = False


def is_quasicategory(S: TruncatedSSet, budget: Budget = None, max_dim: int = None) -> QcatReport:
    """Check that every inner horn of dimension 2..max_dim has a filler."""
    budget = ensure_budget(budget, f"quasicategory check on {S.name}")
    max_dim = max_dim if max_dim is not None else S.dim_bound
    report = QcatReport(S.name, max_dim)
    _check_level2_horn(S, report, budget)
    for n in range(3, max_dim + 1):
        shape = standard_simplex(n, max(2, n))
        for i in range(1, n):
            hn = horn(n, i, max(2, n - 1))
            unique = True
            count = 0
            for hmap in enumerate_maps(hn, S, budget):
                count += 1
                fillers = enumerate_maps(shape, S, budget, fixed=hmap.assignment)
                if not fillers:
                    report.ok = False
                    if report.witness is None:
                        desc = {x: e.token() for x, e in sorted(hmap.assignment.items())}
                        report.witness = f"horn({n},{i}) {desc}"
                if len(fillers) != 1:
                    unique = False
            report.by_horn[(n, i)] = (count, unique)
            report.horns_checked += count
            if not unique:
                report.unique_fillers = False
    return report


_QCAT_CACHE: dict = {}


def require_quasicategory(S: TruncatedSSet, budget: Budget = None) -> QcatReport:
    key = id(S)
    report = _QCAT_CACHE.get(key)
    if report is None or report[0] is not S:
        rep = is_quasicategory(S, budget)
        _QCAT_CACHE[key] = (S, rep)
        report = (S, rep)
    rep = report[1]
    if not rep.ok:
        raise ValueError(f"{S.name} is not a quasicategory: {rep.witness}")
    return rep


# ---------------------------------------------------------------------------
# homotopy relation and Ho


def _is_degenerate_edge(S: TruncatedSSet, e: SimplexExpr) -> bool:
    return len(e.word) == 1 and S.dim_of[e.base] == 0


def homotopy_classes(Q: TruncatedSSet) -> dict:
    """Map each 1-simplex to the canonical representative of its class."""
    uf = UnionFind(e for e in Q.total(1))
    for sigma in Q.total(2):
        d0 = Q.face(sigma, 0)
        d1 = Q.face(sigma, 1)
        d2 = Q.face(sigma, 2)
        if _is_degenerate_edge(Q, d2):
            uf.union(d0, d1)
        if _is_degenerate_edge(Q, d0):
            uf.union(d1, d2)
    return uf.classes()


def one_step_homotopic(Q: TruncatedSSet, f: SimplexExpr, g: SimplexExpr) -> bool:
    """The unclosured relation: some 2-simplex exhibits f and g directly."""
    for sigma in Q.total(2):
        d0, d1, d2 = (Q.face(sigma, i) for i in range(3))
        if _is_degenerate_edge(Q, d2) and {f, g} <= {d0, d1}:
            return True
        if _is_degenerate_edge(Q, d0) and {f, g} <= {d1, d2}:
            return True
    return False


def homotopic(Q: TruncatedSSet, f: SimplexExpr, g: SimplexExpr,
              budget: Budget = None) -> bool:
    require_quasicategory(Q, budget)
    if Q.edge_endpoints(f) != Q.edge_endpoints(g):
        raise ValueError("edges do not share endpoints")
    classes = homotopy_classes(Q)
    return classes[f] == classes[g]


class HoPresentation:
    """The homotopy category of a quasicategory, with its class data.

    ``class_map`` sends the token of every 1-simplex to the morphism
    identifier (the token of the canonical class representative).
    """

    def __init__(self, Q: TruncatedSSet, category: FiniteCategory, class_map, reps):
        self.sset = Q
        self.category = category
        self.class_map = dict(class_map)
        self.reps = dict(reps)  # morphism id -> representative SimplexExpr

    def cls(self, e: SimplexExpr) -> str:
        return self.class_map[e.token()]

    def __repr__(self):
        return f"<Ho({self.sset.name}): {self.category!r}>"


def ho(Q: TruncatedSSet, budget: Budget = None, verified: bool = False) -> HoPresentation:
    """The homotopy category, by horn filling.

    Composition of classes is read off the 2-simplices: any 2-simplex
    witnesses that its d_1-face is a composite of its d_2 and d_0 faces.
    Filler independence is checked on the fly; a conflict means the input
    was not a quasicategory.
    """
    if not verified:
        require_quasicategory(Q, budget)
    classes = homotopy_classes(Q)
    objects = list(Q.nondeg(0))
    class_map = {}
    reps = {}
    for e, rep in classes.items():
        class_map[e.token()] = rep.token()
        reps.setdefault(rep.token(), rep)
    morphisms = {}
    identities = {}
    for mid, rep in reps.items():
        a, b = Q.edge_endpoints(rep)
        morphisms[mid] = (a, b)
    for x in objects:
        degenerate = SimplexExpr((0,), x)
        identities[x] = class_map[degenerate.token()]
    compose = {}
    for sigma in Q.total(2):
        f = class_map[Q.face(sigma, 2).token()]
        g = class_map[Q.face(sigma, 0).token()]
        h = class_map[Q.face(sigma, 1).token()]
        if f in identities.values() or g in identities.values():
            continue
        prev = compose.get((g, f))
        if prev is None:
            compose[(g, f)] = h
        elif prev != h:
            raise ValueError(
                f"composition in Ho({Q.name}) depends on the filler: "
                f"[{g}] o [{f}] gave {prev} and {h}")
    category = FiniteCategory(objects, morphisms, compose, identities, f"Ho({Q.name})")
    return HoPresentation(Q, category, class_map, reps)


def ho_on_map(f: SimplicialMap, src_ho: HoPresentation = None,
              tgt_ho: HoPresentation = None, budget: Budget = None) -> Functor:
    """The induced functor between homotopy categories."""
    src_ho = src_ho if src_ho is not None else ho(f.source, budget)
    tgt_ho = tgt_ho if tgt_ho is not None else ho(f.target, budget)
    ob = {x: f.assignment[x].base for x in src_ho.category.objects}
    mor = {}
    for mid in src_ho.category.nonidentity():
        rep = src_ho.reps[mid]
        mor[mid] = tgt_ho.cls(f.apply(rep))
    return Functor(src_ho.category, tgt_ho.category, ob, mor, f"Ho({f.source.name}->{f.target.name})")


def is_iso_in_ho(hopres: HoPresentation, e: SimplexExpr) -> bool:
    return hopres.category.is_iso(hopres.cls(e))


def counit_functor(N: NerveSSet, hopres: HoPresentation = None) -> Functor:
    """The comparison Ho(N(J)) -> J, an isomorphism of categories."""
    hopres = hopres if hopres is not None else ho(N)
    J = N.cat
    ob = {x: x for x in hopres.category.objects}
    mor = {}
    for mid in hopres.category.nonidentity():
        chain = N.expr_chain(hopres.reps[mid])
        src, mors = chain[0], chain[1:]
        m = J.identities[src]
        for step in mors:
            m = J.compose(step, m)
        mor[mid] = m
    return Functor(hopres.category, J, ob, mor, f"counit_{J.name}")


def functor_is_isomorphism(F: Functor) -> bool:
    obs = sorted(F.ob.values())
    if obs != sorted(F.target.objects):
        return False
    if len(set(F.ob.values())) != len(F.ob):
        return False
    images = [F.on_morphism(m) for m in F.source.morphisms]
    return sorted(images) == sorted(F.target.morphisms) and len(set(images)) == len(images)
