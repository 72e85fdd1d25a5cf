"""Categories of simplices, the last-vertex projection, and the marked class.

The category of simplices of a truncated set has the (possibly degenerate)
simplices as objects and the simplex maps over the set as morphisms.  The
marked morphisms are the ones carrying the last vertex of the source to
the last vertex of the target; the projection collapses every simplex to
its last vertex and sends marked morphisms to degenerate edges, hence to
isomorphisms in any homotopy category.  Reports carry the truncation
depth: the construction is depth-free only on paper.
"""

from __future__ import annotations

from itertools import product as iproduct

from .cats import FiniteCategory, Functor
from .nerve import NerveSSet, ho, nerve, require_quasicategory
from .prederivator import simplicial_action
from .simplicial import (
    SimplexExpr,
    SimplicialMap,
    TruncatedSSet,
    ValidationReport,
    parse_expr,
)
from .util import Budget, ensure_budget


def _monotone_tuples(m: int, n: int):
    return [t for t in iproduct(range(n + 1), repeat=m + 1)
            if all(t[i] <= t[i + 1] for i in range(m))]


def _obj_id(m: int, e: SimplexExpr) -> str:
    return f"{m}:{e.token()}"


def _mor_id(src: str, dst: str, alpha: tuple) -> str:
    return f"{src}->{dst}:" + "".join(str(a) for a in alpha)


class SimplexCategory:
    """Truncated category of simplices with the last-vertex class marked."""

    def __init__(self, S: TruncatedSSet, depth: int):
        if depth > S.dim_bound:
            raise ValueError("depth exceeds the truncation of the simplicial set")
        self.sset = S
        self.depth = depth
        objects = []
        self.simplex_of = {}
        for m in range(depth + 1):
            for e in S.total(m):
                oid = _obj_id(m, e)
                objects.append(oid)
                self.simplex_of[oid] = (m, e)
        morphisms = {}
        identities = {}
        self.alpha_of = {}
        for tgt in objects:
            n, y = self.simplex_of[tgt]
            for m in range(depth + 1):
                for alpha in _monotone_tuples(m, n):
                    x = simplicial_action(S, alpha, y)
                    src = _obj_id(m, x)
                    mid = _mor_id(src, tgt, alpha)
                    morphisms[mid] = (src, tgt)
                    self.alpha_of[mid] = alpha
                    if src == tgt and alpha == tuple(range(n + 1)):
                        identities[tgt] = mid
        compose = {}
        idset = set(identities.values())
        by_src: dict = {}
        for mid, (src, tgt) in morphisms.items():
            by_src.setdefault(src, []).append(mid)
        for f, (fsrc, ftgt) in morphisms.items():
            if f in idset:
                continue
            for g in by_src.get(ftgt, ()):
                if g in idset:
                    continue
                gsrc, gtgt = morphisms[g]
                alpha_g = self.alpha_of[g]
                alpha_f = self.alpha_of[f]
                composite_alpha = tuple(alpha_g[a] for a in alpha_f)
                compose[(g, f)] = _mor_id(fsrc, gtgt, composite_alpha)
        self.category = FiniteCategory(objects, morphisms, compose, identities,
                                       f"simplices({S.name})<= {depth}")
        self.marked = frozenset(
            mid for mid, (src, tgt) in morphisms.items()
            if self._is_last_vertex(mid))

    def _is_last_vertex(self, mid: str) -> bool:
        alpha = self.alpha_of[mid]
        src, tgt = self.category.morphisms[mid]
        n = self.simplex_of[tgt][0]
        return alpha[-1] == n

    def __repr__(self):
        return (f"<simplex category of {self.sset.name} at depth {self.depth}: "
                f"{len(self.category.objects)} objects, "
                f"{len(self.category.morphisms)} morphisms, {len(self.marked)} marked>")


def category_of_simplices(S: TruncatedSSet, d: int) -> SimplexCategory:
    return SimplexCategory(S, d)


def simplex_functor(f: SimplicialMap, d: int, source: SimplexCategory = None,
                    target: SimplexCategory = None) -> Functor:
    """The functor between simplex categories induced by a simplicial map."""
    src = source if source is not None else category_of_simplices(f.source, d)
    tgt = target if target is not None else category_of_simplices(f.target, d)
    ob = {}
    for oid, (m, e) in src.simplex_of.items():
        ob[oid] = _obj_id(m, f.apply(e))
    mor = {}
    for mid in src.category.nonidentity():
        s_id, t_id = src.category.morphisms[mid]
        mor[mid] = _mor_id(ob[s_id], ob[t_id], src.alpha_of[mid])
    return Functor(src.category, tgt.category, ob, mor, f"simplices({f!r})")


def last_vertex_projection(S: TruncatedSSet, d: int, nerve_dim: int = 2):
    """The simplicial map from the nerve of the simplex category onto S.

    A chain of simplex maps goes to the restriction of its last member
    along the track of the last vertices.  Returns (simplex category,
    nerve, map); the map is validated, and a failure is surfaced rather
    than repaired.
    """
    sc = category_of_simplices(S, d)
    N = nerve(sc.category, max(2, nerve_dim))
    assignment = {}
    for k in range(N.dim_bound + 1):
        for cid in N.nondeg(k):
            chain = N.chain_of[cid]
            src_obj, mors = chain[0], chain[1:]
            stages = [src_obj]
            for mid in mors:
                stages.append(sc.category.cod(mid))
            track = []
            for i in range(len(stages)):
                pos = sc.simplex_of[stages[i]][0]  # last vertex of stage i
                for mid in mors[i:]:
                    pos = sc.alpha_of[mid][pos]
                track.append(pos)
            n_last, last = sc.simplex_of[stages[-1]]
            assignment[cid] = simplicial_action(S, tuple(track), last)
    p = SimplicialMap(N, S, assignment)
    report = p.validate()
    if not report.ok:
        raise AssertionError(
            f"last-vertex projection is not simplicial: {report.violations[0]}")
    return sc, N, p


def marked_closure_report(sc: SimplexCategory) -> ValidationReport:
    """Identities are marked and marked morphisms compose to marked ones."""
    report = ValidationReport(f"marked class of {sc.sset.name} at depth {sc.depth}")
    C = sc.category
    for x, i in C.identities.items():
        report.checked += 1
        if i not in sc.marked:
            report.add(f"identity of {x!r} is not marked")
    for f in sorted(sc.marked):
        for g in sorted(sc.marked):
            if C.cod(f) != C.dom(g):
                continue
            report.checked += 1
            if C.compose(g, f) not in sc.marked:
                report.add(f"composite of marked {g!r} . {f!r} is not marked")
    return report


def naturality_report(f: SimplicialMap, d: int, nerve_dim: int = 2) -> ValidationReport:
    """p is natural: the square with the induced simplex functor commutes."""
    report = ValidationReport(f"naturality of the projection on {f.source.name}")
    sc_s, N_s, p_s = last_vertex_projection(f.source, d, nerve_dim)
    sc_t, N_t, p_t = last_vertex_projection(f.target, d, nerve_dim)
    F = simplex_functor(f, d, sc_s, sc_t)
    if not F.validate().ok:
        report.add("induced functor on simplex categories is broken")
        return report
    from .nerve import nerve_map
    from .simplicial import compose_maps
    NF = nerve_map(F, source=N_s, target=N_t)
    left = compose_maps(p_t, NF)
    right = compose_maps(f, p_s)
    report.checked += 1
    if left.key() != right.key():
        report.add("p . N(simplices(f)) differs from f . p")
    return report


def check_inverts_L(Q: TruncatedSSet, d: int, budget: Budget = None,
                    pres=None, data=None) -> ValidationReport:
    """Every marked morphism projects to a Ho-invertible edge of Q.

    The report names the depth; the full localization property is out of
    scope and never claimed here.
    """
    budget = ensure_budget(budget, f"marked-class check on {Q.name}")
    require_quasicategory(Q, budget)
    pres = pres if pres is not None else ho(Q, budget, verified=True)
    sc, N, p = data if data is not None else last_vertex_projection(Q, d)
    report = ValidationReport(f"marked morphisms of {Q.name} at depth {d} invert in Ho")
    for mid in sorted(sc.marked):
        if sc.category.is_identity(mid):
            continue
        report.checked += 1
        edge = p.apply(N.chain_expr((sc.category.dom(mid), mid)))
        if not pres.category.is_iso(pres.cls(edge)):
            report.add(f"marked morphism {mid!r} projects to the "
                       f"non-invertible edge {edge.token()}")
    return report


def to_dot(sc: SimplexCategory) -> str:
    """Graph export, marked morphisms drawn bold."""
    lines = ["digraph simplices {"]
    for oid in sc.category.objects:
        lines.append(f'  "{oid}";')
    for mid in sc.category.nonidentity():
        src, tgt = sc.category.morphisms[mid]
        style = " [style=bold]" if mid in sc.marked else ""
        lines.append(f'  "{src}" -> "{tgt}"{style};')
    lines.append("}")
    return "\n".join(lines) + "\n"
