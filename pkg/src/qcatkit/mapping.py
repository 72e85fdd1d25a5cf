"""Exponentials, mapping spaces, horn filling, and square lifting.

Truncated exponentials are exact when the target carries a coskeletal
certificate c and both operands are known at least up to level c: maps out
of anything are then determined by their c-truncation, so working at level
max(c, 2) loses nothing.  All corpus targets are nerves (c = 2) or
certified constructions derived from them.
"""

from __future__ import annotations

from .nerve import HoPresentation, ho, require_quasicategory
from .simplicial import (
    SimplexExpr,
    SimplicialMap,
    TruncatedSSet,
    compose_maps,
    compose_words,
    delta_map,
    enumerate_maps,
    horn,
    insert_letter,
    product,
    standard_simplex,
)
from .util import Budget, ensure_budget


def full_degeneracy(n: int) -> tuple:
    """The word collapsing an n-simplex onto its (single) vertex."""
    return tuple(range(n - 1, -1, -1))


def top_cell(n: int) -> str:
    return "".join(str(i) for i in range(n + 1))


class ExactnessError(ValueError):
    pass


def _check_exactness(T: TruncatedSSet, S: TruncatedSSet, k: int):
    if not 2 <= k <= 3:
        raise ExactnessError(f"exponential level {k} out of the supported range 2..3")
    c = T.coskeletal_from
    if c is None:
        raise ExactnessError(f"target {T.name} carries no coskeletal certificate")
    if min(S.dim_bound, T.dim_bound) < c:
        raise ExactnessError(
            f"exactness fails: {T.name} is {c}-coskeletal but data is only known "
            f"up to level {min(S.dim_bound, T.dim_bound)}")
    return max(c, 2)


class Exponential:
    """Levels 0..k of T^S, presented as a truncated simplicial set.

    Level n consists of the simplicial maps S x Δn -> T; faces and
    degeneracies are induced by the cosimplicial structure of the standard
    simplices.  Nondegenerate cells get short identifiers ``c{n}_{i}`` in
    canonical order; ``cell_map`` recovers the underlying map.
    """

    def __init__(self, T: TruncatedSSet, S: TruncatedSSet, k: int = 2,
                 budget: Budget = None, fixed_levels=None, name: str = None):
        budget = ensure_budget(budget, f"exponential {T.name}^{S.name}")
        level = _check_exactness(T, S, k)
        self.base = T
        self.exponent = S
        self.k = k
        self.S_t = S.truncate(level)
        self.T_t = T.truncate(level)
        self.products = {n: product(self.S_t, standard_simplex(n, max(n, level)))
                         for n in range(k + 1)}
        self.name = name or f"({T.name}^{S.name})"
        fixed_levels = fixed_levels or {}

        self._sections = {}
        self._collapses = {}
        self._face_maps = {}
        self._degeneracy_endos = {}
        for n in range(1, k + 1):
            self._sections[n] = {
                j: self._shape_map(self._delta_vertexmap(j, n), n - 1, n)
                for j in range(n)}
            self._collapses[n] = {
                j: self._shape_map(self._sigma_vertexmap(j, n), n, n - 1)
                for j in range(n)}
            self._face_maps[n] = {
                i: self._shape_map(self._delta_vertexmap(i, n), n - 1, n)
                for i in range(n + 1)}
            # the idempotent collapsing onto the j-th degenerate image
            self._degeneracy_endos[n] = {
                j: self._shape_map(tuple(self._delta_vertexmap(j, n)[t]
                                         for t in self._sigma_vertexmap(j, n)), n, n)
                for j in range(n)}

        raw = {}
        for n in range(k + 1):
            raw[n] = enumerate_maps(self.products[n], self.T_t, budget,
                                    fixed=fixed_levels.get(n))

        self.to_expr: dict = {}
        self.cell_map: dict = {}
        levels = {}
        for n in range(k + 1):
            nondeg = []
            for mu in raw[n]:
                if self._is_nondeg(mu, n):
                    nondeg.append((mu.key(), mu))
            nondeg.sort()
            ids = []
            for idx, (_, mu) in enumerate(nondeg):
                cid = f"c{n}_{idx}"
                ids.append(cid)
                self.cell_map[cid] = mu
                self.to_expr[mu.key()] = SimplexExpr((), cid)
            levels[n] = ids
            for mu in raw[n]:
                if mu.key() not in self.to_expr:
                    self.to_expr[mu.key()] = self._decompose(mu, n)
        faces = {}
        for n in range(1, k + 1):
            for cid in levels[n]:
                mu = self.cell_map[cid]
                for i in range(n + 1):
                    face_mu = compose_maps(mu, self._face_maps[n][i])
                    faces[(cid, i)] = self.to_expr[face_mu.key()]
        cert = T.coskeletal_from if T.coskeletal_from <= k else None
        self.sset = TruncatedSSet(k, levels, faces, cert, self.name)

    # -- internal shape maps ------------------------------------------------

    @staticmethod
    def _delta_vertexmap(i: int, n: int) -> tuple:
        return tuple(t for t in range(n + 1) if t != i)

    @staticmethod
    def _sigma_vertexmap(j: int, n: int) -> tuple:
        return tuple(t if t <= j else t - 1 for t in range(n + 1))

    def _shape_map(self, alpha: tuple, m: int, n: int) -> SimplicialMap:
        """id_S x (the simplex map induced by alpha: [m] -> [n])."""
        Pm, Pn = self.products[m], self.products[n]
        dm = delta_map(alpha, m, n, max(m, n, Pm.right.dim_bound, Pn.right.dim_bound))
        assignment = {}
        for xs in Pm.levels.values():
            for pid in xs:
                e1, e2 = Pm.pair_of[pid]
                assignment[pid] = Pn.pair_expr(e1, dm.apply(e2))
        return SimplicialMap(Pm, Pn, assignment)

    def _degenerate_at(self, mu: SimplicialMap, n: int, j: int) -> bool:
        endo = self._degeneracy_endos[n][j]
        for x, e in endo.assignment.items():
            if mu.apply(e) != mu.assignment[x]:
                return False
        return True

    def _is_nondeg(self, mu: SimplicialMap, n: int) -> bool:
        return not any(self._degenerate_at(mu, n, j) for j in range(n))

    def _decompose(self, mu: SimplicialMap, n: int) -> SimplexExpr:
        """Normal form (word, nondegenerate cell) of a total cell."""
        for j in range(n):
            if self._degenerate_at(mu, n, j):
                nu = compose_maps(mu, self._sections[n][j])
                inner = self.to_expr.get(nu.key())
                if inner is None:
                    inner = self._decompose(nu, n - 1)
                return SimplexExpr(insert_letter(j, inner.word), inner.base)
        raise AssertionError("total cell neither nondegenerate nor decomposable")

    # -- public queries -----------------------------------------------------

    def locate(self, mu: SimplicialMap) -> SimplexExpr:
        e = self.to_expr.get(mu.key())
        if e is None:
            raise KeyError(f"map is not a cell of {self.name}")
        return e

    def map_of(self, e: SimplexExpr) -> SimplicialMap:
        """The underlying map of an arbitrary cell expression."""
        mu = self.cell_map[e.base]
        n = self.sset.dim_of[e.base]
        for j in reversed(e.word):
            mu = compose_maps(mu, self._collapses[n + 1][j])
            n += 1
        return mu

    def evaluate_at_vertex(self, mu: SimplicialMap, v: str, n: int) -> SimplexExpr:
        """Restrict a level-n cell along an exponent vertex: an n-simplex of T."""
        P = self.products[n]
        vert = SimplexExpr(full_degeneracy(n), v)
        e = P.pair_expr(vert, SimplexExpr((), top_cell(n)))
        return mu.apply(e)

    def vertex_cell(self, mu: SimplicialMap) -> str:
        return self.locate(mu).base


def exponential(T: TruncatedSSet, S: TruncatedSSet, k: int = 2,
                budget: Budget = None) -> Exponential:
    return Exponential(T, S, k, budget)


# ---------------------------------------------------------------------------
# Kan core


def kan_core(Q: TruncatedSSet, budget: Budget = None) -> TruncatedSSet:
    """The largest simplicial subset whose edges are all Ho-invertible."""
    require_quasicategory(Q, budget)
    pres = ho(Q, budget, verified=True)
    iso_edges = {e for e in Q.total(1) if pres.category.is_iso(pres.cls(e))}

    def in_core(x: str, n: int) -> bool:
        e = SimplexExpr((), x)
        return all(Q.restrict(e, (a, b)) in iso_edges
                   for a in range(n + 1) for b in range(a + 1, n + 1))

    levels = {n: [x for x in Q.nondeg(n) if in_core(x, n)] for n in range(Q.dim_bound + 1)}
    kept = {x for xs in levels.values() for x in xs}
    faces = {(x, i): f for (x, i), f in Q.faces.items() if x in kept}
    return TruncatedSSet(Q.dim_bound, levels, faces, Q.coskeletal_from, f"core({Q.name})")


# ---------------------------------------------------------------------------
# mapping spaces


class MappingSpace:
    """Balanced mapping space between two vertices of a quasicategory.

    An n-simplex is a prism Δ1 x Δn -> Q restricting to the degeneracies
    of x and y over the two endpoints of the exponent interval.
    """

    def __init__(self, Q: TruncatedSSet, x: str, y: str, k: int = 2, budget: Budget = None):
        interval = standard_simplex(1, 2)
        fixed_levels = {}
        level = max(Q.coskeletal_from if Q.coskeletal_from is not None else 2, 2)
        for n in range(k + 1):
            P = product(interval.truncate(level), standard_simplex(n, max(n, level)))
            fixed = {}
            for m in range(P.dim_bound + 1):
                for pid in P.nondeg(m):
                    e1, _ = P.pair_of[pid]
                    if interval.dim_of[e1.base] == 0:
                        target = x if e1.base == "0" else y
                        fixed[pid] = SimplexExpr(full_degeneracy(m), target)
            fixed_levels[n] = fixed
        self.x, self.y = x, y
        self.exp = Exponential(Q, interval, k, budget, fixed_levels,
                               name=f"{Q.name}({x},{y})")
        self.sset = self.exp.sset

    def kan_report(self, budget: Budget = None):
        return kan_check(self.sset, budget)


def mapping_space(Q: TruncatedSSet, x: str, y: str, k: int = 2,
                  budget: Budget = None) -> MappingSpace:
    require_quasicategory(Q, budget)
    return MappingSpace(Q, x, y, k, budget)


def kan_check(S: TruncatedSSet, budget: Budget = None):
    """Horn filling for all horns, outer included, up to the truncation."""
    from .nerve import QcatReport
    budget = ensure_budget(budget, f"kan check on {S.name}")
    report = QcatReport(S.name, S.dim_bound)
    for n in range(1, S.dim_bound + 1):
        shape = standard_simplex(n, max(2, n))
        for i in range(n + 1):
            hn = horn(n, i, max(2, n - 1))
            count = 0
            unique = True
            for hmap in enumerate_maps(hn, S, budget):
                count += 1
                fillers = enumerate_maps(shape, S, budget, fixed=hmap.assignment)
                if not fillers:
                    report.ok = False
                    if report.witness is None:
                        report.witness = f"horn({n},{i})"
                if len(fillers) != 1:
                    unique = False
            report.by_horn[(n, i)] = (count, unique)
            report.horns_checked += count
    return report


# ---------------------------------------------------------------------------
# horn filling


def fill_inner_horn(Q: TruncatedSSet, h: SimplicialMap, budget: Budget = None):
    """Extend an inner horn into Q; first filler in canonical order.

    ``h`` must be a map from a horn built by :func:`qcatkit.simplicial.horn`.
    Returns (filler map, image of the top cell).
    """
    budget = ensure_budget(budget, f"horn filling in {Q.name}")
    name = h.source.name
    if not name.startswith("horn"):
        raise ValueError("source of the horn map is not a horn")
    n, i = (int(p) for p in name[4:].split("_"))
    if not 0 < i < n:
        raise ValueError(f"horn({n},{i}) is not inner")
    if n > Q.dim_bound:
        raise ValueError("horn dimension exceeds the truncation")
    shape = standard_simplex(n, max(2, n))
    fillers = enumerate_maps(shape, Q, budget, fixed=h.assignment)
    if not fillers:
        desc = {k: v.token() for k, v in sorted(h.assignment.items())}
        raise ValueError(f"no filler within truncation for horn({n},{i}) {desc}")
    filler = fillers[0]
    return filler, filler.assignment[top_cell(n)]


def horn_map_from_faces(n: int, i: int, images: dict, Q: TruncatedSSet) -> SimplicialMap:
    """Assemble a horn map from its top-dimensional faces.

    ``images[j]`` is the (n-1)-simplex of Q to be placed on the face
    d_j of the simplex, for every j != i; lower cells are derived and
    cross-checked for consistency.
    """
    hn = horn(n, i, max(2, n - 1))
    assignment: dict = {}
    for j in sorted(images):
        face_subset = tuple(t for t in range(n + 1) if t != j)
        face_id = "".join(str(t) for t in face_subset)
        img = images[j]
        for m in range(n):
            for cid in hn.nondeg(m):
                verts = tuple(int(ch) for ch in cid)
                if not set(verts) <= set(face_subset):
                    continue
                positions = tuple(face_subset.index(v) for v in verts)
                e = Q.restrict(img, positions)
                if cid in assignment and assignment[cid] != e:
                    raise ValueError(f"incompatible faces at cell {cid}")
                assignment[cid] = e
    return SimplicialMap(hn, Q, assignment)


# ---------------------------------------------------------------------------
# square lifting


class Square:
    """A commutative square in a homotopy category, tracked by morphism ids."""

    def __init__(self, pres: HoPresentation, top: str, bottom: str, left: str, right: str):
        cat = pres.category
        if cat.compose(right, top) != cat.compose(bottom, left):
            raise ValueError("square does not commute")
        self.pres = pres
        self.top, self.bottom, self.left, self.right = top, bottom, left, right

    def corners(self):
        cat = self.pres.category
        return (cat.dom(self.top), cat.cod(self.top),
                cat.cod(self.left), cat.cod(self.bottom))

    def key(self):
        return (self.top, self.bottom, self.left, self.right)

    def __repr__(self):
        return f"<square top={self.top} bottom={self.bottom} left={self.left} right={self.right}>"


class LiftResult:
    def __init__(self, exponential_: Exponential, ho_exp: HoPresentation,
                 prism: SimplicialMap, cell: SimplexExpr, steps: dict):
        self.exponential = exponential_
        self.ho_exp = ho_exp
        self.prism = prism
        self.cell = cell
        self.morphism = ho_exp.cls(cell)
        self.steps = steps


def _find_triangle(Q: TruncatedSSet, d0: SimplexExpr, d2: SimplexExpr,
                   budget: Budget, step: str) -> SimplexExpr:
    for sigma in Q.total(2):
        budget.spend()
        if Q.face(sigma, 0) == d0 and Q.face(sigma, 2) == d2:
            return sigma
    raise ValueError(f"square lifting failed at step {step}: no 2-simplex with "
                     f"d0={d0.token()}, d2={d2.token()}")


def prism_map(E: Exponential, f: SimplexExpr, g: SimplexExpr,
              triangle_a: SimplexExpr, triangle_b: SimplexExpr,
              h: SimplexExpr, k: SimplexExpr, diag: SimplexExpr) -> SimplicialMap:
    """The level-1 cell of Q^{Δ1} built from two compatible triangles.

    Triangle a covers the top-then-right half (faces g, diag, h), triangle
    b the left-then-bottom half (faces k, diag, f).
    """
    Q = E.base
    P = E.products[1]
    fv = Q.vertices(f)
    gv = Q.vertices(g)
    grid = {("0", "0"): fv[0], ("1", "0"): fv[1],
            ("0", "1"): gv[0], ("1", "1"): gv[1]}
    edges = {
        ("01", (), "0", (0,)): f,   # exponent edge over direction vertex 0
        ("01", (), "1", (0,)): g,
        ("0", (0,), "01", ()): h,   # direction edge at exponent vertex 0
        ("1", (0,), "01", ()): k,
        ("01", (), "01", ()): diag,
    }
    assignment = {}
    for m in range(P.dim_bound + 1):
        for pid in P.nondeg(m):
            e1, e2 = P.pair_of[pid]
            if m == 0:
                assignment[pid] = SimplexExpr((), grid[(e1.base, e2.base)])
            elif m == 1:
                assignment[pid] = edges[(e1.base, e1.word, e2.base, e2.word)]
            else:
                # the two triangles: (s0 exp, s1 dir) and (s1 exp, s0 dir)
                if e1.word == (0,) and e2.word == (1,):
                    assignment[pid] = triangle_a
                elif e1.word == (1,) and e2.word == (0,):
                    assignment[pid] = triangle_b
                else:
                    raise AssertionError(f"unexpected prism cell {pid}")
    return SimplicialMap(P, E.T_t, assignment)


def lift_square(Q: TruncatedSSet, square: Square, f: SimplexExpr, g: SimplexExpr,
                budget: Budget = None, E: Exponential = None,
                ho_E: HoPresentation = None) -> LiftResult:
    """Lift a commutative Ho-square to a morphism f -> g in Ho(Q^{Δ1}).

    Follows the horn-filling construction: compose witnesses for the two
    composites, a homotopy 2-simplex between them, one inner 3-horn, and
    the assembly of the resulting triangles into a prism.  All intermediate
    choices are first-in-canonical-order.
    """
    budget = ensure_budget(budget, f"square lifting in {Q.name}")
    if Q.dim_bound < 3:
        raise ValueError("square lifting needs dim_bound >= 3")
    pres = square.pres
    if pres.cls(f) != square.left or pres.cls(g) != square.right:
        raise ValueError("f, g do not represent the vertical edges of the square")
    steps = {}
    h = pres.reps[square.top]
    k = pres.reps[square.bottom]
    steps["h"] = h
    steps["k"] = k
    a = _find_triangle(Q, d0=g, d2=h, budget=budget, step="composition witness a")
    b = _find_triangle(Q, d0=k, d2=f, budget=budget, step="composition witness b")
    steps["a"], steps["b"] = a, b
    d1a, d1b = Q.face(a, 1), Q.face(b, 1)
    x00 = Q.vertices(f)[0]
    degenerate = SimplexExpr((0,), x00)
    want = (d1b, d1a, degenerate)
    cands = Q.by_faces(2).get(want, [])
    budget.spend(1)
    if not cands:
        raise ValueError("square lifting failed at step homotopy c: the composites "
                         f"{d1a.token()} and {d1b.token()} admit no one-step homotopy")
    c = cands[0]
    steps["c"] = c
    s0f = SimplexExpr(insert_letter(0, f.word), f.base)
    H = horn_map_from_faces(3, 1, {0: b, 2: c, 3: s0f}, Q)
    filler, _ = fill_inner_horn(Q, H, budget)
    steps["H"] = filler
    tau = filler.target.face(filler.assignment[top_cell(3)], 1)
    steps["tau"] = tau
    if E is None:
        E = exponential(Q, standard_simplex(1, 2), 2, budget)
    if ho_E is None:
        ho_E = ho(E.sset, budget)
    prism = prism_map(E, f, g, triangle_a=a, triangle_b=tau, h=h, k=k, diag=d1a)
    cell = E.locate(prism)
    result = LiftResult(E, ho_E, prism, cell, steps)
    # dia of the lift must reproduce the square on the nose
    top_edge = E.evaluate_at_vertex(prism, "0", 1)
    bottom_edge = E.evaluate_at_vertex(prism, "1", 1)
    if pres.cls(top_edge) != square.top or pres.cls(bottom_edge) != square.bottom:
        raise AssertionError("lift does not restrict to the given square")
    return result


def enumerate_prism_lifts(E: Exponential, ho_E: HoPresentation, square: Square,
                          f: SimplexExpr, g: SimplexExpr, budget: Budget = None) -> list:
    """Brute-force search for all lifts of a square, as Ho-classes.

    Independent of the horn-filling construction: scans every 1-cell of the
    exponential whose endpoints are exactly f and g and whose restrictions
    to the exponent endpoints land in the square's horizontal classes.
    """
    budget = ensure_budget(budget, "prism search")
    pres = square.pres
    fcell = E.locate(object_map(E, f))
    gcell = E.locate(object_map(E, g))
    found = []
    for sigma in E.sset.total(1):
        budget.spend()
        if E.sset.face(sigma, 1) != fcell or E.sset.face(sigma, 0) != gcell:
            continue
        mu = E.map_of(sigma)
        top_edge = E.evaluate_at_vertex(mu, "0", 1)
        bottom_edge = E.evaluate_at_vertex(mu, "1", 1)
        if pres.cls(top_edge) == square.top and pres.cls(bottom_edge) == square.bottom:
            found.append(ho_E.cls(sigma))
    return sorted(set(found))


def object_map(E: Exponential, e: SimplexExpr) -> SimplicialMap:
    """The vertex of Q^{Δ1} presented by an edge of Q."""
    P = E.products[0]
    Q = E.base
    verts = Q.vertices(e)
    assignment = {}
    for m in range(P.dim_bound + 1):
        for pid in P.nondeg(m):
            e1, _ = P.pair_of[pid]
            if E.S_t.dim_of[e1.base] == 0:
                assignment[pid] = SimplexExpr(full_degeneracy(m), verts[int(e1.base)])
            else:
                assignment[pid] = SimplexExpr(compose_words(e1.word, e.word), e.base)
    return SimplicialMap(P, E.T_t, assignment)
