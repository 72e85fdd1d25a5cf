"""Finite, dimension-truncated simplicial sets.

A simplicial set is presented by its nondegenerate simplices only.  Every
simplex is a pair (degeneracy word, nondegenerate base); the word is kept
in normal form (strictly decreasing indices), which makes the presentation
unique.  Face data is stored for nondegenerate simplices and pushed through
degeneracy words with the simplicial identities when needed.

Conventions:
    * ``d_i`` forgets the i-th vertex, so for an edge ``f`` the face
      ``d_1 f`` is its initial vertex and ``d_0 f`` its final vertex.
    * a word ``(i_1, ..., i_k)`` with ``i_1 > ... > i_k`` denotes the
      operator ``s_{i_1} ∘ ... ∘ s_{i_k}`` (rightmost letter applied
      first).
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, NamedTuple, Optional

from .util import Budget, ensure_budget


class SimplexExpr(NamedTuple):
    """A (possibly degenerate) simplex: degeneracy word applied to a base."""

    word: tuple
    base: str

    def token(self) -> str:
        if not self.word:
            return self.base
        return ".".join([f"s{i}" for i in self.word] + [self.base])


def expr(base: str, word: Iterable[int] = ()) -> SimplexExpr:
    return SimplexExpr(tuple(word), base)


def parse_expr(token: str) -> SimplexExpr:
    parts = token.split(".")
    word = []
    while parts and parts[0].startswith("s") and parts[0][1:].isdigit():
        word.append(int(parts.pop(0)[1:]))
    if not parts:
        raise ValueError(f"no base identifier in expression {token!r}")
    return SimplexExpr(tuple(word), ".".join(parts))


# ---------------------------------------------------------------------------
# degeneracy words


def insert_letter(j: int, word: tuple) -> tuple:
    """Normal form of ``s_j ∘ word`` given ``word`` already normal.

    Uses ``s_i s_j = s_{j+1} s_i`` for ``i <= j`` to move the new letter
    into place.
    """
    if not word or j > word[0]:
        return (j,) + word
    return (word[0] + 1,) + insert_letter(j, word[1:])


def normalize_word(seq: Iterable[int]) -> tuple:
    """Normal form (strictly decreasing) of an arbitrary letter sequence."""
    out: tuple = ()
    for j in reversed(tuple(seq)):
        out = insert_letter(j, out)
    return out


def compose_words(outer: Iterable[int], inner: tuple) -> tuple:
    """Normal form of the operator ``outer ∘ inner`` (inner applied first)."""
    out = tuple(inner)
    for j in reversed(tuple(outer)):
        out = insert_letter(j, out)
    return out


def face_through_word(i: int, word: tuple):
    """Push ``d_i`` through a normal degeneracy word.

    Returns ``(prefix, j)`` where ``prefix`` is the surviving (normal)
    word and ``j`` is the face index that reaches the base, or
    ``(prefix, None)`` when the face cancels against a letter.
    """
    out = []
    cur = i
    letters = list(word)
    for idx, a in enumerate(letters):
        if cur < a:
            out.append(a - 1)
        elif cur == a or cur == a + 1:
            return tuple(out) + tuple(letters[idx + 1:]), None
        else:
            out.append(a)
            cur -= 1
    return tuple(out), cur


def collapse_set(word: tuple) -> frozenset:
    """Positions collapsed by the surjection encoded by a normal word."""
    return frozenset(word)


def strip_letters(word: tuple, letters: frozenset) -> tuple:
    """Residual word after factoring out the collapses in ``letters``."""
    kept = sorted(set(word) - letters, reverse=True)
    return tuple(a - sum(1 for c in letters if c < a) for a in kept)


def weak_seq_to_word(seq) -> tuple:
    """Degeneracy word of a weakly increasing vertex sequence.

    ``seq`` of length n+1 presents an n-simplex of a nerve-like object;
    duplicated entries are degeneracies.  Returns (word, strict_seq).
    """
    seq = list(seq)
    for p in range(len(seq) - 1):
        if seq[p] == seq[p + 1]:
            word, strict = weak_seq_to_word(seq[:p + 1] + seq[p + 2:])
            return insert_letter(p, word), strict
    return (), tuple(seq)


def valid_words(n: int, m: int):
    """All normal words presenting surjections [n] ->> [m]."""
    if m > n:
        return []
    out = []
    for comb in combinations(range(n), n - m):
        if all(comb[t] <= m + t for t in range(len(comb))):
            out.append(tuple(reversed(comb)))
    return out


# ---------------------------------------------------------------------------
# validation report


class ValidationReport:
    def __init__(self, name: str):
        self.name = name
        self.violations: list[str] = []
        self.checked = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, message: str) -> None:
        self.violations.append(message)

    def __repr__(self):
        status = "pass" if self.ok else f"fail ({len(self.violations)} violations)"
        return f"<validation of {self.name}: {status}>"

    def lines(self) -> list[str]:
        head = f"validate {self.name}: {'pass' if self.ok else 'FAIL'} ({self.checked} checks)"
        return [head] + [f"  violation: {v}" for v in self.violations]


# ---------------------------------------------------------------------------
# truncated simplicial sets


class TruncatedSSet:
    """Simplicial set presented by nondegenerate simplices up to a bound.

    Parameters
    ----------
    dim_bound : int
        Truncation level D >= 2.
    levels : mapping n -> iterable of identifiers
        Nondegenerate simplices per level (identifiers are opaque strings;
        each level is kept canonically sorted).
    faces : mapping (id, i) -> SimplexExpr
        The i-th face of each nondegenerate simplex of dimension >= 1.
    coskeletal_from : int, optional
        Declared certificate: the set is to be read as k-coskeletal above
        level k.  Checked by ``validate(check_coskeletal=True)``.
    """

    def __init__(self, dim_bound: int, levels, faces, coskeletal_from: Optional[int] = None,
                 name: str = "sset"):
        if dim_bound < 2:
            raise ValueError("dim_bound must be at least 2")
        self.dim_bound = dim_bound
        self.levels = {n: tuple(sorted(levels.get(n, ()))) for n in range(dim_bound + 1)}
        for n in levels:
            if n > dim_bound and levels[n]:
                raise ValueError(f"level {n} above dim_bound {dim_bound}")
        self.faces = dict(faces)
        self.coskeletal_from = coskeletal_from
        self.name = name
        self.dim_of = {}
        for n, ids in self.levels.items():
            for x in ids:
                if x in self.dim_of:
                    raise ValueError(f"duplicate simplex identifier {x!r}")
                self.dim_of[x] = n
        self._totals: dict[int, list] = {}
        self._face_cache: dict = {}
        self._vertex_cache: dict = {}
        self._face_index: dict = {}

    # -- basic queries ----------------------------------------------------

    def nondeg(self, n: int) -> tuple:
        return self.levels.get(n, ())

    def expr_dim(self, e: SimplexExpr) -> int:
        if e.base not in self.dim_of:
            raise KeyError(f"dangling base identifier {e.base!r} in {self.name}")
        return self.dim_of[e.base] + len(e.word)

    def total(self, n: int) -> list:
        """All n-simplices (degenerate included) in canonical order."""
        if n not in self._totals:
            out = []
            for m in range(min(n, self.dim_bound) + 1):
                for base in self.nondeg(m):
                    for w in valid_words(n, m):
                        out.append(SimplexExpr(w, base))
            out.sort(key=lambda e: e.token())
            self._totals[n] = out
        return self._totals[n]

    def total_count(self, n: int) -> int:
        return len(self.total(n))

    def by_faces(self, n: int) -> dict:
        """Index of n-simplices by their face tuple (d_0, ..., d_n)."""
        if n not in self._face_index:
            index: dict = {}
            for e in self.total(n):
                key = tuple(self.face(e, i) for i in range(n + 1))
                index.setdefault(key, []).append(e)
            self._face_index[n] = index
        return self._face_index[n]

    def face(self, e: SimplexExpr, i: int) -> SimplexExpr:
        """Apply d_i to a simplex expression, renormalizing."""
        key = (e, i)
        hit = self._face_cache.get(key)
        if hit is not None:
            return hit
        n = self.expr_dim(e)
        if n < 1:
            raise ValueError("cannot take a face of a vertex")
        if not 0 <= i <= n:
            raise ValueError(f"face index {i} out of range for dimension {n}")
        prefix, j = face_through_word(i, e.word)
        if j is None:
            out = SimplexExpr(prefix, e.base)
        else:
            base_face = self.faces.get((e.base, j))
            if base_face is None:
                raise KeyError(f"missing face ({e.base!r}, {j}) in {self.name}")
            out = SimplexExpr(compose_words(prefix, base_face.word), base_face.base)
        self._face_cache[key] = out
        return out

    def restrict(self, e: SimplexExpr, keep: tuple) -> SimplexExpr:
        """Restrict along the vertex subset ``keep`` (strictly increasing)."""
        n = self.expr_dim(e)
        out = e
        for i in range(n, -1, -1):
            if i not in keep:
                out = self.face(out, i)
        return out

    def vertices(self, e: SimplexExpr) -> tuple:
        """Vertex identifiers of a simplex, in order."""
        key = e
        hit = self._vertex_cache.get(key)
        if hit is not None:
            return hit
        n = self.expr_dim(e)
        out = tuple(self.restrict(e, (j,)).base for j in range(n + 1))
        self._vertex_cache[key] = out
        return out

    def edge_endpoints(self, e: SimplexExpr) -> tuple:
        """(initial, final) vertices of a 1-simplex."""
        v = self.vertices(e)
        return v[0], v[1]

    def truncate(self, c: int, name: Optional[str] = None) -> "TruncatedSSet":
        c = max(c, 2)
        if c >= self.dim_bound:
            return self
        levels = {n: self.levels[n] for n in range(c + 1)}
        faces = {(x, i): f for (x, i), f in self.faces.items() if self.dim_of[x] <= c}
        cert = self.coskeletal_from
        if cert is not None:
            cert = min(cert, c)
        return TruncatedSSet(c, levels, faces, cert, name or self.name)

    # -- validation -------------------------------------------------------

    def validate(self, check_coskeletal: bool = True, budget: Budget = None) -> ValidationReport:
        """Check reference integrity and the simplicial identities.

        When a coskeletal certificate is declared and ``check_coskeletal``
        is set, also verify that every compatible boundary above the
        certified level has exactly one filler within the truncation.
        """
        report = ValidationReport(self.name)
        for (x, i), f in sorted(self.faces.items()):
            report.checked += 1
            if x not in self.dim_of:
                report.add(f"face data for unknown simplex {x!r}")
                continue
            n = self.dim_of[x]
            if n < 1:
                report.add(f"face data attached to vertex {x!r}")
                continue
            if not 0 <= i <= n:
                report.add(f"face index {i} out of range on {x!r} (dimension {n})")
                continue
            if f.base not in self.dim_of:
                report.add(f"face d_{i} {x!r} references dangling base {f.base!r}")
                continue
            if self.expr_dim(f) != n - 1:
                report.add(f"face d_{i} {x!r} has dimension {self.expr_dim(f)}, expected {n - 1}")
        for n in range(1, self.dim_bound + 1):
            for x in self.nondeg(n):
                for i in range(n + 1):
                    if (x, i) not in self.faces:
                        report.add(f"missing face d_{i} of {x!r}")
        if not report.ok:
            return report
        for n in range(2, self.dim_bound + 1):
            for x in self.nondeg(n):
                e = SimplexExpr((), x)
                for j in range(1, n + 1):
                    for i in range(j):
                        report.checked += 1
                        left = self.face(self.face(e, j), i)
                        right = self.face(self.face(e, i), j - 1)
                        if left != right:
                            report.add(
                                f"identity d_{i} d_{j} = d_{j - 1} d_{i} fails at {x!r}: "
                                f"{left.token()} != {right.token()}"
                            )
        if check_coskeletal and self.coskeletal_from is not None and report.ok:
            self._check_coskeletal(report, ensure_budget(budget, "coskeletal check"))
        return report

    def _check_coskeletal(self, report: ValidationReport, budget: Budget) -> None:
        k = self.coskeletal_from
        for n in range(k + 1, self.dim_bound + 1):
            shell = boundary(n, max(2, n - 1))
            simplex = standard_simplex(n, max(2, n))
            for bmap in enumerate_maps(shell, self, budget=budget):
                report.checked += 1
                fillers = enumerate_maps(simplex, self, budget=budget,
                                         fixed=bmap.assignment)
                if len(fillers) != 1:
                    report.add(
                        f"coskeletal_from={k} fails at level {n}: a boundary has "
                        f"{len(fillers)} fillers"
                    )
                    return

    def __repr__(self):
        counts = " ".join(f"{n}:{len(self.nondeg(n))}" for n in range(self.dim_bound + 1))
        return f"<sset {self.name} dim<={self.dim_bound} [{counts}]>"


# ---------------------------------------------------------------------------
# simplicial maps


class SimplicialMap:
    """Level-wise assignment on nondegenerate simplices, commuting with faces."""

    def __init__(self, source: TruncatedSSet, target: TruncatedSSet, assignment):
        self.source = source
        self.target = target
        self.assignment = dict(assignment)
        self._key = None

    def apply(self, e: SimplexExpr) -> SimplexExpr:
        img = self.assignment[e.base]
        return SimplexExpr(compose_words(e.word, img.word), img.base)

    def key(self) -> tuple:
        if self._key is None:
            self._key = tuple(sorted(self.assignment.items()))
        return self._key

    def __eq__(self, other):
        return isinstance(other, SimplicialMap) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def validate(self) -> ValidationReport:
        report = ValidationReport(f"map {self.source.name} -> {self.target.name}")
        for n in range(self.source.dim_bound + 1):
            for x in self.source.nondeg(n):
                report.checked += 1
                if x not in self.assignment:
                    report.add(f"no image for {x!r}")
                    continue
                img = self.assignment[x]
                if self.target.expr_dim(img) != n:
                    report.add(f"image of {x!r} has wrong dimension")
        if not report.ok:
            return report
        for n in range(1, self.source.dim_bound + 1):
            for x in self.source.nondeg(n):
                e = SimplexExpr((), x)
                for i in range(n + 1):
                    report.checked += 1
                    want = self.apply(self.source.face(e, i))
                    got = self.target.face(self.assignment[x], i)
                    if want != got:
                        report.add(f"face d_{i} not preserved at {x!r}")
        return report

    def __repr__(self):
        return f"<map {self.source.name} -> {self.target.name} ({len(self.assignment)} cells)>"


def identity_map(S: TruncatedSSet) -> SimplicialMap:
    return SimplicialMap(S, S, {x: SimplexExpr((), x) for xs in S.levels.values() for x in xs})


def compose_maps(g: SimplicialMap, f: SimplicialMap) -> SimplicialMap:
    if g.source is not f.target and g.source.levels != f.target.levels:
        raise ValueError("maps are not composable")
    return SimplicialMap(f.source, g.target,
                         {x: g.apply(e) for x, e in f.assignment.items()})


# ---------------------------------------------------------------------------
# standard objects


def _tuple_id(t) -> str:
    return "".join(str(v) for v in t) if all(v < 10 for v in t) else "-".join(map(str, t))


def standard_simplex(n: int, D: int) -> TruncatedSSet:
    """The simplex on vertices 0..n, truncated at D."""
    if n < 0:
        raise ValueError("simplex dimension must be nonnegative")
    if D < max(2, n):
        raise ValueError("truncation must be >= 2 and >= n")
    levels = {}
    faces = {}
    for k in range(min(n, D) + 1):
        ids = [_tuple_id(c) for c in combinations(range(n + 1), k + 1)]
        levels[k] = ids
        if k >= 1:
            for c in combinations(range(n + 1), k + 1):
                for i in range(k + 1):
                    sub = c[:i] + c[i + 1:]
                    faces[(_tuple_id(c), i)] = SimplexExpr((), _tuple_id(sub))
    return TruncatedSSet(D, levels, faces, coskeletal_from=n, name=f"delta{n}")


def _simplex_subset(n: int, D: int, keep, name: str) -> TruncatedSSet:
    full = standard_simplex(n, max(D, n))
    levels = {k: [x for x in full.nondeg(k)
                  if keep(tuple(int(ch) for ch in x))]
              for k in range(D + 1)}
    kept = {x for xs in levels.values() for x in xs}
    faces = {(x, i): f for (x, i), f in full.faces.items() if x in kept}
    return TruncatedSSet(D, levels, faces, coskeletal_from=None, name=name)


def boundary(n: int, D: int) -> TruncatedSSet:
    """The union of all faces of the n-simplex."""
    if n < 1:
        raise ValueError("boundary needs n >= 1")
    top = tuple(range(n + 1))
    return _simplex_subset(n, D, lambda c: c != top, f"boundary{n}")


def horn(n: int, i: int, D: int) -> TruncatedSSet:
    """The subset of the n-simplex generated by the faces d_j with j != i."""
    if n < 1:
        raise ValueError("horn needs n >= 1")
    if not 0 <= i <= n:
        raise ValueError(f"horn index {i} out of range")
    top = tuple(range(n + 1))
    omitted = top[:i] + top[i + 1:]
    return _simplex_subset(n, D, lambda c: c != top and c != omitted, f"horn{n}_{i}")


def empty_sset(D: int = 2) -> TruncatedSSet:
    return TruncatedSSet(D, {}, {}, coskeletal_from=0, name="empty")


def delta_map(alpha, n: int, target_n: int, D: int) -> SimplicialMap:
    """The map of standard simplices induced by a monotone vertex map.

    ``alpha`` lists the images of 0..n inside 0..target_n.
    """
    src = standard_simplex(n, D)
    tgt = standard_simplex(target_n, D)
    assignment = {}
    for k in range(min(n, D) + 1):
        for c in combinations(range(n + 1), k + 1):
            seq = [alpha[v] for v in c]
            word, strict = weak_seq_to_word(seq)
            assignment[_tuple_id(c)] = SimplexExpr(word, _tuple_id(strict))
    return SimplicialMap(src, tgt, assignment)


# ---------------------------------------------------------------------------
# products


class ProductSSet(TruncatedSSet):
    """Level-wise product, nondegenerate cells named by component pairs."""

    def __init__(self, left: TruncatedSSet, right: TruncatedSSet):
        self.left = left
        self.right = right
        D = min(left.dim_bound, right.dim_bound)
        levels = {}
        faces = {}
        pair_of = {}
        id_of_pair = {}
        for n in range(D + 1):
            ids = []
            for e1 in left.total(n):
                for e2 in right.total(n):
                    if collapse_set(e1.word) & collapse_set(e2.word):
                        continue
                    pid = f"({e1.token()}|{e2.token()})"
                    ids.append(pid)
                    pair_of[pid] = (e1, e2)
                    id_of_pair[(e1, e2)] = pid
            levels[n] = ids
        cert = None
        if left.coskeletal_from is not None and right.coskeletal_from is not None:
            cert = max(left.coskeletal_from, right.coskeletal_from)
            if cert > D:
                cert = None
        name = f"({left.name}x{right.name})"
        # face computation needs dim_of, so initialize the base first
        super().__init__(D, levels, {}, cert, name)
        self.pair_of = pair_of
        self.id_of_pair = id_of_pair
        for n in range(1, D + 1):
            for pid in self.nondeg(n):
                e1, e2 = pair_of[pid]
                for i in range(n + 1):
                    f1 = left.face(e1, i)
                    f2 = right.face(e2, i)
                    faces[(pid, i)] = self.pair_expr(f1, f2)
        self.faces = faces

    def pair_expr(self, e1: SimplexExpr, e2: SimplexExpr) -> SimplexExpr:
        """Simplex of the product presented by a pair of component simplices."""
        joint = collapse_set(e1.word) & collapse_set(e2.word)
        r1 = SimplexExpr(strip_letters(e1.word, joint), e1.base)
        r2 = SimplexExpr(strip_letters(e2.word, joint), e2.base)
        pid = self.id_of_pair[(r1, r2)]
        return SimplexExpr(tuple(sorted(joint, reverse=True)), pid)

    def components(self, e: SimplexExpr) -> tuple:
        """Component simplices of an arbitrary simplex of the product."""
        e1, e2 = self.pair_of[e.base]
        return (SimplexExpr(compose_words(e.word, e1.word), e1.base),
                SimplexExpr(compose_words(e.word, e2.word), e2.base))


def product(S: TruncatedSSet, T: TruncatedSSet) -> ProductSSet:
    return ProductSSet(S, T)


def product_map(P: ProductSSet, Q: ProductSSet, f: SimplicialMap, g: SimplicialMap) -> SimplicialMap:
    """The map P -> Q acting by f on left components and g on right ones."""
    assignment = {}
    for xs in P.levels.values():
        for pid in xs:
            e1, e2 = P.pair_of[pid]
            assignment[pid] = Q.pair_expr(f.apply(e1), g.apply(e2))
    return SimplicialMap(P, Q, assignment)


def product_swap(P: ProductSSet, Q: ProductSSet) -> SimplicialMap:
    """The symmetry P = SxT -> Q = TxS."""
    assignment = {}
    for xs in P.levels.values():
        for pid in xs:
            e1, e2 = P.pair_of[pid]
            assignment[pid] = Q.pair_expr(e2, e1)
    return SimplicialMap(P, Q, assignment)


def product_assoc(P: ProductSSet, Q: ProductSSet) -> SimplicialMap:
    """Reassociation (SxT)xU -> Sx(TxU) between given presentations."""
    inner: ProductSSet = Q.right  # TxU
    assignment = {}
    for xs in P.levels.values():
        for pid in xs:
            e12, e3 = P.pair_of[pid]
            e1, e2 = P.left.components(e12)
            assignment[pid] = Q.pair_expr(e1, inner.pair_expr(e2, e3))
    return SimplicialMap(P, Q, assignment)


def product_unit_right(P: ProductSSet) -> SimplicialMap:
    """Projection S x Δ0 -> S (an isomorphism of presentations)."""
    assignment = {}
    for xs in P.levels.values():
        for pid in xs:
            e1, _ = P.pair_of[pid]
            assignment[pid] = e1
    return SimplicialMap(P, P.left, assignment)


def product_unit_left(P: ProductSSet) -> SimplicialMap:
    """Projection Δ0 x T -> T (an isomorphism of presentations)."""
    assignment = {}
    for xs in P.levels.values():
        for pid in xs:
            _, e2 = P.pair_of[pid]
            assignment[pid] = e2
    return SimplicialMap(P, P.right, assignment)


def projection(P: ProductSSet, side: int) -> SimplicialMap:
    """Projection of a product onto one factor (0 = left, 1 = right)."""
    assignment = {}
    for xs in P.levels.values():
        for pid in xs:
            pair = P.pair_of[pid]
            assignment[pid] = pair[side]
    return SimplicialMap(P, P.left if side == 0 else P.right, assignment)


# ---------------------------------------------------------------------------
# map enumeration


def _assignment_order(S: TruncatedSSet) -> list:
    """Deterministic order interleaving dimensions so constraints bind early.

    Among simplices whose face supports are already placed, the highest
    dimension is taken first; this prunes the search as soon as any two
    endpoints of an edge are known.
    """
    remaining = [x for n in range(S.dim_bound + 1) for x in S.nondeg(n)]
    supports = {}
    for x in remaining:
        n = S.dim_of[x]
        if n == 0:
            supports[x] = frozenset()
        else:
            e = SimplexExpr((), x)
            supports[x] = frozenset(S.face(e, i).base for i in range(n + 1))
    placed = set()
    order = []
    remaining.sort(key=lambda x: (S.dim_of[x], x))
    while remaining:
        ready = [x for x in remaining if supports[x] <= placed]
        if ready:
            # highest dimension first, then smallest id: constraints bind early
            best_dim = max(S.dim_of[x] for x in ready)
            pick = min(x for x in ready if S.dim_of[x] == best_dim)
        else:
            pick = remaining[0]
        order.append(pick)
        placed.add(pick)
        remaining.remove(pick)
    return order


def enumerate_maps(S: TruncatedSSet, T: TruncatedSSet, budget: Budget = None,
                   fixed=None) -> list:
    """The complete set of simplicial maps S -> T, canonically ordered.

    ``fixed`` pre-assigns images for some nondegenerate simplices of S
    (used for extension problems such as horn filling); consistency with
    faces is still enforced.
    """
    budget = ensure_budget(budget, f"maps {S.name} -> {T.name}")
    order = _assignment_order(S)
    fixed = fixed or {}
    results = []
    assign = {}
    # precomputed per cell: dimension, face expressions, fixed image
    layout = []
    for x in order:
        n = S.dim_of[x]
        e = SimplexExpr((), x)
        faces = tuple(S.face(e, i) for i in range(n + 1)) if n else ()
        layout.append((x, n, faces, fixed.get(x)))

    def candidates(n, faces, pinned):
        if n == 0:
            budget.spend()
            return (pinned,) if pinned is not None else T.total(0)
        required = tuple(
            assign[fe.base] if not fe.word
            else SimplexExpr(compose_words(fe.word, assign[fe.base].word),
                             assign[fe.base].base)
            for fe in faces)
        if pinned is not None:
            budget.spend()
            ok = all(T.face(pinned, i) == required[i] for i in range(n + 1))
            return (pinned,) if ok else ()
        out = T.by_faces(n).get(required, ())
        budget.spend(1 + len(out))
        return out

    total = len(layout)
    if total == 0:
        return [SimplicialMap(S, T, {})]
    # explicit stack: sources can have more cells than the recursion limit
    stack = [iter(candidates(layout[0][1], layout[0][2], layout[0][3]))]
    while stack:
        pos = len(stack) - 1
        x = layout[pos][0]
        cand = next(stack[-1], None)
        if cand is None:
            assign.pop(x, None)
            stack.pop()
            continue
        assign[x] = cand
        if pos + 1 == total:
            results.append(SimplicialMap(S, T, assign))
            assign.pop(x, None)
            continue
        nxt = layout[pos + 1]
        stack.append(iter(candidates(nxt[1], nxt[2], nxt[3])))
    results.sort(key=lambda m: m.key())
    return results


def find_isomorphism(S: TruncatedSSet, T: TruncatedSSet, budget: Budget = None):
    """First isomorphism S -> T in canonical order, or None."""
    budget = ensure_budget(budget, f"isomorphism search {S.name} ~ {T.name}")
    if any(len(S.nondeg(n)) != len(T.nondeg(n)) for n in range(min(S.dim_bound, T.dim_bound) + 1)):
        return None
    ids = identity_map(S).key(), identity_map(T).key()
    backward = enumerate_maps(T, S, budget)
    for f in enumerate_maps(S, T, budget):
        for g in backward:
            if compose_maps(g, f).key() == ids[0] and compose_maps(f, g).key() == ids[1]:
                return f
    return None


# ---------------------------------------------------------------------------
# text format


def sset_to_text(S: TruncatedSSet) -> str:
    lines = [f"dim {S.dim_bound}"]
    if S.coskeletal_from is not None:
        lines.append(f"coskeletal {S.coskeletal_from}")
    for n in range(S.dim_bound + 1):
        if S.nondeg(n):
            lines.append(f"{n}: " + " ".join(S.nondeg(n)))
    for n in range(1, S.dim_bound + 1):
        for x in S.nondeg(n):
            for i in range(n + 1):
                f = S.faces[(x, i)]
                word = " ".join(f"s{j}" for j in f.word)
                lines.append(f"face {x} {i} = [{word}] {f.base}")
    return "\n".join(lines) + "\n"


def sset_from_text(text: str, name: str = "sset") -> TruncatedSSet:
    dim = None
    cosk = None
    levels: dict[int, list] = {}
    faces = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("dim "):
                dim = int(line.split()[1])
            elif line.startswith("coskeletal "):
                cosk = int(line.split()[1])
            elif line.startswith("face "):
                head, rhs = line.split("=", 1)
                _, x, i = head.split()
                lb = rhs.index("[")
                rb = rhs.index("]")
                word = tuple(int(tok[1:]) for tok in rhs[lb + 1:rb].split())
                base = rhs[rb + 1:].strip()
                faces[(x, int(i))] = SimplexExpr(word, base)
            else:
                level, rest = line.split(":", 1)
                levels[int(level)] = rest.split()
        except (ValueError, IndexError) as err:
            raise ValueError(f"line {lineno}: cannot parse {raw!r} ({err})") from None
    if dim is None:
        raise ValueError("missing 'dim' line")
    return TruncatedSSet(dim, levels, faces, cosk, name)
