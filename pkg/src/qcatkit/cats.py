"""Finite categories with explicit composition tables.

Everything is extensional: objects and morphisms are identifier strings,
composition is a total table on composable pairs, and all laws are
exhaustively checkable.  Functors and natural transformations are plain
dictionaries validated against the tables.
"""

from __future__ import annotations

from itertools import product as iproduct

from .simplicial import ValidationReport
from .util import Budget, ensure_budget


class FiniteCategory:
    def __init__(self, objects, morphisms, compose, identities, name: str = "cat"):
        self.objects = tuple(sorted(objects))
        self.morphisms = dict(morphisms)        # id -> (dom, cod)
        self.compose_table = dict(compose)      # (g, f) -> g∘f, non-identity pairs
        self.identities = dict(identities)      # object -> morphism id
        self.name = name
        self._identity_set = frozenset(self.identities.values())
        self._homs: dict = {}
        self._iso_cache: dict = {}

    # -- structure queries -------------------------------------------------

    def dom(self, m: str) -> str:
        return self.morphisms[m][0]

    def cod(self, m: str) -> str:
        return self.morphisms[m][1]

    def is_identity(self, m: str) -> bool:
        return m in self._identity_set

    def hom(self, a: str, b: str) -> tuple:
        key = (a, b)
        if key not in self._homs:
            self._homs[key] = tuple(sorted(
                m for m, (d, c) in self.morphisms.items() if d == a and c == b))
        return self._homs[key]

    def nonidentity(self) -> list:
        return sorted(m for m in self.morphisms if not self.is_identity(m))

    def compose(self, g: str, f: str) -> str:
        """g ∘ f for cod(f) = dom(g)."""
        if self.cod(f) != self.dom(g):
            raise ValueError(f"morphisms {g!r} and {f!r} are not composable")
        if self.is_identity(f):
            return g
        if self.is_identity(g):
            return f
        return self.compose_table[(g, f)]

    def is_iso(self, m: str) -> bool:
        if m in self._iso_cache:
            return self._iso_cache[m]
        self._iso_cache[m] = self.inverse(m) is not None
        return self._iso_cache[m]

    def inverse(self, m: str):
        a, b = self.morphisms[m]
        for g in self.hom(b, a):
            if self.compose(g, m) == self.identities[a] and self.compose(m, g) == self.identities[b]:
                return g
        return None

    def isos_between(self, a: str, b: str) -> list:
        return [m for m in self.hom(a, b) if self.is_iso(m)]

    def canonical_key(self) -> tuple:
        return (self.objects, tuple(sorted(self.morphisms.items())),
                tuple(sorted(self.compose_table.items())),
                tuple(sorted(self.identities.items())))

    def __repr__(self):
        return f"<cat {self.name}: {len(self.objects)} objects, {len(self.morphisms)} morphisms>"


def validate_category(C: FiniteCategory) -> ValidationReport:
    """Exhaustive unit and associativity check."""
    report = ValidationReport(C.name)
    for x in C.objects:
        report.checked += 1
        i = C.identities.get(x)
        if i is None or i not in C.morphisms:
            report.add(f"missing identity for object {x!r}")
        elif C.morphisms[i] != (x, x):
            report.add(f"identity of {x!r} is not an endomorphism")
    for m, (d, c) in sorted(C.morphisms.items()):
        if d not in C.objects or c not in C.objects:
            report.add(f"morphism {m!r} has unknown endpoint")
    if not report.ok:
        return report
    nonid = C.nonidentity()
    for g in nonid:
        for f in nonid:
            comp = (C.cod(f) == C.dom(g))
            present = (g, f) in C.compose_table
            report.checked += 1
            if comp and not present:
                report.add(f"missing composite {g!r} . {f!r}")
            elif present and not comp:
                report.add(f"composite declared for non-composable pair {g!r} . {f!r}")
            elif present:
                h = C.compose_table[(g, f)]
                if h not in C.morphisms or C.morphisms[h] != (C.dom(f), C.cod(g)):
                    report.add(f"composite {g!r} . {f!r} = {h!r} has wrong endpoints")
    if not report.ok:
        return report
    for h in nonid:
        for g in nonid:
            if C.cod(g) != C.dom(h):
                continue
            hg = C.compose(h, g)
            for f in nonid:
                if C.cod(f) != C.dom(g):
                    continue
                report.checked += 1
                if C.compose(hg, f) != C.compose(h, C.compose(g, f)):
                    report.add(f"associativity fails on triple ({h!r}, {g!r}, {f!r})")
    return report


# ---------------------------------------------------------------------------
# builders


def poset_simplex(n: int) -> FiniteCategory:
    """The poset 0 < 1 < ... < n as a category."""
    if n < 0:
        raise ValueError("poset size must be nonnegative")
    objects = [str(i) for i in range(n + 1)]
    morphisms = {}
    identities = {}
    for i in range(n + 1):
        for j in range(i, n + 1):
            m = f"m{i}{j}"
            morphisms[m] = (str(i), str(j))
            if i == j:
                identities[str(i)] = m
    compose = {}
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            for k in range(j + 1, n + 1):
                compose[(f"m{j}{k}", f"m{i}{j}")] = f"m{i}{k}"
    return FiniteCategory(objects, morphisms, compose, identities, f"[{n}]")


def boundary_two() -> FiniteCategory:
    """The category on 0,1,2 freely generated by arrows a:0->1, b:1->2, c:0->2.

    Free generation keeps the composite b.a distinct from the generator c,
    so there are two parallel arrows 0 -> 2.
    """
    objects = ["0", "1", "2"]
    morphisms = {"a": ("0", "1"), "b": ("1", "2"), "c": ("0", "2"), "ba": ("0", "2")}
    identities = {}
    for x in objects:
        morphisms[f"id{x}"] = (x, x)
        identities[x] = f"id{x}"
    compose = {("b", "a"): "ba"}
    return FiniteCategory(objects, morphisms, compose, identities, "d[2]")


def empty_category() -> FiniteCategory:
    return FiniteCategory((), {}, {}, {}, "0cat")


def group_z2() -> FiniteCategory:
    """Z/2 as a one-object category."""
    return FiniteCategory(("*",), {"e": ("*", "*"), "g": ("*", "*")},
                          {("g", "g"): "e"}, {"*": "e"}, "z2")


def contractible_groupoid(labels=("a", "b")) -> FiniteCategory:
    """The groupoid with the given objects and exactly one morphism between any two."""
    objects = tuple(sorted(labels))
    morphisms = {}
    identities = {}
    for x in objects:
        for y in objects:
            m = f"e{x}{y}"
            morphisms[m] = (x, y)
            if x == y:
                identities[x] = m
    compose = {}
    for x in objects:
        for y in objects:
            for z in objects:
                if x != y and y != z:
                    compose[(f"e{y}{z}", f"e{x}{y}")] = f"e{x}{z}"
    return FiniteCategory(objects, morphisms, compose, identities,
                          "E(" + "".join(objects) + ")")


def product_cat(J: FiniteCategory, K: FiniteCategory) -> FiniteCategory:
    objects = [f"({x},{y})" for x in J.objects for y in K.objects]
    morphisms = {}
    identities = {}
    for m, (d1, c1) in J.morphisms.items():
        for n, (d2, c2) in K.morphisms.items():
            p = f"({m},{n})"
            morphisms[p] = (f"({d1},{d2})", f"({c1},{c2})")
    for x in J.objects:
        for y in K.objects:
            identities[f"({x},{y})"] = f"({J.identities[x]},{K.identities[y]})"
    compose = {}
    idset = set(identities.values())
    j_in: dict = {}
    for fm, (d, c) in J.morphisms.items():
        j_in.setdefault(c, []).append(fm)
    k_in: dict = {}
    for fn, (d, c) in K.morphisms.items():
        k_in.setdefault(c, []).append(fn)
    for gm, (gd, _) in J.morphisms.items():
        for gn, (gnd, _) in K.morphisms.items():
            g = f"({gm},{gn})"
            if g in idset:
                continue
            for fm in j_in.get(gd, ()):
                for fn in k_in.get(gnd, ()):
                    f = f"({fm},{fn})"
                    if f in idset:
                        continue
                    compose[(g, f)] = f"({J.compose(gm, fm)},{K.compose(gn, fn)})"
    return FiniteCategory(objects, morphisms, compose, identities,
                          f"({J.name}x{K.name})")


def full_subcategory(C: FiniteCategory, keep) -> FiniteCategory:
    keep = set(keep)
    morphisms = {m: dc for m, dc in C.morphisms.items()
                 if dc[0] in keep and dc[1] in keep}
    compose = {pair: h for pair, h in C.compose_table.items()
               if pair[0] in morphisms and pair[1] in morphisms}
    identities = {x: i for x, i in C.identities.items() if x in keep}
    return FiniteCategory(sorted(keep), morphisms, compose, identities, f"{C.name}|sub")


def coproduct_cat(J: FiniteCategory, K: FiniteCategory) -> FiniteCategory:
    objects = [f"l.{x}" for x in J.objects] + [f"r.{y}" for y in K.objects]
    morphisms = {}
    identities = {}
    compose = {}
    for tag, C in (("l", J), ("r", K)):
        for m, (d, c) in C.morphisms.items():
            morphisms[f"{tag}.{m}"] = (f"{tag}.{d}", f"{tag}.{c}")
        for x, i in C.identities.items():
            identities[f"{tag}.{x}"] = f"{tag}.{i}"
        for (g, f), h in C.compose_table.items():
            compose[(f"{tag}.{g}", f"{tag}.{f}")] = f"{tag}.{h}"
    return FiniteCategory(objects, morphisms, compose, identities,
                          f"({J.name}+{K.name})")


# ---------------------------------------------------------------------------
# functors and natural transformations


class Functor:
    def __init__(self, source: FiniteCategory, target: FiniteCategory, ob, mor, name: str = ""):
        self.source = source
        self.target = target
        self.ob = dict(ob)
        self.mor = dict(mor)  # defined on non-identity morphisms
        self.name = name or "functor"
        self._key = None

    def on_object(self, x: str) -> str:
        return self.ob[x]

    def on_morphism(self, m: str) -> str:
        if self.source.is_identity(m):
            return self.target.identities[self.ob[self.source.dom(m)]]
        return self.mor[m]

    def key(self) -> tuple:
        if self._key is None:
            self._key = (tuple(sorted(self.ob.items())), tuple(sorted(self.mor.items())))
        return self._key

    def __eq__(self, other):
        return (isinstance(other, Functor) and self.key() == other.key()
                and self.source.name == other.source.name
                and self.target.name == other.target.name)

    def __hash__(self):
        return hash((self.source.name, self.target.name, self.key()))

    def validate(self) -> ValidationReport:
        report = ValidationReport(f"functor {self.name}")
        for x in self.source.objects:
            report.checked += 1
            if self.ob.get(x) not in self.target.objects:
                report.add(f"object {x!r} has no valid image")
        for m in self.source.nonidentity():
            report.checked += 1
            img = self.mor.get(m)
            if img is None or img not in self.target.morphisms:
                report.add(f"morphism {m!r} has no valid image")
                continue
            d, c = self.source.morphisms[m]
            if self.target.morphisms[img] != (self.ob[d], self.ob[c]):
                report.add(f"image of {m!r} has wrong endpoints")
        if not report.ok:
            return report
        for (g, f), h in sorted(self.source.compose_table.items()):
            report.checked += 1
            if self.target.compose(self.on_morphism(g), self.on_morphism(f)) != self.on_morphism(h):
                report.add(f"composition not preserved on ({g!r}, {f!r})")
        return report

    def __repr__(self):
        return f"<functor {self.name}: {self.source.name} -> {self.target.name}>"


def identity_functor(C: FiniteCategory) -> Functor:
    return Functor(C, C, {x: x for x in C.objects},
                   {m: m for m in C.nonidentity()}, f"id_{C.name}")


def compose_functors(G: Functor, F: Functor) -> Functor:
    return Functor(F.source, G.target,
                   {x: G.ob[y] for x, y in F.ob.items()},
                   {m: G.on_morphism(F.on_morphism(m)) for m in F.source.nonidentity()},
                   f"{G.name}.{F.name}")


def constant_functor(J: FiniteCategory, C: FiniteCategory, obj: str, name: str = "") -> Functor:
    return Functor(J, C, {x: obj for x in J.objects},
                   {m: C.identities[obj] for m in J.nonidentity()},
                   name or f"const_{obj}")


class NatTransf:
    def __init__(self, source: Functor, target: Functor, components, name: str = ""):
        self.source = source
        self.target = target
        self.components = dict(components)  # object of source.source -> morphism of target.target
        self.name = name or "nat"

    def at(self, x: str) -> str:
        return self.components[x]

    def key(self) -> tuple:
        return (self.source.key(), self.target.key(), tuple(sorted(self.components.items())))

    def __eq__(self, other):
        return isinstance(other, NatTransf) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def validate(self) -> ValidationReport:
        report = ValidationReport(f"nat {self.name}")
        C = self.source.source
        D = self.source.target
        for x in C.objects:
            report.checked += 1
            m = self.components.get(x)
            if m is None or D.morphisms.get(m) != (self.source.ob[x], self.target.ob[x]):
                report.add(f"component at {x!r} missing or has wrong endpoints")
        if not report.ok:
            return report
        for m in C.nonidentity():
            x, y = C.morphisms[m]
            report.checked += 1
            left = D.compose(self.components[y], self.source.on_morphism(m))
            right = D.compose(self.target.on_morphism(m), self.components[x])
            if left != right:
                report.add(f"naturality square fails at {m!r}")
        return report

    def __repr__(self):
        return f"<nat {self.name}: {self.source.name} => {self.target.name}>"


def identity_nat(F: Functor) -> NatTransf:
    return NatTransf(F, F, {x: F.target.identities[F.ob[x]] for x in F.source.objects},
                     f"id_{F.name}")


def vertical_compose(beta: NatTransf, alpha: NatTransf) -> NatTransf:
    """beta ∘ alpha for alpha: F => G, beta: G => H."""
    D = alpha.source.target
    return NatTransf(alpha.source, beta.target,
                     {x: D.compose(beta.at(x), alpha.at(x)) for x in alpha.components},
                     f"{beta.name}.{alpha.name}")


def horizontal_compose(beta: NatTransf, alpha: NatTransf) -> NatTransf:
    """beta * alpha for alpha: F => G: A -> B and beta: H => K: B -> C."""
    C = beta.source.target
    comps = {}
    for x in alpha.source.source.objects:
        comps[x] = C.compose(beta.target.on_morphism(alpha.at(x)),
                             beta.at(alpha.source.ob[x]))
    return NatTransf(compose_functors(beta.source, alpha.source),
                     compose_functors(beta.target, alpha.target),
                     comps, f"{beta.name}*{alpha.name}")


def whisker_left(F: Functor, alpha: NatTransf) -> NatTransf:
    """F * alpha, postcomposing each component with F."""
    return NatTransf(compose_functors(F, alpha.source), compose_functors(F, alpha.target),
                     {x: F.on_morphism(alpha.at(x)) for x in alpha.components},
                     f"{F.name}*{alpha.name}")


def whisker_right(alpha: NatTransf, F: Functor) -> NatTransf:
    """alpha * F, reindexing components along F."""
    return NatTransf(compose_functors(alpha.source, F), compose_functors(alpha.target, F),
                     {x: alpha.at(F.ob[x]) for x in F.source.objects},
                     f"{alpha.name}*{F.name}")


# ---------------------------------------------------------------------------
# enumeration


def enumerate_functors(K: FiniteCategory, J: FiniteCategory, budget: Budget = None,
                       ob_allowed=None, mor_allowed=None) -> list:
    """All functors K -> J, canonically ordered.

    ``ob_allowed`` and ``mor_allowed`` optionally restrict the images of
    individual objects and morphisms (used to push naturality constraints
    into the search instead of filtering afterwards).
    """
    budget = ensure_budget(budget, f"functors {K.name} -> {J.name}")
    ob_allowed = ob_allowed or {}
    mor_allowed = mor_allowed or {}
    nonid = K.nonidentity()
    items = [("ob", x) for x in K.objects] + [("mor", m) for m in nonid]
    # interleave: a morphism becomes available once its endpoints are mapped
    order = []
    placed_obs = set()
    remaining = list(items)
    while remaining:
        ready_mors = [it for it in remaining if it[0] == "mor"
                      and {K.dom(it[1]), K.cod(it[1])} <= placed_obs]
        pick = min(ready_mors) if ready_mors else min(it for it in remaining if it[0] == "ob")
        order.append(pick)
        if pick[0] == "ob":
            placed_obs.add(pick[1])
        remaining.remove(pick)

    pairs_by_mor: dict = {}
    for (g, f), h in K.compose_table.items():
        for m in {g, f, h}:
            pairs_by_mor.setdefault(m, []).append((g, f, h))

    ob: dict = {}
    mor: dict = {}
    results = []

    def image(m):
        if K.is_identity(m):
            x = K.dom(m)
            return J.identities[ob[x]] if x in ob else None
        return mor.get(m)

    def consistent(m) -> bool:
        for (g, f, h) in pairs_by_mor.get(m, ()):
            ig, if_, ih = image(g), image(f), image(h)
            if ig is None or if_ is None or ih is None:
                continue
            budget.spend()
            if J.compose(ig, if_) != ih:
                return False
        return True

    def walk(pos):
        if pos == len(order):
            results.append(Functor(K, J, ob, mor))
            return
        kind, name = order[pos]
        if kind == "ob":
            pool = ob_allowed.get(name)
            for y in (J.objects if pool is None else sorted(pool)):
                budget.spend()
                ob[name] = y
                walk(pos + 1)
            ob.pop(name, None)
        else:
            d, c = K.morphisms[name]
            pool = mor_allowed.get(name)
            for y in J.hom(ob[d], ob[c]):
                if pool is not None and y not in pool:
                    continue
                budget.spend()
                mor[name] = y
                if consistent(name):
                    walk(pos + 1)
            mor.pop(name, None)

    walk(0)
    results.sort(key=lambda F: F.key())
    return results


def enumerate_nats(u: Functor, v: Functor, budget: Budget = None) -> list:
    """All natural transformations u => v for parallel functors."""
    if u.source is not v.source and u.source.canonical_key() != v.source.canonical_key():
        raise ValueError("functors are not parallel")
    budget = ensure_budget(budget, f"nats {u.name} => {v.name}")
    K = u.source
    D = u.target
    objs = list(K.objects)
    mors_by_obj: dict = {}
    for m in K.nonidentity():
        x, y = K.morphisms[m]
        mors_by_obj.setdefault(x, []).append(m)
        mors_by_obj.setdefault(y, []).append(m)
    comps: dict = {}
    results = []

    def natural_at(m) -> bool:
        x, y = K.morphisms[m]
        if x not in comps or y not in comps:
            return True
        budget.spend()
        return (D.compose(comps[y], u.on_morphism(m))
                == D.compose(v.on_morphism(m), comps[x]))

    def walk(pos):
        if pos == len(objs):
            results.append(NatTransf(u, v, comps))
            return
        x = objs[pos]
        for m in D.hom(u.ob[x], v.ob[x]):
            budget.spend()
            comps[x] = m
            if all(natural_at(mm) for mm in mors_by_obj.get(x, ())):
                walk(pos + 1)
        comps.pop(x, None)

    walk(0)
    results.sort(key=lambda n: n.key())
    return results


class FunctorCategory:
    """The category J^K with a lookup from functor/nat data to identifiers."""

    def __init__(self, K: FiniteCategory, J: FiniteCategory, budget: Budget = None):
        budget = ensure_budget(budget, f"functor category {J.name}^{K.name}")
        functors = enumerate_functors(K, J, budget)
        self.functor_by_id = {f"F{i}": F for i, F in enumerate(functors)}
        self.id_by_functor = {F.key(): fid for fid, F in self.functor_by_id.items()}
        morphisms = {}
        identities = {}
        self.nat_by_id = {}
        nat_ids: dict = {}
        for fid, F in sorted(self.functor_by_id.items()):
            for gid, G in sorted(self.functor_by_id.items()):
                for n in enumerate_nats(F, G, budget):
                    nid = f"t{len(self.nat_by_id)}"
                    self.nat_by_id[nid] = n
                    nat_ids[(fid, gid, tuple(sorted(n.components.items())))] = nid
                    morphisms[nid] = (fid, gid)
                    if fid == gid and all(J.is_identity(m) for m in n.components.values()):
                        identities[fid] = nid
        compose = {}
        for nid, n in self.nat_by_id.items():
            if nid in identities.values():
                continue
            fid, gid = morphisms[nid]
            for mid, m in self.nat_by_id.items():
                if mid in identities.values():
                    continue
                gid2, hid = morphisms[mid]
                if gid2 != gid:
                    continue
                comp = vertical_compose(m, n)
                cid = nat_ids[(fid, hid, tuple(sorted(comp.components.items())))]
                compose[(mid, nid)] = cid
        self.category = FiniteCategory(self.functor_by_id.keys(), morphisms, compose,
                                       identities, f"{J.name}^{K.name}")

    def object_id(self, F: Functor) -> str:
        return self.id_by_functor[F.key()]

    def morphism_id(self, n: NatTransf) -> str:
        fid = self.object_id(n.source)
        gid = self.object_id(n.target)
        for nid, cand in self.nat_by_id.items():
            if self.category.morphisms[nid] == (fid, gid) and cand.components == n.components:
                return nid
        raise KeyError("natural transformation not found in functor category")


def functor_category(K: FiniteCategory, J: FiniteCategory, budget: Budget = None) -> FunctorCategory:
    return FunctorCategory(K, J, budget)


def is_homotopy_finite(J: FiniteCategory):
    """Finite + skeletal + no nontrivial endomorphisms, with a witness on failure."""
    for m in J.nonidentity():
        d, c = J.morphisms[m]
        if d == c:
            return False, f"nontrivial endomorphism {m!r} on {d!r}"
    for i, x in enumerate(J.objects):
        for y in J.objects[i + 1:]:
            for f in J.hom(x, y):
                g = J.inverse(f)
                if g is not None:
                    return False, f"isomorphism {f!r} between distinct objects {x!r}, {y!r}"
    return True, None


def equivalence_inverse(F: Functor, budget: Budget = None):
    """Inverse-up-to-isomorphism of an equivalence, or None.

    Essential surjectivity and full faithfulness are checked directly;
    the inverse is then assembled from canonical preimage and isomorphism
    choices, which keeps the search deterministic without enumerating all
    candidate functors.
    """
    budget = ensure_budget(budget, f"equivalence inverse of {F.name}")
    C, D = F.source, F.target
    preimage = {}
    iso_to = {}
    for d in D.objects:
        found = False
        for c in C.objects:
            budget.spend()
            isos = D.isos_between(F.ob[c], d)
            if isos:
                preimage[d] = c
                iso_to[d] = isos[0]  # canonical: first in sorted order
                found = True
                break
        if not found:
            return None
    for x in C.objects:
        for y in C.objects:
            budget.spend()
            images = [F.on_morphism(m) for m in C.hom(x, y)]
            if len(set(images)) != len(images) or len(images) != len(D.hom(F.ob[x], F.ob[y])):
                return None
    ob = dict(preimage)
    mor = {}
    for g in D.nonidentity():
        d, c = D.morphisms[g]
        # transport along the chosen isos, then lift through the hom bijection
        conj = D.compose(D.inverse(iso_to[c]), D.compose(g, iso_to[d]))
        lifts = [m for m in C.hom(ob[d], ob[c]) if F.on_morphism(m) == conj]
        mor[g] = lifts[0]
    return Functor(D, C, ob, mor, f"{F.name}^-1")


def is_equivalence_of_categories(F: Functor, budget: Budget = None):
    inv = equivalence_inverse(F, budget)
    return inv is not None, inv


# ---------------------------------------------------------------------------
# text format


def cat_to_text(C: FiniteCategory) -> str:
    lines = ["objects: " + " ".join(C.objects)]
    for m in sorted(C.morphisms):
        if not C.is_identity(m):
            d, c = C.morphisms[m]
            lines.append(f"mor {m}: {d} -> {c}")
    for x in C.objects:
        lines.append(f"id {x} = {C.identities[x]}")
    for (g, f), h in sorted(C.compose_table.items()):
        lines.append(f"{g} . {f} = {h}")
    return "\n".join(lines) + "\n"


def cat_from_text(text: str, name: str = "cat") -> FiniteCategory:
    objects: list = []
    morphisms = {}
    identities = {}
    compose = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("objects:"):
                objects = line.split(":", 1)[1].split()
            elif line.startswith("mor "):
                head, arrow = line[4:].split(":", 1)
                d, c = arrow.split("->")
                morphisms[head.strip()] = (d.strip(), c.strip())
            elif line.startswith("id "):
                obj, m = line[3:].split("=")
                identities[obj.strip()] = m.strip()
            else:
                lhs, h = line.split("=")
                g, f = lhs.split(".")
                compose[(g.strip(), f.strip())] = h.strip()
        except ValueError as err:
            raise ValueError(f"line {lineno}: cannot parse {raw!r} ({err})") from None
    for x, i in identities.items():
        morphisms.setdefault(i, (x, x))
    return FiniteCategory(objects, morphisms, compose, identities, name)
