"""Prederivators over a finite diagram sample.

A prederivator here is a lazily evaluated, memoized 2-functor from a
finite sample of categories (with chosen functors and natural
transformations) to finite categories.  The sample replaces the full
2-category of diagram shapes: every operation states which closure
annotations (products with the interval, coproducts, a terminal object)
it needs, and fails loudly when the sample lacks them.  Audit reports
always carry the sample scope.
"""

from __future__ import annotations

import json
from pathlib import Path

from .cats import (
    FiniteCategory,
    Functor,
    FunctorCategory,
    NatTransf,
    cat_from_text,
    compose_functors,
    constant_functor,
    enumerate_functors,
    equivalence_inverse,
    functor_category,
    horizontal_compose,
    identity_functor,
    identity_nat,
    poset_simplex,
    product_cat,
    coproduct_cat,
    boundary_two,
    empty_category,
    vertical_compose,
)
from .mapping import Exponential, exponential
from .nerve import (
    NerveSSet,
    ho,
    nerve,
    nerve_map,
    nerve_product_compare_inv,
)
from .simplicial import (
    SimplexExpr,
    SimplicialMap,
    TruncatedSSet,
    ValidationReport,
    compose_maps,
    product,
    standard_simplex,
)
from .util import Budget, ensure_budget


# ---------------------------------------------------------------------------
# the diagram sample


class ClosureError(ValueError):
    pass


class DiaSample:
    """Finite stand-in for a 2-category of diagram shapes.

    Annotations declare the structure the operations rely on:
    ``products[(a, b)]`` names a member built by ``product_cat``;
    ``shifts[j]`` names the member playing j x [1]; ``coproducts`` names
    ``coproduct_cat`` members.  ``functors`` and ``nats`` list the
    (named) 1- and 2-morphisms that strictness and functoriality are
    checked against.
    """

    def __init__(self, name="sample"):
        self.name = name
        self.categories: dict[str, FiniteCategory] = {}
        self.functors: dict[str, Functor] = {}
        self.functor_ends: dict[str, tuple] = {}
        self.nats: dict[str, NatTransf] = {}
        self.nat_ends: dict[str, tuple] = {}
        self.products: dict[tuple, str] = {}
        self.coproducts: dict[tuple, str] = {}
        self.shifts: dict[str, str] = {}
        self.terminal: str | None = None
        self.initial: str | None = None
        self.order: list[str] = []
        self._by_id: dict[int, str] = {}

    def add_category(self, name: str, C: FiniteCategory) -> FiniteCategory:
        if name in self.categories:
            raise ValueError(f"duplicate sample category {name!r}")
        self.categories[name] = C
        self.order.append(name)
        self._by_id[id(C)] = name
        return C

    def add_functor(self, name: str, src: str, dst: str, F: Functor) -> Functor:
        self.functors[name] = F
        self.functor_ends[name] = (src, dst)
        return F

    def add_nat(self, name: str, src_functor: str, dst_functor: str, a: NatTransf) -> NatTransf:
        self.nats[name] = a
        self.nat_ends[name] = (src_functor, dst_functor)
        return a

    def cat(self, name: str) -> FiniteCategory:
        if name not in self.categories:
            raise ClosureError(f"sample {self.name} has no category {name!r}")
        return self.categories[name]

    def name_of(self, C: FiniteCategory) -> str:
        hit = self._by_id.get(id(C))
        if hit is not None:
            return hit
        for name, D in self.categories.items():
            if D.canonical_key() == C.canonical_key():
                return name
        raise ClosureError(f"category {C.name} is not in sample {self.name}")

    def product_name(self, a: str, b: str) -> str:
        key = (a, b)
        if key not in self.products:
            raise ClosureError(f"sample {self.name} lacks the product {a} x {b}")
        return self.products[key]

    def shift_name(self, j: str) -> str:
        if j not in self.shifts:
            raise ClosureError(f"sample {self.name} lacks the shift {j} x [1]")
        return self.shifts[j]

    def composable_functor_pairs(self):
        out = []
        for n2, (s2, d2) in sorted(self.functor_ends.items()):
            for n1, (s1, d1) in sorted(self.functor_ends.items()):
                if d1 == s2:
                    out.append((n2, n1))
        return out

    def validate(self) -> ValidationReport:
        report = ValidationReport(f"sample {self.name}")
        from .cats import validate_category
        for name, C in self.categories.items():
            report.checked += 1
            sub = validate_category(C)
            if not sub.ok:
                report.add(f"category {name}: {sub.violations[0]}")
        for name, F in self.functors.items():
            report.checked += 1
            src, dst = self.functor_ends[name]
            if F.source is not self.categories.get(src) or F.target is not self.categories.get(dst):
                report.add(f"functor {name} endpoints disagree with declaration")
            elif not F.validate().ok:
                report.add(f"functor {name} does not preserve structure")
        for name, a in self.nats.items():
            report.checked += 1
            if not a.validate().ok:
                report.add(f"natural transformation {name} is not natural")
        for j in self.categories:
            report.checked += 1
            if f"id_{j}" not in self.functors:
                report.add(f"identity functor of {j} not listed")
        for (a, b), p in self.products.items():
            report.checked += 1
            want = product_cat(self.cat(a), self.cat(b))
            if want.canonical_key() != self.cat(p).canonical_key():
                report.add(f"product annotation {a} x {b} = {p} is not the product")
        for (a, b), p in self.coproducts.items():
            report.checked += 1
            want = coproduct_cat(self.cat(a), self.cat(b))
            if want.canonical_key() != self.cat(p).canonical_key():
                report.add(f"coproduct annotation {a} + {b} = {p} is not the coproduct")
        for j, p in self.shifts.items():
            report.checked += 1
            want = product_cat(self.cat(j), poset_simplex(1))
            if want.canonical_key() != self.cat(p).canonical_key():
                report.add(f"shift annotation for {j} is not {j} x [1]")
        return report


def _vertex_functor(term: FiniteCategory, J: FiniteCategory, obj: str) -> Functor:
    return Functor(term, J, {"0": obj}, {}, f"vx_{J.name}_{obj}")


def _endpoint_functor(J: FiniteCategory, JxI: FiniteCategory, t: int) -> Functor:
    ids = poset_simplex(1).identities
    ob = {x: f"({x},{t})" for x in J.objects}
    mor = {m: f"({m},{ids[str(t)]})" for m in J.nonidentity()}
    return Functor(J, JxI, ob, mor, f"end{t}_{J.name}")


def _interval_nat(J: FiniteCategory, JxI: FiniteCategory, i0: Functor, i1: Functor) -> NatTransf:
    comps = {x: f"({J.identities[x]},m01)" for x in J.objects}
    return NatTransf(i0, i1, comps, f"step_{J.name}")


def standard_sample() -> DiaSample:
    """The default sample: simplex shapes, one interval shift layer,
    binary coproducts, and the empty shape.

    The interval-shift closure is annotated for [0] and [1] only; larger
    shifts make exponentials over groupoid-like corpora combinatorially
    infeasible at desk scale, and every audit declares the scope it ran at.
    """
    s = DiaSample("standard")
    p0 = s.add_category("[0]", poset_simplex(0))
    p1 = s.add_category("[1]", poset_simplex(1))
    p2 = s.add_category("[2]", poset_simplex(2))
    p0x1 = s.add_category("[0]x[1]", product_cat(p0, poset_simplex(1)))
    p1x1 = s.add_category("[1]x[1]", product_cat(p1, poset_simplex(1)))
    d2 = s.add_category("d[2]", boundary_two())
    s.add_category("0", empty_category())
    c00 = s.add_category("[0]+[0]", coproduct_cat(p0, p0))
    c01 = s.add_category("[0]+[1]", coproduct_cat(p0, p1))
    c11 = s.add_category("[1]+[1]", coproduct_cat(p1, p1))
    s.terminal = "[0]"
    s.initial = "0"
    s.products = {("[0]", "[1]"): "[0]x[1]", ("[1]", "[1]"): "[1]x[1]"}
    s.shifts = {"[0]": "[0]x[1]", "[1]": "[1]x[1]"}
    s.coproducts = {("[0]", "[0]"): "[0]+[0]", ("[0]", "[1]"): "[0]+[1]",
                    ("[1]", "[1]"): "[1]+[1]"}

    for name in s.order:
        s.add_functor(f"id_{name}", name, name, identity_functor(s.cat(name)))
    for name in s.order:
        if name not in ("0", "[0]"):
            s.add_functor(f"!{name}", name, "[0]",
                          constant_functor(s.cat(name), p0, "0", f"!{name}"))
        for obj in s.cat(name).objects:
            s.add_functor(f"vx_{name}_{obj}", "[0]", name,
                          _vertex_functor(p0, s.cat(name), obj))
    # simplex operators between [1] and [2]
    for fname, images in [("d0_[2]", ("1", "2")), ("d1_[2]", ("0", "2")), ("d2_[2]", ("0", "1"))]:
        lo, hi = images
        s.add_functor(fname, "[1]", "[2]",
                      Functor(p1, p2, {"0": lo, "1": hi},
                              {"m01": f"m{lo}{hi}"}, fname))
    s.add_functor("s0_[2]", "[2]", "[1]",
                  Functor(p2, p1, {"0": "0", "1": "0", "2": "1"},
                          {"m01": "m00", "m02": "m01", "m12": "m01"}, "s0_[2]"))
    s.add_functor("s1_[2]", "[2]", "[1]",
                  Functor(p2, p1, {"0": "0", "1": "1", "2": "1"},
                          {"m01": "m01", "m02": "m01", "m12": "m11"}, "s1_[2]"))
    # probes of the free boundary
    dd = s.cat("d[2]")
    for fname, gen in [("edge_a", "a"), ("edge_b", "b"), ("edge_c", "c")]:
        lo, hi = dd.morphisms[gen]
        s.add_functor(fname, "[1]", "d[2]",
                      Functor(p1, dd, {"0": lo, "1": hi}, {"m01": gen}, fname))
    s.add_functor("tri_d[2]", "[2]", "d[2]",
                  Functor(p2, s.cat("d[2]"),
                          {"0": "0", "1": "1", "2": "2"},
                          {"m01": "a", "m02": "ba", "m12": "b"}, "tri_d[2]"))
    # shift structure
    for j in ("[0]", "[1]"):
        J = s.cat(j)
        JxI = s.cat(s.shifts[j])
        i0 = s.add_functor(f"end0_{j}", j, s.shifts[j], _endpoint_functor(J, JxI, 0))
        i1 = s.add_functor(f"end1_{j}", j, s.shifts[j], _endpoint_functor(J, JxI, 1))
        pr = Functor(JxI, J, {x: x.split(",")[0][1:] for x in JxI.objects},
                     {m: _left_component(m) for m in JxI.nonidentity()}, f"proj_{j}")
        s.add_functor(f"proj_{j}", s.shifts[j], j, pr)
        s.add_nat(f"step_{j}", f"end0_{j}", f"end1_{j}", _interval_nat(J, JxI, i0, i1))
    # coproduct injections
    for (a, b), cname in sorted(s.coproducts.items()):
        A, B, C = s.cat(a), s.cat(b), s.cat(cname)
        s.add_functor(f"inl_{cname}", a, cname,
                      Functor(A, C, {x: f"l.{x}" for x in A.objects},
                              {m: f"l.{m}" for m in A.nonidentity()}, f"inl_{cname}"))
        s.add_functor(f"inr_{cname}", b, cname,
                      Functor(B, C, {x: f"r.{x}" for x in B.objects},
                              {m: f"r.{m}" for m in B.nonidentity()}, f"inr_{cname}"))
    # vertex steps on [1] and [2]
    s.add_nat("step01_[1]", "vx_[1]_0", "vx_[1]_1",
              NatTransf(s.functors["vx_[1]_0"], s.functors["vx_[1]_1"], {"0": "m01"}))
    for (i, j) in (("0", "1"), ("1", "2"), ("0", "2")):
        s.add_nat(f"step{i}{j}_[2]", f"vx_[2]_{i}", f"vx_[2]_{j}",
                  NatTransf(s.functors[f"vx_[2]_{i}"], s.functors[f"vx_[2]_{j}"],
                            {"0": f"m{i}{j}"}))
    return s


def _left_component(pair_mor: str) -> str:
    depth = 0
    for pos, ch in enumerate(pair_mor):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 1:
            return pair_mor[1:pos]
    raise ValueError(f"not a pair morphism: {pair_mor!r}")


def _right_component(pair_mor: str) -> str:
    depth = 0
    for pos, ch in enumerate(pair_mor):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 1:
            return pair_mor[pos + 1:-1]
    raise ValueError(f"not a pair morphism: {pair_mor!r}")


# ---------------------------------------------------------------------------
# prederivators


class Prederivator:
    """Memoized contravariant 2-functor on a diagram sample.

    Subclasses provide ``_eval``, ``_on_functor`` and ``_on_nat``; results
    are cached write-once per key, so repeated queries return identical
    values.
    """

    def __init__(self, sample: DiaSample, name: str = "prederivator"):
        self.sample = sample
        self.name = name
        self._eval_cache: dict = {}
        self._functor_cache: dict = {}
        self._nat_cache: dict = {}

    # subclass hooks ------------------------------------------------------

    def _eval(self, J_name: str) -> FiniteCategory:
        raise NotImplementedError

    def _on_functor(self, u: Functor, src: str, dst: str) -> Functor:
        raise NotImplementedError

    def _on_nat(self, alpha: NatTransf, src: str, dst: str) -> NatTransf:
        raise NotImplementedError

    # public API ----------------------------------------------------------

    def eval(self, J_name: str) -> FiniteCategory:
        if J_name not in self._eval_cache:
            self.sample.cat(J_name)
            self._eval_cache[J_name] = self._eval(J_name)
        return self._eval_cache[J_name]

    def on_functor(self, u: Functor, src: str = None, dst: str = None) -> Functor:
        src = src if src is not None else self.sample.name_of(u.source)
        dst = dst if dst is not None else self.sample.name_of(u.target)
        key = (src, dst, u.key())
        if key not in self._functor_cache:
            self._functor_cache[key] = self._on_functor(u, src, dst)
        return self._functor_cache[key]

    def on_nat(self, alpha: NatTransf, src: str = None, dst: str = None) -> NatTransf:
        src = src if src is not None else self.sample.name_of(alpha.source.source)
        dst = dst if dst is not None else self.sample.name_of(alpha.source.target)
        key = (src, dst, alpha.key())
        if key not in self._nat_cache:
            self._nat_cache[key] = self._on_nat(alpha, src, dst)
        return self._nat_cache[key]

    def check_two_functoriality(self) -> ValidationReport:
        """Exhaustive 2-functor laws over the listed sample morphisms."""
        report = ValidationReport(f"2-functoriality of {self.name}")
        s = self.sample
        for name in s.order:
            report.checked += 1
            img = self.on_functor(s.functors[f"id_{name}"], name, name)
            if img.key() != identity_functor(self.eval(name)).key():
                report.add(f"identity of {name} not preserved")
        for n2, n1 in s.composable_functor_pairs():
            u = s.functors[n1]
            v = s.functors[n2]
            s1, d1 = s.functor_ends[n1]
            s2, d2 = s.functor_ends[n2]
            report.checked += 1
            vu = compose_functors(v, u)
            lhs = self.on_functor(vu, s1, d2)
            rhs = compose_functors(self.on_functor(u, s1, d1), self.on_functor(v, s2, d2))
            if lhs.key() != rhs.key():
                report.add(f"composition {n2} o {n1} not respected")
        for name, a in sorted(s.nats.items()):
            sf, df = s.nat_ends[name]
            src, dst = s.functor_ends[sf]
            report.checked += 1
            img = self.on_nat(a, src, dst)
            if not img.validate().ok:
                report.add(f"image of {name} is not natural")
            usrc = self.on_functor(s.functors[sf], src, dst)
            udst = self.on_functor(s.functors[df], src, dst)
            if img.source.key() != usrc.key() or img.target.key() != udst.key():
                report.add(f"image of {name} has wrong endpoints")
        # vertical composition on composable listed nat pairs
        for n1, a in sorted(s.nats.items()):
            for n2, b in sorted(s.nats.items()):
                if s.nat_ends[n2][0] != s.nat_ends[n1][1]:
                    continue
                sf = s.nat_ends[n1][0]
                src, dst = s.functor_ends[sf]
                report.checked += 1
                lhs = self.on_nat(vertical_compose(b, a), src, dst)
                rhs = vertical_compose(self.on_nat(b, src, dst), self.on_nat(a, src, dst))
                if lhs.key()[2] != rhs.key()[2]:
                    report.add(f"vertical composition {n2} . {n1} not respected")
        # horizontal composition on listed nat pairs with matching middles
        for n1, a in sorted(s.nats.items()):
            src1, dst1 = s.functor_ends[s.nat_ends[n1][0]]
            for n2, b in sorted(s.nats.items()):
                src2, dst2 = s.functor_ends[s.nat_ends[n2][0]]
                if src2 != dst1:
                    continue
                report.checked += 1
                lhs = self.on_nat(horizontal_compose(b, a), src1, dst2)
                rhs = horizontal_compose(self.on_nat(a, src1, dst1),
                                         self.on_nat(b, src2, dst2))
                if lhs.key()[2] != rhs.key()[2]:
                    report.add(f"horizontal composition {n2} * {n1} not respected")
        return report


class HoEval:
    """Cached evaluation data for one shape: exponential plus Ho."""

    def __init__(self, nerve_sset, exp: Exponential, pres):
        self.nerve = nerve_sset
        self.exp = exp
        self.pres = pres


class HoPrederivator(Prederivator):
    """The prederivator of a quasicategory: J -> Ho(Q^{N(J)})."""

    def __init__(self, Q: TruncatedSSet, sample: DiaSample, budget: Budget = None):
        super().__init__(sample, f"HO({Q.name})")
        self.Q = Q
        self.budget = budget
        self._data: dict[str, HoEval] = {}
        self._interval_iso = None

    def data(self, J_name: str) -> HoEval:
        self.eval(J_name)
        return self._data[J_name]

    def _eval(self, J_name: str) -> FiniteCategory:
        J = self.sample.cat(J_name)
        N = nerve(J, 2)
        try:
            E = exponential(self.Q, N, 2, self.budget)
        except ValueError as err:
            raise ValueError(f"evaluation at {J_name} failed: {err}") from None
        pres = ho(E.sset, self.budget)
        self._data[J_name] = HoEval(N, E, pres)
        cat = pres.category
        renamed = FiniteCategory(cat.objects, cat.morphisms, cat.compose_table,
                                 cat.identities, f"{self.name}({J_name})")
        self._data[J_name].pres = HoPresRenamed(pres, renamed)
        return renamed

    def _underlying_map(self, cell_map: SimplicialMap, J_name: str) -> SimplicialMap:
        """Extract N(J) -> Q from a level-0 exponential cell."""
        data = self._data[J_name]
        P0 = data.exp.products[0]
        N_t = data.exp.S_t
        assignment = {}
        for n in range(N_t.dim_bound + 1):
            for x in N_t.nondeg(n):
                e = P0.pair_expr(SimplexExpr((), x),
                                 SimplexExpr(tuple(range(n - 1, -1, -1)), "0"))
                assignment[x] = cell_map.apply(e)
        return SimplicialMap(N_t, data.exp.T_t, assignment)

    def _precompose_cell(self, cell_map: SimplicialMap, g: SimplicialMap,
                         src_name: str, dst_name: str, level: int) -> SimplicialMap:
        """Precompose an exponential cell with a map of exponent nerves."""
        Pj = self._data[src_name].exp.products[level]
        Pk = self._data[dst_name].exp.products[level]
        assignment = {}
        for xs in Pj.levels.values():
            for pid in xs:
                e1, e2 = Pj.pair_of[pid]
                assignment[pid] = cell_map.apply(Pk.pair_expr(g.apply(e1), e2))
        return SimplicialMap(Pj, self._data[dst_name].exp.T_t, assignment)

    def _on_functor(self, u: Functor, src: str, dst: str) -> Functor:
        # contravariant: u: J -> K induces u*: eval(K) -> eval(J)
        self.eval(src)
        self.eval(dst)
        dj, dk = self._data[src], self._data[dst]
        nu = nerve_map(u, source=dj.nerve, target=dk.nerve)
        ob = {}
        for c in dk.pres.category.objects:
            mu = self._precompose_cell(dk.exp.cell_map[c], nu, src, dst, 0)
            ob[c] = dj.exp.locate(mu).base
        mor = {}
        for mid in dk.pres.category.nonidentity():
            rep = dk.pres.reps[mid]
            edge_map = dk.exp.map_of(rep)
            mu = self._precompose_cell(edge_map, nu, src, dst, 1)
            mor[mid] = dj.pres.cls(dj.exp.locate(mu))
        return Functor(self.eval(dst), self.eval(src), ob, mor,
                       f"{self.name}({u.name})*")

    def _on_nat(self, alpha: NatTransf, src: str, dst: str) -> NatTransf:
        u, v = alpha.source, alpha.target
        J = self.sample.cat(src)
        K = self.sample.cat(dst)
        ustar = self.on_functor(u, src, dst)
        vstar = self.on_functor(v, src, dst)
        dj, dk = self._data[src], self._data[dst]
        mate = _mate_functor(alpha, J, K)
        JxI = mate.source
        NJxI = nerve(JxI, 2)
        nmate = nerve_map(mate, source=NJxI, target=dk.nerve)
        interval_nerve = nerve(poset_simplex(1), 2)
        P_JI = product(dj.nerve, interval_nerve)
        compare = nerve_product_compare_inv(P_JI, NJxI)
        shape_to_nerve = _interval_shape_iso(dj.exp.products[1].right, interval_nerve)
        comps = {}
        for c in dk.pres.category.objects:
            base_map = self._underlying_map(dk.exp.cell_map[c], dst)
            Pj1 = dj.exp.products[1]
            assignment = {}
            for xs in Pj1.levels.values():
                for pid in xs:
                    e1, e2 = Pj1.pair_of[pid]
                    z = P_JI.pair_expr(e1, shape_to_nerve.apply(e2))
                    w = nmate.apply(compare.apply(z))
                    assignment[pid] = base_map.apply(w)
            mu = SimplicialMap(Pj1, dj.exp.T_t, assignment)
            comps[c] = dj.pres.cls(dj.exp.locate(mu))
        return NatTransf(ustar, vstar, comps, f"{self.name}({alpha.name})*")


class HoPresRenamed:
    """Presentation wrapper aligning the Ho data with the renamed category."""

    def __init__(self, pres, category: FiniteCategory):
        self.sset = pres.sset
        self.category = category
        self.class_map = pres.class_map
        self.reps = pres.reps

    def cls(self, e) -> str:
        return self.class_map[e.token()]


def _mate_functor(alpha: NatTransf, J: FiniteCategory, K: FiniteCategory) -> Functor:
    """The functor J x [1] -> K packaging a natural transformation."""
    u, v = alpha.source, alpha.target
    JxI = product_cat(J, poset_simplex(1))
    ids = poset_simplex(1).identities
    ob = {}
    for x in J.objects:
        ob[f"({x},0)"] = u.ob[x]
        ob[f"({x},1)"] = v.ob[x]
    mor = {}
    for p in JxI.nonidentity():
        m = _left_component(p)
        tm = _right_component(p)
        x = J.dom(m)
        y = J.cod(m)
        if tm == ids["0"]:
            img = u.on_morphism(m)
        elif tm == ids["1"]:
            img = v.on_morphism(m)
        else:  # the step morphism of the interval
            img = K.compose(alpha.at(y), u.on_morphism(m))
        mor[p] = img
    return Functor(JxI, K, ob, mor, f"mate({alpha.name})")


def _interval_shape_iso(shape: TruncatedSSet, interval_nerve) -> SimplicialMap:
    """Identify the standard 1-simplex with the nerve of [1]."""
    assignment = {"0": SimplexExpr((), "0"), "1": SimplexExpr((), "1"),
                  "01": SimplexExpr((), "m01")}
    return SimplicialMap(shape, interval_nerve, assignment)


def ho_prederivator(Q: TruncatedSSet, sample: DiaSample = None,
                    budget: Budget = None) -> HoPrederivator:
    sample = sample if sample is not None else standard_sample()
    return HoPrederivator(Q, sample, budget)


# ---------------------------------------------------------------------------
# underlying set-valued data


class DiaSet:
    """Object parts only: a presheaf of finite sets on the sample."""

    def __init__(self, sample: DiaSample, values, on_functor, name="diaset"):
        self.sample = sample
        self.values = dict(values)          # category name -> tuple of elements
        self.on_functor_data = dict(on_functor)  # functor name -> dict
        self.name = name

    def value(self, J_name: str) -> tuple:
        return self.values[J_name]

    def act(self, functor_name: str) -> dict:
        return self.on_functor_data[functor_name]


def underlying_diaset(D: Prederivator) -> DiaSet:
    values = {J: tuple(D.eval(J).objects) for J in D.sample.order}
    acts = {}
    for name, u in sorted(D.sample.functors.items()):
        src, dst = D.sample.functor_ends[name]
        acts[name] = dict(D.on_functor(u, src, dst).ob)
    return DiaSet(D.sample, values, acts, f"ob({D.name})")


# ---------------------------------------------------------------------------
# partial diagram functors and the Der audits


def dia_arrow(D: Prederivator, J_name: str):
    """The arrow data of dia_J^{[1]}: eval(J x [1]) -> eval(J)^{[1]}.

    Returns (source category, map object -> morphism of eval(J),
    map morphism -> pair of morphisms of eval(J)).
    """
    shift = D.sample.shift_name(J_name)
    s = D.sample
    i0 = s.functors[f"end0_{J_name}"]
    i1 = s.functors[f"end1_{J_name}"]
    step = s.nats[f"step_{J_name}"]
    i0_star = D.on_functor(i0, J_name, shift)
    i1_star = D.on_functor(i1, J_name, shift)
    step_star = D.on_nat(step, J_name, shift)
    src = D.eval(shift)

    def on_object(X: str) -> str:
        return step_star.at(X)

    def on_morphism(m: str) -> tuple:
        return (i0_star.on_morphism(m), i1_star.on_morphism(m))

    return src, on_object, on_morphism


def check_der1(D: Prederivator, budget: Budget = None) -> ValidationReport:
    """Coproduct decomposition: eval(J + K) ~ eval(J) x eval(K)."""
    report = ValidationReport(f"Der1 for {D.name} over {D.sample.name}")
    s = D.sample
    if s.initial is not None:
        report.checked += 1
        C = D.eval(s.initial)
        F = constant_functor(C, poset_simplex(0), "0", "to_terminal")
        if equivalence_inverse(F, budget) is None:
            report.add(f"empty coproduct: eval({s.initial}) is not equivalent "
                       "to the terminal category")
    for (a, b), cname in sorted(s.coproducts.items()):
        report.checked += 1
        inl = s.functors[f"inl_{cname}"]
        inr = s.functors[f"inr_{cname}"]
        la = D.on_functor(inl, a, cname)
        rb = D.on_functor(inr, b, cname)
        C = D.eval(cname)
        P = product_cat(D.eval(a), D.eval(b))
        ob = {x: f"({la.ob[x]},{rb.ob[x]})" for x in C.objects}
        mor = {m: f"({la.on_morphism(m)},{rb.on_morphism(m)})" for m in C.nonidentity()}
        cmp_functor = Functor(C, P, ob, mor, f"der1_{cname}")
        if not cmp_functor.validate().ok:
            report.add(f"comparison functor at {cname} is not a functor")
            continue
        if equivalence_inverse(cmp_functor, budget) is None:
            report.add(f"comparison eval({cname}) -> eval({a}) x eval({b}) "
                       "is not an equivalence")
    return report


def check_der2(D: Prederivator, budget: Budget = None) -> ValidationReport:
    """Conservativity of the underlying diagram functor, every sample shape."""
    report = ValidationReport(f"Der2 for {D.name} over {D.sample.name}")
    s = D.sample
    for J_name in s.order:
        J = s.cat(J_name)
        C = D.eval(J_name)
        vertex_stars = {
            obj: D.on_functor(s.functors[f"vx_{J_name}_{obj}"], "[0]", J_name)
            for obj in J.objects}
        for m in C.nonidentity():
            if C.is_iso(m):
                continue
            report.checked += 1
            components = [vertex_stars[obj].on_morphism(m) for obj in J.objects]
            base = D.eval("[0]")
            if all(base.is_iso(c) for c in components):
                report.add(f"dia^{J_name} sends the non-isomorphism {m!r} "
                           "to a pointwise isomorphism")
    return report


def _commuting_squares(C: FiniteCategory, f: str, g: str):
    """Pairs (p0, p1) with p1 . f = g . p0."""
    out = []
    for p0 in C.hom(C.dom(f), C.dom(g)):
        for p1 in C.hom(C.cod(f), C.cod(g)):
            if C.compose(p1, f) == C.compose(g, p0):
                out.append((p0, p1))
    return out


def check_der5(D: Prederivator, strict_surjectivity: bool,
               budget: Budget = None) -> ValidationReport:
    """Fullness plus (essential or strict) surjectivity of dia_J^{[1]}.

    Runs at every shape whose interval shift is annotated in the sample.
    """
    variant = "Der5'" if strict_surjectivity else "Der5"
    report = ValidationReport(f"{variant} for {D.name} over {D.sample.name} "
                              f"(shapes: {sorted(D.sample.shifts)})")
    for J_name in sorted(D.sample.shifts):
        src, on_object, on_morphism = dia_arrow(D, J_name)
        CJ = D.eval(J_name)
        images = {X: on_object(X) for X in src.objects}
        # surjectivity on objects: every arrow of eval(J) is a diagram
        for f in sorted(CJ.morphisms):
            report.checked += 1
            if f in set(images.values()):
                continue
            if strict_surjectivity:
                report.add(f"{J_name}: arrow {f!r} of eval({J_name}) has no "
                           "preimage diagram")
                continue
            found = False
            for X, fx in sorted(images.items()):
                for (p0, p1) in _commuting_squares(CJ, fx, f):
                    if CJ.is_iso(p0) and CJ.is_iso(p1):
                        found = True
                        break
                if found:
                    break
            if not found:
                report.add(f"{J_name}: arrow {f!r} is not even isomorphic to "
                           "a diagram image")
        # fullness
        for X in src.objects:
            for Y in src.objects:
                fx, fy = images[X], images[Y]
                for (p0, p1) in _commuting_squares(CJ, fx, fy):
                    report.checked += 1
                    hit = any(on_morphism(m) == (p0, p1)
                              for m in src.hom(X, Y))
                    if not hit:
                        report.add(f"{J_name}: square ({p0!r}, {p1!r}) from "
                                   f"{X!r} to {Y!r} has no lift")
    return report


def der_audit(D: Prederivator, budget: Budget = None) -> dict:
    """All four axiom audits, as a name -> report mapping."""
    return {
        "Der1": check_der1(D, budget),
        "Der2": check_der2(D, budget),
        "Der5": check_der5(D, strict_surjectivity=False, budget=budget),
        "Der5'": check_der5(D, strict_surjectivity=True, budget=budget),
    }


# ---------------------------------------------------------------------------
# the Kan-extension comparison


def _monotone_tuples(m: int, n: int):
    from itertools import product as iproduct
    return [t for t in iproduct(range(n + 1), repeat=m + 1)
            if all(t[i] <= t[i + 1] for i in range(m))]


def simplicial_action(S: TruncatedSSet, alpha: tuple, y: SimplexExpr) -> SimplexExpr:
    """y . alpha for a monotone map alpha: [m] -> [n] and an n-simplex y."""
    from .simplicial import compose_words, weak_seq_to_word
    keep = tuple(sorted(set(alpha)))
    restricted = S.restrict(y, keep)
    positions = tuple(keep.index(a) for a in alpha)
    word, _ = weak_seq_to_word(positions)
    return SimplexExpr(compose_words(word, restricted.word), restricted.base)


class KanExtensionResult:
    def __init__(self, families, maps, pairing, depth):
        self.families = families
        self.maps = maps
        self.pairing = pairing
        self.depth = depth

    @property
    def bijective(self) -> bool:
        return (len(self.families) == len(self.maps)
                and len(self.pairing) == len(self.families))


def kan_extension_value(R: TruncatedSSet, J: FiniteCategory, d: int,
                        budget: Budget = None) -> KanExtensionResult:
    """Limit of R over the truncated category of simplices of N(J).

    Computes compatible families over pairs (m <= d, m-simplex of N(J))
    and returns them together with the direct enumeration of simplicial
    maps N(J) -> R and the comparison bijection.
    """
    from .simplicial import enumerate_maps
    budget = ensure_budget(budget, f"kan extension over {J.name}")
    NJ = nerve(J, max(2, d))
    free_dim = max((n for n in range(NJ.dim_bound + 1) if NJ.nondeg(n)), default=0)
    if d < free_dim + 1:
        raise ValueError(f"depth {d} too small: nerve has nondegenerate "
                         f"simplices in dimension {free_dim}")
    if R.coskeletal_from is None or d < R.coskeletal_from:
        raise ValueError("target must be coskeletal within the chosen depth")
    if d > R.dim_bound:
        raise ValueError("depth exceeds the target truncation")
    objects = [(m, y) for m in range(d + 1) for y in NJ.total(m)]
    objects.sort(key=lambda o: (o[0], o[1].token()))
    index = {o: i for i, o in enumerate(objects)}
    # an arrow (m, x) -> (n, y) is a monotone alpha with y . alpha = x;
    # a family must satisfy value[(n, y)] . alpha = value[(m, x)]
    checks: dict = {i: [] for i in range(len(objects))}
    for (n, y) in objects:
        ti = index[(n, y)]
        for m in range(d + 1):
            for alpha in _monotone_tuples(m, n):
                x = simplicial_action(NJ, alpha, y)
                si = index[(m, x)]
                if si == ti:
                    checks[ti].append(("self", alpha))
                elif si < ti:
                    checks[ti].append(("src-known", si, alpha))
                else:
                    checks[si].append(("tgt-known", ti, alpha))
    values: dict = {}
    families = []

    def admissible(pos, v) -> bool:
        n, y = objects[pos]
        for check in checks[pos]:
            budget.spend()
            if check[0] == "self":
                if simplicial_action(R, check[1], v) != v:
                    return False
            elif check[0] == "src-known":
                _, si, alpha = check
                if simplicial_action(R, alpha, v) != values[objects[si]]:
                    return False
            else:
                _, ti, alpha = check
                if simplicial_action(R, alpha, values[objects[ti]]) != v:
                    return False
        return True

    def walk(pos):
        if pos == len(objects):
            families.append(dict(values))
            return
        n, y = objects[pos]
        for v in R.total(n):
            budget.spend()
            if admissible(pos, v):
                values[objects[pos]] = v
                walk(pos + 1)
                values.pop(objects[pos], None)

    walk(0)
    common = min(NJ.dim_bound, R.dim_bound)
    NJ_c = NJ.truncate(common)
    maps = enumerate_maps(NJ_c, R.truncate(common), budget)
    map_keys = {m.key(): m for m in maps}
    pairing = []
    for fam in families:
        assignment = {}
        for m in range(common + 1):
            for x in NJ_c.nondeg(m):
                assignment[x] = fam[(m, SimplexExpr((), x))]
        key = tuple(sorted(assignment.items()))
        if key in map_keys:
            pairing.append((fam, map_keys[key]))
    return KanExtensionResult(families, maps, pairing, d)


# ---------------------------------------------------------------------------
# morphisms of prederivators


class StrictMorphism:
    """Components commuting with every listed restriction on the nose."""

    def __init__(self, source: Prederivator, target: Prederivator, components,
                 name: str = "strict"):
        self.source = source
        self.target = target
        self.components = dict(components)  # category name -> Functor
        self.name = name

    def at(self, J_name: str) -> Functor:
        return self.components[J_name]

    def key(self) -> tuple:
        return tuple(sorted((j, F.key()) for j, F in self.components.items()))

    def key_on(self, shapes) -> tuple:
        return tuple(sorted((j, F.key()) for j, F in self.components.items()
                            if j in set(shapes)))

    def __eq__(self, other):
        return isinstance(other, StrictMorphism) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def object_parts(self) -> tuple:
        return tuple(sorted((j, tuple(sorted(F.ob.items())))
                            for j, F in self.components.items()))


class PseudoNat:
    """Components plus invertible structure cells, one per listed functor."""

    def __init__(self, source: Prederivator, target: Prederivator, components,
                 structure, name: str = "pseudonat"):
        self.source = source
        self.target = target
        self.components = dict(components)   # category name -> Functor
        self.structure = dict(structure)     # functor name -> NatTransf
        self.name = name

    def at(self, J_name: str) -> Functor:
        return self.components[J_name]

    def cell(self, functor_name: str) -> NatTransf:
        return self.structure[functor_name]


def strict_as_pseudo(F: StrictMorphism) -> PseudoNat:
    """A strict morphism with identity structure cells."""
    structure = {}
    for name, u in F.source.sample.functors.items():
        src, dst = F.source.sample.functor_ends[name]
        composite = compose_functors(F.at(src), F.source.on_functor(u, src, dst))
        structure[name] = identity_nat(composite)
    return PseudoNat(F.source, F.target, F.components, structure, F.name)


class Modification:
    """One natural transformation per shape, compatible with restriction."""

    def __init__(self, source: PseudoNat, target: PseudoNat, components,
                 name: str = "modification"):
        self.source = source
        self.target = target
        self.components = dict(components)  # category name -> NatTransf
        self.name = name

    def at(self, J_name: str) -> NatTransf:
        return self.components[J_name]


def check_strict(F: StrictMorphism) -> ValidationReport:
    """Verify strict 2-naturality over the component scope.

    Shapes without a component (shape-restricted morphisms from the
    enrichment levels) are outside the claim and skipped.
    """
    report = ValidationReport(f"strictness of {F.name}")
    s = F.source.sample
    scope = set(F.components)
    for J_name in sorted(scope):
        report.checked += 1
        comp = F.components[J_name]
        if not comp.validate().ok:
            report.add(f"component at {J_name} is not a functor")
    if not report.ok:
        return report
    for name, u in sorted(s.functors.items()):
        src, dst = s.functor_ends[name]
        if src not in scope or dst not in scope:
            continue
        report.checked += 1
        lhs = compose_functors(F.at(src), F.source.on_functor(u, src, dst))
        rhs = compose_functors(F.target.on_functor(u, src, dst), F.at(dst))
        if lhs.key() != rhs.key():
            report.add(f"component square at functor {name} does not commute")
    for name, a in sorted(s.nats.items()):
        sf, df = s.nat_ends[name]
        src, dst = s.functor_ends[sf]
        if src not in scope or dst not in scope:
            continue
        a1 = F.source.on_nat(a, src, dst)
        a2 = F.target.on_nat(a, src, dst)
        for X in F.source.eval(dst).objects:
            report.checked += 1
            if F.at(src).on_morphism(a1.at(X)) != a2.at(F.at(dst).ob[X]):
                report.add(f"2-morphism {name} not respected at object {X!r}")
                break
    return report


def check_pseudonat(F: PseudoNat) -> ValidationReport:
    report = ValidationReport(f"pseudonaturality of {F.name}")
    s = F.source.sample
    for J_name in s.order:
        report.checked += 1
        comp = F.components.get(J_name)
        if comp is None or not comp.validate().ok:
            report.add(f"component at {J_name} missing or not a functor")
    if not report.ok:
        return report
    cells = {}
    for name, u in sorted(s.functors.items()):
        src, dst = s.functor_ends[name]
        report.checked += 1
        cell = F.structure.get(name)
        if cell is None:
            report.add(f"no structure cell for functor {name}")
            continue
        lhs = compose_functors(F.at(src), F.source.on_functor(u, src, dst))
        rhs = compose_functors(F.target.on_functor(u, src, dst), F.at(dst))
        if cell.source.key() != lhs.key() or cell.target.key() != rhs.key():
            report.add(f"structure cell at {name} has wrong endpoints")
            continue
        if not cell.validate().ok:
            report.add(f"structure cell at {name} is not natural")
            continue
        C = F.target.eval(src)
        if not all(C.is_iso(cell.at(X)) for X in cell.components):
            report.add(f"structure cell at {name} is not invertible")
            continue
        cells[name] = cell
    if not report.ok:
        return report
    for name in s.order:
        report.checked += 1
        cell = cells.get(f"id_{name}")
        if cell is not None and any(
                not F.target.eval(name).is_identity(cell.at(X))
                for X in cell.components):
            report.add(f"structure cell at the identity of {name} is not trivial")
    # pasting coherence on listed composable pairs whose composite is listed
    for n2, n1 in s.composable_functor_pairs():
        u = s.functors[n1]
        v = s.functors[n2]
        s1, d1 = s.functor_ends[n1]
        s2, d2 = s.functor_ends[n2]
        composite = compose_functors(v, u)
        match = [m for m, w in s.functors.items()
                 if s.functor_ends[m] == (s1, d2) and w.key() == composite.key()]
        if not match or n1 not in cells or n2 not in cells or match[0] not in cells:
            continue
        report.checked += 1
        C = F.target.eval(s1)
        # pasting: restrict the outer cell along u, then apply the inner one
        for X in F.source.eval(d2).objects:
            inner = cells[n1].at(F.source.on_functor(v, s2, d2).ob[X])
            outer = F.target.on_functor(u, s1, d1).on_morphism(cells[n2].at(X))
            if cells[match[0]].at(X) != C.compose(outer, inner):
                report.add(f"pasting coherence fails at {n2} o {n1}, object {X!r}")
                break
    # respect for 2-morphisms
    for name, a in sorted(s.nats.items()):
        sf, df = s.nat_ends[name]
        if sf not in cells or df not in cells:
            continue
        src, dst = s.functor_ends[sf]
        report.checked += 1
        a1 = F.source.on_nat(a, src, dst)
        a2 = F.target.on_nat(a, src, dst)
        C = F.target.eval(src)
        for X in F.source.eval(dst).objects:
            lhs = C.compose(a2.at(F.at(dst).ob[X]), cells[sf].at(X))
            rhs = C.compose(cells[df].at(X), F.at(src).on_morphism(a1.at(X)))
            if lhs != rhs:
                report.add(f"respect for the 2-morphism {name} fails at {X!r}")
                break
    return report


def check_modification(Xi: Modification) -> ValidationReport:
    report = ValidationReport(f"modification {Xi.name}")
    F, G = Xi.source, Xi.target
    s = F.source.sample
    for J_name in s.order:
        report.checked += 1
        comp = Xi.components.get(J_name)
        if comp is None or not comp.validate().ok:
            report.add(f"component at {J_name} missing or not natural")
            continue
        if (comp.source.key() != F.at(J_name).key()
                or comp.target.key() != G.at(J_name).key()):
            report.add(f"component at {J_name} has wrong endpoints")
    if not report.ok:
        return report
    for name, u in sorted(s.functors.items()):
        src, dst = s.functor_ends[name]
        ustar1 = F.source.on_functor(u, src, dst)
        ustar2 = F.target.on_functor(u, src, dst)
        C = F.target.eval(src)
        lam = F.structure[name]
        gam = G.structure[name]
        for X in F.source.eval(dst).objects:
            report.checked += 1
            left = C.compose(ustar2.on_morphism(Xi.at(dst).at(X)), lam.at(X))
            right = C.compose(gam.at(X), Xi.at(src).at(ustar1.ob[X]))
            if left != right:
                report.add(f"compatibility square at functor {name}, object {X!r} fails")
                break
    return report


def compose_pseudonat(G: PseudoNat, F: PseudoNat, name: str = None) -> PseudoNat:
    """Composite G after F, structure cells pasted."""
    comps = {j: compose_functors(G.at(j), F.at(j)) for j in F.components}
    structure = {}
    s = F.source.sample
    for fname, u in s.functors.items():
        src, dst = s.functor_ends[fname]
        lamF = F.structure[fname]
        lamG = G.structure[fname]
        C = G.target.eval(src)
        cell = {}
        for X in F.source.eval(dst).objects:
            cell[X] = C.compose(lamG.at(F.at(dst).ob[X]),
                                G.at(src).on_morphism(lamF.at(X)))
        src_f = compose_functors(comps[src], F.source.on_functor(u, src, dst))
        dst_f = compose_functors(G.target.on_functor(u, src, dst), comps[dst])
        structure[fname] = NatTransf(src_f, dst_f, cell)
    return PseudoNat(F.source, G.target, comps, structure,
                     name or f"{G.name}.{F.name}")


def compose_strict(G: StrictMorphism, F: StrictMorphism, name: str = None) -> StrictMorphism:
    comps = {j: compose_functors(G.at(j), F.at(j)) for j in F.components}
    return StrictMorphism(F.source, G.target, comps, name or f"{G.name}.{F.name}")


def identity_strict(D: Prederivator) -> StrictMorphism:
    return StrictMorphism(D, D, {j: identity_functor(D.eval(j)) for j in D.sample.order},
                          f"id_{D.name}")


def compose_modification(Y: Modification, X: Modification, name: str = None) -> Modification:
    comps = {j: vertical_compose(Y.at(j), X.at(j)) for j in X.components}
    return Modification(X.source, Y.target, comps, name or f"{Y.name}.{X.name}")


# ---------------------------------------------------------------------------
# enumeration of strict morphisms and the rigidity check


def enumerate_strict_morphisms(D1: Prederivator, D2: Prederivator,
                               budget: Budget = None, shapes=None) -> list:
    """All strict morphisms D1 -> D2 with components over the given shapes.

    Backtracks over the sample in declaration order; commutation with every
    listed functor between already-placed shapes prunes the search.
    """
    budget = ensure_budget(budget, f"strict morphisms {D1.name} -> {D2.name}")
    s = D1.sample
    shapes = list(shapes) if shapes is not None else list(s.order)
    functors_between = [
        (name, u, *s.functor_ends[name]) for name, u in sorted(s.functors.items())
        if s.functor_ends[name][0] in shapes and s.functor_ends[name][1] in shapes]
    components: dict = {}
    results = []

    def allowed_images(J_name: str):
        """Per-object and per-morphism image pools from placed components.

        A listed u: K -> J with K placed pins the whole restriction of the
        J-component; u: J -> K with K placed pins it on the image of the
        restriction.  Both cut the functor search to near-singletons.
        """
        CJ1 = D1.eval(J_name)
        CJ2 = D2.eval(J_name)
        ob_allowed: dict = {}
        mor_allowed: dict = {}

        def cut_ob(x, pool):
            prev = ob_allowed.get(x)
            ob_allowed[x] = pool if prev is None else prev & pool

        def cut_mor(m, pool):
            prev = mor_allowed.get(m)
            mor_allowed[m] = pool if prev is None else prev & pool

        for name, u, src, dst in functors_between:
            if dst == J_name and src in components and src != J_name:
                u1 = D1.on_functor(u, src, dst)
                u2 = D2.on_functor(u, src, dst)
                Fsrc = components[src]
                by_ob: dict = {}
                for Y in CJ2.objects:
                    budget.spend()
                    by_ob.setdefault(u2.ob[Y], set()).add(Y)
                for X in CJ1.objects:
                    cut_ob(X, by_ob.get(Fsrc.ob[u1.ob[X]], set()))
                by_mor: dict = {}
                for mm in CJ2.morphisms:
                    by_mor.setdefault(u2.on_morphism(mm), set()).add(mm)
                for m in CJ1.nonidentity():
                    want = Fsrc.on_morphism(u1.on_morphism(m))
                    cut_mor(m, by_mor.get(want, set()))
            elif src == J_name and dst in components and dst != J_name:
                u1 = D1.on_functor(u, src, dst)
                u2 = D2.on_functor(u, src, dst)
                Fdst = components[dst]
                for Z in Fdst.source.objects:
                    budget.spend()
                    cut_ob(u1.ob[Z], {u2.ob[Fdst.ob[Z]]})
                for m in Fdst.source.nonidentity():
                    cut_mor(u1.on_morphism(m), {u2.on_morphism(Fdst.on_morphism(m))})
        return ob_allowed, mor_allowed

    def consistent(J_name: str) -> bool:
        for name, u, src, dst in functors_between:
            if src not in components or dst not in components:
                continue
            if J_name not in (src, dst):
                continue
            budget.spend()
            lhs = compose_functors(components[src], D1.on_functor(u, src, dst))
            rhs = compose_functors(D2.on_functor(u, src, dst), components[dst])
            if lhs.key() != rhs.key():
                return False
        return True

    def walk(pos):
        if pos == len(shapes):
            F = StrictMorphism(D1, D2, components)
            ok = True
            for name, a in sorted(s.nats.items()):
                sf, _ = s.nat_ends[name]
                src, dst = s.functor_ends[sf]
                if src not in components or dst not in components:
                    continue
                a1 = D1.on_nat(a, src, dst)
                a2 = D2.on_nat(a, src, dst)
                for X in D1.eval(dst).objects:
                    budget.spend()
                    if components[src].on_morphism(a1.at(X)) != a2.at(components[dst].ob[X]):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                results.append(StrictMorphism(D1, D2, dict(components)))
            return
        J_name = shapes[pos]
        ob_allowed, mor_allowed = allowed_images(J_name)
        for F in enumerate_functors(D1.eval(J_name), D2.eval(J_name), budget,
                                    ob_allowed=ob_allowed, mor_allowed=mor_allowed):
            components[J_name] = F
            if consistent(J_name):
                walk(pos + 1)
        components.pop(J_name, None)

    walk(0)
    results.sort(key=lambda F: F.key())
    return results


def strict_rigidity_check(D1: Prederivator, D2: Prederivator,
                          budget: Budget = None) -> ValidationReport:
    """Strict morphisms are determined by their underlying set data.

    Also verifies the lift formula: the action on a morphism equals the
    underlying arrow of the action on any of its diagram lifts.
    """
    report = ValidationReport(f"rigidity {D1.name} -> {D2.name}")
    morphisms = enumerate_strict_morphisms(D1, D2, budget)
    report.checked += len(morphisms)
    by_objects: dict = {}
    for F in morphisms:
        by_objects.setdefault(F.object_parts(), []).append(F)
    for obs, group in sorted(by_objects.items()):
        if len(group) > 1:
            report.add(f"{len(group)} distinct strict morphisms share "
                       "the same underlying set data")
    # lift formula at every shape with an annotated interval shift
    for F in morphisms:
        for J_name in sorted(D1.sample.shifts):
            src1, on_obj1, _ = dia_arrow(D1, J_name)
            _, on_obj2, _ = dia_arrow(D2, J_name)
            shift = D1.sample.shift_name(J_name)
            for m in D1.eval(J_name).nonidentity():
                lifts = [X for X in src1.objects if on_obj1(X) == m]
                for X in lifts:
                    report.checked += 1
                    if F.at(J_name).on_morphism(m) != on_obj2(F.at(shift).ob[X]):
                        report.add(f"lift formula fails at {J_name}, morphism {m!r}")
                        break
    report.enumerated = len(morphisms)
    return report


# ---------------------------------------------------------------------------
# concretization


class ConcreteImage:
    """Product-category embedding of a prederivator over a (small) sample.

    The category has one factor per shape and one arrow-category factor
    per listed functor; morphisms and 2-morphisms of prederivators embed
    by their component tuples, faithfully.
    """

    def __init__(self, D: Prederivator, shapes=None, functor_names=None):
        self.D = D
        s = D.sample
        self.shapes = list(shapes) if shapes is not None else list(s.order)
        self.functor_names = (list(functor_names) if functor_names is not None
                              else [n for n, ends in sorted(s.functor_ends.items())
                                    if ends[0] in self.shapes and ends[1] in self.shapes])
        self._category = None

    @property
    def category(self) -> FiniteCategory:
        """The product category, materialized on first use.

        The factor count multiplies morphism counts, so callers should
        restrict the shapes and functors to what they actually compare.
        """
        if self._category is None:
            D, s = self.D, self.D.sample
            factors = [D.eval(j) for j in self.shapes]
            for name in self.functor_names:
                src, _ = s.functor_ends[name]
                factors.append(functor_category(poset_simplex(1), D.eval(src)).category)
            if not factors:
                raise ValueError("no factors to concretize over")
            cat = factors[0]
            for extra in factors[1:]:
                cat = product_cat(cat, extra)
            self._category = cat
        return self._category

    def embed_morphism(self, F: PseudoNat) -> tuple:
        """Component data of U(F), enough to compare morphisms faithfully.

        The factor at a functor u: K -> J records, for every arrow f of
        the J-value, the diagonal of the pseudo-commutative square:
        the structure cell at dom(f) followed by the restricted image.
        """
        s = self.D.sample
        parts = [(j, F.at(j).key()) for j in self.shapes]
        for name in self.functor_names:
            src, dst = s.functor_ends[name]
            u = s.functors[name]
            ustar2 = F.target.on_functor(u, src, dst)
            cell = F.structure[name]
            C = F.target.eval(src)
            action = {}
            for m in F.source.eval(dst).morphisms:
                X = F.source.eval(dst).dom(m)
                action[m] = C.compose(
                    ustar2.on_morphism(F.at(dst).on_morphism(m)), cell.at(X))
            parts.append((name, tuple(sorted(action.items()))))
        return tuple(parts)

    def embed_modification(self, Xi: Modification) -> tuple:
        """Component data of U(Xi): per functor, the squares between images."""
        parts = [(j, tuple(sorted(Xi.at(j).components.items()))) for j in self.shapes]
        s = self.D.sample
        F, G = Xi.source, Xi.target
        for name in self.functor_names:
            src, dst = s.functor_ends[name]
            u = s.functors[name]
            ustar1 = F.source.on_functor(u, src, dst)
            ustar2 = F.target.on_functor(u, src, dst)
            comp = {}
            for m in F.source.eval(dst).morphisms:
                X = F.source.eval(dst).dom(m)
                Y = F.source.eval(dst).cod(m)
                comp[m] = (ustar2.on_morphism(Xi.at(dst).at(X)),
                           Xi.at(src).at(ustar1.ob[Y]))
            parts.append((name, tuple(sorted(comp.items()))))
        return tuple(parts)


def concretize(D: Prederivator, shapes=None, functor_names=None) -> ConcreteImage:
    return ConcreteImage(D, shapes, functor_names)


# ---------------------------------------------------------------------------
# sample manifest files


def sample_to_manifest(s: DiaSample, directory: Path) -> dict:
    """Write the categories as .cat files and return the manifest data."""
    from .cats import cat_to_text
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    cats = {}
    for i, name in enumerate(s.order):
        fname = f"cat{i:02d}.cat"
        (directory / fname).write_text(cat_to_text(s.cat(name)))
        cats[name] = fname
    manifest = {
        "name": s.name,
        "order": list(s.order),
        "categories": cats,
        "functors": [
            {"name": n, "src": s.functor_ends[n][0], "dst": s.functor_ends[n][1],
             "ob": dict(sorted(s.functors[n].ob.items())),
             "mor": dict(sorted(s.functors[n].mor.items()))}
            for n in sorted(s.functors)],
        "nats": [
            {"name": n, "src": s.nat_ends[n][0], "dst": s.nat_ends[n][1],
             "components": dict(sorted(s.nats[n].components.items()))}
            for n in sorted(s.nats)],
        "products": {f"{a}|{b}": p for (a, b), p in sorted(s.products.items())},
        "coproducts": {f"{a}|{b}": p for (a, b), p in sorted(s.coproducts.items())},
        "shifts": dict(sorted(s.shifts.items())),
        "terminal": s.terminal,
        "initial": s.initial,
    }
    (directory / "sample.json").write_text(json.dumps(manifest, indent=1, sort_keys=True))
    return manifest


def sample_from_manifest(path) -> DiaSample:
    path = Path(path)
    data = json.loads(path.read_text())
    s = DiaSample(data.get("name", "sample"))
    for name in data.get("order", sorted(data["categories"])):
        rel = data["categories"][name]
        s.add_category(name, cat_from_text((path.parent / rel).read_text(), name))
    for spec in data.get("functors", []):
        F = Functor(s.cat(spec["src"]), s.cat(spec["dst"]), spec["ob"], spec["mor"],
                    spec["name"])
        s.add_functor(spec["name"], spec["src"], spec["dst"], F)
    for spec in data.get("nats", []):
        a = NatTransf(s.functors[spec["src"]], s.functors[spec["dst"]],
                      spec["components"], spec["name"])
        s.add_nat(spec["name"], spec["src"], spec["dst"], a)
    s.products = {tuple(k.split("|")): v for k, v in data.get("products", {}).items()}
    s.coproducts = {tuple(k.split("|")): v for k, v in data.get("coproducts", {}).items()}
    s.shifts = dict(data.get("shifts", {}))
    s.terminal = data.get("terminal")
    s.initial = data.get("initial")
    return s
