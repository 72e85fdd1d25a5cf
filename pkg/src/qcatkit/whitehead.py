"""Equivalence detection and the conservativity agreement experiment.

Two detectors are compared: the vertex-and-mapping-space criterion
(essentially surjective plus fully faithful on homotopy categories of
mapping spaces, a 1-truncated surrogate of the full criterion) and
componentwise equivalence of the induced prederivator morphism.  On the
labeled corpus the prederivator verdict must imply the surrogate verdict.
"""

from __future__ import annotations

from pathlib import Path

from .cats import Functor, equivalence_inverse
from .mapping import mapping_space
from .nerve import ho, require_quasicategory
from .prederivator import Prederivator, HoPrederivator, StrictMorphism, standard_sample
from .simplicial import (
    SimplexExpr,
    SimplicialMap,
    TruncatedSSet,
    compose_maps,
    sset_from_text,
)
from .util import Budget, ensure_budget


def _truncated_map(f: SimplicialMap, level: int) -> SimplicialMap:
    src = f.source.truncate(level)
    tgt = f.target.truncate(level)
    assignment = {x: f.assignment[x]
                  for n in range(src.dim_bound + 1) for x in src.nondeg(n)}
    return SimplicialMap(src, tgt, assignment)


class Verdict:
    def __init__(self, name: str, ok: bool, label: str, witnesses=None):
        self.name = name
        self.ok = ok
        self.label = label
        self.witnesses = witnesses or {}

    def __bool__(self):
        return self.ok

    def lines(self):
        out = [f"{self.name}: {'yes' if self.ok else 'no'} ({self.label})"]
        for k, v in sorted(self.witnesses.items()):
            out.append(f"  {k}: {v}")
        return out


def is_essentially_surjective(f: SimplicialMap, budget: Budget = None,
                              src_pres=None, tgt_pres=None) -> Verdict:
    """Every target vertex receives a Ho-invertible edge from the image."""
    budget = ensure_budget(budget, "essential surjectivity")
    require_quasicategory(f.source, budget)
    require_quasicategory(f.target, budget)
    pres = tgt_pres if tgt_pres is not None else ho(f.target, budget, verified=True)
    witnesses = {}
    for z in f.target.nondeg(0):
        budget.spend()
        found = None
        for x in f.source.nondeg(0):
            fx = f.assignment[x].base
            isos = pres.category.isos_between(fx, z)
            if isos:
                found = (x, isos[0])
                break
        if found is None:
            return Verdict(f"essentially surjective {f.source.name} -> {f.target.name}",
                           False, "vertex search", {"failing vertex": z})
        witnesses[z] = found
    return Verdict(f"essentially surjective {f.source.name} -> {f.target.name}",
                   True, "vertex search", witnesses)


def mapping_space_functor(f: SimplicialMap, x: str, y: str, k: int = 2,
                          budget: Budget = None) -> Functor:
    """The induced comparison on homotopy categories of mapping spaces."""
    budget = ensure_budget(budget, "mapping space comparison")
    M_src = mapping_space(f.source, x, y, k, budget)
    M_tgt = mapping_space(f.target, f.assignment[x].base, f.assignment[y].base, k, budget)
    level = max(f.target.coskeletal_from or 2, 2)
    f_t = _truncated_map(f, level)
    pres_src = ho(M_src.sset, budget)
    pres_tgt = ho(M_tgt.sset, budget)
    ob = {}
    for c in pres_src.category.objects:
        composed = compose_maps(f_t, M_src.exp.cell_map[c])
        ob[c] = M_tgt.exp.locate(composed).base
    mor = {}
    for mid in pres_src.category.nonidentity():
        edge = M_src.exp.map_of(pres_src.reps[mid])
        composed = compose_maps(f_t, edge)
        mor[mid] = pres_tgt.cls(M_tgt.exp.locate(composed))
    return Functor(pres_src.category, pres_tgt.category, ob, mor,
                   f"map-space({x},{y})")


def is_fully_faithful_1tr(f: SimplicialMap, budget: Budget = None) -> Verdict:
    """Mapping-space comparisons are equivalences, pair by pair.

    Decided at the homotopy-category level of the mapping spaces; higher
    homotopy is invisible at this truncation, which the verdict label
    records.
    """
    budget = ensure_budget(budget, "full faithfulness")
    require_quasicategory(f.source, budget)
    require_quasicategory(f.target, budget)
    witnesses = {}
    for x in f.source.nondeg(0):
        for y in f.source.nondeg(0):
            budget.spend()
            cmp_functor = mapping_space_functor(f, x, y, 2, budget)
            inverse = equivalence_inverse(cmp_functor, budget)
            if inverse is None:
                return Verdict(f"fully faithful {f.source.name} -> {f.target.name}",
                               False, "1-truncated surrogate",
                               {"failing pair": (x, y)})
            witnesses[(x, y)] = "equivalence"
    return Verdict(f"fully faithful {f.source.name} -> {f.target.name}",
                   True, "1-truncated surrogate", witnesses)


def is_equivalence(f: SimplicialMap, budget: Budget = None) -> Verdict:
    """Conjunction of the two checks, labeled as the surrogate it is."""
    ess = is_essentially_surjective(f, budget)
    if not ess.ok:
        return Verdict(f"equivalence {f.source.name} -> {f.target.name}", False,
                       "1-truncated surrogate", {"essential surjectivity": ess.witnesses})
    ff = is_fully_faithful_1tr(f, budget)
    return Verdict(f"equivalence {f.source.name} -> {f.target.name}",
                   ess.ok and ff.ok, "1-truncated surrogate",
                   {} if ff.ok else ff.witnesses)


def induced_prederivator_morphism(DQ: HoPrederivator, DR: HoPrederivator,
                                  f: SimplicialMap) -> StrictMorphism:
    """HO(f): postcomposition with f, shape by shape."""
    level = max(f.target.coskeletal_from or 2, 2)
    f_t = _truncated_map(f, level)
    comps = {}
    for J_name in DQ.sample.order:
        dq = DQ.data(J_name)
        dr = DR.data(J_name)
        ob = {}
        for c in dq.pres.category.objects:
            ob[c] = dr.exp.locate(compose_maps(f_t, dq.exp.cell_map[c])).base
        mor = {}
        for mid in dq.pres.category.nonidentity():
            edge = dq.exp.map_of(dq.pres.reps[mid])
            mor[mid] = dr.pres.cls(dr.exp.locate(compose_maps(f_t, edge)))
        comps[J_name] = Functor(DQ.eval(J_name), DR.eval(J_name), ob, mor,
                                f"HO(f)_{J_name}")
    return StrictMorphism(DQ, DR, comps, "HO(f)")


def prederivator_equivalence(F: StrictMorphism, budget: Budget = None) -> Verdict:
    """Each component is an equivalence of finite categories.

    The inverse-up-to-isomorphism is produced by the deterministic
    canonical-choice construction from essential surjectivity and full
    faithfulness.
    """
    budget = ensure_budget(budget, "prederivator equivalence")
    witnesses = {}
    for J_name in F.source.sample.order:
        if J_name not in F.components:
            continue
        budget.spend()
        inverse = equivalence_inverse(F.at(J_name), budget)
        if inverse is None:
            return Verdict(f"prederivator equivalence {F.name}", False,
                           f"components over {F.source.sample.name}",
                           {"failing shape": J_name})
        witnesses[J_name] = "equivalence"
    return Verdict(f"prederivator equivalence {F.name}", True,
                   f"components over {F.source.sample.name}", witnesses)


class AgreementRow:
    def __init__(self, name, expected, joyal, prederivator):
        self.name = name
        self.expected = expected
        self.joyal = joyal
        self.prederivator = prederivator

    @property
    def implication_ok(self) -> bool:
        return (not self.prederivator) or self.joyal

    @property
    def matches_ground_truth(self) -> bool:
        return self.joyal == self.expected


def conservativity_experiment(corpus, sample=None, budget: Budget = None) -> list:
    """Run both detectors over a labeled corpus of maps.

    ``corpus`` holds (name, map, expected) triples.  Returns the table of
    rows; the caller asserts the implication and ground-truth columns.
    """
    budget = ensure_budget(budget, "conservativity experiment")
    sample = sample if sample is not None else standard_sample()
    prederivators: dict = {}

    def pred_of(S):
        key = id(S)
        if key not in prederivators:
            prederivators[key] = HoPrederivator(S, sample, budget)
        return prederivators[key]

    rows = []
    for name, f, expected in corpus:
        joyal = is_equivalence(f, budget)
        DQ = pred_of(f.source)
        DR = pred_of(f.target)
        HOf = induced_prederivator_morphism(DQ, DR, f)
        pred = prederivator_equivalence(HOf, budget)
        rows.append(AgreementRow(name, expected, joyal.ok, pred.ok))
    return rows


def agreement_table(rows) -> str:
    width = max(len(r.name) for r in rows) + 2
    lines = [f"{'map'.ljust(width)}expected  surrogate  prederivator  implication"]
    for r in rows:
        lines.append(
            f"{r.name.ljust(width)}"
            f"{str(r.expected).ljust(10)}{str(r.joyal).ljust(11)}"
            f"{str(r.prederivator).ljust(14)}{'ok' if r.implication_ok else 'VIOLATED'}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# corpus manifest


def parse_map_file(text: str, source: TruncatedSSet, target: TruncatedSSet) -> SimplicialMap:
    """Assignment lines ``<src-id> = [s-words] <target-base>``."""
    from .simplicial import parse_expr
    assignment = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            lhs, rhs = line.split("=", 1)
            tokens = rhs.split()
            word = tuple(int(t[1:]) for t in tokens[:-1])
            assignment[lhs.strip()] = SimplexExpr(word, tokens[-1])
        except (ValueError, IndexError):
            raise ValueError(f"line {lineno}: cannot parse map line {raw!r}") from None
    return SimplicialMap(source, target, assignment)


def map_to_text(f: SimplicialMap) -> str:
    lines = []
    for x in sorted(f.assignment):
        e = f.assignment[x]
        word = " ".join(f"s{i}" for i in e.word)
        lines.append(f"{x} = {word} {e.base}".replace("  ", " "))
    return "\n".join(lines) + "\n"


def load_labeled_corpus(manifest_path) -> list:
    """Lines: ``map <name>: <sset-file> -> <sset-file> via <map-file> expect <label>``."""
    path = Path(manifest_path)
    out = []
    cache: dict = {}

    def load_sset(rel):
        if rel not in cache:
            cache[rel] = sset_from_text((path.parent / rel).read_text(), rel)
        return cache[rel]

    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            head, rest = line.split(":", 1)
            if head.split()[0] != "map":
                raise ValueError("expected a 'map' line")
            name = head.split()[1]
            arrow, tail = rest.split("via", 1)
            src_file, tgt_file = (p.strip() for p in arrow.split("->"))
            map_file, expect = (p.strip() for p in tail.split("expect"))
            source = load_sset(src_file)
            target = load_sset(tgt_file)
            f = parse_map_file((path.parent / map_file).read_text(), source, target)
            out.append((name, f, expect == "equiv"))
        except (ValueError, IndexError) as err:
            raise ValueError(f"{path.name} line {lineno}: {err}") from None
    return out


def write_labeled_corpus(corpus, directory) -> Path:
    """Write .sset/.map files plus the manifest for a labeled corpus."""
    from .simplicial import sset_to_text
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    sset_files: dict = {}
    lines = []
    for i, (name, f, expected) in enumerate(corpus):
        for S in (f.source, f.target):
            if id(S) not in sset_files:
                fname = f"s{len(sset_files):02d}.sset"
                (directory / fname).write_text(sset_to_text(S))
                sset_files[id(S)] = fname
        map_file = f"m{i:02d}.map"
        (directory / map_file).write_text(map_to_text(f))
        label = "equiv" if expected else "nonequiv"
        lines.append(f"map {name}: {sset_files[id(f.source)]} -> "
                     f"{sset_files[id(f.target)]} via {map_file} expect {label}")
    manifest = directory / "corpus.manifest"
    manifest.write_text("\n".join(lines) + "\n")
    return manifest
