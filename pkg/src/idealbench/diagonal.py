"""Stage-by-stage diagonalization engines with exact bound checking.

Each engine consumes declared critical-node models (label rules standing in
for the successor labels of a critical node), extends its accumulators one
stage at a time, and verifies every stage bound in exact rational
arithmetic:

* interval engine (pwfin): forbidden-label weight at most 2^-k against the
  source weights, extracted-block weight at least 1/3 against the target
  weights, case 2b and 2c selection rules, freshness bookkeeping;
* difference engine (posdiff): residue-class filtering with harmonic mass
  at least 1 per stage, strong sparseness of the forbidden labels;
* sums engine (hindman): anchor thresholds per canonical case, harmonic
  smallness below 2^-k, block structure of the obstruction family;
* pairs engine (ramsey): same scheme over coded unordered pairs.

Stage numbering follows the diagonal pairing, so a model's per-visit
counter b never exceeds the stage number k; the smallness estimates lean
on exactly that inequality.  Constant-form scenarios cannot supply a
diagonalization stage at all; the engines turn them into structured
contradiction reports instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .construction import PartitionData, interval_weight
from .errors import HorizonExhausted, ScenarioContradiction, StructuralError
from .pairing import code_unordered, decode_unordered, pair_diag, unpair_diag
from .ramsey import HINDMAN, RAMSEY, block_disjoint, delta, fs, matching_cases, support
from .serialize import rat_str
from .sets import DescribedSet
from .ideals import diff_multiplicity

BOT_TOKEN = "__bot__"


def harmonic(members) -> Fraction:
    total = Fraction(0)
    for x in members:
        total += Fraction(1, x + 1)
    return total


# -- label rules -------------------------------------------------------------

@dataclass(frozen=True)
class LabelRule:
    """Successor-label assignment of a modelled critical node.

    ``label`` maps a successor to its value or None (bottom).  Rules whose
    alphabet is provably finite are flagged; the difference engine must
    refuse them with the harmonic-partition contradiction.
    """

    kind: str
    params: dict = field(default_factory=dict)

    def label(self, x: int) -> Optional[int]:
        k = self.kind
        if k == "identity":
            return x
        if k == "constant":
            return self.params["value"]
        if k == "all-bot":
            return None
        if k == "table":
            return self.params["entries"].get(x)
        if k == "prev-interval-max":
            p: PartitionData = self.params["partition"]
            n = p.interval_of(x)
            return None if n == 0 else p.end(n - 1) - 1
        if k == "block-geometric":
            return self._block_label(x)
        if k == "min-support":
            return None if x < 1 else min(support(x))
        if k == "max-support":
            return None if x < 1 else max(support(x))
        if k == "support-pair-code":
            if x < 1:
                return None
            sup = support(x)
            return pair_diag(min(sup).bit_length() - 1, max(sup).bit_length() - 1)
        if k in ("pair-min", "pair-max", "pair-code", "pair-constant"):
            lo, hi = decode_unordered(x)
            return self.pair_label(lo, hi)
        raise StructuralError(f"unknown label rule {self.kind!r}")

    def pair_label(self, s: int, t: int) -> Optional[int]:
        lo, hi = (s, t) if s < t else (t, s)
        k = self.kind
        if k == "pair-min":
            return lo
        if k == "pair-max":
            return hi
        if k == "pair-code":
            return code_unordered(lo, hi)
        if k == "pair-constant":
            return self.params["value"]
        if k == "table":
            return self.params["entries"].get(code_unordered(lo, hi))
        if k == "constant":
            return self.params["value"]
        raise StructuralError(f"rule {self.kind!r} has no pair form")

    def finite_alphabet(self) -> bool:
        return self.kind in ("constant", "all-bot", "table", "pair-constant")

    def _block_label(self, x: int) -> Optional[int]:
        start = self.params["start"]
        if x < start:
            return None
        bounds = self._block_bounds(x)
        j = 0
        while bounds[j + 1] <= x:
            j += 1
        return self.params["base_label"] * self.params["ratio"] ** j

    def _block_bounds(self, upto: int) -> List[int]:
        # boundaries so that each block's harmonic mass first reaches 1
        cache = self.params.setdefault("_bounds", [self.params["start"]])
        while cache[-1] <= upto:
            acc = Fraction(0)
            x = cache[-1]
            while acc < 1:
                acc += Fraction(1, x + 1)
                x += 1
            cache.append(x)
        return cache

    def to_json(self) -> dict:
        params = {k: v for k, v in self.params.items()
                  if not k.startswith("_") and k != "partition"}
        if self.kind == "table":
            params = {"entries": sorted(self.params["entries"].items())}
        return {"kind": self.kind, **params}


@dataclass(frozen=True)
class CriticalNodeModel:
    """Declared critical node: an index, a label source, and case data."""

    index: int
    rule: LabelRule
    case: Optional[str] = None     # pwfin: "2a" | "2b" | "2c"
    form: Optional[int] = None     # hindman 1..5 / ramsey 1..4
    ground: Optional[dict] = None  # hindman ground sequence / ramsey vertices

    def to_json(self) -> dict:
        out = {"index": self.index, "labels": self.rule.to_json()}
        if self.case is not None:
            out["case"] = self.case
        if self.form is not None:
            out["form"] = self.form
        if self.ground is not None:
            out["ground"] = self.ground
        return out


def model_for_stage(models: Sequence[CriticalNodeModel], k: int) -> Tuple[int, CriticalNodeModel]:
    """Critical node handled at stage k, visiting every model infinitely often."""
    i_raw, _ = unpair_diag(k)
    i = i_raw % len(models)
    return i, models[i]


# -- interval engine (embedding argument) ------------------------------------

@dataclass(frozen=True)
class IntervalClassProfile:
    """Homogeneous data extracted from one interval of successors."""

    n: int
    colour: int
    f_count: int
    g_count: int
    label_kind: str                 # "none" | "single" | "interval" | "explicit"
    label_value: Optional[int] = None
    label_members: Tuple[int, ...] = ()

    def labels_json(self):
        if self.label_kind == "single":
            return {"kind": "single", "value": str(self.label_value)}
        if self.label_kind == "interval":
            return {"kind": "interval", "n": self.n}
        if self.label_kind == "explicit":
            return {"kind": "explicit", "members": [str(m) for m in self.label_members]}
        return {"kind": "none"}


def coarse_colour(model: CriticalNodeModel, p: PartitionData, n: int, x: int) -> int:
    """0 for bottom, 1 for a label below I_n, 2 for a label in or past I_n."""
    if not (p.starts[n] <= x < p.end(n)):
        raise ValueError(f"{x} is not in interval {n}")
    label = model.rule.label(x)
    if label is None:
        return 0
    return 1 if label < p.starts[n] else 2


_ENUM_CAP = 1 << 16


def extract_profile(model: CriticalNodeModel, p: PartitionData, n: int) -> IntervalClassProfile:
    """Largest monochromatic class of I_n with its label data.

    Closed-form rules avoid enumerating the interval, which matters once
    interval sizes leave the enumerable range.  Ties go to the least
    colour; within colour 1 the largest label class wins, least label on
    ties.
    """
    kind = model.rule.kind
    length = p.lengths[n]
    if kind == "identity":
        return IntervalClassProfile(n, 2, length, length, "interval")
    if kind == "all-bot":
        return IntervalClassProfile(n, 0, length, length, "none")
    if kind == "prev-interval-max":
        if n == 0:
            return IntervalClassProfile(n, 0, length, length, "none")
        c = p.end(n - 1) - 1
        return IntervalClassProfile(n, 1, length, length, "single", c)
    if kind == "constant":
        c = model.rule.params["value"]
        colour = 1 if c < p.starts[n] else 2
        return IntervalClassProfile(n, colour, length, length, "single", c)

    if length > _ENUM_CAP:
        raise HorizonExhausted(f"interval {n} too large for a table model")
    by_colour: Dict[int, List[int]] = {0: [], 1: [], 2: []}
    for x in p.interval_members(n):
        by_colour[coarse_colour(model, p, n, x)].append(x)
    colour = max((0, 1, 2), key=lambda t: (len(by_colour[t]), -t))
    block = by_colour[colour]
    if colour == 0:
        return IntervalClassProfile(n, 0, len(block), len(block), "none")
    labels = sorted({model.rule.label(x) for x in block})
    if colour == 2:
        return IntervalClassProfile(
            n, 2, len(block), len(block), "explicit", None, tuple(labels)
        )
    by_label: Dict[int, int] = {}
    for x in block:
        lab = model.rule.label(x)
        by_label[lab] = by_label.get(lab, 0) + 1
    best = max(sorted(by_label), key=lambda lab: by_label[lab])
    return IntervalClassProfile(
        n, 1, len(block), by_label[best], "single", best
    )


def profile_label_weight(
    prof: IntervalClassProfile, selector: DescribedSet, p: PartitionData
) -> Fraction:
    """Exact selector-weight of the profile's label set."""
    if prof.label_kind == "single":
        c = prof.label_value
        j = p.interval_of(c)
        value = p.rationals[j + 1] if selector.contains(j) else p.rationals[j]
        return value
    if prof.label_kind == "interval":
        return interval_weight(selector, p, prof.n)
    if prof.label_kind == "explicit":
        total = Fraction(0)
        for c in prof.label_members:
            j = p.interval_of(c)
            total += p.rationals[j + 1] if selector.contains(j) else p.rationals[j]
        return total
    raise StructuralError("bottom class has no label weight")


@dataclass
class PwfinStageRecord:
    k: int
    i: int
    n: int
    case: str
    c_labels: dict
    c_weight_p: Fraction
    c_bound: Fraction
    d_count: int
    d_weight_q: Fraction

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "i": self.i,
            "n": self.n,
            "case": self.case,
            "forbidden_labels": self.c_labels,
            "wP_of_C": rat_str(self.c_weight_p),
            "wP_bound": rat_str(self.c_bound),
            "D_count": str(self.d_count),
            "wQ_of_D": rat_str(self.d_weight_q),
        }


@dataclass
class PwfinState:
    partition: PartitionData
    p_set: DescribedSet
    q_set: DescribedSet
    models: Tuple[CriticalNodeModel, ...]
    used_pairs: set = field(default_factory=set)
    used_intervals: Dict[int, set] = field(default_factory=dict)
    stages: List[PwfinStageRecord] = field(default_factory=list)

    def difference_indices(self) -> List[int]:
        return [
            n
            for n in range(1, self.partition.depth)
            if self.p_set.contains(n) and not self.q_set.contains(n)
        ]


def pwfin_stage(state: PwfinState, k: int) -> PwfinStageRecord:
    """One stage of the interval engine; every bound re-checked exactly."""
    p = state.partition
    i, model = model_for_stage(state.models, k)
    if model.case not in ("2a", "2b", "2c"):
        raise StructuralError("interval engine models declare case 2a, 2b or 2c")

    candidates = state.difference_indices()

    if model.case == "2a":
        _pwfin_refute_2a(state, model, candidates)

    chosen = None
    for n in candidates:
        if pair_diag(i, n) in state.used_pairs:
            continue
        prof = extract_profile(model, p, n)
        if model.case == "2b":
            if prof.colour != 1:
                continue
            # freshness of the label: outside I_<k, read as at least min I_k
            if k < p.depth and prof.label_value < p.starts[k]:
                continue
            if k >= p.depth:
                raise HorizonExhausted("stage index beyond partition depth")
        else:
            if prof.colour != 2 or n <= k:
                continue
        chosen = (n, prof)
        break
    if chosen is None:
        raise HorizonExhausted(
            f"stage {k}: no fresh difference index fits case {model.case}"
        )
    n, prof = chosen

    c_weight = profile_label_weight(prof, state.p_set, p)
    bound = Fraction(1, 1 << k)
    if model.case == "2b" and c_weight > p.rationals[k]:
        raise ScenarioContradiction(
            {
                "summary": f"stage {k}: single-label weight {rat_str(c_weight)} "
                f"exceeds the depth-{k} rational {rat_str(p.rationals[k])}",
            }
        )
    if c_weight > bound:
        raise ScenarioContradiction(
            {
                "summary": f"stage {k}: forbidden-label weight {rat_str(c_weight)} "
                f"exceeds {rat_str(bound)}",
            }
        )
    d_count = prof.g_count if model.case == "2b" else prof.f_count
    # members of the extracted block all sit in I_n, off the target selector
    q_value = (
        p.rationals[n + 1] if state.q_set.contains(n) else p.rationals[n]
    )
    d_weight = q_value * d_count
    if d_weight < Fraction(1, 3):
        raise ScenarioContradiction(
            {"summary": f"stage {k}: block weight {rat_str(d_weight)} below 1/3"}
        )
    if model.case == "2b" and prof.g_count * p.prefix_size(n) < prof.f_count:
        raise ScenarioContradiction(
            {"summary": f"stage {k}: pigeonhole bound violated at interval {n}"}
        )

    state.used_pairs.add(pair_diag(i, n))
    state.used_intervals.setdefault(i, set()).add(n)
    record = PwfinStageRecord(
        k, i, n, model.case, prof.labels_json(), c_weight, bound, d_count, d_weight
    )
    state.stages.append(record)
    return record


def _pwfin_refute_2a(state: PwfinState, model: CriticalNodeModel, candidates):
    """A declared-null bottom class accumulating weight is a contradiction."""
    p = state.partition
    total = Fraction(0)
    rows = []
    for n in candidates:
        prof = extract_profile(model, p, n)
        if prof.colour != 0:
            continue
        q_value = p.rationals[n + 1] if state.q_set.contains(n) else p.rationals[n]
        total += q_value * prof.f_count
        rows.append({"n": n, "wQ": rat_str(q_value * prof.f_count)})
        if total >= 1:
            break
    raise ScenarioContradiction(
        {
            "summary": "case 2a: bottom-coloured blocks accumulate target weight "
            f"{rat_str(total)} although the bottom class is declared null",
            "blocks": rows,
            "assumption": "the modelled node is critical, so its bottom class is null",
        }
    )


def run_pwfin(
    partition: PartitionData,
    p_set: DescribedSet,
    q_set: DescribedSet,
    models: Sequence[CriticalNodeModel],
    stages: int,
) -> PwfinState:
    state = PwfinState(partition, p_set, q_set, tuple(models))
    for k in range(stages):
        pwfin_stage(state, k)
    return state


# -- difference engine --------------------------------------------------------

@dataclass
class PosdiffStageRecord:
    k: int
    i: int
    n_bound: int
    m_bound: int
    residue: int
    d_members: Tuple[int, ...]
    c_labels: Tuple[int, ...]
    d_harmonic: Fraction

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "i": self.i,
            "max_prev_label": self.n_bound,
            "difference_bound": self.m_bound,
            "residue": self.residue,
            "D": [str(x) for x in self.d_members],
            "C": [str(c) for c in self.c_labels],
            "harmonic_of_D": rat_str(self.d_harmonic),
        }


@dataclass
class PosdiffState:
    models: Tuple[CriticalNodeModel, ...]
    horizon: int
    stages: List[PosdiffStageRecord] = field(default_factory=list)

    def labels_before(self, k: int) -> List[int]:
        out: set = set()
        for rec in self.stages:
            if rec.k < k:
                out.update(rec.c_labels)
        return sorted(out)


def posdiff_stage(state: PosdiffState, k: int) -> PosdiffStageRecord:
    """One stage of the difference engine.

    Filters successors to fresh, large labels, splits them into residue
    classes modulo the difference bound, takes the class with the largest
    exact harmonic mass at the horizon, and carves off a prefix of mass at
    least 1.  Strong sparseness is re-verified against the accumulated
    difference set, never assumed.
    """
    i, model = model_for_stage(state.models, k)
    if model.rule.finite_alphabet():
        _posdiff_refute_finite(state, model)

    prev = state.labels_before(k)
    diffs = delta(prev)
    n_bound = max(prev) if prev else 0
    m_bound = (max(diffs) if diffs else 0) + 1

    eligible: List[Tuple[int, int]] = []
    for x in range(state.horizon):
        lab = model.rule.label(x)
        if lab is not None and lab > n_bound + m_bound:
            eligible.append((x, lab))
    if not eligible:
        raise HorizonExhausted(f"stage {k}: no eligible successors below horizon")

    class_mass: Dict[int, Fraction] = {}
    for x, lab in eligible:
        r = lab % m_bound
        class_mass[r] = class_mass.get(r, Fraction(0)) + Fraction(1, x + 1)
    best = max(sorted(class_mass), key=lambda r: class_mass[r])

    members: List[int] = []
    labels: set = set()
    acc = Fraction(0)
    for x, lab in eligible:
        if lab % m_bound != best:
            continue
        members.append(x)
        labels.add(lab)
        acc += Fraction(1, x + 1)
        if acc >= 1:
            break
    if acc < 1:
        raise HorizonExhausted(
            f"stage {k}: residue class {best} reaches only {rat_str(acc)} at the horizon"
        )

    c_now = sorted(labels)
    pool = set(prev) | labels
    for x in c_now:
        for y in pool:
            if x != y and abs(x - y) in diffs:
                raise ScenarioContradiction(
                    {
                        "summary": f"stage {k}: labels {x} and {y} repeat the "
                        f"difference {abs(x - y)}",
                    }
                )

    record = PosdiffStageRecord(
        k, i, n_bound, m_bound, best, tuple(members), tuple(c_now), acc
    )
    state.stages.append(record)
    return record


def _posdiff_refute_finite(state: PosdiffState, model: CriticalNodeModel):
    """Finite label alphabets contradict a divergent successor sum."""
    classes: Dict[Optional[int], Fraction] = {}
    for x in range(state.horizon):
        lab = model.rule.label(x)
        classes[lab] = classes.get(lab, Fraction(0)) + Fraction(1, x + 1)
    raise ScenarioContradiction(
        {
            "summary": "finite label alphabet: finitely many label classes, each "
            "null for the critical node, cannot cover the divergent harmonic sum",
            "classes": {str(k): rat_str(v) for k, v in sorted(classes.items(), key=str)},
            "assumption": "the modelled node is critical and its successor set has "
            "divergent harmonic weight",
        }
    )


def run_posdiff(
    models: Sequence[CriticalNodeModel], horizon: int, stages: int
) -> PosdiffState:
    state = PosdiffState(tuple(models), horizon)
    for k in range(stages):
        posdiff_stage(state, k)
    return state


# -- ground sequences ---------------------------------------------------------

def ground_element(ground: dict, j: int) -> int:
    kind = ground.get("kind", "powers-of-two")
    if kind == "powers-of-two":
        return 1 << j
    if kind == "explicit":
        seq = ground["members"]
        if j >= len(seq):
            raise HorizonExhausted("ground sequence exhausted")
        return seq[j]
    raise StructuralError(f"unknown ground kind {kind!r}")


def vertex_element(ground: Optional[dict], j: int) -> int:
    if ground is None:
        return j
    kind = ground.get("kind", "all")
    if kind == "all":
        return j
    if kind == "ap":
        return ground["base"] + j * ground["step"]
    if kind == "explicit":
        seq = ground["members"]
        if j >= len(seq):
            raise HorizonExhausted("vertex sequence exhausted")
        return seq[j]
    raise StructuralError(f"unknown vertex kind {kind!r}")


# -- sums engine ---------------------------------------------------------------

@dataclass
class SumsStageRecord:
    k: int
    i: int
    b: int
    anchor_index: int
    anchor_value: int
    threshold: int

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "i": self.i,
            "b": self.b,
            "ground_index": self.anchor_index,
            "anchor": str(self.anchor_value),
            "threshold": str(self.threshold),
        }


@dataclass
class SumsState:
    models: Tuple[CriticalNodeModel, ...]
    scan_cap: int = 64
    anchors: Dict[int, List[Tuple[int, int]]] = field(default_factory=dict)  # i -> [(j, h)]
    stage_of: Dict[Tuple[int, int], int] = field(default_factory=dict)       # (i, b) -> k
    stages: List[SumsStageRecord] = field(default_factory=list)


def _probe_constant(model: CriticalNodeModel, probes: List[int], label_of) -> None:
    values = {label_of(x) for x in probes}
    if len(values) == 1:
        constant = next(iter(values))
        raise ScenarioContradiction(
            {
                "summary": "constant form: all probed values share the label "
                f"{constant!r}, so the full structured family sits inside one "
                "label class, against the criticality of the node",
                "probes": [str(x) for x in probes],
                "assumption": "the modelled node is critical, so each label class "
                "omits the structured family",
            }
        )


def hindman_stage(state: SumsState, k: int) -> SumsStageRecord:
    """Extend one model's anchor subsequence under its case threshold."""
    i, model = model_for_stage(state.models, k)
    if model.form not in (1, 2, 3, 4, 5):
        raise StructuralError("sums engine models declare form 1..5")
    ground = model.ground or {"kind": "powers-of-two"}
    label_of = model.rule.label

    if model.form == 1:
        probe_values = [ground_element(ground, j) for j in range(4)]
        probes = list(fs(probe_values))
        _probe_constant(model, probes, label_of)

    anchors = state.anchors.setdefault(i, [])
    b = len(anchors)
    last_idx = anchors[-1][0] if anchors else -1
    prev_values = [h for _, h in anchors]
    prev_sums = [0] + list(fs(prev_values)) if prev_values else [0]

    if model.form in (2, 3):
        threshold = 1 << k
    elif model.form == 4:
        threshold = (k + 1) * (1 << k)
    else:
        threshold = 1 << (2 * k)

    chosen = None
    for j in range(last_idx + 1, state.scan_cap):
        h = ground_element(ground, j)
        if model.form in (2, 3):
            lab = label_of(h)
            if lab is not None and lab > threshold:
                chosen = (j, h)
                break
        elif model.form == 4:
            packet = [h] + [h + hv for hv in prev_values]
            labs = [label_of(x) for x in packet]
            if all(l is not None and l > threshold for l in labs):
                chosen = (j, h)
                break
        else:  # form 5: the whole anchored block must clear the threshold
            if prev_values and h <= max(fs(prev_values)):
                continue
            block = [h + y for y in prev_sums]
            labs = [label_of(x) for x in block]
            if all(l is not None and l > threshold for l in labs):
                chosen = (j, h)
                break
    if chosen is None:
        raise HorizonExhausted(f"stage {k}: no anchor clears threshold {threshold}")

    anchors.append(chosen)
    state.stage_of[(i, b)] = k
    record = SumsStageRecord(k, i, b, chosen[0], chosen[1], threshold)
    state.stages.append(record)
    return record


def run_hindman(models: Sequence[CriticalNodeModel], stages: int, scan_cap: int = 64) -> SumsState:
    state = SumsState(tuple(models), scan_cap)
    for k in range(stages):
        hindman_stage(state, k)
    return state


# -- pairs engine ---------------------------------------------------------------

@dataclass
class PairsState:
    models: Tuple[CriticalNodeModel, ...]
    scan_cap: int = 4096
    anchors: Dict[int, List[int]] = field(default_factory=dict)
    stage_of: Dict[Tuple[int, int], int] = field(default_factory=dict)
    stages: List[SumsStageRecord] = field(default_factory=list)


def ramsey_stage(state: PairsState, k: int) -> SumsStageRecord:
    """Extend one model's vertex subsequence under its case threshold.

    Minimum-form stages need the common label of the new vertex with later
    vertices, probed on the next ground element; maximum-form and injective
    stages need every pair with an earlier anchor to clear the threshold,
    which is exactly what their stage smallness uses.
    """
    i, model = model_for_stage(state.models, k)
    if model.form not in (1, 2, 3, 4):
        raise StructuralError("pairs engine models declare form 1..4")
    label_of = model.rule.pair_label

    if model.form == 1:
        verts = [vertex_element(model.ground, j) for j in range(5)]
        values = {label_of(a, b) for a, b in combinations(verts, 2)}
        if len(values) == 1:
            raise ScenarioContradiction(
                {
                    "summary": "constant form: every probed pair shares the label "
                    f"{next(iter(values))!r}, putting a full clique inside one "
                    "label class, against the criticality of the node",
                    "assumption": "the modelled node is critical",
                }
            )

    anchors = state.anchors.setdefault(i, [])
    b = len(anchors)
    threshold = (1 << k) if model.form in (2, 3) else k * (1 << k)

    chosen = None
    for j in range(state.scan_cap):
        t = vertex_element(model.ground, j)
        if anchors and t <= anchors[-1]:
            continue
        if model.form == 2:
            probe = vertex_element(model.ground, j + 1)
            lab = label_of(t, probe)
            ok = lab is not None and lab > threshold
        else:
            labs = [label_of(s, t) for s in anchors]
            ok = all(l is not None and l > threshold for l in labs)
        if ok:
            chosen = t
            break
    if chosen is None:
        raise HorizonExhausted(f"stage {k}: no vertex clears threshold {threshold}")

    anchors.append(chosen)
    state.stage_of[(i, b)] = k
    record = SumsStageRecord(k, i, b, b, chosen, threshold)
    state.stages.append(record)
    return record


def run_ramsey(models: Sequence[CriticalNodeModel], stages: int, scan_cap: int = 4096) -> PairsState:
    state = PairsState(tuple(models), scan_cap)
    for k in range(stages):
        ramsey_stage(state, k)
    return state


# -- assembly -------------------------------------------------------------------

@dataclass
class AssembledRun:
    engine: str
    forbidden: list                      # explicit labels or symbolic descriptors
    forbidden_measure: Fraction          # exact small-ideal measure of the union
    closed_form_bound: Fraction          # sum over all stages of 2^-k
    families: Dict[int, dict]            # i -> obstruction family payload
    payload: dict                        # certificate body

    def family_members(self, i: int) -> List[int]:
        return [int(x) for x in self.families[i]["members"]]


def _anchored_sums(values: List[int], b: int, anchored: str) -> List[int]:
    """Sums over the anchor prefix with the stated extreme summand."""
    if anchored == "min":
        rest = values[b + 1:]
    else:
        rest = values[:b]
    out = []
    for mask in range(1 << len(rest)):
        total = values[b]
        for pos, v in enumerate(rest):
            if mask >> pos & 1:
                total += v
        out.append(total)
    return sorted(out)


def _label_map(xs: List[int], label_of) -> Dict[int, object]:
    return {x: (BOT_TOKEN if label_of(x) is None else label_of(x)) for x in xs}


def assemble_hindman(state: SumsState) -> AssembledRun:
    """Verify the sums engine invariants and package the run."""
    anchored = {2: "min", 3: "max", 4: "max", 5: "max"}
    forbidden: set = set()
    measure = Fraction(0)
    families: Dict[int, dict] = {}
    stage_rows: List[dict] = []
    for i, model in enumerate(state.models):
        if i not in state.anchors:
            continue
        values = [h for _, h in state.anchors[i]]
        if not block_disjoint(values):
            raise ScenarioContradiction(
                {"summary": f"model {i}: anchors are not block disjoint"}
            )
        label_of = model.rule.label
        side = anchored[model.form]
        blocks: List[List[int]] = []
        for b in range(len(values)):
            k = state.stage_of[(i, b)]
            block = _anchored_sums(values, b, side)
            labels = [label_of(x) for x in block]
            if any(l is None for l in labels):
                raise ScenarioContradiction(
                    {"summary": f"model {i} stage {k}: bottom label inside a block"}
                )
            c_block = sorted(set(labels))
            small = harmonic(c_block)
            bound = Fraction(1, 1 << k)
            if small >= bound:
                raise ScenarioContradiction(
                    {
                        "summary": f"model {i} stage {k}: label mass "
                        f"{rat_str(small)} not below {rat_str(bound)}"
                    }
                )
            if model.form in (2, 3) and len(c_block) != 1:
                raise ScenarioContradiction(
                    {"summary": f"model {i} stage {k}: extreme-support form "
                     "must give a single label per block"}
                )
            forbidden.update(c_block)
            measure += small
            blocks.append(block)
            stage_rows.append(
                {
                    "i": i,
                    "b": b,
                    "k": k,
                    "block_size": len(block),
                    "labels": [str(c) for c in c_block],
                    "label_mass": rat_str(small),
                    "bound": rat_str(bound),
                }
            )
        for x, y in combinations(range(len(blocks)), 2):
            if set(blocks[x]) & set(blocks[y]):
                raise ScenarioContradiction(
                    {"summary": f"model {i}: blocks {x} and {y} intersect"}
                )
        union = sorted(set().union(*blocks)) if blocks else []
        expected = list(fs(values)) if values else []
        if union != expected:
            raise ScenarioContradiction(
                {"summary": f"model {i}: block union differs from the finite sums"}
            )
        fmap = _label_map(expected, label_of)
        cases = matching_cases(fmap, expected, HINDMAN)
        if model.form not in cases:
            raise ScenarioContradiction(
                {
                    "summary": f"model {i}: declared form {model.form} does not "
                    f"hold on the anchored sums (holding: {cases})"
                }
            )
        families[i] = {
            "structure": "finite-sums",
            "anchors": [str(v) for v in values],
            "members": [str(x) for x in expected],
            "size": len(expected),
        }
    stages = len(state.stages)
    closed = Fraction(2) - Fraction(1, 1 << (stages - 1)) if stages else Fraction(0)
    payload = {
        "engine": "hindman",
        "stages": stage_rows,
        "forbidden_labels": [str(c) for c in sorted(forbidden)],
        "forbidden_mass": rat_str(measure),
        "per_stage_bound_sum": rat_str(closed),
        "tail_bound": rat_str(Fraction(1, 1 << (stages - 1))) if stages else "0/1",
        "families": {str(i): fam for i, fam in families.items()},
    }
    return AssembledRun("hindman", sorted(forbidden), measure, closed, families, payload)


def assemble_ramsey(state: PairsState) -> AssembledRun:
    """Verify the pairs engine invariants and package the run."""
    forbidden: set = set()
    measure = Fraction(0)
    families: Dict[int, dict] = {}
    stage_rows: List[dict] = []
    for i, model in enumerate(state.models):
        if i not in state.anchors:
            continue
        verts = state.anchors[i]
        label_of = model.rule.pair_label
        blocks: List[List[Tuple[int, int]]] = []
        for b in range(len(verts)):
            k = state.stage_of[(i, b)]
            if model.form == 2:
                pairs = [(verts[b], verts[r]) for r in range(b + 1, len(verts))]
            else:
                pairs = [(verts[r], verts[b]) for r in range(b)]
            labels = [label_of(s, t) for s, t in pairs]
            if any(l is None for l in labels):
                raise ScenarioContradiction(
                    {"summary": f"model {i} stage {k}: bottom label on a pair"}
                )
            c_block = sorted(set(labels))
            small = harmonic(c_block)
            bound = Fraction(1, 1 << k)
            if small >= bound:
                raise ScenarioContradiction(
                    {
                        "summary": f"model {i} stage {k}: label mass "
                        f"{rat_str(small)} not below {rat_str(bound)}"
                    }
                )
            if model.form in (2, 3) and pairs and len(c_block) != 1:
                raise ScenarioContradiction(
                    {"summary": f"model {i} stage {k}: extreme form must give "
                     "a single label per block"}
                )
            forbidden.update(c_block)
            measure += small
            blocks.append(pairs)
            stage_rows.append(
                {
                    "i": i,
                    "b": b,
                    "k": k,
                    "block_size": len(pairs),
                    "labels": [str(c) for c in c_block],
                    "label_mass": rat_str(small),
                    "bound": rat_str(bound),
                }
            )
        flat = [frozenset(p) for block in blocks for p in block]
        if len(flat) != len(set(flat)):
            raise ScenarioContradiction(
                {"summary": f"model {i}: pair blocks intersect"}
            )
        expected = {frozenset(p) for p in combinations(verts, 2)}
        if set(flat) != expected:
            raise ScenarioContradiction(
                {"summary": f"model {i}: pair union differs from the full pair set"}
            )
        domain = [frozenset(p) for p in combinations(verts, 2)]
        fmap = {
            x: (BOT_TOKEN if label_of(min(x), max(x)) is None else label_of(min(x), max(x)))
            for x in domain
        }
        cases = matching_cases(fmap, domain, RAMSEY)
        if model.form not in cases:
            raise ScenarioContradiction(
                {
                    "summary": f"model {i}: declared form {model.form} does not "
                    f"hold on the anchored pairs (holding: {cases})"
                }
            )
        codes = sorted(code_unordered(min(x), max(x)) for x in domain)
        families[i] = {
            "structure": "clique",
            "vertices": [str(v) for v in verts],
            "members": [str(c) for c in codes],
            "size": len(codes),
        }
    stages = len(state.stages)
    closed = Fraction(2) - Fraction(1, 1 << (stages - 1)) if stages else Fraction(0)
    payload = {
        "engine": "ramsey",
        "stages": stage_rows,
        "forbidden_labels": [str(c) for c in sorted(forbidden)],
        "forbidden_mass": rat_str(measure),
        "per_stage_bound_sum": rat_str(closed),
        "tail_bound": rat_str(Fraction(1, 1 << (stages - 1))) if stages else "0/1",
        "families": {str(i): fam for i, fam in families.items()},
    }
    return AssembledRun("ramsey", sorted(forbidden), measure, closed, families, payload)


def assemble_posdiff(state: PosdiffState) -> AssembledRun:
    """Verify the difference engine invariants and package the run."""
    forbidden: set = set()
    families: Dict[int, dict] = {}
    per_model_mass: Dict[int, Fraction] = {}
    per_model_members: Dict[int, List[int]] = {}
    stage_rows = [rec.to_json() for rec in state.stages]
    for rec in state.stages:
        forbidden.update(rec.c_labels)
        per_model_mass[rec.i] = per_model_mass.get(rec.i, Fraction(0)) + rec.d_harmonic
        per_model_members.setdefault(rec.i, []).extend(rec.d_members)
    members = sorted(forbidden)
    table = diff_multiplicity(members)
    measure = harmonic(members)
    for i, mass in per_model_mass.items():
        families[i] = {
            "structure": "divergent-harmonic",
            "members": [str(x) for x in sorted(per_model_members[i])],
            "harmonic_mass": rat_str(mass),
            "stages": sum(1 for rec in state.stages if rec.i == i),
        }
    payload = {
        "engine": "posdiff",
        "stages": stage_rows,
        "forbidden_labels": [str(c) for c in members],
        "forbidden_mass": rat_str(measure),
        "difference_multiplicities": {str(d): c for d, c in sorted(table.items())},
        "families": {str(i): fam for i, fam in families.items()},
    }
    return AssembledRun("posdiff", members, measure, Fraction(0), families, payload)


def assemble_pwfin(state: PwfinState) -> AssembledRun:
    """Verify the interval engine invariants and package the run."""
    measure = Fraction(0)
    bound_sum = Fraction(0)
    families: Dict[int, dict] = {}
    per_model_weight: Dict[int, Fraction] = {}
    rows = []
    descriptors = []
    for rec in state.stages:
        measure += rec.c_weight_p
        bound_sum += rec.c_bound
        per_model_weight[rec.i] = per_model_weight.get(rec.i, Fraction(0)) + rec.d_weight_q
        rows.append(rec.to_json())
        descriptors.append(rec.c_labels)
    if measure > bound_sum:
        raise ScenarioContradiction(
            {"summary": "forbidden-label weight exceeds the stage bound sum"}
        )
    for i, intervals in state.used_intervals.items():
        families[i] = {
            "structure": "divergent-weight",
            "intervals": sorted(intervals),
            "target_weight": rat_str(per_model_weight[i]),
            "stages": len(intervals),
        }
    payload = {
        "engine": "pwfin",
        "stages": rows,
        "forbidden_labels": descriptors,
        "forbidden_weight": rat_str(measure),
        "closed_form_bound": "2/1",
        "families": {str(i): fam for i, fam in families.items()},
    }
    return AssembledRun("pwfin", descriptors, measure, Fraction(2), families, payload)


def assemble(state) -> AssembledRun:
    """Package a finished run, re-verifying every family invariant."""
    if isinstance(state, SumsState):
        return assemble_hindman(state)
    if isinstance(state, PairsState):
        return assemble_ramsey(state)
    if isinstance(state, PosdiffState):
        return assemble_posdiff(state)
    if isinstance(state, PwfinState):
        return assemble_pwfin(state)
    raise StructuralError(f"no assembly for {type(state).__name__}")


# -- collision checking -----------------------------------------------------------

@dataclass(frozen=True)
class CollisionReport:
    outcome: str                 # "collision" | "inconclusive" | "rejected"
    node: Tuple[int, ...] = ()
    successor: Optional[int] = None
    label: Optional[int] = None
    path: Optional[list] = None
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "node": list(self.node),
            "successor": None if self.successor is None else str(self.successor),
            "label": None if self.label is None else str(self.label),
            "path": None if self.path is None else [list(n) for n in self.path],
            "reason": self.reason,
        }


def collision_check(
    tree,
    branching_ideal,
    coherent_map,
    oracle,
    assembled: AssembledRun,
    model_index: int,
    model: CriticalNodeModel,
    horizon: int = 4096,
) -> CollisionReport:
    """Locate an obstruction-family member among a tree's root successors.

    The tree must claim branching inside the dual filter at every node; an
    explicit finite successor set fails that claim outright.  A member x of
    the family below the horizon yields the forbidden label and a realizing
    path; absence below the horizon is reported as inconclusive, never as a
    refutation.
    """
    from .trees import check_branching, compute_labels, path_value_search

    branching = check_branching(tree, branching_ideal, horizon)
    for node in sorted(branching):
        if branching[node].value != "in":
            return CollisionReport(
                "rejected",
                node=node,
                reason=f"successor set at {list(node)} is not in the dual filter "
                f"({branching[node].procedure})",
            )
    spec = tree.successor_spec(())
    described = spec.described if hasattr(spec, "described") else None
    if described is None:
        return CollisionReport("rejected", reason="explicit successor set")

    members = assembled.family_members(model_index)
    hit = next((x for x in members if x < horizon and described.contains(x)), None)
    if hit is None:
        return CollisionReport(
            "inconclusive",
            reason="no obstruction member meets the tree below the horizon",
        )
    if assembled.engine == "ramsey":
        lo, hi = decode_unordered(hit)
        label = model.rule.pair_label(lo, hi)
    else:
        label = model.rule.label(hit)
    labelled = compute_labels(tree, coherent_map, oracle)
    path = path_value_search(labelled, label)
    forbidden = {int(str(c)) for c in assembled.forbidden} if assembled.engine != "pwfin" else None
    if forbidden is not None and label not in forbidden:
        return CollisionReport(
            "rejected", successor=hit, label=label,
            reason="label of the located successor is not forbidden",
        )
    return CollisionReport(
        "collision",
        node=(),
        successor=hit,
        label=label,
        path=path,
        reason="forbidden label realized on a branching tree",
    )
