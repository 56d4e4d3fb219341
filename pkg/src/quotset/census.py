"""Exhaustive, symmetry-reduced verification sweeps over a whole group.

Quotient sets are invariant under left translation of the scanned set, so
the sweeps enumerate one representative per translation orbit: a subset
containing the identity is canonical when it is minimal, as a bitmask,
among its translates that contain the identity.  Orbit sizes are recovered
from translation stabilizers, so the reports still account for every subset
of the group.

``classification_census`` re-derives the coset structure of every canonical
set with a small quotient set and, for the remaining sets, confirms that
neither coset picture's hypotheses hold for any subgroup; each finding is
reported as a violation rather than asserted, so a sweep can surface a
counterexample instead of crashing.  ``structure_scan`` does the same for
the bounded-representative structure conjecture: every canonical set whose
quotient set is within the range for ``max_reps`` representatives must
admit a witness subgroup.

Multi-process sweeps partition the subsets by their membership pattern on
the lowest non-identity ids and merge the partial reports in a fixed order,
so the rendered output is identical for every job count.
"""

from __future__ import annotations

import multiprocessing
import time
from dataclasses import dataclass

from .classify import ClassKind, check_sufficiency, classify, verify_structure
from .groups import GroupTable, build_group
from .reports import CheckItem, CheckReport
from .setops import ElemSet, left_translate_mask, product_mask, quotient_mask
from .subgroups import Subgroup, all_subgroups, normalizer

__all__ = [
    "DEFAULT_CENSUS_CAP",
    "HARD_CENSUS_CAP",
    "canonical_form",
    "iter_canonical_sets",
    "CensusViolation",
    "SizeRow",
    "CensusReport",
    "classification_census",
    "StructureWitness",
    "find_structure_witness",
    "ScanReport",
    "structure_scan",
]

#: Sweeps refuse groups beyond this order unless explicitly overridden.
DEFAULT_CENSUS_CAP = 24

#: No override reaches past this; 2^32 subsets is already days of work.
HARD_CENSUS_CAP = 32


def canonical_form(G: GroupTable, A: ElemSet) -> ElemSet:
    """The least left translate of A containing the identity, as a bitmask."""
    if A.n != G.order:
        raise ValueError(f"set is over order {A.n}, group has order {G.order}")
    amask = A.bits
    if not amask:
        raise ValueError("the empty set has no canonical form")
    best = None
    bits = amask
    while bits:
        low = bits & -bits
        bits ^= low
        tm = left_translate_mask(G, G.inv[low.bit_length() - 1], amask)
        if best is None or tm < best:
            best = tm
    return ElemSet(G.order, best)


def _size_range(G: GroupTable, sizes) -> tuple[int, int]:
    if sizes is None:
        return 1, G.order
    lo, hi = sizes
    if not 1 <= lo <= hi <= G.order:
        raise ValueError(
            f"size range must satisfy 1 <= lo <= hi <= {G.order}, got {sizes!r}")
    return lo, hi


def iter_canonical_sets(G: GroupTable, sizes=None):
    """Yield the canonical representative of every translation orbit, ascending.

    Meant for tests and small explorations; the sweeps below use a fused
    enumeration instead of calling this.
    """
    lo, hi = _size_range(G, sizes)
    for m in range(1, 1 << G.order, 2):
        if lo <= m.bit_count() <= hi:
            A = ElemSet(G.order, m)
            if canonical_form(G, A).bits == m:
                yield A


def _check_sweep_cap(G: GroupTable, cap: int | None, allow_big: bool) -> None:
    if cap is None:
        cap = DEFAULT_CENSUS_CAP
    if G.order > HARD_CENSUS_CAP:
        raise ValueError(
            f"order {G.order} exceeds the hard sweep cap {HARD_CENSUS_CAP}")
    if G.order > cap and not allow_big:
        raise ValueError(
            f"order {G.order} exceeds the sweep cap {cap}; "
            "pass allow_big=True to proceed anyway")


def _partition_plan(G: GroupTable, jobs: int) -> int:
    if jobs < 1:
        raise ValueError(f"jobs must be at least 1, got {jobs}")
    return min((jobs - 1).bit_length(), G.order - 1)


def _parallel_map(func, tasks, jobs):
    if jobs <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    try:
        ctx = multiprocessing.get_context("fork")
    except ValueError:
        ctx = multiprocessing.get_context("spawn")
    with ctx.Pool(processes=min(jobs, len(tasks))) as pool:
        return pool.map(func, tasks)


# ---------------------------------------------------------------------------
# classification census


@dataclass(frozen=True, slots=True)
class CensusViolation:
    """A canonical set on which a re-derived law failed, with the stage named."""

    subset: ElemSet
    kind: str      # "necessity", "structure", or "sufficiency"
    detail: str


@dataclass(frozen=True, slots=True)
class SizeRow:
    """Extremal summary for one set size: the smallest quotient set seen."""

    size: int
    min_quotient: int
    extremal: ElemSet
    subsets: int   # all subsets of this size, counted through orbit sizes

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "min_quotient": self.min_quotient,
            "extremal": list(self.extremal),
            "subsets": self.subsets,
        }


@dataclass(frozen=True, slots=True)
class CensusReport:
    group_spec: str
    order: int
    size_lo: int
    size_hi: int
    subsets_scanned: int
    canonical_classes: int
    violations: tuple[CensusViolation, ...]
    by_size: tuple[SizeRow, ...]
    runtime_seconds: float

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "group": self.group_spec,
            "order": self.order,
            "sizes": {"lo": self.size_lo, "hi": self.size_hi},
            "subsets_scanned": self.subsets_scanned,
            "canonical_classes": self.canonical_classes,
            "violations": [
                {"subset": list(v.subset), "kind": v.kind, "detail": v.detail}
                for v in self.violations
            ],
            "by_size": [row.to_dict() for row in self.by_size],
        }


def _census_partition(G: GroupTable, subgroups, lo, hi, fixed_width, pattern):
    """Sweep the subsets whose low non-identity bits equal ``pattern``."""
    order = G.order
    tabs = G.action_tables()
    inv_left, width, cmask = tabs.inv_left, tabs.width, tabs.chunk_mask
    left = tabs.left

    def apply(tables, mask):
        acc = 0
        for table in tables:
            acc |= table[mask & cmask]
            mask >>= width
        return acc

    # Subgroups that could realize either coset picture for a given set
    # size; for most sizes both lists are empty or nearly so.
    cand_single = {k: [H for H in subgroups
                       if k <= H.order and 5 * k > 3 * H.order]
                   for k in range(lo, hi + 1)}
    cand_double = {k: [H for H in subgroups
                       if k <= 2 * H.order and 5 * k > 9 * H.order]
                   for k in range(lo, hi + 1)}

    scanned = 0
    classes = 0
    violations = []
    best: dict[int, list] = {}

    base = 1 | pattern << 1
    shift = 1 + fixed_width
    for t in range(1 << (order - shift)):
        m = base | t << shift
        k = m.bit_count()
        if k < lo or k > hi:
            continue
        scanned += 1

        # Canonical check fused with the quotient computation: every left
        # translate inv(a)*A for a in A both feeds the minimality test and
        # contributes its elements to the quotient set.
        bits = m & (m - 1)
        stab = 1
        qmask = m
        canonical = True
        while bits:
            low = bits & -bits
            bits ^= low
            acc = 0
            mm = m
            for table in inv_left[low.bit_length() - 1]:
                acc |= table[mm & cmask]
                mm >>= width
            if acc < m:
                canonical = False
                break
            if acc == m:
                stab += 1
            else:
                qmask |= acc
        if not canonical:
            continue
        classes += 1
        qk = qmask.bit_count()

        orbit = order // stab
        row = best.get(k)
        if row is None:
            best[k] = [qk, m, orbit]
        else:
            if (qk, m) < (row[0], row[1]):
                row[0], row[1] = qk, m
            row[2] += orbit

        if 3 * qk < 5 * k:
            A = ElemSet(order, m)
            result = classify(G, A, subgroups)
            if result.kind is ClassKind.VIOLATION:
                violations.append((m, "necessity",
                                   f"3|Q| = {3 * qk} is below 5|A| = {5 * k} "
                                   "but neither coset picture applies"))
                continue
            bad = verify_structure(G, A, result).failures()
            if bad:
                violations.append((m, "structure",
                                   "; ".join(item.name for item in bad)))
            if result.kind is ClassKind.TWO_COSETS:
                bad = check_sufficiency(G, result.subgroup, result.rep_a,
                                        result.rep_b, A).failures()
                if bad:
                    violations.append((m, "sufficiency",
                                       "; ".join(item.name for item in bad)))
        else:
            # The set is not small, so no subgroup may satisfy either
            # picture's hypotheses.  The identity is in A, so the reference
            # coset is H itself and the second representative is d itself.
            hit = None
            for H in cand_single[k]:
                if m & ~H.bits == 0:
                    hit = ("one-coset", H.order)
                    break
            if hit is None:
                for H in cand_double[k]:
                    hbits = H.bits
                    rest = m & ~hbits
                    if not rest:
                        continue
                    d = (rest & -rest).bit_length() - 1
                    if rest & ~apply(left[d], hbits):
                        continue
                    window = (product_mask(G, hbits, apply(left[d], hbits))
                              | product_mask(G, hbits,
                                             apply(left[G.inv[d]], hbits)))
                    if window.bit_count() != 2 * H.order:
                        continue
                    hit = ("two-coset", H.order)
                    break
            if hit is not None:
                violations.append((m, "sufficiency",
                                   f"{hit[0]} hypotheses hold for a subgroup "
                                   f"of order {hit[1]} but 3|Q| = {3 * qk} "
                                   f"is not below 5|A| = {5 * k}"))

    return {"scanned": scanned, "classes": classes,
            "violations": violations, "best": best}


def _census_task(args):
    spec, lo, hi, fixed_width, pattern = args
    G = build_group(spec)
    return _census_partition(G, all_subgroups(G), lo, hi, fixed_width, pattern)


def classification_census(G: GroupTable, sizes=None, jobs: int = 1,
                          cap: int | None = None,
                          allow_big: bool = False) -> CensusReport:
    """Sweep every subset in the size range and re-derive the classification.

    Returns a report whose ``violations`` field is empty exactly when every
    small-quotient set fit one of the two coset pictures, every claimed
    decomposition checked out, and no not-small set satisfied either
    picture's hypotheses.
    """
    start = time.perf_counter()
    _check_sweep_cap(G, cap, allow_big)
    lo, hi = _size_range(G, sizes)
    b = _partition_plan(G, jobs)
    if 1 << b == 1:
        partials = [_census_partition(G, all_subgroups(G), lo, hi, 0, 0)]
    else:
        tasks = [(G.spec, lo, hi, b, p) for p in range(1 << b)]
        partials = _parallel_map(_census_task, tasks, jobs)

    best: dict[int, list] = {}
    for partial in partials:
        for k, row in partial["best"].items():
            cur = best.get(k)
            if cur is None:
                best[k] = list(row)
            else:
                if (row[0], row[1]) < (cur[0], cur[1]):
                    cur[0], cur[1] = row[0], row[1]
                cur[2] += row[2]
    violations = tuple(
        CensusViolation(ElemSet(G.order, m), kind, detail)
        for m, kind, detail in
        sorted(v for partial in partials for v in partial["violations"]))
    by_size = tuple(SizeRow(k, best[k][0], ElemSet(G.order, best[k][1]), best[k][2])
                    for k in sorted(best))
    return CensusReport(
        group_spec=G.spec,
        order=G.order,
        size_lo=lo,
        size_hi=hi,
        subsets_scanned=sum(p["scanned"] for p in partials),
        canonical_classes=sum(p["classes"] for p in partials),
        violations=violations,
        by_size=by_size,
        runtime_seconds=time.perf_counter() - start,
    )


# ---------------------------------------------------------------------------
# structure-witness scan


@dataclass(frozen=True, slots=True)
class StructureWitness:
    """A subgroup and representative set certifying the bounded-rep structure.

    ``reps`` holds the smallest element of the scanned set in each met left
    coset of ``subgroup``; all recorded checks passed, covering both the
    witness hypotheses and the derived description of the quotient set.
    """

    subgroup: Subgroup
    reps: ElemSet
    max_reps: int
    checks: CheckReport


def _coset_reps_bounded(G: GroupTable, amask: int, hbits: int, limit: int):
    """Smallest element of A in each met left coset of H, or None past the limit."""
    reps = []
    remaining = amask
    while remaining:
        if len(reps) == limit:
            return None
        x = (remaining & -remaining).bit_length() - 1
        reps.append(x)
        remaining &= ~left_translate_mask(G, x, hbits)
    return reps


def find_structure_witness(G: GroupTable, A: ElemSet, max_reps: int,
                           subgroups=None) -> StructureWitness | None:
    """Search for a subgroup witnessing the bounded-representative structure.

    A witness subgroup H admits at most ``max_reps`` met left cosets and
    satisfies the density bound (2n+1)|A| > (n+1)(2|A0|-1)|H| for
    n = max_reps and A0 the representatives.  The structural shape is the
    two-sided sandwich H A0^-1 A0 H collapsing to exactly (2|A0|-1)|H|
    elements, which comes in two sub-shapes recorded as one pass and one
    skip item: either every representative shares one left coset of the
    normalizer of H (the sandwich then equals A0^-1 A0 H), or the sandwich
    collapses through fused double cosets without any normalizing — the
    shape a two-coset set such as {e, r, s, rs} in dihedral 4 needs.  The
    returned witness additionally verified the implied description of the
    quotient set: Q = H A0^-1 A0 H with |Q| = (2|A0|-1)|H|, plus the size
    bracket tying |A0 H| to |A|.  Every recorded clause depends only on the
    met cosets, not on which representative is taken from each (swapping a
    rep multiplies the sandwich by subgroup factors that H absorbs), so the
    minimal representatives lose nothing.
    """
    if A.n != G.order:
        raise ValueError(f"set is over order {A.n}, group has order {G.order}")
    amask = A.bits
    if not amask:
        raise ValueError("cannot scan the empty set")
    n = max_reps
    if n < 1:
        raise ValueError(f"max_reps must be at least 1, got {n}")
    if subgroups is None:
        subgroups = all_subgroups(G)
    k = amask.bit_count()
    qmask = quotient_mask(G, amask)
    qk = qmask.bit_count()
    mul, inv = G.mul, G.inv

    for H in subgroups:
        h = H.order
        reps = _coset_reps_bounded(G, amask, H.bits, n)
        if reps is None:
            continue
        mc = len(reps)
        if (2 * n + 1) * k <= (n + 1) * (2 * mc - 1) * h:
            continue
        norm_bits = normalizer(G, H).bits
        x0inv = inv[reps[0]]
        sharing = all(norm_bits >> mul[x0inv][x] & 1 for x in reps[1:])

        rep_bits = 0
        for x in reps:
            rep_bits |= 1 << x
        rep_cosets = product_mask(G, rep_bits, H.bits)
        ch = rep_cosets.bit_count()
        sandwich = product_mask(
            G, H.bits, product_mask(G, quotient_mask(G, rep_bits), H.bits))
        target = (2 * mc - 1) * h
        if sharing:
            shape_items = (
                CheckItem("normalizer_shape", True,
                          "all representatives share one coset of the normalizer"),
                CheckItem("window_shape", None,
                          "skipped: the representatives share a normalizer coset"),
            )
        else:
            shape_items = (
                CheckItem("normalizer_shape", None,
                          "skipped: representatives span several normalizer cosets"),
                CheckItem("window_shape", sandwich.bit_count() == target,
                          f"|H A0^-1 A0 H| = {sandwich.bit_count()}, "
                          f"(2|A0|-1)|H| = {target}"),
            )
        items = (
            CheckItem("reps_within_limit", mc <= n, f"|A0| = {mc}, limit {n}"),
            *shape_items,
            CheckItem("set_within_rep_cosets", amask & ~rep_cosets == 0, ""),
            CheckItem("rep_cosets_disjoint", ch == mc * h,
                      f"|A0 H| = {ch}, |A0||H| = {mc * h}"),
            CheckItem("density_lower_bound", True,
                      f"(2n+1)|A| = {(2 * n + 1) * k}, "
                      f"(n+1)(2|A0|-1)|H| = {(n + 1) * (2 * mc - 1) * h}"),
            CheckItem("quotient_product_match", sandwich == qmask,
                      "" if sandwich == qmask else
                      "H A0^-1 A0 H differs from the quotient set"),
            CheckItem("quotient_size_match", qk == target,
                      f"|Q| = {qk}, (2|A0|-1)|H| = {target}"),
            CheckItem("density_bracket",
                      k <= ch and (2 * n + 1) * ch < (2 * n + 1) * k + n * h,
                      f"|A| = {k}, |A0 H| = {ch}, slack term n|H| = {n * h}"),
        )
        report = CheckReport("structure witness checks", items)
        if report.ok:
            return StructureWitness(H, ElemSet(G.order, rep_bits), n, report)
    return None


def _structure_hypotheses_exist(G: GroupTable, subgroups, amask: int, n: int) -> bool:
    """Whether any subgroup satisfies the witness hypotheses for this set.

    Hypotheses means the forward-direction inputs only: at most n met
    cosets, the density bound, and one of the two structural shapes
    (normalizer-sharing representatives, or the sandwich H A0^-1 A0 H
    collapsing to (2|A0|-1)|H| elements).
    """
    k = amask.bit_count()
    mul, inv = G.mul, G.inv
    for H in subgroups:
        reps = _coset_reps_bounded(G, amask, H.bits, n)
        if reps is None:
            continue
        mc = len(reps)
        if (2 * n + 1) * k <= (n + 1) * (2 * mc - 1) * H.order:
            continue
        norm_bits = normalizer(G, H).bits
        x0inv = inv[reps[0]]
        if all(norm_bits >> mul[x0inv][x] & 1 for x in reps[1:]):
            return True
        rep_bits = 0
        for x in reps:
            rep_bits |= 1 << x
        sandwich = product_mask(
            G, H.bits, product_mask(G, quotient_mask(G, rep_bits), H.bits))
        if sandwich.bit_count() == (2 * mc - 1) * H.order:
            return True
    return False


@dataclass(frozen=True, slots=True)
class ScanReport:
    group_spec: str
    order: int
    max_reps: int
    subsets_scanned: int
    canonical_classes: int
    in_range: int
    witnesses_found: int
    counterexamples: tuple[ElemSet, ...]
    sufficiency_checked: int
    sufficiency_failures: tuple[ElemSet, ...]
    runtime_seconds: float

    @property
    def fatal(self) -> bool:
        """Counterexamples at max_reps <= 2 contradict settled structure results."""
        return bool(self.counterexamples) and self.max_reps <= 2

    def to_dict(self) -> dict:
        return {
            "group": self.group_spec,
            "order": self.order,
            "max_reps": self.max_reps,
            "subsets_scanned": self.subsets_scanned,
            "canonical_classes": self.canonical_classes,
            "in_range": self.in_range,
            "witnesses_found": self.witnesses_found,
            "counterexamples": [list(c) for c in self.counterexamples],
            "sufficiency_checked": self.sufficiency_checked,
            "sufficiency_failures": [list(c) for c in self.sufficiency_failures],
        }


def _scan_partition(G: GroupTable, subgroups, max_reps, fixed_width, pattern):
    order = G.order
    tabs = G.action_tables()
    inv_left, width, cmask = tabs.inv_left, tabs.width, tabs.chunk_mask
    n = max_reps

    scanned = 0
    classes = 0
    in_range_count = 0
    witnesses = 0
    checked = 0
    counterexamples = []
    suff_failures = []

    base = 1 | pattern << 1
    shift = 1 + fixed_width
    for t in range(1 << (order - shift)):
        m = base | t << shift
        scanned += 1
        bits = m & (m - 1)
        qmask = m
        canonical = True
        while bits:
            low = bits & -bits
            bits ^= low
            acc = 0
            mm = m
            for table in inv_left[low.bit_length() - 1]:
                acc |= table[mm & cmask]
                mm >>= width
            if acc < m:
                canonical = False
                break
            qmask |= acc
        if not canonical:
            continue
        classes += 1
        k = m.bit_count()
        qk = qmask.bit_count()

        in_range = (n + 1) * qk < (2 * n + 1) * k
        if in_range:
            in_range_count += 1
            witness = find_structure_witness(G, ElemSet(order, m), n, subgroups)
            if witness is not None:
                witnesses += 1
            else:
                counterexamples.append(m)
        if 2 * k > qk and _structure_hypotheses_exist(G, subgroups, m, n):
            checked += 1
            if not in_range:
                suff_failures.append(m)

    return {"scanned": scanned, "classes": classes, "in_range": in_range_count,
            "witnesses": witnesses, "counterexamples": counterexamples,
            "checked": checked, "suff_failures": suff_failures}


def _scan_task(args):
    spec, max_reps, fixed_width, pattern = args
    G = build_group(spec)
    return _scan_partition(G, all_subgroups(G), max_reps, fixed_width, pattern)


def structure_scan(G: GroupTable, max_reps: int, jobs: int = 1,
                   cap: int | None = None, allow_big: bool = False) -> ScanReport:
    """Sweep every subset of the group for bounded-representative structure.

    Each canonical set whose quotient set is in range — meaning
    (n+1)|Q| < (2n+1)|A| for n = max_reps — must admit a witness subgroup;
    sets admitting none are reported as counterexamples.  Independently,
    every set with |Q| < 2|A| that satisfies the witness hypotheses is
    cross-checked to actually be in range, so the hypotheses' sufficiency
    is exercised on the same sweep.
    """
    start = time.perf_counter()
    _check_sweep_cap(G, cap, allow_big)
    if max_reps < 1:
        raise ValueError(f"max_reps must be at least 1, got {max_reps}")
    b = _partition_plan(G, jobs)
    if 1 << b == 1:
        partials = [_scan_partition(G, all_subgroups(G), max_reps, 0, 0)]
    else:
        tasks = [(G.spec, max_reps, b, p) for p in range(1 << b)]
        partials = _parallel_map(_scan_task, tasks, jobs)

    return ScanReport(
        group_spec=G.spec,
        order=G.order,
        max_reps=max_reps,
        subsets_scanned=sum(p["scanned"] for p in partials),
        canonical_classes=sum(p["classes"] for p in partials),
        in_range=sum(p["in_range"] for p in partials),
        witnesses_found=sum(p["witnesses"] for p in partials),
        counterexamples=tuple(
            ElemSet(G.order, m) for m in
            sorted(m for p in partials for m in p["counterexamples"])),
        sufficiency_checked=sum(p["checked"] for p in partials),
        sufficiency_failures=tuple(
            ElemSet(G.order, m) for m in
            sorted(m for p in partials for m in p["suff_failures"])),
        runtime_seconds=time.perf_counter() - start,
    )
