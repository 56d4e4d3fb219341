"""Structure classification for finite sets with a small quotient set.

The central dichotomy: a nonempty subset A of a finite group has a small
quotient set — meaning 3|Q| < 5|A| for Q the quotient set of A — exactly
when one of two coset pictures holds.

* single-coset: A sits inside one left coset aH of a subgroup H with
  5|A| > 3|H|, and then Q is exactly H.
* two-cosets: A sits inside a union aH | bH of two distinct left cosets
  of a subgroup H with 5|A| > 9|H|, and the off-subgroup window
  W = HdH | H inv(d) H for d = inv(a)*b has size exactly 2|H|.  Then
  Q is the disjoint union of H and W, so |Q| = 3|H|.  The window
  condition does not depend on which representatives a, b are picked,
  and it splits into two shapes: either d normalizes H and d*d stays
  outside H (W is the disjoint pair dH | inv(d)H), or d does not
  normalize H and HdH = H inv(d) H is one double coset of size 2|H|.

The fused shape is easy to miss: in the dihedral group of order 8 the set
{e, r, s, rs} has quotient set of size 6 < 5/3 * 4, is covered by the two
cosets H | rH of H = {e, s}, and no representative choice normalizes H —
yet HrH = H inv(r) H has size 2|H| and the classification holds.  Demanding
the normalizer shape alone would leave such sets unclassified.

``classify`` finds the picture, ``verify_structure`` recomputes its claimed
quotient decomposition from scratch, ``check_sufficiency`` drives the
converse direction from coset data alone, ``construct_threshold_example``
builds the standard set showing the 5/3 ratio cannot be improved, and
``stability_diagnostics`` examines the heavily-represented part of the
quotient set and the subgroup it spans.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .groups import GroupTable
from .reports import CheckItem, CheckReport
from .setops import (
    ElemSet,
    invert_mask,
    is_subgroup_mask,
    left_translate_mask,
    product_mask,
    quotient_mask,
    rep_counts_quotient_mask,
    right_translate_mask,
    subgroup_closure_mask,
)
from .subgroups import Subgroup, all_subgroups, normalizer

__all__ = [
    "ClassKind",
    "Classification",
    "classify",
    "verify_structure",
    "check_sufficiency",
    "construct_threshold_example",
    "StabilityDiagnostics",
    "stability_diagnostics",
]


class ClassKind(enum.Enum):
    """Outcome of classifying a set by the size of its quotient set."""

    NOT_SMALL = "not-small"        # 3|Q| >= 5|A|; no structure promised
    SINGLE_COSET = "single-coset"  # A inside one coset of H, Q = H
    TWO_COSETS = "two-cosets"      # A inside two cosets, Q = H | HdH | Hd^-1H
    VIOLATION = "violation"        # 3|Q| < 5|A| but neither picture found


@dataclass(frozen=True, slots=True)
class Classification:
    """Result of ``classify``.

    ``fused`` is only meaningful for two-cosets results: True when the
    off-subgroup window is a single double coset HdH = H inv(d) H of size
    2|H| (the representative does not normalize H), False when it splits
    as dH | inv(d)H with d in the normalizer.
    """

    kind: ClassKind
    quotient: ElemSet
    set_size: int
    quotient_size: int
    subgroup: Subgroup | None = None
    rep_a: int | None = None
    rep_b: int | None = None
    fused: bool | None = None

    @property
    def small(self) -> bool:
        return 3 * self.quotient_size < 5 * self.set_size

    def ratio_check(self) -> tuple[int, int]:
        """The two sides of the smallness comparison, (3|Q|, 5|A|)."""
        return 3 * self.quotient_size, 5 * self.set_size


def _window_masks(G: GroupTable, hbits: int, d: int) -> tuple[int, int]:
    """The double cosets HdH and H inv(d) H as bitmasks."""
    d1 = product_mask(G, hbits, left_translate_mask(G, d, hbits))
    d2 = product_mask(G, hbits, left_translate_mask(G, G.inv[d], hbits))
    return d1, d2


def _two_coset_reps(G: GroupTable, amask: int, hbits: int) -> tuple[int, int] | None:
    """Smallest representatives (a, b) if A meets exactly two left cosets of H."""
    a = (amask & -amask).bit_length() - 1
    first = left_translate_mask(G, a, hbits)
    rest = amask & ~first
    if not rest:
        return None
    b = (rest & -rest).bit_length() - 1
    second = left_translate_mask(G, b, hbits)
    if rest & ~second:
        return None
    return a, b


def classify(G: GroupTable, A: ElemSet,
             subgroups: tuple[Subgroup, ...] | None = None) -> Classification:
    """Classify a nonempty set by the structure forced by its quotient set.

    When 3|Q| < 5|A| this finds the smallest subgroup realizing the
    single-coset picture, falling back to the smallest subgroup realizing
    the two-cosets picture.  A ``VIOLATION`` result means the smallness
    bound held but no picture was found, which the classification dichotomy
    rules out; it is reported rather than asserted so census runs can
    surface it as a finding.
    """
    if A.n != G.order:
        raise ValueError(f"set is over order {A.n}, group has order {G.order}")
    amask = A.bits
    if not amask:
        raise ValueError("cannot classify the empty set")
    qmask = quotient_mask(G, amask)
    k = amask.bit_count()
    qk = qmask.bit_count()
    quotient = ElemSet(G.order, qmask)
    if 3 * qk >= 5 * k:
        return Classification(ClassKind.NOT_SMALL, quotient, k, qk)

    if subgroups is None:
        subgroups = all_subgroups(G)
    a0 = (amask & -amask).bit_length() - 1
    t0 = left_translate_mask(G, G.inv[a0], amask)

    for H in subgroups:
        if 5 * k > 3 * H.order and t0 & ~H.bits == 0:
            return Classification(ClassKind.SINGLE_COSET, quotient, k, qk,
                                  subgroup=H, rep_a=a0)

    for H in subgroups:
        if 5 * k <= 9 * H.order:
            continue
        reps = _two_coset_reps(G, amask, H.bits)
        if reps is None:
            continue
        a, b = reps
        d = G.mul[G.inv[a]][b]
        d1, d2 = _window_masks(G, H.bits, d)
        if (d1 | d2).bit_count() != 2 * H.order:
            continue
        return Classification(ClassKind.TWO_COSETS, quotient, k, qk,
                              subgroup=H, rep_a=a, rep_b=b,
                              fused=d not in normalizer(G, H))

    return Classification(ClassKind.VIOLATION, quotient, k, qk)


def verify_structure(G: GroupTable, A: ElemSet, result: Classification) -> CheckReport:
    """Recompute the quotient decomposition a classification claims.

    For a single-coset result this checks Q = H.  For a two-cosets result it
    checks that the window HdH | H inv(d) H has size exactly 2|H|, misses H,
    and unions with H to exactly Q (hence |Q| = 3|H|), plus one shape item
    per route: the normalizer route (window splits as dH | inv(d)H) and the
    fused route (window is the single double coset HdH = H inv(d) H), with
    the inapplicable route reported as a skip.  Raises ``ValueError`` for
    results of any other kind or with witness data inconsistent with A.
    """
    if result.kind not in (ClassKind.SINGLE_COSET, ClassKind.TWO_COSETS):
        raise ValueError(f"no structure to verify for a {result.kind.value} result")
    H = result.subgroup
    amask = A.bits
    qmask = quotient_mask(G, amask)
    if ElemSet(G.order, qmask) != result.quotient:
        raise ValueError("classification quotient does not match the given set")
    items = []

    if result.kind is ClassKind.SINGLE_COSET:
        coset = left_translate_mask(G, result.rep_a, H.bits)
        if amask & ~coset:
            raise ValueError("set is not inside the claimed coset")
        items.append(CheckItem("ratio_bound", 5 * amask.bit_count() > 3 * H.order,
                               f"5|A| = {5 * amask.bit_count()}, 3|H| = {3 * H.order}"))
        items.append(CheckItem("quotient_equals_subgroup", qmask == H.bits,
                               "" if qmask == H.bits else "quotient differs from H"))
        return CheckReport("single-coset structure", tuple(items))

    a, b = result.rep_a, result.rep_b
    coset_a = left_translate_mask(G, a, H.bits)
    coset_b = left_translate_mask(G, b, H.bits)
    if amask & ~(coset_a | coset_b):
        raise ValueError("set is not inside the claimed pair of cosets")
    if not (amask & coset_a) or not (amask & coset_b):
        raise ValueError("set does not meet both claimed cosets")
    d = G.mul[G.inv[a]][b]
    d1, d2 = _window_masks(G, H.bits, d)
    window = d1 | d2
    h = H.order

    items.append(CheckItem("ratio_bound", 5 * amask.bit_count() > 9 * h,
                           f"5|A| = {5 * amask.bit_count()}, 9|H| = {9 * h}"))
    items.append(CheckItem("window_size", window.bit_count() == 2 * h,
                           f"|HdH | Hd^-1H| = {window.bit_count()}, 2|H| = {2 * h}"))
    disjoint = not (H.bits & window)
    items.append(CheckItem("window_misses_subgroup", disjoint,
                           "" if disjoint else "the window overlaps H"))
    union_ok = (H.bits | window) == qmask
    items.append(CheckItem("union_is_quotient", union_ok,
                           "" if union_ok else "H | HdH | Hd^-1H differs from Q"))

    if d in normalizer(G, H):
        da = left_translate_mask(G, d, H.bits)
        db = left_translate_mask(G, G.inv[d], H.bits)
        split_ok = (d1 == da and d2 == db and not (da & db)
                    and G.mul[d][d] not in H)
        items.append(CheckItem("normalizer_route", split_ok,
                               "window splits as the disjoint pair dH | d^-1H"
                               if split_ok else "normalizing d fails to split the window"))
        items.append(CheckItem("fused_route", None,
                               "skipped: the representative normalizes the subgroup"))
    else:
        fused_ok = d1 == d2 and d1.bit_count() == 2 * h
        items.append(CheckItem("normalizer_route", None,
                               "skipped: the representative does not normalize the subgroup"))
        items.append(CheckItem("fused_route", fused_ok,
                               "window is the single double coset HdH = Hd^-1H of size 2|H|"
                               if fused_ok else "non-normalizing d fails to fuse the window"))
    return CheckReport("two-cosets structure", tuple(items))


def check_sufficiency(G: GroupTable, H: Subgroup, a: int, b: int,
                      A: ElemSet) -> CheckReport:
    """Drive the converse direction from two-coset data for A inside aH | bH.

    Two routes are checked independently, each on its own hypotheses, with
    the inapplicable one reported as a skip rather than folded into the
    other:

    * the direct route: when 5|A| > 9|H| and the window HdH | H inv(d) H
      (d = inv(a)*b) has size exactly 2|H|, the quotient set must be small
      and must equal X^-1 X | Y^-1 Y | X^-1 d Y | Y^-1 d^-1 X for X, Y the
      parts of A pulled back into H.
    * the forced-window route: when 5|A| > 9|H| and |Q| <= 3|H|, the window
      is forced down to at most 2|H| — either d normalizes H, or HdH is a
      single inversion-closed double coset of size 2|H|.  When d normalizes
      H and d*d falls in H the set collapses into the single-coset picture
      for the doubled subgroup H | dH; in every other window-2|H| shape the
      quotient set must be exactly H | HdH | H inv(d) H.
    """
    amask = A.bits
    coset_a = left_translate_mask(G, a, H.bits)
    coset_b = left_translate_mask(G, b, H.bits)
    if coset_a == coset_b:
        raise ValueError("representatives a and b lie in the same coset of H")
    if amask & ~(coset_a | coset_b):
        raise ValueError("set is not inside aH | bH")
    if not (amask & coset_a) or not (amask & coset_b):
        raise ValueError("set does not meet both cosets aH and bH")

    k = amask.bit_count()
    h = H.order
    d = G.mul[G.inv[a]][b]
    d_norm = d in normalizer(G, H)
    d_sq_in = G.mul[d][d] in H
    d1, d2 = _window_masks(G, H.bits, d)
    wsize = (d1 | d2).bit_count()
    qmask = quotient_mask(G, amask)
    qk = qmask.bit_count()
    items = []

    if wsize == 2 * h and 5 * k > 9 * h:
        small = 3 * qk < 5 * k
        items.append(CheckItem("direct_smallness", small,
                               f"3|Q| = {3 * qk}, 5|A| = {5 * k}"))
        x = left_translate_mask(G, G.inv[a], amask & coset_a)
        y = left_translate_mask(G, G.inv[b], amask & coset_b)
        xinv, yinv = invert_mask(G, x), invert_mask(G, y)
        expected = (product_mask(G, xinv, x)
                    | product_mask(G, yinv, y)
                    | product_mask(G, xinv, left_translate_mask(G, d, y))
                    | product_mask(G, yinv, left_translate_mask(G, G.inv[d], x)))
        items.append(CheckItem("direct_quotient_formula", expected == qmask,
                               "" if expected == qmask else
                               "combined coset products differ from Q"))
    else:
        items.append(CheckItem(
            "direct_route", None,
            "skipped: needs 5|A| > 9|H| and a window HdH | Hd^-1H of size 2|H|"))

    if 5 * k > 9 * h and qk <= 3 * h:
        items.append(CheckItem(
            "forced_window", wsize <= 2 * h,
            f"|HdH | Hd^-1H| = {wsize}, 2|H| = {2 * h}, d = {G.name_of(d)}"))
        if d_norm and d_sq_in:
            doubled = H.bits | left_translate_mask(G, d, H.bits)
            ok = (is_subgroup_mask(G, doubled)
                  and amask & ~left_translate_mask(G, a, doubled) == 0
                  and 5 * k > 3 * doubled.bit_count())
            items.append(CheckItem(
                "single_coset_conclusion", ok,
                "A inside one coset of the doubled subgroup H | dH"))
        elif wsize == 2 * h:
            parts_ok = (H.bits | d1 | d2) == qmask
            items.append(CheckItem(
                "two_coset_conclusion", parts_ok,
                "Q = H | HdH | Hd^-1H" if parts_ok else
                "H | HdH | Hd^-1H differs from Q"))
    else:
        items.append(CheckItem(
            "forced_window_route", None,
            "skipped: needs 5|A| > 9|H| and |Q| <= 3|H|"))

    return CheckReport("two-coset sufficiency", tuple(items))


def construct_threshold_example(G: GroupTable, H: Subgroup, g: int) -> ElemSet:
    """Build the set A = g^-1 H | H | Hg witnessing sharpness of the 5/3 bound.

    Requires g to normalize H with g, g^2, g^3, g^4 all outside H; then
    |A| = 3|H| and the quotient set has size exactly 5|H|, so 3|Q| = 5|A|
    holds with equality and A falls just outside the small range.
    """
    if not 0 <= g < G.order:
        raise ValueError(f"element id {g} out of range for order {G.order}")
    if g not in normalizer(G, H):
        raise ValueError(f"{G.name_of(g)} does not normalize the subgroup")
    power = g
    for i in range(1, 5):
        if power in H:
            raise ValueError(
                f"power {i} of {G.name_of(g)} lands in the subgroup; "
                "the three cosets would collapse")
        power = G.mul[power][g]
    amask = (left_translate_mask(G, G.inv[g], H.bits)
             | H.bits
             | right_translate_mask(G, g, H.bits))
    if amask.bit_count() != 3 * H.order:
        raise RuntimeError("threshold construction produced overlapping cosets")
    if 3 * quotient_mask(G, amask).bit_count() != 5 * amask.bit_count():
        raise RuntimeError("threshold construction missed the exact 5/3 ratio")
    return ElemSet(G.order, amask)


@dataclass(frozen=True, slots=True)
class StabilityDiagnostics:
    """Diagnostics around the heavily-represented part of a quotient set.

    ``heavy`` is the set of quotients with representation count above
    |Q| - |A|, ``span`` the subgroup it generates, and ``saturated`` the
    product set A * span.  The stability report always applies; the
    representation-count gap bounds and the identification of span with the
    fully-represented quotients are only promised when the set absorbs its
    span (saturated == A) and the quotient set is small, which ``in_scope``
    records.  Out-of-scope values are still reported for inspection.
    """

    quotient: ElemSet
    heavy: ElemSet
    span: Subgroup
    saturated: ElemSet
    stability: CheckReport
    in_scope: bool
    gap_low: int
    gap_high: int
    gap_satisfied: bool
    full_count_matches_span: bool

    @property
    def ok(self) -> bool:
        if not self.stability.ok:
            return False
        if self.in_scope:
            return self.gap_satisfied and self.full_count_matches_span
        return True


def stability_diagnostics(G: GroupTable, A: ElemSet) -> StabilityDiagnostics:
    if A.n != G.order:
        raise ValueError(f"set is over order {A.n}, group has order {G.order}")
    amask = A.bits
    if not amask:
        raise ValueError("cannot analyze the empty set")
    k = amask.bit_count()
    qmask = quotient_mask(G, amask)
    qk = qmask.bit_count()
    counts = rep_counts_quotient_mask(G, amask, amask)
    threshold = qk - k
    heavy_bits = 0
    full_bits = 0
    for g in range(G.order):
        c = counts[g]
        if c > threshold:
            heavy_bits |= 1 << g
        if c == k:
            full_bits |= 1 << g
    span_bits = subgroup_closure_mask(G, heavy_bits)
    sat_bits = product_mask(G, amask, span_bits)
    items = []

    if heavy_bits:
        hq = product_mask(G, heavy_bits, qmask)
        qh = product_mask(G, qmask, heavy_bits)
        items.append(CheckItem("heavy_times_quotient", hq == qmask,
                               "" if hq == qmask else "heavy part moves Q"))
        items.append(CheckItem("quotient_times_heavy", qh == qmask,
                               "" if qh == qmask else "heavy part moves Q"))
    else:
        items.append(CheckItem("heavy_times_quotient", None,
                               "skipped: the heavy part is empty"))
        items.append(CheckItem("quotient_times_heavy", None,
                               "skipped: the heavy part is empty"))
    sq = product_mask(G, span_bits, qmask)
    qs = product_mask(G, qmask, span_bits)
    items.append(CheckItem("span_times_quotient", sq == qmask,
                           "" if sq == qmask else "span moves Q"))
    items.append(CheckItem("quotient_times_span", qs == qmask,
                           "" if qs == qmask else "span moves Q"))
    sat_q = quotient_mask(G, sat_bits)
    fqf = product_mask(G, span_bits, product_mask(G, qmask, span_bits))
    items.append(CheckItem("saturated_quotient_identity", sat_q == fqf,
                           "" if sat_q == fqf else
                           "quotient of the saturated set differs from span*Q*span"))
    items.append(CheckItem("saturated_quotient", sat_q == qmask,
                           "" if sat_q == qmask else
                           "saturating A changes its quotient set"))
    stability = CheckReport("quotient stability", tuple(items))

    in_scope = sat_bits == amask and 3 * qk < 5 * k
    gap_low = 2 * k - qk
    gap_high = qk - k
    gap_ok = all(gap_low <= counts[g] <= gap_high
                 for g in ElemSet(G.order, qmask) if counts[g] < k)
    span = Subgroup(ElemSet(G.order, span_bits), span_bits.bit_count())

    return StabilityDiagnostics(
        quotient=ElemSet(G.order, qmask),
        heavy=ElemSet(G.order, heavy_bits),
        span=span,
        saturated=ElemSet(G.order, sat_bits),
        stability=stability,
        in_scope=in_scope,
        gap_low=gap_low,
        gap_high=gap_high,
        gap_satisfied=gap_ok,
        full_count_matches_span=full_bits == span_bits,
    )
