"""Canonical forms, the exhaustive classification census, and structure scans.

Frozen counts in here were read off a passing run and double-checked against
the naive oracles where the group is small enough to brute-force; they guard
against silent regressions in the sweep, the canonicalization, and the merge.
"""

import json
import math
import random

import pytest

from quotset.census import (
    DEFAULT_CENSUS_CAP,
    HARD_CENSUS_CAP,
    canonical_form,
    classification_census,
    find_structure_witness,
    iter_canonical_sets,
    structure_scan,
)
from quotset.groups import build_group, catalog_specs
from quotset.setops import ElemSet, left_translate_mask, quotient_set
from quotset.subgroups import all_subgroups, ensure_subgroup

from oracles import (
    naive_canonical,
    naive_min_quotients,
    naive_quotient,
    random_subset,
)


# === canonical forms ===


def test_canonical_form_matches_oracle(make_group):
    rng = random.Random(0xCA7)
    specs = catalog_specs(12)
    for _ in range(200):
        G = make_group(rng.choice(specs))
        A = random_subset(rng, G.order)
        got = canonical_form(G, ElemSet.from_elements(G.order, A))
        assert set(got) == naive_canonical(G, A)


def test_canonical_form_properties(make_group):
    rng = random.Random(0x1DE)
    G = make_group("dihedral 6")
    for _ in range(80):
        A = ElemSet.from_elements(12, random_subset(rng, 12))
        c = canonical_form(G, A)
        assert 0 in c
        assert canonical_form(G, c) == c
        g = rng.randrange(12)
        translated = ElemSet(12, left_translate_mask(G, g, A.bits))
        assert canonical_form(G, translated) == c
        assert quotient_set(G, c) == quotient_set(G, A)


def test_canonical_form_rejects_empty(c8):
    with pytest.raises(ValueError):
        canonical_form(c8, ElemSet(8))


def test_iter_canonical_sets_counts(s3, d4, c8):
    assert sum(1 for _ in iter_canonical_sets(s3)) == 15
    assert sum(1 for _ in iter_canonical_sets(d4)) == 42
    assert sum(1 for _ in iter_canonical_sets(c8)) == 35


def test_iter_canonical_sets_yields_canonical_reps(s3):
    seen = set()
    for A in iter_canonical_sets(s3):
        assert 0 in A
        assert canonical_form(s3, A) == A
        assert A.bits not in seen
        seen.add(A.bits)


def test_iter_canonical_sets_respects_size_filter(d4):
    got = list(iter_canonical_sets(d4, sizes=(3, 4)))
    assert all(3 <= A.size <= 4 for A in got)
    full = [A for A in iter_canonical_sets(d4) if 3 <= A.size <= 4]
    assert got == full


# === the classification census ===


def test_census_of_symmetric_3(s3):
    r = classification_census(s3)
    assert r.ok and not r.violations
    assert r.order == 6
    assert r.subsets_scanned == 32
    assert r.canonical_classes == 15
    assert [(row.size, row.min_quotient, row.subsets) for row in r.by_size] == [
        (1, 1, 6), (2, 2, 15), (3, 3, 20), (4, 6, 15), (5, 6, 6), (6, 6, 1)]
    # the size-3 extremal is the rotation subgroup
    assert list(r.by_size[2].extremal) == [0, 3, 4]


def test_census_of_cyclic_8(c8):
    r = classification_census(c8)
    assert r.ok
    assert r.canonical_classes == 35
    assert [(row.size, row.min_quotient, row.subsets) for row in r.by_size] == [
        (1, 1, 8), (2, 2, 28), (3, 4, 56), (4, 4, 70),
        (5, 8, 56), (6, 8, 28), (7, 8, 8), (8, 8, 1)]
    assert list(r.by_size[2].extremal) == [0, 2, 4]
    assert list(r.by_size[3].extremal) == [0, 2, 4, 6]


def test_census_of_dihedral_4_covers_the_fused_shape(d4):
    # this census is the one a normalizer-only two-coset test fails
    r = classification_census(d4)
    assert r.ok and not r.violations
    assert r.canonical_classes == 42
    assert [row.min_quotient for row in r.by_size] == [1, 2, 4, 4, 8, 8, 8, 8]


def test_census_min_quotients_match_brute_force(make_group):
    for spec in ("cyclic 6", "symmetric 3", "dihedral 4", "dicyclic 2"):
        G = make_group(spec)
        r = classification_census(G)
        expected = naive_min_quotients(G)
        assert {row.size: row.min_quotient for row in r.by_size} == expected


def test_census_subset_counts_are_binomials(make_group):
    for spec in ("symmetric 3", "cyclic 12", "dihedral 5"):
        G = make_group(spec)
        r = classification_census(G)
        for row in r.by_size:
            assert row.subsets == math.comb(G.order, row.size)
        assert r.subsets_scanned == 2 ** (G.order - 1)


def test_census_extremal_rows_are_witnesses(make_group):
    # each row's extremal set must actually realize the reported minimum
    for spec in ("cyclic 10", "dihedral 4"):
        G = make_group(spec)
        for row in classification_census(G).by_size:
            assert row.extremal.size == row.size
            assert quotient_set(G, row.extremal).size == row.min_quotient


def test_census_size_filter(s3):
    r = classification_census(s3, sizes=(2, 3))
    assert (r.size_lo, r.size_hi) == (2, 3)
    assert [row.size for row in r.by_size] == [2, 3]
    assert r.subsets_scanned == math.comb(5, 1) + math.comb(5, 2)
    with pytest.raises(ValueError):
        classification_census(s3, sizes=(0, 3))
    with pytest.raises(ValueError):
        classification_census(s3, sizes=(4, 2))


def test_census_is_deterministic_across_jobs(d6):
    base = classification_census(d6, jobs=1).to_dict()
    for jobs in (2, 3, 4):
        assert classification_census(d6, jobs=jobs).to_dict() == base
    assert json.dumps(classification_census(d6, jobs=4).to_dict(),
                      sort_keys=True) == json.dumps(base, sort_keys=True)


def test_census_rejects_bad_jobs(s3):
    with pytest.raises(ValueError):
        classification_census(s3, jobs=0)


def test_census_runtime_is_reported_but_not_serialized(s3):
    r = classification_census(s3)
    assert r.runtime_seconds >= 0.0
    assert "runtime_seconds" not in json.dumps(r.to_dict())


def test_census_order_caps():
    G25 = build_group("cyclic 25")
    with pytest.raises(ValueError, match="allow_big"):
        classification_census(G25)
    G33 = build_group("cyclic 33")
    with pytest.raises(ValueError, match="hard"):
        classification_census(G33, allow_big=True)
    # a lowered cap is overridable per call
    G12 = build_group("cyclic 12")
    with pytest.raises(ValueError, match="cap"):
        classification_census(G12, cap=8)
    assert classification_census(G12, cap=8, allow_big=True).ok
    assert DEFAULT_CENSUS_CAP == 24 and HARD_CENSUS_CAP == 32


# === structure scans ===


def test_scan_counts_are_frozen(s3, c8, c12):
    expected = {
        ("symmetric 3", 1): (7, 15),
        ("symmetric 3", 2): (12, 15),
        ("cyclic 8", 1): (10, 35),
        ("cyclic 8", 2): (21, 35),
        ("cyclic 8", 3): (23, 35),
        ("cyclic 12", 2): (87, 351),
    }
    for G in (s3, c8, c12):
        for (spec, n), (in_range, classes) in expected.items():
            if spec != G.spec:
                continue
            s = structure_scan(G, n)
            assert s.canonical_classes == classes
            assert s.in_range == in_range
            assert s.witnesses_found == in_range
            assert s.sufficiency_checked == in_range
            assert not s.counterexamples and not s.sufficiency_failures
            assert not s.fatal


def test_scan_in_range_count_matches_brute_force(s3):
    # independent recount of the density condition over canonical classes
    for n in (1, 2):
        expected = 0
        for A in iter_canonical_sets(s3):
            q = len(naive_quotient(s3, set(A)))
            if (n + 1) * q < (2 * n + 1) * A.size:
                expected += 1
        assert structure_scan(s3, n).in_range == expected


def test_scan_is_deterministic_across_jobs(c12):
    base = structure_scan(c12, 2, jobs=1).to_dict()
    for jobs in (2, 4):
        assert structure_scan(c12, 2, jobs=jobs).to_dict() == base


def test_scan_rejects_bad_max_reps(s3):
    with pytest.raises(ValueError):
        structure_scan(s3, 0)


def test_scan_respects_caps():
    with pytest.raises(ValueError, match="allow_big"):
        structure_scan(build_group("cyclic 25"), 1)


# === single-set structure witnesses ===


def test_witness_for_a_subgroup(c12):
    H = ElemSet.from_elements(12, [0, 4, 8])
    w = find_structure_witness(c12, H, 1)
    assert w is not None
    assert set(w.subgroup) == {0, 4, 8}
    assert list(w.reps) == [0]
    assert w.checks.ok


def test_witness_for_a_two_coset_set(c12):
    A = ElemSet.from_elements(12, [0, 4, 8, 1, 5, 9])
    assert find_structure_witness(c12, A, 1) is None
    w = find_structure_witness(c12, A, 2)
    assert w is not None
    assert set(w.subgroup) == {0, 4, 8}
    assert list(w.reps) == [0, 1]
    assert w.checks.ok


def test_witness_for_the_fused_set(d4):
    # {e, r, s, rs}: the reps of the only workable subgroup H = {e, s} never
    # share a normalizer coset, so the witness rests on the collapsed
    # sandwich H A0^-1 A0 H instead
    A = ElemSet.from_elements(8, [0, 1, 4, 5])
    w = find_structure_witness(d4, A, 2)
    assert w is not None
    assert set(w.subgroup) == {0, 4}
    assert list(w.reps) == [0, 1]
    assert w.checks.ok
    status = {item.name: item.status for item in w.checks.items}
    assert status["normalizer_shape"] == "skip"
    assert status["window_shape"] == "pass"


def test_no_witness_for_a_spread_set(c7):
    assert find_structure_witness(c7, ElemSet.from_elements(7, [0, 1, 3]), 2) is None


def test_witness_scan_agreement(s3):
    # every in-range canonical class yields a witness through the same entry
    # point the scan uses
    for A in iter_canonical_sets(s3):
        q = quotient_set(s3, A).size
        for n in (1, 2):
            w = find_structure_witness(s3, A, n)
            if (n + 1) * q < (2 * n + 1) * A.size:
                assert w is not None and w.checks.ok
