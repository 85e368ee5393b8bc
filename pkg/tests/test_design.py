import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stbclab.catalog import preset
from stbclab.design import (Conditional, Design, DesignConsistencyError, DesignParseError,
                            DesignVersionError, GroupStructure, detect_groups, dumps, load, loads,
                            save, verify_design)
from stbclab.fgd import build_fgd
from stbclab.linalg import is_hr_orthogonal


def test_group_structure_validation():
    with pytest.raises(ValueError):
        GroupStructure(((0, 1), (1, 2)))
    with pytest.raises(ValueError):
        Design([np.eye(2), 1j * np.eye(2)], GroupStructure(((0, 2),)), "gap")
    with pytest.raises(ValueError):
        GroupStructure(((0, 1, 2),), {0: Conditional((2,), GroupStructure(((0,),)))})
    g = GroupStructure(((0, 1, 2),), {0: Conditional((2,), GroupStructure(((0,), (1,))))})
    assert g.g == 1 and g.sizes == (3,)


def test_rate_exact():
    d = build_fgd(4)
    assert d.rate == pytest.approx(1.25) and d.rate.denominator == 4


def test_design_immutable():
    d = preset("ciod2")
    with pytest.raises(ValueError):
        d.weights[0, 0, 0] = 5


def test_verify_presets_and_fgd():
    assert verify_design(preset("alamouti")).passed
    assert verify_design(build_fgd(4)).passed


def test_verify_wrong_partition_lists_pairs():
    c = preset("ciod2")
    bad = c.with_groups(GroupStructure(((0, 2), (1, 3))))
    rep = verify_design(bad)
    assert not rep.passed
    W = c.weights
    expected = sorted({(min(i, j), max(i, j)) for i in (0, 2) for j in (1, 3)
                       if not is_hr_orthogonal(W[i], W[j])})
    assert rep.cross_group_violations == expected and expected


def test_verify_reports_dependence_and_rank():
    A = np.eye(2)
    d = Design([A, 2 * A], GroupStructure(((0, 1),)), "dep")
    rep = verify_design(d)
    assert not rep.independent and rep.rank == 1
    d = Design([np.diag([1, 0])], GroupStructure(((0,),)), "singular")
    assert not verify_design(d).full_rank


def test_detect_groups_examples():
    assert detect_groups(preset("alamouti")).sizes == (1, 1, 1, 1)
    assert sorted(detect_groups(build_fgd(4)).sizes) == [2, 8]
    d = Design([np.eye(2), np.eye(2) + 0.5 * np.ones((2, 2)), np.diag([1, 2])],
               GroupStructure(((0, 1, 2),)), "dense")
    assert detect_groups(d).g == 1


@given(st.permutations(range(10)))
def test_detect_groups_permutation_invariant(perm):
    d = build_fgd(4)
    base = {frozenset(g) for g in detect_groups(d).partition}
    p = Design(d.weights[list(perm)], GroupStructure((tuple(range(10)),)), "perm")
    got = {frozenset(perm[i] for i in g) for g in detect_groups(p).partition}
    assert got == base


@pytest.mark.parametrize("name", ["alamouti", "ciod2", "srinath_rajan_2x2"])
def test_declared_partition_coarsens_detected(name):
    d = preset(name)
    fine = detect_groups(d).partition
    declared = [set(g) for g in d.groups.partition]
    for comp in fine:
        assert sum(set(comp) <= g for g in declared) == 1


def test_round_trip(tmp_path):
    for d in (preset("ciod2"), preset("srinath_rajan_2x2"), build_fgd(6)):
        path = tmp_path / f"{d.name}.json"
        save(d, path)
        e = load(path)
        assert e == d
        assert e.groups == d.groups and e.meta == d.meta and e.name == d.name
        assert np.array_equal(e.weights.view(np.uint8), d.weights.view(np.uint8))


def test_round_trip_is_byte_stable():
    d = build_fgd(4)
    text = dumps(d)
    assert dumps(loads(text)[0]) == text


def test_load_errors():
    text = dumps(preset("ciod2"))
    with pytest.raises(DesignParseError) as e:
        loads(text[: len(text) // 2])
    assert e.value.code == "parse"
    doc = json.loads(text)
    doc["version"] = 99
    with pytest.raises(DesignVersionError):
        loads(json.dumps(doc))
    doc = json.loads(text)
    doc["K"] = 5
    with pytest.raises(DesignConsistencyError) as e:
        loads(json.dumps(doc))
    assert e.value.code == "consistency"


def test_file_fields():
    doc = json.loads(dumps(build_fgd(2)))
    assert doc["version"] == 1
    assert doc["rate"] == {"num": 5, "den": 4}
    assert doc["groups"] == [[1], [2, 3, 4, 5]]
    assert doc["conditional"] == [{"group": 2, "outer": [5], "inner": {"groups": [[2], [3], [4]]}}]
    assert doc["weights"][1] == [[[0.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [0.0, 0.0]]]
