import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trustgame.python.core.validators import GuardExceededError, UnknownPlayerError
from trustgame.python.game import (
    check_monotone,
    check_superadditive,
    coalition_value,
    coalition_values,
    external_player_value,
    from_mask,
    to_mask,
)
from trustgame.python.graph import WeightedDigraph, parse_graph, random_graph

from conftest import TOL


def ids(g, *labels):
    return {g.index_of(label) for label in labels}


# ============================================================
# Characteristic function
# ============================================================

@pytest.mark.parametrize(
    "members, internal, external",
    [(("1",), 0.0, 0.2), (("1", "2"), 0.2, 0.5), (("1", "2", "3"), 0.7, 0.0)],
)
def test_coalition_value_g3(g3, members, internal, external):
    v = coalition_value(g3, ids(g3, *members))
    assert v.internal == pytest.approx(internal)
    assert v.external == pytest.approx(external)
    assert v.total == pytest.approx(internal + external)


def test_empty_coalition_is_zero(g3):
    v = coalition_value(g3, set())
    assert (v.internal, v.external, v.total) == (0.0, 0.0, 0.0)
    assert dict(v.per_player_external) == {}


def test_external_player_value_g3(g3):
    one = g3.index_of("1")
    assert external_player_value(g3, ids(g3, "1"), one) == 0.2
    assert external_player_value(g3, ids(g3, "1", "2", "3"), one) == 0.0
    assert external_player_value(g3, ids(g3, "2"), one) == 0.0


def test_zero_weight_edge_pins_external_value():
    g = parse_graph("i\nk\nl\nk i 0.0\nl i 0.7")
    i = g.index_of("i")
    assert external_player_value(g, {i}, i) == 0.0
    assert external_player_value(g, {i, g.index_of("k")}, i) == 0.7


def test_coalition_value_rejects_unknown_player(g3):
    with pytest.raises(UnknownPlayerError):
        coalition_value(g3, {0, 7})


def test_coalition_value_accepts_numpy_ids(g3):
    assert coalition_value(g3, np.array([0, 1])).total == pytest.approx(0.7)
    assert coalition_value(g3, [np.int64(0), np.int32(2)]).total == pytest.approx(0.7)


@pytest.mark.parametrize("player", [True, 1.0, "1", -1, 3])
def test_coalition_value_rejects_non_index_players(g3, player):
    with pytest.raises(UnknownPlayerError):
        coalition_value(g3, [player])


def test_value_table_matches_pointwise(gf):
    values = coalition_values(gf)
    for mask in (0, 1, 5, 37, 64, 100, (1 << gf.n) - 1):
        assert values[mask] == pytest.approx(coalition_value(gf, from_mask(mask)).total, abs=1e-12)


@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 7))
@settings(max_examples=40, deadline=None)
def test_value_table_matches_definition(seed, n):
    g = random_graph(np.random.default_rng(seed), n)
    values = coalition_values(g)
    for mask in range(1 << n):
        assert values[mask] == pytest.approx(coalition_value(g, from_mask(mask)).total, abs=TOL)


def test_value_table_guard(gf):
    with pytest.raises(GuardExceededError) as info:
        coalition_values(gf, max_n=4, operation="coalition_values")
    assert info.value.n == gf.n and info.value.max_n == 4


def test_mask_helpers():
    assert to_mask([0, 2, 3]) == 0b1101
    assert from_mask(0b1101) == frozenset({0, 2, 3})
    assert from_mask(0) == frozenset()


# ============================================================
# Property checkers
# ============================================================

@pytest.mark.parametrize("fixture", ["g2", "g3", "edgeless3"])
def test_superadditive_and_monotone_fixtures(request, fixture):
    g = request.getfixturevalue(fixture)
    superadditive = check_superadditive(g)
    assert superadditive.passed
    assert superadditive.n_checked == 3 ** g.n
    monotone = check_monotone(g)
    assert monotone.passed
    assert monotone.n_checked == g.n * 2 ** (g.n - 1)


def test_gf_is_monotone(gf):
    assert check_monotone(gf).passed


def test_checkers_on_random_graphs(random_graphs):
    for g in random_graphs:
        superadditive = check_superadditive(g)
        assert superadditive.passed, superadditive.minimal_witness
        monotone = check_monotone(g)
        assert monotone.passed, monotone.minimal_witness


def test_checker_guard_refuses(gf):
    with pytest.raises(GuardExceededError):
        check_superadditive(gf, max_n=5)


def test_threads_do_not_change_reports(gf):
    single = check_superadditive(gf, threads=1)
    several = check_superadditive(gf, threads=4)
    assert single == several
    assert check_monotone(gf, threads=1) == check_monotone(gf, threads=3)


def test_sampled_mode_is_reproducible():
    g = random_graph(np.random.default_rng(3), 14)
    first = check_superadditive(g, sample=200, seed=11)
    second = check_superadditive(g, sample=200, seed=11)
    assert first == second
    assert first.mode == "sampled" and first.n_checked == 200 and first.passed
    assert check_monotone(g, sample=200, seed=11).passed


def test_violations_are_reported_smallest_first():
    # a negative tolerance turns every pair into a violation
    g = WeightedDigraph(n=2, edges={(0, 1): 0.5})
    report = check_superadditive(g, tol=-1.0)
    assert not report.passed
    sizes = [sum(len(c) for c in v.coalitions) for v in report.violations]
    assert sizes == sorted(sizes)
    assert report.minimal_witness == report.violations[0]
    data = report.to_dict(g.labels)
    assert data["claim"] == "superadditive"
    assert set(data["violations"][0]) == {"S", "T", "deficit"}
