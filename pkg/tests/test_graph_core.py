import re

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trustgame.python.core.validators import EdgeNotFoundError, GraphFormatError, UnknownPlayerError
from trustgame.python.graph import (
    GraphFormat,
    InEdgeTable,
    TieBreak,
    ValueKind,
    WeightedDigraph,
    chain_supports,
    dump_graph,
    in_neighbor_profile,
    load_graph,
    parse_graph,
    random_graph,
    tail_suffix_sums,
)


# ============================================================
# Parsing
# ============================================================

def test_parse_edge_list_g2():
    g = parse_graph("1 2 0.6")
    assert g.n == 2
    assert g.labels == ("1", "2")
    assert dict(g.edges) == {(0, 1): 0.6}


def test_parse_assigns_ids_in_first_appearance_order():
    g = parse_graph("2 1 0.2\n3 1 0.5")
    assert g.labels == ("2", "1", "3")
    assert g.weight(g.index_of("2"), g.index_of("1")) == 0.2


def test_parse_comments_blank_lines_and_isolated_players():
    g = parse_graph("# header\n\nz\n a b 0.3  # trailing\n")
    assert g.labels == ("z", "a", "b")
    assert g.out_neighbors[0] == ()
    assert len(g.edges) == 1


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("1 1 0.3", "self-loop"),
        ("1 2 1.5", "outside [0, 1]"),
        ("1 2 -0.1", "outside [0, 1]"),
        ("1 2 abc", "not a number"),
        ("1 2 0.3\n1 2 0.4", "duplicate edge"),
        ("1 2", "expected"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(GraphFormatError, match=re.escape(fragment)):
        parse_graph(text)


def test_parse_error_carries_line_number():
    with pytest.raises(GraphFormatError) as info:
        parse_graph("# c\n1 2 0.5\n2 2 0.1\n")
    assert info.value.line == 3
    assert "line 3" in str(info.value)


def test_parse_json_with_nodes(gf):
    assert gf.labels == ("i", "j", "k1", "k2", "k3", "k4", "k5")
    assert gf.weight(gf.index_of("k3"), gf.index_of("j")) == 0.8


def test_parse_json_errors_carry_locus():
    with pytest.raises(GraphFormatError) as info:
        parse_graph('{"edges": [["a", "b", 0.5], ["b", "b", 0.1]]}', GraphFormat.JSON)
    assert info.value.locus == "edges[1]"
    with pytest.raises(GraphFormatError):
        parse_graph('{"edges": [', GraphFormat.JSON)


def test_json_weight_must_not_be_a_bool():
    with pytest.raises(GraphFormatError, match="not a number"):
        parse_graph('{"edges": [["a", "b", true]]}', GraphFormat.JSON)


def test_load_graph_rejects_invalid_utf8(tmp_path):
    path = tmp_path / "latin.txt"
    path.write_bytes(b"a b 0.5\n\xff c 0.2\n")
    with pytest.raises(GraphFormatError) as info:
        load_graph(str(path))
    assert info.value.locus == "byte 8"


def test_format_from_extension():
    assert GraphFormat.for_path("x/gf.json") is GraphFormat.JSON
    assert GraphFormat.for_path("g3.txt") is GraphFormat.EDGE_LIST


def test_dump_graph_reparses_to_same_graph(gf):
    for fmt in GraphFormat:
        again = parse_graph(dump_graph(gf, fmt), fmt)
        assert again.labels == gf.labels
        assert dict(again.edges) == dict(gf.edges)


def test_direct_construction_collects_every_problem():
    with pytest.raises(GraphFormatError) as info:
        WeightedDigraph(n=2, edges={(0, 0): 0.1, (0, 1): 2.0})
    message = str(info.value)
    assert "self-loop" in message and "outside [0, 1]" in message


def test_lookups(g3):
    with pytest.raises(UnknownPlayerError):
        g3.index_of("9")
    with pytest.raises(EdgeNotFoundError):
        g3.weight(0, 1)


def test_with_edge_weight_and_scaled(g3):
    e = (g3.index_of("2"), g3.index_of("1"))
    changed = g3.with_edge_weight(e, 0.9)
    assert changed.edges[e] == 0.9
    assert g3.edges[e] == 0.2
    with pytest.raises(GraphFormatError):
        g3.with_edge_weight(e, 1.2)
    assert g3.scaled(0.5).edges[e] == pytest.approx(0.1)


# ============================================================
# Profiles
# ============================================================

def test_profile_g3(g3):
    one, two, three = (g3.index_of(x) for x in "123")
    profile = in_neighbor_profile(g3, one)
    assert profile.ordered == ((two, 0.2), (three, 0.5))
    assert profile.m == 2
    assert profile.rank_of[two] == 1 and profile.rank_of[three] == 2
    assert profile.b(0) == 0.0 and profile.b(2) == 0.5
    assert in_neighbor_profile(g3, two).m == 0


def test_profile_tie_break_by_id():
    g = parse_graph("7\n2\n4\n4 7 0.5\n2 7 0.5")
    profile = in_neighbor_profile(g, g.index_of("7"))
    assert [g.labels[k] for k in profile.neighbors] == ["2", "4"]
    assert profile.neighbors == (1, 2)
    reversed_profile = in_neighbor_profile(g, 0, TieBreak.DESCENDING)
    assert reversed_profile.neighbors == (2, 1)


def test_profile_unknown_player(g3):
    with pytest.raises(UnknownPlayerError):
        in_neighbor_profile(g3, 3)


def test_chain_supports(g2, g3):
    one, two, three = (g3.index_of(x) for x in "123")
    assert chain_supports(in_neighbor_profile(g3, one)) == [
        frozenset({one}), frozenset({one, two}), frozenset({one, two, three})
    ]
    assert chain_supports(in_neighbor_profile(g3, two)) == [frozenset({two})]
    assert chain_supports(in_neighbor_profile(g2, 1)) == [frozenset({1}), frozenset({0, 1})]


def test_tail_suffix_sums_g3(g3):
    profile = in_neighbor_profile(g3, g3.index_of("1"))
    shapley = tail_suffix_sums(profile, ValueKind.SHAPLEY)
    assert shapley[1] == pytest.approx(0.15)
    assert shapley[2] == 0.0
    assert tail_suffix_sums(profile, ValueKind.BANZHAF)[0] == pytest.approx(0.35)


def test_in_edge_table_matches_profiles(gf):
    table = InEdgeTable.build(gf)
    assert table.degrees.sum() == len(gf.edges)
    per_edge, per_player = table.suffix_sums(ValueKind.SHAPLEY)
    for i in range(gf.n):
        sums = tail_suffix_sums(table.profile(i), ValueKind.SHAPLEY)
        assert per_player[i] == pytest.approx(sums[0], abs=1e-12)
        lo, hi = table.offsets[i], table.offsets[i + 1]
        for e in range(lo, hi):
            assert per_edge[e] == pytest.approx(sums[table.ranks[e]], abs=1e-12)


@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 8))
@settings(max_examples=50, deadline=None)
def test_profile_invariants(seed, n):
    g = random_graph(np.random.default_rng(seed), n)
    for i in range(g.n):
        profile = in_neighbor_profile(g, i)
        weights = profile.weights
        assert all(a <= b for a, b in zip(weights, weights[1:]))
        assert sorted(profile.rank_of.values()) == list(range(1, profile.m + 1))
        supports = chain_supports(profile)
        assert [len(s) for s in supports] == list(range(1, profile.m + 2))
        assert all(i in s for s in supports)
        sums = tail_suffix_sums(profile, ValueKind.SHAPLEY)
        assert sums[-1] == 0.0
        assert all(a >= b - 1e-15 for a, b in zip(sums, sums[1:]))


def test_profile_ignores_input_order_of_equal_weights():
    a = parse_graph("x\np\nq\nr\np x 0.5\nq x 0.5\nr x 0.1")
    b = parse_graph("x\np\nq\nr\nr x 0.1\nq x 0.5\np x 0.5")
    assert in_neighbor_profile(a, 0) == in_neighbor_profile(b, 0)


def test_random_graph_is_seeded():
    one = random_graph(np.random.default_rng(5), 6)
    two = random_graph(np.random.default_rng(5), 6)
    assert dict(one.edges) == dict(two.edges)
    assert all(0.0 <= w <= 1.0 for w in one.edges.values())
