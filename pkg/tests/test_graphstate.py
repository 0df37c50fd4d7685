"""Edge-bitmask graph states and the measurement/fusion rewrite rules."""

import pytest

from lcdist import graphstate as gs
from lcdist.errors import (
    CoLocationViolationError,
    DuplicateEdgeError,
    IndexOutOfRangeError,
    NotANeighborError,
    SelfLoopError,
    StateTooSmallError,
)


def masks_equal(a, b):
    return a.qubit_count == b.qubit_count and a.edges == b.edges


# -- bit encoding -------------------------------------------------------


def test_pair_bit_layout():
    # (i, j) with i < j sits at bit j*(j-1)//2 + i, order-insensitive
    assert gs.pair_bit(0, 1) == 0
    assert gs.pair_bit(0, 2) == 1
    assert gs.pair_bit(1, 2) == 2
    assert gs.pair_bit(2, 1) == 2
    assert gs.pair_bit(0, 3) == 3


def test_bit_to_pair_round_trip():
    q = 9
    for bit in range(gs.mask_bit_count(q)):
        i, j = gs.bit_to_pair(bit)
        assert i < j < q
        assert gs.pair_bit(i, j) == bit


def test_mask_round_trip_via_edge_list():
    state = gs.from_edges(5, [(0, 1), (1, 2), (2, 4), (0, 4)])
    rebuilt = gs.from_edges(5, state.edge_list())
    assert masks_equal(state, rebuilt)


# -- construction -------------------------------------------------------


def test_from_edges_path3_mask():
    state = gs.from_edges(3, [(0, 1), (1, 2)])
    assert state.edges == (1 << gs.pair_bit(0, 1)) | (1 << gs.pair_bit(1, 2))
    assert state.edge_count() == 2
    assert state.neighbors(1) == [0, 2]


def test_from_edges_rejects_duplicates():
    with pytest.raises(DuplicateEdgeError):
        gs.from_edges(3, [(0, 1), (1, 0)])


def test_from_edges_rejects_self_loop():
    with pytest.raises(SelfLoopError):
        gs.from_edges(3, [(1, 1)])


def test_from_edges_rejects_out_of_range():
    with pytest.raises(IndexOutOfRangeError):
        gs.from_edges(3, [(0, 3)])
    with pytest.raises(IndexOutOfRangeError):
        gs.from_edges(1, [])
    with pytest.raises(IndexOutOfRangeError):
        gs.from_edges(gs.MAX_QUBITS + 1, [])


def test_labels_must_be_injective():
    with pytest.raises(CoLocationViolationError):
        gs.from_edges(3, [(0, 1)], labels={0: 5, 1: 5})
    state = gs.from_edges(3, [(0, 1)], labels={0: 5, 1: 7, 2: 2})
    assert state.label_map() == {0: 5, 1: 7, 2: 2}
    assert state.label_of(1) == 7


def test_connectivity():
    assert gs.path_state(4).is_connected()
    assert not gs.from_edges(4, [(0, 1), (2, 3)]).is_connected()
    assert not gs.from_edges(3, [(0, 1)]).is_connected()


# -- CZ toggle ----------------------------------------------------------


def test_toggle_cz_adds_and_removes():
    base = gs.from_edges(3, [(0, 1)])
    with_edge = gs.toggle_cz(base, 1, 2)
    assert with_edge.has_edge(1, 2)
    assert masks_equal(gs.toggle_cz(with_edge, 1, 2), base)


def test_toggle_cz_is_involutive():
    state = gs.path_state(5)
    assert masks_equal(gs.toggle_cz(gs.toggle_cz(state, 0, 3), 0, 3), state)


def test_toggle_cz_rejects_self_loop():
    with pytest.raises(SelfLoopError):
        gs.toggle_cz(gs.path_state(3), 2, 2)


# -- local complementation ---------------------------------------------


def test_lc_star_to_complete():
    star = gs.star_state(4)
    assert masks_equal(gs.local_complement(star, 0), gs.complete_state(4))


def test_lc_complete_to_star():
    assert masks_equal(
        gs.local_complement(gs.complete_state(4), 2), gs.star_state(4, root=2)
    )


def test_lc_is_involutive():
    state = gs.from_edges(5, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (1, 4)])
    for a in range(5):
        twice = gs.local_complement(gs.local_complement(state, a), a)
        assert masks_equal(twice, state)


def test_lc_no_op_on_low_degree_pivot():
    # fewer than two neighbors leaves nothing to complement
    path = gs.path_state(4)
    assert masks_equal(gs.local_complement(path, 0), path)
    lonely = gs.from_edges(3, [(0, 1)])
    assert masks_equal(gs.local_complement(lonely, 2), lonely)


# -- measurements -------------------------------------------------------


def test_measure_z_triangle():
    tri = gs.complete_state(3)
    out = gs.measure_z(tri, 2)
    assert masks_equal(out, gs.from_edges(2, [(0, 1)]))


def test_measure_z_path_middle_disconnects():
    out = gs.measure_z(gs.path_state(3), 1)
    assert out.qubit_count == 2 and out.edge_count() == 0


def test_measure_z_star_root():
    out = gs.measure_z(gs.star_state(4), 0)
    assert out.qubit_count == 3 and out.edge_count() == 0


def test_measure_y_path_middle_keeps_link():
    # Y at the middle of 0-1-2 joins the endpoints
    out = gs.measure_y(gs.path_state(3), 1)
    assert masks_equal(out, gs.from_edges(2, [(0, 1)]))
    idx = gs.removal_index_map(3, 1)
    assert out.has_edge(idx[0], idx[2])


def test_measure_y_single_edge():
    out = gs.measure_y(gs.from_edges(2, [(0, 1)]), 1)
    assert out.qubit_count == 1 and out.edge_count() == 0


def test_measure_y_star_root_gives_complete():
    out = gs.measure_y(gs.star_state(4), 0)
    assert masks_equal(out, gs.complete_state(3))


def test_measure_x_single_edge_degenerate():
    out = gs.measure_x(gs.from_edges(2, [(0, 1)]), 0, 1)
    assert out.qubit_count == 1 and out.edge_count() == 0


def test_measure_x_path_leaf_disconnects():
    # composite rule at a leaf: LC at 1, Y at 0, LC back; the survivors
    # end in a product state (stabilizers Z and X after the update)
    out = gs.measure_x(gs.path_state(3), 0, 1)
    assert out.qubit_count == 2 and out.edge_count() == 0


def test_measure_x_path_middle_keeps_link():
    out = gs.measure_x(gs.path_state(3), 1, 0)
    assert masks_equal(out, gs.from_edges(2, [(0, 1)]))


def test_measure_x_requires_neighbor():
    with pytest.raises(NotANeighborError):
        gs.measure_x(gs.path_state(3), 0, 2)


def test_measure_x_b0_choices_are_lc_equivalent():
    from lcdist import orbit

    state = gs.from_edges(
        5, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 4), (3, 4)]
    )
    picks = [gs.measure_x(state, 1, b0) for b0 in state.neighbors(1)]
    members = set(orbit.enumerate_orbit(picks[0]).members)
    for other in picks[1:]:
        assert other.edges in members


def test_measurements_reject_last_qubit():
    single = gs.measure_y(gs.from_edges(2, [(0, 1)]), 0)
    assert single.qubit_count == 1
    with pytest.raises(StateTooSmallError):
        gs.measure_z(single, 0)
    with pytest.raises(StateTooSmallError):
        gs.measure_y(single, 0)


# -- fusion -------------------------------------------------------------


def test_fuse_absorbs_isolated_qubit():
    # a isolated, b-r an edge: fusing b into a hands r over to a
    state = gs.from_edges(3, [(1, 2)])
    out = gs.fuse(state, 0, 1)
    idx = gs.removal_index_map(3, 1)
    assert out.qubit_count == 2
    assert out.edge_list() == [(idx[0], idx[2])]


def test_fuse_merges_two_chains():
    state = gs.from_edges(4, [(0, 2), (1, 3)])
    out = gs.fuse(state, 0, 1)
    idx = gs.removal_index_map(4, 1)
    assert sorted(out.edge_list()) == sorted(
        [(idx[0], idx[2]), (idx[0], idx[3])]
    )


def test_fuse_isolated_pair_collapses():
    out = gs.fuse(gs.from_edges(2, []), 0, 1)
    assert out.qubit_count == 1 and out.edge_count() == 0


def test_fuse_requires_co_location_when_labeled():
    state = gs.from_edges(3, [(1, 2)], labels={0: 4, 1: 9})
    with pytest.raises(CoLocationViolationError):
        gs.fuse(state, 0, 1)


def test_fuse_allows_same_node_labels():
    state = gs.GraphState(3, gs.from_edges(3, [(1, 2)]).edges, ((0, 4), (1, 4)))
    out = gs.fuse(state, 0, 1)
    assert out.qubit_count == 2


# -- text format --------------------------------------------------------


def test_format_parse_round_trip():
    state = gs.from_edges(4, [(0, 1), (1, 3), (2, 3)], labels={0: 7, 3: 1})
    again = gs.parse_graph(gs.format_graph(state))
    assert masks_equal(again, state)
    assert again.labels == state.labels


def test_parse_graph_ignores_comments_and_blanks():
    text = "# header\nq=3\n\nedge 0 1  # trailing\nedge 1 2\n"
    assert masks_equal(gs.parse_graph(text), gs.path_state(3))


def test_parse_graph_rejects_garbage():
    with pytest.raises(ValueError):
        gs.parse_graph("edge 0 1\n")
    with pytest.raises(ValueError):
        gs.parse_graph("q=3\nvertex 0\n")
    with pytest.raises(ValueError):
        gs.parse_graph("   \n")
