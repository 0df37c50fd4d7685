"""Fiber network generation, link/route success probabilities, routing."""

import math

import numpy as np
import pytest

from lcdist import network as nw
from lcdist.errors import (
    DuplicateEdgeError,
    InvalidLengthError,
    InvalidParamsError,
    MappingInvalidError,
    UnreachableError,
)


def triangle_network(noise=nw.DEFAULT_NOISE):
    # direct 0-1 link is long; the detour through 2 wins
    return nw.PhysicalNetwork(3, ((0, 1, 3.0), (0, 2, 1.0), (1, 2, 1.0)), noise)


# -- noise parameters -----------------------------------------------------


def test_default_noise_values():
    n = nw.DEFAULT_NOISE
    assert (n.eta1, n.alpha, n.epsilon_d, n.p_bsm, n.f_dc) == (
        0.9, 0.2, 0.1, 0.5, 1000.0,
    )
    assert (n.epsilon_1g, n.epsilon_2g, n.p_y_msr) == (0.01, 0.05, 0.99)
    assert n.detection == "endpoint"
    assert n.p_cz == 0.95 and n.p_1g == 0.99


def test_attenuation_length():
    assert 21.714 < nw.DEFAULT_NOISE.l_att < 21.715
    assert nw.DEFAULT_NOISE.l_att == pytest.approx(
        10.0 / (0.2 * math.log(10.0)), rel=1e-15
    )


def test_noise_validation():
    with pytest.raises(InvalidParamsError):
        nw.NoiseParams(eta1=1.2)
    with pytest.raises(InvalidParamsError):
        nw.NoiseParams(f_dc=0.5)
    with pytest.raises(InvalidParamsError):
        nw.NoiseParams(alpha=0.0)
    with pytest.raises(InvalidParamsError):
        nw.NoiseParams(detection="both")


# -- link success ---------------------------------------------------------


def test_link_success_frozen_values():
    # evaluation parameters over 1 km, both detector placements
    mid = nw.NoiseParams(detection="midpoint")
    end = nw.NoiseParams(detection="endpoint")
    assert nw.link_success(mid, 1.0) == pytest.approx(
        0.2985870847241606, rel=1e-12
    )
    assert nw.link_success(end, 1.0) == pytest.approx(
        0.31265906049396125, rel=1e-12
    )


def test_link_success_zero_length_limit():
    # both placements meet at [eta1(1-eps_d)]^2 p_bsm (1-1/f_dc)^2
    limit = (0.9 * 0.9) ** 2 * 0.5 * (1.0 - 1e-3) ** 2
    for detection in ("midpoint", "endpoint"):
        noise = nw.NoiseParams(detection=detection)
        assert nw.link_success(noise, 1e-12) == pytest.approx(limit, rel=1e-9)


def test_link_success_monotone_decreasing():
    noise = nw.DEFAULT_NOISE
    values = [nw.link_success(noise, km) for km in (0.5, 1.0, 2.0, 5.0, 20.0)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert all(0.0 < v < 1.0 for v in values)


def test_link_success_rejects_nonpositive_length():
    with pytest.raises(InvalidLengthError):
        nw.link_success(nw.DEFAULT_NOISE, 0.0)
    with pytest.raises(InvalidLengthError):
        nw.link_success(nw.DEFAULT_NOISE, -1.0)


def test_midpoint_attenuates_twice():
    mid = nw.NoiseParams(detection="midpoint")
    end = nw.NoiseParams(detection="endpoint")
    km = 2.7
    eta2 = math.exp(-km / mid.l_att)
    assert nw.link_success(mid, km) == pytest.approx(
        nw.link_success(end, km) * eta2, rel=1e-12
    )


# -- topology generation ----------------------------------------------------


def test_generate_er_is_connected_with_sane_lengths():
    net = nw.generate("er", 12, {"p": 0.3}, seed=7)
    assert net.is_connected()
    lo, hi = nw.LINK_LENGTH_KM
    assert all(lo <= length <= hi for _, _, length in net.links)


def test_generate_ba_link_count():
    net = nw.generate("ba", 12, {"m": 2}, seed=7)
    assert len(net.links) == 20  # m(n - m) links from an empty core
    assert net.is_connected()


def test_generate_ws_link_count():
    net = nw.generate("ws", 12, {"k": 4, "rewire": 0.1}, seed=7)
    assert len(net.links) == 24  # nk/2, rewiring preserves the count
    assert net.is_connected()


def test_generate_is_deterministic():
    a = nw.generate("er", 12, {"p": 0.3}, seed=123)
    b = nw.generate("er", 12, {"p": 0.3}, seed=123)
    assert a.links == b.links
    c = nw.generate("er", 12, {"p": 0.3}, seed=124)
    assert a.links != c.links


def test_generate_rejects_bad_params():
    with pytest.raises(InvalidParamsError):
        nw.generate("er", 12, {"p": 0.0})
    with pytest.raises(InvalidParamsError):
        nw.generate("ba", 12, {"m": 12})
    with pytest.raises(InvalidParamsError):
        nw.generate("ws", 12, {"k": 3})
    with pytest.raises(InvalidParamsError):
        nw.generate("grid", 12)
    with pytest.raises(InvalidParamsError):
        nw.generate("er", 12, {"q": 0.3})
    with pytest.raises(InvalidParamsError):
        nw.generate("er", 1)


def test_network_validation():
    with pytest.raises(DuplicateEdgeError):
        nw.PhysicalNetwork(3, ((0, 1, 1.0), (1, 0, 1.0)))
    with pytest.raises(InvalidLengthError):
        nw.PhysicalNetwork(3, ((0, 1, 0.0),))
    with pytest.raises(InvalidParamsError):
        nw.PhysicalNetwork(3, ((0, 3, 1.0),))


# -- routing ----------------------------------------------------------------


def test_best_path_takes_shorter_detour():
    net = triangle_network()
    path, p = nw.best_path(net, 0, 1)
    assert path == (0, 2, 1)
    assert p == pytest.approx(nw.link_success(net.noise, 2.0), rel=1e-12)


def test_best_path_adjacent_nodes():
    net = nw.PhysicalNetwork(2, ((0, 1, 0.8),))
    path, p = nw.best_path(net, 0, 1)
    assert path == (0, 1)
    assert p == pytest.approx(nw.link_success(net.noise, 0.8), rel=1e-12)


def test_best_path_tie_breaks_lexicographically():
    net = nw.PhysicalNetwork(
        4, ((0, 1, 1.0), (1, 3, 1.0), (0, 2, 1.0), (2, 3, 1.0))
    )
    path, _ = nw.best_path(net, 0, 3)
    assert path == (0, 1, 3)


def test_best_path_unreachable():
    net = nw.parse_network("nodes 4\nlink 0 1 1.0\nlink 1 2 1.0\n")
    with pytest.raises(UnreachableError):
        nw.best_path(net, 0, 3)


def test_best_path_rejects_degenerate_queries():
    net = triangle_network()
    with pytest.raises(InvalidParamsError):
        nw.best_path(net, 1, 1)
    with pytest.raises(MappingInvalidError):
        nw.best_path(net, 0, 9)


def test_bsm_per_hop_charges_extra_stations_only():
    # the baseline Bell measurement is already inside link_success, so a
    # two-hop route pays nothing extra; each hop past two adds a factor
    net = triangle_network()
    _, p_plain = nw.best_path(net, 0, 1, bsm_per_hop=False)
    path, p_hop = nw.best_path(net, 0, 1, bsm_per_hop=True)
    assert path == (0, 2, 1)
    assert p_hop == pytest.approx(p_plain, rel=1e-12)
    chain = nw.PhysicalNetwork(4, ((0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)))
    _, p3 = nw.best_path(chain, 0, 3, bsm_per_hop=True)
    assert p3 == pytest.approx(
        nw.link_success(chain.noise, 3.0) * chain.noise.p_bsm, rel=1e-12
    )
    direct = nw.PhysicalNetwork(2, ((0, 1, 2.0),))
    _, p_direct = nw.best_path(direct, 0, 1, bsm_per_hop=True)
    assert p_direct == pytest.approx(
        nw.link_success(direct.noise, 2.0), rel=1e-12
    )


def test_bsm_per_hop_can_change_the_route():
    # long direct link vs a four-hop chain of short ones
    net = nw.PhysicalNetwork(
        5,
        (
            (0, 4, 3.0),
            (0, 1, 0.7), (1, 2, 0.7), (2, 3, 0.7), (3, 4, 0.7),
        ),
    )
    path_plain, _ = nw.best_path(net, 0, 4, bsm_per_hop=False)
    path_hop, _ = nw.best_path(net, 0, 4, bsm_per_hop=True)
    assert path_plain == (0, 1, 2, 3, 4)
    assert path_hop == (0, 4)


# -- qubit-to-node mapping ---------------------------------------------------


def test_validate_mapping_errors():
    with pytest.raises(MappingInvalidError):
        nw.validate_mapping({0: 0, 2: 1}, 2, 3)
    with pytest.raises(MappingInvalidError):
        nw.validate_mapping({0: 1, 1: 1}, 2, 3)
    with pytest.raises(MappingInvalidError):
        nw.validate_mapping({0: 0, 1: 3}, 2, 3)
    nw.validate_mapping({0: 2, 1: 0}, 2, 3)


def test_pair_probabilities_adjacent():
    net = nw.PhysicalNetwork(2, ((0, 1, 1.0),))
    probs = nw.pair_probabilities(net, {0: 0, 1: 1})
    assert probs[0, 1] == probs[1, 0]
    assert probs[0, 1] == pytest.approx(
        nw.link_success(net.noise, 1.0), rel=1e-12
    )
    assert np.isnan(probs[0, 0]) and np.isnan(probs[1, 1])


def test_pair_probabilities_permutation_equivariance():
    net = nw.generate("er", 12, {"p": 0.3}, seed=7)
    mapping = {0: 3, 1: 7, 2: 0, 3: 11}
    base = nw.pair_probabilities(net, mapping)
    perm = [2, 0, 3, 1]
    moved = nw.pair_probabilities(net, {i: mapping[perm[i]] for i in range(4)})
    for i in range(4):
        for j in range(4):
            if i != j:
                assert moved[i, j] == base[perm[i], perm[j]]


# -- text format --------------------------------------------------------------


def test_network_format_parse_round_trip():
    net = nw.generate("ws", 8, {"k": 4, "rewire": 0.2}, seed=5)
    again = nw.parse_network(nw.format_network(net))
    assert again.node_count == net.node_count
    assert again.links == net.links


def test_parse_network_rejects_garbage():
    with pytest.raises(ValueError):
        nw.parse_network("link 0 1 1.0\n")
    with pytest.raises(ValueError):
        nw.parse_network("nodes 3\nedge 0 1 1.0\n")
    with pytest.raises(ValueError):
        nw.parse_network("# nothing\n")


def test_with_noise_swaps_model_only():
    net = triangle_network()
    mid = nw.with_noise(net, nw.NoiseParams(detection="midpoint"))
    assert mid.links == net.links
    assert mid.noise.detection == "midpoint"
