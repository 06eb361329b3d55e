import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from verdant.exceptions import ValidationError
from verdant.geometry import Polyline, total_length
from verdant.network import RoadNetwork, clip_network, place_sites

from conftest import sample_inside_length, square


def single(length, lid="L"):
    return RoadNetwork.from_polylines([Polyline([(0, 0), (length, 0)], lid)])


def test_250m_link():
    sites = place_sites(single(250.0), 100.0)
    assert [s.offset for s in sites] == [0.0, 100.0, 200.0, 250.0]
    assert [s.is_node for s in sites] == [True, False, False, True]


def test_50m_link():
    sites = place_sites(single(50.0), 100.0)
    assert [s.offset for s in sites] == [0.0, 50.0]


def test_exact_multiple_has_no_duplicate_end():
    sites = place_sites(single(200.0), 100.0)
    assert [s.offset for s in sites] == [0.0, 100.0, 200.0]


def test_t_junction_shares_node():
    net = RoadNetwork.from_polylines([Polyline([(0, 0), (100, 0)], "a"),
                                      Polyline([(100, 0), (100, 100)], "b")])
    sites = place_sites(net, 100.0)
    assert len(sites) == 3
    assert sum(1 for s in sites if tuple(s.position) == (100.0, 0.0)) == 1


def test_every_node_has_one_site():
    lines = [Polyline([(0, 0), (130, 0)], "a"), Polyline([(130, 0), (130, 75)], "b"),
             Polyline([(130, 0), (300, 40)], "c"), Polyline([(300, 40), (0, 0)], "d")]
    net = RoadNetwork.from_polylines(lines)
    sites = place_sites(net, 50.0)
    node_sites = [s for s in sites if s.is_node]
    assert len(node_sites) == len(net.nodes)
    assert len({tuple(s.position) for s in node_sites}) == len(net.nodes)


def test_direction_independent():
    fwd = place_sites(RoadNetwork.from_polylines([Polyline([(0, 0), (250, 0)], "L")]))
    rev = place_sites(RoadNetwork.from_polylines([Polyline([(250, 0), (0, 0)], "L")]))
    assert sorted(tuple(s.position) for s in fwd) == sorted(tuple(s.position) for s in rev)


def test_empty_network():
    assert place_sites(RoadNetwork({}, {}), 100.0) == []


def test_network_validation():
    with pytest.raises(ValidationError):
        RoadNetwork({"a": (0, 0), "b": (1, 0)}, {"L": ("a", "b", [(0, 0), (2, 0)])})
    with pytest.raises(ValidationError):
        RoadNetwork({"a": (0, 0)}, {"L": ("a", "zz", [(0, 0), (2, 0)])})
    with pytest.raises(ValidationError):
        place_sites(single(10.0), 0.0)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.floats(-200, 200), st.floats(-200, 200)), min_size=2, max_size=6),
       st.floats(5.0, 120.0))
def test_spacing_invariants(pts, spacing):
    pts = [p for i, p in enumerate(pts) if i == 0 or np.hypot(p[0] - pts[i - 1][0], p[1] - pts[i - 1][1]) > 1e-3]
    if len(pts) < 2 or np.hypot(pts[0][0] - pts[-1][0], pts[0][1] - pts[-1][1]) < 1e-3:
        return
    net = RoadNetwork.from_polylines([Polyline(pts, "L")])
    sites = place_sites(net, spacing)
    link = net.links["L"]
    L = link.geometry.length
    # placement runs from the end with the smaller node id
    forward = str(link.a) <= str(link.b)
    offs = sorted(s.offset if forward else L - s.offset for s in sites)
    gaps = np.diff(offs)
    assert offs[0] == 0.0 and offs[-1] == pytest.approx(L)
    assert np.allclose(gaps[:-1], spacing)
    assert 0 < gaps[-1] <= spacing + 1e-9
    for s in sites:
        assert np.allclose(net.links["L"].geometry.point_at(s.offset), s.position, atol=1e-6)
    xy = np.array([s.position for s in sites])
    d = np.hypot(*(xy[:, None] - xy[None]).transpose(2, 0, 1))
    np.fill_diagonal(d, np.inf)
    assert d.min() > 1e-6


def test_clip_network_examples():
    net = RoadNetwork.from_polylines([Polyline([(1, 1), (5, 1)], "a"), Polyline([(5, 1), (5, 8)], "b")])
    inside = clip_network(net, square(0, 0, 10, 10))
    assert [p.length for p in inside] == [4.0, 7.0]
    assert clip_network(net, square(20, 20, 30, 30)) == []
    zone = square(2, 0, 4, 2)
    cross = clip_network(net, zone)
    assert len(cross) == 1
    assert cross[0].length == pytest.approx(sample_inside_length(zone, net.links["a"].geometry, 1e-4), abs=1e-3)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_clip_length_invariant_under_subdivision(t, x0, y0, x1, y1):
    a, b = np.array([x0 * 5, y0 * 5]), np.array([x1 * 5 + 20, y1 * 5 + 7])
    m = a + t * (b - a)
    whole = RoadNetwork.from_polylines([Polyline([a, b], "L")])
    split = RoadNetwork.from_polylines([Polyline([a, m], "L1"), Polyline([m, b], "L2")])
    zone = square(0, 0, 12, 12)
    assert total_length(clip_network(split, zone)) == pytest.approx(
        total_length(clip_network(whole, zone)), abs=1e-9)
