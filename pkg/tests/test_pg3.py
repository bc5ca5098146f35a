import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pg3quad.gf import field_of_order
from pg3quad.pg3 import (
    enumerate_lines, enumerate_planes, enumerate_points, format_vector, geometry, incident,
    line_through, lines_on_plane, meet_planes, parse_vector, plane_span, points_on_plane,
)

from conftest import GEOMETRY_Q
from oracles import spanned_point_sets


@pytest.mark.parametrize("q, n", [(2, 15), (3, 40), (4, 85)])
def test_point_counts(q, n):
    assert len(enumerate_points(field_of_order(q))) == n


@pytest.mark.parametrize("q, n", [(2, 15), (3, 40), (5, 156)])
def test_plane_counts(q, n):
    assert len(enumerate_planes(field_of_order(q))) == n


@pytest.mark.parametrize("q, n", [(2, 35), (3, 130), (4, 357)])
def test_line_counts_against_pair_grouping(q, n):
    spec = field_of_order(q)
    pts, groups = spanned_point_sets(spec)
    assert len(groups) == n
    # the package's point order and line point sets agree with the oracle
    assert [p.coords for p in enumerate_points(spec)] == pts
    ours = {frozenset(pts[i] for i in line.point_indices) for line in enumerate_lines(spec)}
    assert ours == groups


@pytest.mark.parametrize("q", GEOMETRY_Q)
def test_counts_and_regularity(q):
    g = geometry(field_of_order(q))
    assert g.n_points == q**3 + q**2 + q + 1
    assert g.n_lines == (q**2 + 1) * (q**2 + q + 1)
    assert g.line_points.shape == (g.n_lines, q + 1)
    assert g.line_planes.shape == (g.n_lines, q + 1)
    assert (g.incidence.sum(axis=0) == q**2 + q + 1).all()
    assert (g.incidence.sum(axis=1) == q**2 + q + 1).all()
    assert g.plane_lines.shape == (g.n_points, q**2 + q + 1)
    keys = [line.key for line in g.lines]
    assert keys == sorted(keys) and len(set(keys)) == g.n_lines


@pytest.mark.parametrize("q", GEOMETRY_Q)
def test_points_normalized_and_sorted(q):
    spec = field_of_order(q)
    pts = enumerate_points(spec)
    for x in pts:
        lead = next(c for c in x.coords if not c.is_zero())
        assert lead == spec.one
    tuples = [tuple(c.index for c in x.coords) for x in pts]
    assert tuples == sorted(tuples)


def test_incident_examples():
    spec = field_of_order(2)
    g = geometry(spec)
    x = g.point_from_coords([1, 0, 0, 0])
    assert incident(x, g.plane_from_coords([0, 0, 0, 1]))
    assert not incident(x, g.plane_from_coords([1, 0, 0, 0]))
    for plane in g.planes:
        assert sum(incident(p, plane) for p in g.points) == 7
        assert len(points_on_plane(plane)) == 7


@pytest.mark.parametrize("q", [2, 3, 4])
def test_incident_matches_table(q):
    g = geometry(field_of_order(q))
    for x, plane in itertools.product(g.points, g.planes):
        assert incident(x, plane) == g.incidence[x.index, plane.index]


def test_line_through_axes():
    g = geometry(field_of_order(2))
    a = g.point_from_coords([1, 0, 0, 0])
    b = g.point_from_coords([0, 1, 0, 0])
    line = line_through(a, b)
    got = {tuple(c.index for c in g.points[i].coords) for i in line.point_indices}
    assert got == {(1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0)}
    assert line_through(b, a) == line
    with pytest.raises(ValueError):
        line_through(a, a)


def test_planes_through_line_double_count():
    for q in (2, 4):
        g = geometry(field_of_order(q))
        pairs = {(line.index, int(j)) for line in g.lines for j in g.line_planes[line.index]}
        assert all(len(g.planes_through_line(line)) == q + 1 for line in g.lines)
        assert len(pairs) == g.n_lines * (q + 1) == g.n_points * (q**2 + q + 1)
        for line in g.lines[:50]:
            for plane in g.planes_through_line(line):
                assert all(g.incidence[i, plane.index] for i in line.point_indices)


def test_plane_span_example_and_uniqueness():
    g = geometry(field_of_order(3))
    line = line_through(g.point_from_coords([1, 0, 0, 0]), g.point_from_coords([0, 1, 0, 0]))
    x = g.point_from_coords([0, 0, 1, 0])
    plane = plane_span(line, x)
    assert plane == g.plane_from_coords([0, 0, 0, 1])
    assert all(g.incidence[i, plane.index] for i in line.point_indices + (x.index,))
    with pytest.raises(ValueError):
        plane_span(line, g.points[line.point_indices[1]])
    rng = np.random.default_rng(7)
    for li in rng.choice(g.n_lines, 30, replace=False):
        line = g.lines[li]
        for xi in rng.choice(g.n_points, 5):
            if xi in line.point_indices:
                continue
            pencil = [p for p in g.planes_through_line(line) if g.incidence[xi, p.index]]
            assert pencil == [plane_span(line, g.points[xi])]


def test_lines_on_plane_q3_against_grouping():
    spec = field_of_order(3)
    g = geometry(spec)
    for plane in g.planes[:8]:
        members = set(g.plane_points[plane.index].tolist())
        grouped = set()
        for a, b in itertools.combinations(sorted(members), 2):
            grouped.add(line_through(g.points[a], g.points[b]).index)
        assert len(grouped) == 13
        assert {line.index for line in lines_on_plane(plane)} == grouped


def test_meet_planes():
    g = geometry(field_of_order(3))
    line = meet_planes(g.plane_from_coords([1, 0, 0, 0]), g.plane_from_coords([0, 1, 0, 0]))
    for i in line.point_indices:
        assert g.point_coords[i][0] == 0 and g.point_coords[i][1] == 0
    with pytest.raises(ValueError):
        meet_planes(g.planes[0], g.planes[0])


def test_vector_text_form():
    spec = field_of_order(4)
    g = geometry(spec)
    coords = parse_vector(spec, "1:01:0:11")
    plane = g.plane_from_coords(coords)
    assert format_vector(plane.dual_coords) == "1:01:0:11"
    assert str(plane) == "1:01:0:11"
    with pytest.raises(ValueError):
        parse_vector(spec, "0:0:0:0")
    with pytest.raises(ValueError):
        parse_vector(spec, "1:0:0")


@settings(max_examples=60, deadline=None)
@given(q=st.sampled_from([2, 3, 4, 5, 7]), data=st.data())
def test_two_points_one_line_two_planes_one_line(q, data):
    g = geometry(field_of_order(q))
    a, b = data.draw(st.lists(st.integers(0, g.n_points - 1), min_size=2, max_size=2, unique=True))
    common = set(g.point_lines[a].tolist()) & set(g.point_lines[b].tolist())
    assert common == {line_through(g.points[a], g.points[b]).index}
    common = set(g.plane_lines[a].tolist()) & set(g.plane_lines[b].tolist())
    assert common == {meet_planes(g.planes[a], g.planes[b]).index}
    # the meet contains exactly the points on both planes
    both = set(np.flatnonzero(g.incidence[:, a] & g.incidence[:, b]).tolist())
    assert both == set(g.line_points[common.pop()].tolist())


@pytest.mark.parametrize("q", [2, 3, 4])
def test_duality(q):
    # point i and plane i share a coordinate vector, so incidence is symmetric
    g = geometry(field_of_order(q))
    assert (g.incidence == g.incidence.T).all()
