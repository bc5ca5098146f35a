import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pg3quad import linalg
from pg3quad.gf import field_of_order, tables
from pg3quad.pg3 import geometry
from pg3quad.quadric import (
    MONOMIALS, PlaneTag, QuadraticForm, QuadricKind, all_forms, classify, classify_plane, evaluate,
    fit_form, format_form, lines_on, monomial_matrix, parse_form, point_set, reguli, secant_count_through_line,
    secant_count_through_point, secant_mask, standard_hyperbolic, substitute, zero_mask,
)

from conftest import GEOMETRY_Q
from oracles import count_solutions


def random_invertible(spec, rng):
    while True:
        m = rng.integers(0, spec.q, size=(4, 4))
        if linalg.rank(m, spec) == 4:
            return m


def apply(spec, m, coords):
    t = tables(spec)
    out = np.zeros(4, dtype=np.int64)
    for i in range(4):
        acc = 0
        for k in range(4):
            acc = t.add[acc, t.mul[m[i, k], coords[k]]]
        out[i] = acc
    return out


@pytest.mark.parametrize("q, n", [(2, 9), (3, 16), (4, 25), (5, 36)])
def test_standard_hyperbolic_points(q, n):
    assert len(point_set(standard_hyperbolic(field_of_order(q)))) == n


@pytest.mark.parametrize("q", GEOMETRY_Q)
def test_hyperbolic_census(q):
    form = standard_hyperbolic(field_of_order(q))
    c = classify(form)
    assert (c.point_count, c.line_count, c.kind) == ((q + 1) ** 2, 2 * (q + 1), QuadricKind.HYPERBOLIC)
    secant = secant_mask(form)
    assert secant.sum() == q**3 - q
    assert (~secant).sum() == (q + 1) ** 2


def test_evaluate_examples():
    spec = field_of_order(3)
    g = geometry(spec)
    form = standard_hyperbolic(spec)
    assert evaluate(form, g.point_from_coords([1, 0, 0, 0])) == spec.zero
    assert evaluate(form, g.point_from_coords([1, 1, 0, 0])) == spec.one


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_evaluate_matches_vectorised_and_homogeneous(q):
    spec = field_of_order(q)
    g = geometry(spec)
    form = QuadraticForm.from_indices(spec, [(3 * k + 1) % q for k in range(10)])
    mask = zero_mask(form)
    for x in g.points:
        v = evaluate(form, x)
        assert v.is_zero() == mask[x.index]
        for lam in range(1, q):
            scaled = tuple(spec.element(lam) * c for c in x.coords)
            terms = (a * scaled[i] * scaled[j] for a, (i, j) in zip(form.coeffs, MONOMIALS))
            w = sum(terms, spec.zero)
            assert w.is_zero() == v.is_zero()


def test_form_text():
    spec = field_of_order(2)
    assert format_form(standard_hyperbolic(spec)) == "0:1:0:0:0:0:0:0:1:0"
    form = standard_hyperbolic(field_of_order(9))
    assert parse_form(form.spec, format_form(form)) == form
    with pytest.raises(ValueError):
        parse_form(spec, "0:1")


@pytest.mark.parametrize("q, n", [(2, 6), (3, 8), (7, 16)])
def test_generators(q, n):
    spec = field_of_order(q)
    form = standard_hyperbolic(spec)
    gens = lines_on(form)
    assert len(gens) == n
    g = geometry(spec)
    degree = Counter(int(x) for l in gens for x in g.line_points[l])
    assert set(degree) == point_set(form)
    assert set(degree.values()) == {2}


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_reguli(q):
    spec = field_of_order(q)
    g = geometry(spec)
    form = standard_hyperbolic(spec)
    a, b = reguli(form)
    assert len(a) == len(b) == q + 1
    for reg in (a, b):
        for l, m in itertools.combinations(reg, 2):
            assert not set(g.line_points[l].tolist()) & set(g.line_points[m].tolist())
        cover = Counter(int(x) for l in reg for x in g.line_points[l])
        assert set(cover) == point_set(form) and set(cover.values()) == {1}


def test_classify_degenerate_q2():
    spec = field_of_order(2)
    pair = QuadraticForm.from_dict(spec, {(0, 1): 1})
    assert classify(pair).point_count == 2 * 7 - 3
    assert classify(pair).kind is QuadricKind.PLANE_PAIR
    square = QuadraticForm.from_dict(spec, {(0, 0): 1})
    assert classify(square).point_count == 7
    assert classify(square).kind is QuadricKind.OTHER
    with pytest.raises(ValueError):
        classify(QuadraticForm.from_indices(spec, [0] * 10))


def test_census_of_all_forms_q2():
    kinds = Counter(classify(f).kind for f in all_forms(field_of_order(2)))
    assert sum(kinds.values()) == 1023
    # |PGL(4,2)| / |PGO+(4,2)| = 20160 / 72
    assert kinds[QuadricKind.HYPERBOLIC] == 280


@pytest.mark.parametrize("q, secant, tangent", [(2, 6, 9), (3, 24, 16)])
def test_classify_plane(q, secant, tangent):
    spec = field_of_order(q)
    g = geometry(spec)
    form = standard_hyperbolic(spec)
    kinds = [classify_plane(form, p) for p in g.planes]
    tags = Counter(k.tag for k in kinds)
    assert tags == {PlaneTag.SECANT: secant, PlaneTag.TANGENT: tangent}
    assert [k.tag is PlaneTag.SECANT for k in kinds] == secant_mask(form).tolist()
    gens = lines_on(form)
    for p, k in zip(g.planes, kinds):
        if k.tag is PlaneTag.TANGENT:
            two = [l for l in g.plane_lines[p.index] if int(l) in gens]
            meet = set(g.line_points[two[0]].tolist()) & set(g.line_points[two[1]].tolist())
            assert len(meet) == 1 and meet <= k.points


def test_classify_plane_needs_hyperbolic():
    spec = field_of_order(2)
    with pytest.raises(ValueError):
        classify_plane(QuadraticForm.from_dict(spec, {(0, 0): 1}), geometry(spec).planes[0])


def test_secant_count_through_point_q3():
    spec = field_of_order(3)
    g = geometry(spec)
    form = standard_hyperbolic(spec)
    on_q = point_set(form)
    counts = [secant_count_through_point(form, x) for x in g.points]
    assert all(c == (6 if x.index in on_q else 9) for x, c in zip(g.points, counts))
    assert sum(counts) == 16 * 6 + 24 * 9 == 24 * 13


def test_secant_count_through_line_q3():
    spec = field_of_order(3)
    g = geometry(spec)
    form = standard_hyperbolic(spec)
    on_q = point_set(form)
    gens = lines_on(form)
    by_meet = {}
    for line in g.lines:
        meet = len(on_q & set(line.point_indices))
        if line.index in gens:
            meet = "generator"
        by_meet.setdefault(meet, set()).add(secant_count_through_line(form, line))
    assert by_meet == {"generator": {0}, 2: {2}, 0: {4}, 1: {3}}


def test_line_spectrum_invariant_under_coordinate_permutation():
    spec = field_of_order(3)
    g = geometry(spec)
    base = standard_hyperbolic(spec)
    spectrum = Counter(secant_mask(base)[g.line_planes].sum(axis=1).tolist())
    for perm in itertools.permutations(range(4)):
        m = np.eye(4, dtype=np.int64)[list(perm)]
        form = substitute(base, m)
        assert Counter(secant_mask(form)[g.line_planes].sum(axis=1).tolist()) == spectrum


def test_fit_form_recovers_standard():
    for q in (2, 3, 4):
        spec = field_of_order(q)
        form = standard_hyperbolic(spec)
        assert fit_form(spec, point_set(form)) == [form]


def test_fit_form_all_points_q2():
    spec = field_of_order(2)
    g = geometry(spec)
    assert not any(zero_mask(f).all() for f in all_forms(spec))
    assert fit_form(spec, range(g.n_points)) == []


def test_fit_form_five_points_q3():
    spec = field_of_order(3)
    g = geometry(spec)
    coords = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 1, 1]]
    pts = [g.point_from_coords(c).index for c in coords]
    rows = monomial_matrix(spec, np.array(coords))
    assert count_solutions(rows, 3, tables(spec)) == 3**5
    basis = fit_form(spec, pts)
    assert len(basis) == 5
    for f in basis:
        assert f.normalized
        assert all(zero_mask(f)[pts])


def test_fit_form_grid_q2_dimension_one():
    spec = field_of_order(2)
    form = standard_hyperbolic(spec)
    pts = point_set(form)
    vanishing = [f for f in all_forms(spec) if all(zero_mask(f)[sorted(pts)])]
    assert vanishing == [form]
    assert len(fit_form(spec, pts)) == 1


@settings(max_examples=25, deadline=None)
@given(q=st.sampled_from([2, 3, 4, 5]), seed=st.integers(0, 2**32 - 1))
def test_substitution_zero_set_is_preimage(q, seed):
    spec = field_of_order(q)
    g = geometry(spec)
    rng = np.random.default_rng(seed)
    m = random_invertible(spec, rng)
    base = standard_hyperbolic(spec)
    form = substitute(base, m)
    target = point_set(base)
    preimage = {x for x in range(g.n_points) if g.lookup(apply(spec, m, g.point_coords[x])) in target}
    assert point_set(form) == preimage
    assert classify(form).kind is QuadricKind.HYPERBOLIC


@settings(max_examples=25, deadline=None)
@given(q=st.sampled_from([2, 3, 4, 5]), data=st.data())
def test_fit_form_solutions_vanish(q, data):
    spec = field_of_order(q)
    g = geometry(spec)
    pts = data.draw(st.sets(st.integers(0, g.n_points - 1), min_size=1, max_size=12))
    for f in fit_form(spec, pts):
        assert f.normalized
        assert all(zero_mask(f)[sorted(pts)])


def test_scalar_multiple_same_zero_set():
    spec = field_of_order(5)
    form = standard_hyperbolic(spec)
    scaled = QuadraticForm(tuple(spec.element(3) * c for c in form.coeffs))
    assert not scaled.normalized and scaled.normalize() == form
    assert point_set(scaled) == point_set(form)
