"""Quadratic forms on PG(3,q) and the plane/line/point census of a quadric.

A form is stored by its ten upper-triangular coefficients
``a00 a01 a02 a03 a11 a12 a13 a22 a23 a33`` so that no symmetric bilinear
form is needed and characteristic 2 is handled uniformly.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .gf import FieldElement, FieldSpec, enumerate_elements, format_element, inv, parse_element, tables
from .pg3 import PG3, ProjLine, ProjPlane, ProjPoint, geometry

MONOMIALS = tuple((i, j) for i in range(4) for j in range(i, 4))


class QuadricKind(str, enum.Enum):
    HYPERBOLIC = "hyperbolic"
    ELLIPTIC = "elliptic"
    CONE = "cone"
    PLANE_PAIR = "plane-pair"
    OTHER = "other-degenerate"


class PlaneTag(str, enum.Enum):
    SECANT = "secant"
    TANGENT = "tangent"


@dataclass(frozen=True)
class QuadraticForm:
    coeffs: tuple[FieldElement, ...]

    def __post_init__(self):
        if len(self.coeffs) != len(MONOMIALS):
            raise ValueError("a quadratic form in 4 variables has 10 coefficients")

    @property
    def spec(self) -> FieldSpec:
        return self.coeffs[0].spec

    @classmethod
    def from_indices(cls, spec: FieldSpec, indices) -> QuadraticForm:
        els = enumerate_elements(spec)
        return cls(tuple(els[int(i)] for i in indices))

    @classmethod
    def from_dict(cls, spec: FieldSpec, terms: dict[tuple[int, int], int]) -> QuadraticForm:
        """Build from ``{(i, j): element index}``, e.g. ``{(0, 1): 1, (2, 3): 1}``."""
        idx = [0] * len(MONOMIALS)
        for (i, j), v in terms.items():
            idx[MONOMIALS.index((min(i, j), max(i, j)))] = v
        return cls.from_indices(spec, idx)

    @property
    def indices(self) -> np.ndarray:
        return np.array([c.index for c in self.coeffs], dtype=np.int64)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    @property
    def normalized(self) -> bool:
        lead = next((c for c in self.coeffs if not c.is_zero()), None)
        return lead is not None and lead == self.spec.one

    def normalize(self) -> QuadraticForm:
        lead = next((c for c in self.coeffs if not c.is_zero()), None)
        if lead is None:
            raise ValueError("cannot normalize the zero form")
        s = inv(lead)
        return QuadraticForm(tuple(s * c for c in self.coeffs))

    def __str__(self) -> str:
        return format_form(self)


def format_form(form: QuadraticForm) -> str:
    return ":".join(format_element(c) for c in form.coeffs)


def parse_form(spec: FieldSpec, text: str) -> QuadraticForm:
    parts = text.strip().split(":")
    if len(parts) != len(MONOMIALS):
        raise ValueError(f"expected 10 coefficients, got {len(parts)}")
    return QuadraticForm(tuple(parse_element(spec, s) for s in parts))


@dataclass(frozen=True)
class QuadricClassification:
    point_count: int
    line_count: int
    kind: QuadricKind


@dataclass(frozen=True)
class PlaneKind:
    tag: PlaneTag
    points: frozenset[int]


def standard_hyperbolic(spec: FieldSpec) -> QuadraticForm:
    """x0*x1 + x2*x3."""
    return QuadraticForm.from_dict(spec, {(0, 1): 1, (2, 3): 1})


def evaluate(form: QuadraticForm, x: ProjPoint) -> FieldElement:
    total = form.spec.zero
    for a, (i, j) in zip(form.coeffs, MONOMIALS):
        if not a.is_zero():
            total = total + a * x.coords[i] * x.coords[j]
    return total


def monomial_matrix(spec: FieldSpec, coords: np.ndarray) -> np.ndarray:
    """Rows of the ten monomial values x_i*x_j for each coordinate row."""
    t = tables(spec)
    return np.stack([t.mul[coords[:, i], coords[:, j]] for i, j in MONOMIALS], axis=1)


def values(form: QuadraticForm, geo: PG3 | None = None) -> np.ndarray:
    """Index-coded value of the form at every point of PG(3,q)."""
    geo = geo or geometry(form.spec)
    t = tables(form.spec)
    mono = monomial_matrix(form.spec, geo.point_coords)
    total = np.zeros(geo.n_points, dtype=np.int64)
    for k, a in enumerate(form.indices):
        if a:
            total = t.add[total, t.mul[a, mono[:, k]]]
    return total


def zero_mask(form: QuadraticForm) -> np.ndarray:
    return values(form) == 0


def point_set(form: QuadraticForm) -> frozenset[int]:
    return frozenset(int(i) for i in np.flatnonzero(zero_mask(form)))


def _generator_mask(geo: PG3, mask: np.ndarray) -> np.ndarray:
    return mask[geo.line_points].all(axis=1)


def lines_on(form: QuadraticForm) -> frozenset[int]:
    geo = geometry(form.spec)
    return frozenset(int(i) for i in np.flatnonzero(_generator_mask(geo, zero_mask(form))))


def reguli(form: QuadraticForm) -> tuple[frozenset[int], frozenset[int]]:
    """Split the generators into the class of the first one and the rest.

    The first class is the first generator together with every generator
    disjoint from it; for a hyperbolic quadric these are the two reguli.
    """
    geo = geometry(form.spec)
    gens = sorted(lines_on(form))
    if not gens:
        return frozenset(), frozenset()
    first = set(geo.line_points[gens[0]].tolist())
    same = {g for g in gens if g == gens[0] or not first & set(geo.line_points[g].tolist())}
    return frozenset(same), frozenset(gens) - frozenset(same)


def classify(form: QuadraticForm) -> QuadricClassification:
    """Decide the quadric type from its (point count, line count) signature."""
    if form.is_zero():
        raise ValueError("the zero form defines no quadric")
    q = form.spec.q
    geo = geometry(form.spec)
    mask = zero_mask(form)
    n_pts = int(mask.sum())
    n_lines = int(_generator_mask(geo, mask).sum())
    signatures = {
        ((q + 1) ** 2, 2 * (q + 1)): QuadricKind.HYPERBOLIC,
        (q**2 + 1, 0): QuadricKind.ELLIPTIC,
        (q**2 + q + 1, q + 1): QuadricKind.CONE,
        (2 * q**2 + q + 1, 2 * (q**2 + q + 1) - 1): QuadricKind.PLANE_PAIR,
    }
    return QuadricClassification(n_pts, n_lines, signatures.get((n_pts, n_lines), QuadricKind.OTHER))


def is_hyperbolic(form: QuadraticForm) -> bool:
    return not form.is_zero() and classify(form).kind is QuadricKind.HYPERBOLIC


def _require_hyperbolic(form: QuadraticForm) -> None:
    if not is_hyperbolic(form):
        raise ValueError(f"form {form} is not hyperbolic")


def is_arc(geo: PG3, plane: int, pts: set[int]) -> bool:
    """No three of ``pts`` on a line of the plane."""
    return all(len(pts.intersection(geo.line_points[l].tolist())) <= 2 for l in geo.plane_lines[plane])


def classify_plane(form: QuadraticForm, plane: ProjPlane) -> PlaneKind:
    _require_hyperbolic(form)
    q = form.spec.q
    geo = geometry(form.spec)
    on_q = point_set(form)
    meet = frozenset(int(i) for i in geo.plane_points[plane.index]) & on_q
    if len(meet) == q + 1 and is_arc(geo, plane.index, set(meet)):
        return PlaneKind(PlaneTag.SECANT, meet)
    if len(meet) == 2 * q + 1:
        gens = lines_on(form)
        inside = [l for l in geo.plane_lines[plane.index] if int(l) in gens]
        if len(inside) == 2:
            union = set(geo.line_points[inside[0]].tolist()) | set(geo.line_points[inside[1]].tolist())
            if union == meet:
                return PlaneKind(PlaneTag.TANGENT, meet)
    raise ValueError(f"plane {plane.index} is neither secant nor tangent")


def secant_mask(form: QuadraticForm) -> np.ndarray:
    """Boolean mask over planes: True for planes meeting the quadric in a (q+1)-arc."""
    _require_hyperbolic(form)
    geo = geometry(form.spec)
    q = form.spec.q
    mask = zero_mask(form)
    per_plane = mask[geo.plane_points].sum(axis=1)
    per_line = mask[geo.line_points].sum(axis=1)
    max_on_line = per_line[geo.plane_lines].max(axis=1)
    return (per_plane == q + 1) & (max_on_line <= 2)


def secant_planes(form: QuadraticForm) -> frozenset[int]:
    return frozenset(int(i) for i in np.flatnonzero(secant_mask(form)))


def secant_count_through_point(form: QuadraticForm, x: ProjPoint) -> int:
    geo = geometry(form.spec)
    return int(secant_mask(form)[geo.point_planes[x.index]].sum())


def secant_count_through_line(form: QuadraticForm, line: ProjLine) -> int:
    geo = geometry(form.spec)
    return int(secant_mask(form)[geo.line_planes[line.index]].sum())


def fit_form(spec: FieldSpec, points) -> list[QuadraticForm]:
    """Normalized basis of all forms vanishing on the given point indices."""
    pts = sorted(points)
    if not pts:
        raise ValueError("need at least one point")
    geo = geometry(spec)
    system = monomial_matrix(spec, geo.point_coords[pts])
    return [QuadraticForm.from_indices(spec, linalg.normalize(v, spec)) for v in linalg.nullspace(system, spec)]


def substitute(form: QuadraticForm, matrix) -> QuadraticForm:
    """The form x -> Q(M x) for an index-coded 4x4 matrix M."""
    spec = form.spec
    t = tables(spec)
    m = np.asarray(matrix, dtype=np.int64)
    out = np.zeros((4, 4), dtype=np.int64)  # out[k, l], k <= l
    for a, (i, j) in zip(form.indices, MONOMIALS):
        if not a:
            continue
        for k in range(4):
            for l in range(4):
                term = t.mul[a, t.mul[m[i, k], m[j, l]]]
                lo, hi = min(k, l), max(k, l)
                out[lo, hi] = t.add[out[lo, hi], term]
    return QuadraticForm.from_indices(spec, [out[i, j] for i, j in MONOMIALS])


def all_forms(spec: FieldSpec):
    """Every nonzero normalized form, in coefficient-index order."""
    q = spec.q
    for vec in itertools.product(range(q), repeat=len(MONOMIALS)):
        lead = next((v for v in vec if v), None)
        if lead == 1:
            yield QuadraticForm.from_indices(spec, vec)
