"""Points, lines and planes of PG(3,q) with precomputed incidence tables.

Points and planes are both enumerated as normalized 4-vectors (first
nonzero coordinate 1) in lexicographic order under the field element
order, so point ``i`` and plane ``i`` carry the same coordinate vector.
A line is the set of its q+1 points; its key is the pair of its two
smallest point indices, and lines are numbered in key order.

Index order is part of the file-format contract.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .gf import FieldElement, FieldSpec, enumerate_elements, format_element, parse_element, tables

LINE_CHUNK = 2048


@dataclass(frozen=True)
class ProjPoint:
    coords: tuple[FieldElement, ...]
    index: int

    def __str__(self) -> str:
        return format_vector(self.coords)


@dataclass(frozen=True)
class ProjPlane:
    dual_coords: tuple[FieldElement, ...]
    index: int

    def __str__(self) -> str:
        return format_vector(self.dual_coords)


@dataclass(frozen=True)
class ProjLine:
    point_indices: tuple[int, ...]
    index: int
    key: tuple[int, int] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "key", (self.point_indices[0], self.point_indices[1]))

    def __str__(self) -> str:
        return f"{self.key[0]}:{self.key[1]}"


def format_vector(coords) -> str:
    return ":".join(format_element(c) for c in coords)


def parse_vector(spec: FieldSpec, text: str) -> tuple[FieldElement, ...]:
    parts = text.strip().split(":")
    if len(parts) != 4:
        raise ValueError(f"expected 4 colon-separated coordinates, got {len(parts)}")
    coords = tuple(parse_element(spec, s) for s in parts)
    if all(c.is_zero() for c in coords):
        raise ValueError("the zero vector is not a projective point")
    return coords


class PG3:
    """Incidence tables for PG(3,q); build through :func:`geometry`.

    Array attributes hold element indices (coordinates) or point/line/plane
    indices and are read-only.
    """

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        q = self.q = spec.q
        t = tables(spec)
        self.n_points = q**3 + q**2 + q + 1
        self.plane_size = q**2 + q + 1

        allvecs = np.array(list(itertools.product(range(q), repeat=4)), dtype=np.int64)
        lead = allvecs[np.arange(len(allvecs)), np.argmax(allvecs != 0, axis=1)]
        coords = allvecs[lead == 1]
        assert len(coords) == self.n_points
        self.point_coords = coords
        self.plane_coords = coords
        self._weights = q ** np.arange(3, -1, -1, dtype=np.int64)
        self.code_to_point = np.full(q**4, -1, dtype=np.int64)
        self.code_to_point[coords @ self._weights] = np.arange(self.n_points)

        inc = np.empty((self.n_points, self.n_points), dtype=bool)
        for start in range(0, self.n_points, LINE_CHUNK):
            blk = coords[start:start + LINE_CHUNK]
            s = t.mul[blk[:, None, 0], coords[None, :, 0]]
            for i in range(1, 4):
                s = t.add[s, t.mul[blk[:, None, i], coords[None, :, i]]]
            inc[start:start + LINE_CHUNK] = s == 0
        self.incidence = inc  # [point, plane]

        self.line_points = self._build_lines()
        self.n_lines = len(self.line_points)
        self.line_planes = self._build_line_planes()
        self.plane_lines = _invert(self.line_planes, self.n_points)
        self.point_lines = _invert(self.line_points, self.n_points)
        self.plane_points = np.array([np.flatnonzero(inc[:, j]) for j in range(self.n_points)])
        self.point_planes = np.array([np.flatnonzero(inc[i]) for i in range(self.n_points)])
        self.key_to_line = {(int(a), int(b)): i for i, (a, b) in enumerate(self.line_points[:, :2])}
        for arr in (self.point_coords, self.code_to_point, self.incidence, self.line_points,
                    self.line_planes, self.plane_lines, self.point_lines, self.plane_points,
                    self.point_planes):
            arr.setflags(write=False)

        els = enumerate_elements(spec)
        self.points = [ProjPoint(tuple(els[c] for c in row), i) for i, row in enumerate(coords)]
        self.planes = [ProjPlane(tuple(els[c] for c in row), i) for i, row in enumerate(coords)]
        self.lines = [ProjLine(tuple(int(x) for x in row), i) for i, row in enumerate(self.line_points)]

    def lookup(self, vecs) -> np.ndarray | int:
        """Point indices of nonzero coordinate vectors (normalizing first)."""
        v = linalg.normalize(vecs, self.spec)
        idx = self.code_to_point[v @ self._weights]
        return int(idx) if np.ndim(idx) == 0 else idx

    def _span_points(self, a: int, b: int) -> np.ndarray:
        t = tables(self.spec)
        pa, pb = self.point_coords[a], self.point_coords[b]
        lam = np.arange(self.q)
        vecs = t.add[pa[None, :], t.mul[lam[:, None], pb[None, :]]]
        vecs = np.vstack([vecs, pb[None, :]])
        return np.sort(self.lookup(vecs))

    def _build_lines(self) -> np.ndarray:
        n = self.n_points
        covered = np.zeros((n, n), dtype=bool)
        lines = []
        for a in range(n):
            row = covered[a]
            b = a + 1
            while True:
                free = np.flatnonzero(~row[b:])
                if free.size == 0:
                    break
                b = b + int(free[0])
                pts = self._span_points(a, b)
                lines.append(pts)
                covered[np.ix_(pts, pts)] = True
        return np.array(lines, dtype=np.int64)

    def _build_line_planes(self) -> np.ndarray:
        out = np.empty((len(self.line_points), self.q + 1), dtype=np.int64)
        for start in range(0, len(self.line_points), LINE_CHUNK):
            keys = self.line_points[start:start + LINE_CHUNK, :2]
            both = self.incidence[keys[:, 0]] & self.incidence[keys[:, 1]]
            out[start:start + LINE_CHUNK] = np.nonzero(both)[1].reshape(len(keys), self.q + 1)
        return out

    # -- queries -----------------------------------------------------------

    def point_from_coords(self, coords) -> ProjPoint:
        vec = np.array([self.spec(c).index for c in coords], dtype=np.int64)
        return self.points[self.lookup(vec)]

    def plane_from_coords(self, dual_coords) -> ProjPlane:
        vec = np.array([self.spec(c).index for c in dual_coords], dtype=np.int64)
        return self.planes[self.lookup(vec)]

    def incident(self, x: ProjPoint, plane: ProjPlane) -> bool:
        total = self.spec.zero
        for a, u in zip(x.coords, plane.dual_coords):
            total = total + a * u
        return total.is_zero()

    def line_through(self, x1: ProjPoint, x2: ProjPoint) -> ProjLine:
        if x1.index == x2.index:
            raise ValueError("a line needs two distinct points")
        pts = self._span_points(x1.index, x2.index)
        return self.lines[self.key_to_line[(int(pts[0]), int(pts[1]))]]

    def line_by_key(self, a: int, b: int) -> ProjLine:
        return self.lines[self.key_to_line[(a, b)]]

    def planes_through_line(self, line: ProjLine) -> list[ProjPlane]:
        return [self.planes[j] for j in self.line_planes[line.index]]

    def plane_span(self, line: ProjLine, x: ProjPoint) -> ProjPlane:
        if x.index in line.point_indices:
            raise ValueError("point lies on the line")
        a, b = line.key
        rows = self.point_coords[[a, b, x.index]]
        (dual,) = linalg.nullspace(rows, self.spec)
        return self.planes[self.lookup(dual)]

    def points_on_plane(self, plane: ProjPlane) -> list[ProjPoint]:
        return [self.points[i] for i in self.plane_points[plane.index]]

    def lines_on_plane(self, plane: ProjPlane) -> list[ProjLine]:
        return [self.lines[i] for i in self.plane_lines[plane.index]]

    def meet_planes(self, p1: ProjPlane, p2: ProjPlane) -> ProjLine:
        if p1.index == p2.index:
            raise ValueError("identical planes do not meet in a line")
        rows = self.plane_coords[[p1.index, p2.index]]
        u, v = linalg.nullspace(rows, self.spec)
        return self.line_through(self.points[self.lookup(u)], self.points[self.lookup(v)])

    def lines_through_point(self, x: ProjPoint) -> list[ProjLine]:
        return [self.lines[i] for i in self.point_lines[x.index]]


def _invert(table: np.ndarray, n: int) -> np.ndarray:
    """Turn an (m, k) membership table into the (n, m*k/n) reverse table, rows ascending."""
    flat = table.ravel()
    order = np.argsort(flat, kind="stable")
    return (order // table.shape[1]).reshape(n, -1)


@functools.cache
def geometry(spec: FieldSpec) -> PG3:
    return PG3(spec)


def _geo(obj) -> PG3:
    coords = obj.coords if isinstance(obj, ProjPoint) else obj.dual_coords
    return geometry(coords[0].spec)


def enumerate_points(spec: FieldSpec) -> list[ProjPoint]:
    return geometry(spec).points


def enumerate_planes(spec: FieldSpec) -> list[ProjPlane]:
    return geometry(spec).planes


def enumerate_lines(spec: FieldSpec) -> list[ProjLine]:
    return geometry(spec).lines


def incident(x: ProjPoint, plane: ProjPlane) -> bool:
    return _geo(x).incident(x, plane)


def line_through(x1: ProjPoint, x2: ProjPoint) -> ProjLine:
    return _geo(x1).line_through(x1, x2)


def plane_span(line: ProjLine, x: ProjPoint) -> ProjPlane:
    return _geo(x).plane_span(line, x)


def meet_planes(p1: ProjPlane, p2: ProjPlane) -> ProjLine:
    return _geo(p1).meet_planes(p1, p2)


def points_on_plane(plane: ProjPlane) -> list[ProjPoint]:
    return _geo(plane).points_on_plane(plane)


def lines_on_plane(plane: ProjPlane) -> list[ProjLine]:
    return _geo(plane).lines_on_plane(plane)
