"""Polygonal mesh container and per-element geometry.

Vertices are stored as an (n, 2) float array, elements as loops of
0-based vertex indices, and the boundary as a set of vertex indices.
After :func:`validate_and_orient` every element loop is counter-clockwise,
which the local matrix construction relies on.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError, MeshValidationError

# Elements whose |signed area| is at or below this fraction of their
# bounding-box area are rejected as degenerate.
DEGENERATE_AREA_REL_TOL = 1e-14


class CentroidOutsideWarning(UserWarning):
    """An element does not contain its own centroid.

    Only the one-point forcing quadrature degrades in that case, so by
    default this is a warning rather than an error.
    """


@dataclass(frozen=True)
class ElementGeometry:
    """Per-element scalars: area, centroid, diameter and vertex count."""

    area: float
    centroid: tuple[float, float]
    diameter: float
    n_vertices: int


@dataclass(frozen=True, eq=False)
class Mesh:
    """Immutable polygonal mesh.

    Attributes
    ----------
    vertices : ndarray, shape (n_vertices, 2)
        Vertex coordinates.
    elements : tuple of ndarray
        One array of vertex indices per element, 0-based.
    boundary : ndarray
        Sorted indices of the vertices on the domain boundary.
    """

    vertices: np.ndarray
    elements: tuple = field(repr=False)
    boundary: np.ndarray = field(repr=False)

    def __post_init__(self):
        vertices = np.array(self.vertices, dtype=float)
        elements = tuple(np.array(e, dtype=np.int64) for e in self.elements)
        boundary = np.unique(np.asarray(self.boundary, dtype=np.int64))
        vertices.setflags(write=False)
        boundary.setflags(write=False)
        for e in elements:
            e.setflags(write=False)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "boundary", boundary)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_elements(self) -> int:
        return len(self.elements)

    @property
    def interior(self) -> np.ndarray:
        """Sorted indices of vertices not on the boundary."""
        return np.setdiff1d(np.arange(self.n_vertices), self.boundary)

    def element_coords(self, index: int) -> np.ndarray:
        """Coordinates of element ``index`` as an (n_e, 2) array."""
        return self.vertices[self.elements[index]]


def _check_finite(coords: np.ndarray) -> np.ndarray:
    coords = np.asarray(coords, dtype=float)
    if not np.isfinite(coords).all():
        raise GeometryError("polygon has non-finite vertex coordinates")
    return coords


def bounding_box_area(coords) -> float:
    """Area of the axis-aligned bounding box, the scale for degeneracy checks."""
    coords = np.asarray(coords, dtype=float)
    spans = coords.max(axis=0) - coords.min(axis=0)
    return float(spans[0] * spans[1])


def signed_area(coords) -> float:
    """Shoelace sum over the vertex loop; positive iff counter-clockwise."""
    coords = _check_finite(coords)
    x, y = coords[:, 0], coords[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    return 0.5 * float(np.sum(x * yn - xn * y))


def centroid(coords, area: float) -> tuple[float, float]:
    """Polygon centroid from the shoelace-weighted vertex sums.

    ``area`` is the signed shoelace area of ``coords``; the sign cancels,
    so the result does not depend on orientation.
    """
    coords = _check_finite(coords)
    if abs(area) <= DEGENERATE_AREA_REL_TOL * bounding_box_area(coords):
        raise GeometryError("degenerate polygon: area below tolerance")
    x, y = coords[:, 0], coords[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    cx = float(np.sum((x + xn) * cross)) / (6.0 * area)
    cy = float(np.sum((y + yn) * cross)) / (6.0 * area)
    return cx, cy


def diameter(coords) -> float:
    """Largest distance between any two vertices of the polygon."""
    coords = _check_finite(coords)
    deltas = coords[:, None, :] - coords[None, :, :]
    return float(np.sqrt((deltas**2).sum(axis=-1)).max())


def vertex_normal(coords, i: int) -> np.ndarray:
    """Weighted normal at vertex ``i``: (y[i+1] - y[i-1], x[i-1] - x[i+1]).

    This is the outward normal of the segment joining the two neighbouring
    vertices, scaled by that segment's length; it is outward only for
    counter-clockwise loops. No normalization is applied.
    """
    coords = _check_finite(coords)
    n = len(coords)
    ip, im = (i + 1) % n, (i - 1) % n
    return np.array(
        [coords[ip, 1] - coords[im, 1], coords[im, 0] - coords[ip, 0]]
    )


def point_in_polygon(coords, point) -> bool:
    """Even-odd ray-casting test.

    Points exactly on an edge may land on either side; callers use this
    for centroid containment where boundary cases do not matter.
    """
    coords = np.asarray(coords, dtype=float)
    px, py = float(point[0]), float(point[1])
    inside = False
    j = len(coords) - 1
    for i in range(len(coords)):
        xi, yi = coords[i]
        xj, yj = coords[j]
        if (yi > py) != (yj > py):
            t = (py - yi) / (yj - yi)
            if px < xi + t * (xj - xi):
                inside = not inside
        j = i
    return inside


def element_geometry(coords) -> ElementGeometry:
    """Area, centroid, diameter and vertex count of one polygon."""
    coords = _check_finite(coords)
    a = signed_area(coords)
    if abs(a) <= DEGENERATE_AREA_REL_TOL * bounding_box_area(coords):
        raise GeometryError("degenerate polygon: area below tolerance")
    cx, cy = centroid(coords, a)
    return ElementGeometry(
        area=abs(a),
        centroid=(cx, cy),
        diameter=diameter(coords),
        n_vertices=len(coords),
    )


def validate_and_orient(mesh: Mesh, strict: bool = False) -> Mesh:
    """Normalize a mesh so the local matrix formulas hold.

    Checks index ranges and distinctness, rejects degenerate elements,
    reverses clockwise loops, and verifies that each element contains
    its own centroid (a warning by default, an error with ``strict``).

    Parameters
    ----------
    mesh : Mesh
        Structurally well-formed input mesh.
    strict : bool
        Upgrade the centroid-containment warning to an error.

    Returns
    -------
    Mesh
        A new mesh with every element counter-clockwise.
    """
    vertices = mesh.vertices
    if not np.isfinite(vertices).all():
        raise MeshValidationError("mesh has non-finite vertex coordinates")
    n = len(vertices)
    if len(mesh.boundary) and (
        mesh.boundary.min() < 0 or mesh.boundary.max() >= n
    ):
        raise MeshValidationError("boundary vertex index out of range")

    oriented = []
    for k, element in enumerate(mesh.elements):
        if len(element) < 3:
            raise MeshValidationError(f"element {k}: fewer than 3 vertices")
        if element.min() < 0 or element.max() >= n:
            raise MeshValidationError(f"element {k}: vertex index out of range")
        if len(np.unique(element)) != len(element):
            raise MeshValidationError(f"element {k}: repeated vertex index")

        coords = vertices[element]
        a = signed_area(coords)
        if abs(a) <= DEGENERATE_AREA_REL_TOL * bounding_box_area(coords):
            raise MeshValidationError(
                f"element {k}: degenerate (signed area {a:.3e})"
            )
        if a < 0:
            element = element[::-1]
            coords = coords[::-1]
            a = -a
        if not point_in_polygon(coords, centroid(coords, a)):
            message = f"element {k} does not contain its own centroid"
            if strict:
                raise MeshValidationError(message)
            warnings.warn(message, CentroidOutsideWarning, stacklevel=2)
        oriented.append(element)

    return Mesh(vertices, oriented, mesh.boundary)
