"""Shared test utilities: random geometry and independent oracles.

Oracles deliberately avoid the library's own code paths: the triangle
stiffness uses the cotangent formula, gradients of linear interpolants
come from a direct 3x3 solve, and the VTK reader is a from-scratch
parser of the legacy ASCII format.
"""

from __future__ import annotations

import math

import numpy as np

UNIT_SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])

RIGHT_TRIANGLE = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])

L_HEXAGON = np.array(
    [[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]]
)

# Square frame with a notch cut to the middle: the centroid falls in the
# notch, outside the polygon.
C_SHAPE = np.array(
    [
        [0.0, 0.0],
        [3.0, 0.0],
        [3.0, 1.0],
        [1.0, 1.0],
        [1.0, 3.0],
        [3.0, 3.0],
        [3.0, 4.0],
        [0.0, 4.0],
    ]
)


def star_polygon(rng, n_vertices, center=(0.0, 0.0), scale=1.0):
    """Simple star-shaped polygon, counter-clockwise, bounded aspect ratio.

    Vertices sit in jittered angular sectors, so the loop cannot
    self-intersect and no two vertices nearly coincide; radii in
    [0.4, 1.0] keep the projection system well conditioned. Non-convex
    shapes occur freely.
    """
    jitter = rng.uniform(0.15, 0.85, n_vertices)
    angles = 2.0 * np.pi * (np.arange(n_vertices) + jitter) / n_vertices
    angles += rng.uniform(0.0, 2.0 * np.pi)
    radii = rng.uniform(0.4, 1.0, n_vertices) * scale
    return np.column_stack(
        [center[0] + radii * np.cos(angles), center[1] + radii * np.sin(angles)]
    )


def random_triangle(rng, min_area=0.05, min_edge=0.2):
    """Non-degenerate counter-clockwise triangle in [-1, 1]^2."""
    while True:
        coords = rng.uniform(-1.0, 1.0, (3, 2))
        u = coords[1] - coords[0]
        v = coords[2] - coords[0]
        doubled = u[0] * v[1] - u[1] * v[0]
        if doubled < 0.0:
            coords = coords[::-1]
            doubled = -doubled
        edges = [np.linalg.norm(coords[i] - coords[(i + 1) % 3]) for i in range(3)]
        if doubled / 2.0 >= min_area and min(edges) >= min_edge:
            return coords


def fem_triangle_stiffness(coords):
    """Linear FEM stiffness by the cotangent formula.

    Off-diagonal entry (i, j) is -cot(angle at the third vertex)/2;
    diagonals make the row sums vanish.
    """
    coords = np.asarray(coords, dtype=float)
    K = np.zeros((3, 3))
    for i in range(3):
        for j in range(i + 1, 3):
            k = 3 - i - j
            u = coords[i] - coords[k]
            v = coords[j] - coords[k]
            dot = float(u @ v)
            cross = abs(u[0] * v[1] - u[1] * v[0])
            K[i, j] = K[j, i] = -0.5 * dot / cross
    for i in range(3):
        K[i, i] = -(K[i].sum() - K[i, i])
    return K


def linear_interpolant_gradient(coords, values):
    """Gradient of the plane through three (x, y, value) points."""
    matrix = np.column_stack([np.ones(3), np.asarray(coords, dtype=float)])
    c = np.linalg.solve(matrix, np.asarray(values, dtype=float))
    return float(c[1]), float(c[2])


def fem_h1_error(mesh, U, exact_gradient, triangulate=False):
    """Broken energy-norm error of the piecewise-linear interpolant.

    Element gradients come from the linear interpolant directly (not the
    library's projection); the same fan/edge-midpoint quadrature rule is
    applied so that on triangle meshes the two routes agree to roundoff.
    With ``triangulate`` each polygon is first fanned into triangles
    about its first vertex, giving a linear-FEM surrogate on arbitrary
    meshes.
    """
    from polyvem.analysis import element_gradient_error_squared

    U = np.asarray(U, dtype=float)
    total = 0.0
    for index, element in enumerate(mesh.elements):
        coords = mesh.element_coords(index)
        if triangulate:
            triangles = [
                (coords[[0, i, i + 1]], U[element[[0, i, i + 1]]])
                for i in range(1, len(coords) - 1)
            ]
        else:
            assert len(coords) == 3
            triangles = [(coords, U[element])]
        for tri, values in triangles:
            grad = linear_interpolant_gradient(tri, values)
            centre = tri.mean(axis=0)
            total += element_gradient_error_squared(tri, centre, grad, exact_gradient)
    return math.sqrt(total)


def parse_legacy_vtk(path):
    """Independent reader for legacy ASCII unstructured-grid files.

    Returns (points, cells, point_data) with points as an (n, 3) float
    array, cells as a list of index lists, and point_data as a 1D float
    array (empty when the file carries no scalars).
    """
    with open(path, "r", encoding="ascii") as handle:
        lines = [line.strip() for line in handle]
    assert lines[0].startswith("# vtk DataFile"), "missing VTK header"
    assert lines[2] == "ASCII"
    assert lines[3] == "DATASET UNSTRUCTURED_GRID"

    def tokens_from(start):
        for offset, line in enumerate(lines[start:], start=start):
            for token in line.split():
                yield offset, token

    points = None
    cells = []
    data = []
    i = 4
    while i < len(lines):
        fields = lines[i].split()
        if not fields:
            i += 1
            continue
        keyword = fields[0]
        if keyword == "POINTS":
            count = int(fields[1])
            flat = []
            i += 1
            while len(flat) < 3 * count:
                flat.extend(float(t) for t in lines[i].split())
                i += 1
            points = np.array(flat).reshape(count, 3)
        elif keyword == "CELLS":
            count = int(fields[1])
            i += 1
            for _ in range(count):
                entries = [int(t) for t in lines[i].split()]
                assert entries[0] == len(entries) - 1
                cells.append(entries[1:])
                i += 1
        elif keyword == "SCALARS":
            assert fields[1] == "u"
            assert lines[i + 1].startswith("LOOKUP_TABLE")
            i += 2
            while i < len(lines) and lines[i] and not lines[i][0].isalpha():
                data.extend(float(t) for t in lines[i].split())
                i += 1
        else:
            i += 1
    return points, cells, np.array(data)
