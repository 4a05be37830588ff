"""Regenerate the sample meshes committed under meshes/.

Run from the repository root:

    python3 tools/make_sample_meshes.py

Voronoi meshes are built from jittered-grid seeds; reflecting the seeds
across the four sides of the unit square bounds every cell and clips it
exactly to the square. The smoothed variant applies Lloyd iterations
(seeds replaced by their cell centroids) before the final tessellation.
The L-shaped domain covers quadrants one to three of [-1, 1]^2 with the
fourth-quadrant square removed, matching the corner-singularity problem.

These generators are developer plumbing, not part of the package API;
the solver consumes the committed files.
"""

from __future__ import annotations

import os
import sys

import numpy as np
from scipy.spatial import Voronoi

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from polyvem.analysis import patch_test
from polyvem.mesh import Mesh, signed_area, validate_and_orient
from polyvem.meshfile import boundary_from_edge_incidence, generate_structured, write_mesh

SNAP = 1e-9


def jittered_grid_seeds(m: int, rng) -> np.ndarray:
    """m x m seeds, one per grid cell, jittered away from cell edges."""
    cells = np.arange(m)
    ii, jj = np.meshgrid(cells, cells)
    u = rng.uniform(0.2, 0.8, size=(m, m))
    v = rng.uniform(0.2, 0.8, size=(m, m))
    return np.column_stack([((ii + u) / m).ravel(), ((jj + v) / m).ravel()])


def bounded_voronoi_cells(points: np.ndarray) -> list[np.ndarray]:
    """Voronoi cells of the points, clipped exactly to the unit square."""
    reflected = [points]
    for axis in (0, 1):
        for value in (0.0, 1.0):
            mirror = points.copy()
            mirror[:, axis] = 2.0 * value - mirror[:, axis]
            reflected.append(mirror)
    vor = Voronoi(np.vstack(reflected))

    cells = []
    for p in range(len(points)):
        region = vor.regions[vor.point_region[p]]
        assert -1 not in region, "unbounded cell despite reflection"
        poly = vor.vertices[region]
        # snap coordinates that should sit on the square's sides
        poly = poly.copy()
        for value in (0.0, 1.0):
            poly[np.abs(poly - value) < SNAP] = value
        # order counter-clockwise around the seed (cells are convex)
        angles = np.arctan2(poly[:, 1] - points[p, 1], poly[:, 0] - points[p, 0])
        cells.append(poly[np.argsort(angles)])
    return cells


def polygon_centroid(poly: np.ndarray) -> np.ndarray:
    a = signed_area(poly)
    x, y = poly[:, 0], poly[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    return np.array([((x + xn) * cross).sum(), ((y + yn) * cross).sum()]) / (6.0 * a)


def cells_to_mesh(cells: list[np.ndarray]) -> Mesh:
    """Merge duplicated cell corners into a shared vertex table."""
    key_to_id: dict[tuple, int] = {}
    vertices: list[tuple] = []
    elements = []
    for poly in cells:
        loop = []
        for x, y in poly:
            key = (round(x / SNAP), round(y / SNAP))
            if key not in key_to_id:
                key_to_id[key] = len(vertices)
                vertices.append((x, y))
            loop.append(key_to_id[key])
        # drop consecutive duplicates produced by snapping
        cleaned = [v for i, v in enumerate(loop) if v != loop[(i - 1) % len(loop)]]
        assert len(cleaned) >= 3
        elements.append(np.array(cleaned, dtype=np.int64))
    boundary = boundary_from_edge_incidence(elements)
    return validate_and_orient(Mesh(np.array(vertices), elements, boundary))


def voronoi_mesh(m: int, seed: int, lloyd_iterations: int = 0) -> Mesh:
    rng = np.random.default_rng(seed)
    points = jittered_grid_seeds(m, rng)
    for _ in range(lloyd_iterations):
        cells = bounded_voronoi_cells(points)
        points = np.array([polygon_centroid(c) for c in cells])
    return cells_to_mesh(bounded_voronoi_cells(points))


def l_domain_mesh(n: int) -> Mesh:
    """Square cells of size 1/n on [-1,1]^2 minus the fourth-quadrant square."""
    s = 1.0 / n
    key_to_id: dict[tuple, int] = {}
    vertices: list[tuple] = []

    def vid(i, j):
        key = (i, j)
        if key not in key_to_id:
            key_to_id[key] = len(vertices)
            vertices.append((-1.0 + i * s, -1.0 + j * s))
        return key_to_id[key]

    elements = []
    for j in range(2 * n):
        for i in range(2 * n):
            in_notch = i >= n and j < n  # cell lies in x >= 0, y <= 0
            if in_notch:
                continue
            elements.append(
                np.array(
                    [vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)],
                    dtype=np.int64,
                )
            )
    boundary = boundary_from_edge_incidence(elements)
    return validate_and_orient(Mesh(np.array(vertices), elements, boundary))


def main() -> None:
    out_dir = os.path.join(os.path.dirname(__file__), "..", "meshes")
    os.makedirs(out_dir, exist_ok=True)

    produced = {
        "triangles_8.mesh": generate_structured("triangles", 8),
        "squares_8.mesh": generate_structured("squares", 8),
        "voronoi_128.mesh": voronoi_mesh(12, seed=20240601),
        "voronoi_smoothed_128.mesh": voronoi_mesh(12, seed=20240601, lloyd_iterations=3),
        "nonconvex_4.mesh": generate_structured("nonconvex", 4),
        "l_domain_8.mesh": l_domain_mesh(8),
    }
    for name, mesh in produced.items():
        deviation = patch_test(mesh, (1.0, 2.0, -3.0))
        assert deviation < 1e-10, (name, deviation)
        path = os.path.join(out_dir, name)
        write_mesh(mesh, path)
        print(
            f"{name}: {mesh.n_elements} elements, {mesh.n_vertices} vertices, "
            f"{len(mesh.boundary)} boundary, patch deviation {deviation:.2e}"
        )


if __name__ == "__main__":
    main()
