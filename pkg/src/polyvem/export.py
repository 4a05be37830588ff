"""Solution export: legacy VTK, CSV and a standalone SVG rendering.

The SVG path needs no plotting backend; element fills come from a fixed
256-entry colour lookup table interpolated linearly between anchor
colours sampled from the viridis map.
"""

from __future__ import annotations

import numpy as np

from .mesh import Mesh, element_geometry

# Anchor colours (RGB) at equally spaced positions 0, 1/8, ..., 1.
_LUT_ANCHORS = np.array(
    [
        (68, 1, 84),
        (72, 40, 120),
        (62, 74, 137),
        (49, 104, 142),
        (38, 130, 142),
        (31, 158, 137),
        (53, 183, 121),
        (109, 205, 89),
        (253, 231, 37),
    ],
    dtype=float,
)


def colormap_lut() -> np.ndarray:
    """256 x 3 uint8 lookup table, linear between the anchor colours."""
    positions = np.linspace(0.0, 1.0, len(_LUT_ANCHORS))
    samples = np.linspace(0.0, 1.0, 256)
    lut = np.column_stack(
        [np.interp(samples, positions, _LUT_ANCHORS[:, c]) for c in range(3)]
    )
    return np.rint(lut).astype(np.uint8)


_LUT = colormap_lut()


def _check_solution(mesh: Mesh, U) -> np.ndarray:
    U = np.asarray(U, dtype=float)
    if U.shape != (mesh.n_vertices,):
        raise ValueError(
            f"solution has {U.shape} values, mesh has {mesh.n_vertices} vertices"
        )
    return U


def write_vtk(mesh: Mesh, U, path) -> None:
    """Write a legacy ASCII VTK unstructured grid with point scalars ``u``."""
    U = _check_solution(mesh, U)
    cell_ints = sum(len(e) + 1 for e in mesh.elements)
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        handle.write("# vtk DataFile Version 3.0\n")
        handle.write("polyvem solution\n")
        handle.write("ASCII\n")
        handle.write("DATASET UNSTRUCTURED_GRID\n")
        handle.write(f"POINTS {mesh.n_vertices} double\n")
        for x, y in mesh.vertices:
            handle.write("%.17g %.17g 0\n" % (x, y))
        handle.write(f"CELLS {mesh.n_elements} {cell_ints}\n")
        for element in mesh.elements:
            handle.write(
                f"{len(element)} " + " ".join(str(int(i)) for i in element) + "\n"
            )
        handle.write(f"CELL_TYPES {mesh.n_elements}\n")
        for _ in mesh.elements:
            handle.write("7\n")  # VTK_POLYGON
        handle.write(f"POINT_DATA {mesh.n_vertices}\n")
        handle.write("SCALARS u double 1\n")
        handle.write("LOOKUP_TABLE default\n")
        for value in U:
            handle.write("%.17g\n" % value)


def write_solution_csv(mesh: Mesh, U, path) -> None:
    """Write ``vertex_id,x,y,u`` rows with full-precision reals."""
    U = _check_solution(mesh, U)
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        handle.write("vertex_id,x,y,u\n")
        for i, (x, y) in enumerate(mesh.vertices):
            handle.write("%d,%.17g,%.17g,%.17g\n" % (i, x, y, U[i]))


def _lut_index(value: float, low: float, high: float) -> int:
    if high <= low:
        return 128  # degenerate range: uniform mid-scale colour
    t = (value - low) / (high - low)
    return int(round(min(max(t, 0.0), 1.0) * 255))


def write_svg(mesh: Mesh, U, path) -> None:
    """Render one filled polygon per element into an SVG file.

    Each polygon is coloured by the mean of its vertex values, scaled
    linearly over [min U, max U] through the lookup table. The y axis is
    flipped into screen coordinates; the viewBox is the mesh bounding box
    plus a 2 percent margin.
    """
    U = _check_solution(mesh, U)
    xs, ys = mesh.vertices[:, 0], mesh.vertices[:, 1]
    xmin, xmax = float(xs.min()), float(xs.max())
    ymin, ymax = float(ys.min()), float(ys.max())
    margin = 0.02 * max(xmax - xmin, ymax - ymin, 1e-300)
    view = (
        xmin - margin,
        ymin - margin,
        (xmax - xmin) + 2 * margin,
        (ymax - ymin) + 2 * margin,
    )
    low, high = float(U.min()), float(U.max())
    stroke = 0.002 * max(view[2], view[3])

    def flip(y):
        return (ymin + ymax) - y

    with open(path, "w", encoding="ascii", newline="\n") as handle:
        handle.write('<?xml version="1.0" encoding="UTF-8"?>\n')
        handle.write(
            '<svg xmlns="http://www.w3.org/2000/svg" '
            'viewBox="%.17g %.17g %.17g %.17g">\n' % view
        )
        for index, element in enumerate(mesh.elements):
            mean = float(U[element].mean())
            r, g, b = _LUT[_lut_index(mean, low, high)]
            points = " ".join(
                "%.17g,%.17g" % (x, flip(y)) for x, y in mesh.element_coords(index)
            )
            handle.write(
                '<polygon points="%s" fill="#%02x%02x%02x" '
                'stroke="#333333" stroke-width="%.3g"/>\n'
                % (points, r, g, b, stroke)
            )
        handle.write("</svg>\n")
