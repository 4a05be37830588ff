"""Plain-text mesh files and structured test-mesh generators.

File schema (three sections, ``#`` starts a comment, blank lines are
ignored)::

    vertices <n>
    <x> <y>            # n lines, one vertex per line
    elements <m>
    <i0> <i1> <i2> ...  # m lines, 0-based vertex indices, counter-clockwise
    boundary <k>
    <b0> <b1> ...       # k indices, any line wrapping

Coordinates are written with 17 significant digits, so write followed by
read restores every float64 exactly. Indices are 0-based throughout.
"""

from __future__ import annotations

import numpy as np

from .errors import MeshFormatError
from .mesh import Mesh, validate_and_orient

GENERATOR_KINDS = ("squares", "triangles", "nonconvex")


def _content_fields(path):
    """Yield (line_number, fields) for non-empty lines, comments stripped."""
    with open(path, "r", encoding="ascii") as handle:
        for number, raw in enumerate(handle, start=1):
            text = raw.split("#", 1)[0].strip()
            if text:
                yield number, text.split()


class _Cursor:
    def __init__(self, path):
        self.path = path
        self.lines = list(_content_fields(path))
        self.position = 0

    def fail(self, line, message):
        raise MeshFormatError(f"{self.path}:{line}: {message}")

    def next_line(self, expectation):
        if self.position >= len(self.lines):
            raise MeshFormatError(
                f"{self.path}: unexpected end of file, expected {expectation}"
            )
        line, fields = self.lines[self.position]
        self.position += 1
        return line, fields

    def section_header(self, keyword):
        line, fields = self.next_line(f"'{keyword} <count>'")
        if len(fields) != 2 or fields[0] != keyword:
            self.fail(line, f"expected '{keyword} <count>', got {' '.join(fields)!r}")
        try:
            count = int(fields[1])
        except ValueError:
            self.fail(line, f"invalid {keyword} count {fields[1]!r}")
        if count < 0:
            self.fail(line, f"negative {keyword} count")
        return count


def read_mesh(path, strict: bool = False) -> Mesh:
    """Parse a mesh file and return the validated, oriented mesh.

    Raises
    ------
    MeshFormatError
        On malformed content, with the offending file position.
    MeshValidationError
        Propagated from validation (degenerate elements and the like).
    """
    cursor = _Cursor(path)

    n_vertices = cursor.section_header("vertices")
    vertices = np.empty((n_vertices, 2))
    for i in range(n_vertices):
        line, fields = cursor.next_line("a vertex coordinate line")
        if len(fields) != 2:
            cursor.fail(line, f"vertex {i}: expected 2 coordinates, got {len(fields)}")
        try:
            vertices[i] = [float(fields[0]), float(fields[1])]
        except ValueError:
            cursor.fail(line, f"vertex {i}: invalid coordinate")

    n_elements = cursor.section_header("elements")
    elements = []
    for e in range(n_elements):
        line, fields = cursor.next_line("an element index line")
        try:
            indices = [int(f) for f in fields]
        except ValueError:
            cursor.fail(line, f"element {e}: invalid vertex index")
        if len(indices) < 3:
            cursor.fail(line, f"element {e}: needs at least 3 vertices")
        for index in indices:
            if not 0 <= index < n_vertices:
                cursor.fail(
                    line,
                    f"element {e}: vertex index {index} out of range "
                    f"(mesh has {n_vertices} vertices)",
                )
        elements.append(np.array(indices, dtype=np.int64))

    n_boundary = cursor.section_header("boundary")
    boundary = []
    while len(boundary) < n_boundary:
        line, fields = cursor.next_line("boundary vertex indices")
        for f in fields:
            try:
                index = int(f)
            except ValueError:
                cursor.fail(line, f"invalid boundary index {f!r}")
            if not 0 <= index < n_vertices:
                cursor.fail(line, f"boundary index {index} out of range")
            boundary.append(index)
    if len(boundary) > n_boundary:
        cursor.fail(cursor.lines[cursor.position - 1][0], "too many boundary indices")

    mesh = Mesh(vertices, elements, np.array(boundary, dtype=np.int64))
    return validate_and_orient(mesh, strict=strict)


def write_mesh(mesh: Mesh, path) -> None:
    """Write a mesh in the text schema; read_mesh restores it exactly."""
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        handle.write(f"vertices {mesh.n_vertices}\n")
        for x, y in mesh.vertices:
            handle.write("%.17g %.17g\n" % (x, y))
        handle.write(f"elements {mesh.n_elements}\n")
        for element in mesh.elements:
            handle.write(" ".join(str(int(i)) for i in element) + "\n")
        boundary = [str(int(i)) for i in mesh.boundary]
        handle.write(f"boundary {len(boundary)}\n")
        for start in range(0, len(boundary), 16):
            handle.write(" ".join(boundary[start : start + 16]) + "\n")


def boundary_from_edge_incidence(elements) -> np.ndarray:
    """Boundary vertices inferred from edges used by exactly one element.

    Works for any conforming mesh in which neighbouring elements list the
    same vertices along their shared polyline.
    """
    counts: dict[tuple, int] = {}
    for element in elements:
        element = np.asarray(element)
        for a, b in zip(element, np.roll(element, -1)):
            key = (int(min(a, b)), int(max(a, b)))
            counts[key] = counts.get(key, 0) + 1
    on_boundary = set()
    for (a, b), count in counts.items():
        if count == 1:
            on_boundary.add(a)
            on_boundary.add(b)
    return np.array(sorted(on_boundary), dtype=np.int64)


def _square_grid(n):
    side = np.arange(n + 1) / n
    xs, ys = np.meshgrid(side, side)
    vertices = np.column_stack([xs.ravel(), ys.ravel()])

    def vid(i, j):
        return j * (n + 1) + i

    return vertices, vid


def _squares_mesh(n):
    vertices, vid = _square_grid(n)
    elements = [
        [vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)]
        for j in range(n)
        for i in range(n)
    ]
    return vertices, elements


def _triangles_mesh(n):
    vertices, vid = _square_grid(n)
    elements = []
    for j in range(n):
        for i in range(n):
            elements.append([vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)])
            elements.append([vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)])
    return vertices, elements


def _nonconvex_mesh(n):
    # Each grid cell becomes a non-convex polygon (a square with a notch
    # cut into its bottom edge) plus the quad filling the notch. Notch
    # vertices on a neighbour's top edge are included in that neighbour's
    # loop, so the mesh stays conforming with co-planar edges.
    s = 1.0 / n
    vertices, vid = _square_grid(n)
    extra = []

    def notch_ids(i, j):
        base = (n + 1) * (n + 1) + 4 * (j * n + i)
        return base, base + 1, base + 2, base + 3

    for j in range(n):
        for i in range(n):
            x0, y0 = i * s, j * s
            extra.extend(
                [
                    (x0 + s / 3.0, y0),
                    (x0 + s / 3.0, y0 + s / 3.0),
                    (x0 + 2.0 * s / 3.0, y0 + s / 3.0),
                    (x0 + 2.0 * s / 3.0, y0),
                ]
            )
    vertices = np.vstack([vertices, np.array(extra)])

    elements = []
    for j in range(n):
        for i in range(n):
            a, b, c, d = notch_ids(i, j)
            loop = [vid(i, j), a, b, c, d, vid(i + 1, j), vid(i + 1, j + 1)]
            if j + 1 < n:
                a_up, _, _, d_up = notch_ids(i, j + 1)
                loop.extend([d_up, a_up])
            loop.append(vid(i, j + 1))
            elements.append(loop)
            elements.append([a, d, c, b])
    return vertices, elements


def generate_structured(kind: str, n: int) -> Mesh:
    """Deterministic unit-square test meshes.

    Parameters
    ----------
    kind : {"squares", "triangles", "nonconvex"}
        squares: n^2 congruent quads. triangles: 2 n^2 right triangles.
        nonconvex: 2 n^2 elements mixing notched (non-convex) polygons
        with the quads that fill the notches; every element contains its
        centroid.
    n : int
        Cells per side, at least 1.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if kind == "squares":
        vertices, elements = _squares_mesh(n)
    elif kind == "triangles":
        vertices, elements = _triangles_mesh(n)
    elif kind == "nonconvex":
        vertices, elements = _nonconvex_mesh(n)
    else:
        raise ValueError(f"unknown mesh kind {kind!r} (known: {', '.join(GENERATOR_KINDS)})")
    boundary = boundary_from_edge_incidence(elements)
    return validate_and_orient(Mesh(vertices, elements, boundary))
