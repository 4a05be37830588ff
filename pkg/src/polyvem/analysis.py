"""Error measurement, patch tests and convergence studies.

Vertex errors compare the DOF vector against the exact solution at the
vertices; the L2-like norm uses lumped weights (each element spreads its
area evenly over its vertices, matching the forcing quadrature). The
energy-norm error is a broken seminorm: per element, the constant
projected gradient is compared against the exact gradient, integrated by
fanning the polygon into signed triangles about its centroid with a
degree-2 edge-midpoint rule on each. Sampling the exact gradient only at
the element centroid would be cheaper but useless as a convergence
measure: on centrally symmetric elements (square grids) the centroid is
a gradient superconvergence point and the one-point error decays at
second order instead of first.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import AnalysisError
from .local import build_Btilde, build_D, build_projector
from .mesh import Mesh, element_geometry
from .problems import ProblemSpec
from .system import solve_poisson

#: Errors at or below this are treated as exactly zero when fitting rates.
RATE_ERROR_FLOOR = 1e-14


class NonMonotoneConvergenceWarning(UserWarning):
    """Errors did not decrease between refinements (coarse-mesh wobble)."""


@dataclass(frozen=True)
class ErrorReport:
    """Discretization errors of one solve against the exact solution."""

    vertex_max_error: float
    vertex_l2_error: float
    h1_error: float  # NaN when the problem has no exact gradient
    h_max: float
    n_dof: int


@dataclass(frozen=True)
class ConvergenceTable:
    """Errors over a refinement family with fitted rates between rows.

    Rates follow log(e_prev/e_cur) / log(h_prev/h_cur); the first row and
    any row with an error at machine zero get NaN.
    """

    h_max: np.ndarray
    n_dof: np.ndarray
    vertex_l2: np.ndarray
    h1: np.ndarray
    rate_l2: np.ndarray
    rate_h1: np.ndarray

    def to_csv(self) -> str:
        lines = ["h_max,n_dof,vertex_l2,h1,rate_l2,rate_h1"]
        for i in range(len(self.h_max)):
            lines.append(
                "%.17g,%d,%.17g,%.17g,%s,%s"
                % (
                    self.h_max[i],
                    self.n_dof[i],
                    self.vertex_l2[i],
                    self.h1[i],
                    _format_rate(self.rate_l2[i]),
                    _format_rate(self.rate_h1[i]),
                )
            )
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="ascii", newline="\n") as handle:
            handle.write(self.to_csv())


def _format_rate(value: float) -> str:
    return "" if math.isnan(value) else "%.17g" % value


def element_gradient_error_squared(coords, centroid, grad_h, exact_gradient) -> float:
    """Integral of |grad_h - exact_gradient(x)|^2 over one polygon.

    The polygon is fanned into signed triangles about its centroid; each
    triangle uses the three-point edge-midpoint rule (exact for
    quadratics). The signed fan covers the polygon with net multiplicity
    one for any simple loop, so the composite rule stays consistent even
    for non-convex elements.
    """
    coords = np.asarray(coords, dtype=float)
    cx, cy = centroid
    ghx, ghy = grad_h
    n = len(coords)
    total = 0.0
    for i in range(n):
        ax, ay = coords[i]
        bx, by = coords[(i + 1) % n]
        tri_area = 0.5 * ((ax - cx) * (by - cy) - (bx - cx) * (ay - cy))
        acc = 0.0
        for mx, my in (
            (0.5 * (cx + ax), 0.5 * (cy + ay)),
            (0.5 * (ax + bx), 0.5 * (ay + by)),
            (0.5 * (bx + cx), 0.5 * (by + cy)),
        ):
            gx, gy = exact_gradient(mx, my)
            acc += (gx - ghx) ** 2 + (gy - ghy) ** 2
        total += tri_area * acc / 3.0
    return total


def compute_errors(mesh: Mesh, U, problem: ProblemSpec) -> ErrorReport:
    """Measure a DOF vector against the problem's exact solution.

    Requires ``problem.exact``; the energy-norm error additionally needs
    ``problem.exact_gradient`` and is NaN without it.
    """
    if problem.exact is None:
        raise AnalysisError("problem provides no exact solution")
    U = np.asarray(U, dtype=float)
    if U.shape != (mesh.n_vertices,):
        raise AnalysisError(
            f"DOF vector has length {U.shape}, mesh has {mesh.n_vertices} vertices"
        )

    exact_values = np.array([problem.exact(x, y) for x, y in mesh.vertices])
    difference = U - exact_values

    weights = np.zeros(mesh.n_vertices)
    h_max = 0.0
    h1_squared = 0.0
    with_gradient = problem.exact_gradient is not None
    for index, element in enumerate(mesh.elements):
        coords = mesh.element_coords(index)
        geometry = element_geometry(coords)
        weights[element] += geometry.area / geometry.n_vertices
        h_max = max(h_max, geometry.diameter)
        if with_gradient:
            D = build_D(geometry, coords)
            _, Pi = build_projector(D, build_Btilde(geometry, coords))
            coefficients = Pi @ U[element]
            h = geometry.diameter
            h1_squared += element_gradient_error_squared(
                coords,
                geometry.centroid,
                (coefficients[1] / h, coefficients[2] / h),
                problem.exact_gradient,
            )

    return ErrorReport(
        vertex_max_error=float(np.abs(difference).max()),
        vertex_l2_error=float(np.sqrt(np.sum(weights * difference**2))),
        h1_error=math.sqrt(h1_squared) if with_gradient else math.nan,
        h_max=h_max,
        n_dof=mesh.n_vertices,
    )


def patch_test(mesh: Mesh, coefficients, method: str = "auto") -> float:
    """Solve with f = 0 and linear boundary data a + b*x + c*y.

    The method reproduces global linear solutions exactly, so the
    returned maximum vertex deviation is a direct consistency check.
    """
    a, b, c = (float(v) for v in coefficients)

    def linear(x, y):
        return a + b * x + c * y

    problem = ProblemSpec(
        name="patch", forcing=lambda x, y: 0.0, boundary=linear, exact=linear
    )
    U = solve_poisson(mesh, problem, method=method)
    expected = a + b * mesh.vertices[:, 0] + c * mesh.vertices[:, 1]
    return float(np.abs(U - expected).max())


def convergence_study(
    meshes: Sequence[Mesh], problem: ProblemSpec, method: str = "auto"
) -> ConvergenceTable:
    """Solve on a refinement family and tabulate errors with fitted rates.

    Parameters
    ----------
    meshes : sequence of Mesh
        At least three meshes with strictly decreasing maximum diameter.
    problem : ProblemSpec
        Must provide an exact solution (gradient included for the
        energy-norm column).

    Warns
    -----
    NonMonotoneConvergenceWarning
        When an error grows between consecutive meshes.
    """
    if len(meshes) < 3:
        raise AnalysisError("a convergence study needs at least 3 meshes")

    reports = [
        compute_errors(mesh, solve_poisson(mesh, problem, method=method), problem)
        for mesh in meshes
    ]
    h = np.array([r.h_max for r in reports])
    if not (np.diff(h) < 0.0).all():
        raise AnalysisError("meshes must have strictly decreasing h_max")

    l2 = np.array([r.vertex_l2_error for r in reports])
    h1 = np.array([r.h1_error for r in reports])
    for name, errors in (("vertex_l2", l2), ("h1", h1)):
        if np.isnan(errors).all():
            continue
        grew = errors[1:] > np.maximum(errors[:-1], RATE_ERROR_FLOOR)
        if grew.any():
            warnings.warn(
                f"{name} error is not monotonically decreasing",
                NonMonotoneConvergenceWarning,
                stacklevel=2,
            )

    return ConvergenceTable(
        h_max=h,
        n_dof=np.array([r.n_dof for r in reports], dtype=int),
        vertex_l2=l2,
        h1=h1,
        rate_l2=_rates(h, l2),
        rate_h1=_rates(h, h1),
    )


def _rates(h: np.ndarray, errors: np.ndarray) -> np.ndarray:
    rates = np.full(len(h), math.nan)
    for i in range(1, len(h)):
        previous, current = errors[i - 1], errors[i]
        if (
            math.isnan(previous)
            or math.isnan(current)
            or previous <= RATE_ERROR_FLOOR
            or current <= RATE_ERROR_FLOOR
        ):
            continue
        rates[i] = math.log(previous / current) / math.log(h[i - 1] / h[i])
    return rates
