"""Per-element matrices for the lowest-order method.

On each polygon the discrete space is pinned down by its vertex values
alone. Everything needed from it is channelled through the energy
projection onto linear polynomials, expressed in the scaled monomial
basis {1, (x - x_c)/h, (y - y_c)/h} with centroid (x_c, y_c) and
diameter h. The matrices built here are

* ``D``: vertex values of the three monomials, one row per vertex;
* ``Btilde``: projection right-hand sides, one column per vertex, with
  the first row enforcing the vertex-average pinning of constants;
* ``G``: energy inner products of the monomials (first row and column
  zero since constants have no gradient);
* ``Pi``: monomial coefficients of the projection of each hat function;
* ``K_local``: projection energy plus an identity-weighted penalty on
  the projection residual, which restores full rank minus constants;
* ``f_local``: one-point (centroid) quadrature of the load against the
  vertex-average of each hat function.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ElementAssemblyError, ForcingEvaluationError
from .mesh import ElementGeometry, element_geometry

#: Dimension of the local polynomial space (linears in 2D).
N_POLY = 3

#: Elements whose projection system is worse conditioned than this are rejected.
CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class LocalMatrices:
    """Bundle of the per-element matrices described in the module docstring."""

    geometry: ElementGeometry
    D: np.ndarray        # (n_e, 3)
    Btilde: np.ndarray   # (3, n_e)
    G: np.ndarray        # (3, 3)
    Gtilde: np.ndarray   # (3, 3), equals Btilde @ D
    Pi: np.ndarray       # (3, n_e)
    K_local: np.ndarray  # (n_e, n_e), symmetric positive semidefinite
    f_local: np.ndarray  # (n_e,)


def scaled_monomials(geometry: ElementGeometry, points) -> np.ndarray:
    """Evaluate {1, (x - x_c)/h, (y - y_c)/h} at the given points."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    xc, yc = geometry.centroid
    h = geometry.diameter
    values = np.ones((len(points), N_POLY))
    values[:, 1] = (points[:, 0] - xc) / h
    values[:, 2] = (points[:, 1] - yc) / h
    return values


def monomial_gradients(geometry: ElementGeometry) -> np.ndarray:
    """Constant gradients of the scaled monomials, one row each."""
    h = geometry.diameter
    return np.array([[0.0, 0.0], [1.0 / h, 0.0], [0.0, 1.0 / h]])


def build_D(geometry: ElementGeometry, coords) -> np.ndarray:
    """Vertex values of the scaled monomials; column 0 is all ones."""
    return scaled_monomials(geometry, coords)


def build_Btilde(geometry: ElementGeometry, coords) -> np.ndarray:
    """Right-hand sides of the projection systems, one column per vertex.

    Row 0 is the vertex-average weight 1/n_e. Rows 1 and 2 are half the
    weighted vertex normal dotted with the monomial gradients; for a
    counter-clockwise loop that normal is
    (y[i+1] - y[i-1], x[i-1] - x[i+1]).
    """
    coords = np.asarray(coords, dtype=float)
    n = len(coords)
    h = geometry.diameter
    x, y = coords[:, 0], coords[:, 1]
    btilde = np.empty((N_POLY, n))
    btilde[0] = 1.0 / n
    btilde[1] = (np.roll(y, -1) - np.roll(y, 1)) / (2.0 * h)
    btilde[2] = (np.roll(x, 1) - np.roll(x, -1)) / (2.0 * h)
    return btilde


def build_G(geometry: ElementGeometry) -> np.ndarray:
    """Energy inner products of the monomials, exact for constant gradients."""
    g = geometry.area / geometry.diameter**2
    return np.array([[0.0, 0.0, 0.0], [0.0, g, 0.0], [0.0, 0.0, g]])


def _pivoted_solve(matrix: np.ndarray, rhs: np.ndarray):
    """Gauss-Jordan elimination with partial pivoting for a small system.

    Returns the solution of ``matrix @ x = rhs`` and a 1-norm condition
    estimate obtained from the explicitly accumulated inverse.
    """
    a = np.array(matrix, dtype=float)
    m = a.shape[0]
    work = np.hstack([a, np.eye(m), np.asarray(rhs, dtype=float)])
    for col in range(m):
        pivot_row = col + int(np.argmax(np.abs(work[col:, col])))
        if work[pivot_row, col] == 0.0:
            raise ZeroDivisionError("singular matrix")
        if pivot_row != col:
            work[[col, pivot_row]] = work[[pivot_row, col]]
        work[col] /= work[col, col]
        for row in range(m):
            if row != col and work[row, col] != 0.0:
                work[row] -= work[row, col] * work[col]
    inverse = work[:, m : 2 * m]
    solution = work[:, 2 * m :]
    norm1 = np.abs(a).sum(axis=0).max()
    inv_norm1 = np.abs(inverse).sum(axis=0).max()
    return solution, norm1 * inv_norm1


def build_projector(D: np.ndarray, Btilde: np.ndarray):
    """Solve the pinned projection system for the projector matrix.

    Returns ``(Gtilde, Pi)`` where ``Gtilde = Btilde @ D`` and ``Pi``
    solves ``Gtilde @ Pi = Btilde``.
    """
    gtilde = Btilde @ D
    try:
        pi, cond = _pivoted_solve(gtilde, Btilde)
    except ZeroDivisionError as exc:
        raise ElementAssemblyError("projection system is singular") from exc
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise ElementAssemblyError(
            f"projection system ill-conditioned (condition estimate {cond:.3e})"
        )
    return gtilde, pi


def build_local_stiffness(D: np.ndarray, G: np.ndarray, Pi: np.ndarray) -> np.ndarray:
    """Projection energy plus the identity-weighted residual penalty."""
    n = D.shape[0]
    residual = np.eye(n) - D @ Pi
    return Pi.T @ G @ Pi + residual.T @ residual


def build_local_forcing(
    geometry: ElementGeometry, forcing: Callable[[float, float], float]
) -> np.ndarray:
    """One-point centroid quadrature: every entry is area/n_e * f(centroid)."""
    xc, yc = geometry.centroid
    value = float(forcing(xc, yc))
    if not np.isfinite(value):
        raise ForcingEvaluationError(
            f"forcing returned non-finite value {value!r} at ({xc:.6g}, {yc:.6g})"
        )
    n = geometry.n_vertices
    return np.full(n, geometry.area / n * value)


def local_matrices(
    coords, forcing: Optional[Callable[[float, float], float]] = None
) -> LocalMatrices:
    """Build every local matrix for one counter-clockwise polygon.

    Without a forcing function the load vector is zero, which is what the
    error analysis needs when it only wants the projector.
    """
    geometry = element_geometry(coords)
    D = build_D(geometry, coords)
    Btilde = build_Btilde(geometry, coords)
    G = build_G(geometry)
    Gtilde, Pi = build_projector(D, Btilde)
    K_local = build_local_stiffness(D, G, Pi)
    if forcing is None:
        f_local = np.zeros(geometry.n_vertices)
    else:
        f_local = build_local_forcing(geometry, forcing)
    return LocalMatrices(geometry, D, Btilde, G, Gtilde, Pi, K_local, f_local)
