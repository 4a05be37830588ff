"""Global sparse system: assembly, boundary condensation and solve.

Local stiffness blocks are scattered into triplets in element order and
row-major local order, so the assembled matrix is bit-reproducible.
Known boundary values are condensed out; the remaining interior block is
symmetric positive definite and is solved either by dense Cholesky or by
Jacobi-preconditioned conjugate gradients, depending on size.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, cg

from .errors import ElementAssemblyError, SolverError
from .local import local_matrices
from .mesh import Mesh
from .problems import ProblemSpec

#: Interior systems up to this size are solved by dense Cholesky.
DENSE_SOLVER_MAX = 512

#: Relative tolerance for the conjugate-gradient path.
CG_RELATIVE_TOL = 1e-10

#: Accepted solves must reach this relative residual.
RESIDUAL_LIMIT = 1e-9


@dataclass
class TripletBuffer:
    """Accumulates (row, col, value) entries; duplicates sum on finalization."""

    n_dof: int
    _rows: list = field(default_factory=list, repr=False)
    _cols: list = field(default_factory=list, repr=False)
    _values: list = field(default_factory=list, repr=False)

    def add_block(self, block, dofs) -> None:
        """Scatter a dense block onto the given global DOFs, row-major."""
        dofs = np.asarray(dofs, dtype=np.int64)
        n = len(dofs)
        self._rows.append(np.repeat(dofs, n))
        self._cols.append(np.tile(dofs, n))
        self._values.append(np.asarray(block, dtype=float).ravel())

    def to_csr(self) -> sp.csr_matrix:
        if not self._rows:
            return sp.csr_matrix((self.n_dof, self.n_dof))
        rows = np.concatenate(self._rows)
        cols = np.concatenate(self._cols)
        values = np.concatenate(self._values)
        coo = sp.coo_matrix((values, (rows, cols)), shape=(self.n_dof, self.n_dof))
        return coo.tocsr()


@dataclass(frozen=True)
class GlobalSystem:
    """Assembled stiffness matrix, load vector and boundary data.

    ``boundary_values`` holds one value per entry of ``boundary_ids``
    (same order); the boundary function is never re-evaluated after
    assembly.
    """

    K: sp.csr_matrix
    F: np.ndarray
    boundary_ids: np.ndarray
    boundary_values: np.ndarray


def assemble(mesh: Mesh, problem: ProblemSpec) -> GlobalSystem:
    """Build the global system from per-element contributions.

    Parameters
    ----------
    mesh : Mesh
        Validated, counter-clockwise mesh.
    problem : ProblemSpec
        Provides the forcing and boundary functions.

    Raises
    ------
    ElementAssemblyError
        Re-raised from the local construction with the element index.
    """
    n_dof = mesh.n_vertices
    triplets = TripletBuffer(n_dof)
    F = np.zeros(n_dof)
    for index, element in enumerate(mesh.elements):
        try:
            local = local_matrices(mesh.element_coords(index), problem.forcing)
        except ElementAssemblyError as exc:
            raise type(exc)(f"element {index}: {exc}") from exc
        triplets.add_block(local.K_local, element)
        F[element] += local.f_local
    boundary_ids = mesh.boundary
    boundary_values = np.array(
        [problem.boundary(x, y) for x, y in mesh.vertices[boundary_ids]]
    )
    return GlobalSystem(triplets.to_csr(), F, boundary_ids, boundary_values)


def _solve_dense(K_II: sp.csr_matrix, rhs: np.ndarray) -> np.ndarray:
    try:
        factor = scipy.linalg.cho_factor(K_II.toarray())
    except scipy.linalg.LinAlgError as exc:
        raise SolverError(
            f"interior system is not positive definite: {exc}"
        ) from exc
    return scipy.linalg.cho_solve(factor, rhs)


def _solve_cg(K_II: sp.csr_matrix, rhs: np.ndarray) -> np.ndarray:
    n = K_II.shape[0]
    diag = K_II.diagonal()
    if (diag <= 0.0).any():
        raise SolverError(
            "interior system has a non-positive diagonal entry "
            "(singular or disconnected interior vertex)"
        )
    preconditioner = LinearOperator((n, n), matvec=lambda v: v / diag)
    max_iterations = 10 * n
    x, info = cg(
        K_II, rhs, rtol=CG_RELATIVE_TOL, atol=0.0, maxiter=max_iterations, M=preconditioner
    )
    if info != 0:
        rhs_norm = np.linalg.norm(rhs)
        rel = np.linalg.norm(rhs - K_II @ x) / rhs_norm if rhs_norm > 0 else 0.0
        raise SolverError(
            f"conjugate gradients did not converge in {max_iterations} iterations "
            f"(relative residual {rel:.3e})"
        )
    return x


def condense_and_solve(system: GlobalSystem, method: str = "auto") -> np.ndarray:
    """Solve for the interior DOFs and reinstate the boundary values.

    Parameters
    ----------
    system : GlobalSystem
    method : {"auto", "dense", "cg"}
        "auto" picks dense Cholesky when the interior has at most
        ``DENSE_SOLVER_MAX`` DOFs and conjugate gradients otherwise.

    Returns
    -------
    ndarray
        Full DOF vector; boundary entries are the assembled boundary
        values copied verbatim.
    """
    if method not in ("auto", "dense", "cg"):
        raise ValueError(f"unknown solver method {method!r}")
    n = system.K.shape[0]
    U = np.zeros(n)
    U[system.boundary_ids] = system.boundary_values
    interior = np.setdiff1d(np.arange(n), system.boundary_ids)
    if interior.size == 0:
        return U

    K = system.K.tocsr()
    K_II = K[interior][:, interior].tocsr()
    K_IB = K[interior][:, system.boundary_ids]
    rhs = system.F[interior] - K_IB @ system.boundary_values

    use_dense = method == "dense" or (
        method == "auto" and interior.size <= DENSE_SOLVER_MAX
    )
    x = _solve_dense(K_II, rhs) if use_dense else _solve_cg(K_II, rhs)

    if not np.isfinite(x).all():
        raise SolverError("solver produced non-finite values")
    scale = max(np.linalg.norm(system.F), np.linalg.norm(rhs))
    residual = np.linalg.norm(K_II @ x - rhs)
    relative = residual / scale if scale > 0.0 else residual
    if relative > RESIDUAL_LIMIT:
        raise SolverError(
            f"relative residual {relative:.3e} exceeds {RESIDUAL_LIMIT:.0e}"
        )
    U[interior] = x
    return U


def solve_poisson(mesh: Mesh, problem: ProblemSpec, method: str = "auto") -> np.ndarray:
    """Assemble and solve in one step; returns the full DOF vector."""
    return condense_and_solve(assemble(mesh, problem), method=method)
