"""Lowest-order virtual element method for the 2D Poisson problem.

Solves -laplace(u) = f with Dirichlet data on general polygonal meshes,
including non-convex elements and elements with co-planar edges. The
discrete space is never evaluated in element interiors; everything is
driven by vertex degrees of freedom and an exactly computable projection
onto linear polynomials. On triangles the method coincides with the
standard linear finite element method.
"""

from .analysis import (
    ConvergenceTable,
    ErrorReport,
    NonMonotoneConvergenceWarning,
    compute_errors,
    convergence_study,
    patch_test,
)
from .errors import (
    AnalysisError,
    ElementAssemblyError,
    ForcingEvaluationError,
    GeometryError,
    MeshFormatError,
    MeshValidationError,
    PolyVemError,
    SolverError,
)
from .export import write_solution_csv, write_svg, write_vtk
from .local import LocalMatrices, local_matrices
from .mesh import (
    CentroidOutsideWarning,
    ElementGeometry,
    Mesh,
    element_geometry,
    validate_and_orient,
)
from .meshfile import generate_structured, read_mesh, write_mesh
from .problems import (
    PROBLEMS,
    ProblemSpec,
    default_problem,
    get_problem,
    l_shaped_problem,
    manufactured_sine_problem,
)
from .system import GlobalSystem, assemble, condense_and_solve, solve_poisson

__version__ = "0.1.0"

__all__ = [
    "AnalysisError",
    "CentroidOutsideWarning",
    "ConvergenceTable",
    "ElementAssemblyError",
    "ElementGeometry",
    "ErrorReport",
    "ForcingEvaluationError",
    "GeometryError",
    "GlobalSystem",
    "LocalMatrices",
    "Mesh",
    "MeshFormatError",
    "MeshValidationError",
    "NonMonotoneConvergenceWarning",
    "PolyVemError",
    "PROBLEMS",
    "ProblemSpec",
    "SolverError",
    "assemble",
    "compute_errors",
    "condense_and_solve",
    "convergence_study",
    "default_problem",
    "element_geometry",
    "generate_structured",
    "get_problem",
    "l_shaped_problem",
    "local_matrices",
    "manufactured_sine_problem",
    "patch_test",
    "read_mesh",
    "solve_poisson",
    "validate_and_orient",
    "write_mesh",
    "write_solution_csv",
    "write_svg",
    "write_vtk",
]
