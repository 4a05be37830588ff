"""Built-in Poisson problem instances.

A problem bundles the forcing f, the Dirichlet boundary function g and,
when known, the exact solution (with its gradient when error studies in
the energy norm are wanted). New problems are added in code: construct a
ProblemSpec and, to expose it on the command line, register it in
PROBLEMS.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

ScalarField = Callable[[float, float], float]
VectorField = Callable[[float, float], tuple]


@dataclass(frozen=True)
class ProblemSpec:
    """Poisson problem data: -laplace(u) = f in the domain, u = g on its boundary."""

    name: str
    forcing: ScalarField
    boundary: ScalarField
    exact: Optional[ScalarField] = None
    exact_gradient: Optional[VectorField] = None


def default_problem() -> ProblemSpec:
    """Smooth sample data: g = x*y*sin(pi*x), f = 15*sin(pi*x)*sin(pi*y)."""

    def forcing(x, y):
        return 15.0 * math.sin(math.pi * x) * math.sin(math.pi * y)

    def boundary(x, y):
        return x * y * math.sin(math.pi * x)

    return ProblemSpec("default", forcing, boundary)


def l_shaped_problem() -> ProblemSpec:
    """Harmonic corner singularity: f = 0, g = r^(2/3) * sin((2*theta - pi)/3).

    The angle is taken in [0, 2*pi) counter-clockwise from the positive
    x axis, which keeps g single-valued on an L-shaped domain occupying
    the first three quadrants (the notch removed from the fourth). The
    boundary data is the trace of a harmonic function, so the same
    formula doubles as the exact solution; its gradient is unbounded at
    the corner and is not provided.
    """

    def harmonic(x, y):
        r = math.hypot(x, y)
        if r == 0.0:
            return 0.0
        theta = math.atan2(y, x)
        if theta < 0.0:
            theta += 2.0 * math.pi
        return r ** (2.0 / 3.0) * math.sin((2.0 * theta - math.pi) / 3.0)

    def forcing(x, y):
        return 0.0

    return ProblemSpec("l-shaped", forcing, harmonic, exact=harmonic)


def manufactured_sine_problem() -> ProblemSpec:
    """Manufactured convergence benchmark on the unit square.

    u = sin(pi*x)*sin(pi*y) vanishes on the boundary and satisfies
    -laplace(u) = 2*pi^2*sin(pi*x)*sin(pi*y).
    """

    def exact(x, y):
        return math.sin(math.pi * x) * math.sin(math.pi * y)

    def exact_gradient(x, y):
        return (
            math.pi * math.cos(math.pi * x) * math.sin(math.pi * y),
            math.pi * math.sin(math.pi * x) * math.cos(math.pi * y),
        )

    def forcing(x, y):
        return 2.0 * math.pi**2 * math.sin(math.pi * x) * math.sin(math.pi * y)

    def boundary(x, y):
        return 0.0

    return ProblemSpec("sine", forcing, boundary, exact, exact_gradient)


PROBLEMS: dict[str, Callable[[], ProblemSpec]] = {
    "default": default_problem,
    "l-shaped": l_shaped_problem,
    "sine": manufactured_sine_problem,
}


def get_problem(name: str) -> ProblemSpec:
    """Look up a built-in problem by its CLI name."""
    try:
        factory = PROBLEMS[name]
    except KeyError:
        known = ", ".join(sorted(PROBLEMS))
        raise ValueError(f"unknown problem {name!r} (known: {known})") from None
    return factory()


def gradient_max_deviation(problem: ProblemSpec, points, step: float = 1e-6) -> float:
    """Central-difference check of exact_gradient against exact.

    Returns the largest deviation over the sample points, relative to
    max(1, |gradient|); guards against transcription errors in hand-coded
    gradients.
    """
    if problem.exact is None or problem.exact_gradient is None:
        raise ValueError("problem must provide exact and exact_gradient")
    u = problem.exact
    worst = 0.0
    for x, y in np.atleast_2d(np.asarray(points, dtype=float)):
        gx, gy = problem.exact_gradient(x, y)
        fx = (u(x + step, y) - u(x - step, y)) / (2.0 * step)
        fy = (u(x, y + step) - u(x, y - step)) / (2.0 * step)
        scale = max(1.0, math.hypot(gx, gy))
        worst = max(worst, math.hypot(fx - gx, fy - gy) / scale)
    return worst
