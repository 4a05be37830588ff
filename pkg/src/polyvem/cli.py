"""Command-line interface.

Subcommands: solve, patch-test, converge, mesh-gen. All failures raised
by the library exit with status 1 and a diagnostic on stderr; argparse
usage errors exit with status 2.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .analysis import convergence_study, patch_test
from .errors import PolyVemError
from .export import write_solution_csv, write_svg, write_vtk
from .figures import save_convergence_figure, save_solution_figure
from .meshfile import GENERATOR_KINDS, generate_structured, read_mesh, write_mesh
from .problems import PROBLEMS, get_problem
from .system import solve_poisson


def _parse_coeffs(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated values a,b,c")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_levels(text: str):
    try:
        levels = [int(p) for p in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if len(levels) < 3:
        raise argparse.ArgumentTypeError("need at least three refinement levels")
    return levels


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyvem",
        description="Virtual element solver for the 2D Poisson problem "
        "on polygonal meshes.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="solve a problem on a mesh file")
    solve.add_argument("--mesh", required=True, help="mesh file path")
    solve.add_argument(
        "--problem", required=True, choices=sorted(PROBLEMS), help="built-in problem"
    )
    solve.add_argument("--method", choices=("auto", "dense", "cg"), default="auto")
    solve.add_argument("--out-vtk", help="write the solution as legacy ASCII VTK")
    solve.add_argument("--out-svg", help="render the solution to an SVG file")
    solve.add_argument("--out-csv", help="write vertex_id,x,y,u rows")
    solve.add_argument("--out-png", help="render the solution with matplotlib")

    patch = commands.add_parser(
        "patch-test", help="check exactness for linear boundary data"
    )
    patch.add_argument("--mesh", required=True)
    patch.add_argument(
        "--coeffs",
        type=_parse_coeffs,
        default=(1.0, 2.0, -3.0),
        help="a,b,c for g = a + b*x + c*y (default 1,2,-3)",
    )
    patch.add_argument(
        "--tol",
        type=float,
        default=None,
        help="optional threshold; exceeding it exits with status 1",
    )

    converge = commands.add_parser(
        "converge", help="refinement study on generated meshes"
    )
    converge.add_argument("--problem", choices=sorted(PROBLEMS), default="sine")
    converge.add_argument("--kind", choices=GENERATOR_KINDS, default="squares")
    converge.add_argument(
        "--levels",
        type=_parse_levels,
        default=[8, 16, 32, 64],
        help="comma-separated cells-per-side, e.g. 8,16,32,64",
    )
    converge.add_argument("--out-csv", help="write the table as CSV (default: stdout)")
    converge.add_argument("--out-png", help="write a log-log error figure")

    meshgen = commands.add_parser("mesh-gen", help="write a generated mesh file")
    meshgen.add_argument("--kind", choices=GENERATOR_KINDS, required=True)
    meshgen.add_argument("--n", type=int, required=True, help="cells per side")
    meshgen.add_argument("--out", required=True, help="output mesh file path")

    return parser


def _run_solve(args) -> int:
    mesh = read_mesh(args.mesh)
    problem = get_problem(args.problem)
    U = solve_poisson(mesh, problem, method=args.method)
    interior = mesh.interior.size
    print(
        f"mesh: {mesh.n_elements} elements, {mesh.n_vertices} vertices "
        f"({interior} interior)"
    )
    print("u: min %.17g max %.17g" % (float(U.min()), float(U.max())))
    if args.out_vtk:
        write_vtk(mesh, U, args.out_vtk)
        print(f"wrote {args.out_vtk}")
    if args.out_svg:
        write_svg(mesh, U, args.out_svg)
        print(f"wrote {args.out_svg}")
    if args.out_csv:
        write_solution_csv(mesh, U, args.out_csv)
        print(f"wrote {args.out_csv}")
    if args.out_png:
        save_solution_figure(mesh, U, args.out_png, title=f"{args.problem} problem")
        print(f"wrote {args.out_png}")
    return 0


def _run_patch_test(args) -> int:
    mesh = read_mesh(args.mesh)
    deviation = patch_test(mesh, args.coeffs)
    a, b, c = args.coeffs
    print("g = %.17g + %.17g*x + %.17g*y" % (a, b, c))
    print("max vertex deviation = %.3e" % deviation)
    if args.tol is not None and deviation > args.tol:
        print(f"deviation exceeds tolerance {args.tol:g}", file=sys.stderr)
        return 1
    return 0


def _run_converge(args) -> int:
    problem = get_problem(args.problem)
    meshes = [generate_structured(args.kind, n) for n in args.levels]
    table = convergence_study(meshes, problem)
    if args.out_csv:
        table.write_csv(args.out_csv)
        print(f"wrote {args.out_csv}")
    else:
        sys.stdout.write(table.to_csv())
    if args.out_png:
        save_convergence_figure(table, args.out_png)
        print(f"wrote {args.out_png}")
    return 0


def _run_mesh_gen(args) -> int:
    mesh = generate_structured(args.kind, args.n)
    write_mesh(mesh, args.out)
    print(
        f"wrote {args.out}: {mesh.n_elements} elements, {mesh.n_vertices} vertices, "
        f"{len(mesh.boundary)} boundary vertices"
    )
    return 0


_RUNNERS = {
    "solve": _run_solve,
    "patch-test": _run_patch_test,
    "converge": _run_converge,
    "mesh-gen": _run_mesh_gen,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _RUNNERS[args.command](args)
    except (PolyVemError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
