"""Matplotlib renderings written to files by the CLI report paths.

Figures are drawn on explicit Figure objects through the Agg canvas, so
no interactive backend is touched.
"""

from __future__ import annotations

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.collections import PolyCollection
from matplotlib.figure import Figure

from .analysis import ConvergenceTable
from .mesh import Mesh


def save_solution_figure(mesh: Mesh, U, path, title: str | None = None) -> None:
    """Filled polygon plot of the vertex solution, coloured per element."""
    U = np.asarray(U, dtype=float)
    polygons = [mesh.element_coords(i) for i in range(mesh.n_elements)]
    means = np.array([U[e].mean() for e in mesh.elements])

    figure = Figure(figsize=(6.4, 5.6))
    FigureCanvasAgg(figure)
    axes = figure.add_subplot(1, 1, 1)
    collection = PolyCollection(
        polygons, edgecolors="black", linewidths=0.3, cmap="viridis"
    )
    collection.set_array(means)
    axes.add_collection(collection)
    axes.autoscale_view()
    axes.set_aspect("equal")
    axes.set_xlabel("x")
    axes.set_ylabel("y")
    if title:
        axes.set_title(title)
    figure.colorbar(collection, ax=axes, label="u")
    figure.savefig(path, dpi=150, bbox_inches="tight")


def save_convergence_figure(table: ConvergenceTable, path) -> None:
    """Log-log error plot with first- and second-order reference slopes."""
    figure = Figure(figsize=(6.4, 4.8))
    FigureCanvasAgg(figure)
    axes = figure.add_subplot(1, 1, 1)
    h = table.h_max
    axes.loglog(h, table.vertex_l2, "o-", label="vertex L2 error")
    if not np.isnan(table.h1).all():
        axes.loglog(h, table.h1, "s-", label="energy-norm error")
        axes.loglog(
            h, table.h1[0] * (h / h[0]), "k:", linewidth=0.8, label="order 1"
        )
    axes.loglog(
        h,
        table.vertex_l2[0] * (h / h[0]) ** 2,
        "k--",
        linewidth=0.8,
        label="order 2",
    )
    axes.invert_xaxis()
    axes.set_xlabel("max element diameter h")
    axes.set_ylabel("error")
    axes.grid(True, which="both", linewidth=0.3)
    axes.legend()
    figure.savefig(path, dpi=150, bbox_inches="tight")
