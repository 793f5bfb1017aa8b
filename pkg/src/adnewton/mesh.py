"""Structured P1 triangulations of the unit square and the L-shaped domain.

Both factories split every grid cell into two triangles along the same
lower-left-to-upper-right diagonal, orient all triangles counter-clockwise,
and classify boundary vertices topologically (an edge on exactly one triangle
is a boundary edge). Interior vertices are numbered contiguously from 0 in
vertex order; those numbers are the degrees of freedom everywhere else in the
library.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class Mesh:
    """Conforming triangulation with boundary bookkeeping.

    vertices       -- (n_vertices, 2) float coordinates
    triangles      -- (n_triangles, 3) vertex indices, counter-clockwise
    is_boundary    -- (n_vertices,) bool, True exactly on the domain boundary
    interior_index -- (n_vertices,) int, interior DOF number or -1 on boundary
    """

    vertices: np.ndarray
    triangles: np.ndarray
    is_boundary: np.ndarray
    interior_index: np.ndarray

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_triangles(self) -> int:
        return self.triangles.shape[0]

    @property
    def n_interior(self) -> int:
        return int((~self.is_boundary).sum())

    @property
    def interior_vertices(self) -> np.ndarray:
        """Vertex indices of the interior DOFs, in DOF order."""
        return np.flatnonzero(~self.is_boundary)


def boundary_edges(triangles: np.ndarray) -> np.ndarray:
    """Edges that belong to exactly one triangle, as sorted vertex pairs."""
    edges = np.concatenate([triangles[:, [0, 1]], triangles[:, [1, 2]], triangles[:, [2, 0]]])
    edges = np.sort(edges, axis=1)
    uniq, counts = np.unique(edges, axis=0, return_counts=True)
    return uniq[counts == 1]


def _mesh_from_cells(xs: np.ndarray, ys: np.ndarray, keep_cell) -> Mesh:
    """Triangulate the kept cells of the tensor grid xs-by-ys.

    keep_cell(i, j) decides whether cell (i, j) (lower-left corner at
    (xs[i], ys[j])) is part of the domain. Unused grid vertices are dropped
    and the remaining ones renumbered in grid order.
    """
    nx = len(xs) - 1
    ny = len(ys) - 1
    grid_id = lambda i, j: j * (nx + 1) + i

    tris = []
    for j in range(ny):
        for i in range(nx):
            if not keep_cell(i, j):
                continue
            v00 = grid_id(i, j)
            v10 = grid_id(i + 1, j)
            v01 = grid_id(i, j + 1)
            v11 = grid_id(i + 1, j + 1)
            # diagonal v00 -> v11, both triangles counter-clockwise
            tris.append((v00, v10, v11))
            tris.append((v00, v11, v01))
    tris = np.asarray(tris, dtype=np.int64)

    used = np.zeros((nx + 1) * (ny + 1), dtype=bool)
    used[tris.ravel()] = True
    new_id = np.full(used.size, -1, dtype=np.int64)
    new_id[used] = np.arange(used.sum())

    gx, gy = np.meshgrid(xs, ys)
    vertices = np.column_stack([gx.ravel(), gy.ravel()])[used]
    triangles = new_id[tris]

    is_boundary = np.zeros(vertices.shape[0], dtype=bool)
    is_boundary[np.unique(boundary_edges(triangles))] = True
    interior_index = np.full(vertices.shape[0], -1, dtype=np.int64)
    interior_index[~is_boundary] = np.arange((~is_boundary).sum())

    return Mesh(vertices=vertices, triangles=triangles,
                is_boundary=is_boundary, interior_index=interior_index)


def unit_square_mesh(n: int) -> Mesh:
    """Uniform triangulation of (0,1)^2 with n cells per side.

    (n+1)^2 vertices, 2*n^2 triangles, (n-1)^2 interior DOFs.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    coords = np.linspace(0.0, 1.0, n + 1)
    return _mesh_from_cells(coords, coords, lambda i, j: True)


def l_shape_mesh(n: int) -> Mesh:
    """Uniform triangulation of (-1,1)^2 minus [0,1]x[0,1], n cells per unit length.

    The three unit blocks share the grid, so interface vertices coincide by
    construction; the reentrant edges along x=0 and y=0 are boundary.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    coords = np.linspace(-1.0, 1.0, 2 * n + 1)
    return _mesh_from_cells(coords, coords, lambda i, j: not (i >= n and j >= n))


def element_geometry(mesh: Mesh, t: int) -> tuple[float, np.ndarray]:
    """Area and the three constant hat-function gradients of triangle t.

    Returns (area, grads) with grads of shape (3, 2); grads[k] is the gradient
    of the hat function attached to vertex triangles[t, k].
    """
    if not 0 <= t < mesh.n_triangles:
        raise IndexError(f"triangle index {t} out of range")
    p0, p1, p2 = mesh.vertices[mesh.triangles[t]]
    twice_area = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1])
    if twice_area <= 0.0:
        raise ValueError(f"triangle {t} is degenerate or negatively oriented")
    grads = np.array([
        [p1[1] - p2[1], p2[0] - p1[0]],
        [p2[1] - p0[1], p0[0] - p2[0]],
        [p0[1] - p1[1], p1[0] - p0[0]],
    ]) / twice_area
    return 0.5 * twice_area, grads


def dump_mesh(mesh: Mesh, path) -> None:
    """Write the mesh as plain text: `vertex x y` and `triangle i j k` lines."""
    with open(path, "w") as fh:
        for x, y in mesh.vertices:
            fh.write(f"vertex {x:.17g} {y:.17g}\n")
        for a, b, c in mesh.triangles:
            fh.write(f"triangle {a} {b} {c}\n")
