"""Meshes, element geometry and the energy norm.

Builds the two structured domains, checks their areas against the exact
values, and shows the P1 interpolant of sin(pi x) sin(pi y) converging to the
exact Dirichlet energy pi^2 / 2 at second order in the mesh width.
"""

import numpy as np

from adnewton import (element_geometry, energy_norm, exact_solution, interpolate,
                      l_shape_mesh, unit_square_mesh)

square = unit_square_mesh(8)
lshape = l_shape_mesh(8)
for name, mesh, exact_area in (("unit square", square, 1.0), ("L-shape", lshape, 3.0)):
    area = sum(element_geometry(mesh, t)[0] for t in range(mesh.n_triangles))
    print(f"{name}: {mesh.n_vertices} vertices, {mesh.n_triangles} triangles, "
          f"{mesh.n_interior} interior DOFs, area {area:.15f} (exact {exact_area})")

print("\nP1 hat-function gradients on the first triangle of the unit square:")
area, grads = element_geometry(square, 0)
print(f"  area = {area}")
for k, g in enumerate(grads):
    print(f"  grad phi_{k} = ({g[0]:+.3f}, {g[1]:+.3f})")
print(f"  sum of gradients = {grads.sum(axis=0)}  (partition of unity)")

print("\nEnergy of the interpolated manufactured solution vs the exact pi^2/2:")
value, _ = exact_solution()
exact = np.pi ** 2 / 2
print(f"{'n':>5} {'energy^2':>18} {'rel. error':>12}")
for n in (4, 8, 16, 32, 64):
    mesh = unit_square_mesh(n)
    u = interpolate(mesh, value)
    e2 = energy_norm(mesh, u) ** 2
    print(f"{n:>5} {e2:>18.12f} {abs(e2 - exact) / exact:>12.2e}")
print(f"exact {exact:>18.12f}")
