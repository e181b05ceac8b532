"""Representable tuples at rank 3: membership, the boundary surface and its supporting planes.

    python3 notebooks/01_representable_tuples.py
"""
import numpy as np

from sharplll.geometry import (
    Generator,
    boundary_height_r3,
    boundary_point,
    combine,
    decompose_in_hyperplane,
    generate,
    is_representable,
    maximize_coordinate,
    supporting_hyperplane,
)

# every weight 1/2 generates (1/4, 1/4, 1/4)
g = Generator.constant(3, 0.5)
print("generate(1/2 everywhere) =", generate(g))

# slightly above the quarter point nothing is representable
for t in ([0.25, 0.25, 0.25], [0.26, 0.26, 0.26]):
    res = is_representable(t)
    print(f"{t}: member={res.member} margin={res.margin:+.3e}")

# the oracle height agrees with the closed-form surface
print("\n   a     b   oracle      closed form")
for a, b in [(0.0, 0.0), (0.1, 0.3), (0.25, 0.25), (0.26, 0.26), (0.4, 0.5)]:
    print(f"{a:5.2f} {b:5.2f}  {maximize_coordinate([a, b], 2):.10f}  {boundary_height_r3(a, b):.10f}")

# a boundary point, its supporting plane and a decomposition of a move inside it
t, g = boundary_point([0.1, 0.3], 2)
plane = supporting_hyperplane(t, g)
print("\nboundary point", t, "normal", plane.h)
v = np.array([1.0, -1.0, 0.0])
v -= (v @ plane.h) / (plane.h @ plane.h) * plane.h
alpha = decompose_in_hyperplane(t, g, t + 0.01 * v)
print("reconstruction error", np.abs(combine(t, g, alpha) - (t + 0.01 * v)).max())
