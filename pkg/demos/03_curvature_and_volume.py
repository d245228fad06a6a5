"""The curvature-form determinant check and geodesic-ball volumes.

The weight-one norm factor 1 - |z|^2 has curvature form proportional to the
hyperbolic metric, so its determinant relative to the hyperbolic volume form
is the constant (4 pi)^-n at every point; finite differences recover it.
"""

import math

import numpy as np

from pbl import ModelPoint, ball_volume, curvature_determinant

print("Finite-difference curvature determinant vs (4 pi)^-n:")
rng = np.random.default_rng(7)
for n in (2, 3):
    target = (4 * math.pi) ** -n
    print(f"  n = {n}: target {target:.10e}")
    for _ in range(4):
        v = rng.normal(size=n) + 1j * rng.normal(size=n)
        v *= rng.uniform(0.1, 0.7) / np.linalg.norm(v)
        det = curvature_determinant(ModelPoint.ball(v))
        print(f"    at |z| = {np.linalg.norm(v):.3f}: {det:.10e}  (rel err {abs(det - target) / target:.1e})")

print("\nGeodesic ball volume 4 pi sinh^{2n}(r/2) / n! :")
print("      r      n=2 volume        n=3 volume")
for r in (0.5, 1.0, 2.0, 4.0, 8.0):
    print(f"  {r:5.1f}  {ball_volume(2, r):14.6e}  {ball_volume(3, r):14.6e}")
print("(growth ~ e^{nr}: doubling r at n=2 multiplies the volume by ~e^{2r})")
