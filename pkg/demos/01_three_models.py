"""Tour of the three coordinate models and the Cayley maps between them.

The same hyperbolic 2-space is cut out by three Hermitian forms of
signature (2,1): the unit ball, and two unbounded Siegel-type domains.
A point belongs to a model exactly when its lift (z1, z2, 1) pairs
negatively with itself.
"""

import numpy as np

from pbl import (
    ModelPoint,
    apply,
    ball_form,
    cayley_gamma2,
    cayley_gamma23,
    cayley_gamma3,
    model2_form,
    model3_form,
    model_indicator,
    verify_isometry,
)

print("The three standard forms:")
for name, form in [("ball", ball_form(2)), ("model 2", model2_form()), ("model 3", model3_form())]:
    eigs = np.linalg.eigvalsh(form.entries)
    print(f"  {name:8s} signature ({np.sum(eigs > 0)},{np.sum(eigs < 0)})")
    print(np.array2string(form.entries, prefix="    "))

print("\nForm-intertwining residuals (should all be exactly 0):")
print("  g3* H g3 - H3:   ", verify_isometry(cayley_gamma3().mat, ball_form(2), model3_form()))
print("  g23* H3 g23 - H2:", verify_isometry(cayley_gamma23().mat, model3_form(), model2_form()))
print("  g2* H g2 - H2:   ", verify_isometry(cayley_gamma2().mat, ball_form(2), model2_form()))

print("\nTransporting one point around the triangle of models:")
p2 = ModelPoint.m2(0.3 + 1.4j, 0.5)
print(f"  start in model 2:  z = {p2.coords}, indicator {model_indicator(p2):+.4f}")
p3 = apply(cayley_gamma23(), p2)
print(f"  via gamma23 -> M3: z = {p3.coords}, indicator {model_indicator(p3):+.4f}")
pb = apply(cayley_gamma3(), p3)
print(f"  via gamma3 -> ball: z = {pb.coords}, |z| = {np.linalg.norm(pb.coords):.4f}")
pb2 = apply(cayley_gamma2(), p2)
print(f"  direct gamma2:      z = {pb2.coords}")
print(f"  routes agree to {np.abs(pb.coords - pb2.coords).max():.2e}")

print("\nMembership predicates vs the sign of the indicator (2000 random draws):")
rng = np.random.default_rng(1)
agree = 0
for _ in range(2000):
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    zt = np.append(z, 1)
    ball_in = abs(z[0]) ** 2 + abs(z[1]) ** 2 < 1
    ind = (zt.conj() @ ball_form(2).entries @ zt).real
    agree += (ind < 0) == ball_in
print(f"  ball:   {agree}/2000 agree")
