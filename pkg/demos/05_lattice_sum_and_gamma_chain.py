"""The certified stabilizer lattice sum against its integral majorant, and
the Gamma-function closed forms of the two auxiliary integrals.
"""

import math

from pbl import ConstantModel, GAUSSIAN_SPEC, cusp_lattice_sum, cusp_term_log, gamma_integral_chain

print("Certified lattice sum sum_L (k/2pi)^k / |k/2pi + |a|^2/2 + ib|^k:")
print("   k      sum        majorant   r_alpha  r_beta    terms")
for k in (6, 8, 12, 24, 50, 100):
    res = cusp_lattice_sum(k, GAUSSIAN_SPEC, rel_tol=1e-8)
    majorant = math.exp(cusp_term_log(k, ConstantModel(1.0, 0), 1.0))
    print(
        f"  {k:4d}  {res.value.to_float():9.6f}  {majorant:9.6f}  "
        f"{res.r_alpha:7.2f}  {res.r_beta:7.1f}  {res.n_terms:7d}"
    )
print("(the sum grows like sqrt(k), and the closed-form majorant dominates it)")

print("\nGamma chain: quadrature vs closed forms")
print("   k    beta ratio          r ratio")
for k in (6, 8, 12, 20, 40):
    gc = gamma_integral_chain(k)
    print(f"  {k:3d}   {gc.beta_ratio:.15f}   {gc.r_ratio:.15f}")
print("(the beta integral matches its closed form; the r-integral's printed")
print(" closed form carries a constant factor 2, reported here as ratio 0.5)")
