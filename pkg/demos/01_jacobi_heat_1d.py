"""Walk through the one-dimensional building blocks: polynomials, series, budgets.

Usage: python demos/01_jacobi_heat_1d.py
"""

import numpy as np

from conekernel import eval_jacobi, eval_z, heat_1d, jacobi_norm_sq
from conekernel.orthopoly import plan_budget

lam = 1.5
w = np.linspace(-1, 1, 5)

print(f"symmetric Jacobi polynomials, lambda = {lam}")
for n in range(4):
    print(f"  P_{n}:", np.round(eval_jacobi(n, lam, w), 6))

print("\nnormalized squared norms h_n (probability measure):")
print("  ", [round(jacobi_norm_sq(n, lam), 6) for n in range(5)])

print("\nkernel functions Z_n(w) = P_n(1) P_n(w) / h_n:")
print("  Z_1 at lambda=0 is 3w:", np.round([eval_z(1, 0.0, x) for x in (-1, 0, 0.5, 1)], 6))

print("\n1-d heat kernel at the right endpoint, several time scales:")
for tau_q in (0.02, 0.25, 5.0):
    budget = plan_budget(tau_q, lam, tol=1e-12)
    out = heat_1d(tau_q, lam, 0.3, tol=1e-12)
    print(
        f"  tau/4 = {tau_q:5.2f}: value = {out.value:.10f}, "
        f"terms = {budget.truncation_n}, tail bound = {budget.tail_bound:.1e}"
    )
print("\nthe value tends to 1 as tau grows: every eigenfunction but the constant dies off")
