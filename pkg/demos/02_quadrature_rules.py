"""Show the measure rules: the symmetric [-1,1] family, its Dirac branch, and the
composite rules over the solid cone and the conic surface.

Usage: python demos/02_quadrature_rules.py
"""

import numpy as np

from conekernel import ConeParams, SurfaceParams, cone_rule, pi_rule, surface_rule
from conekernel.selftest import pi_moment_oracle

print("pi_rule(nu, m): Gauss rule for the density (1-w^2)^(nu-1/2), normalized")
for nu in (0.0, 1.0):
    rule = pi_rule(nu, 6)
    got = float(rule.weights @ rule.nodes**2)
    print(f"  nu = {nu}: int w^2 = {got:.12f} (oracle 1/(2nu+2) = {1/(2*nu+2):.12f})")

print("\nnu = -1/2 degenerates to two endpoint atoms of weight 1/2:")
dirac = pi_rule(-0.5, 10)
print("  nodes", dirac.nodes, "weights", dirac.weights)

print("\ncomposite rule over the solid cone (d=2, mu=1/2, gamma=0):")
params = ConeParams(d=2, mu=0.5, gamma=0.0)
rule = cone_rule(params, orders=(12, 12, 16))
xs, ts, ws = rule.points()
print(f"  {len(ws)} points, total weight {ws.sum():.12f}")
print(f"  int t dnu = {float(ws @ ts):.12f} (closed form 3/4)")

print("\ncomposite rule over the conic surface (d=3, gamma=2):")
sparams = SurfaceParams(d=3, gamma=2.0)
srule = surface_rule(sparams, orders=(12, 16))
xs, ts, ws = srule.points()
want = (sparams.d - 1) / (sparams.d + sparams.gamma)
print(f"  int t dnu = {float(ws @ ts):.12f} (closed form (d-1)/(d+gamma) = {want:.12f})")
print(f"  all points satisfy ||x|| = t: max gap {np.abs(np.linalg.norm(xs, axis=1) - ts).max():.1e}")
