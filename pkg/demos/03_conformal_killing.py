"""Integral identity for conformal Killing fields, and what it forbids.

If xi satisfies Lie_xi g = 2 Psi g, then on every closed spacelike
submanifold S of dimension d:

    integral_S Psi = (1/d) integral_S g(xi, H)

When Psi has a definite sign the right side inherits it, which obstructs
trapped surfaces: with Psi > 0 the flux integral must be positive, so H
cannot be everywhere past-causal; with a true Killing field (Psi = 0)
the flux must vanish, ruling out closed trapped surfaces entirely.
"""

from trapsurf import GridSpec, catalog, killing_integral_check

grid = GridSpec((24, 24))

# expanding universe (a = t): xi = a d/dt has Psi = 1 > 0
sphere = catalog.instantiate("comoving_sphere_rw", scale="t")
xi = catalog.instantiate("rw_conformal", scale="t")
res = killing_integral_check(sphere, xi, grid)
print("Robertson-Walker comoving sphere, xi = a(t) d/dt")
print(f"  lhs = int Psi        : {res.lhs:.9f}")
print(f"  rhs = (1/d) int flux : {res.rhs:.9f}")
print(f"  residual             : {res.residual:.3e}")
print(f"  Psi sign / flux      : {res.psi_sign} / {res.flux:+.6f}")
print(f"  obstruction satisfied: {res.obstruction_ok}")

# flat space Killing fields: Psi = 0, flux must vanish on any closed S
print("\nMinkowski Killing fields on closed surfaces (flux must vanish):")
for emb_name in ("round_sphere", "ring_torus"):
    emb = catalog.instantiate(emb_name)
    for field_name in ("time_translation", "boost_x", "rotation_z"):
        res = killing_integral_check(emb, catalog.instantiate(field_name), grid)
        print(f"  {emb_name:12} / {field_name:16} flux = {res.flux:+.3e}")
