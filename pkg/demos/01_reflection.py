"""
Reflection off a single-sided cavity
====================================

How a probe photon's reflection depends on whether the ensemble in the
cavity is excited, and how close the realistic coefficients come to the
ideal pair (r0, r) = (-1, 1).
"""
import numpy as np

from cavity_distill import CavityParams, reflect_coupled, reflect_empty

# All rates are in units of kappa. The defaults put the photon slightly off
# resonance (delta' = gamma = 0.0566) with no atom-cavity detuning.
p = CavityParams(g=0.8)
print("default parameters:", p)
print("  r0 =", np.round(reflect_empty(p), 6), " |r0| =", round(abs(reflect_empty(p)), 12))
print("  r  =", np.round(reflect_coupled(p), 6), " |r| =", round(abs(reflect_coupled(p)), 6))

# The empty cavity only shifts the phase; the coupled one also absorbs a
# little, so |r| < 1. Stronger coupling pushes r towards +1.
print("\n g/kappa      r (on resonance)   cooperativity")
for g in (0.1, 0.2, 0.4, 0.8, 1.6, 4.0):
    q = CavityParams(g=g, deltaPrime=0.0)
    print(f"  {g:4.1f}   {reflect_coupled(q).real:+.6f}        {q.cooperativity:9.1f}")

# Below g/kappa ~ 0.12 the coupled coefficient is still negative: the
# cavity barely tells |G> from |S>, which is why weak coupling is useless.
