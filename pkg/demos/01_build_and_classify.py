"""Build the three-parameter spin-1 family and classify its solvable points.

The family A_1 = superdiag(1,1), A_0 = diag(g, h, g), A_-1 = subdiag(c, c)
supports a nearest-neighbor parent Hamiltonian exactly where the 9x9
two-site word matrix is singular.  Its determinant factors as
(g^2 - h^2)^2 (2 g^2 - h^2) c^6, so the interesting roots are h = +-g
(model II) and h = +-sqrt(2) g (model I).
"""

import numpy as np

from mpschain import models, parent

print("determinant of the two-site word matrix across the (g, h) plane (c = 1):")
for h_over_g in (0.5, 1.0, 2**0.5, 2.0):
    g = 1.0
    det = models.det_word_matrix(g, h_over_g * g, 1.0)
    dim = parent.ground_null_space(models.general_family(g, h_over_g * g, 1.0), 2).dim
    print(f"  h/g = {h_over_g:6.4f}:  det = {det:10.4f}   kernel dimension = {dim}")

print()
print("the determinant matches its closed form on random parameters:")
rng = np.random.default_rng(0)
for _ in range(3):
    g, h, c = rng.uniform(-2, 2, 3)
    print(f"  (g,h,c)=({g:+.3f},{h:+.3f},{c:+.3f}): "
          f"numeric {models.det_word_matrix(g, h, c):+.6e}  "
          f"closed {models.det_exact_form(g, h, c):+.6e}")

print()
print("model I at g = 1 (the biquadratic point):")
fam = models.model_I(1.0)
for lab in fam.labels:
    print(f"  A_{lab} =\n{fam.matrices[lab]}")

print()
print("model II at g = 1 (A_0 proportional to the identity):")
fam2 = models.model_II(1.0)
print(f"  A_0 =\n{fam2.matrices['0']}")

print()
print("normalized correlators depend on g and c only through g^2/c:")
from mpschain import spin
from mpschain.mps import ring_two_point

base = models.general_family(0.9, 0.9, 2.3)
reduced = models.general_family(0.9 / 2.3**0.5, 0.9 / 2.3**0.5, 1.0)
v1 = ring_two_point(base, spin.sz(), spin.sz(), 2, 6)
v2 = ring_two_point(reduced, spin.sz(), spin.sz(), 2, 6)
print(f"  <S_z S_z> at separation 2, N=6:  (g,c)=(0.9,2.3): {v1:.12f}   reduced: {v2:.12f}")
