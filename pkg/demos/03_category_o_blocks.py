# %% [markdown]
# # Grothendieck groups of category O blocks
#
# A regular integral block has one Verma module and one simple module for
# each element of W. Its composition multiplicities are KL polynomials at 1.
# Projective functors and translations to and from walls act as integer
# matrices.

# %%
import numpy as np

from klw.blocks import CategoryO, sl2_tensor_case, sl2_zero_case_in_block
from klw.hecke import KLTable

O = CategoryO(KLTable.build("A2"))
W = O.system
print("index set:", O.regular.index_set)
print("[Delta_x : L_y] =")
print(O.multiplicity_matrix(O.regular))

# %% [markdown]
# Translation through the s1 wall is right multiplication by C'_s1 on
# Verma classes. On simple classes it kills L_w unless w s1 < w.

# %%
s1 = W.generators[0]
for w in W.all_elements():
    print(f"theta_s1 L[{w!r}] = {O.theta_on_simple(s1, w)}")

# %% [markdown]
# Going onto the wall and back out is the projective functor of the longest
# element of W_J. Going out and back onto the wall multiplies by |W_J|.

# %%
for P in W.parabolic_subsets()[1:]:
    r = O.wall_crossing_vs_theta(P)
    print(f"J={sorted(P.J)}: out.on == theta({r.longest!r}) {r.out_on_equals_theta}; "
          f"on.out == {r.stabilizer_order}*Id {r.on_out_is_scalar}")

# %% [markdown]
# For a simple L on the wall, the class of its translation out of the wall
# contains the simple with the same label exactly |W_J| times, and no other
# simple indexed by a maximal coset representative.

# %%
for row in O.thmout_table([1]):
    print(f"y={row.y!r:<10} multiplicity {row.multiplicity} (|W_J| = {row.stabilizer_order})  "
          f"image {row.image}")
big = CategoryO(KLTable.build("B2"))
print("B2, full wall:", big.thmout_multiplicity([1, 2], big.system.longest_element()))

# %% [markdown]
# The rank-one case: tensoring with the natural sl_2 module, organised by the
# value of the weight on the coroot.

# %%
for value in ("1/2", 5, 1, 0):
    case = sl2_tensor_case(value)
    print(f"lambda_i = {value}: {case.classification.value:<16} {case.outcome:<22} {case.verma_identity}")
for name, vec in sl2_zero_case_in_block().items():
    print(f"  {name:<16} {vec}")

# %% [markdown]
# Functor composition follows the structure constants of the KL basis.

# %%
from klw.hecke import HeckeAlgebra  # noqa: E402

H = HeckeAlgebra(O.table)
defects = [np.abs(O.composition_defect(x, y, H)).sum() for x in W.all_elements() for y in W.all_elements()]
print("theta_y theta_x == sum_z h_{x,y,z}(1) theta_z for all pairs:", not any(defects))
