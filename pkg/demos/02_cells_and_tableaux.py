# %% [markdown]
# # Cells, tableaux and the two facts
#
# Kazhdan-Lusztig cells of S_4 are compared with Robinson-Schensted fibres.
# Then we look at what changes in type B.

# %%
from klw.cells import cells, check_fact1, check_fact2, rs_cells, rs_insert
from klw.hecke import KLTable

a3 = KLTable.build("A3")
for side in ("left", "right", "two-sided"):
    kl, rs = cells(a3, side), rs_cells(a3.system, side)
    print(f"{side:>9} cells: {len(kl):2d}   same as tableau fibres: {kl.as_sets() == rs.as_sets()}")

# %% [markdown]
# The two-sided cells are labelled by shapes. Going up in the cell order means
# going down in dominance order, from the identity (shape 4) to the longest
# element (shape 1111).

# %%
two = cells(a3, "two-sided")
for i in range(len(two)):
    shape = rs_insert(two.elements(i)[0]).shape
    print(f"cell {i}: shape {''.join(map(str, shape)):<5} size {len(two.blocks[i]):2d}  covers -> "
          f"{[j for a, j in two.covers() if a == i]}")

# %% [markdown]
# A small left cell, written out with its insertion and recording tableaux:
# the recording tableau Q is constant along a left cell.

# %%
left = cells(a3, "left")
for w in left.elements(2):
    pair = rs_insert(w)
    print(f"{w.data[0]}  P={pair.P}  Q={pair.Q}")

# %% [markdown]
# Fact 1 asks whether every two-sided cell contains the longest element of
# some parabolic subgroup. Fact 2 asks whether a left and a right cell meet
# in at most one element. Type A satisfies both; type B keeps the first
# (in small rank) and loses the second.

# %%
for cartan in ("A3", "A4", "B2", "B3", "B4"):
    T = KLTable.build(cartan)
    f1, f2 = check_fact1(T), check_fact2(T)
    pair = f2.witness_pair()
    print(f"{cartan}: fact 1 {'holds' if f1.holds else 'fails'}; fact 2 {'holds' if f2.holds else 'fails'}"
          + (f" (e.g. {pair[0]!r} and {pair[1]!r} share a left and a right cell)" if pair else ""))

# %% [markdown]
# The DOT export draws the cell order; pipe it into `dot -Tsvg` to view.

# %%
print(cells(KLTable.build("B2"), "left").to_dot())
