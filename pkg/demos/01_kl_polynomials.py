# %% [markdown]
# # Kazhdan-Lusztig polynomials and the Hecke algebra
#
# We build the full table of KL polynomials for S_4 (type A3) and the
# hyperoctahedral group of rank 3 (type B3), then multiply a few elements of
# the Kazhdan-Lusztig basis.

# %%
from collections import Counter

from klw.hecke import V, HeckeAlgebra, KLTable, kl_polynomial, q_poly
from klw.oracles import kl_by_bar_inversion

a3 = KLTable.build("A3")
W = a3.system
print(a3)
print("|W| =", W.order, " longest element:", W.longest_element(), "of length", W.longest_element().length)

# %% [markdown]
# Only two Schubert varieties in the flag variety of GL_4 are singular, and
# their KL polynomials are the only ones different from 1.

# %%
for x, w, p in a3.pairs():
    if p != (1,):
        print(f"P({a3.elements[x]!r}, {a3.elements[w]!r}) = {kl_polynomial(a3, a3.elements[x], a3.elements[w])}")

# %% [markdown]
# Type B3 has more interesting polynomials. The table below counts them;
# the same counts come out of an independent computation that inverts the
# bar involution directly, which is how the engine is tested.

# %%
b3 = KLTable.build("B3")
counts = Counter(p for _, _, p in b3.pairs())
for coeffs, n in sorted(counts.items()):
    print(f"{n:4d} pairs with P = {q_poly(coeffs)}")
oracle = kl_by_bar_inversion(b3.system)
print("matches the bar-inversion oracle:", oracle == {(x, w): p for x, w, p in b3.pairs()})

# %% [markdown]
# The Hecke algebra uses T_s^2 = (q - 1) T_s + q with q = v^2 and the
# self-dual basis C'_w = v^{-l(w)} sum_x P_{x,w}(v^2) T_x.

# %%
H = HeckeAlgebra(a3)
s1, s2 = W.generators[:2]
print("C'_s1 =", H.to_standard_basis(H.C(s1)))
print("C'_s1 C'_s1 == (v + 1/v) C'_s1:", H.C(s1) * H.C(s1) == (V + V**-1) * H.C(s1))
w = W.element("2132")
prod = H.to_kl_basis(H.C(w) * H.C(s2))
print("C'_2132 C'_s2 =", prod)
