import json
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from klw.cells import (
    SIDES,
    cell_preorder,
    cells,
    check_fact1,
    check_fact2,
    dominance_leq,
    rs_cells,
    rs_insert,
    rs_inverse,
    shape_order,
)
from klw.coxeter import CoxeterSystem
from klw.errors import UsageError
from klw.oracles import structure_constants_q1_dense

# (left, right, two-sided) cell counts. Type A values agree with the tableau
# fibres (checked below); type B values are cross-checked against the dense
# structure-constant oracle for B2 and B3.
CELL_COUNTS = {
    "A1": (2, 2, 2),
    "A2": (4, 4, 3),
    "A3": (10, 10, 5),
    "A4": (26, 26, 7),
    "B2": (4, 4, 3),
    "B3": (14, 14, 6),
    "B4": (50, 50, 10),
}


@pytest.mark.parametrize("cartan", sorted(CELL_COUNTS))
def test_cell_counts(cartan, table):
    T = table(cartan)
    assert tuple(len(cells(T, side)) for side in SIDES) == CELL_COUNTS[cartan]


def ideal_preorder_from_dense(table, side):
    """x <= y iff C'_y occurs in a product with C'_x on the given side(s); transitive closure."""
    n = len(table)
    at1 = np.zeros((n, n), dtype=np.int64)
    for x, w, p in table.pairs():
        at1[x, w] = sum(p)
    h = structure_constants_q1_dense(table.system, at1)  # C'_a C'_b = sum_c h[a, b, c] C'_c
    rel = np.zeros((n, n), dtype=bool)
    if side in ("left", "two-sided"):
        rel |= (h != 0).any(axis=0)  # b -> c via a product on the left
    if side in ("right", "two-sided"):
        rel |= (h != 0).any(axis=1)  # a -> c via a product on the right
    reach = rel | np.eye(n, dtype=bool)
    while True:
        nxt = (reach.astype(np.int64) @ reach.astype(np.int64)) > 0
        if (nxt == reach).all():
            return reach
        reach = nxt


@pytest.mark.parametrize("cartan", ["A3", "B2", "B3"])
@pytest.mark.parametrize("side", SIDES)
def test_preorder_matches_full_product_oracle(cartan, side, table):
    T = table(cartan)
    reach = ideal_preorder_from_dense(T, side)
    pre = cell_preorder(T, side)
    n = len(T)
    got = np.array([[pre.leq(x, y) for y in range(n)] for x in range(n)])
    assert np.array_equal(got, reach)


@pytest.mark.parametrize("cartan", ["A1", "A2", "A3", "A4"])
@pytest.mark.parametrize("side", SIDES)
def test_type_a_cells_are_tableau_fibres(cartan, side, table):
    T = table(cartan)
    assert cells(T, side).as_sets() == rs_cells(T.system, side).as_sets()


@pytest.mark.parametrize("cartan", ["A2", "A3", "A4"])
def test_two_sided_order_is_dominance(cartan, table):
    T = table(cartan)
    part = cells(T, "two-sided")
    shape = [rs_insert(part.elements(i)[0]).shape for i in range(len(part))]
    for i in range(len(part)):
        for j in range(len(part)):
            assert part.leq(i, j) == dominance_leq(shape[j], shape[i])


def test_b2_cells_explicitly(table):
    T = table("B2")
    assert [sorted(c) for c in cells(T, "left").to_dict()["cells"]] == [[""], ["1", "121", "21"], ["12", "2", "212"], ["1212"]]
    assert [sorted(c) for c in cells(T, "right").to_dict()["cells"]] == [[""], ["1", "12", "121"], ["2", "21", "212"], ["1212"]]
    assert cells(T, "two-sided").to_dict()["cells"][1] == ["1", "2", "12", "21", "121", "212"]


@pytest.mark.parametrize("cartan", ["A3", "B3"])
def test_left_cells_have_constant_right_descents(cartan, table):
    T = table(cartan)
    ix = T.system.indexed
    pre = cell_preorder(T, "left")
    for x in range(len(T)):
        for y in range(len(T)):
            if pre.leq(x, y):
                assert ix.rdesc[x] & ~ix.rdesc[y] == 0
    for block in cells(T, "left").blocks:
        assert len({ix.rdesc[k] for k in block}) == 1


@pytest.mark.parametrize("cartan", ["A3", "B3"])
def test_inversion_swaps_left_and_right(cartan, table):
    T = table(cartan)
    inv = T.system.indexed.inv
    L, R = cell_preorder(T, "left"), cell_preorder(T, "right")
    for x in range(len(T)):
        for y in range(len(T)):
            assert L.leq(x, y) == R.leq(inv[x], inv[y])


@pytest.mark.parametrize("cartan", ["A3", "A4"])
def test_one_involution_per_left_cell_in_type_a(cartan, table):
    T = table(cartan)
    ix = T.system.indexed
    for block in cells(T, "left").blocks:
        assert sum(ix.inv[k] == k for k in block) == 1


def test_rs_bijection_on_s5():
    seen = set()
    for p in permutations(range(1, 6)):
        pair = rs_insert(p)
        assert rs_inverse(pair) == p
        assert rs_insert(tuple(np.argsort(p) + 1)) == type(pair)(pair.Q, pair.P)  # inverse swaps P and Q
        seen.add((pair.P, pair.Q))
    assert len(seen) == 120


@given(st.permutations(list(range(1, 8))))
def test_rs_shape_and_longest_increasing_subsequence(p):
    pair = rs_insert(p)
    assert sum(pair.shape) == 7
    # first row length = longest increasing subsequence
    best = [1] * 7
    for i in range(7):
        for j in range(i):
            if p[j] < p[i]:
                best[i] = max(best[i], best[j] + 1)
    assert pair.shape[0] == max(best)
    assert rs_inverse(pair) == tuple(p)


def test_rs_errors():
    with pytest.raises(UsageError):
        rs_insert((1, 1, 2))
    with pytest.raises(UsageError):
        rs_insert(CoxeterSystem("B2").element("1"))
    with pytest.raises(UsageError):
        rs_cells(CoxeterSystem("B2"))
    with pytest.raises(UsageError):
        dominance_leq((2, 1), (2,))


def test_dominance_and_shape_order():
    assert dominance_leq((2, 2), (3, 1))
    assert not dominance_leq((3, 1, 1, 1), (2, 2, 2))
    assert not dominance_leq((2, 2, 2), (3, 1, 1, 1))
    order = shape_order(CoxeterSystem("A3"))
    assert order[(4,)] == [(3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert order[(1, 1, 1, 1)] == []


@pytest.mark.parametrize("cartan", ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "A1xB2"])
def test_fact1(cartan, table):
    rep = check_fact1(table(cartan))
    assert rep.holds
    assert not rep.missing
    for i, J in rep.witnesses.items():
        w0J = rep.system.parabolic(J).longest_element
        assert rep.partition.cell_of(w0J) == i


@pytest.mark.parametrize("cartan", ["A2", "A3", "A4"])
def test_fact2_in_type_a(cartan, table):
    rep = check_fact2(table(cartan))
    assert rep.holds and rep.max_intersection == 1 and rep.witness_pair() is None


@pytest.mark.parametrize("cartan", ["B2", "B3", "B4", "A1xB2"])
def test_fact2_fails_in_type_b(cartan, table):
    rep = check_fact2(table(cartan))
    assert not rep.holds
    x, y = rep.witness_pair()
    assert x != y
    assert rep.left.cell_of(x) == rep.left.cell_of(y)
    assert rep.right.cell_of(x) == rep.right.cell_of(y)


def test_fact2_witness_in_b2(table):
    rep = check_fact2(table("B2"))
    assert [w.word_string() for w in rep.witness_pair()] == ["1", "121"]
    assert rep.max_intersection == 2
    assert rep.to_dict()["witness_pair"] == ["1", "121"]


def test_exports(table):
    part = cells(table("B2"), "left")
    data = json.loads(part.to_json())
    assert data["side"] == "left" and len(data["cells"]) == 4
    assert data["order"] == [[0, 1], [0, 2], [1, 3], [2, 3]]
    dot = part.to_dot()
    assert dot.startswith("digraph") and dot.rstrip().endswith("}")
    assert sum('tooltip="' in line for line in dot.splitlines()) == 4
    assert sum("->" in line for line in dot.splitlines()) == 4
    assert part.covers() == [(0, 1), (0, 2), (1, 3), (2, 3)]
    assert (0, 3) in part.order_pairs()


def test_bad_side(table):
    with pytest.raises(UsageError):
        cells(table("A2"), "middle")
