import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_center, brute_commutators
from rhs_actions.dsl import elaborate
from rhs_actions.errors import NotNormal, OrderBoundExceeded
from rhs_actions.groups import (Permutation, center, central_cyclic_subgroups, commutator_subgroup,
                                cyclic_group, derived_series, dihedral_group, direct_product, group_from_permutations,
                                is_isomorphic, norm_cent, quotient, semidirect_cyclic, sylow)
from rhs_actions.structure import classify_2group

SMALL = ["C(1)", "C(6)", "D(4)", "D(6)", "D(8)", "Q(8)", "Q(12)", "C(2) x C(4)", "D(10)", "BT", "Q(8) x C(3)"]


def _perm(cycles, degree):
    return Permutation.from_cycles(cycles, degree)


def test_closure_orders():
    assert group_from_permutations([_perm([(0, 1, 2, 3)], 4)]).order == 4
    assert group_from_permutations([_perm([(0, 1)], 3), _perm([(0, 1, 2)], 3)]).order == 6


def test_regular_quaternion_generators():
    # left-regular action of i and j on Q8 = {±1, ±i, ±j, ±k}, points 0..7
    i = _perm([(0, 2, 1, 3), (4, 6, 5, 7)], 8)
    j = _perm([(0, 4, 1, 5), (2, 7, 3, 6)], 8)
    G = group_from_permutations([i, j])
    assert G.order == 8
    assert int(np.sum(G.element_orders == 2)) == 1


def test_closure_bound():
    big = [_perm([tuple(range(9))], 9), _perm([(0, 1)], 9)]
    with pytest.raises(OrderBoundExceeded):
        group_from_permutations(big, bound=1000)


def test_direct_products():
    K = direct_product(cyclic_group(2), cyclic_group(2))
    assert (K.order, K.exponent) == (4, 2)
    assert direct_product(elaborate("Q(8)"), cyclic_group(3)).order == 24
    assert is_isomorphic(direct_product(cyclic_group(2), cyclic_group(3)), cyclic_group(6))[0]


def test_semidirect_examples():
    C2 = cyclic_group(2)
    g = C2.small_generators[0]
    S3 = semidirect_cyclic(3, C2, {g: -1})
    assert is_isomorphic(S3, dihedral_group(6))[0]
    SD = semidirect_cyclic(8, C2, {g: 3})
    assert SD.order == 16
    assert classify_2group(SD).tag == "semidihedral"
    G = elaborate("D(8)")
    assert is_isomorphic(semidirect_cyclic(1, G, {x: 1 for x in G.small_generators}), G)[0]


def test_quotient_examples():
    Q8 = elaborate("Q(8)")
    V, pi = quotient(Q8, center(Q8))
    assert is_isomorphic(V, elaborate("C(2) x C(2)"))[0]
    assert pi.is_homomorphism() and pi.kernel() == center(Q8)
    G = elaborate("D(8)")
    assert is_isomorphic(quotient(G, G.trivial())[0], G)[0]
    C12 = cyclic_group(12)
    four = [S for S in central_cyclic_subgroups(C12) if S.order == 4][0]
    assert is_isomorphic(quotient(C12, four)[0], cyclic_group(3))[0]


def test_quotient_rejects_non_normal():
    S3 = dihedral_group(6)
    inv = int(np.flatnonzero(S3.element_orders == 2)[0])
    with pytest.raises(NotNormal):
        quotient(S3, S3.subgroup([inv]))


def test_center_and_derived_series_of_q8():
    Q8 = elaborate("Q(8)")
    assert center(Q8).order == 2
    # the series is 8 > 2 > 1: the commutator subgroup of the center is trivial
    assert [S.order for S in derived_series(Q8)] == [8, 2, 1]
    A = cyclic_group(10)
    assert center(A).order == 10


def test_sylow_examples():
    P = sylow(cyclic_group(12), 2)
    assert P.order == 4 and P.is_cyclic()
    G = elaborate("Q(8) x C(3)")
    P = sylow(G, 2).as_group()
    assert P.order == 8 and classify_2group(P).tag == "generalized_quaternion"
    S3 = group_from_permutations([_perm([(0, 1)], 3), _perm([(0, 1, 2)], 3)])
    assert sylow(S3, 5).order == 1


def test_norm_cent_examples():
    D6 = dihedral_group(6)
    N, C = norm_cent(D6, sylow(D6, 3))
    assert (N.order, C.order) == (6, 3)
    Q8 = elaborate("Q(8)")
    N, C = norm_cent(Q8, center(Q8))
    assert N.order == C.order == 8
    A = elaborate("C(2) x C(6)")
    N, C = norm_cent(A, sylow(A, 2))
    assert N.order == C.order == 12


def test_isomorphism_examples():
    ok, w = is_isomorphic(elaborate("Q(8)"), dihedral_group(8))
    assert not ok and w is None
    ok, w = is_isomorphic(cyclic_group(6), elaborate("C(2) x C(3)"))
    assert ok and w.is_bijective() and w.is_homomorphism()
    G = elaborate("Q(12)")
    ok, w = is_isomorphic(G, G)
    assert ok and w.is_bijective()


def test_central_cyclic_subgroups_examples():
    assert sorted(S.order for S in central_cyclic_subgroups(elaborate("Q(8)"))) == [1, 2]
    assert sorted(S.order for S in central_cyclic_subgroups(cyclic_group(4))) == [1, 2, 4]
    assert [S.order for S in central_cyclic_subgroups(dihedral_group(6))] == [1]


@pytest.mark.parametrize("spec", SMALL)
def test_center_matches_brute_force(spec):
    G = elaborate(spec)
    assert sorted(center(G).index_array.tolist()) == brute_center(G)


@pytest.mark.parametrize("spec", SMALL)
def test_commutator_matches_brute_force(spec):
    G = elaborate(spec)
    assert set(commutator_subgroup(G).index_array.tolist()) == brute_commutators(G)


@pytest.mark.parametrize("spec", SMALL)
def test_group_axioms(spec):
    G = elaborate(spec)
    T = G.table
    n = G.order
    assert np.array_equal(T[0], np.arange(n)) and np.array_equal(T[:, 0], np.arange(n))
    for row in T:
        assert len(set(row.tolist())) == n
    assert np.all(T[np.arange(n), G.inv] == 0)
    a, b, c = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    assert np.array_equal(T[T[a, b], c], T[a, T[b, c]])


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_subgroup_orders_divide(spec, data):
    G = elaborate(spec)
    gens = data.draw(st.lists(st.integers(0, G.order - 1), max_size=3))
    assert G.order % G.subgroup(gens).order == 0


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["C(2)", "C(3)", "C(4)", "D(6)", "Q(8)"]), st.sampled_from(["C(2)", "C(5)", "D(4)"]))
def test_product_isomorphism_commutes(a, b):
    G, H = elaborate(a), elaborate(b)
    assert is_isomorphic(direct_product(G, H), direct_product(H, G))[0]


@pytest.mark.parametrize("spec", ["D(8)", "Q(8)", "Q(16)", "D(6) x C(2)", "Q(8) x C(3)"])
def test_quotient_by_center_has_right_order(spec):
    G = elaborate(spec)
    Z = center(G)
    Q, pi = quotient(G, Z)
    assert Q.order * Z.order == G.order
    assert pi.is_homomorphism() and pi.is_surjective()


@pytest.mark.parametrize("n,spec,unit", [(7, "C(3)", 2), (9, "C(6)", 2), (8, "C(2)", 3), (5, "C(4)", 2), (12, "C(2)", 5)])
def test_semidirect_has_prescribed_normal_cyclic(n, spec, unit):
    G = elaborate(spec)
    g = G.small_generators[0]
    E = semidirect_cyclic(n, G, {g: unit})
    assert E.order == n * G.order
    # the kernel of the projection to G is a normal cyclic subgroup of order n
    normal = [S for S in (E.subgroup([int(x)]) for x in np.flatnonzero(E.element_orders == n))
              if S.is_normal() and S.order == n]
    assert normal
    N = normal[0]
    x = N.generators[0]
    # some element acts on N by x -> x^unit
    target = E.power(x, unit % n)
    assert any(E.mul(E.mul(y, x), E.inverse(y)) == target for y in range(E.order))


def test_isomorphism_is_an_equivalence():
    family = [elaborate(s) for s in ["C(6)", "C(2) x C(3)", "C(3) x C(2)", "D(6)", "perm[(0 1);(0 1 2)]",
                                      "Q(8)", "quot(Q(16), Z)", "D(8)", "perm[(0 1 2 3);(0 2)]"]]
    rel = [[is_isomorphic(a, b)[0] for b in family] for a in family]
    k = len(family)
    for i in range(k):
        assert rel[i][i]
        for j in range(k):
            assert rel[i][j] == rel[j][i]
            for l in range(k):
                if rel[i][j] and rel[j][l]:
                    assert rel[i][l]
    assert rel[0][1] and rel[3][4] and rel[6][7] and rel[7][8] and not rel[5][7]
