from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from conicbundle.cohomology import h1, h1_cyclic
from conicbundle.errors import AlgebraError
from conicbundle.weyl import (NSLattice, SignedPerm, generated_subgroup, parse_signed_perm,
                              rho_image, subgroup, subgroups, weyl_group)

W4 = weyl_group(4)


def test_weyl_orders():
    assert W4.order == 192
    assert weyl_group(2).order == 4
    assert weyl_group(3).order == 24


def test_weyl_preserves_lattice():
    lat = NSLattice(4)
    assert all(lat.is_isometry(M) for M in W4.elements)
    assert all(lab.is_even for lab in W4.labels)


def test_rho_image_is_s3():
    H = rho_image()
    assert H.order == 6 and not H.is_abelian()
    assert sorted(H.element_order(i) for i in range(6)) == [1, 2, 2, 2, 3, 3]


def test_subgroups_of_s3():
    subs = subgroups(rho_image())
    assert sorted(K.order for K in subs) == [1, 2, 2, 2, 3, 6]


def test_subgroups_small_cases():
    H = rho_image()
    assert [K.order for K in subgroups(subgroup(H, []))] == [1]
    inv = next(i for i in range(6) if H.element_order(i) == 2)
    assert sorted(K.order for K in subgroups(subgroup(H, [inv]))) == [1, 2]


def test_literal_composition_right_to_left():
    a, b = parse_signed_perm("(12)", 4), parse_signed_perm("c1", 4)
    assert parse_signed_perm("(12)c1", 4) == a * b
    # c1 acts first on E_1, then (12) moves it to E_2
    assert (a * b).perm[0] == 1 and (a * b).signs[0] == -1


@pytest.mark.parametrize("text", ["(15)", "c0", "(11)", "x"])
def test_bad_literals(text):
    with pytest.raises(AlgebraError):
        parse_signed_perm(text, 4)


signed_perms = st.builds(
    lambda p, s: SignedPerm(tuple(p), tuple(s)),
    st.sampled_from(list(permutations(range(4)))),
    st.lists(st.sampled_from([1, -1]), min_size=4, max_size=4))


@given(signed_perms, signed_perms, signed_perms)
def test_signed_perm_group_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * SignedPerm.identity(4) == a == SignedPerm.identity(4) * a


@given(signed_perms)
def test_label_round_trip(a):
    assert parse_signed_perm(str(a), 4) == a


@given(st.integers(0, 191))
def test_matrix_labels_are_faithful(i):
    M, lab = W4.elements[i], W4.labels[i]
    assert W4.find(lab) == i
    assert W4.labels[W4.mul(i, i)] == lab * lab
    assert M == W4.elements[i]


# cohomology

def test_trivial_group():
    assert h1([((1, 0), (0, 1))]).vanishes


def test_sign_module():
    assert h1([((1,),), ((-1,),)]).divisors == (2,)
    assert h1_cyclic(((-1,),)).divisors == (2,)


def _perm_matrix(p):
    n = len(p)
    return tuple(tuple(int(p[j] == i) for j in range(n)) for i in range(n))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_permutation_modules_vanish(n):
    mats = [_perm_matrix(p) for p in permutations(range(n))]
    assert h1(mats).vanishes


def test_rho_image_h1_vanishes_on_all_subgroups():
    lat = NSLattice(4)
    for K in subgroups(rho_image()):
        assert h1(K.elements, lat).vanishes


@given(st.integers(0, 191))
def test_cyclic_oracle_agrees(i):
    K = subgroup(W4, [i])
    assert h1(K.elements).divisors == h1_cyclic(W4.elements[i]).divisors


def test_cohomology_of_generated_subgroup():
    H = generated_subgroup(["(23)c1c2c3c4", "(34)c1c2c3c4"])
    assert H.order == 6 and h1(H.elements, NSLattice(4)).vanishes


def test_non_group_rejected():
    with pytest.raises(AlgebraError):
        h1([((1, 0), (0, 1)), ((0, 1), (1, 0)), ((1, 1), (0, 1))])
