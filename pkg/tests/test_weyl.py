import pytest
from hypothesis import given, settings, strategies as st

from mqk.weyl import RootDatum, SignedPerm, all_thetas

from oracles import compose_signed, signed_perm_group, simple_reflection_images, word_lengths

DATA = [("B", 2), ("B", 3), ("D", 3), ("D", 4)]


@pytest.mark.parametrize("kind,l", DATA)
def test_simple_reflections_match_hand_written(kind, l):
    R = RootDatum(kind, l)
    assert [s.img for s in R.simple_reflections] == simple_reflection_images(kind, l)


@pytest.mark.parametrize("kind,l", DATA)
def test_elements_match_brute_force(kind, l):
    R = RootDatum(kind, l)
    assert {w.img for w in R.elements} == signed_perm_group(kind, l)
    assert {w.img for w in R.generated_elements()} == signed_perm_group(kind, l)


@pytest.mark.parametrize("kind,l,order", [("B", 2, 8), ("B", 3, 48), ("D", 4, 192), ("D", 3, 24),
                                          ("B", 4, 384)])
def test_orders(kind, l, order):
    R = RootDatum(kind, l)
    assert R.order() == R.expected_order() == order


@pytest.mark.parametrize("kind,l", DATA)
def test_length_is_word_distance(kind, l):
    R = RootDatum(kind, l)
    dist = word_lengths(kind, l)
    for w in R.elements:
        assert R.length(w) == dist[w.img]
        word = R.reduced_word(w)
        assert len(word) == R.length(w)
        assert R.element(word) == w


@pytest.mark.parametrize("kind,l,N", [("B", 2, 4), ("B", 3, 9), ("D", 4, 12)])
def test_longest_element(kind, l, N):
    R = RootDatum(kind, l)
    w0 = R.longest_element()
    assert R.length(w0) == N == len(R.positive_roots)
    if kind == "B" or l % 2 == 0:
        assert w0.img == tuple(-i for i in range(1, l + 1))


def test_cartan_matrices():
    assert RootDatum("B", 2).cartan_matrix() == [[2, -1], [-2, 2]]
    assert RootDatum("B", 3).cartan_matrix() == [[2, -1, 0], [-1, 2, -1], [0, -2, 2]]
    d4 = RootDatum("D", 4).cartan_matrix()
    assert d4 == [[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]]
    for kind, l in DATA:
        R = RootDatum(kind, l)
        assert R.cartan_matrix() == R.expected_cartan(kind, l)


def test_braid_orders():
    assert RootDatum("B", 2).braid_order(1, 2) == 4
    R = RootDatum("D", 4)
    assert R.braid_order(2, 4) == 3 and R.braid_order(3, 4) == 2


def test_reduced_words():
    R = RootDatum("B", 2)
    assert not R.is_reduced((1, 1))
    assert R.is_reduced((1, 2, 1, 2))
    assert not R.is_reduced((1, 2, 1, 2, 1))
    assert R.reduced_word(R.longest_element()) == (1, 2, 1, 2)


@pytest.mark.parametrize("kind,l", [("B", 2), ("B", 3), ("D", 4)])
def test_parabolic_factorization(kind, l):
    R = RootDatum(kind, l)
    for theta in all_thetas(l):
        assert R.check_parabolic_factorization(theta)
        assert len(R.coset_min_reps(theta)) * len(R.parabolic_subgroup(theta)) == R.order()


def test_coset_sizes():
    R = RootDatum("B", 2)
    assert len(R.coset_min_reps((1,))) == 4
    assert len(R.coset_min_reps((2,))) == 4
    assert len(RootDatum("B", 3).coset_min_reps((1, 2))) == 8
    # maximal parabolic of the first root: the quadric cell count
    assert len(RootDatum("B", 3).coset_min_reps((2, 3))) == 6
    assert RootDatum("B", 3).coset_min_reps((1, 2, 3)) == [SignedPerm.identity(3)]
    assert len(RootDatum("D", 4).coset_min_reps((1, 2, 3))) == 8
    assert len(RootDatum("D", 4).coset_min_reps((1, 3, 4))) == 24


def test_unsupported():
    with pytest.raises(ValueError):
        RootDatum("C", 3)
    with pytest.raises(ValueError):
        RootDatum("D", 2)


@settings(max_examples=60, deadline=None)
@given(a=st.sampled_from(RootDatum("B", 3).elements), b=st.sampled_from(RootDatum("B", 3).elements))
def test_multiplication_matches_oracle(a, b):
    R = RootDatum("B", 3)
    assert (a * b).img == compose_signed(a.img, b.img)
    assert (a * a.inverse()) == SignedPerm.identity(3)
    # length is subadditive and invariant under inversion
    assert R.length(a * b) <= R.length(a) + R.length(b)
    assert R.length(a.inverse()) == R.length(a)
