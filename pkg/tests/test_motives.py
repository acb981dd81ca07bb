import random

import pytest
from hypothesis import given, settings, strategies as st

from mqk.errors import HalfUnavailable, NotIdempotent, ParseError, PreconditionViolated
from mqk.motives import (
    Correspondence,
    classify_tate,
    compose,
    diagonal,
    diagonal_by_duality,
    expected_twist,
    kunneth,
    parse_correspondence,
    rational_half_projectors,
    simplified_tate_forms,
    summand_rank,
    tate_projectors,
    varpi_projectors,
)
from mqk.quadric import make_theory


def k(n, D, coeff="f2"):
    return make_theory(f"k{n}", coeff, D)


def random_corr(th, rng, terms=4):
    ring = th.ring
    entries = {}
    for _ in range(terms):
        a, b = rng.choice(th.basis), rng.choice(th.basis)
        c = ring.one() * rng.randint(-2, 2)
        if ring.has_v:
            c = c * ring.v(rng.randint(-2 if ring.v_invertible else 0, 2))
        entries[(a, b)] = c
    return Correspondence(th, entries)


def test_small_diagonal_display():
    th = k(2, 3)
    delta = diagonal(th)
    assert delta.to_text() == "1×l_0 + l_0×1 + h×l_1 + l_1×h + v·l_0×l_0"
    displayed = parse_correspondence(th, "1×l_0+l_0×1+h×l_1+l_1×h+v_2·l_0×l_0")
    assert displayed == delta


@pytest.mark.parametrize("n", [2, 3])
def test_diagonal_matches_duality(n):
    for D in range(1, 2 ** n + 7):
        th = k(n, D)
        assert diagonal(th) == diagonal_by_duality(th)


def test_diagonal_is_unit():
    th = k(2, 6)
    delta = diagonal(th)
    rng = random.Random(7)
    for _ in range(10):
        f = random_corr(th, rng)
        assert delta @ f == f
        assert f @ delta == f


def test_first_tate_projector_dim7():
    th = k(2, 7)
    v = th.v()
    pis = tate_projectors(th)
    assert len(pis) == 5
    assert pis[0] == kunneth(th.one(), th.h(4)) * th.v(-1)
    assert pis[0] == kunneth(th.one(), th.l(0))
    assert th.h(4).pushforward() == v
    assert [classify_tate(p) for p in pis] == [0, 1, 2, 3, 4]


def test_simplified_forms_dim9():
    th = k(2, 9)
    pis = tate_projectors(th)
    for i, p in simplified_tate_forms(th):
        assert pis[i] == p


def test_varpi_twists():
    th = k(2, 7)
    dropped = []
    vs = varpi_projectors(th, dropped)
    assert [j for j, _ in vs] == [1, 2, 3]
    for j, p in vs:
        assert summand_rank(p) == 1
        assert classify_tate(p) == expected_twist(th, j)


def test_negative_varpi_twist_wraps():
    th = k(2, 1)
    vs = varpi_projectors(th)
    js = [j for j, _ in vs]
    assert min(js) < 0
    for j, p in vs:
        assert classify_tate(p) == expected_twist(th, j)
    assert expected_twist(th, -1) == 2


def test_no_tate_for_small_dim():
    assert tate_projectors(k(3, 5)) == []
    assert len(tate_projectors(k(3, 7))) == 1


@pytest.mark.parametrize("n,D,want", [(2, 6, 4), (2, 7, 3), (3, 8, 8), (3, 11, 7)])
def test_residual_rank(n, D, want):
    th = k(n, D)
    residual = diagonal(th) - sum(tate_projectors(th), Correspondence.zero(th))
    assert summand_rank(residual) == want


def test_needs_morava_mod2():
    with pytest.raises(PreconditionViolated):
        diagonal(make_theory("chow", "f2", 4))
    with pytest.raises(PreconditionViolated):
        tate_projectors(k(2, 5, "zloc2"))


def test_rank_rejects_non_idempotent():
    th = k(2, 4)
    with pytest.raises(NotIdempotent):
        summand_rank(diagonal(th) * th.v())
    with pytest.raises(NotIdempotent):
        classify_tate(kunneth(th.one(), th.one()))


def test_half_unavailable_mod2():
    with pytest.raises(HalfUnavailable):
        rational_half_projectors(make_theory("chow", "f2", 3))


@pytest.mark.parametrize("D", range(1, 9))
def test_rational_chow_literal(D):
    rp = rational_half_projectors(make_theory("chow", "q", D))
    assert rp.literal_matches
    assert rp.varpi.is_zero() == (D % 2 == 1)
    if D % 2 == 0:
        assert summand_rank(rp.varpi) == 1


def test_rational_morava_lift_differs_from_literal():
    # chi(h^k) is nonzero in K(n) once the quadric is large enough
    small = rational_half_projectors(make_theory("k2", "q", 2))
    big = rational_half_projectors(make_theory("k2", "q", 4))
    assert small.literal_matches
    assert not big.literal_matches
    for p in big.projectors:
        assert p.is_idempotent()
    assert big.varpi.is_idempotent() and big.varpi.transpose() == big.varpi


def test_parse_errors():
    th = k(2, 3)
    with pytest.raises(ParseError):
        parse_correspondence(th, "1×q_0")
    with pytest.raises(ParseError):
        parse_correspondence(th, "h + l_0")


def test_text_roundtrip_signs():
    th = k(2, 5, "zloc2")
    p = kunneth(th.h(1), th.l(1)) * -3 + kunneth(th.l(0), th.l(0)) * th.v(2)
    assert parse_correspondence(th, p.to_text()) == p


# properties ---------------------------------------------------------------

THEORIES = {name: make_theory(*name.split("/"), D) for name, D in
            (("k2/zloc2", 5), ("k0/q", 4), ("chow/zloc2", 6), ("k3/f2", 9))}


@settings(max_examples=25, deadline=None)
@given(name=st.sampled_from(sorted(THEORIES)), seed=st.integers(0, 10 ** 6))
def test_composition_laws(name, seed):
    th = THEORIES[name]
    rng = random.Random(seed)
    f, g, h = (random_corr(th, rng) for _ in range(3))
    assert compose(compose(f, g), h) == compose(f, compose(g, h))
    assert compose(f, g + h) == compose(f, g) + compose(f, h)
    # transpose reverses composition
    assert compose(f, g).transpose() == compose(g.transpose(), f.transpose())
    delta = diagonal_by_duality(th)
    assert compose(f, delta) == f == compose(delta, f)


@settings(max_examples=25, deadline=None)
@given(name=st.sampled_from(sorted(THEORIES)), seed=st.integers(0, 10 ** 6))
def test_realization_is_functorial(name, seed):
    th = THEORIES[name]
    rng = random.Random(seed)
    f, g = random_corr(th, rng), random_corr(th, rng)

    def matmul(A, B):
        z = th.ring.zero()
        return [[sum((A[i][m] * B[m][j] for m in range(len(B))), z) for j in range(len(B[0]))]
                for i in range(len(A))]

    # the image lives on the first factor, which reverses the order
    assert (g @ f).realization() == matmul(f.realization(), g.realization())
