from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mqk.errors import NonDivisible, NoRingMap, NotIntegral, ParseError, RingMismatch, TruncationMismatch
from mqk.series import (
    Base,
    GradedScalar,
    RingSpec,
    TruncSeries,
    kill_v,
    parse_series,
    reduce_coefficients,
    series_exact_div,
    series_mul,
    series_substitute,
)

QV = RingSpec(Base.Q, True, -3, False)
F2V = RingSpec(Base.F2, True, -3, True)
Z2V = RingSpec(Base.ZLOC2, True, -3, True)
Z = RingSpec(Base.Z)


def S(text, ring=Z, nvars=2, T=4):
    return parse_series(text, ring, nvars, T)


# scalars ------------------------------------------------------------------

def test_scalar_difference_of_squares():
    v = QV.v()
    assert (v + 1) * (v - 1) == v ** 2 - 1


def test_scalar_f2_laurent():
    v = F2V.v()
    assert v * v == F2V.v(2)
    assert v * F2V.v(-1) == 1
    assert v + v == 0


def test_zloc2_odd_denominators_accepted():
    a = Z2V.scalar(Fraction(1, 3)) + Z2V.scalar(Fraction(1, 5))
    assert a == Z2V.scalar(Fraction(8, 15))


def test_zloc2_rejects_even_denominator():
    with pytest.raises(NotIntegral):
        Z2V.scalar(Fraction(1, 2))
    with pytest.raises(NotIntegral):
        Z2V.scalar(2).inverse()


def test_scalar_ring_mismatch():
    with pytest.raises(RingMismatch):
        QV.v() + F2V.v()


def test_scalar_exact_div_laurent():
    v = QV.v()
    assert ((v ** 2 - 1) * (v + 3)).exact_div(v - 1) == (v + 1) * (v + 3)
    with pytest.raises(NonDivisible):
        (v ** 2 + 1).exact_div(v + 1)


def test_scalar_homogeneity():
    v = QV.v()
    assert (v * 2).codim() == -3
    assert not (v + 1).is_homogeneous()


# series -------------------------------------------------------------------

def test_mul_difference_of_squares():
    assert S("x1 + x2") * S("x1 - x2") == S("x1^2 - x2^2")


def test_mul_truncates():
    x = TruncSeries.var(Z, 1, 4, 0)
    assert (x ** 4 * x).is_zero()


def test_geometric_series():
    a = parse_series("1 + t", Z, 1, 3)
    b = parse_series("1 - t + t^2 - t^3", Z, 1, 3)
    assert series_mul(a, b) == TruncSeries.constant(Z, 1, 3, 1)


def test_trunc_mismatch_rejected():
    with pytest.raises(TruncationMismatch):
        S("x1", T=3) + S("x1", T=4)
    with pytest.raises(TruncationMismatch):
        S("x1", T=3) * S("x1", T=4)


def test_substitute_examples():
    f = parse_series("t^2", Z, 1, 2)
    assert series_substitute(f, [S("x1 + x2", T=2)]) == S("x1^2 + 2*x1*x2 + x2^2", T=2)
    g = S("x1 + 3*x1*x2 - x2^3")
    ident = parse_series("t", Z, 1, 4)
    assert ident.substitute([g]) == g
    f2 = parse_series("t + t^2", Z, 1, 1)
    assert f2.substitute([parse_series("t", Z, 1, 1)]) == parse_series("t", Z, 1, 1)


def test_substitute_needs_zero_constant():
    f = parse_series("t^2", Z, 1, 2)
    with pytest.raises(ValueError):
        f.substitute([S("1 + x1", T=2)])


def test_exact_div_examples():
    q = series_exact_div(S("x1^2 - x2^2"), S("x1 - x2"))
    assert q == S("x1 + x2", T=3)
    assert q.trunc == 3
    assert S("x1^2 + x1*x2").exact_div(S("x1")) == S("x1 + x2", T=3)
    with pytest.raises(NonDivisible):
        S("x1").exact_div(S("x2"))


def test_reciprocal():
    a = parse_series("1 + 2*t - t^3", Z2V, 1, 6)
    assert a * a.reciprocal() == TruncSeries.constant(Z2V, 1, 6, 1)


def test_reduce_examples():
    zl = RingSpec(Base.ZLOC2)
    f2 = RingSpec(Base.F2)
    assert reduce_coefficients(parse_series("2*t + t^2", zl, 1, 3), f2) == parse_series("t^2", f2, 1, 3)
    with pytest.raises(NotIntegral):
        reduce_coefficients(parse_series("1/2*t", RingSpec(Base.Q), 1, 3), zl)
    s = parse_series("v^3*t", Z2V, 1, 3)
    assert reduce_coefficients(s, F2V) == parse_series("v^3*t", F2V, 1, 3)


def test_reduce_rejects_missing_maps():
    with pytest.raises(NoRingMap):
        reduce_coefficients(parse_series("t", F2V, 1, 2), Z2V)
    with pytest.raises(NoRingMap):
        reduce_coefficients(parse_series("v^-1*t", Z2V, 1, 2), RingSpec(Base.F2, True, -3, False))


def test_kill_v():
    s = parse_series("t + v*t^4", RingSpec(Base.ZLOC2, True, -3, False), 1, 5)
    assert kill_v(s, RingSpec(Base.ZLOC2)) == parse_series("t", RingSpec(Base.ZLOC2), 1, 5)


def test_canonical_text_roundtrip():
    s = parse_series("3*v^2*x1^2*x2 - x2 + v^-1*x1", Z2V, 2, 5)
    text = s.to_canonical()
    assert text.splitlines() == [
        "1 * v^-1 * x1^1 x2^0",
        "-1 * v^0 * x1^0 x2^1",
        "3 * v^2 * x1^2 x2^1",
    ]
    assert parse_series(text, Z2V, 2, 5) == s


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_series("x3", Z, 2, 4)


def test_homogeneous_codims_add():
    a = parse_series("v*x1^4 + x1", QV, 2, 8)
    b = parse_series("x1*x2 + v*x2^5", QV, 2, 8)
    assert a.codim() == 1 and b.codim() == 2
    assert (a * b).codim() == 3


# properties ---------------------------------------------------------------

def _series(ring, nvars=2, T=4, max_v=2, min_v=0):
    mono = st.tuples(st.integers(min_v, max_v), *[st.integers(0, T)] * nvars).filter(
        lambda k: sum(k[1:]) <= T)
    coeff = st.integers(-4, 4)
    return st.dictionaries(mono, coeff, max_size=6).map(lambda d: TruncSeries(ring, nvars, T, d))


RINGS = [RingSpec(Base.Z, True, -1, False), Z2V, F2V]


@pytest.mark.parametrize("ring", RINGS, ids=str)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_ring_axioms(ring, data):
    gen = _series(ring, min_v=-1 if ring.v_invertible else 0)
    a, b, c = data.draw(gen), data.draw(gen), data.draw(gen)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b - b == a


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_exact_div_inverts_mul(data):
    a = data.draw(_series(Z2V, T=5))
    b = data.draw(_series(Z2V, T=5))
    low = data.draw(st.sampled_from(["x1", "x1 - x2", "x1^2 + x1*x2", "x2^2"]))
    den = parse_series(low, Z2V, 2, 5) + b * parse_series("x1^2*x2", Z2V, 2, 5)
    q = (a * den).exact_div(den)
    o = den.order()
    assert q == a.truncated(5 - o)


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_reduction_is_homomorphism(data):
    src = RingSpec(Base.ZLOC2, True, -3, False)
    tgt = RingSpec(Base.F2, True, -3, True)
    a, b = data.draw(_series(src)), data.draw(_series(src))
    r = lambda s: reduce_coefficients(s, tgt)  # noqa: E731
    assert r(a * b) == r(a) * r(b)
    assert r(a + b) == r(a) + r(b)


@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_scalar_ring_axioms(data):
    ring = Z2V
    sc = st.dictionaries(st.integers(-2, 3), st.integers(-5, 5), max_size=4).map(
        lambda d: GradedScalar(ring, d))
    a, b, c = data.draw(sc), data.draw(sc), data.draw(sc)
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert hash(a * b) == hash(b * a)
