"""One-dimensional commutative formal group laws.

Built-in laws: additive ``x + y``, multiplicative ``x + y - b*x*y`` (the
generator ``b`` plays the role of ``v`` with degree -1), and the height-n
Morava law obtained from its 2-typical logarithm
``sum_k 2^-k v^((2^(nk)-1)/(2^n-1)) t^(2^(nk))``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import LogUnavailable, NotIntegral
from .series import Base, GradedScalar, RingSpec, TruncSeries, reduce_coefficients

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MoravaSpec:
    n: int
    base: Base = Base.ZLOC2
    v_invertible: bool = True

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("Morava height n must be >= 1")
        if Base(self.base) not in (Base.ZLOC2, Base.F2, Base.Q):
            raise ValueError("Morava coefficients must be Zloc2, F2 or Q")
        object.__setattr__(self, "base", Base(self.base))

    @property
    def v_degree(self) -> int:
        return 1 - 2 ** self.n

    def ring(self) -> RingSpec:
        return RingSpec(self.base, True, self.v_degree, self.v_invertible)


@dataclass(frozen=True)
class FormalGroupLaw:
    name: str
    ring: RingSpec
    F: TruncSeries
    log: TruncSeries | None = None
    morava_n: int | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def trunc(self) -> int:
        return self.F.trunc

    def x(self) -> TruncSeries:
        return TruncSeries.var(self.ring, 2, self.trunc, 0)

    def y(self) -> TruncSeries:
        return TruncSeries.var(self.ring, 2, self.trunc, 1)

    def t(self) -> TruncSeries:
        return TruncSeries.var(self.ring, 1, self.trunc, 0)

    def add(self, a: TruncSeries, b: TruncSeries) -> TruncSeries:
        """Formal sum ``F(a, b)``."""
        return self.F.substitute([a, b])

    def coerce(self, ring: RingSpec) -> "FormalGroupLaw":
        return FormalGroupLaw(self.name, ring, reduce_coefficients(self.F, ring), self.log,
                              self.morava_n, self.notes)

    def __str__(self):
        return f"{self.name} over {self.ring}, trunc {self.trunc}"


def _log_ring(ring: RingSpec) -> RingSpec:
    return RingSpec(Base.Q, ring.has_v, ring.v_degree, ring.v_invertible)


def compositional_inverse(f: TruncSeries) -> TruncSeries:
    """Series g with f(g(t)) = t, for f = t + (order >= 2).

    Solved degree by degree through the fixed point g = t - (f(g) - g).
    """
    t = TruncSeries.var(f.ring, 1, f.trunc, 0)
    if f.coeff((1,)) != 1 or not f.constant_term().is_zero():
        raise ValueError("compositional inverse needs f = t + higher order terms")
    higher = f - t
    g = t
    for _ in range(f.trunc + 1):
        nxt = t - higher.substitute([g])
        if nxt == g:
            break
        g = nxt
    return g


def _from_log(name: str, logser: TruncSeries, target: RingSpec, morava_n=None) -> FormalGroupLaw:
    T = logser.trunc
    exp = compositional_inverse(logser)
    lx = logser.embed(2, [0])
    ly = logser.embed(2, [1])
    F_q = exp.substitute([lx + ly])
    integral = RingSpec(Base.ZLOC2, logser.ring.has_v, logser.ring.v_degree, False)
    try:
        F_int = reduce_coefficients(F_q, integral)
    except NotIntegral as exc:
        raise NotIntegral(f"{name}: law from the logarithm is not integral ({exc})") from exc
    F = reduce_coefficients(F_int, target)
    notes = ()
    if morava_n is not None and T < 2 ** morava_n:
        notes = (f"trunc {T} < 2^{morava_n}: law is additive to this precision",)
        log.warning("%s: %s", name, notes[0])
    return FormalGroupLaw(name, target, F, logser, morava_n, notes)


def mk_additive(trunc: int, base: Base = Base.Z) -> FormalGroupLaw:
    if trunc < 1:
        raise ValueError("trunc must be >= 1")
    ring = RingSpec(base)
    F = TruncSeries(ring, 2, trunc, {(0, 1, 0): 1, (0, 0, 1): 1})
    lg = TruncSeries(_log_ring(ring), 1, trunc, {(0, 1): 1})
    return FormalGroupLaw("additive", ring, F, lg)


def mk_multiplicative(beta_unit: bool, trunc: int, base: Base = Base.Z) -> FormalGroupLaw:
    """``x + y - b*x*y`` with ``b`` the ring generator (stored as v, deg -1)."""
    if trunc < 2:
        raise ValueError("trunc must be >= 2")
    ring = RingSpec(base, True, -1, beta_unit)
    F = TruncSeries(ring, 2, trunc, {(0, 1, 0): 1, (0, 0, 1): 1, (1, 1, 1): -1})
    lring = _log_ring(ring)
    # -ln(1 - b t)/b
    lg = TruncSeries(lring, 1, trunc, {(k - 1, k): Fraction(1, k) for k in range(1, trunc + 1)})
    return FormalGroupLaw("multiplicative", ring, F, lg)


def morava_log(n: int, trunc: int) -> TruncSeries:
    """``sum_k 2^-k v^((2^(nk)-1)/(2^n-1)) t^(2^(nk))`` over Q[v]."""
    ring = RingSpec(Base.Q, True, 1 - 2 ** n, False)
    terms = {}
    k = 0
    while 2 ** (n * k) <= trunc:
        vexp = (2 ** (n * k) - 1) // (2 ** n - 1)
        terms[(vexp, 2 ** (n * k))] = Fraction(1, 2 ** k)
        k += 1
    return TruncSeries(ring, 1, trunc, terms)


def default_morava_trunc(n: int, requested: int = 0) -> int:
    return max(2 ** n + 4, requested)


def mk_morava(spec: MoravaSpec, trunc: int | None = None) -> FormalGroupLaw:
    """The n-th Morava law over ``spec.base`` (K(n) if v invertible, else CK(n))."""
    T = default_morava_trunc(spec.n, trunc or 0) if trunc is None else trunc
    if T < 2:
        raise ValueError("trunc must be >= 2")
    kind = "K" if spec.v_invertible else "CK"
    name = f"{kind}({spec.n})"
    return _from_log(name, morava_log(spec.n, T), spec.ring(), morava_n=spec.n)


# derived series --------------------------------------------------------

def two_series(F: FormalGroupLaw) -> TruncSeries:
    """``[2](t) = F(t, t)``; its coefficients are the b_i."""
    t = F.t()
    return F.F.substitute([t, t])


def formal_inverse(F: FormalGroupLaw) -> TruncSeries:
    """The series i(t) = -t + ... with F(t, i(t)) = 0."""
    t = F.t()
    x, y = F.x(), F.y()
    rest = F.F - x - y
    inv = -t
    for _ in range(F.trunc + 1):
        nxt = -t - rest.substitute([t, inv])
        if nxt == inv:
            break
        inv = nxt
    return inv


def g_series(F: FormalGroupLaw) -> TruncSeries:
    """G(x, y) with F = x + y + x*y*G, known to trunc - 2."""
    x, y = F.x(), F.y()
    return (F.F - x - y).exact_div(x * y)


def logarithm(F: FormalGroupLaw) -> TruncSeries:
    """The stored logarithm, else one integrated from the invariant differential."""
    if F.log is not None:
        return F.log
    if F.ring.base is Base.F2:
        raise LogUnavailable(f"{F.name} over F2 has no logarithm")
    lring = _log_ring(F.ring)
    Fq = reduce_coefficients(F.F, lring)
    # dlog(t) = dt / F_y(t, 0)
    partial = {(k[0], k[1]): c for k, c in Fq.terms.items() if k[2] == 1}
    fy = TruncSeries(lring, 1, F.trunc - 1, partial)
    dlog = fy.reciprocal()
    terms = {(k[0], k[1] + 1): Fraction(c) / (k[1] + 1) for k, c in dlog.terms.items()}
    return TruncSeries(lring, 1, F.trunc, terms)


def mishchenko_classes(F: FormalGroupLaw, imax: int) -> list[GradedScalar]:
    """``[P^i] = (i+1) * coeff of t^(i+1) in log``, for 0 <= i <= imax."""
    if imax >= F.trunc:
        raise ValueError(f"imax {imax} must be below trunc {F.trunc}")
    lg = logarithm(F)
    out = []
    for i in range(imax + 1):
        c = lg.coeff((i + 1,)) * (i + 1)
        out.append(reduce_coefficients(c, F.ring))
    return out


def pn_class_morava(n: int, i: int, ring: RingSpec | None = None) -> GradedScalar:
    """Closed form of [P^i] in K(n): 2^((n-1)k) v^((2^(nk)-1)/(2^n-1)) if i = 2^(nk)-1."""
    ring = ring or RingSpec(Base.ZLOC2, True, 1 - 2 ** n, False)
    k = 0
    while 2 ** (n * k) - 1 < i:
        k += 1
    if 2 ** (n * k) - 1 != i:
        return ring.zero()
    return GradedScalar(ring, {(2 ** (n * k) - 1) // (2 ** n - 1): 2 ** ((n - 1) * k)})


# axioms ----------------------------------------------------------------

def check_axioms(F: FormalGroupLaw) -> dict[str, bool]:
    """Unit, commutativity, associativity (three variables) and homogeneity."""
    ring, T = F.ring, F.trunc
    x, y = F.x(), F.y()
    zero2 = TruncSeries.zero(ring, 2, T)
    t1 = F.t()
    zero1 = TruncSeries.zero(ring, 1, T)
    X, Y, Z = (TruncSeries.var(ring, 3, T, i) for i in range(3))
    left = F.add(F.add(X, Y), Z)
    right = F.add(X, F.add(Y, Z))
    return {
        "unit_left": F.F.substitute([t1, zero1]) == t1,
        "unit_right": F.F.substitute([zero1, t1]) == t1,
        "commutative": F.F.substitute([y, x]) == F.F,
        "associative": left == right,
        "homogeneous_codim_1": F.F.codims() == {1},
        "zero_is_zero": F.F.substitute([zero2, zero2]).is_zero(),
    }
