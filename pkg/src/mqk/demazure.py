"""Divided differences on A*(BT) and the Schubert calculus of G/B.

A*(BT) is modelled as truncated power series in ``x_1..x_l``, where ``x_i``
is the class of the character ``e_i``.  For a weight ``lam`` the class
``x_lam`` is the formal sum of its coordinates under the law ``F``.

Words follow composition order: ``demazure_word((i1, ..., ik), u)`` is
``D_i1(...(D_ik(u)))``, matching ``w = s_i1 ... s_ik``.  With this convention
``D_w o D_i = D_(w s_i)`` and the characteristic map intertwines the two
actions.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .errors import NotHomogeneous
from .fgl import FormalGroupLaw, formal_inverse, g_series
from .series import TruncSeries
from .weyl import RootDatum, SignedPerm


class BTRing:
    """A*(BT) for a root datum and a formal group law, to a fixed truncation."""

    def __init__(self, datum: RootDatum, fgl: FormalGroupLaw, trunc: int | None = None):
        self.datum = datum
        self.fgl = fgl
        self.ring = fgl.ring
        self.l = datum.rank
        self.trunc = fgl.trunc if trunc is None else trunc
        if self.trunc > fgl.trunc:
            raise ValueError(f"law known to {fgl.trunc} < requested {self.trunc}")
        self._inv = formal_inverse(fgl)
        self._images: dict = {}

    # generators ---------------------------------------------------------
    def var(self, i: int, trunc: int | None = None) -> TruncSeries:
        """``x_i`` (1-based)."""
        return TruncSeries.var(self.ring, self.l, trunc or self.trunc, i - 1)

    def zero(self, trunc: int | None = None) -> TruncSeries:
        return TruncSeries.zero(self.ring, self.l, trunc or self.trunc)

    def constant(self, c, trunc: int | None = None) -> TruncSeries:
        return TruncSeries.constant(self.ring, self.l, trunc or self.trunc, c)

    def _signed_var(self, k: int, sign: int, T: int) -> TruncSeries:
        key = (k, sign, T)
        got = self._images.get(key)
        if got is None:
            if sign > 0:
                got = self.var(k + 1, T)
            else:
                inv = self._inv.truncated(T) if T < self._inv.trunc else self._inv
                got = inv.embed(self.l, [k])
            self._images[key] = got
        return got

    def _multiple(self, k: int, m: int, T: int) -> TruncSeries:
        """``x_(m e_k)`` as the m-fold formal sum."""
        if m == 0:
            return self.zero(T)
        base = self._signed_var(k, 1 if m > 0 else -1, T)
        out = base
        for _ in range(abs(m) - 1):
            out = self.add(out, base)
        return out

    def add(self, a: TruncSeries, b: TruncSeries) -> TruncSeries:
        F = self.fgl.F
        if F.trunc > a.trunc:
            F = F.truncated(a.trunc)
        return F.substitute([a, b])

    def x_lambda(self, lam: Sequence[int], trunc: int | None = None) -> TruncSeries:
        T = trunc or self.trunc
        out = None
        for k, m in enumerate(lam):
            if m == 0:
                continue
            term = self._multiple(k, m, T)
            out = term if out is None else self.add(out, term)
        return self.zero(T) if out is None else out

    def x_root(self, i: int, trunc: int | None = None) -> TruncSeries:
        return self.x_lambda(self.datum.simple_roots[i - 1], trunc)

    # operators ----------------------------------------------------------
    def act(self, w: SignedPerm, u: TruncSeries) -> TruncSeries:
        """Ring automorphism with ``x_lam -> x_(w lam)``."""
        T = u.trunc
        args = []
        for x in w.img:
            args.append(self._signed_var(abs(x) - 1, 1 if x > 0 else -1, T))
        return u.substitute(args)

    def weyl_action(self, i: int, u: TruncSeries) -> TruncSeries:
        return self.act(self.datum.s(i), u)

    def demazure(self, i: int, u: TruncSeries) -> TruncSeries:
        """``(u - s_i u) / x_alpha_i``; the result is known to ``u.trunc - 1``."""
        num = u - self.weyl_action(i, u)
        return num.exact_div(self.x_root(i, u.trunc))

    def demazure_word(self, word: Sequence[int], u: TruncSeries) -> TruncSeries:
        for i in reversed(word):
            u = self.demazure(i, u)
        return u

    def kappa(self, i: int) -> TruncSeries:
        """``G(x_alpha, x_-alpha)`` where ``F(x, y) = x + y + x y G(x, y)``."""
        G = g_series(self.fgl)
        T = min(G.trunc, self.trunc)
        a = self.datum.simple_roots[i - 1]
        xa = self.x_lambda(a, T)
        xm = self.x_lambda(tuple(-c for c in a), T)
        if G.trunc > T:
            G = G.truncated(T)
        return G.substitute([xa, xm])

    def random_poly(self, rng: random.Random, max_degree: int, terms: int = 4,
                    coeff_range: int = 3) -> TruncSeries:
        """A random polynomial with small integer coefficients."""
        coeffs = {}
        for _ in range(terms):
            deg = rng.randint(0, max_degree)
            exps = [0] * self.l
            for _ in range(deg):
                exps[rng.randrange(self.l)] += 1
            coeffs[tuple(exps)] = rng.randint(-coeff_range, coeff_range)
        return TruncSeries.from_coefficients(self.ring, self.l, self.trunc, coeffs)


def match_trunc(*series: TruncSeries) -> list[TruncSeries]:
    T = min(s.trunc for s in series)
    return [s if s.trunc == T else s.truncated(T) for s in series]


def leibniz_holds(bt: BTRing, i: int, u: TruncSeries, v: TruncSeries) -> bool:
    """``D_i(uv) = D_i(u) v + s_i(u) D_i(v)``."""
    lhs = bt.demazure(i, u * v)
    du, dv = bt.demazure(i, u), bt.demazure(i, v)
    su = bt.weyl_action(i, u)
    a, b, c, d = match_trunc(du, v, su, dv)
    rhs = a * b + c * d
    lhs, rhs = match_trunc(lhs, rhs)
    return lhs == rhs


def kappa_signs(bt: BTRing, i: int, u: TruncSeries) -> set[int]:
    """The signs s in {1, -1} with ``D_i D_i u = s kappa_i D_i u`` on this input."""
    dd, k, d = match_trunc(bt.demazure(i, bt.demazure(i, u)), bt.kappa(i), bt.demazure(i, u))
    kd = k * d
    return {s for s in (1, -1) if dd == kd * s}


KAPPA_SIGN = -1  # D_i o D_i = -kappa_i D_i, found by brute force (see tests)


# Schubert classes ------------------------------------------------------

@dataclass
class SchubertComb:
    """``sum c_w X_w`` in CH*(G/B); ``X_w0 = 1`` and ``X_e`` is the point."""
    datum: RootDatum
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {w: c for w, c in self.coeffs.items() if c}

    @classmethod
    def basis(cls, datum: RootDatum, w: SignedPerm, c: int = 1) -> "SchubertComb":
        return cls(datum, {w: c})

    def __add__(self, other: "SchubertComb") -> "SchubertComb":
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, 0) + c
        return SchubertComb(self.datum, out)

    def __mul__(self, c: int) -> "SchubertComb":
        return SchubertComb(self.datum, {w: x * c for w, x in self.coeffs.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __eq__(self, other):
        if not isinstance(other, SchubertComb):
            return NotImplemented
        return self.datum.kind == other.datum.kind and self.datum.rank == other.datum.rank \
            and self.coeffs == other.coeffs

    def is_zero(self) -> bool:
        return not self.coeffs

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for w in sorted(self.coeffs, key=lambda w: (self.datum.length(w), w)):
            parts.append(f"{self.coeffs[w]}*X{w}")
        return " + ".join(parts).replace("+ -", "- ")


def demazure_schubert(i: int, c: SchubertComb) -> SchubertComb:
    """``X_w -> -X_(w s_i)`` if ``l(w s_i) = l(w) + 1``, else 0."""
    R = c.datum
    s = R.s(i)
    out: dict = {}
    for w, coef in c.coeffs.items():
        ws = w * s
        if R.length(ws) == R.length(w) + 1:
            out[ws] = out.get(ws, 0) - coef
    return SchubertComb(R, out)


def schubert_word(word: Sequence[int], c: SchubertComb) -> SchubertComb:
    for i in reversed(word):
        c = demazure_schubert(i, c)
    return c


def duality_word(datum: RootDatum, w: SignedPerm) -> tuple[int, ...]:
    """Reversed reduced word of ``w^-1 w0``; its operator sends X_w to +-X_w0."""
    w0 = datum.longest_element()
    return tuple(reversed(datum.reduced_word(w.inverse() * w0)))


@dataclass
class DualityResult:
    w: SignedPerm
    value: int  # coefficient of X_w0 in the image of X_w
    others_vanish: bool


def check_duality(datum: RootDatum, w: SignedPerm) -> DualityResult:
    w0 = datum.longest_element()
    word = duality_word(datum, w)
    img = schubert_word(word, SchubertComb.basis(datum, w))
    value = img.coeffs.get(w0, 0) if set(img.coeffs) <= {w0} else 0
    lw = datum.length(w)
    others = all(schubert_word(word, SchubertComb.basis(datum, u)).is_zero()
                 for u in datum.elements if u != w and datum.length(u) == lw)
    return DualityResult(w, value, others)


def char_map_chow(bt: BTRing, u: TruncSeries) -> SchubertComb:
    """``c(u) = (-1)^(l(w0) - s) sum_(l(w) = s) D_w(u) Z_w`` with ``Z_w = X_(w0 w)``."""
    R = bt.datum
    if u.is_zero():
        return SchubertComb(R)
    if not u.is_homogeneous():
        raise NotHomogeneous(f"codimensions {sorted(u.codims())}")
    s = u.codim()
    if s > u.trunc:
        raise NotHomogeneous("degree exceeds the truncation")
    w0 = R.longest_element()
    N = R.length(w0)
    sign = -1 if (N - s) % 2 else 1
    out: dict = {}
    for w in R.elements:
        if R.length(w) != s:
            continue
        val = bt.demazure_word(R.reduced_word(w), u).constant_term()
        c = val.constant()
        if c:
            out[w0 * w] = sign * int(c)
    return SchubertComb(R, out)
