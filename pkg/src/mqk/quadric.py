"""The ring A*(Q) of a split projective quadric for a free theory.

Basis: ``h^0, ..., h^d`` and ``l_0, ..., l_d`` with ``d = D // 2``; ``h^k`` has
codimension ``k`` and ``l_i`` codimension ``D - i``.  Products:

* ``h * l_i = l_{i-1}`` (zero for i = 0),
* ``l_i * l_j = l_0`` iff ``i = j = d`` and ``D = 0 mod 4``, else zero,
* ``h^(d+1) = sum_{i=1}^{D-d} b_i l_{D-d-i}`` where ``[2](t) = sum b_i t^i``.

Every ``l_i * l_j`` is a class of codimension at least ``D`` and the
coefficient ring sits in non-positive degrees, so the l-l products carry no
correction terms for any theory; only the integer ``l_d^2`` is needed and it
is read from Chow.  The table above is therefore exact for every law.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from .errors import PreconditionViolated, RingMismatch
from .fgl import (
    FormalGroupLaw,
    MoravaSpec,
    mishchenko_classes,
    mk_additive,
    mk_morava,
    mk_multiplicative,
    two_series,
)
from .series import Base, GradedScalar, RingSpec, kill_v, reduce_coefficients

Basis = tuple  # ("h", k) or ("l", i)


def basis_name(e: Basis) -> str:
    kind, k = e
    if kind == "h":
        return "1" if k == 0 else ("h" if k == 1 else f"h^{k}")
    return f"l_{k}"


def scalar_prefix(c: GradedScalar) -> str:
    """Render a coefficient in front of a product, '' for 1 and '-' for -1."""
    if c == 1:
        return ""
    if c == -1:
        return "-"
    text = str(c)
    if len(c.terms) > 1:
        return f"({text})·"
    return f"{text}·"


class QuadricTheory:
    """Split quadric of dimension D with the theory of the given law."""

    def __init__(self, D: int, fgl: FormalGroupLaw, pn: list[GradedScalar] | None = None,
                 label: str | None = None):
        if D < 1:
            raise PreconditionViolated("quadric dimension must be >= 1")
        if fgl.trunc < D + 2:
            raise PreconditionViolated(
                f"law known to degree {fgl.trunc}; the quadric of dimension {D} needs {D + 2}")
        self.D = D
        self.d = D // 2
        self.fgl = fgl
        self.ring: RingSpec = fgl.ring
        self.label = label or fgl.name
        two = two_series(fgl)
        self.b = [two.coeff((i,)) for i in range(D + 2)]
        self.pn = pn if pn is not None else mishchenko_classes(fgl, D)
        if len(self.pn) < D + 1:
            raise PreconditionViolated("need [P^i] for 0 <= i <= D")
        self.basis: list[Basis] = [("h", k) for k in range(self.d + 1)] + \
                                  [("l", i) for i in range(self.d + 1)]
        self.index = {e: j for j, e in enumerate(self.basis)}
        self._products: dict = {}

    def __repr__(self):
        return f"QuadricTheory(D={self.D}, {self.label} over {self.ring})"

    # elements ------------------------------------------------------------
    def element(self, coeffs: dict) -> "QuadricClass":
        return QuadricClass(self, coeffs)

    def zero(self) -> "QuadricClass":
        return QuadricClass(self, {})

    def one(self) -> "QuadricClass":
        return self.h(0)

    def scalar(self, c) -> "QuadricClass":
        return self.one() * c

    def v(self, power: int = 1) -> GradedScalar:
        return self.ring.v(power)

    def l(self, i: int) -> "QuadricClass":
        """``l_i``; zero for negative i."""
        if i < 0:
            return self.zero()
        if i > self.d:
            raise IndexError(f"l_{i} is not defined for d = {self.d}")
        return QuadricClass(self, {("l", i): self.ring.one()})

    def h(self, k: int) -> "QuadricClass":
        """Normal form of ``h^k``; zero for negative k."""
        if k < 0:
            return self.zero()
        if k <= self.d:
            return QuadricClass(self, {("h", k): self.ring.one()})
        shift = k - self.d - 1
        out = self.zero()
        for i in range(1, self.D - self.d + 1):
            j = self.D - self.d - i - shift
            if j >= 0 and not self.b[i].is_zero():
                out = out + self.l(j) * self.b[i]
        return out

    def codim(self, e: Basis) -> int:
        return e[1] if e[0] == "h" else self.D - e[1]

    # multiplication table -----------------------------------------------
    def basis_product(self, a: Basis, b: Basis) -> "QuadricClass":
        key = (a, b) if a <= b else (b, a)
        got = self._products.get(key)
        if got is None:
            got = self._compute_product(*key)
            self._products[key] = got
        return got

    def _compute_product(self, a: Basis, b: Basis) -> "QuadricClass":
        (ka, ia), (kb, ib) = a, b
        if ka == "h" and kb == "h":
            return self.h(ia + ib)
        if ka == "h":  # h^ia * l_ib
            return self.l(ib - ia)
        if ia == ib == self.d and self.D % 4 == 0:
            return self.l(0)
        return self.zero()

    def pushforward_basis(self, e: Basis) -> GradedScalar:
        kind, k = e
        if kind == "l":
            return self.pn[k]
        total = self.ring.zero()
        for j in range(1, self.D + 2 - k):
            total = total + self.b[j] * self.pn[self.D + 1 - k - j]
        return total

    @cached_property
    def pairing(self) -> dict:
        """``chi(a * b)`` for all pairs of basis elements."""
        return {(a, b): (self.basis_product(a, b)).pushforward()
                for a in self.basis for b in self.basis}

    def multiplication_table(self) -> dict:
        return {(a, b): self.basis_product(a, b) for a in self.basis for b in self.basis}


@dataclass(frozen=True, eq=False)
class QuadricClass:
    theory: QuadricTheory
    coeffs: dict

    def __post_init__(self):
        clean = {}
        ring = self.theory.ring
        for e, c in self.coeffs.items():
            if not isinstance(c, GradedScalar):
                c = GradedScalar(ring, {0: c})
            elif c.ring != ring:
                raise RingMismatch(f"{c.ring} vs {ring}")
            if e not in self.theory.index:
                raise KeyError(f"{e} is not a basis element")
            if not c.is_zero():
                clean[e] = c
        object.__setattr__(self, "coeffs", clean)

    def _check(self, other: "QuadricClass"):
        if other.theory is not self.theory:
            raise RingMismatch("classes of different quadric theories")

    def __add__(self, other):
        if not isinstance(other, QuadricClass):
            other = self.theory.scalar(other)
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return QuadricClass(self.theory, out)

    __radd__ = __add__

    def __neg__(self):
        return QuadricClass(self.theory, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GradedScalar)):
            return QuadricClass(self.theory, {e: c * other for e, c in self.coeffs.items()})
        if not isinstance(other, QuadricClass):
            return NotImplemented
        self._check(other)
        th = self.theory
        acc: dict = {}
        for a, ca in self.coeffs.items():
            for b, cb in other.coeffs.items():
                prod = th.basis_product(a, b)
                if not prod.coeffs:
                    continue
                cab = ca * cb
                for e, c in prod.coeffs.items():
                    acc[e] = acc[e] + cab * c if e in acc else cab * c
        return QuadricClass(th, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.theory.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, QuadricClass):
            return NotImplemented
        return self.theory is other.theory and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def is_zero(self) -> bool:
        return not self.coeffs

    def pushforward(self) -> GradedScalar:
        """Push forward to the point (A*(pt)-linear)."""
        th = self.theory
        total = th.ring.zero()
        for e, c in self.coeffs.items():
            total = total + c * th.pushforward_basis(e)
        return total

    def codims(self) -> set[int]:
        th = self.theory
        return {th.codim(e) + cd for e, c in self.coeffs.items() for cd in c.codims()}

    def is_homogeneous(self) -> bool:
        return len(self.codims()) <= 1

    def vector(self) -> list[GradedScalar]:
        zero = self.theory.ring.zero()
        return [self.coeffs.get(e, zero) for e in self.theory.basis]

    def map_to(self, target: QuadricTheory, fn=None) -> "QuadricClass":
        """Image under a coefficient map (default: ``reduce_coefficients``)."""
        fn = fn or (lambda c: reduce_coefficients(c, target.ring))
        return QuadricClass(target, {e: fn(c) for e, c in self.coeffs.items()})

    def __str__(self):
        if not self.coeffs:
            return "0"
        th = self.theory
        parts = []
        for e in sorted(self.coeffs, key=th.index.__getitem__):
            c = self.coeffs[e]
            name = basis_name(e)
            pre = scalar_prefix(c)
            if name == "1" and pre:
                parts.append(pre.rstrip("·") if pre != "-" else "-1")
            else:
                parts.append(pre + name)
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


# built-in theories -----------------------------------------------------

THEORY_KINDS = ("chow", "k0", "k2", "k3", "ck2", "ck3")
COEFF_KINDS = {"f2": Base.F2, "z2loc": Base.ZLOC2, "zloc2": Base.ZLOC2, "q": Base.Q, "z": Base.Z}


def default_trunc(D: int, n: int | None = None) -> int:
    return max(D + 2, 2 ** n + 4) if n else D + 2


def make_law(kind: str, coeff: str, D: int, trunc: int | None = None) -> FormalGroupLaw:
    base = COEFF_KINDS[coeff.lower()]
    kind = kind.lower()
    if kind in ("chow", "additive", "ch"):
        return mk_additive(trunc or default_trunc(D), base)
    if kind in ("k0", "multiplicative"):
        return mk_multiplicative(True, trunc or default_trunc(D), base)
    if kind.startswith(("k", "ck")):
        connective = kind.startswith("ck")
        n = int(kind[2:] if connective else kind[1:])
        T = trunc or default_trunc(D, n)
        return mk_morava(MoravaSpec(n, base, not connective), T)
    raise ValueError(f"unknown theory {kind!r}")


def make_theory(kind: str, coeff: str, D: int, trunc: int | None = None) -> QuadricTheory:
    fgl = make_law(kind, coeff, D, trunc)
    label = f"{kind}/{coeff}"
    return QuadricTheory(D, fgl, label=label)


def chow_image(x: QuadricClass, chow: QuadricTheory) -> QuadricClass:
    """Image under v -> 0 (connective theory to the additive one)."""
    return x.map_to(chow, lambda c: kill_v(c, chow.ring))


# the height identity ---------------------------------------------------

@dataclass
class HeightReport:
    n: int
    D: int
    d: int
    N: int
    lhs: QuadricClass
    rhs: QuadricClass

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def verify_height_identity(theory: QuadricTheory) -> HeightReport:
    """Compare ``h^(d+1)`` with ``v * h^N * l_d`` in K(n)(Q; F2).

    N = 2^n for D even and 2^n - 1 for D odd.  Needs D >= 2^(n+1) - 2.
    """
    n = theory.fgl.morava_n
    if n is None or theory.ring.base is not Base.F2 or not theory.ring.v_invertible:
        raise PreconditionViolated("the height identity is stated for K(n) with F2 coefficients")
    D, d = theory.D, theory.d
    if D < 2 ** (n + 1) - 2:
        raise PreconditionViolated(f"D = {D} < 2^(n+1) - 2 = {2 ** (n + 1) - 2}")
    N = 2 ** n if D % 2 == 0 else 2 ** n - 1
    h = theory.h(1)
    lhs = h ** (d + 1)
    rhs = (h ** N) * theory.l(d) * theory.v()
    return HeightReport(n, D, d, N, lhs, rhs)


def classes(theory: QuadricTheory) -> Iterable[QuadricClass]:
    for e in theory.basis:
        yield QuadricClass(theory, {e: theory.ring.one()})
