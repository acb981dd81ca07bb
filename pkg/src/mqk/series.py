"""Exact coefficient rings and truncated multivariate power series.

Coefficients live in ``B[v]`` or ``B[v, 1/v]`` for a base ring ``B`` among
F2, Z_(2), Q and Z.  The variable ``v`` carries a (usually negative) degree,
so a monomial ``c v^a x^e`` has codimension ``a * deg(v) + |e|``.

Series are truncated by total degree in the x-variables only; the v-exponent
is never truncated.  Internally a series is a flat dict keyed by
``(v_exponent, e_1, ..., e_k)`` so that products are a single double loop.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from operator import add
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    NonDivisible,
    NoRingMap,
    NotHomogeneous,
    NotIntegral,
    ParseError,
    RingMismatch,
    TruncationMismatch,
)

Number = Union[int, Fraction]


class Base(str, Enum):
    F2 = "F2"
    ZLOC2 = "Zloc2"
    Q = "Q"
    Z = "Z"


def _norm_f2(x):
    if type(x) is int:
        return x & 1
    x = Fraction(x)
    if x.denominator % 2 == 0:
        raise NotIntegral(f"{x} has even denominator, no image in F2")
    return x.numerator & 1


def _norm_q(x):
    if type(x) is int:
        return x
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def _norm_zloc2(x):
    if type(x) is int:
        return x
    x = Fraction(x)
    if x.denominator == 1:
        return x.numerator
    if x.denominator % 2 == 0:
        raise NotIntegral(f"{x} does not lie in Z_(2)")
    return x


def _norm_z(x):
    if type(x) is int:
        return x
    x = Fraction(x)
    if x.denominator != 1:
        raise NotIntegral(f"{x} is not an integer")
    return x.numerator


_NORM = {Base.F2: _norm_f2, Base.Q: _norm_q, Base.ZLOC2: _norm_zloc2, Base.Z: _norm_z}


def base_is_unit(base: Base, x) -> bool:
    if x == 0:
        return False
    if base is Base.F2 or base is Base.Q:
        return True
    if base is Base.Z:
        return x in (1, -1)
    return Fraction(x).numerator % 2 == 1


def base_div(base: Base, x, y):
    """Exact quotient ``x / y`` inside ``base``; raises NonDivisible."""
    if y == 0:
        raise ZeroDivisionError("division by zero")
    if base is Base.F2:
        return x
    if base is Base.Z:
        if x % y:
            raise NonDivisible(f"{x} is not divisible by {y} in Z")
        return x // y
    q = Fraction(x) / Fraction(y)
    try:
        return _NORM[base](q)
    except NotIntegral:
        raise NonDivisible(f"{x}/{y} does not lie in {base.value}") from None


def _fmt_number(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


@dataclass(frozen=True)
class RingSpec:
    """Coefficient ring ``base``, optionally adjoined a graded variable ``v``."""

    base: Base
    has_v: bool = False
    v_degree: int = 0
    v_invertible: bool = False

    def __post_init__(self):
        object.__setattr__(self, "base", Base(self.base))
        if not self.has_v and (self.v_degree or self.v_invertible):
            raise ValueError("v_degree/v_invertible require has_v")

    def norm(self, x):
        return _NORM[self.base](x)

    def scalar(self, c: Number = 1, vexp: int = 0) -> "GradedScalar":
        return GradedScalar(self, {vexp: c})

    def zero(self) -> "GradedScalar":
        return GradedScalar(self, {})

    def one(self) -> "GradedScalar":
        return GradedScalar(self, {0: 1})

    def v(self, power: int = 1) -> "GradedScalar":
        if not self.has_v:
            raise RingMismatch(f"{self} has no variable v")
        return GradedScalar(self, {power: 1})

    def with_base(self, base: Base) -> "RingSpec":
        return RingSpec(Base(base), self.has_v, self.v_degree, self.v_invertible)

    def with_v_invertible(self, flag: bool = True) -> "RingSpec":
        return RingSpec(self.base, self.has_v, self.v_degree, flag)

    def without_v(self) -> "RingSpec":
        return RingSpec(self.base)

    @property
    def contains_half(self) -> bool:
        return self.base is Base.Q

    def __str__(self):
        b = {"F2": "F2", "Zloc2": "Z(2)", "Q": "Q", "Z": "Z"}[self.base.value]
        if not self.has_v:
            return b
        inner = "v, v^-1" if self.v_invertible else "v"
        return f"{b}[{inner}] (deg v = {self.v_degree})"


def _check_vexp(ring: RingSpec, terms):
    if not ring.v_invertible:
        for a in terms:
            if a < 0:
                raise NotIntegral(f"negative power v^{a} in {ring}")
            if a and not ring.has_v:
                raise RingMismatch(f"{ring} has no variable v")


class GradedScalar:
    """A Laurent polynomial in ``v`` with coefficients in the base ring."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingSpec, terms: Mapping[int, Number] | None = None):
        norm = ring.norm
        clean = {}
        for a, c in (terms or {}).items():
            c = norm(c)
            if c:
                clean[int(a)] = c
        _check_vexp(ring, clean)
        self.ring = ring
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj._hash = None
        return obj

    def _coerce(self, other) -> "GradedScalar":
        if isinstance(other, GradedScalar):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return GradedScalar(self.ring, {0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out.get(a, 0) + c
        return GradedScalar(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedScalar(self.ring, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, Number] = {}
        for a, c in self.terms.items():
            for b, d in other.terms.items():
                out[a + b] = out.get(a + b, 0) + c * d
        return GradedScalar(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GradedScalar(self.ring, {0: other})
        if not isinstance(other, GradedScalar):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_unit(self) -> bool:
        if len(self.terms) != 1:
            return False
        (a, c), = self.terms.items()
        if a != 0 and not self.ring.v_invertible:
            return False
        return base_is_unit(self.ring.base, c)

    def inverse(self) -> "GradedScalar":
        if len(self.terms) != 1:
            raise NonDivisible(f"{self} is not a unit of {self.ring}")
        (a, c), = self.terms.items()
        if a != 0 and not self.ring.v_invertible:
            raise NonDivisible(f"{self} is not a unit of {self.ring}")
        if self.ring.base is Base.Z and c not in (1, -1):
            raise NonDivisible(f"{c} is not a unit of Z")
        # Zloc2 with even numerator: the guard in norm raises NotIntegral
        inv = self.ring.norm(Fraction(1) / Fraction(c)) if self.ring.base is not Base.F2 else 1
        return GradedScalar._raw(self.ring, {-a: inv})

    def exact_div(self, other: "GradedScalar") -> "GradedScalar":
        """Quotient ``q`` with ``q * other == self``, or NonDivisible."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        if self.is_zero():
            return self.ring.zero()
        base = self.ring.base
        lo_a, lo_b = min(self.terms), min(other.terms)
        shift = lo_a - lo_b
        if not self.ring.v_invertible and shift < 0:
            raise NonDivisible(f"{self} / {other}")
        num = {a - lo_a: c for a, c in self.terms.items()}
        den = {b - lo_b: c for b, c in other.terms.items()}
        top_b = max(den)
        lc = den[top_b]
        quot: dict[int, Number] = {}
        while num:
            top = max(num)
            if top < top_b:
                raise NonDivisible(f"{self} / {other}")
            qc = base_div(base, num[top], lc)
            quot[top - top_b + shift] = qc
            for b, c in den.items():
                k = top - top_b + b
                val = self.ring.norm(num.get(k, 0) - qc * c)
                if val:
                    num[k] = val
                else:
                    num.pop(k, None)
        return GradedScalar(self.ring, quot)

    def codims(self) -> set[int]:
        return {a * self.ring.v_degree for a in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.codims()) <= 1

    def codim(self) -> int | None:
        cs = self.codims()
        if len(cs) > 1:
            raise NotHomogeneous(f"{self} mixes codimensions {sorted(cs)}")
        return next(iter(cs)) if cs else None

    def constant(self):
        return self.terms.get(0, 0)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for a in sorted(self.terms):
            c = self.terms[a]
            if a == 0:
                parts.append(_fmt_number(c))
                continue
            vp = "v" if a == 1 else f"v^{a}"
            if c == 1:
                parts.append(vp)
            elif c == -1:
                parts.append("-" + vp)
            else:
                parts.append(f"{_fmt_number(c)}*{vp}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"GradedScalar({self})"


def _deg(key) -> int:
    return sum(key[1:])


def _mul_terms(at, bt, trunc, norm):
    blist = sorted(((_deg(k), k, c) for k, c in bt.items()), key=lambda t: t[0])
    out: dict = {}
    get = out.get
    for ka, ca in at.items():
        lim = trunc - _deg(ka)
        if lim < 0:
            continue
        for db, kb, cb in blist:
            if db > lim:
                break
            k = tuple(map(add, ka, kb))
            out[k] = get(k, 0) + ca * cb
    return {k: c for k, c in ((k, norm(c)) for k, c in out.items()) if c}


class TruncSeries:
    """A power series in ``nvars`` variables known up to total degree ``trunc``."""

    __slots__ = ("ring", "nvars", "trunc", "terms", "_hash")

    def __init__(self, ring: RingSpec, nvars: int, trunc: int, terms=None, *, _trusted=False):
        if nvars < 1 or trunc < 0:
            raise ValueError("nvars must be positive and trunc non-negative")
        self.ring = ring
        self.nvars = nvars
        self.trunc = trunc
        self._hash = None
        if _trusted:
            self.terms = terms
            return
        norm = ring.norm
        clean: dict = {}
        for k, c in (terms or {}).items():
            k = tuple(int(e) for e in k)
            if len(k) != nvars + 1:
                raise ValueError(f"key {k} does not have length {nvars + 1}")
            if _deg(k) > trunc:
                continue
            if min(k[1:]) < 0:
                raise ValueError(f"negative exponent in {k}")
            c = clean.get(k, 0) + c
            clean[k] = c
        clean = {k: c for k, c in ((k, norm(c)) for k, c in clean.items()) if c}
        _check_vexp(ring, {k[0] for k in clean})
        self.terms = clean

    # constructors ------------------------------------------------------
    @classmethod
    def zero(cls, ring, nvars, trunc):
        return cls(ring, nvars, trunc, {}, _trusted=True)

    @classmethod
    def constant(cls, ring, nvars, trunc, c: Number | GradedScalar = 1):
        if isinstance(c, GradedScalar):
            terms = {(a,) + (0,) * nvars: x for a, x in c.terms.items()}
            return cls(ring, nvars, trunc, terms)
        return cls(ring, nvars, trunc, {(0,) + (0,) * nvars: c})

    @classmethod
    def var(cls, ring, nvars, trunc, i: int):
        """The i-th variable (0-based)."""
        key = [0] * (nvars + 1)
        key[i + 1] = 1
        return cls(ring, nvars, trunc, {tuple(key): 1})

    @classmethod
    def from_coefficients(cls, ring, nvars, trunc, coeffs: Mapping[Sequence[int], Number | GradedScalar]):
        terms: dict = {}
        for exps, c in coeffs.items():
            exps = tuple(exps)
            if isinstance(c, GradedScalar):
                for a, x in c.terms.items():
                    terms[(a,) + exps] = terms.get((a,) + exps, 0) + x
            else:
                terms[(0,) + exps] = terms.get((0,) + exps, 0) + c
        return cls(ring, nvars, trunc, terms)

    # helpers -----------------------------------------------------------
    def _like(self, terms, trunc=None, nvars=None):
        return TruncSeries(self.ring, nvars or self.nvars, self.trunc if trunc is None else trunc,
                           terms, _trusted=True)

    def _compatible(self, other: "TruncSeries"):
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if other.nvars != self.nvars:
            raise ValueError(f"{self.nvars} vs {other.nvars} variables")
        if other.trunc != self.trunc:
            raise TruncationMismatch(f"trunc {self.trunc} vs {other.trunc}")

    def _scalar_terms(self, c) -> dict:
        if isinstance(c, GradedScalar):
            if c.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {c.ring}")
            return c.terms
        return {0: self.ring.norm(c)}

    # arithmetic --------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction, GradedScalar)):
            other = TruncSeries.constant(self.ring, self.nvars, self.trunc, other)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        self._compatible(other)
        norm = self.ring.norm
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = norm(out.get(k, 0) + c)
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        norm = self.ring.norm
        return self._like({k: norm(-c) for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GradedScalar)):
            other = TruncSeries.constant(self.ring, self.nvars, self.trunc, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GradedScalar)):
            return self.scale(other)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        self._compatible(other)
        return self._like(_mul_terms(self.terms, other.terms, self.trunc, self.ring.norm))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, GradedScalar)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "TruncSeries":
        st = self._scalar_terms(c)
        norm = self.ring.norm
        out: dict = {}
        for a, x in st.items():
            for k, y in self.terms.items():
                nk = (k[0] + a,) + k[1:]
                out[nk] = out.get(nk, 0) + x * y
        out = {k: c for k, c in ((k, norm(c)) for k, c in out.items()) if c}
        _check_vexp(self.ring, {k[0] for k in out})
        return self._like(out)

    def __pow__(self, k: int):
        if k < 0:
            return self.reciprocal() ** (-k)
        result = TruncSeries.constant(self.ring, self.nvars, self.trunc, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncSeries.constant(self.ring, self.nvars, self.trunc, other)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (self.ring == other.ring and self.nvars == other.nvars
                and self.trunc == other.trunc and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.nvars, self.trunc, frozenset(self.terms.items())))
        return self._hash

    def is_zero(self) -> bool:
        return not self.terms

    # structure ---------------------------------------------------------
    def order(self) -> int | None:
        """Lowest total degree carrying a nonzero term (None for zero)."""
        return min((_deg(k) for k in self.terms), default=None)

    def homogeneous_part(self, degree: int) -> "TruncSeries":
        return self._like({k: c for k, c in self.terms.items() if _deg(k) == degree})

    def truncated(self, trunc: int) -> "TruncSeries":
        """Forget terms above ``trunc`` (which must not exceed the current bound)."""
        if trunc > self.trunc:
            raise TruncationMismatch(f"cannot raise trunc from {self.trunc} to {trunc}")
        return self._like({k: c for k, c in self.terms.items() if _deg(k) <= trunc}, trunc)

    def coeff(self, exps: Sequence[int]) -> GradedScalar:
        exps = tuple(exps)
        return GradedScalar._raw(self.ring, {k[0]: c for k, c in self.terms.items() if k[1:] == exps})

    def coefficients(self) -> dict[tuple, GradedScalar]:
        grouped: dict[tuple, dict] = {}
        for k, c in self.terms.items():
            grouped.setdefault(k[1:], {})[k[0]] = c
        return {e: GradedScalar._raw(self.ring, t) for e, t in grouped.items()}

    def constant_term(self) -> GradedScalar:
        return self.coeff((0,) * self.nvars)

    def codims(self) -> set[int]:
        vd = self.ring.v_degree
        return {k[0] * vd + _deg(k) for k in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.codims()) <= 1

    def codim(self) -> int | None:
        cs = self.codims()
        if len(cs) > 1:
            raise NotHomogeneous(f"series mixes codimensions {sorted(cs)}")
        return next(iter(cs)) if cs else None

    def derivative(self, i: int) -> "TruncSeries":
        out = {}
        for k, c in self.terms.items():
            e = k[i + 1]
            if e:
                nk = list(k)
                nk[i + 1] = e - 1
                out[tuple(nk)] = c * e
        return TruncSeries(self.ring, self.nvars, max(self.trunc - 1, 0), out)

    def map_coefficients(self, fn) -> "TruncSeries":
        return self._like({k: fn(c) for k, c in self.terms.items()})

    def embed(self, nvars: int, positions: Sequence[int]) -> "TruncSeries":
        """Rename variable j to variable ``positions[j]`` of an ``nvars``-variable ring."""
        out = {}
        for k, c in self.terms.items():
            nk = [k[0]] + [0] * nvars
            for j, e in enumerate(k[1:]):
                nk[positions[j] + 1] += e
            out[tuple(nk)] = c
        return TruncSeries(self.ring, nvars, self.trunc, out)

    # composition and division ------------------------------------------
    def substitute(self, args: Sequence["TruncSeries"]) -> "TruncSeries":
        """Compose: replace variable j by ``args[j]`` (zero constant terms)."""
        return series_substitute(self, args)

    def reciprocal(self) -> "TruncSeries":
        c0 = self.constant_term()
        if not c0.is_unit():
            raise NonDivisible(f"constant term {c0} is not a unit")
        q = TruncSeries.constant(self.ring, self.nvars, self.trunc, c0.inverse())
        two = TruncSeries.constant(self.ring, self.nvars, self.trunc, 2)
        # Newton iteration q <- q (2 - s q) doubles the correct degree each time
        prec = 1
        while prec <= self.trunc:
            q = q * (two - self * q)
            prec *= 2
        return q

    def exact_div(self, den: "TruncSeries") -> "TruncSeries":
        return series_exact_div(self, den)

    # printing ----------------------------------------------------------
    def _sorted_keys(self):
        return sorted(self.terms, key=lambda k: (_deg(k), tuple(-e for e in k[1:]), k[0]))

    def to_canonical(self) -> str:
        """One term per line: ``coeff * v^a * x1^e1 ... xk^ek``, graded-lex order."""
        if not self.terms:
            return "0"
        lines = []
        for k in self._sorted_keys():
            xs = " ".join(f"x{j + 1}^{e}" for j, e in enumerate(k[1:]))
            if self.ring.has_v:
                lines.append(f"{_fmt_number(self.terms[k])} * v^{k[0]} * {xs}")
            else:
                lines.append(f"{_fmt_number(self.terms[k])} * {xs}")
        return "\n".join(lines)

    def pretty(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = ["t"] if self.nvars == 1 else [f"x{j + 1}" for j in range(self.nvars)]
        if not self.terms:
            return "0"
        out = []
        for k in self._sorted_keys():
            c = self.terms[k]
            factors = []
            if k[0]:
                factors.append("v" if k[0] == 1 else f"v^{k[0]}")
            for name, e in zip(names, k[1:]):
                if e:
                    factors.append(name if e == 1 else f"{name}^{e}")
            mono = "*".join(factors)
            if not mono:
                out.append(_fmt_number(c))
            elif c == 1:
                out.append(mono)
            elif c == -1:
                out.append("-" + mono)
            else:
                out.append(f"{_fmt_number(c)}*{mono}")
        return " + ".join(out).replace("+ -", "- ")

    def __str__(self):
        return self.pretty()

    def __repr__(self):
        return f"TruncSeries({self.pretty()}; trunc={self.trunc}, over {self.ring})"


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a * b


class _PowerCache:
    def __init__(self, g: TruncSeries):
        self.g = g
        self.pows = {1: g}

    def get(self, e: int) -> TruncSeries:
        p = self.pows.get(e)
        if p is None:
            half = self.get(e // 2)
            p = half * half
            if e % 2:
                p = p * self.g
            self.pows[e] = p
        return p


def series_substitute(f: TruncSeries, args: Sequence[TruncSeries]) -> TruncSeries:
    if len(args) != f.nvars:
        raise ValueError(f"expected {f.nvars} arguments, got {len(args)}")
    first = args[0]
    for g in args:
        if g.ring != f.ring:
            raise RingMismatch(f"{g.ring} vs {f.ring}")
        if g.trunc != first.trunc or g.nvars != first.nvars:
            raise TruncationMismatch("substituted series must share nvars and trunc")
        if not g.constant_term().is_zero():
            raise ValueError("substituted series must have zero constant term")
    T = first.trunc
    if f.trunc < T:
        raise TruncationMismatch(f"outer series known to {f.trunc} < {T}")
    caches = [_PowerCache(g) for g in args]
    one = TruncSeries.constant(f.ring, first.nvars, T, 1)
    norm = f.ring.norm
    prefix: dict[tuple, TruncSeries] = {(): one}

    def monomial(exps):
        got = prefix.get(exps)
        if got is None:
            head = monomial(exps[:-1])
            e = exps[-1]
            got = head if e == 0 else head * caches[len(exps) - 1].get(e)
            prefix[exps] = got
        return got

    out: dict = {}
    for exps, coeff in sorted(f.coefficients().items()):
        if sum(exps) > T:
            continue
        m = monomial(exps)
        for a, x in coeff.terms.items():
            for k, y in m.terms.items():
                nk = (k[0] + a,) + k[1:]
                out[nk] = out.get(nk, 0) + x * y
    out = {k: c for k, c in ((k, norm(c)) for k, c in out.items()) if c}
    return TruncSeries(f.ring, first.nvars, T, out, _trusted=True)


def _homog_div(num: dict, den: dict, lead, ring: RingSpec) -> dict:
    """Divide homogeneous polynomials given as {exps: GradedScalar}."""
    lm, lc = lead
    num = dict(num)
    quot: dict = {}
    while num:
        m = max(num)
        c = num[m]
        diff = tuple(x - y for x, y in zip(m, lm))
        if min(diff) < 0:
            raise NonDivisible(f"monomial {m} not divisible by leading monomial {lm}")
        q = c.exact_div(lc)
        quot[diff] = quot.get(diff, ring.zero()) + q
        for e, d in den.items():
            k = tuple(x + y for x, y in zip(diff, e))
            val = num.get(k, ring.zero()) - q * d
            if val.is_zero():
                num.pop(k, None)
            else:
                num[k] = val
    return quot


def series_exact_div(num: TruncSeries, den: TruncSeries) -> TruncSeries:
    """Exact quotient ``num / den``; known up to ``trunc - order(den)``."""
    num._compatible(den)
    if den.is_zero():
        raise ZeroDivisionError("division by the zero series")
    ring = num.ring
    T = num.trunc
    o = den.order()
    by_deg_den: dict[int, dict] = {}
    for e, c in den.coefficients().items():
        by_deg_den.setdefault(sum(e), {})[e] = c
    lowest = by_deg_den[o]
    lm = max(lowest)
    lead = (lm, lowest[lm])
    rem: dict[int, dict] = {}
    for e, c in num.coefficients().items():
        rem.setdefault(sum(e), {})[e] = c
    for k in range(o):
        if rem.get(k):
            raise NonDivisible(f"numerator has terms of degree {k} below the divisor order {o}")
    quot: dict = {}
    for k in range(o, T + 1):
        part = rem.get(k)
        if not part:
            continue
        q = _homog_div(part, lowest, lead, ring)
        qdeg = k - o
        for qe, qc in q.items():
            quot[qe] = qc
            for j, dpart in by_deg_den.items():
                if j == o or qdeg + j > T:
                    continue
                bucket = rem.setdefault(qdeg + j, {})
                for de, dc in dpart.items():
                    key = tuple(x + y for x, y in zip(qe, de))
                    val = bucket.get(key, ring.zero()) - qc * dc
                    if val.is_zero():
                        bucket.pop(key, None)
                    else:
                        bucket[key] = val
    return TruncSeries.from_coefficients(ring, num.nvars, T - o, quot)


# coefficient maps -------------------------------------------------------

_BASE_MAPS = {
    Base.Z: {Base.Z, Base.ZLOC2, Base.Q, Base.F2},
    Base.ZLOC2: {Base.ZLOC2, Base.Q, Base.F2},
    Base.Q: {Base.Q, Base.ZLOC2, Base.F2, Base.Z},  # partial: integrality checked per coefficient
    Base.F2: {Base.F2},
}


def _check_ring_map(src: RingSpec, tgt: RingSpec, vexps: Iterable[int]):
    if tgt.base not in _BASE_MAPS[src.base]:
        raise NoRingMap(f"no ring map {src.base.value} -> {tgt.base.value}")
    vexps = set(vexps)
    if src.has_v:
        if vexps - {0} and not tgt.has_v:
            raise NoRingMap("target ring has no v")
        if tgt.has_v and tgt.v_degree != src.v_degree:
            raise NoRingMap(f"deg v differs: {src.v_degree} vs {tgt.v_degree}")
        if any(a < 0 for a in vexps) and not tgt.v_invertible:
            raise NoRingMap("negative powers of v in a target without v^-1")


def reduce_coefficients(s, target: RingSpec):
    """Coefficientwise image of a GradedScalar or TruncSeries in ``target``."""
    if isinstance(s, GradedScalar):
        _check_ring_map(s.ring, target, s.terms)
        return GradedScalar(target, dict(s.terms))
    _check_ring_map(s.ring, target, (k[0] for k in s.terms))
    return TruncSeries(target, s.nvars, s.trunc, dict(s.terms))


def kill_v(s, target: RingSpec):
    """The specialisation v -> 0 into a ring without v."""
    if target.has_v:
        raise NoRingMap("target of v -> 0 must not contain v")
    if isinstance(s, GradedScalar):
        if any(a < 0 for a in s.terms):
            raise NoRingMap("v -> 0 is undefined on negative powers")
        _check_ring_map(s.ring.without_v(), target, ())
        return GradedScalar(target, {0: s.terms.get(0, 0)})
    if any(k[0] < 0 for k in s.terms):
        raise NoRingMap("v -> 0 is undefined on negative powers")
    _check_ring_map(s.ring.without_v(), target, ())
    return TruncSeries(target, s.nvars, s.trunc, {k: c for k, c in s.terms.items() if k[0] == 0})


# parsing ----------------------------------------------------------------

_FACTOR = re.compile(r"(\d+(?:/\d+)?|[a-z]\d*)(?:\^(-?\d+))?")


def parse_series(text: str, ring: RingSpec, nvars: int, trunc: int,
                 names: Sequence[str] | None = None) -> TruncSeries:
    """Parse a sum of monomials like ``3*v^2*x1^2*x2 - x3`` or canonical lines.

    Factors inside a term are separated by ``*`` or whitespace; variables are
    ``x1..xk`` (or the given ``names``), ``t`` for one variable, and ``v``.
    """
    if names is None:
        names = [f"x{j + 1}" for j in range(nvars)]
        if nvars == 1:
            names = ["x1", "t"]
    index = {name: (j if nvars > 1 else 0) for j, name in enumerate(names)}
    src = re.sub(r"\+\s*-", "-", text.strip().replace("\n", " + "))
    if src in ("", "0"):
        return TruncSeries.zero(ring, nvars, trunc)
    # split into signed terms on + / - that are not exponent signs
    terms = re.split(r"(?<!\^)\s*([+-])\s*", src)
    out = TruncSeries.zero(ring, nvars, trunc)
    sign = 1
    pending = []
    if terms and terms[0] == "":
        terms = terms[1:]
    else:
        terms = ["+"] + terms
    for i in range(0, len(terms), 2):
        op, body = terms[i], terms[i + 1] if i + 1 < len(terms) else ""
        sign = -1 if op == "-" else 1
        body = body.strip()
        if not body:
            raise ParseError(f"empty term in {text!r}")
        coeff: Number = sign
        key = [0] * (nvars + 1)
        for piece in re.split(r"[\s*]+", body):
            if not piece:
                continue
            m = _FACTOR.fullmatch(piece)
            if not m:
                raise ParseError(f"cannot parse factor {piece!r}")
            atom, exp = m.group(1), int(m.group(2) or 1)
            if atom[0].isdigit():
                coeff = coeff * Fraction(atom) ** exp
            elif atom == "v":
                key[0] += exp
            elif atom in index:
                if exp < 0:
                    raise ParseError(f"negative exponent on {atom}")
                key[index[atom] + 1] += exp
            else:
                raise ParseError(f"unknown variable {atom!r}")
        pending.append((tuple(key), coeff))
    for key, c in pending:
        out = out + TruncSeries(ring, nvars, trunc, {key: c})
    return out
