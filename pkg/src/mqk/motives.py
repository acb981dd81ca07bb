"""Correspondences on a split quadric and the decomposition of the diagonal.

A correspondence is an element of A*(Q x Q), written in the Kunneth basis as
``sum c_ab * (e_a x e_b)``.  Composition uses the middle pushforward::

    (c x e) o (a x b) = chi(b * c) * (a x e)

The realization of ``p`` on A*(Q) is ``x -> pr1_*(p * pr2^* x)``, i.e.
``(a x b)(x) = chi(b * x) * a``; its image for ``h^i x h^j`` is spanned by
``h^i``, which is how Tate twists are read off.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import HalfUnavailable, NonDivisible, NotIdempotent, ParseError, PreconditionViolated, RingMismatch
from .linalg import inverse, rank
from .quadric import QuadricClass, QuadricTheory, basis_name, scalar_prefix
from .series import Base, GradedScalar


class Correspondence:
    __slots__ = ("theory", "entries")

    def __init__(self, theory: QuadricTheory, entries: dict | None = None):
        clean = {}
        for (a, b), c in (entries or {}).items():
            if not isinstance(c, GradedScalar):
                c = GradedScalar(theory.ring, {0: c})
            if not c.is_zero():
                clean[(a, b)] = c
        self.theory = theory
        self.entries = clean

    @classmethod
    def zero(cls, theory):
        return cls(theory, {})

    def _check(self, other):
        if not isinstance(other, Correspondence) or other.theory is not self.theory:
            raise RingMismatch("correspondences over different theories")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        out = dict(self.entries)
        for k, c in other.entries.items():
            out[k] = out[k] + c if k in out else c
        return Correspondence(self.theory, out)

    __radd__ = __add__

    def __neg__(self):
        return Correspondence(self.theory, {k: -c for k, c in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if not isinstance(c, (int, Fraction, GradedScalar)):
            return NotImplemented
        return Correspondence(self.theory, {k: x * c for k, x in self.entries.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: "Correspondence") -> "Correspondence":
        """``self @ other`` is the composite ``self o other`` (other first)."""
        return compose(other, self)

    def __eq__(self, other):
        if not isinstance(other, Correspondence):
            return NotImplemented
        return self.theory is other.theory and self.entries == other.entries

    def __hash__(self):
        return hash(frozenset(self.entries.items()))

    def is_zero(self) -> bool:
        return not self.entries

    def transpose(self) -> "Correspondence":
        return Correspondence(self.theory, {(b, a): c for (a, b), c in self.entries.items()})

    def codims(self) -> set[int]:
        th = self.theory
        return {th.codim(a) + th.codim(b) + cd
                for (a, b), c in self.entries.items() for cd in c.codims()}

    def is_homogeneous_of(self, degree: int) -> bool:
        return self.codims() <= {degree}

    def is_idempotent(self) -> bool:
        return compose(self, self) == self

    def matrix(self) -> list[list[GradedScalar]]:
        """Coefficient matrix ``P[a][b]`` in basis order."""
        th = self.theory
        z = th.ring.zero()
        return [[self.entries.get((a, b), z) for b in th.basis] for a in th.basis]

    def realization(self) -> list[list[GradedScalar]]:
        """Matrix of ``x -> pr1_*(p * pr2^* x)``: column x, row a.

        The image is read off the first factor, so this reverses composition:
        ``(g @ f).realization() == f.realization() * g.realization()``.
        """
        th = self.theory
        z = th.ring.zero()
        out = [[z for _ in th.basis] for _ in th.basis]
        for (a, b), c in self.entries.items():
            ia = th.index[a]
            for jx, x in enumerate(th.basis):
                p = th.pairing[(b, x)]
                if not p.is_zero():
                    out[ia][jx] = out[ia][jx] + c * p
        return out

    def to_text(self) -> str:
        if not self.entries:
            return "0"
        parts = []
        for (a, b) in sorted(self.entries, key=_term_key):
            c = self.entries[(a, b)]
            parts.append(f"{scalar_prefix(c)}{basis_name(a)}×{basis_name(b)}")
        return " + ".join(parts).replace("+ -", "- ")

    def __str__(self):
        return self.to_text()

    __repr__ = __str__


def _term_key(term):
    # mixed h/l terms first, paired as h^i x l_j then l_j x h^i, then l x l, then h x h
    (ka, ia), (kb, ib) = term
    if ka != kb:
        i, j = (ia, ib) if ka == "h" else (ib, ia)
        return (0, i, j, ka != "h")
    return (1 if ka == "l" else 2, ia, ib, False)


def kunneth(x: QuadricClass, y: QuadricClass) -> Correspondence:
    if x.theory is not y.theory:
        raise RingMismatch("Kunneth product of classes from different theories")
    out = {}
    for a, ca in x.coeffs.items():
        for b, cb in y.coeffs.items():
            out[(a, b)] = ca * cb
    return Correspondence(x.theory, out)


def compose(f: Correspondence, g: Correspondence) -> Correspondence:
    """``g o f`` (apply f first): ``sum chi(b*c) (a x e)`` for f = a x b, g = c x e."""
    f._check(g)
    th = f.theory
    pairing = th.pairing
    by_left: dict = {}
    for (c, e), gc in g.entries.items():
        by_left.setdefault(c, []).append((e, gc))
    out: dict = {}
    for (a, b), fc in f.entries.items():
        for c, rest in by_left.items():
            p = pairing[(b, c)]
            if p.is_zero():
                continue
            fp = fc * p
            for e, gc in rest:
                k = (a, e)
                val = fp * gc
                out[k] = out[k] + val if k in out else val
    return Correspondence(th, out)


# the diagonal ----------------------------------------------------------

def diagonal_by_duality(theory: QuadricTheory) -> Correspondence:
    """``sum (G^-1)_ab e_a x e_b`` with G the pushforward pairing."""
    basis = theory.basis
    gram = [[theory.pairing[(a, b)] for b in basis] for a in basis]
    ginv = inverse(gram, theory.ring)
    out = {}
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            out[(a, b)] = ginv[i][j]
    return Correspondence(theory, out)


@dataclass
class MoravaData:
    n: int
    D: int
    d: int
    Dp: int  # D' = D - 2^n + 1
    dp: int  # d' = D' - d
    delta: int  # 1 iff D = 0 mod 4


def morava_data(theory: QuadricTheory) -> MoravaData:
    n = theory.fgl.morava_n
    ring = theory.ring
    if n is None or ring.base is not Base.F2 or not ring.v_invertible:
        raise PreconditionViolated("expected the theory K(n) with F2 coefficients")
    if n < 2:
        raise PreconditionViolated("the motivic decomposition needs n >= 2")
    D, d = theory.D, theory.d
    Dp = D - 2 ** n + 1
    return MoravaData(n, D, d, Dp, Dp - d, 1 if D % 4 == 0 else 0)


@dataclass
class _ZeroLog:
    """Collects basis classes dropped by the convention h^i = 0 = l_i for i < 0."""
    dropped: list[str] = field(default_factory=list)
    context: str = ""

    def _note(self, name: str):
        entry = f"{self.context}: {name}"
        if entry not in self.dropped:
            self.dropped.append(entry)

    def h(self, th: QuadricTheory, i: int) -> QuadricClass:
        if i < 0:
            self._note(f"h^{i}")
        return th.h(i)

    def l(self, th: QuadricTheory, i: int) -> QuadricClass:
        if i < 0:
            self._note(f"l_{i}")
        return th.l(i)


def diagonal(theory: QuadricTheory, dropped: list[str] | None = None) -> Correspondence:
    """The closed formula for the diagonal in K(n)(Q x Q; F2)."""
    md = morava_data(theory)
    z = _ZeroLog(context="diagonal")
    v = theory.v()
    d, Dp, dp = md.d, md.Dp, md.dp
    total = Correspondence.zero(theory)
    for i in range(d + 1):
        total = total + kunneth(z.h(theory, i), z.l(theory, i)) + kunneth(z.l(theory, i), z.h(theory, i))
    for i in range(dp, d + 1):
        total = total + kunneth(z.l(theory, i), z.l(theory, Dp - i)) * v
    if md.delta:
        w = z.h(theory, d) + z.l(theory, dp) * v
        total = total + kunneth(w, w)
    if dropped is not None:
        dropped.extend(z.dropped)
    return total


def tate_projectors(theory: QuadricTheory) -> list[Correspondence]:
    """``v^-1 h^i x h^(D'-i)`` for 0 <= i <= D'; empty when D < 2^n - 1."""
    md = morava_data(theory)
    vinv = theory.v(-1)
    return [kunneth(theory.h(i), theory.h(md.Dp - i)) * vinv for i in range(md.Dp + 1)]


def simplified_tate_forms(theory: QuadricTheory) -> list[tuple[int, Correspondence]]:
    """``(i, h^i x l_i)`` and ``(D'-i, l_i x h^i)`` for i < d'."""
    md = morava_data(theory)
    out = []
    for i in range(max(md.dp, 0)):
        out.append((i, kunneth(theory.h(i), theory.l(i))))
        out.append((md.Dp - i, kunneth(theory.l(i), theory.h(i))))
    return out


def varpi_projectors(theory: QuadricTheory, dropped: list[str] | None = None
                     ) -> list[tuple[int, Correspondence]]:
    """The projectors ``varpi_j`` for d' <= j <= d, as ``(j, varpi_j)``.

    Entries that vanish entirely under the zero convention are omitted.
    """
    md = morava_data(theory)
    z = _ZeroLog()
    v, vinv = theory.v(), theory.v(-1)
    d, Dp, dp = md.d, md.Dp, md.dp
    out = []
    for j in range(dp, d):
        z.context = f"varpi_{j}"
        left = z.h(theory, j) + z.l(theory, Dp - j) * v
        right = z.l(theory, j) + z.h(theory, Dp - j) * vinv
        p = kunneth(left, right)
        if not p.is_zero():
            out.append((j, p))
    z.context = f"varpi_{d}"
    w = z.h(theory, d) + z.l(theory, dp) * v
    right = z.l(theory, d) + z.h(theory, dp) * vinv
    if md.delta:
        right = right + w
    out.append((d, kunneth(w, right)))
    if dropped is not None:
        dropped.extend(z.dropped)
    return out


def expected_twist(theory: QuadricTheory, j: int) -> int:
    """Twist of ``varpi_j``; negative j are represented by the class l_(D'-j)."""
    n = theory.fgl.morava_n
    return j if j >= 0 else j + 2 ** n - 1


# ranks and Tate classification -----------------------------------------

def summand_rank(p: Correspondence) -> int:
    if not p.is_idempotent():
        raise NotIdempotent("rank is defined for idempotents only")
    return rank(p.realization(), p.theory.ring)


def classify_tate(p: Correspondence) -> int | None:
    """Twist j if ``p`` is a Tate projector of twist j, else None.

    With v a unit the codimension of the image generator is only defined
    modulo ``2^n - 1``.  The representative reported is j when the image is
    a unit multiple of ``h^j`` (0 <= j <= D), otherwise the codimension of the
    leading basis element of the image.
    """
    if not p.is_idempotent():
        raise NotIdempotent("classification is defined for idempotents only")
    th = p.theory
    real = p.realization()
    if rank(real, th.ring) != 1:
        return None
    col = next(j for j in range(len(th.basis)) if any(not row[j].is_zero() for row in real))
    column = {th.basis[i]: real[i][col] for i in range(len(th.basis)) if not real[i][col].is_zero()}
    codims = {th.codim(e) + cd for e, c in column.items() for cd in c.codims()}
    if len(codims) != 1:
        return None
    for j in range(th.D + 1):
        if _unit_multiple(column, th.h(j).coeffs):
            return j
    lead = min(column, key=th.index.__getitem__)
    return th.codim(lead)


def _unit_multiple(column: dict, target: dict) -> bool:
    if not target or column.keys() != target.keys():
        return False
    e = next(iter(target))
    try:
        u = column[e].exact_div(target[e])
    except NonDivisible:
        return False
    return u.is_unit() and all(column[k] == target[k] * u for k in target)


# rational projectors ---------------------------------------------------

@dataclass
class RationalProjectors:
    projectors: list[Correspondence]
    varpi: Correspondence
    literal: list[Correspondence]
    literal_matches: bool


def rational_half_projectors(theory: QuadricTheory) -> RationalProjectors:
    """Orthogonal idempotents lifting ``1/2 h^i x h^(D-i)``, 0 <= i <= D.

    The lift is ``h^i x h_i^*`` with ``h_i^*`` the dual of ``h^i`` for the
    pairing ``chi(h^a h^b)`` on the span of ``h^0..h^D``.  That Gram matrix is
    anti-triangular with 2 on the anti-diagonal, so it is invertible once 1/2
    is, and its inverse is ``1/2`` times the anti-identity exactly when every
    ``chi(h^k)`` with k < D vanishes (e.g. Chow); then the lift is literally
    ``1/2 h^i x h^(D-i)``.
    """
    if not theory.ring.contains_half:
        raise HalfUnavailable(f"1/2 is not in {theory.ring}")
    D = theory.D
    hp = [theory.h(k) for k in range(D + 1)]
    gram = [[(hp[a] * hp[b]).pushforward() for b in range(D + 1)] for a in range(D + 1)]
    ginv = inverse(gram, theory.ring)
    projectors = []
    for i in range(D + 1):
        dual = theory.zero()
        for b in range(D + 1):
            if not ginv[i][b].is_zero():
                dual = dual + hp[b] * ginv[i][b]
        projectors.append(kunneth(hp[i], dual))
    half = Fraction(1, 2)
    literal = [kunneth(hp[i], hp[D - i]) * half for i in range(D + 1)]
    varpi = diagonal_by_duality(theory) - sum(projectors, Correspondence.zero(theory))
    return RationalProjectors(projectors, varpi, literal, literal == projectors)


# parsing ----------------------------------------------------------------

_BASIS_RE = re.compile(r"^(?:(1)|h(?:\^\{?(-?\d+)\}?)?|l_\{?(-?\d+)\}?)$")


def _parse_basis(theory: QuadricTheory, text: str) -> QuadricClass:
    m = _BASIS_RE.match(text.strip())
    if not m:
        raise ParseError(f"not a basis class: {text!r}")
    if m.group(1):
        return theory.one()
    if m.group(3) is not None:
        return theory.l(int(m.group(3)))
    return theory.h(int(m.group(2)) if m.group(2) else 1)


def _parse_scalar(theory: QuadricTheory, text: str) -> GradedScalar:
    ring = theory.ring
    text = text.strip().strip("()")
    value = ring.one()
    for tok in re.split(r"[\s*·]+", text):
        if not tok:
            continue
        m = re.fullmatch(r"v(?:_\d+)?(?:\^\{?(-?\d+)\}?)?", tok)
        if m:
            value = value * ring.v(int(m.group(1) or 1))
        elif re.fullmatch(r"-?\d+(?:/\d+)?", tok):
            value = value * Fraction(tok)
        elif tok == "-":
            value = -value
        else:
            raise ParseError(f"cannot parse coefficient {tok!r}")
    return value


def parse_correspondence(theory: QuadricTheory, text: str) -> Correspondence:
    """Parse displays like ``1×l_0 + l_0×1 + v_2·l_0×l_0`` (``x`` also accepted for ×)."""
    total = Correspondence.zero(theory)
    text = text.replace(" x ", "×")
    for sign, term in re.findall(r"([+-]?)\s*([^+-]+(?:-\d+[^+-]*)*)", text):
        term = term.strip()
        if not term:
            continue
        if "×" not in term:
            raise ParseError(f"missing × in {term!r}")
        coeff_part, _, prod = term.rpartition("·") if "·" in term else ("", "", term)
        left, right = prod.split("×")
        c = _parse_scalar(theory, coeff_part) if coeff_part else theory.ring.one()
        if sign == "-":
            c = -c
        total = total + kunneth(_parse_basis(theory, left), _parse_basis(theory, right)) * c
    return total
