"""Weyl groups of types B_l and D_l as signed permutations of Z^l."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations, product
from typing import Iterable, Sequence

Vector = tuple[int, ...]


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _unit(l: int, i: int, sign: int = 1) -> Vector:
    return tuple(sign if j == i else 0 for j in range(l))


def _is_negative(vec: Sequence[int]) -> bool:
    for x in vec:
        if x:
            return x < 0
    return False


@dataclass(frozen=True, order=True)
class SignedPerm:
    """``img[i] = +-(j+1)`` means ``w(e_(i+1)) = +-e_(j+1)``."""
    img: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.img)

    @classmethod
    def identity(cls, l: int) -> "SignedPerm":
        return cls(tuple(range(1, l + 1)))

    def __mul__(self, other: "SignedPerm") -> "SignedPerm":
        """``(self * other)(e) = self(other(e))``."""
        out = []
        for x in other.img:
            y = self.img[abs(x) - 1]
            out.append(y if x > 0 else -y)
        return SignedPerm(tuple(out))

    def inverse(self) -> "SignedPerm":
        out = [0] * self.rank
        for i, x in enumerate(self.img):
            out[abs(x) - 1] = (i + 1) if x > 0 else -(i + 1)
        return SignedPerm(tuple(out))

    def act(self, vec: Sequence[int]) -> Vector:
        out = [0] * self.rank
        for i, x in enumerate(self.img):
            out[abs(x) - 1] += vec[i] if x > 0 else -vec[i]
        return tuple(out)

    def negatives(self) -> int:
        return sum(1 for x in self.img if x < 0)

    def __str__(self):
        return "[" + ",".join(str(x) for x in self.img) + "]"


class RootDatum:
    """Simple roots of B_l or D_l in the lattice Z^l, with the standard form."""

    def __init__(self, kind: str, rank: int):
        kind = kind.upper()
        if kind not in ("B", "D"):
            raise ValueError(f"unsupported type {kind!r}")
        if rank < 2 or (kind == "D" and rank < 3):
            raise ValueError(f"rank {rank} too small for type {kind}")
        self.kind = kind
        self.rank = rank
        l = rank
        roots = [tuple(1 if j == i else -1 if j == i + 1 else 0 for j in range(l)) for i in range(l - 1)]
        if kind == "B":
            roots.append(_unit(l, l - 1))
        else:
            roots.append(tuple(1 if j >= l - 2 else 0 for j in range(l)))
        self.simple_roots: list[Vector] = roots
        self._lengths: dict[SignedPerm, int] = {}

    def __repr__(self):
        return f"{self.kind}{self.rank}"

    def coroot_pairing(self, i: int, vec: Sequence[int]) -> int:
        """``alpha_i^vee(vec)`` for the simple root alpha_i (1-based i)."""
        a = self.simple_roots[i - 1]
        num = 2 * _dot(vec, a)
        den = _dot(a, a)
        if num % den:
            raise ValueError(f"{vec} pairs non-integrally with alpha_{i}")
        return num // den

    def cartan_matrix(self) -> list[list[int]]:
        """``a_ij = alpha_i^vee(alpha_j)``."""
        l = self.rank
        return [[self.coroot_pairing(i, self.simple_roots[j - 1]) for j in range(1, l + 1)]
                for i in range(1, l + 1)]

    @staticmethod
    def expected_cartan(kind: str, l: int) -> list[list[int]]:
        """Cartan matrix read off the Dynkin diagram."""
        m = [[2 if i == j else 0 for j in range(l)] for i in range(l)]
        edges = [(i, i + 1) for i in range(l - 2)]
        edges.append((l - 3, l - 1) if kind == "D" else (l - 2, l - 1))
        for i, j in edges:
            m[i][j] = m[j][i] = -1
        if kind == "B":
            m[l - 1][l - 2] = -2  # alpha_l short
        return m

    def braid_order(self, i: int, j: int) -> int:
        """Order of ``s_i s_j``, from the Cartan matrix."""
        if i == j:
            return 1
        c = self.cartan_matrix()
        prod_ = c[i - 1][j - 1] * c[j - 1][i - 1]
        return {0: 2, 1: 3, 2: 4, 3: 6}[prod_]

    # roots --------------------------------------------------------------
    @cached_property
    def positive_roots(self) -> list[Vector]:
        l = self.rank
        out = []
        for i in range(l):
            for j in range(i + 1, l):
                out.append(tuple(1 if k == i else -1 if k == j else 0 for k in range(l)))
                out.append(tuple(1 if k in (i, j) else 0 for k in range(l)))
            if self.kind == "B":
                out.append(_unit(l, i))
        return out

    def reflect(self, i: int, vec: Sequence[int]) -> Vector:
        a = self.simple_roots[i - 1]
        c = self.coroot_pairing(i, vec)
        return tuple(x - c * y for x, y in zip(vec, a))

    # the group ----------------------------------------------------------
    @cached_property
    def simple_reflections(self) -> list[SignedPerm]:
        out = []
        l = self.rank
        for i in range(1, l + 1):
            img = []
            for k in range(l):
                image = self.reflect(i, _unit(l, k))
                (j,) = [j for j, x in enumerate(image) if x]
                img.append((j + 1) * image[j])
            out.append(SignedPerm(tuple(img)))
        return out

    def s(self, i: int) -> SignedPerm:
        return self.simple_reflections[i - 1]

    def identity(self) -> SignedPerm:
        return SignedPerm.identity(self.rank)

    def contains(self, w: SignedPerm) -> bool:
        return w.rank == self.rank and (self.kind == "B" or w.negatives() % 2 == 0)

    @cached_property
    def elements(self) -> list[SignedPerm]:
        """All signed permutations in W, sorted."""
        l = self.rank
        out = []
        for perm in permutations(range(1, l + 1)):
            for signs in product((1, -1), repeat=l):
                w = SignedPerm(tuple(p * s for p, s in zip(perm, signs)))
                if self.contains(w):
                    out.append(w)
        return sorted(out)

    def generated_elements(self, gens: Iterable[int] | None = None) -> list[SignedPerm]:
        """Closure of the identity under right multiplication by the given s_i."""
        gens = list(range(1, self.rank + 1)) if gens is None else list(gens)
        seen = {self.identity()}
        frontier = [self.identity()]
        while frontier:
            nxt = []
            for w in frontier:
                for i in gens:
                    u = w * self.s(i)
                    if u not in seen:
                        seen.add(u)
                        nxt.append(u)
            frontier = nxt
        return sorted(seen)

    def order(self) -> int:
        return len(self.elements)

    def expected_order(self) -> int:
        f = 1
        for k in range(2, self.rank + 1):
            f *= k
        return 2 ** self.rank * f if self.kind == "B" else 2 ** (self.rank - 1) * f

    def length(self, w: SignedPerm) -> int:
        """Number of positive roots sent to negative ones."""
        got = self._lengths.get(w)
        if got is None:
            got = sum(1 for a in self.positive_roots if _is_negative(w.act(a)))
            self._lengths[w] = got
        return got

    def left_descents(self, w: SignedPerm) -> list[int]:
        lw = self.length(w)
        return [i for i in range(1, self.rank + 1) if self.length(self.s(i) * w) < lw]

    def reduced_word(self, w: SignedPerm) -> tuple[int, ...]:
        """Lexicographically smallest reduced word ``(i1, ..., ik)``, w = s_i1 ... s_ik."""
        word = []
        while True:
            desc = self.left_descents(w)
            if not desc:
                return tuple(word)
            word.append(desc[0])
            w = self.s(desc[0]) * w

    def element(self, word: Sequence[int]) -> SignedPerm:
        w = self.identity()
        for i in word:
            w = w * self.s(i)
        return w

    def is_reduced(self, word: Sequence[int]) -> bool:
        return self.length(self.element(word)) == len(word)

    def longest_element(self) -> SignedPerm:
        return max(self.elements, key=lambda w: (self.length(w), w))

    def mult(self, u: SignedPerm, v: SignedPerm) -> SignedPerm:
        return u * v

    # parabolics ---------------------------------------------------------
    def coset_min_reps(self, theta: Iterable[int]) -> list[SignedPerm]:
        """``W^P = {v : l(v s_i) = l(v) + 1 for all i in theta}``."""
        theta = sorted(set(theta))
        out = []
        for v in self.elements:
            lv = self.length(v)
            if all(self.length(v * self.s(i)) == lv + 1 for i in theta):
                out.append(v)
        return out

    def parabolic_subgroup(self, theta: Iterable[int]) -> list[SignedPerm]:
        return self.generated_elements(sorted(set(theta)))

    def check_parabolic_factorization(self, theta: Iterable[int]) -> bool:
        """``W^P x W_P -> W`` is a bijection with additive lengths."""
        theta = list(theta)
        reps = self.coset_min_reps(theta)
        sub = self.parabolic_subgroup(theta)
        seen = set()
        for u in reps:
            lu = self.length(u)
            for v in sub:
                w = u * v
                if self.length(w) != lu + self.length(v) or w in seen:
                    return False
                seen.add(w)
        return len(seen) == self.order()


def all_thetas(rank: int) -> list[tuple[int, ...]]:
    out = []
    for mask in range(2 ** rank):
        out.append(tuple(i + 1 for i in range(rank) if mask >> i & 1))
    return out
