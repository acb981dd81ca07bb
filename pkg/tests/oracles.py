"""Independent reference computations used to derive frozen test values.

Nothing here imports the package under test except where noted; the helpers
work on plain dicts of Fractions so they share no code with the library.
"""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from itertools import permutations, product

import sympy as sp


# bivariate polynomials in (v, x, y) as {(a, i, j): Fraction} -------------

def _mul(p, q, T):
    out = defaultdict(Fraction)
    for (a, i, j), c in p.items():
        for (b, k, m), d in q.items():
            if i + k + j + m <= T:
                out[(a + b, i + k, j + m)] += c * d
    return {k: c for k, c in out.items() if c}


def _add(p, q):
    out = defaultdict(Fraction, p)
    for k, c in q.items():
        out[k] += c
    return {k: c for k, c in out.items() if c}


def _compose_univariate(f, g, T):
    """f(g) for f = {(a, k): c} univariate in t and g bivariate with no constant."""
    out = {}
    power = {(0, 0, 0): Fraction(1)}
    maxk = max(k for _, k in f)
    for k in range(1, maxk + 1):
        power = _mul(power, g, T)
        for (a, kk), c in f.items():
            if kk == k:
                out = _add(out, {(a + b, i, j): c * d for (b, i, j), d in power.items()})
    return out


def morava_law_oracle(n: int, T: int) -> dict:
    """F = exp(log x + log y) for the height-n logarithm, by naive reversion."""
    log = {}
    k = 0
    while 2 ** (n * k) <= T:
        log[((2 ** (n * k) - 1) // (2 ** n - 1), 2 ** (n * k))] = Fraction(1, 2 ** k)
        k += 1
    # exp = t - sum_{k>=1} (log - t) terms, solved degree by degree in one variable
    exp = {(0, 1): Fraction(1)}
    for deg in range(2, T + 1):
        # coefficient of t^deg in log(exp(t)) must vanish
        g = {(a, i, 0): c for (a, i), c in exp.items()}
        comp = _compose_univariate(log, g, deg)
        for (a, i, j), c in comp.items():
            if i == deg:
                exp[(a, deg)] = exp.get((a, deg), Fraction(0)) - c
        exp = {k: c for k, c in exp.items() if c}
    lx = {(a, i, 0): c for (a, i), c in log.items()}
    ly = {(a, 0, i): c for (a, i), c in log.items()}
    return _compose_univariate(exp, _add(lx, ly), T)


def two_series_oracle(F: dict, T: int) -> dict:
    out = defaultdict(Fraction)
    for (a, i, j), c in F.items():
        if i + j <= T:
            out[(a, i + j)] += c
    return {k: c for k, c in out.items() if c}


# quadric via its embedding in projective space ----------------------------

def projective_model(D: int, b: list, pn: list):
    """Classes of Q pushed into P^(D+1), as vectors in H^0..H^(D+1).

    ``I_*(h^k) = H^k [2](H)`` and ``I_*(l_i) = H^(D+1-i)``; the point pushforward
    is ``chi(H^k) = [P^(D+1-k)]``.  Coefficients are opaque ring elements.
    """
    N = D + 2

    def h_power(k):
        vec = [0] * N
        for j, bj in enumerate(b):
            if j >= 1 and k + j < N:
                vec[k + j] = vec[k + j] + bj
        return vec

    def l_class(i):
        vec = [0] * N
        vec[D + 1 - i] = 1
        return vec

    def chi(vec):
        total = 0
        for k, c in enumerate(vec):
            if k <= D + 1:
                total = total + c * pn[D + 1 - k]
        return total

    return h_power, l_class, chi


# Weyl groups by brute force -----------------------------------------------

def signed_perm_group(kind: str, l: int) -> set:
    out = set()
    for perm in permutations(range(1, l + 1)):
        for signs in product((1, -1), repeat=l):
            if kind == "D" and signs.count(-1) % 2:
                continue
            out.add(tuple(p * s for p, s in zip(perm, signs)))
    return out


def simple_reflection_images(kind: str, l: int) -> list:
    """One-line images of e_1..e_l under s_1..s_l, written down by hand."""
    gens = []
    for i in range(1, l):
        img = list(range(1, l + 1))
        img[i - 1], img[i] = i + 1, i
        gens.append(tuple(img))
    img = list(range(1, l + 1))
    if kind == "B":
        img[l - 1] = -l
    else:
        img[l - 2], img[l - 1] = -l, -(l - 1)
    gens.append(tuple(img))
    return gens


def compose_signed(u, w):
    """(u w)(e_i) = u(w(e_i))."""
    out = []
    for x in w:
        y = u[abs(x) - 1]
        out.append(y if x > 0 else -y)
    return tuple(out)


def word_lengths(kind: str, l: int) -> dict:
    """Cayley-graph distance from the identity."""
    gens = simple_reflection_images(kind, l)
    e = tuple(range(1, l + 1))
    dist = {e: 0}
    frontier = [e]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                u = compose_signed(w, s)
                if u not in dist:
                    dist[u] = dist[w] + 1
                    nxt.append(u)
        frontier = nxt
    return dist


# Chow-level divided differences with sympy -------------------------------

def sympy_vars(l: int):
    return sp.symbols(f"x1:{l + 1}")


def sympy_reflect(kind: str, l: int, i: int, expr):
    xs = sympy_vars(l)
    img = simple_reflection_images(kind, l)[i - 1]
    sub = {}
    for k, y in enumerate(img):
        # s(e_(k+1)) = sign e_|y|, hence s(x_(k+1)) = sign x_|y| additively
        sub[xs[k]] = xs[abs(y) - 1] if y > 0 else -xs[abs(y) - 1]
    return expr.subs(sub, simultaneous=True)


def sympy_root(kind: str, l: int, i: int):
    xs = sympy_vars(l)
    if i < l:
        return xs[i - 1] - xs[i]
    return xs[l - 1] if kind == "B" else xs[l - 2] + xs[l - 1]


def sympy_demazure(kind: str, l: int, i: int, expr):
    num = sp.expand(expr - sympy_reflect(kind, l, i, expr))
    q, r = sp.div(num, sympy_root(kind, l, i), *sympy_vars(l))
    assert r == 0
    return sp.expand(q)
