"""Verification suites and the report structure shared by text and JSON output."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import product

from . import __version__
from .demazure import (
    KAPPA_SIGN,
    BTRing,
    SchubertComb,
    char_map_chow,
    check_duality,
    demazure_schubert,
    kappa_signs,
    leibniz_holds,
)
from .errors import MQKError, PreconditionViolated
from .fgl import (
    MoravaSpec,
    check_axioms,
    default_morava_trunc,
    mishchenko_classes,
    mk_additive,
    mk_morava,
    morava_log,
    pn_class_morava,
    two_series,
    formal_inverse,
)
from .motives import (
    Correspondence,
    classify_tate,
    compose,
    diagonal,
    diagonal_by_duality,
    expected_twist,
    rational_half_projectors,
    simplified_tate_forms,
    summand_rank,
    tate_projectors,
    varpi_projectors,
)
from .quadric import (
    QuadricTheory,
    basis_name,
    default_trunc,
    make_law,
    make_theory,
    verify_height_identity,
)
from .series import Base, RingSpec, TruncSeries, reduce_coefficients
from .weyl import RootDatum, all_thetas

PASS, FAIL = "PASS", "FAIL"


@dataclass
class Check:
    name: str
    status: str
    witness: str | None = None

    def to_dict(self) -> dict:
        out = {"name": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def check(name: str, ok: bool, witness=None) -> Check:
    """A PASS/FAIL record; the witness is kept only on failure."""
    if ok:
        return Check(name, PASS)
    return Check(name, FAIL, None if witness is None else str(witness))


@dataclass
class Report:
    command: str
    config: dict
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.status == PASS for c in self.checks)

    def extend(self, checks):
        self.checks.extend(checks)

    def to_dict(self) -> dict:
        out = {"version": __version__, "command": self.command, "config": self.config,
               "checks": [c.to_dict() for c in self.checks]}
        for k, v in self.data.items():
            out.setdefault(k, v)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def to_text(self, verbose: bool = False) -> str:
        lines = [f"mqk {self.command}  " + " ".join(f"{k}={v}" for k, v in sorted(self.config.items()))]
        for key, value in self.data.items():
            if not isinstance(value, (dict, list)):
                lines.append(f"{key}: {value}")
                continue
            lines.append(f"[{key}]")
            if isinstance(value, dict):
                lines.extend(f"  {k}: {v}" for k, v in value.items())
            elif isinstance(value, list):
                for item in value:
                    if isinstance(item, dict):
                        lines.append("  " + "  ".join(f"{k}={v}" for k, v in item.items()))
                    else:
                        lines.append(f"  {item}")
        lines.append("[checks]")
        shown = self.checks if verbose else [c for c in self.checks if c.status == FAIL]
        for c in shown:
            lines.append(f"  {c.status} {c.name}" + (f"\n    witness: {c.witness}" if c.witness else ""))
        npass = sum(c.status == PASS for c in self.checks)
        lines.append(f"  {npass}/{len(self.checks)} checks passed")
        lines.append(PASS if self.ok else FAIL)
        return "\n".join(lines) + "\n"


def rng_for(seed: int, label: str) -> random.Random:
    """Independent deterministic stream per check label."""
    return random.Random(f"{seed}:{label}")


# formal group laws -----------------------------------------------------

def fgl_checks(n: int, trunc: int | None = None) -> tuple[dict, list[Check]]:
    T = default_morava_trunc(n, trunc or 0)
    tag = f"fgl[n={n},T={T}]"
    checks = []
    data = {}
    try:
        law = mk_morava(MoravaSpec(n, Base.ZLOC2), T)
    except MQKError as exc:
        return data, [check(f"{tag}.integral", False, exc)]
    checks.append(check(f"{tag}.integral", True))
    for name, ok in sorted(check_axioms(law).items()):
        checks.append(check(f"{tag}.{name}", ok, law.F.to_canonical()))
    f2 = RingSpec(Base.F2, True, law.ring.v_degree, True)
    two_mod2 = reduce_coefficients(two_series(law), f2)
    expected = TruncSeries(f2, 1, T, {(1, 2 ** n): 1})
    checks.append(check(f"{tag}.two_series_mod2", two_mod2 == expected, two_mod2 - expected))
    pn = mishchenko_classes(law, T - 1)
    bad = [(i, str(p), str(pn_class_morava(n, i, law.ring))) for i, p in enumerate(pn)
           if p != pn_class_morava(n, i, law.ring)]
    checks.append(check(f"{tag}.mishchenko_closed_form", not bad, bad[:1]))
    data["law"] = law.F.pretty(["x", "y"])
    data["two_series"] = two_series(law).pretty(["t"])
    data["inverse"] = formal_inverse(law).pretty(["t"])
    data["log"] = morava_log(n, T).pretty(["t"])
    data["P_classes"] = {f"[P^{i}]": str(p) for i, p in enumerate(pn)}
    return data, checks


# quadric rings ---------------------------------------------------------

QUADRIC_GRID = {
    "chow": ("f2", "zloc2", "q"),
    "k0": ("f2", "zloc2", "q"),
    "k2": ("f2", "zloc2", "q"),
    "k3": ("f2", "zloc2", "q"),
}


def _basis_classes(th: QuadricTheory):
    return [th.element({e: 1}) for e in th.basis]


def quadric_checks(kind: str, coeff: str, D: int, trunc: int | None = None) -> list[Check]:
    th = make_theory(kind, coeff, D, trunc)
    tag = f"quadric[{kind}/{coeff},D={D}]"
    d = D // 2
    out = []
    B = _basis_classes(th)
    bad = None
    for (i, a), (j, b) in product(enumerate(B), repeat=2):
        if a * b != b * a:
            bad = (basis_name(th.basis[i]), basis_name(th.basis[j]))
            break
    out.append(check(f"{tag}.commutative", bad is None, bad))
    bad = None
    for a, b, c in product(B, repeat=3):
        if (a * b) * c != a * (b * c):
            bad = (str(a), str(b), str(c), str((a * b) * c), str(a * (b * c)))
            break
    out.append(check(f"{tag}.associative", bad is None, bad))
    h = th.h(1)
    bad = [i for i in range(d + 1) if h * th.l(i) != (th.l(i - 1) if i > 0 else th.zero())]
    out.append(check(f"{tag}.hl", not bad, bad))
    bad = []
    for i in range(d + 1):
        for j in range(d + 1):
            want = th.l(0) if (i == j == d and D % 4 == 0) else th.zero()
            if th.l(i) * th.l(j) != want:
                bad.append((i, j))
    out.append(check(f"{tag}.ll", not bad, bad))
    hd1 = h ** (d + 1)
    want = th.zero()
    for i in range(1, D - d + 1):
        if D - d - i >= 0:
            want = want + th.l(D - d - i) * th.b[i]
    out.append(check(f"{tag}.hh", hd1 == want, f"{hd1} vs {want}"))
    bad = [i for i in range(d + 1) if th.l(i).pushforward() != th.pn[i]]
    out.append(check(f"{tag}.el", not bad, bad))
    bad = []
    for k in range(D + 1):
        want = th.ring.zero()
        for j in range(1, D + 2 - k):
            want = want + th.b[j] * th.pn[D + 1 - k - j]
        if (h ** k).pushforward() != want:
            bad.append(k)
    out.append(check(f"{tag}.eh", not bad, bad))
    if kind == "chow":
        want = th.l(D - d - 1) * 2
        out.append(check(f"{tag}.chow_hh", hd1 == want, f"{hd1} vs {want}"))
    if kind in ("k2", "k3") and coeff == "f2":
        out.extend(_morava_mod2_checks(th, tag))
    if kind in ("k2", "k3") and coeff == "zloc2":
        out.append(_chi_mod2_commutes(th, tag))
    return out


def _morava_mod2_checks(th: QuadricTheory, tag: str) -> list[Check]:
    """The explicit multiplication and pushforward for K(n) with F2 coefficients."""
    n = th.fgl.morava_n
    D, d = th.D, th.d
    v = th.v()
    h = th.h(1)
    out = []
    want = th.l(D - d - 2 ** n) * v if D >= 2 ** (n + 1) - 1 else th.zero()
    got = h ** (d + 1)
    out.append(check(f"{tag}.hhkn", got == want, f"{got} vs {want}"))
    out.append(check(f"{tag}.el0kn", th.l(0).pushforward() == 1, th.l(0).pushforward()))
    bad = [i for i in range(1, d + 1) if not th.l(i).pushforward().is_zero()]
    out.append(check(f"{tag}.elkn", not bad, bad))
    k0 = D + 1 - 2 ** n
    bad = [k for k in range(D + 1) if k != k0 and not (h ** k).pushforward().is_zero()]
    out.append(check(f"{tag}.ehkn", not bad, bad))
    if D >= 2 ** n - 1:
        got = (h ** k0).pushforward()
        out.append(check(f"{tag}.ehDkn", got == v, got))
    return out


def _chi_mod2_commutes(th: QuadricTheory, tag: str) -> Check:
    f2 = QuadricTheory(th.D, th.fgl.coerce(th.ring.with_base(Base.F2)))
    bad = []
    for e in th.basis:
        x = th.element({e: 1})
        lhs = reduce_coefficients(x.pushforward(), f2.ring)
        rhs = x.map_to(f2).pushforward()
        if lhs != rhs:
            bad.append((basis_name(e), str(lhs), str(rhs)))
    for k in range(th.D + 1):
        x = th.h(k)
        lhs = reduce_coefficients(x.pushforward(), f2.ring)
        rhs = x.map_to(f2).pushforward()
        if lhs != rhs:
            bad.append((f"h^{k}", str(lhs), str(rhs)))
    return check(f"{tag}.chi_mod2_commutes", not bad, bad[:1])


def quadric_table_data(th: QuadricTheory) -> dict:
    table = []
    for i, a in enumerate(th.basis):
        for b in th.basis[i:]:
            table.append(f"{basis_name(a)} * {basis_name(b)} = {th.basis_product(a, b)}")
    powers = [f"h^{k} = {th.h(k)}" for k in range(th.d + 1, th.D + 2)]
    chi = {basis_name(e): str(th.pushforward_basis(e)) for e in th.basis}
    chi.update({f"h^{k}": str(th.h(k).pushforward()) for k in range(th.d + 1, th.D + 1)})
    return {"basis": [basis_name(e) for e in th.basis], "products": table,
            "powers": powers, "pushforward": chi}


# motivic decomposition -------------------------------------------------

def _orthogonality(projectors: list[tuple[str, Correspondence]], tag: str) -> list[Check]:
    bad_idem, bad_orth = [], []
    for (na, p), (nb, q) in product(projectors, repeat=2):
        pq = compose(q, p)
        if na == nb:
            if pq != p:
                bad_idem.append(f"{na}: {na}o{na} = {pq}")
        elif not pq.is_zero():
            bad_orth.append(f"{nb}o{na} = {pq}")
    return [check(f"{tag}.idempotent", not bad_idem, bad_idem[:1]),
            check(f"{tag}.orthogonal", not bad_orth, bad_orth[:1])]


def decompose(n: int, D: int, coeff: str = "f2", trunc: int | None = None) -> Report:
    config = {"n": n, "D": D, "coeff": coeff, "trunc": trunc or default_trunc(D, n)}
    report = Report("decompose", config)
    if n < 2:
        raise PreconditionViolated("decompose needs n >= 2")
    th = make_theory(f"k{n}", coeff, D, trunc)
    tag = f"decompose[n={n},D={D}]"
    dropped: list[str] = []
    delta = diagonal(th, dropped)
    pis = tate_projectors(th)
    varpis = varpi_projectors(th, dropped)
    d = th.d
    Dp = D - 2 ** n + 1
    named = [(f"pi_{i}", p) for i, p in enumerate(pis)] + [(f"varpi_{j}", p) for j, p in varpis]
    c = report.checks
    dual = diagonal_by_duality(th)
    c.append(check(f"{tag}.diagonal_formula", delta == dual, f"formula - dual = {delta - dual}"))
    bad = []
    for e, f in product(th.basis, repeat=2):
        unit = Correspondence(th, {(e, f): 1})
        if compose(unit, delta) != unit or compose(delta, unit) != unit:
            bad.append(f"{basis_name(e)}×{basis_name(f)}")
    c.append(check(f"{tag}.diagonal_unit", not bad, bad[:1]))
    c.append(check(f"{tag}.diagonal_symmetric", delta.transpose() == delta, delta - delta.transpose()))
    c.extend(_orthogonality(named, tag))
    total = sum((p for _, p in named), Correspondence.zero(th))
    c.append(check(f"{tag}.sum_is_diagonal", total == delta, f"sum - diagonal = {total - delta}"))
    c.append(check(f"{tag}.count", len(named) == 2 * d + 2, f"{len(named)} != {2 * d + 2}"))
    c.append(check(f"{tag}.homogeneous", all(p.is_homogeneous_of(D) for _, p in named),
                   [nm for nm, p in named if not p.is_homogeneous_of(D)]))
    ranks, twists = [], []
    for (nm, p) in named:
        kind, idx = nm.split("_")
        idx = int(idx)
        r = summand_rank(p)
        t = classify_tate(p)
        want = idx if kind == "pi" else expected_twist(th, idx)
        ranks.append({"projector": nm, "rank": r})
        twists.append((nm, t, want))
    c.append(check(f"{tag}.rank_one", all(r["rank"] == 1 for r in ranks),
                   [r for r in ranks if r["rank"] != 1][:1]))
    c.append(check(f"{tag}.tate_twists", all(t == w for _, t, w in twists),
                   [x for x in twists if x[1] != x[2]][:1]))
    expected_pi = max(D - 2 ** n + 2, 0)
    c.append(check(f"{tag}.tate_count", len(pis) == expected_pi, f"{len(pis)} != {expected_pi}"))
    residual_rank = None
    if pis:
        residual = delta - sum(pis, Correspondence.zero(th))
        residual_rank = summand_rank(residual)
        want = 2 ** n if D % 2 == 0 else 2 ** n - 1
        c.append(check(f"{tag}.residual_rank", residual_rank == want, f"{residual_rank} != {want}"))
        bad = [(i, str(p)) for i, p in simplified_tate_forms(th) if pis[i] != p]
        c.append(check(f"{tag}.simplified_forms", not bad, bad[:1]))
    report.data.update({
        "n": n, "D": D, "Dprime": Dp, "dprime": Dp - d,
        "diagonal": delta.to_text(),
        "dropped_terms": dropped,
        "projectors": [{"name": nm, "twist": t, "correspondence": p.to_text()}
                       for (nm, p), (_, t, _) in zip(named, twists)],
        "ranks": ranks,
        "residual_rank": residual_rank,
    })
    return report


def height_checks(n: int, D: int) -> list[Check]:
    th = make_theory(f"k{n}", "f2", D)
    rep = verify_height_identity(th)
    return [check(f"height[n={n},D={D}]", rep.holds, f"h^{rep.d + 1} = {rep.lhs}, v*h^{rep.N}*l_{rep.d} = {rep.rhs}")]


def rational_checks(kind: str, D: int) -> list[Check]:
    th = make_theory(kind, "q", D)
    tag = f"rational[{kind},D={D}]"
    rp = rational_half_projectors(th)
    named = [(f"pi_{i}", p) for i, p in enumerate(rp.projectors)]
    out = [check(f"{tag}.count", len(named) == D + 1)]
    out.extend(_orthogonality(named, tag))
    w = rp.varpi
    out.append(check(f"{tag}.varpi_symmetric", w.transpose() == w, w - w.transpose()))
    out.append(check(f"{tag}.varpi_idempotent", w.is_idempotent(), compose(w, w) - w))
    out.append(check(f"{tag}.varpi_zero_iff_odd", w.is_zero() == (D % 2 == 1), w))
    if not w.is_zero():
        r = summand_rank(w)
        out.append(check(f"{tag}.varpi_rank_one", r == 1, r))
    if kind == "chow":
        out.append(check(f"{tag}.literal_half", rp.literal_matches,
                         [str(p) for p, q in zip(rp.projectors, rp.literal) if p != q][:1]))
    return out


# Weyl groups and divided differences -----------------------------------

def weyl_group_checks(R: RootDatum) -> list[Check]:
    tag = f"weyl[{R}]"
    out = [check(f"{tag}.cartan", R.cartan_matrix() == R.expected_cartan(R.kind, R.rank), R.cartan_matrix()),
           check(f"{tag}.order", R.order() == R.expected_order() == len(R.generated_elements()),
                 (R.order(), R.expected_order()))]
    w0 = R.longest_element()
    out.append(check(f"{tag}.w0", R.kind != "B" or w0.img == tuple(-i for i in range(1, R.rank + 1)), w0))
    bad = [w for w in R.elements if len(R.reduced_word(w)) != R.length(w) or R.element(R.reduced_word(w)) != w]
    out.append(check(f"{tag}.reduced_words", not bad, bad[:1]))
    bad = [t for t in all_thetas(R.rank) if not R.check_parabolic_factorization(t)]
    out.append(check(f"{tag}.parabolic_factorization", not bad, bad[:1]))
    return out


def _random_word(rng: random.Random, rank: int, length: int) -> tuple[int, ...]:
    return tuple(rng.randint(1, rank) for _ in range(length))


def braid_checks(R: RootDatum, seed: int, samples: int = 5) -> list[Check]:
    tag = f"demazure[{R}]"
    bt = BTRing(R, mk_additive(8))
    rng = rng_for(seed, f"{tag}.braid")
    polys = [bt.random_poly(rng, 4) for _ in range(samples)]
    l = R.rank
    bad_sq, bad_braid, bad_nonred = [], [], []
    for u in polys:
        for i in range(1, l + 1):
            if not bt.demazure(i, bt.demazure(i, u)).is_zero():
                bad_sq.append((i, u.pretty()))
            for j in range(i + 1, l + 1):
                m = R.braid_order(i, j)
                w1 = tuple((i, j)[q % 2] for q in range(m))
                w2 = tuple((j, i)[q % 2] for q in range(m))
                if bt.demazure_word(w1, u) != bt.demazure_word(w2, u):
                    bad_braid.append((w1, w2, u.pretty()))
        for _ in range(3):
            word = _random_word(rng, l, rng.randint(2, 4))
            if not R.is_reduced(word) and not bt.demazure_word(word, u).is_zero():
                bad_nonred.append((word, u.pretty()))
    return [check(f"{tag}.square_zero", not bad_sq, bad_sq[:1]),
            check(f"{tag}.braid", not bad_braid, bad_braid[:1]),
            check(f"{tag}.non_reduced_vanish", not bad_nonred, bad_nonred[:1])]


def duality_checks(R: RootDatum) -> list[Check]:
    tag = f"schubert[{R}]"
    N = R.length(R.longest_element())
    results = [check_duality(R, w) for w in R.elements]
    bad = [str(r.w) for r in results if abs(r.value) != 1 or not r.others_vanish]
    sign_bad = [str(r.w) for r in results if r.value != (-1) ** (N - R.length(r.w))]
    w0 = R.longest_element()
    top_bad = [i for i in range(1, R.rank + 1)
               if not demazure_schubert(i, SchubertComb.basis(R, w0)).is_zero()]
    return [check(f"{tag}.duality", not bad, bad[:1]),
            check(f"{tag}.duality_sign", not sign_bad, sign_bad[:1]),
            check(f"{tag}.top_class_killed", not top_bad, top_bad)]


def charmap_checks(R: RootDatum, seed: int, samples: int = 6, max_degree: int = 3) -> list[Check]:
    tag = f"charmap[{R}]"
    bt = BTRing(R, mk_additive(max_degree + 2))
    rng = rng_for(seed, tag)
    bad = []
    for _ in range(samples):
        s = rng.randint(0, max_degree)
        u = bt.random_poly(rng, s, terms=5).homogeneous_part(s)
        cu = char_map_chow(bt, u)
        for i in range(1, R.rank + 1):
            lhs = demazure_schubert(i, cu)
            rhs = char_map_chow(bt, bt.demazure(i, u))
            if lhs != rhs:
                bad.append((i, u.pretty(), str(lhs), str(rhs)))
    return [check(f"{tag}.intertwines", not bad, bad[:1])]


def leibniz_checks(R: RootDatum, seed: int, law: str = "k2", coeff: str = "f2",
                   pairs: int = 100, trunc: int = 8) -> list[Check]:
    tag = f"leibniz[{R},{law}/{coeff}]"
    F = make_law(law, coeff, trunc - 2, trunc)
    bt = BTRing(R, F)
    rng = rng_for(seed, tag)
    bad = []
    for _ in range(pairs):
        u, v = bt.random_poly(rng, 3), bt.random_poly(rng, 3)
        i = rng.randint(1, R.rank)
        if not leibniz_holds(bt, i, u, v):
            bad.append((i, u.pretty(), v.pretty()))
    return [check(f"{tag}.leibniz", not bad, bad[:1])]


def kappa_checks(R: RootDatum, seed: int, law: str, coeff: str, samples: int = 4,
                 trunc: int = 8) -> list[Check]:
    tag = f"kappa[{R},{law}/{coeff}]"
    F = make_law(law, coeff, trunc - 2, trunc)
    bt = BTRing(R, F)
    rng = rng_for(seed, tag)
    bad = []
    for _ in range(samples):
        u = bt.random_poly(rng, 4)
        for i in range(1, R.rank + 1):
            if KAPPA_SIGN not in kappa_signs(bt, i, u):
                bad.append((i, u.pretty()))
    out = [check(f"{tag}.square_is_minus_kappa", not bad, bad[:1])]
    hom = [i for i in range(1, R.rank + 1) if not bt.kappa(i).is_homogeneous()]
    out.append(check(f"{tag}.kappa_homogeneous", not hom, hom))
    return out
