"""Acceptance criteria 1-10, one test each.

Every test prints a ``PASS criterion k`` or ``FAIL criterion k`` line; the
lines are repeated in the terminal summary.  Run standalone with
``python tests/test_acceptance.py``.
"""
import os
import subprocess
import sys
import time
from itertools import combinations_with_replacement

import pytest

from mqk import checks as C
from mqk.demazure import BTRing, char_map_chow, demazure_schubert
from mqk.fgl import MoravaSpec, mishchenko_classes, mk_additive, mk_morava, pn_class_morava
from mqk.series import Base, RingSpec, TruncSeries
from mqk.weyl import RootDatum

RESULTS: list[str] = []


def report(k, title, failures, elapsed, limit=None):
    slow = limit is not None and elapsed >= limit
    ok = not failures and not slow
    detail = f"{elapsed:.2f}s" + (f" (target < {limit}s)" if limit else "")
    if failures:
        detail += f"; first failure: {failures[0]}"
    line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {title} [{detail}]"
    RESULTS.append(line)
    print(line)
    assert not failures, failures[:3]
    assert not slow, f"took {elapsed:.1f}s, target {limit}s"


def failed(checks):
    return [f"{c.name}: {c.witness}" for c in checks if c.status != C.PASS]


def test_criterion_1_morava_law():
    t = time.perf_counter()
    bad = []
    for n in (2, 3):
        bad += failed(C.fgl_checks(n, 2 ** n + 4)[1])
    report(1, "Morava law axioms, integrality, [2] mod 2", bad, time.perf_counter() - t, 5)


def test_criterion_2_mishchenko():
    t = time.perf_counter()
    bad = []
    for n in (2, 3):
        T = 2 ** n + 4
        law = mk_morava(MoravaSpec(n), T)
        got = mishchenko_classes(law, T - 1)
        bad += [(n, i) for i, p in enumerate(got) if p != pn_class_morava(n, i, law.ring)]
    ring = RingSpec(Base.ZLOC2, True, -3, True)
    if pn_class_morava(2, 3, ring) != ring.v() * 2:
        bad.append("[P^3] in K(2) is not 2v")
    report(2, "Mishchenko classes match the closed form", bad, time.perf_counter() - t)


def test_criterion_3_4_quadric_grid():
    t = time.perf_counter()
    ring_checks, push_checks = [], []
    push_names = (".el", ".eh", ".el0kn", ".elkn", ".ehkn", ".ehDkn", ".chi_mod2_commutes")
    for kind, coeffs in C.QUADRIC_GRID.items():
        for coeff in coeffs:
            for D in range(1, 13):
                for c in C.quadric_checks(kind, coeff, D):
                    (push_checks if c.name.endswith(push_names) else ring_checks).append(c)
    elapsed = time.perf_counter() - t
    report(3, "quadric ring tables over the theory/coefficient grid, D <= 12",
           failed(ring_checks), elapsed, 60)
    report(4, "pushforward formulas and mod 2 reduction", failed(push_checks), elapsed)


def test_criterion_5_diagonal():
    t = time.perf_counter()
    bad = []
    for n in (2, 3):
        for D in range(1, 2 ** n + 7):
            rep = C.decompose(n, D)
            bad += [f"{c.name}: {c.witness}" for c in rep.checks
                    if c.status != C.PASS and not c.name.endswith((".tate_count", ".residual_rank"))]
    rep = C.decompose(2, 3)
    want = "1×l_0 + l_0×1 + h×l_1 + l_1×h + v·l_0×l_0"
    if rep.data["diagonal"] != want:
        bad.append(f"n=2, D=3 diagonal printed as {rep.data['diagonal']}")
    report(5, "diagonal, orthogonal Tate idempotents and twists", bad, time.perf_counter() - t, 60)


def test_criterion_6_tate_count():
    t = time.perf_counter()
    bad = []
    for n in (2, 3):
        for D in range(1, 2 ** n + 7):
            rep = C.decompose(n, D)
            bad += [f"{c.name}: {c.witness}" for c in rep.checks
                    if c.name.endswith((".tate_count", ".residual_rank")) and c.status != C.PASS]
            npi = sum(p["name"].startswith("pi_") for p in rep.data["projectors"])
            if D < 2 ** n - 1 and npi:
                bad.append(f"n={n}, D={D}: {npi} Tate projectors, expected none")
            if D >= 2 ** n - 1 and rep.data["residual_rank"] is None:
                bad.append(f"n={n}, D={D}: residual rank missing")
    report(6, "Tate projector count and residual rank", bad, time.perf_counter() - t)


def test_criterion_7_height_identity():
    t = time.perf_counter()
    bad = []
    for D in (6, 7, 8, 9, 10):
        bad += failed(C.height_checks(2, D))
    report(7, "h^(d+1) = v h^N l_d in K(2) with F2 coefficients", bad, time.perf_counter() - t)


def test_criterion_8_rational():
    t = time.perf_counter()
    bad = []
    for D in range(1, 9):
        bad += failed(C.rational_checks("chow", D))
    report(8, "rational projectors 1/2 h^i x h^(D-i)", bad, time.perf_counter() - t)


def _monomials(l, max_degree):
    for s in range(max_degree + 1):
        for combo in combinations_with_replacement(range(l), s):
            exps = [0] * l
            for i in combo:
                exps[i] += 1
            yield s, tuple(exps)


def test_criterion_9_weyl_demazure():
    t = time.perf_counter()
    bad = []
    orders = {("B", 2): 8, ("B", 3): 48, ("D", 4): 192}
    seed = int(os.environ.get("MQK_SEED", "0"))
    for (kind, l), order in orders.items():
        R = RootDatum(kind, l)
        if len(R.generated_elements()) != order:
            bad.append(f"{R}: order {len(R.generated_elements())} != {order}")
        bad += failed(C.weyl_group_checks(R))
        bad += failed(C.braid_checks(R, seed))
        bad += failed(C.duality_checks(R))
        bad += failed(C.leibniz_checks(R, seed, "k2", "f2", pairs=100))
    # characteristic map on every monomial of degree <= 3
    for kind, l in (("B", 2), ("B", 3)):
        R = RootDatum(kind, l)
        bt = BTRing(R, mk_additive(5))
        for s, exps in _monomials(l, 3):
            u = TruncSeries.from_coefficients(bt.ring, l, bt.trunc, {exps: 1})
            cu = char_map_chow(bt, u)
            for i in range(1, l + 1):
                if demazure_schubert(i, cu) != char_map_chow(bt, bt.demazure(i, u)):
                    bad.append(f"{R}: charmap fails for i={i}, u={u.pretty()}")
    report(9, "Weyl groups, Demazure operators, Schubert duality", bad, time.perf_counter() - t, 120)


def test_criterion_10_determinism(tmp_path):
    t = time.perf_counter()
    env = dict(os.environ, MQK_SEED="20261016")
    argv = [sys.executable, "-m", "mqk.cli", "demazure", "--type", "B", "--rank", "2", "--format", "json"]
    outs = [subprocess.run(argv, capture_output=True, env=env, check=False).stdout for _ in range(2)]
    argv2 = [sys.executable, "-m", "mqk.cli", "verify", "--suite", "weyl", "--format", "json"]
    outs2 = [subprocess.run(argv2, capture_output=True, env=env, check=False).stdout for _ in range(2)]
    bad = []
    if not outs[0] or outs[0] != outs[1]:
        bad.append("demazure reports differ")
    if not outs2[0] or outs2[0] != outs2[1]:
        bad.append("verify reports differ")
    report(10, "byte-identical JSON for a fixed MQK_SEED", bad, time.perf_counter() - t)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
