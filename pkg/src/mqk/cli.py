"""Command line driver: ``mqk <subcommand> ...``.

Exit status is 0 when every check passes, 1 on a failed check and 2 on a
configuration error.  ``MQK_SEED`` seeds every randomized check.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import checks as C
from .errors import MQKError
from .fgl import default_morava_trunc
from .quadric import THEORY_KINDS, COEFF_KINDS, make_law, make_theory
from .series import parse_series
from .weyl import RootDatum
from .demazure import BTRing

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from exc


def seed_from_env() -> int:
    raw = os.environ.get("MQK_SEED", "0")
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"MQK_SEED must be an integer, got {raw!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mqk", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--trunc", type=int, default=None, help="truncation degree override")
    common.add_argument("-v", "--verbose", action="store_true", help="list passing checks too")
    common.add_argument("-o", "--output", help="also write the JSON report to this file")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("fgl", parents=[common], help="Morava formal group law and its checks")
    s.add_argument("--n", type=int, required=True)

    s = sub.add_parser("quadric-table", parents=[common], help="multiplication table of A*(Q)")
    s.add_argument("--theory", choices=THEORY_KINDS, required=True)
    s.add_argument("--coeff", choices=sorted(COEFF_KINDS), default="f2")
    s.add_argument("--dim", type=int, required=True)

    s = sub.add_parser("decompose", parents=[common], help="decomposition of the diagonal in K(n)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--coeff", choices=("f2",), default="f2")

    s = sub.add_parser("demazure", parents=[common], help="Weyl group and divided difference checks")
    s.add_argument("--type", dest="kind", choices=("B", "D"), required=True)
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--op", choices=("duality", "braid", "charmap", "leibniz", "kappa", "group", "all"),
                   default="all")
    s.add_argument("--law", choices=THEORY_KINDS, default="chow", help="law for --word/--poly")
    s.add_argument("--coeff", choices=sorted(COEFF_KINDS), default="z")
    s.add_argument("--word", type=_int_list, help="apply D_i1 o ... o D_ik, e.g. 1,2,1")
    s.add_argument("--poly", help='polynomial in x1..xl, e.g. "x1^2 - x1*x2"')

    s = sub.add_parser("verify", parents=[common], help="property sweep over a grid")
    s.add_argument("--suite", choices=("all", "fgl", "quadric", "motives", "height", "rational", "weyl"),
                   default="all")
    s.add_argument("--n", type=_int_list, default=[2, 3])
    s.add_argument("--dmax", type=int, default=12)

    s = sub.add_parser("replay", help="re-run the command recorded in a JSON report")
    s.add_argument("report")
    return p


# subcommands -------------------------------------------------------------

def run_fgl(a) -> C.Report:
    if a.n < 1:
        raise ConfigError("n must be >= 1")
    T = default_morava_trunc(a.n, a.trunc or 0)
    rep = C.Report("fgl", {"n": a.n, "trunc": T})
    data, checks = C.fgl_checks(a.n, T)
    rep.data.update(data)
    rep.extend(checks)
    return rep


def _check_dim(dim: int, trunc: int | None):
    if dim < 1:
        raise ConfigError("dimension must be >= 1")
    if trunc is not None and trunc < dim + 2:
        raise ConfigError(f"truncation {trunc} < D + 2 = {dim + 2}")


def run_quadric_table(a) -> C.Report:
    _check_dim(a.dim, a.trunc)
    th = make_theory(a.theory, a.coeff, a.dim, a.trunc)
    rep = C.Report("quadric-table", {"theory": a.theory, "coeff": a.coeff, "D": a.dim,
                                     "trunc": th.fgl.trunc})
    rep.data.update(C.quadric_table_data(th))
    rep.extend(C.quadric_checks(a.theory, a.coeff, a.dim, a.trunc))
    return rep


def run_decompose(a) -> C.Report:
    if a.n < 2:
        raise ConfigError("decompose needs n >= 2")
    _check_dim(a.dim, a.trunc)
    return C.decompose(a.n, a.dim, a.coeff, a.trunc)


def _datum(kind: str, rank: int) -> RootDatum:
    try:
        return RootDatum(kind, rank)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def run_demazure(a, seed: int) -> C.Report:
    R = _datum(a.kind, a.rank)
    config = {"type": a.kind, "rank": a.rank, "op": a.op, "seed": seed}
    if a.word is not None or a.poly is not None:
        return _evaluate_word(a, R, config)
    rep = C.Report("demazure", config)
    ops = ("group", "braid", "duality", "charmap", "leibniz", "kappa") if a.op == "all" else (a.op,)
    for op in ops:
        if op == "group":
            rep.extend(C.weyl_group_checks(R))
        elif op == "braid":
            rep.extend(C.braid_checks(R, seed))
        elif op == "duality":
            rep.extend(C.duality_checks(R))
        elif op == "charmap":
            rep.extend(C.charmap_checks(R, seed))
        elif op == "leibniz":
            rep.extend(C.leibniz_checks(R, seed, pairs=20))
        elif op == "kappa":
            for law, coeff in (("k0", "z"), ("k2", "zloc2")):
                rep.extend(C.kappa_checks(R, seed, law, coeff))
    w0 = R.longest_element()
    rep.data["group"] = {"order": R.order(), "w0": str(w0), "length_w0": R.length(w0),
                         "reduced_word_w0": ",".join(map(str, R.reduced_word(w0)))}
    return rep


def _evaluate_word(a, R: RootDatum, config: dict) -> C.Report:
    word = tuple(a.word or ())
    if any(not 1 <= i <= R.rank for i in word):
        raise ConfigError(f"letters must lie in 1..{R.rank}")
    T = a.trunc or max(len(word) + 4, 6)
    if a.law in ("k2", "k3", "ck2", "ck3"):
        T = max(T, 2 ** int(a.law[-1]) + 4)
    law = make_law(a.law, a.coeff, T - 2, T)
    bt = BTRing(R, law)
    names = [f"x{j + 1}" for j in range(R.rank)]
    try:
        u = parse_series(a.poly or "1", bt.ring, R.rank, T, names)
    except MQKError as exc:
        raise ConfigError(str(exc)) from exc
    result = bt.demazure_word(word, u)
    config.update({"law": a.law, "coeff": a.coeff, "word": ",".join(map(str, word)),
                   "poly": a.poly or "1", "trunc": T})
    rep = C.Report("demazure", config)
    rep.data["input"] = u.pretty(names)
    rep.data["result"] = result.pretty(names)
    rep.data["known_to_degree"] = result.trunc
    rep.data["reduced"] = R.is_reduced(word)
    return rep


def run_verify(a, seed: int) -> C.Report:
    if a.dmax < 1:
        raise ConfigError("dmax must be >= 1")
    if any(n < 2 for n in a.n):
        raise ConfigError("verify expects Morava heights n >= 2")
    ns = sorted(set(a.n))
    rep = C.Report("verify", {"suite": a.suite, "n": ",".join(map(str, ns)), "dmax": a.dmax,
                              "seed": seed})
    want = (lambda s: a.suite in ("all", s))
    if want("fgl"):
        for n in ns:
            rep.extend(C.fgl_checks(n)[1])
    if want("quadric"):
        kinds = ["chow", "k0"] + [f"k{n}" for n in ns]
        for kind in kinds:
            for coeff in ("f2", "zloc2", "q"):
                for D in range(1, a.dmax + 1):
                    rep.extend(C.quadric_checks(kind, coeff, D))
    if want("motives"):
        for n in ns:
            for D in range(1, min(a.dmax, 2 ** n + 6) + 1):
                rep.extend(C.decompose(n, D).checks)
    if want("height"):
        for n in ns:
            for D in range(2 ** (n + 1) - 2, a.dmax + 1):
                rep.extend(C.height_checks(n, D))
    if want("rational"):
        for kind in ["chow", "k0"] + [f"k{n}" for n in ns]:
            for D in range(1, min(a.dmax, 8) + 1):
                rep.extend(C.rational_checks(kind, D))
    if want("weyl"):
        for kind, rank in (("B", 2), ("B", 3), ("D", 4)):
            R = RootDatum(kind, rank)
            rep.extend(C.weyl_group_checks(R))
            rep.extend(C.braid_checks(R, seed))
            rep.extend(C.duality_checks(R))
            if rank <= 3:
                rep.extend(C.charmap_checks(R, seed))
        rep.extend(C.leibniz_checks(RootDatum("B", 2), seed))
    return rep


def run_replay(a, seed: int) -> tuple[C.Report, int]:
    """Re-run a recorded report and compare the verdicts check by check."""
    try:
        with open(a.report, encoding="utf-8") as fh:
            old = json.load(fh)
        argv = old["config"]["argv"]
    except (OSError, KeyError, ValueError) as exc:
        raise ConfigError(f"cannot read report: {exc}") from exc
    new = dispatch(build_parser().parse_args(argv), seed)
    before = {c["name"]: c["status"] for c in old["checks"]}
    after = {c.name: c.status for c in new.checks}
    rep = C.Report("replay", {"report": os.path.basename(a.report), "argv": argv})
    rep.checks.append(C.check("replay.same_checks", before.keys() == after.keys(),
                              sorted(before.keys() ^ after.keys())[:5]))
    diff = sorted(k for k in before.keys() & after.keys() if before[k] != after[k])
    rep.checks.append(C.check("replay.same_verdicts", not diff, diff[:5]))
    rep.data["replayed_checks"] = len(after)
    return rep, 0


def dispatch(a, seed: int) -> C.Report:
    if a.command == "fgl":
        return run_fgl(a)
    if a.command == "quadric-table":
        return run_quadric_table(a)
    if a.command == "decompose":
        return run_decompose(a)
    if a.command == "demazure":
        return run_demazure(a, seed)
    if a.command == "verify":
        return run_verify(a, seed)
    raise ConfigError(f"unknown command {a.command}")


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    a = parser.parse_args(argv)  # exits with status 2 on bad usage
    try:
        seed = seed_from_env()
        if a.command == "replay":
            rep, _ = run_replay(a, seed)
            fmt, verbose, output = "text", True, None
        else:
            rep = dispatch(a, seed)
            rep.config["argv"] = argv
            fmt, verbose, output = a.format, a.verbose, a.output
    except (ConfigError, MQKError, ValueError) as exc:
        print(f"mqk: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(rep.to_json())
    sys.stdout.write(rep.to_json() if fmt == "json" else rep.to_text(verbose))
    return EXIT_OK if rep.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
