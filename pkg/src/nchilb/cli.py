"""Command-line front end: ``nchilb <subcommand> [flags]``.

Exit codes: 0 success, 1 usage or range error, 2 a verification failed.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

from . import asymptotics, fforacle, forest_core as fc, geometry as geo, qseries as qs, verify
from .errors import NchilbError
from .linalg import QQ, PrimeField
from .report import jsonable

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser, *need: str) -> None:
    p.add_argument("-m", type=int, default=2, help="number of letters (arity)")
    p.add_argument("-n", type=int, default=1, help="number of roots")
    if "d" in need:
        p.add_argument("-d", type=int, default=None, help="number of nodes / dimension of W")
    if "dmax" in need:
        p.add_argument("--dmax", type=int, default=6, help="truncation degree")
    p.add_argument("--format", choices=("json", "csv", "plain"), default="json")
    p.add_argument("--out", default=None, help="write output to this file")
    p.add_argument("--max-count", type=int, default=fc.DEFAULT_MAX_COUNT)
    p.add_argument("--max-space", type=int, default=fforacle.DEFAULT_MAX_SPACE)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nchilb", description="Cells, Betti numbers and zeta functions of "
                     "non-commutative Hilbert schemes, with cross-checks.")
    sub = parser.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("forests", help="list the forests indexing the cells")
    _common(p, "d")
    p = sub.add_parser("stat", help="critical set, d and d' of one forest")
    _common(p)
    p.add_argument("--forest", required=True)
    p = sub.add_parser("betti", help="Betti numbers and Poincare polynomial")
    _common(p, "d")
    p = sub.add_parser("euler", help="Euler characteristic")
    _common(p, "d")
    p = sub.add_parser("zeta", help="generating functions")
    _common(p, "dmax")
    p.add_argument("--kind", choices=("modified", "unmodified", "gamma", "euler"), default="modified")
    p = sub.add_parser("normal-form", help="point of a cell from (seeded random) coordinates")
    _common(p)
    p.add_argument("--forest", required=True)
    p.add_argument("-p", type=int, default=None, help="prime field (default: rationals)")
    p = sub.add_parser("submodule", help="generators of the submodule of a cell point")
    _common(p)
    p.add_argument("--forest", required=True)
    p.add_argument("-p", type=int, default=None)
    p = sub.add_parser("classify", help="cell containing a point given as JSON")
    _common(p)
    p.add_argument("--point", required=True, help="CellPoint JSON file, or - for stdin")
    p = sub.add_parser("point-count", help="number of F_q points")
    _common(p, "d")
    p.add_argument("-q", type=int, default=2)
    p.add_argument("--brute", action="store_true", help="also count by brute force (q prime)")
    p = sub.add_parser("census", help="brute-force points per cell over F_p")
    _common(p, "d")
    p.add_argument("-p", type=int, default=2)
    p = sub.add_parser("lattice", help="lattice paths and their coarea")
    _common(p, "d")
    p = sub.add_parser("airy", help="moments of the Airy distribution")
    _common(p)
    p.add_argument("-K", type=int, default=4)
    p = sub.add_parser("limit-check", help="normalized moments of the Betti distribution")
    _common(p)
    p.add_argument("--dlist", default="50,100,200,500,1000")
    p.add_argument("--jmax", type=int, default=2)
    p = sub.add_parser("verify", help="run cross-validation checks")
    _common(p, "dmax")
    p.add_argument("--all", action="store_true", help="run the full acceptance sweep")
    return parser


def _validate(a) -> None:
    if a.m < 1 or a.n < 1:
        raise UsageError(f"-m and -n must be >= 1 (got m={a.m}, n={a.n})")
    if getattr(a, "d", 0) is not None and getattr(a, "d", 0) < 0:
        raise UsageError("-d must be >= 0")
    if getattr(a, "dmax", 0) < 0:
        raise UsageError("--dmax must be >= 0")
    if a.cmd in ("forests", "betti", "euler", "point-count", "census", "lattice") and a.d is None:
        raise UsageError(f"{a.cmd} requires -d")


def _field(a):
    return QQ if a.p is None else PrimeField(a.p)


def _lambda_rng(a):
    return random.Random(a.seed)


def render_json(obj) -> str:
    """Canonical JSON: sorted keys, integers as strings, floats at 12 digits."""
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def verify_payload(rep, seed: int) -> dict:
    return dict(rep.to_json(), seed=seed)


def _render(obj, fmt: str, plain, csv_text=None) -> str:
    if fmt == "json":
        return render_json(obj)
    if fmt == "csv":
        if csv_text is None:
            raise UsageError("csv output is not available for this subcommand")
        return csv_text
    return plain if plain.endswith("\n") else plain + "\n"


def _cmd_forests(a):
    forests = fc.enumerate_forests(a.m, a.n, a.d, a.max_count)
    rows = [(fc.format_forest(F), fc.d_stat(F), fc.d_prime(F)) for F in forests]
    obj = {"m": a.m, "n": a.n, "d": a.d, "count": len(rows),
           "forests": [{"forest": f, "d": s, "dprime": p} for f, s, p in rows]}
    csv_text = "forest,d,dprime\n" + "".join(f'"{f}",{s},{p}\n' for f, s, p in rows)
    return obj, "\n".join(f"{f}\t{s}\t{p}" for f, s, p in rows), csv_text, EXIT_OK


def _cmd_stat(a):
    F = fc.parse_forest(a.forest, a.m, a.n)
    crit = fc.critical_set(F)
    obj = {
        "forest": fc.format_forest(F), "m": a.m, "n": F.n, "size": F.size,
        "c": len(crit), "critical": [[k, fc.format_word(w)] for k, w in crit],
        "d": fc.d_stat(F), "dprime": fc.d_prime(F),
    }
    plain = f"c={obj['c']} d={obj['d']} dprime={obj['dprime']}"
    return obj, plain, None, EXIT_OK


def _cmd_betti(a):
    t = geo.betti_numbers(a.m, a.n, a.d, a.max_count)
    plain = "betti " + " ".join(map(str, t.betti)) + f"\npoincare {t.poincare}".replace("q", "t")
    return t.to_json(), plain, t.to_csv(), EXIT_OK


def _cmd_euler(a):
    chi = geo.euler_closed_form(a.m, a.n, a.d)
    return {"m": a.m, "n": a.n, "d": a.d, "euler": chi}, str(chi), f"m,n,d,euler\n{a.m},{a.n},{a.d},{chi}\n", EXIT_OK


def _cmd_zeta(a):
    if a.kind == "gamma":
        coeffs = qs.gamma_series(a.m, a.dmax)
        obj = {"m": a.m, "dmax": a.dmax, "kind": "gamma",
               "coeffs": [{"num": [str(c) for c in g.num.coeffs], "den": [str(c) for c in g.den.coeffs]}
                          for g in coeffs]}
        return obj, "\n".join(f"t^{d}: {g}" for d, g in enumerate(coeffs)), None, EXIT_OK
    if a.kind == "euler":
        nums = qs.euler_numbers(a.m, a.n, a.dmax)
        return ({"m": a.m, "n": a.n, "dmax": a.dmax, "kind": "euler", "values": nums},
                " ".join(map(str, nums)), "d,euler\n" + "".join(f"{d},{v}\n" for d, v in enumerate(nums)),
                EXIT_OK)
    s = qs.zeta_bar(a.m, a.n, a.dmax) if a.kind == "modified" else qs.zeta_unmodified(a.m, a.n, a.dmax)
    obj = dict(s.to_json(a.m, a.n), kind=a.kind)
    return obj, "\n".join(f"t^{d}: {c}" for d, c in enumerate(s.coeffs)), qs.series_to_csv(s), EXIT_OK


def _cmd_normal_form(a):
    F = fc.parse_forest(a.forest, a.m, a.n)
    field = _field(a)
    lam = geo.random_lambda(F, field, _lambda_rng(a))
    pt = geo.normal_form_from_cell(F, lam, field)
    obj = {"forest": fc.format_forest(F), "seed": a.seed, "lambda": geo.lambda_to_json(lam, field),
           "point": pt.to_json()}
    return obj, json.dumps(pt.to_json(), sort_keys=True), None, EXIT_OK


def _cmd_submodule(a):
    F = fc.parse_forest(a.forest, a.m, a.n)
    field = _field(a)
    lam = geo.random_lambda(F, field, _lambda_rng(a))
    gens = geo.submodule_generators(F, lam)
    text = [g.format(field) for g in gens]
    return {"forest": fc.format_forest(F), "seed": a.seed, "field": field.name, "generators": text}, \
        "\n".join(text), None, EXIT_OK


def _cmd_classify(a):
    data = json.load(sys.stdin) if a.point == "-" else json.load(open(a.point, encoding="utf-8"))
    pt = geo.CellPoint.from_json(data)
    F = geo.classify_cell(pt, a.max_count)
    return {"forest": fc.format_forest(F), "d": fc.d_stat(F)}, fc.format_forest(F), None, EXIT_OK


def _cmd_point_count(a):
    pred = geo.predicted_point_count(a.m, a.n, a.d, a.q, a.max_count)
    obj = {"m": a.m, "n": a.n, "d": a.d, "q": a.q, "predicted": pred}
    code = EXIT_OK
    if a.brute:
        r = fforacle.brute_force_count(a.m, a.n, a.d, a.q, max_space=a.max_space, max_prime=a.q)
        obj["brute"] = r.to_json()
        obj["agree"] = r.point_count == pred
        code = EXIT_OK if obj["agree"] else EXIT_FAILED
    return obj, f"{pred}" + (f" brute={obj['brute']['pointCount']}" if a.brute else ""), None, code


def _cmd_census(a):
    r = fforacle.cell_census(a.m, a.n, a.d, a.p, max_space=a.max_space, max_prime=a.p)
    plain = "\n".join(f"{k}\t{v}" for k, v in r.per_cell.items())
    csv_text = "forest,count\n" + "".join(f'"{k}",{v}\n' for k, v in r.per_cell.items())
    return r.to_json(), plain, csv_text, EXIT_OK


def _cmd_lattice(a):
    paths = fc.enumerate_paths(a.m, a.n, a.d, a.max_count)
    rows = [(list(p), fc.coarea(p, a.m, a.n)) for p in paths]
    obj = {"m": a.m, "n": a.n, "d": a.d, "paths": [{"heights": h, "coarea": c} for h, c in rows]}
    csv_text = "heights,coarea\n" + "".join(f'"{" ".join(map(str, h))}",{c}\n' for h, c in rows)
    return obj, "\n".join(f"{h}\t{c}" for h, c in rows), csv_text, EXIT_OK


def _cmd_airy(a):
    am = asymptotics.airy_moments(a.K)
    obj = {"omegas": list(am.omegas), "moments": list(am.moments),
           "exact": [{"coefficient": c, "sqrt_pi_power": p} for c, p in am.exact]}
    plain = "\n".join(f"k={k} omega={w} E(X^k)={x:.12g}" for k, (w, x) in enumerate(zip(am.omegas, am.moments)))
    return obj, plain, None, EXIT_OK


def _cmd_limit_check(a):
    try:
        dlist = [int(x) for x in a.dlist.split(",")]
    except ValueError:
        raise UsageError(f"bad --dlist {a.dlist!r}")
    tr = asymptotics.limit_law_check(a.m, dlist, a.jmax)
    obj = {"m": a.m, "rows": [{"d": r.d, "j": r.j, "mean": r.mean, "normalized": r.normalized,
                               "airy": r.target, "gap": r.gap} for r in tr.rows]}
    plain = "\n".join(f"d={r.d} j={r.j} normalized={r.normalized:.12g} airy={r.target:.12g}" for r in tr.rows)
    return obj, plain, tr.to_csv(), EXIT_OK


def _cmd_verify(a):
    if a.all:
        rep = verify.run_acceptance(a.seed)
    else:
        rep = verify.run_suite(a.m, a.n, a.dmax, a.seed, a.max_count, a.max_space)
    obj = verify_payload(rep, a.seed)
    plain = "\n".join(rep.summary_lines() + [f"{'PASSED' if rep.passed else 'FAILED'} "
                                              f"({len(rep.checks)} checks, seed {a.seed})"])
    return obj, plain, None, EXIT_OK if rep.passed else EXIT_FAILED


COMMANDS = {
    "forests": _cmd_forests, "stat": _cmd_stat, "betti": _cmd_betti, "euler": _cmd_euler,
    "zeta": _cmd_zeta, "normal-form": _cmd_normal_form, "submodule": _cmd_submodule,
    "classify": _cmd_classify, "point-count": _cmd_point_count, "census": _cmd_census,
    "lattice": _cmd_lattice, "airy": _cmd_airy, "limit-check": _cmd_limit_check, "verify": _cmd_verify,
}


def dispatch(argv: list, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        a = build_parser().parse_args(argv)
        _validate(a)
        obj, plain, csv_text, code = COMMANDS[a.cmd](a)
        text = _render(obj, a.format, plain, csv_text)
    except UsageError as e:
        print(f"nchilb: error: {e}", file=stderr)
        return EXIT_USAGE
    except (NchilbError, OSError, ValueError, KeyError) as e:
        print(f"nchilb: error: {e}", file=stderr)
        return EXIT_USAGE
    if a.out:
        with open(a.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
