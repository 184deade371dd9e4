"""Cross-validation suite: every quantity is computed by two independent
routes and compared. ``run_suite`` checks one parameter set; ``criterion_*``
functions sweep the ranges used for acceptance.
"""
from __future__ import annotations

import math
import random
from collections import Counter
from fractions import Fraction

from . import asymptotics, fforacle, forest_core as fc, geometry as geo, qseries as qs
from .linalg import QQ, PrimeField
from .report import Report

# Critical pairs of the forest (e,1,1.3,2 ; - ; e,3) with m = 3, as listed in the paper.
EXAMPLE_FOREST = "e,1,1.3,2;-;e,3"
EXAMPLE_CRITICAL = [
    (1, (1, 1)), (1, (1, 2)), (1, (1, 3, 1)), (1, (1, 3, 2)), (1, (1, 3, 3)),
    (1, (2, 1)), (1, (2, 2)), (1, (2, 3)), (1, (3,)), (2, ()),
    (3, (1,)), (3, (2,)), (3, (3, 1)), (3, (3, 2)), (3, (3, 3)),
]
B = "□"
EXAMPLE_PATTERN = (
    [["1", B, "0"], ["0", B, "0"], ["0", B, "0"], ["0", B, "0"], ["0", "0", "1"], ["0", "0", "0"]],
    [
        [["0", B, B, B, B, B], ["1", B, B, B, B, B], ["0", "0", B, B, B, B],
         ["0", "0", "0", B, B, B], ["0", "0", "0", "0", B, B], ["0", "0", "0", "0", "0", B]],
        [["0", B, B, B, B, B], ["0", B, B, B, B, B], ["0", "0", B, B, B, B],
         ["1", "0", "0", B, B, B], ["0", "0", "0", "0", B, B], ["0", "0", "0", "0", "0", B]],
        [[B, "0", B, B, "0", B], [B, "0", B, B, "0", B], [B, "1", B, B, "0", B],
         [B, "0", "0", B, "0", B], ["0", "0", "0", "0", "0", B], ["0", "0", "0", "0", "1", B]],
    ],
)
POINT_COUNT_CONFIGS = [
    (2, 1, 1, 2), (2, 1, 1, 3), (2, 1, 2, 2), (2, 1, 2, 3),
    (3, 1, 1, 2), (3, 1, 2, 2), (1, 2, 2, 2), (2, 2, 1, 2),
]
LIMIT_DLIST = (50, 100, 200, 500, 1000)
ENUM_CAP = 200_000


def _poly(counter: Counter) -> qs.QPolynomial:
    top = max(counter, default=-1)
    return qs.QPolynomial([counter.get(k, 0) for k in range(top + 1)])


def _dprime_poly(m, n, d) -> qs.QPolynomial:
    return _poly(Counter(fc.d_prime(F) for F in fc.iter_forests(m, n, d)))


# ---------------------------------------------------------------- per-parameter checks


def check_counts(rep: Report, m: int, n: int, d: int) -> None:
    closed = geo.euler_closed_form(m, n, d)
    enumerated = sum(1 for _ in fc.iter_forests(m, n, d))
    betti = geo.betti_numbers(m, n, d).euler
    p = {"m": m, "n": n, "d": d}
    rep.add("count", ("closed-form", "enumeration"), p, closed, enumerated)
    rep.add("count", ("closed-form", "betti-sum"), p, closed, betti)


def check_betti_shape(rep: Report, m: int, n: int, d: int) -> None:
    t = geo.betti_numbers(m, n, d)
    p = {"m": m, "n": n, "d": d}
    rep.add("betti-b0", ("betti", "unique-top-cell"), p, 1, t.betti[0])
    rep.add("betti-odd", ("betti", "even-cells-only"), p, 0, sum(t.betti[1::2]))
    rep.add("poincare", ("betti-intersection", "zeta-unmodified"), p,
            str(qs.zeta_unmodified(m, n, d)[d]), str(t.intersection))


def check_forest_stats(rep: Report, m: int, n: int, d: int) -> None:
    bad_c = bad_bound = 0
    top = fc.max_d_prime(m, n, d)
    at_top = []
    prev = None
    ordered = True
    for F in fc.iter_forests(m, n, d):
        if len(fc.critical_set(F)) != (m - 1) * d + n:
            bad_c += 1
        dp = fc.d_prime(F)
        if not 0 <= dp <= top:
            bad_bound += 1
        if dp == top:
            at_top.append(F)
        if prev is not None and fc.compare_forests(prev, F) >= 0:
            ordered = False
        prev = F
    p = {"m": m, "n": n, "d": d}
    rep.add("critical-count", ("critical-set", "(m-1)d+n"), p, 0, bad_c)
    rep.add("dprime-range", ("d'", "[0, Dmax]"), p, 0, bad_bound)
    first = next(fc.iter_forests(m, n, d))
    rep.add("dprime-max-unique", ("d'", "order-minimal forest"), p,
            [fc.format_forest(first)], [fc.format_forest(F) for F in at_top])
    rep.add("enumeration-order", ("enumeration", "forest order"), p, True, ordered)


def check_multiroot_lemma(rep: Report, m: int, n: int, d: int) -> None:
    bad = 0
    for F in fc.iter_forests(m, n, d):
        parts = sum(fc.d_prime(fc.Forest(m, (t,))) + (n - i) * len(t) for i, t in enumerate(F.trees, 1))
        bad += parts != fc.d_prime(F)
    rep.add("dprime-components", ("d'(forest)", "sum d'(trees) + shifts"), {"m": m, "n": n, "d": d}, 0, bad)


def check_grafting(rep: Report, m: int, max_total: int) -> None:
    bad_inv = bad_d = bad_dp = 0
    d_cache = {}

    def d_of(t):
        if t not in d_cache:
            d_cache[t] = fc.d_stat(fc.Forest(m, (t,)))
        return d_cache[t]

    for size in range(1, max_total + 2):
        for T in fc.trees(m, size):
            kids = fc.ungraft(T, m)
            if fc.graft(kids) != T:
                bad_inv += 1
            sizes = [len(k) for k in kids]
            cross = sum(sizes[i] * sizes[j] for i in range(m) for j in range(i + 1, m))
            pred = (sum(d_of(k) for k in kids) + (m - 1) * cross
                    + sum((2 * m - i - 1) * s for i, s in enumerate(sizes, 1)) + m)
            dT = d_of(T)
            bad_d += pred != dT
            dp_kids = [d_of(k) - fc.d_shift(m, len(k)) for k in kids]
            pred_p = sum(dp_kids) + sum((m - i) * s for i, s in enumerate(sizes, 1))
            bad_dp += pred_p != dT - fc.d_shift(m, size)
    p = {"m": m, "max_total": max_total}
    rep.add("graft-inverse", ("ungraft∘graft", "identity"), p, 0, bad_inv)
    rep.add("graft-d", ("d(graft)", "grafting formula"), p, 0, bad_d)
    rep.add("graft-dprime", ("d'(graft)", "grafting formula"), p, 0, bad_dp)


def check_plane(rep: Report, m: int, n: int, d: int) -> None:
    bad = 0
    for F in fc.iter_forests(m, n, d):
        T = fc.to_plane_forest(F)
        if T.size != m * d + n or not fc.is_plane(T) or fc.from_plane_forest(T) != F:
            bad += 1
    rep.add("plane-bijection", ("to_plane", "from_plane"), {"m": m, "n": n, "d": d}, 0, bad)


def check_zeta_vs_forests(rep: Report, m: int, n: int, dmax: int) -> None:
    z = qs.zeta_bar(m, n, dmax)
    for d in range(dmax + 1):
        if fc.forest_count(m, n, d) > ENUM_CAP:
            break
        rep.add("zeta-bar", ("functional-equation", "forest-enumeration"),
                {"m": m, "n": n, "d": d}, str(_dprime_poly(m, n, d)), str(z[d]))


def check_zeta_structure(rep: Report, m: int, n: int, dmax: int) -> None:
    z = qs.zeta_bar(m, n, dmax)
    p = {"m": m, "n": n, "dmax": dmax}
    euler = qs.euler_numbers(m, n, dmax)
    rep.add("euler-q1", ("zeta-bar at q=1", "integer recursion"), p, euler, z.at_q1())
    rep.add("euler-closed", ("integer recursion", "closed-form"), p,
            [geo.euler_closed_form(m, n, d) for d in range(dmax + 1)], euler)
    nonneg = all(c >= 0 for poly in z.coeffs for c in poly.coeffs)
    lead = all(z[d].degree == fc.max_d_prime(m, n, d) and z[d].coeffs[-1] == 1 for d in range(dmax + 1))
    rep.add("zeta-positivity", ("zeta-bar", "nonnegative coefficients"), p, True, nonneg)
    rep.add("zeta-leading", ("zeta-bar", "degree Dmax, leading 1"), p, True, lead)


def check_gamma(rep: Report, m: int, n: int, dmax: int) -> None:
    g = qs.verify_gamma_identity(m, n, dmax)
    bad = g.first_failure
    rep.add("gamma-identity", ("gamma(q,q^n t)", "zeta-bar*gamma"), {"m": m, "n": n, "dmax": dmax},
            None, None if bad is None else bad.params["d"], g.passed)


def check_m1_product(rep: Report, n: int, dmax: int) -> None:
    z = qs.zeta_bar(1, n, dmax)
    prod = qs.TSeries.from_list([qs.ONE], dmax)
    for i in range(n):
        prod = prod * qs.TSeries.from_list([qs.ONE, qs.QPolynomial.monomial(i, -1)], dmax)
    out = z * prod
    ok = out[0] == qs.ONE and all(not out[d] for d in range(1, dmax + 1))
    rep.add("m1-product", ("zeta-bar", "1/prod(1-q^i t)"), {"n": n, "dmax": dmax}, True, ok)


def check_continued_fraction(rep: Report, depth: int) -> None:
    cf = qs.continued_fraction_check(depth)
    bad = cf.first_failure
    rep.add("continued-fraction", ("zeta-bar(2,1)", "convergent"), {"depth": depth},
            None, None if bad is None else bad.params["d"], cf.passed)


def check_paths(rep: Report, m: int, n: int, d: int) -> None:
    paths = Counter(fc.coarea(lam, m, n) for lam in fc.iter_paths(m, n, d))
    forests = Counter(fc.d_prime(F) for F in fc.iter_forests(m, n, d))
    rep.add("lattice-paths", ("coarea multiset", "d' multiset"), {"m": m, "n": n, "d": d},
            sorted(forests.items()), sorted(paths.items()))


def check_point_count(rep: Report, m: int, n: int, d: int, p: int, max_space: int) -> None:
    r = fforacle.brute_force_count(m, n, d, p, max_space=max_space)
    params = {"m": m, "n": n, "d": d, "p": p}
    rep.add("point-count", ("brute-force", "cell-sum"), params,
            geo.predicted_point_count(m, n, d, p), r.point_count)
    rep.add("free-action", ("stable tuples", "|GL| divides"), params, True, r.free_action)


def check_census(rep: Report, m: int, n: int, d: int, p: int, max_space: int) -> None:
    r = fforacle.cell_census(m, n, d, p, max_space=max_space)
    expected = {fc.format_forest(F): p ** fc.d_stat(F) for F in fc.iter_forests(m, n, d)}
    params = {"m": m, "n": n, "d": d, "p": p}
    rep.add("cell-census", ("per-cell brute force", "p^d(F)"), params, expected, r.per_cell)
    rep.add("free-action", ("stable tuples", "|GL| divides"), params, True, r.free_action)


def check_normal_forms(rep: Report, m: int, n: int, d: int, samples: int, rng: random.Random) -> None:
    bad = Counter()
    for F in fc.iter_forests(m, n, d):
        t = geo.normal_form_template(F)
        free = t.free_entries()
        if len(free) != fc.d_stat(F) or set(free) != set(fc.d_pairs(F)):
            bad["free-count"] += 1
        for field in (PrimeField(101), QQ):
            for _ in range(samples):
                lam = geo.random_lambda(F, field, rng)
                pt = geo.normal_form_from_cell(F, lam, field)
                if not geo.is_stable(pt):
                    bad["stable"] += 1
                if not geo.in_cell(pt, F):
                    bad["span-condition"] += 1
                if geo.classify_cell(pt) != F:
                    bad["classify"] += 1
                if geo.greedy_forest(pt) != F:
                    bad["greedy"] += 1
                if geo.lambda_coordinates(pt, F) != lam:
                    bad["lambda"] += 1
                gens = geo.submodule_generators(F, lam)
                if len(gens) != (m - 1) * d + n or any(any(geo.apply_generator(pt, g)) for g in gens):
                    bad["generators"] += 1
    params = {"m": m, "n": n, "d": d, "samples": samples}
    for key in ("free-count", "stable", "span-condition", "classify", "greedy", "lambda", "generators"):
        rep.add(f"normal-form-{key}", ("normal form", key), params, 0, bad[key])


def check_moments(rep: Report, m: int, dmax: int, jmax: int) -> None:
    table = qs.moment_sums(m, dmax, jmax)
    for d in range(dmax + 1):
        direct = [sum(fc.d_prime(F) ** j for F in fc.iter_forests(m, 1, d)) for j in range(jmax + 1)]
        rep.add("moment-sums", ("jet recursion", "enumeration"), {"m": m, "d": d}, direct, table[d])


# ---------------------------------------------------------------- acceptance criteria


def criterion_1() -> Report:
    rep = Report("1 counting")
    for m in range(1, 5):
        for n in range(1, 4):
            for d in range(7):
                check_counts(rep, m, n, d)
    for m, n, d, val in ((2, 1, 4, 14), (3, 1, 3, 12), (3, 3, 6, 7752)):
        rep.add("chi-value", ("closed-form", "stated value"), {"m": m, "n": n, "d": d},
                val, geo.euler_closed_form(m, n, d))
    return rep


def criterion_2() -> Report:
    rep = Report("2 statistics identities")
    for m in range(1, 5):
        for n in range(1, 4):
            for d in range(9):
                bad = sum(len(fc.critical_set(F)) != (m - 1) * d + n for F in fc.iter_forests(m, n, d))
                rep.add("critical-count", ("critical-set", "(m-1)d+n"), {"m": m, "n": n, "d": d}, 0, bad)
    for m in range(1, 4):
        check_grafting(rep, m, 8)
    F = fc.parse_forest(EXAMPLE_FOREST, 3, 3)
    rep.add("example-critical", ("critical-set", "listed pairs"), {"forest": EXAMPLE_FOREST},
            [f"{k}:{fc.format_word(w)}" for k, w in EXAMPLE_CRITICAL],
            [f"{k}:{fc.format_word(w)}" for k, w in fc.critical_set(F)])
    rep.add("example-d", ("d-statistic", "box count 61"), {"forest": EXAMPLE_FOREST}, 61, fc.d_stat(F))
    rep.add("example-d-pairs", ("D enumeration", "d-statistic"), {"forest": EXAMPLE_FOREST},
            61, len(fc.d_pairs(F)))
    return rep


def criterion_3() -> Report:
    rep = Report("3 generating functions")
    # enumeration runs while the forest count stays under ENUM_CAP (all d <= 8 for n <= 2)
    for m in range(1, 4):
        for n in range(1, 4):
            check_zeta_vs_forests(rep, m, n, 12)
            check_zeta_structure(rep, m, n, 12)
    for n in range(1, 4):
        check_m1_product(rep, n, 12)
    for m in range(1, 4):
        for n in range(1, 4):
            check_gamma(rep, m, n, 12)
    check_continued_fraction(rep, 10)
    for m in range(1, 4):
        for n in range(1, 3):
            for d in range(9):
                check_paths(rep, m, n, d)
    return rep


def criterion_4(max_space: int = fforacle.DEFAULT_MAX_SPACE) -> Report:
    rep = Report("4 point counting")
    for cfg in POINT_COUNT_CONFIGS:
        check_point_count(rep, *cfg, max_space)
    for p in (2, 3):
        check_census(rep, 2, 1, 2, p, max_space)
    return rep


def criterion_5(seed: int = 0, samples: int = 20) -> Report:
    rep = Report("5 cell geometry")
    rng = random.Random(seed)
    for m in range(1, 4):
        for n in range(1, 3):
            for d in range(5):
                check_normal_forms(rep, m, n, d, samples, rng)
    F = fc.parse_forest(EXAMPLE_FOREST, 3, 3)
    rep.add("example-pattern", ("normal form", "printed matrices"), {"forest": EXAMPLE_FOREST},
            EXAMPLE_PATTERN, geo.cell_pattern(F))
    return rep


def criterion_6() -> Report:
    rep = Report("6 betti tables")
    rep.add("betti", ("cells", "stated table"), {"m": 2, "n": 1, "d": 2},
            [1, 0, 1], _trim(geo.betti_numbers(2, 1, 2).betti))
    rep.add("poincare", ("cells", "1+t^2+2t^4+t^6"), {"m": 2, "n": 1, "d": 3},
            [1, 0, 1, 0, 2, 0, 1], _trim(geo.betti_numbers(2, 1, 3).betti))
    for m in range(1, 5):
        for n in range(1, 4):
            for d in range(7):
                t = geo.betti_numbers(m, n, d)
                p = {"m": m, "n": n, "d": d}
                rep.add("betti-b0", ("betti", "unique top cell"), p, 1, t.betti[0])
                rep.add("betti-odd", ("betti", "no odd cohomology"), p, 0, sum(t.betti[1::2]))
    return rep


def _trim(betti: list) -> list:
    out = list(betti)
    while out and out[-1] == 0:
        out.pop()
    return out


def criterion_7() -> Report:
    rep = Report("7 asymptotics")
    for m in (2, 3):
        ratios = [asymptotics.chi_ratio(m, 1, d) for d in (50, 100, 200, 500)]
        rep.add("chi-ratio-500", ("exact chi", "asymptotic"), {"m": m, "d": 500},
                "[0.99, 1.01]", round(ratios[-1], 12), 0.99 <= ratios[-1] <= 1.01)
        rep.add("chi-ratio-monotone", ("exact chi", "asymptotic"), {"m": m, "d": "50,100,200,500"},
                "increasing", [round(r, 12) for r in ratios], all(a < b for a, b in zip(ratios, ratios[1:])))
    s = float(qs.special_value_partial_sum(2, 1, 2000))
    rep.add("special-value", ("partial sum", "limit 2"), {"m": 2, "n": 1, "D": 2000},
            "within 2% of 2", round(s, 12), abs(s - 2) <= 0.02 * 2)
    return rep


def criterion_8(table: list | None = None) -> Report:
    rep = Report("8 airy limit law")
    a = asymptotics.airy_moments(2)
    rep.add("omega-1", ("recursion", "1/2"), {}, Fraction(1, 2), a.omegas[1])
    rep.add("omega-2", ("recursion", "5/4"), {}, Fraction(5, 4), a.omegas[2])
    rep.add("airy-mean", ("moment formula", "sqrt(pi)"), {}, (Fraction(1), 1), a.exact[1])
    rep.add("airy-second", ("moment formula", "10/3"), {}, (Fraction(10, 3), 0), a.exact[2])
    tr = asymptotics.limit_law_check(2, LIMIT_DLIST, 2, table)
    first = [r.normalized for r in tr.series(1)]
    second = [r.normalized for r in tr.series(2)]
    root_pi = math.sqrt(math.pi)
    rep.add("limit-mean-monotone", ("normalized mean", "increasing"), {"m": 2, "d": LIMIT_DLIST},
            "increasing", [round(x, 12) for x in first], all(x < y for x, y in zip(first, first[1:])))
    rep.add("limit-mean-1000", ("normalized mean", "sqrt(pi) ±10%"), {"m": 2, "d": 1000},
            round(root_pi, 12), round(first[-1], 12), abs(first[-1] - root_pi) <= 0.10 * root_pi)
    rep.add("limit-second-1000", ("normalized 2nd moment", "10/3 ±15%"), {"m": 2, "d": 1000},
            round(10 / 3, 12), round(second[-1], 12), abs(second[-1] - 10 / 3) <= 0.15 * 10 / 3)
    for m in (2, 3):
        check_moments(rep, m, 8, 2)
    return rep


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
    5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8,
}


def run_acceptance(seed: int = 0) -> Report:
    rep = Report("acceptance")
    for k, fn in CRITERIA.items():
        rep.extend(fn(seed) if k == 5 else fn())
    return rep


# ---------------------------------------------------------------- parameterized suite


def run_suite(m: int, n: int, dmax: int, seed: int = 0, max_count: int = fc.DEFAULT_MAX_COUNT,
              max_space: int = fforacle.DEFAULT_MAX_SPACE) -> Report:
    """All cross-checks that apply to one (m, n), degrees 0..dmax."""
    rep = Report(f"verify m={m} n={n} dmax={dmax}")
    rng = random.Random(seed)
    enum_d = [d for d in range(dmax + 1) if fc.forest_count(m, n, d) <= min(max_count, ENUM_CAP)]
    for d in enum_d:
        check_counts(rep, m, n, d)
        check_betti_shape(rep, m, n, d)
        check_forest_stats(rep, m, n, d)
        check_multiroot_lemma(rep, m, n, d)
        check_plane(rep, m, n, d)
        check_paths(rep, m, n, d)
    check_zeta_vs_forests(rep, m, n, max(enum_d))
    check_zeta_structure(rep, m, n, dmax)
    check_gamma(rep, m, n, dmax)
    if m == 1:
        check_m1_product(rep, n, dmax)
    if m == 2 and n == 1:
        check_continued_fraction(rep, dmax)
    if n == 1:
        check_grafting(rep, m, max(enum_d) - 1)
        if m >= 2:
            check_moments(rep, m, max(enum_d), 2)
    for d in range(min(dmax, 3) + 1):
        if fc.forest_count(m, n, d) <= 200:
            check_normal_forms(rep, m, n, d, 3, rng)
    for d in range(1, dmax + 1):
        for p in (2, 3):
            if fforacle.search_space(m, n, d, p) <= min(max_space, 2**16):
                check_point_count(rep, m, n, d, p, max_space)
    return rep
