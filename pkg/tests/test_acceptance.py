"""Acceptance suite: one verdict line per criterion is printed at the end of the run.

Run with ``pytest tests/test_acceptance.py -s`` to also see the per-check lines
and the eigenvalue ratio tables as they are produced.
"""

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from acceptance_log import record
from oracles import degree_table, relation_edge_sets

from fspread.census import (
    MIXING_TOL,
    DirectionSet,
    count_pairs,
    f_gamma,
    mixing_check,
    random_subset,
    sample_directions,
    spread_census,
    theorem1_experiment,
)
from fspread.errors import FalsifiedCheck, SchemeViolation
from fspread.ffield import make_field, prime_power, primitive_element
from fspread.pgraph import (
    build_poincare,
    is_regular,
    relation_count,
    spectrum,
    square_gammas,
    verify_scheme,
)
from fspread.projective import ISOTROPIC, NONSQUARE, SQUARE, build_omega, class_counts

VALENCY = json.loads((Path(__file__).parent / "golden" / "valency.json").read_text())

SWEEP = [3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31]


def field(q):
    return make_field(*prime_power(q))


def edges_of(g):
    a, b = np.nonzero(np.triu(g.adjacency, 1))
    return set(zip(a.tolist(), b.tolist()))


# 1 ---------------------------------------------------------------------------

@pytest.mark.parametrize("q", SWEEP)
def test_c1_omega_cardinality(q):
    t0 = time.perf_counter()
    F = field(q)
    c = class_counts(F)
    omega = build_omega(F)
    elapsed = time.perf_counter() - t0
    half = q * (q + 1) // 2
    ok = (
        c[ISOTROPIC] == q + 1
        and c[SQUARE] + c[NONSQUARE] == q * q
        and [c[SQUARE], c[NONSQUARE]].count(half) == 1
        and omega.n == half
        and elapsed < 1.0
    )
    record(1, f"q={q}", ok, f"iso={c[ISOTROPIC]} sq={c[SQUARE]} nsq={c[NONSQUARE]} ({elapsed:.3f}s)")
    assert ok


# 2 ---------------------------------------------------------------------------

@pytest.mark.parametrize("q", SWEEP)
def test_c2_dichotomy_empty(q):
    F = field(q)
    omega = build_omega(F)
    nonsquare = [g for g in F.elements() if not F.square_table[(1 - g).code]]
    counts = {g.code: build_poincare(omega, g).edges for g in nonsquare}
    ok = len(nonsquare) == (q - 1) // 2 and all(e == 0 for e in counts.values())
    record(2, f"q={q}", ok, f"{len(nonsquare)} nonsquare gammas, edges {sorted(set(counts.values()))}")
    assert ok


# 3 ---------------------------------------------------------------------------

@pytest.mark.parametrize("q", [q for q in SWEEP if q >= 9])
def test_c3_nonempty_regular_valency(q):
    F = field(q)
    omega = build_omega(F)
    oracle = degree_table(omega)
    golden = VALENCY[str(q)]
    ok = True
    ratios = {}
    for g in square_gammas(F):
        graph = build_poincare(omega, g)
        d = is_regular(graph)
        ok &= d is not None and d > 0
        ok &= [d] == oracle[g.code] == golden[str(g.code)]
        ratios[g.code] = d / q
    # envelope pinned to the golden valencies: (q-1)/2, q-1 and 2(q-1)
    lo, hi = min(ratios.values()), max(ratios.values())
    ok &= math.isclose(lo, (q - 1) / (2 * q)) and math.isclose(hi, 2 * (q - 1) / q)
    above = [c for c, r in ratios.items() if r > 1.5]
    record(3, f"q={q}", ok,
           f"d/q in [{lo:.3f}, {hi:.3f}]; d/q > 1.5 (placeholder ceiling) at gamma codes {above}")
    assert ok


# 4 ---------------------------------------------------------------------------

@pytest.mark.parametrize("q", [5, 9, 13])
def test_c4_scheme(q):
    F = field(q)
    omega = build_omega(F)
    nu = primitive_element(F)
    try:
        rep = verify_scheme(omega, intersection_samples=8)
        literal = relation_edge_sets(omega)
    except (SchemeViolation, AssertionError) as exc:
        record(4, f"q={q}", False, str(exc))
        raise
    top = relation_count(q)
    ok = rep.ok and rep.relation_count == top == len(literal)
    for i in range(1, (q - 1) // 2 + 1):
        ok &= edges_of(build_poincare(omega, 1 - nu ** (2 - 2 * i))) == literal[i]
    ok &= edges_of(build_poincare(omega, 1)) == literal[top]
    pairs = sum(len(s) for s in literal.values())
    ok &= pairs == omega.n * (omega.n - 1) // 2
    record(4, f"q={q}", ok, f"{rep.relation_count} relations, valencies {rep.valencies}")
    assert ok


# 5 ---------------------------------------------------------------------------

@pytest.mark.parametrize("q", [13, 17, 25, 29, 49, 81, 101])
def test_c5_spectral_bound(q):
    F = field(q)
    omega = build_omega(F)
    envelope = math.sqrt(q) + 1
    t0 = time.perf_counter()
    rows = []
    for g in square_gammas(F):
        rep = spectrum(build_poincare(omega, g))
        rows.append((g.code, rep.valency, rep.second, rep.ratio_to_sqrt_q, rep.second <= envelope))
    elapsed = time.perf_counter() - t0
    print(f"\nq={q} n={omega.n} envelope sqrt(q)+1={envelope:.4f}")
    print(" gamma  valency   max|lambda|  /sqrt(q)  within")
    for code, d, lam, ratio, inside in rows:
        print(f" {code:5d}  {d:7.0f}  {lam:12.4f}  {ratio:8.4f}  {inside}")
    bad = [r for r in rows if not r[4]]
    worst = max(rows, key=lambda r: r[3])
    ok = not bad
    record(5, f"q={q}", ok,
           f"{len(bad)}/{len(rows)} graphs exceed sqrt(q)+1; max ratio {worst[3]:.3f} at gamma code {worst[0]} "
           f"(min ratio {min(r[3] for r in rows):.3f}); {elapsed:.1f}s")
    assert ok, f"{len(bad)} graphs exceed sqrt(q)+1 = {envelope:.4f}"


# 6 ---------------------------------------------------------------------------

@pytest.mark.parametrize("q", [13, 17, 29])
def test_c6_mixing(q):
    F = field(q)
    omega = build_omega(F)
    total = passed = 0
    worst = math.inf
    for g in square_gammas(F):
        graph = build_poincare(omega, g)
        lam = spectrum(graph).second
        for trial in range(1000):
            res = mixing_check(graph, random_subset(omega, seed=q, trial=trial), lam)
            total += 1
            passed += res.passed
            worst = min(worst, res.slack)
    ok = passed == total
    record(6, f"q={q}", ok, f"{passed}/{total} subsets pass (tolerance {MIXING_TOL} |B|), min slack {worst:.4f}")
    assert ok


# 7 ---------------------------------------------------------------------------

@pytest.mark.parametrize("m", [math.ceil(29**1.75), 362], ids=["m_formula", "m_stated"])
def test_c7_theta_exhibit(m):
    t0 = time.perf_counter()
    F = field(29)
    omega = build_omega(F)
    graph = build_poincare(omega, 1)
    rep = spectrum(graph)
    try:
        reports = theorem1_experiment(F, 1, trials=100, seed=42, omega=omega, graph=graph, report=rep, m=m)
    except FalsifiedCheck as exc:
        record(7, f"m={m}", False, str(exc))
        raise
    eps = reports[0].epsilon
    inside = sum(r.inside_certificate for r in reports)
    ratios = [r.ratio for r in reports]

    zero_ok = True
    nonsquare = [g for g in F.elements() if not F.square_table[(1 - g).code]]
    for g in nonsquare:
        empty = build_poincare(omega, g)
        for trial in range(100):
            E = sample_directions(omega, m, 42, trial)
            zero_ok &= f_gamma(E, g, empty) == 0
    elapsed = time.perf_counter() - t0
    ok = eps < 1 and inside == 100 and zero_ok and elapsed < 30
    record(7, f"m={m}", ok,
           f"eps={eps:.4f}, {inside}/100 inside, ratio range [{min(ratios):.4f}, {max(ratios):.4f}], "
           f"f=0 for {len(nonsquare)} nonsquare gammas: {zero_ok} ({elapsed:.1f}s)")
    assert ok


# 8 ---------------------------------------------------------------------------

@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
def test_c8_pair_sums(q):
    F = field(q)
    omega = build_omega(F)
    sets = [DirectionSet(omega, range(omega.n))]
    sets += [sample_directions(omega, int(s), seed=8, trial=t)
             for t, s in enumerate(np.linspace(0, omega.n, 12, dtype=int))]
    ok = True
    for E in sets:
        counts = spread_census(E)
        ok &= sum(counts.values()) == math.comb(E.m, 2)
        if E.m <= 30:
            ok &= all(count_pairs(E, g) == counts.get(g.code, 0) for g in F.elements())
    record(8, f"q={q}", ok, f"{len(sets)} direction sets including all of Omega (n={omega.n})")
    assert ok
