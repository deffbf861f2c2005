import json
import math
from pathlib import Path

import numpy as np
import pytest

from oracles import degree_table, edge_set, relation_edge_sets

from fspread.errors import IndexOutOfRange, NonUnitClass, SchemeViolation
from fspread.ffield import all_fields, make_field, prime_power, primitive_element
from fspread.pgraph import (
    SpectrumReport,
    SpreadGraph,
    build_poincare,
    build_relation,
    edge_count,
    is_regular,
    relation_count,
    relation_gamma,
    spectrum,
    square_gammas,
    verify_scheme,
)
from fspread.projective import build_omega

GOLDEN = Path(__file__).parent / "golden"
VALENCY = json.loads((GOLDEN / "valency.json").read_text())


def edges_of(g):
    a, b = np.nonzero(np.triu(g.adjacency, 1))
    return set(zip(a.tolist(), b.tolist()))


def test_k3_at_q3_square_class():
    F = make_field(3)
    o = build_omega(F, class_selector="square")
    g = build_poincare(o, 1)
    assert g.degree == 2 and g.edges == 3
    assert edges_of(g) == {(0, 1), (0, 2), (1, 2)}
    rep = spectrum(g)
    assert np.allclose(rep.eigenvalues, [-1, -1, 2])
    assert rep.valency == 2
    assert rep.second == pytest.approx(1)


def test_q3_square_class_gamma0_is_empty():
    o = build_omega(make_field(3), class_selector="square")
    g = build_poincare(o, 0)
    assert g.edges == 0 and g.degree == 0
    rep = spectrum(g)
    assert np.allclose(rep.eigenvalues, 0)


@pytest.mark.parametrize("F", all_fields(31), ids=lambda F: f"q{F.q}")
def test_nonsquare_gamma_gives_empty_graph(F):
    o = build_omega(F)
    for g in F.elements():
        if not F.square_table[(1 - g).code]:
            assert build_poincare(o, g).edges == 0


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
@pytest.mark.parametrize("selector", ["paper", "square", "nonsquare"])
def test_fast_path_matches_definition(q, selector):
    F = make_field(*prime_power(q))
    o = build_omega(F, class_selector=selector)
    for g in F.elements():
        fast = build_poincare(o, g)
        slow = build_poincare(o, g, method="definition")
        assert fast.same_edges(slow)


def test_fast_path_matches_oracle_edge_set_nondefault_form():
    from fspread.trig import BilinearForm

    F = make_field(7)
    G = BilinearForm(F, [[2, 1, 0], [1, 3, 0], [0, 0, 5]])
    o = build_omega(F, G)
    for g in F.elements():
        assert edges_of(build_poincare(o, g)) == edge_set(o, g)


@pytest.mark.parametrize("q", [int(k) for k in VALENCY])
def test_regular_with_golden_valency(q):
    F = make_field(*prime_power(q))
    o = build_omega(F)
    golden = VALENCY[str(q)]
    for g in F.elements():
        graph = build_poincare(o, g)
        assert [graph.degree] == golden[str(g.code)]
        assert graph.edges == graph.degree * o.n // 2


def test_valency_closed_form():
    # observed pattern of the frozen table: (q-1)/2 at gamma=1, 2(q-1) at gamma=0,
    # q-1 at every other gamma with 1-gamma a square
    for q, table in VALENCY.items():
        q = int(q)
        F = make_field(*prime_power(q))
        for g in F.elements():
            d = table[str(g.code)][0]
            if not F.square_table[(1 - g).code]:
                assert d == 0
            elif g == 1:
                assert d == (q - 1) // 2
            elif g == 0:
                assert d == 2 * (q - 1)
            else:
                assert d == q - 1


def test_degree_table_oracle_agrees_small():
    o = build_omega(make_field(7))
    table = degree_table(o)
    for g in o.field.elements():
        assert [build_poincare(o, g).degree] == table[g.code]


@pytest.mark.parametrize("q", [9, 11, 13, 17, 19, 23, 25, 27, 29, 31])
def test_nonempty_for_square_gammas(q):
    F = make_field(*prime_power(q))
    o = build_omega(F)
    for g in square_gammas(F):
        assert build_poincare(o, g).edges > 0


def test_relation_examples_q5():
    F = make_field(5)
    o = build_omega(F)
    golden = json.loads((GOLDEN / "scheme_q5.json").read_text())["valencies"]
    for i in range(1, relation_count(5) + 1):
        assert build_relation(o, i).degree == golden[str(i)]
    assert build_relation(o, 3).same_edges(build_poincare(o, 1))
    with pytest.raises(IndexOutOfRange):
        build_relation(o, 4)
    with pytest.raises(IndexOutOfRange):
        build_relation(o, 0)


def test_relation_requires_unit_square_class():
    with pytest.raises(NonUnitClass):
        build_relation(build_omega(make_field(7)), 1)


@pytest.mark.parametrize("q", [5, 9, 13])
def test_relations_match_paper_definition(q):
    F = make_field(*prime_power(q))
    o = build_omega(F)
    oracle = relation_edge_sets(o)
    for i, edges in oracle.items():
        assert edges_of(build_relation(o, i)) == edges


@pytest.mark.parametrize("q", [5, 9, 13, 17])
def test_relations_are_poincare_graphs(q):
    F = make_field(*prime_power(q))
    o = build_omega(F)
    nu = primitive_element(F)
    top = relation_count(q)
    assert build_relation(o, top).same_edges(build_poincare(o, 1))
    for i in range(2, (q - 1) // 2 + 1):
        gamma = 1 - nu ** (2 - 2 * i)
        assert relation_gamma(F, i) == gamma
        assert build_relation(o, i).same_edges(build_poincare(o, gamma))


@pytest.mark.parametrize("q", [5, 9, 13])
def test_verify_scheme(q):
    F = make_field(*prime_power(q))
    o = build_omega(F)
    rep = verify_scheme(o, intersection_samples=4)
    assert rep.ok
    assert rep.relation_count == (q + 1) // 2
    assert sum(rep.valencies) == o.n - 1
    assert rep.pairs_checked > 0


def test_verify_scheme_q5_full_intersection_numbers():
    o = build_omega(make_field(5))
    rep = verify_scheme(o, full=True)
    golden = json.loads((GOLDEN / "scheme_q5.json").read_text())["valencies"]
    assert rep.valencies == [golden[str(i)] for i in (1, 2, 3)]
    p = rep.intersection_numbers
    # p^0_ii is the valency of R_i; p^k_{0j} = delta_jk
    for i, v in enumerate(rep.valencies, start=1):
        assert p[0, i, i] == v
    assert np.array_equal(p[:, 0, :], np.eye(4, dtype=int))


def test_verify_scheme_detects_broken_partition(monkeypatch):
    import fspread.pgraph as pg

    o = build_omega(make_field(5))
    real = pg.build_relation

    def broken(omega, i):
        g = real(omega, i)
        if i == 2:
            rows = np.packbits(g.adjacency | real(omega, 1).adjacency, axis=1)
            return SpreadGraph(omega, g.gamma, g.kind, rows, i)
        return g

    monkeypatch.setattr(pg, "build_relation", broken)
    with pytest.raises(SchemeViolation, match="more than one relation"):
        pg.verify_scheme(o)


def test_is_regular_and_edge_count():
    o = build_omega(make_field(3), class_selector="square")
    k3 = build_poincare(o, 1)
    assert is_regular(k3) == 2 and edge_count(k3) == 3
    empty = build_poincare(o, 0)
    assert is_regular(empty) == 0 and edge_count(empty) == 0


def test_irregular_graph_flagged():
    o = build_omega(make_field(3), class_selector="square")
    adj = np.zeros((3, 3), dtype=bool)
    adj[0, 1] = adj[1, 0] = True
    g = SpreadGraph(o, make_field(3)(1), "poincare", np.packbits(adj, axis=1))
    assert is_regular(g) is None
    rep = spectrum(g)
    assert not rep.regular and rep.valency is None
    assert np.allclose(rep.eigenvalues, [-1, 0, 1])


@pytest.mark.parametrize("q", [5, 7, 9, 13, 17, 25])
def test_spectrum_identities(q):
    F = make_field(*prime_power(q))
    o = build_omega(F)
    for g in square_gammas(F):
        graph = build_poincare(o, g)
        rep = spectrum(graph)
        assert abs(rep.eigenvalues.sum()) <= rep.tolerance
        assert rep.largest == pytest.approx(rep.valency, abs=rep.tolerance)
        assert rep.ratio_to_sqrt_q == pytest.approx(rep.second / math.sqrt(q))
        # sum of squares of eigenvalues = trace(A^2) = 2 * edges
        assert (rep.eigenvalues**2).sum() == pytest.approx(2 * graph.edges)


@pytest.mark.parametrize("q", [5, 7, 9, 11, 13, 17, 19, 23])
def test_gamma_zero_is_triangular_graph(q):
    # every Omega point lies on two tangents of the conic; spread 0 means a shared
    # tangent, so P_q(0) is the line graph of K_{q+1}: spectrum 2(q-1), q-3, -2
    F = make_field(*prime_power(q))
    o = build_omega(F)
    rep = spectrum(build_poincare(o, 0))
    expected = np.sort(
        [2.0 * (q - 1)] + [q - 3.0] * q + [-2.0] * ((q + 1) * (q - 2) // 2)
    )
    assert np.allclose(rep.eigenvalues, expected, atol=1e-8 * o.n)
    assert rep.second == pytest.approx(q - 3)


def test_spectrum_q13_perpendicular_within_envelope():
    F = make_field(13)
    rep = spectrum(build_poincare(build_omega(F), 1))
    assert rep.second <= math.sqrt(13) + 1


def test_graph_cache_roundtrip():
    F = make_field(3, 2)
    o = build_omega(F)
    g = build_poincare(o, F([1, 1]))
    text = g.to_text()
    header = json.loads(text.splitlines()[0])
    assert header["n"] == o.n == 45
    assert header["degree"] == g.degree
    assert len(text.splitlines()) == o.n + 1
    h = SpreadGraph.from_text(text, o)
    assert h.same_edges(g) and h.gamma == g.gamma
    bad = text.splitlines()
    bad[3] = bad[3][:-2]
    with pytest.raises(ValueError):
        SpreadGraph.from_text("\n".join(bad), o)
    with pytest.raises(ValueError):
        SpreadGraph.from_text(text, build_omega(make_field(7)))


def test_spectrum_json_roundtrip():
    o = build_omega(make_field(5))
    rep = spectrum(build_poincare(o, 1))
    back = SpectrumReport.from_json(json.loads(json.dumps(rep.to_json())))
    assert np.array_equal(back.eigenvalues, rep.eigenvalues)
    assert back.second == rep.second and back.valency == rep.valency
