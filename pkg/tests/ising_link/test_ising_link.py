"""Test ising_link.py.
"""

from fractions import Fraction
from pathlib import Path
import math
import networkx as nx
import numpy as np
import pytest
from metaplectic.braid import Closure, linking_matrix
from metaplectic.cyclotomic import CyclotomicValue
from metaplectic.ising_link import (
    CouplingMatrix,
    CutStats,
    IsingParams,
    Regime,
    amplification,
    approx_bounds,
    beta_of,
    claim_rhs,
    compile_link,
    cut_stats,
    edge_weight,
    graph_from_dict,
    maxcut_recover,
    physics_partition,
    plat_braid,
    read_coupling,
    read_graph,
    recover_cuts,
    regime_table,
    select_d,
    sign_regime,
    verify_claim,
    z_exact,
    z_partition,
)
from metaplectic.utils import ScaleError

BASE_DIR = Path(__file__).resolve().parent
POINTS = [(3, 1), (5, 1), (5, 2)]


def _random_coupling(rng, n: int, values) -> CouplingMatrix:
    J = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            J[i, j] = J[j, i] = rng.choice(values)
    return CouplingMatrix.from_array(J)


def _small_graphs() -> list[nx.Graph]:
    graphs = [nx.empty_graph(2), nx.path_graph(3), nx.cycle_graph(3), nx.star_graph(3)]
    graphs += [nx.cycle_graph(4), nx.complete_graph(4), nx.path_graph(5), nx.cycle_graph(5)]
    return graphs


def test_coupling_matrix():
    J = CouplingMatrix.from_array([[0, 2, -1], [2, 0, 0], [-1, 0, 0]])
    assert J.N == 3
    assert J.P == 4
    assert J.A == 6
    assert J.upper_sum == 1
    assert J.edges() == [(0, 1, 2), (0, 2, -1)]
    assert not J.is_binary()
    assert CouplingMatrix.from_dict(J.to_dict()) == J


def test_coupling_matrix_validation():
    with pytest.raises(ValueError):
        CouplingMatrix.from_array([[0, 1], [2, 0]])
    with pytest.raises(ValueError):
        CouplingMatrix.from_array([[1, 0], [0, 0]])
    with pytest.raises(ValueError):
        CouplingMatrix.from_array([0, 1])
    with pytest.raises(ValueError):
        CouplingMatrix.from_dict({"J": [[0]]})
    with pytest.raises(ValueError):
        CouplingMatrix(0, ())


def test_coupling_from_graph():
    J = CouplingMatrix.from_graph(nx.cycle_graph(3), 4)
    assert J.to_array().tolist() == [[0, 4, 4], [4, 0, 4], [4, 4, 0]]
    graph = nx.Graph()
    graph.add_edge(1, 1)
    with pytest.raises(ValueError):
        CouplingMatrix.from_graph(graph)


def test_ising_params():
    params = IsingParams(3, 1)
    assert params.y == pytest.approx(-0.5)
    assert params.y_exact == Fraction(-1, 2)
    assert params.regime == Regime.NEGATIVE
    assert params.sqrt_y * params.sqrt_z == pytest.approx(2 * params.y)
    assert abs(params.a) == pytest.approx(1)
    assert IsingParams(5, 2).regime == Regime.POSITIVE
    assert IsingParams(3, 3).regime == Regime.DEGENERATE
    data = params.to_dict()
    assert data["regime"] == "negative"
    assert data["y"] == -0.5


def test_ising_params_validation():
    with pytest.raises(ValueError):
        IsingParams(4, 1)
    with pytest.raises(ValueError):
        IsingParams(5, 0)


def test_regime_table():
    table = regime_table(5)
    assert table["d"].tolist() == [1, 2, 3, 4]
    assert table["regime"].tolist() == ["negative", "positive", "positive", "negative"]
    assert (regime_table(3)["regime"] == "negative").all()


def test_select_d():
    assert select_d(5, Regime.POSITIVE) == 2
    assert select_d(5, "negative") == 1
    assert select_d(3, "negative") == 1
    with pytest.raises(ValueError):
        select_d(3, "positive")


def test_z_partition():
    J = read_coupling(BASE_DIR / "J.json")
    assert z_partition(J, -0.5) == pytest.approx(2.5)
    assert z_partition(J, 0.3) == pytest.approx(2 + 2 * 0.09)
    triangle = CouplingMatrix.from_graph(nx.cycle_graph(3))
    y = 0.7
    assert z_partition(triangle, y) == pytest.approx(2 * y**3 + 6 * y)
    assert z_partition(CouplingMatrix.from_array([[0]]), 0.5) == 2
    negative = CouplingMatrix.from_array([[0, -1], [-1, 0]])
    assert z_partition(negative, 0.5) == pytest.approx(2 / 0.5 + 2)
    with pytest.raises(ValueError):
        z_partition(negative, 0)
    with pytest.raises(ScaleError):
        z_partition(triangle, y, max_spins=2)


@pytest.mark.parametrize("m, d", POINTS)
def test_z_exact_matches_float(m, d):
    rng = np.random.default_rng(m * 10 + d)
    params = IsingParams(m, d)
    for n in range(1, 7):
        J = _random_coupling(rng, n, [-2, -1, 0, 1, 2, 4])
        Z = z_exact(J, params)
        assert Z.is_real()
        scale = z_partition(J, abs(params.y))
        assert Z.approx().real == pytest.approx(z_partition(J, params.y), abs=1e-9 * scale)
    with pytest.raises(ScaleError):
        z_exact(J, params, max_spins=2)


def test_edge_weight():
    for m, d in POINTS:
        params = IsingParams(m, d)
        assert edge_weight(1, -1, 0, params) == 1
        for J in (-2, -1, 1, 3):
            ratio = edge_weight(1, 1, J, params) / edge_weight(1, -1, J, params)
            assert ratio == pytest.approx(params.y**J)
            assert edge_weight(1, 1, J, params) == pytest.approx(edge_weight(-1, -1, J, params))


def test_physics_partition():
    rng = np.random.default_rng(11)
    for y in (-0.5, 0.3):
        for _ in range(5):
            J = _random_coupling(rng, 4, [-2, -1, 0, 1, 2])
            expected = z_partition(J, y) * complex(y) ** (-J.upper_sum / 2)
            assert physics_partition(J, beta_of(y)) == pytest.approx(expected)


def test_plat_braid():
    lk = linking_matrix(plat_braid(compile_link(read_coupling(BASE_DIR / "J.json"), IsingParams(3, 1)).lk), Closure.PLAT)
    assert lk.to_array().tolist() == [
        [0, 0, 1, 1],
        [0, 0, 1, 1],
        [1, 1, 0, 0],
        [1, 1, 0, 0],
    ]


def test_compile_link():
    compiled = compile_link(read_coupling(BASE_DIR / "J.json"), IsingParams(3, 1))
    assert compiled.components == 4
    assert compiled.fmap == ((1, 2, 1, 3), (1, 2, 2, 4))
    assert compiled.braid.strands == 8
    data = compiled.to_dict()
    assert data["components"] == 4
    assert data["length"] == len(compiled.braid)
    assert data["fmap"] == [[1, 2, 1, 3], [1, 2, 2, 4]]


def test_compile_link_signs():
    J = CouplingMatrix.from_array([[0, -1, 0], [-1, 0, 2], [0, 2, 0]])
    compiled = compile_link(J, IsingParams(5, 2))
    lk = compiled.lk.to_array()
    assert compiled.components == 6
    assert compiled.fmap[0] == (1, 2, 1, 4)
    assert lk[0, 3] == 2
    assert lk[1, 3] == -2
    assert lk[1, 4] == lk[2, 4] == 2
    assert lk[:3, :3].tolist() == [[0, 0, 0]] * 3


def test_compile_link_empty():
    compiled = compile_link(CouplingMatrix.from_array(np.zeros((3, 3))), IsingParams(3, 1))
    assert compiled.components == 3
    assert compiled.fmap == ()
    assert len(compiled.braid) == 0


@pytest.mark.parametrize("m,d", POINTS)
def test_plat_linking_matches(m, d):
    rng = np.random.default_rng(m * 10 + d)
    for _ in range(10):
        J = _random_coupling(rng, 3, [-2, -1, 0, 1, 2, 4])
        compiled = compile_link(J, IsingParams(m, d))
        assert linking_matrix(compiled.braid, Closure.PLAT) == compiled.lk


def test_claim_two_spins():
    J = read_coupling(BASE_DIR / "J.json")
    params = IsingParams(3, 1)
    check = verify_claim(J, params)
    omega = CyclotomicValue.root(12, 4)
    assert check.state.E == omega * 10
    assert check.residual < 1e-9
    assert claim_rhs(J, params) == pytest.approx(complex(check.state.E.approx()))
    assert check.to_dict()["components"] == 4


@pytest.mark.parametrize("m,d", POINTS)
def test_claim_fuzz(m, d):
    rng = np.random.default_rng(m + 100 * d)
    params = IsingParams(m, d)
    for n in (1, 2, 3):
        for _ in range(6):
            J = _random_coupling(rng, n, [-2, 0, 2, 4])
            assert verify_claim(J, params).residual < 1e-9
    for _ in range(6):
        J = _random_coupling(rng, 3, [-1, 1])
        assert verify_claim(J, params).residual < 1e-9


def test_claim_scale_limit():
    J = CouplingMatrix.from_array([[0, 4, 4], [4, 0, 4], [4, 4, 0]])
    with pytest.raises(ScaleError):
        verify_claim(J, IsingParams(3, 1), max_components=10)


def test_cut_stats():
    assert cut_stats(nx.cycle_graph(3)) == CutStats(2, 6)
    assert cut_stats(nx.cycle_graph(4)) == CutStats(4, 2)
    assert cut_stats(nx.empty_graph(2)) == CutStats(0, 4)
    assert cut_stats(nx.complete_graph(4)) == CutStats(4, 6)


def test_amplification():
    assert amplification(3, -0.5) == 4
    assert amplification(3, 0.25) == 2
    assert amplification(4, 0.5) == 6
    for y in (0, 1, -1, 1.5):
        with pytest.raises(ValueError):
            amplification(3, y)


def test_maxcut_triangle():
    result = maxcut_recover(read_graph(BASE_DIR / "G.json"), IsingParams(3, 1))
    assert result.K == 4
    assert result.stats == CutStats(2, 6)
    assert result.recovered == (CutStats(2, 6), CutStats(2, 6))
    assert result.ok
    data = result.to_dict()
    assert data["stats"] == {"M": 2, "Ncuts": 6}
    assert data["ok"]


def test_maxcut_empty_graph():
    result = maxcut_recover(nx.empty_graph(2), IsingParams(3, 1))
    assert result.stats == CutStats(0, 4)
    assert result.ok


@pytest.mark.parametrize("m,d", POINTS)
def test_maxcut_small_graphs(m, d):
    params = IsingParams(m, d)
    for graph in _small_graphs():
        result = maxcut_recover(graph, params)
        assert result.ok, graph.edges


def test_maxcut_scale_limit():
    with pytest.raises(ScaleError):
        maxcut_recover(nx.path_graph(5), IsingParams(3, 1), max_vertices=4)


def test_recover_cuts_too_coarse():
    with pytest.raises(RuntimeError):
        recover_cuts(math.log(1e-6), 3, 3, 4, -0.5)


@pytest.mark.parametrize("m,d", POINTS)
def test_approx_bounds(m, d):
    y = IsingParams(m, d).y
    for graph in _small_graphs():
        bounds = approx_bounds(graph, y, amplification(graph.number_of_nodes(), y))
        assert bounds.holds
        assert bounds.lower <= bounds.upper


def test_approx_bounds_validation():
    with pytest.raises(ValueError):
        approx_bounds(nx.cycle_graph(3), -0.5, 3)
    with pytest.raises(ValueError):
        approx_bounds(nx.cycle_graph(3), -0.5, 0)


def test_sign_regime():
    params = IsingParams(3, 1)
    triangle = CouplingMatrix.from_graph(nx.cycle_graph(3))
    result = sign_regime(triangle, params)
    assert result.Z == Fraction(-13, 4)
    assert result.sign == -1
    edge = CouplingMatrix.from_graph(nx.path_graph(2))
    assert sign_regime(edge, params).Z == 1
    assert sign_regime(edge, params).sign == 1
    single = CouplingMatrix.from_array([[0]])
    assert sign_regime(single, params).to_dict()["sign"] == 1


def test_sign_regime_irrational():
    params = IsingParams(5, 1)
    triangle = CouplingMatrix.from_graph(nx.cycle_graph(3))
    result = sign_regime(triangle, params)
    y = params.y
    assert result.Z.approx().real == pytest.approx(2 * y**3 + 6 * y)
    assert result.sign == -1
    assert result.Z.is_real()


def test_sign_regime_matches_float():
    rng = np.random.default_rng(5)
    params = IsingParams(3, 1)
    for n in range(1, 8):
        J = _random_coupling(rng, n, [0, 1])
        result = sign_regime(J, params)
        Z = z_partition(J, params.y)
        assert result.Z.approx().real == pytest.approx(Z)
        assert result.sign == (0 if Z == 0 else int(math.copysign(1, Z)))


def test_sign_regime_validation():
    triangle = CouplingMatrix.from_graph(nx.cycle_graph(3))
    with pytest.raises(ValueError):
        sign_regime(triangle, IsingParams(5, 2))
    with pytest.raises(ValueError):
        sign_regime(CouplingMatrix.from_array([[0, 2], [2, 0]]), IsingParams(3, 1))


def test_graph_from_dict():
    graph = graph_from_dict({"N": 4, "edges": [[0, 1], [2, 3]]})
    assert graph.number_of_nodes() == 4
    assert sorted(graph.edges) == [(0, 1), (2, 3)]
    graph = graph_from_dict({"N": 2, "J": [[0, 1], [1, 0]]})
    assert list(graph.edges) == [(0, 1)]
    for data in ({"N": 2, "edges": [[0, 2]]}, {"N": 2, "edges": [[1, 1]]}, {"edges": []}, {"N": 2}):
        with pytest.raises(ValueError):
            graph_from_dict(data)


def test_readers(tmp_path):
    assert read_graph(BASE_DIR / "G.json").number_of_edges() == 3
    with pytest.raises(FileNotFoundError):
        read_coupling(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ValueError):
        read_graph(bad)
