"""Ising partition functions and the links whose state sums compute them:
the coupling-matrix compiler, the state-sum identity, max-cut recovery from
approximate partition functions and the sign of Z for negative weights.
"""

from __future__ import annotations
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any
import cmath
import json
import math
import networkx as nx
import numpy as np
import pandas as pd
from loguru import logger
from .braid import BraidWord, LinkingMatrix, format_braid
from .cyclotomic import CyclotomicValue
from .kernels import coupling_counts
from .link_invariants import StateSum, lm_state_sum
from .utils import check_limit

TOL = 1e-9


class Regime(Enum):
    """Sign of y = cos(4πd/m)."""

    POSITIVE = "positive"
    NEGATIVE = "negative"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class CouplingMatrix:
    """A symmetric integer coupling matrix with a zero diagonal."""

    N: int
    J: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"An Ising instance needs at least one spin, got N = {self.N}!")
        arr = np.asarray(self.J, dtype=np.int64)
        if arr.shape != (self.N, self.N):
            raise ValueError(f"Expected a {self.N}x{self.N} coupling matrix, got shape {arr.shape}!")
        if (arr != arr.T).any():
            raise ValueError("A coupling matrix must be symmetric!")
        if np.diag(arr).any():
            raise ValueError("A coupling matrix must have a zero diagonal!")
        object.__setattr__(self, "J", tuple(tuple(int(x) for x in row) for row in arr))

    @classmethod
    def from_array(cls, arr) -> CouplingMatrix:
        arr = np.asarray(arr, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError(f"A coupling matrix must be 2-dimensional, got shape {arr.shape}!")
        return cls(arr.shape[0], tuple(map(tuple, arr)))

    @classmethod
    def from_dict(cls, data: dict) -> CouplingMatrix:
        """Build from the JSON form {"N": n, "J": [[...]]}."""
        if "N" not in data or "J" not in data:
            raise ValueError('A coupling file must contain the keys "N" and "J"!')
        return cls(int(data["N"]), tuple(tuple(row) for row in data["J"]))

    @classmethod
    def from_graph(cls, graph: nx.Graph, weight: int = 1) -> CouplingMatrix:
        """weight times the adjacency matrix of a simple graph, nodes in sorted order."""
        if nx.number_of_selfloops(graph):
            raise ValueError("Self-loops are not allowed in a max-cut instance!")
        adj = nx.to_numpy_array(graph, nodelist=sorted(graph.nodes), weight=None, dtype=np.int64)
        return cls.from_array(weight * (adj != 0).astype(np.int64))

    def to_array(self) -> np.ndarray:
        return np.asarray(self.J, dtype=np.int64).reshape(self.N, self.N)

    def to_dict(self) -> dict:
        return {"N": self.N, "J": [list(row) for row in self.J]}

    @property
    def P(self) -> int:
        """Sum of the positive entries of the full matrix."""
        arr = self.to_array()
        return int(arr[arr > 0].sum())

    @property
    def A(self) -> int:
        return int(np.abs(self.to_array()).sum())

    @property
    def upper_sum(self) -> int:
        """Σ_{i<j} J_ij."""
        return int(np.triu(self.to_array(), 1).sum())

    def edges(self) -> list[tuple[int, int, int]]:
        """Nonzero couplings (i, j, J_ij) with 0-based i < j in lexicographic order."""
        return [
            (i, j, self.J[i][j])
            for i in range(self.N)
            for j in range(i + 1, self.N)
            if self.J[i][j]
        ]

    def is_binary(self) -> bool:
        return all(x in (0, 1) for row in self.J for x in row)


@dataclass(frozen=True)
class IsingParams:
    """The point y = (a^{−4d} + a^{4d})/2 = cos(4πd/m) with a = −i e^{−iπ/m}."""

    m: int
    d: int

    def __post_init__(self):
        if self.m < 3 or self.m % 2 == 0:
            raise ValueError(f"m must be an odd integer >= 3, got {self.m}!")
        if self.d < 1:
            raise ValueError(f"d must be a positive integer, got {self.d}!")
        closed = math.cos(4 * math.pi * self.d / self.m)
        if abs(self.y - closed) > 1e-12:
            raise RuntimeError(f"y = {self.y} disagrees with cos(4πd/m) = {closed}!")

    @property
    def a(self) -> complex:
        return -1j * cmath.exp(-1j * math.pi / self.m)

    @property
    def y(self) -> float:
        a4 = self.a ** (4 * self.d)
        return ((1 / a4 + a4) / 2).real

    @property
    def y_exact(self) -> CyclotomicValue:
        # a^{−4} = ω² = ζ_{4m}^8
        order = 4 * self.m
        twice = CyclotomicValue.root(order, 8 * self.d) + CyclotomicValue.root(order, -8 * self.d)
        return twice / 2

    @property
    def regime(self) -> Regime:
        y = self.y
        if abs(y) >= 1 - TOL:
            return Regime.DEGENERATE
        return Regime.POSITIVE if y > 0 else Regime.NEGATIVE

    @property
    def sqrt_y(self) -> complex:
        return cmath.sqrt(self.y)

    @property
    def sqrt_z(self) -> complex:
        """The root of z = 2(a^{−4d} + a^{4d}) with √y·√z = a^{−4d} + a^{4d}."""
        return 2 * self.y / self.sqrt_y

    def to_dict(self, digits: int = 12) -> dict[str, Any]:
        return {
            "m": self.m,
            "d": self.d,
            "y": float(f"{self.y:.{digits}g}"),
            "y_exact": self.y_exact.to_dict(),
            "regime": self.regime.value,
        }


def regime_table(m: int) -> pd.DataFrame:
    """The value and regime of y for every d in 1..m−1.

    :param m: An odd integer >= 3.
    :return: A DataFrame with the columns d, y and regime.
    """
    rows = []
    for d in range(1, m):
        params = IsingParams(m, d)
        rows.append({"d": d, "y": params.y, "regime": params.regime.value})
    return pd.DataFrame(rows, columns=["d", "y", "regime"])


def select_d(m: int, regime: Regime | str) -> int:
    """The smallest d in 1..m−1 whose y lies in the requested regime.

    :param m: An odd integer >= 3.
    :param regime: A Regime or its name.
    :raises ValueError: If no d gives the regime (m = 3 has no positive y).
    """
    regime = Regime(regime)
    for d in range(1, m):
        if IsingParams(m, d).regime == regime:
            return d
    raise ValueError(f"No d in 1..{m - 1} gives a {regime.value} y for m = {m}!")


def z_partition(
    J: CouplingMatrix,
    y: float,
    threads: int = 1,
    progress: bool = False,
    max_spins: int = 30,
) -> float:
    """Brute-force Z(J, y) = Σ_σ y^{Σ_{i<j} J_ij δ(σ_i, σ_j)}.

    :param J: The coupling matrix.
    :param y: The weight per aligned unit of coupling.
    :param threads: The number of worker threads.
    :param progress: Whether to show a progress bar.
    :param max_spins: The largest number of spins allowed.
    :return: The partition function as a float.
    """
    check_limit(J.N, max_spins, "number of spins")
    hist, offset = coupling_counts(J.to_array(), threads=threads, progress=progress)
    if y == 0 and offset < 0:
        raise ValueError("Z(J, 0) is undefined for negative couplings!")
    return math.fsum(int(c) * y ** (k + offset) for k, c in enumerate(hist) if c)


def z_exact(
    J: CouplingMatrix,
    params: IsingParams,
    threads: int = 1,
    progress: bool = False,
    max_spins: int = 30,
) -> CyclotomicValue:
    """Z(J, y) exactly in Q(ζ_{4m}), by Horner's rule over the coupling histogram.

    :param J: The coupling matrix.
    :param params: The point (m, d) fixing y.
    :param threads: The number of worker threads.
    :param progress: Whether to show a progress bar.
    :param max_spins: The largest number of spins allowed.
    :return: The partition function as a CyclotomicValue.
    """
    check_limit(J.N, max_spins, "number of spins")
    hist, offset = coupling_counts(J.to_array(), threads=threads, progress=progress)
    y = params.y_exact
    Z = CyclotomicValue.zero(y.order)
    for count in reversed(hist):
        Z = Z * y + int(count)
    if offset < 0:
        Z = Z * y.inverse() ** -offset
    return Z


def beta_of(y: float) -> complex:
    """β = −ln(y)/2, complex when y < 0."""
    return -cmath.log(y) / 2


def physics_partition(
    J: CouplingMatrix, beta: complex, threads: int = 1, progress: bool = False
) -> complex:
    """Σ_σ exp(−β Σ_{i<j} J_ij σ_i σ_j).

    With β = beta_of(y) this equals Z(J, y)·(√y)^{−Σ_{i<j} J_ij}.
    """
    hist, offset = coupling_counts(J.to_array(), threads=threads, progress=progress)
    total = J.upper_sum
    # Σ J σσ = 2·aligned − Σ J
    return sum(
        int(c) * cmath.exp(-beta * (2 * (k + offset) - total))
        for k, c in enumerate(hist)
        if c
    )


def edge_weight(s_i: int, s_j: int, J_ij: int, params: IsingParams) -> complex:
    """The factor contributed by the |J_ij| auxiliary components of an edge:
    (Σ_{s = ±1} a^{2 s s_i d + 2 s s_j d sgn(J_ij)})^{|J_ij|}.
    """
    if not J_ij:
        return 1
    a, d = params.a, params.d
    sgn = 1 if J_ij > 0 else -1
    single = sum(a ** (2 * s * d * (s_i + s_j * sgn)) for s in (1, -1))
    return single ** abs(J_ij)


def plat_braid(lk: LinkingMatrix) -> BraidWord:
    """A braid on 2c strands whose plat closure has the given linking matrix.
    Component k is capped on the strands 2k−1 and 2k.
    For every pair i < j with ⟨i,j⟩ ≠ 0 the strand 2i is routed next to 2j−1
    with σ_{2i}…σ_{2j−3}, twisted 2|⟨i,j⟩| times and routed back.

    :param lk: A linking matrix.
    :return: A BraidWord.
    """
    c = lk.components
    entries = lk.to_array()
    letters = []
    for i in range(1, c + 1):
        for j in range(i + 1, c + 1):
            L = int(entries[i - 1, j - 1])
            if not L:
                continue
            route = list(range(2 * i, 2 * j - 2))
            # the two twisted strands run in opposite directions
            twist = [-(2 * j - 2) if L > 0 else 2 * j - 2] * (2 * abs(L))
            letters.extend(route + twist + [-g for g in reversed(route)])
    return BraidWord(2 * c, tuple(letters))


@dataclass(frozen=True)
class CompiledLink:
    """A link whose state sum computes Z(J, y), presented as a plat closure."""

    coupling: CouplingMatrix
    params: IsingParams
    lk: LinkingMatrix
    braid: BraidWord
    fmap: tuple[tuple[int, int, int, int], ...] = ()

    @property
    def components(self) -> int:
        return self.lk.components

    def to_dict(self) -> dict[str, Any]:
        return {
            "m": self.params.m,
            "d": self.params.d,
            **self.lk.to_dict(),
            "braid": format_braid(self.braid),
            "length": len(self.braid),
            "fmap": [list(t) for t in self.fmap],
        }


def compile_link(J: CouplingMatrix, params: IsingParams) -> CompiledLink:
    """Build the link of an Ising instance. Components 1..N are the spins;
    the auxiliary components F(i,j,n), n = 1..|J_ij|, are numbered from N + 1
    in lexicographic order of (i, j) and link spin i with d and spin j with
    d·sgn(J_ij).

    :param J: The coupling matrix.
    :param params: The point (m, d).
    :return: A CompiledLink with fmap entries (i, j, n, F), 1-based.
    """
    fmap = []
    c = J.N
    for i, j, Jij in J.edges():
        for n in range(1, abs(Jij) + 1):
            c += 1
            fmap.append((i + 1, j + 1, n, c))
    lk = np.zeros((c, c), dtype=np.int64)
    for i, j, _, F in fmap:
        sgn = 1 if J.J[i - 1][j - 1] > 0 else -1
        lk[i - 1, F - 1] = lk[F - 1, i - 1] = params.d
        lk[j - 1, F - 1] = lk[F - 1, j - 1] = params.d * sgn
    linking = LinkingMatrix.from_array(lk)
    braid = plat_braid(linking)
    logger.debug("Compiled {} spins into {} components and {} crossings.", J.N, c, len(braid))
    return CompiledLink(J, params, linking, braid, tuple(fmap))


def claim_rhs(J: CouplingMatrix, params: IsingParams, Z: float | None = None) -> complex:
    """Z(J,y)·a^{−2dP(J)}·(√y)^{−Σ_{i<j} J_ij}·(√z)^{A(J)/2}.

    :param J: The coupling matrix.
    :param params: The point (m, d).
    :param Z: A precomputed Z(J, y).
    """
    if Z is None:
        Z = z_partition(J, params.y)
    return (
        Z
        * params.a ** (-2 * params.d * J.P)
        * params.sqrt_y ** (-J.upper_sum)
        * params.sqrt_z ** (J.A // 2)
    )


@dataclass(frozen=True)
class ClaimCheck:
    """Both sides of the identity between E(L) and Z(J, y)."""

    state: StateSum
    rhs: complex

    @property
    def lhs(self) -> complex:
        return self.state.E.approx()

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)

    def to_dict(self, digits: int = 12) -> dict[str, Any]:
        return {
            "components": self.state.components,
            "E": self.state.E.to_dict(),
            "lhs": {"re": float(f"{self.lhs.real:.{digits}g}"), "im": float(f"{self.lhs.imag:.{digits}g}")},
            "rhs": {"re": float(f"{self.rhs.real:.{digits}g}"), "im": float(f"{self.rhs.imag:.{digits}g}")},
            "residual": float(f"{self.residual:.{digits}g}"),
        }


def verify_claim(
    J: CouplingMatrix,
    params: IsingParams,
    threads: int = 1,
    progress: bool = False,
    max_components: int = 24,
) -> ClaimCheck:
    """Evaluate E(L) of the compiled link by the sublink state sum
    and compare it with the closed form in Z(J, y).

    :param J: The coupling matrix.
    :param params: The point (m, d).
    :param threads: The number of worker threads.
    :param progress: Whether to show a progress bar.
    :param max_components: The largest link evaluated by the state sum.
    :return: A ClaimCheck.
    """
    compiled = compile_link(J, params)
    state = lm_state_sum(
        compiled.lk, params.m, threads=threads, progress=progress, max_components=max_components
    )
    Z = z_partition(J, params.y, threads=threads)
    check = ClaimCheck(state, claim_rhs(J, params, Z))
    logger.debug("E(L) = {}, right side = {}, residual = {}", check.lhs, check.rhs, check.residual)
    return check


@dataclass(frozen=True, order=True)
class CutStats:
    """The max cut size M and the number Ncuts of ordered cuts attaining it."""

    M: int
    Ncuts: int

    def to_dict(self) -> dict:
        return {"M": self.M, "Ncuts": self.Ncuts}


def cut_stats(graph: nx.Graph, threads: int = 1, progress: bool = False) -> CutStats:
    """Brute-force max cut statistics over all 2^N ordered cuts."""
    adj = CouplingMatrix.from_graph(graph)
    hist, _ = coupling_counts(adj.to_array(), threads=threads, progress=progress)
    aligned = int(np.flatnonzero(hist)[0])
    return CutStats(graph.number_of_edges() - aligned, int(hist[aligned]))


def amplification(n: int, y: float) -> int:
    """The smallest even K >= (n + 1) ln 2 / |ln |y||, so that 2^{n+1} |y|^K <= 1.

    :param n: The number of vertices.
    :param y: A weight with 0 < |y| < 1.
    """
    if not 0 < abs(y) < 1:
        raise ValueError(f"Max-cut recovery needs 0 < |y| < 1, got y = {y}!")
    bound = (n + 1) * math.log(2) / abs(math.log(abs(y)))
    K = max(math.ceil(bound - TOL), 1)
    return K + K % 2


def _log_sum(terms: list[float]) -> float:
    top = max(terms)
    return top + math.log(math.fsum(math.exp(t - top) for t in terms))


def log_partition(J: CouplingMatrix, y: float, threads: int = 1, progress: bool = False) -> float:
    """ln Z(J, y) for couplings with Z > 0 termwise, i.e. y > 0 or even entries."""
    hist, offset = coupling_counts(J.to_array(), threads=threads, progress=progress)
    ln_y = math.log(abs(y))
    return _log_sum([math.log(int(c)) + (k + offset) * ln_y for k, c in enumerate(hist) if c])


def recover_cuts(log_z: float, n: int, edges: int, K: int, y: float) -> CutStats:
    """Recover (M, Ncuts) from ln Z̃ where (1 ± 2^{−n−3}) Z̃ brackets Z(K·adj, y).

    :param log_z: ln Z̃.
    :param n: The number of vertices.
    :param edges: The number of edges.
    :param K: The even amplification of the couplings.
    :param y: The weight with |y| < 1.
    :raises RuntimeError: If the approximation is too coarse to pin down the answer.
    """
    ln_y = math.log(abs(y))
    eps = 2.0 ** (-n - 3)
    threshold = math.log(0.75)
    candidates = [mp for mp in range(edges + 1) if log_z - K * (edges - mp) * ln_y >= threshold]
    if not candidates:
        raise RuntimeError("No cut size passes the recovery threshold!")
    M = max(candidates)
    n_tilde = math.exp(log_z - K * (edges - M) * ln_y)
    lo, hi = (1 - eps) * n_tilde - 0.5, (1 + eps) * n_tilde
    counts = range(math.ceil(lo - TOL), math.floor(hi + TOL) + 1)
    if len(counts) != 1:
        raise RuntimeError(f"The interval [{lo}, {hi}] does not pin down the number of max cuts!")
    return CutStats(M, counts[0])


@dataclass(frozen=True)
class MaxCutResult:
    """Brute-force cut statistics and the statistics recovered at both band edges."""

    stats: CutStats
    K: int
    log_z: float
    recovered: tuple[CutStats, ...]

    @property
    def ok(self) -> bool:
        return all(r == self.stats for r in self.recovered)

    def to_dict(self, digits: int = 12) -> dict[str, Any]:
        return {
            "stats": self.stats.to_dict(),
            "K": self.K,
            "log_Z": float(f"{self.log_z:.{digits}g}"),
            "recovered": [r.to_dict() for r in self.recovered],
            "ok": self.ok,
        }


def maxcut_recover(
    graph: nx.Graph,
    params: IsingParams,
    threads: int = 1,
    progress: bool = False,
    max_vertices: int = 16,
) -> MaxCutResult:
    """Recover the max cut size and count of a graph from approximations of
    Z(K·adj, y) at the worst-case edges of the multiplicative band 2^{−N−3}.

    :param graph: A simple graph.
    :param params: The point (m, d); requires |y| < 1.
    :param threads: The number of worker threads.
    :param progress: Whether to show a progress bar.
    :param max_vertices: The largest graph allowed.
    :return: A MaxCutResult.
    """
    n = graph.number_of_nodes()
    check_limit(n, max_vertices, "number of vertices")
    y = params.y
    K = amplification(n, y)
    J = CouplingMatrix.from_graph(graph, K)
    stats = cut_stats(graph, threads=threads, progress=progress)
    log_z = log_partition(J, y, threads=threads, progress=progress)
    eps = 2.0 ** (-n - 3)
    edges = graph.number_of_edges()
    recovered = tuple(
        recover_cuts(log_z - math.log1p(delta), n, edges, K, y) for delta in (eps, -eps)
    )
    logger.info("Max cut {} recovered as {} with K = {}.", stats, recovered, K)
    return MaxCutResult(stats, K, log_z, recovered)


@dataclass(frozen=True)
class ApproxBounds:
    """N(G)|y|^{K(|E|−M)} <= Z(K·adj, y) <= N(G)|y|^{K(|E|−M)} + 2^N |y|^{K(1+|E|−M)}."""

    lower: float
    Z: float
    upper: float

    @property
    def holds(self) -> bool:
        return self.lower <= self.Z * (1 + TOL) and self.Z <= self.upper * (1 + TOL)


def approx_bounds(graph: nx.Graph, y: float, K: int, threads: int = 1) -> ApproxBounds:
    """Evaluate both sides of the max-cut bounds on Z(K·adj, y).

    :param graph: A simple graph.
    :param y: A weight with |y| < 1.
    :param K: An even positive amplification.
    """
    if K < 2 or K % 2:
        raise ValueError(f"K must be a positive even integer, got {K}!")
    n = graph.number_of_nodes()
    stats = cut_stats(graph, threads=threads)
    gap = graph.number_of_edges() - stats.M
    lower = stats.Ncuts * abs(y) ** (K * gap)
    upper = lower + 2**n * abs(y) ** (K * (gap + 1))
    Z = z_partition(CouplingMatrix.from_graph(graph, K), y, threads=threads)
    return ApproxBounds(lower, Z, upper)


@dataclass(frozen=True)
class SignResult:
    """Z(J, y) for negative y, exact in Q(ζ_{4m})."""

    Z: CyclotomicValue
    sign: int

    def to_dict(self, digits: int = 12) -> dict[str, Any]:
        return {
            "Z": self.Z.to_dict(),
            "Z_approx": float(f"{self.Z.approx().real:.{digits}g}"),
            "sign": self.sign,
        }


def sign_regime(
    J: CouplingMatrix,
    params: IsingParams,
    threads: int = 1,
    progress: bool = False,
    max_spins: int = 24,
) -> SignResult:
    """The exact value and sign of Z(J, y) for 0/1 couplings and −1 < y < 0.

    :param J: A coupling matrix with entries in {0, 1}.
    :param params: A point with negative y.
    :param threads: The number of worker threads.
    :param progress: Whether to show a progress bar.
    :param max_spins: The largest number of spins allowed.
    :return: A SignResult.
    """
    if params.regime != Regime.NEGATIVE:
        raise ValueError(f"The sign regime needs −1 < y < 0, got y = {params.y} (m = {params.m}, d = {params.d})!")
    if not J.is_binary():
        raise ValueError("The sign regime takes couplings in {0, 1}!")
    Z = z_exact(J, params, threads=threads, progress=progress, max_spins=max_spins)
    if Z != Z.conjugate():
        raise RuntimeError(f"Z(J, y) = {Z} is not real!")
    if Z.is_zero():
        return SignResult(Z, 0)
    return SignResult(Z, 1 if Z.approx().real > 0 else -1)


def _read_json(path: str | Path, what: str) -> dict:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"The {what} file {path} does not exist!")
    with open(path, "r", encoding="utf-8") as fin:
        try:
            return json.load(fin)
        except json.JSONDecodeError as err:
            raise ValueError(f"The {what} file {path} is not valid JSON: {err}") from err


def read_coupling(path: str | Path) -> CouplingMatrix:
    """Read a coupling matrix from JSON {"N": n, "J": [[...]]}."""
    return CouplingMatrix.from_dict(_read_json(path, "coupling"))


def graph_from_dict(data: dict) -> nx.Graph:
    """Build a graph on the nodes 0..N−1 from {"N": n, "edges": [[u, v], ...]}
    or {"N": n, "J": adjacency}.
    """
    if "N" not in data:
        raise ValueError('A graph file must contain the key "N"!')
    n = int(data["N"])
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    if "edges" in data:
        for u, v in data["edges"]:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ValueError(f"Invalid edge ({u}, {v}) for a graph on {n} vertices!")
            graph.add_edge(int(u), int(v))
    elif "J" in data:
        adj = CouplingMatrix.from_dict(data).to_array()
        graph.add_edges_from((int(u), int(v)) for u, v in zip(*np.nonzero(np.triu(adj, 1))))
    else:
        raise ValueError('A graph file must contain "edges" or "J"!')
    return graph


def read_graph(path: str | Path) -> nx.Graph:
    """Read a graph from JSON, see graph_from_dict."""
    return graph_from_dict(_read_json(path, "graph"))
