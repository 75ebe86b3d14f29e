"""Exact link invariants: the sublink state sum E(L) with I_Y1 = E/4,
the Xe invariant from Seifert matrices (Gauss sums), and the classical
points of the Kauffman polynomial.
"""

from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from typing import Any
import cmath
import math
import numpy as np
import sympy
from loguru import logger
from .braid import BraidWord, Closure, LinkingMatrix, closure_components
from .cyclotomic import CyclotomicValue
from .kernels import gauss_counts, sublink_counts
from .utils import check_limit

TOL = 1e-9


def _approx_dict(value: CyclotomicValue, digits: int = 12) -> dict[str, float]:
    z = value.approx()
    return {"re": float(f"{z.real:.{digits}g}"), "im": float(f"{z.imag:.{digits}g}")}


def _scalar(value: CyclotomicValue) -> int | str:
    """An int for integral values, "a/b" for other rationals, else the field expression."""
    if not value.is_rational():
        return str(value)
    frac = value.to_fraction()
    return int(frac) if frac.denominator == 1 else str(frac)


@dataclass(frozen=True)
class StateSum:
    """E(L) = Σ_S ω^{2⟨S, L−S⟩} over all sublinks S and I_Y1 = E/4."""

    E: CyclotomicValue
    I_Y1: CyclotomicValue
    components: int
    m: int

    def to_dict(self, digits: int = 12) -> dict[str, Any]:
        data = {"components": self.components, "m": self.m}
        for name, value in (("E", self.E), ("I_Y1", self.I_Y1)):
            data[name] = _scalar(value)
            data[name + "_exact"] = value.to_dict()
            data[name + "_approx"] = _approx_dict(value, digits)
        data["norm"] = float(f"{abs(self.E.approx()):.{digits}g}")
        return data


def lm_state_sum(
    lk: LinkingMatrix,
    m: int,
    threads: int = 1,
    progress: bool = False,
    max_components: int = 30,
) -> StateSum:
    """Evaluate the state sum over all 2^c sublinks at a = −i e^{−iπ/m},
    using a^{−4} = ω². Values live in Q(ζ_{4m}).

    :param lk: The linking matrix of the link.
    :param m: An odd integer >= 3.
    :param threads: The number of worker threads.
    :param progress: Whether to show a progress bar.
    :param max_components: The largest number of components allowed.
    :return: A StateSum.
    """
    if m < 3 or m % 2 == 0:
        raise ValueError(f"m must be an odd integer >= 3, got {m}!")
    check_limit(
        lk.components,
        max_components,
        "number of components",
        "Links compiled from Ising instances can be evaluated through Z(J, y) instead.",
    )
    order = 4 * m
    hist = sublink_counts(lk.to_array(), m, threads=threads, progress=progress)
    coeffs = [Fraction(0)] * order
    for x, count in enumerate(hist):
        # ω^{2x} = ζ_{4m}^{8x}
        coeffs[(8 * x) % order] += int(count)
    E = CyclotomicValue(order, tuple(coeffs))
    logger.debug("E = {} for a {}-component link at m = {}", E, lk.components, m)
    return StateSum(E, E / 4, lk.components, m)


@dataclass(frozen=True)
class SeifertData:
    """The Seifert matrix of the canonical surface of a braid closure."""

    V: tuple[tuple[int, ...], ...]
    b1: int
    components: int

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.V, dtype=np.int64).reshape(self.b1, self.b1)

    def to_dict(self) -> dict:
        return {"V": [list(row) for row in self.V], "b1": self.b1, "components": self.components}


def seifert_from_braid(braid: BraidWord) -> SeifertData:
    """Seifert matrix of the surface made of one disk per strand and one band per
    crossing. Loops run between consecutive crossings on the same column.

    :param braid: A braid word whose trace closure surface is connected.
    :return: A SeifertData with b1 = len(word) − strands + 1.
    """
    n = braid.strands
    used = {abs(g) for g in braid.letters}
    missing = [i for i in range(1, n) if i not in used]
    if missing:
        raise ValueError(
            f"The Seifert surface is disconnected (generators {missing} never occur); "
            "evaluate each split component separately."
        )
    columns: dict[int, list[int]] = {i: [] for i in range(1, n)}
    for pos, g in enumerate(braid.letters):
        columns[abs(g)].append(pos)
    # loops as (column, start, end)
    loops = []
    for i in range(1, n):
        positions = columns[i]
        loops.extend((i, s, t) for s, t in zip(positions, positions[1:]))
    b1 = len(loops)
    sign = [1 if g > 0 else -1 for g in braid.letters]
    V = np.zeros((b1, b1), dtype=np.int64)
    for a, (col_a, s1, s2) in enumerate(loops):
        V[a, a] = -(sign[s1] + sign[s2]) // 2
        for b, (col_b, t1, t2) in enumerate(loops):
            if col_b == col_a and t1 == s2:
                eps = sign[s2]
                V[a, b] = (1 + eps) // 2
                V[b, a] = (eps - 1) // 2
            elif col_b == col_a + 1:
                if s1 < t1 < s2 < t2:
                    V[a, b] = -1
                elif t1 < s1 < t2 < s2:
                    V[b, a] = 1
    components = closure_components(braid, Closure.TRACE).count
    return SeifertData(tuple(tuple(int(v) for v in row) for row in V), b1, components)


def link_determinant(data: SeifertData) -> int:
    """|det(V + Vᵀ)|, the order of H_1 of the double branched cover (0 if infinite)."""
    if not data.b1:
        return 1
    mat = sympy.Matrix(data.matrix.tolist())
    return abs(int((mat + mat.T).det()))


def alexander_polynomial(data: SeifertData) -> tuple[int, ...]:
    """Coefficients of det(V − tVᵀ) from the lowest nonzero power of t,
    normalized so that the lowest coefficient is positive.
    """
    if not data.b1:
        return (1,)
    t = sympy.Symbol("t")
    mat = sympy.Matrix(data.matrix.tolist())
    det = sympy.expand((mat - t * mat.T).det())
    if det == 0:
        return (0,)
    coeffs = [int(c) for c in reversed(sympy.Poly(det, t).all_coeffs())]
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if coeffs[0] < 0:
        coeffs = [-c for c in coeffs]
    return tuple(coeffs)


def congruence_diagonalize(mat: np.ndarray, p: int) -> list[int]:
    """Diagonal entries of a symmetric matrix after congruence over F_p, p odd.

    :param mat: A symmetric integer matrix.
    :param p: An odd prime.
    :return: The diagonal in [0, p), zeros included.
    """
    a = [[int(v) % p for v in row] for row in np.asarray(mat)]
    n = len(a)
    diag = []
    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j]), None)
            if j is not None:
                a[k], a[j] = a[j], a[k]
                for row in a:
                    row[k], row[j] = row[j], row[k]
            else:
                j = next((j for j in range(k + 1, n) if a[k][j]), None)
                if j is None:
                    diag.append(0)
                    continue
                # a[k][k] becomes 2·a[k][j] ≠ 0
                a[k] = [(u + v) % p for u, v in zip(a[k], a[j])]
                for row in a:
                    row[k] = (row[k] + row[j]) % p
        inv = pow(a[k][k], -1, p)
        for j in range(k + 1, n):
            f = a[j][k] * inv % p
            if not f:
                continue
            a[j] = [(u - f * v) % p for u, v in zip(a[j], a[k])]
            for row in a:
                row[j] = (row[j] - f * row[k]) % p
        diag.append(a[k][k])
    return diag


def corank(mat: np.ndarray, p: int) -> int:
    return sum(1 for d in congruence_diagonalize(mat, p) if d == 0)


def _sqrt_p_power(p: int, power: int, order: int) -> CyclotomicValue:
    """(√p)^power for an integer power (possibly negative)."""
    half, odd = divmod(abs(power), 2)
    value = CyclotomicValue.from_rational(Fraction(p) ** (half if power >= 0 else -half), order)
    if odd:
        root = CyclotomicValue.sqrt_prime(p, order)
        value = value * (root if power > 0 else root / p)
    return value


@dataclass(frozen=True)
class XeValue:
    value: CyclotomicValue
    corank: int
    p: int
    mode: str

    def to_dict(self, digits: int = 12) -> dict:
        return {
            "exact": self.value.to_dict(),
            "approx": _approx_dict(self.value, digits),
            "norm": float(f"{abs(self.value.approx()):.{digits}g}"),
            "corank": self.corank,
            "p": self.p,
            "mode": self.mode,
        }


def i_xe_eval(
    data: SeifertData,
    p: int,
    mode: str = "fast",
    threads: int = 1,
    progress: bool = False,
    max_terms: int = 10_000_000,
) -> XeValue:
    """p^{−b1/2} Σ_v ω^{vᵀVv} over v ∈ F_p^{b1}, ω = e^{2πi/p}.

    :param data: Seifert data of a link.
    :param p: An odd prime.
    :param mode: "brute" sums over all vectors; "fast" diagonalizes the form
        and multiplies one-dimensional Gauss sums.
    :param threads: The number of worker threads (brute mode).
    :param progress: Whether to show a progress bar (brute mode).
    :param max_terms: The largest number of vectors summed in brute mode.
    :return: An XeValue in Q(ζ_{4p}).
    """
    if p < 3 or not sympy.isprime(p):
        raise ValueError(f"p must be an odd prime, got {p}!")
    order = 4 * p
    V = data.matrix
    sym = V + V.T
    rank_deficit = corank(sym, p)
    if mode == "brute":
        check_limit(p**data.b1, max_terms, "number of Gauss sum terms", "Use --mode fast.")
        hist = gauss_counts(V, p, threads=threads, progress=progress)
        coeffs = [Fraction(0)] * order
        for x, count in enumerate(hist):
            coeffs[4 * x] += int(count)
        value = CyclotomicValue(order, tuple(coeffs)) * _sqrt_p_power(p, -data.b1, order)
        return XeValue(value, rank_deficit, p, mode)
    if mode != "fast":
        raise ValueError(f"Unknown mode {mode}; use brute or fast!")
    inv2 = (p + 1) // 2
    # p^{−1/2} Σ_x ω^{a x²} = (a|p) for p ≡ 1 mod 4 and i·(a|p) for p ≡ 3 mod 4
    unit = CyclotomicValue.one(order) if p % 4 == 1 else CyclotomicValue.root(order, p)
    value = _sqrt_p_power(p, rank_deficit, order)
    for d in congruence_diagonalize(sym, p):
        if d:
            value = value * unit * int(sympy.legendre_symbol(d * inv2 % p, p))
    return XeValue(value, rank_deficit, p, mode)


def _as_complex(value) -> complex | None:
    try:
        if isinstance(value, sympy.Basic):
            value = sympy.N(value, 30)
        return complex(value)
    except (TypeError, ValueError):
        return None


def _close(u: complex, v: complex) -> bool:
    return abs(u - v) < TOL


def _is_root(q: complex, order: int) -> bool:
    return _close(q**order, 1)


def _q_candidates(z: complex) -> list[complex]:
    disc = cmath.sqrt(z * z - 4)
    roots = [(z + disc) / 2, (z - disc) / 2]
    return [q for q in roots if abs(q) > TOL and not (_close(q, 1j) or _close(q, -1j))]


def kauffman_classical_point(a, z) -> bool | None:
    """Whether (a, z) is a classical point of the Kauffman polynomial F(L; a, z).

    :param a: A complex number or a sympy expression.
    :param z: A complex number or a sympy expression.
    :return: True or False, or None if the inputs cannot be evaluated
        or lie outside a, z ≠ 0.
    """
    a, z = _as_complex(a), _as_complex(z)
    if a is None or z is None or abs(a) < TOL or abs(z) < TOL:
        return None
    if _close(a, 1j) or _close(a, -1j):
        return True
    for q in _q_candidates(z):
        for e in (3, -3):
            if _close(a, -(q**e)) and (_is_root(q, 16) or _is_root(q, 24)):
                return True
            if _close(a, q**e) and (_is_root(q, 8) or _is_root(q, 12)):
                return True
        for e in (1, -1):
            if _close(a, -(q**e)) and _is_root(q, 16):
                return True
        if _close(a, 1) and _is_root(q, 5):
            return True
    if _close(a, -1):
        disc = cmath.sqrt(z * z - 4)
        for q in ((-z + disc) / 2, (-z - disc) / 2):
            if abs(q) > TOL and _is_root(q, 5):
                return True
    return False


def y1_kauffman_point(m: int) -> tuple[complex, float]:
    """The point (a, z) = (−i e^{−iπ/m}, 2 sin(π/m)) at which I_Y1 is evaluated."""
    return -1j * cmath.exp(-1j * math.pi / m), 2 * math.sin(math.pi / m)
