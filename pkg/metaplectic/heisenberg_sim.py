"""Heisenberg-picture simulation of Xe braiding on qudits: monomials in the
shift and clock operators, their conjugation by braid generators,
stabilizer tableaus and stabilizer measurement for prime m.
"""

from __future__ import annotations
from dataclasses import dataclass
from functools import reduce
import re
import cmath
import math
import numpy as np
import sympy
from loguru import logger
from .braid import BraidWord
from .dense_rep import clock, shift


def _dot(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class QuditMonomial:
    """The operator ζ^phase · X^x · Z^z on n qudits, ζ = e^{πi/m}, with all
    shift operators to the left of all clock operators.
    """

    m: int
    phase: int
    x: tuple[int, ...]
    z: tuple[int, ...]

    def __post_init__(self):
        if self.m < 3 or self.m % 2 == 0:
            raise ValueError(f"m must be an odd integer >= 3, got {self.m}!")
        if len(self.x) != len(self.z):
            raise ValueError("The shift and clock exponent vectors must have the same length!")
        object.__setattr__(self, "phase", self.phase % (2 * self.m))
        object.__setattr__(self, "x", tuple(int(e) % self.m for e in self.x))
        object.__setattr__(self, "z", tuple(int(e) % self.m for e in self.z))

    @property
    def n(self) -> int:
        return len(self.x)

    @classmethod
    def identity(cls, n: int, m: int) -> QuditMonomial:
        return cls(m, 0, (0,) * n, (0,) * n)

    @classmethod
    def from_sites(
        cls,
        n: int,
        m: int,
        x: dict[int, int] | None = None,
        z: dict[int, int] | None = None,
        phase: int = 0,
    ) -> QuditMonomial:
        """Build a monomial from 1-based site exponents."""
        xs, zs = [0] * n, [0] * n
        for site, e in (x or {}).items():
            xs[site - 1] = e
        for site, e in (z or {}).items():
            zs[site - 1] = e
        return cls(m, phase, tuple(xs), tuple(zs))

    def _check(self, other: QuditMonomial) -> None:
        if self.m != other.m or self.n != other.n:
            raise ValueError(
                f"Mismatched monomials: (n={self.n}, m={self.m}) vs (n={other.n}, m={other.m})!"
            )

    def __mul__(self, other: QuditMonomial) -> QuditMonomial:
        self._check(other)
        # Z^z X^x' = ω^{z·x'} X^x' Z^z
        phase = self.phase + other.phase + 2 * _dot(self.z, other.x)
        x = tuple(a + b for a, b in zip(self.x, other.x))
        z = tuple(a + b for a, b in zip(self.z, other.z))
        return QuditMonomial(self.m, phase, x, z)

    def inverse(self) -> QuditMonomial:
        return QuditMonomial(
            self.m,
            -self.phase + 2 * _dot(self.z, self.x),
            tuple(-e for e in self.x),
            tuple(-e for e in self.z),
        )

    def __pow__(self, exponent: int) -> QuditMonomial:
        base = self if exponent >= 0 else self.inverse()
        result = QuditMonomial.identity(self.n, self.m)
        exponent = abs(exponent)
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def with_phase(self, phase: int) -> QuditMonomial:
        return QuditMonomial(self.m, phase, self.x, self.z)

    def scaled(self, phase: int) -> QuditMonomial:
        """Multiply by the scalar ζ^phase."""
        return QuditMonomial(self.m, self.phase + phase, self.x, self.z)

    def vector(self) -> tuple[int, ...]:
        return self.x + self.z

    def is_identity(self) -> bool:
        return not any(self.x) and not any(self.z)

    def to_dense(self) -> np.ndarray:
        """Dense matrix of the monomial, site 1 most significant."""
        xs = reduce(
            np.kron,
            [np.linalg.matrix_power(shift(self.m), e) for e in self.x],
            np.eye(1, dtype=complex),
        )
        zs = reduce(
            np.kron,
            [np.linalg.matrix_power(clock(self.m), e) for e in self.z],
            np.eye(1, dtype=complex),
        )
        return cmath.exp(1j * math.pi * self.phase / self.m) * (xs @ zs)

    def to_dict(self) -> dict:
        return {"phase_exp": self.phase, "x_exp": list(self.x), "z_exp": list(self.z)}

    def __str__(self) -> str:
        parts = [f"ζ^{self.phase}"] if self.phase else []
        parts += [f"X{i + 1}" + (f"^{e}" if e != 1 else "") for i, e in enumerate(self.x) if e]
        parts += [f"Z{i + 1}" + (f"^{e}" if e != 1 else "") for i, e in enumerate(self.z) if e]
        return " ".join(parts) if parts else "I"


def symp(a: QuditMonomial, b: QuditMonomial) -> int:
    """The symplectic form x·z' − z·x' mod m; a and b commute iff it vanishes."""
    a._check(b)
    return (_dot(a.x, b.z) - _dot(a.z, b.x)) % a.m


def commute(a: QuditMonomial, b: QuditMonomial) -> bool:
    return symp(a, b) == 0


def parse_monomial(text: str, n: int, m: int) -> QuditMonomial:
    """Parse a product such as "w^2 X1 Z2^-1" (w = ω) into a monomial.

    :param text: Factors X<i>, Z<i> or w, each with an optional ^<exponent>.
    :param n: The number of qudits.
    :param m: The modulus.
    """
    result = QuditMonomial.identity(n, m)
    for token in text.replace("*", " ").split():
        match = re.fullmatch(r"([XZw])(\d*)(?:\^(-?\d+))?", token)
        if not match:
            raise ValueError(f"Malformed monomial factor: {token}!")
        op, site, exp = match.group(1), match.group(2), int(match.group(3) or 1)
        if op == "w":
            result = result.scaled(2 * exp)
            continue
        if not site or not 1 <= int(site) <= n:
            raise ValueError(f"Site of {token} is out of range 1..{n}!")
        key = "x" if op == "X" else "z"
        result = result * QuditMonomial.from_sites(n, m, **{key: {int(site): exp}})
    return result


def shift_op(n: int, m: int, i: int) -> QuditMonomial:
    return QuditMonomial.from_sites(n, m, x={i: 1})


def clock_op(n: int, m: int, i: int) -> QuditMonomial:
    return QuditMonomial.from_sites(n, m, z={i: 1})


def u_op(n: int, m: int, i: int) -> QuditMonomial:
    """U_i = X_iX_{i+1}Z_iZ_{i+1}^{-1}."""
    return QuditMonomial.from_sites(n, m, x={i: 1, i + 1: 1}, z={i: 1, i + 1: -1})


def u_tilde_op(n: int, m: int, i: int) -> QuditMonomial:
    """Ũ_i = X_iX_{i+1}Z_i^{-1}Z_{i+1}."""
    return QuditMonomial.from_sites(n, m, x={i: 1, i + 1: 1}, z={i: -1, i + 1: 1})


def _local_basis(n: int, m: int, i: int) -> tuple[QuditMonomial, ...]:
    # X_iX_{i+1}, Z_iZ_{i+1}^{-1}, X_iZ_i commute with R; Z_i does not
    return (
        QuditMonomial.from_sites(n, m, x={i: 1, i + 1: 1}),
        QuditMonomial.from_sites(n, m, z={i: 1, i + 1: -1}),
        QuditMonomial.from_sites(n, m, x={i: 1}, z={i: 1}),
        QuditMonomial.from_sites(n, m, z={i: 1}),
    )


def _clock_image(n: int, m: int, i: int, sign: int) -> QuditMonomial:
    l = (m + 1) // 2
    if sign > 0:
        # R† Z_i R = ω^{l²} Z_i U_i^{-l}
        return (clock_op(n, m, i) * u_op(n, m, i) ** (-l)).scaled(2 * l * l)
    # R Z_i R† = ω^{-l²} Z_i U_i^{l}
    return (clock_op(n, m, i) * u_op(n, m, i) ** l).scaled(-2 * l * l)


def conjugate_by_generator(a: QuditMonomial, i: int, sign: int) -> QuditMonomial:
    """The Heisenberg image R^{sign†} a R^{sign} of a monomial under
    the Gaussian R-matrix acting on sites i and i+1.

    :param a: A monomial.
    :param i: The generator index, 1 <= i <= n-1.
    :param sign: +1 for σ_i, -1 for σ_i^{-1}.
    :return: The conjugated monomial with exact phase.
    """
    n, m = a.n, a.m
    if not 1 <= i <= n - 1:
        raise ValueError(f"Generator index {i} is out of range for {n} qudits!")
    x1, x2, z1, z2 = a.x[i - 1], a.x[i], a.z[i - 1], a.z[i]
    coeffs = (x2, -z2, x1 - x2, z1 + z2 - x1 + x2)
    xs, zs = list(a.x), list(a.z)
    xs[i - 1] = xs[i] = zs[i - 1] = zs[i] = 0
    rest = QuditMonomial(m, 0, tuple(xs), tuple(zs))
    basis = _local_basis(n, m, i)
    local = QuditMonomial.identity(n, m)
    for g, c in zip(basis, coeffs):
        local = local * g**c
    decomposed = local * rest
    image = QuditMonomial.identity(n, m)
    for g, c in zip(basis[:3], coeffs[:3]):
        image = image * g**c
    image = image * _clock_image(n, m, i, sign) ** coeffs[3] * rest
    return image.with_phase(image.phase + a.phase - decomposed.phase)


def conjugate(a: QuditMonomial, braid: BraidWord) -> QuditMonomial:
    """ρ(b)† a ρ(b) for a braid word b, letters applied in word order."""
    if braid.strands != a.n:
        raise ValueError(f"A braid on {braid.strands} strands does not act on {a.n} qudits!")
    for g in braid.letters:
        a = conjugate_by_generator(a, abs(g), 1 if g > 0 else -1)
    return a


@dataclass(frozen=True)
class UWord:
    """ζ^phase · u_1^{e_1} ⋯ u_{2k}^{e_{2k}} with u_{2i−1} = X_i,
    u_{2i} = Z_iZ_{i+1}^{-1} (i < k) and u_{2k} = Z_k.
    """

    m: int
    phase: int
    exps: tuple[int, ...]

    def __post_init__(self):
        if len(self.exps) % 2:
            raise ValueError("A UWord on k qudits has 2k exponents!")
        object.__setattr__(self, "phase", self.phase % (2 * self.m))
        object.__setattr__(self, "exps", tuple(int(e) % self.m for e in self.exps))

    @property
    def k(self) -> int:
        return len(self.exps) // 2

    def _generators(self) -> list[QuditMonomial]:
        k, m = self.k, self.m
        gens = []
        for i in range(1, k + 1):
            gens.append(shift_op(k, m, i))
            z = {i: 1, i + 1: -1} if i < k else {i: 1}
            gens.append(QuditMonomial.from_sites(k, m, z=z))
        return gens

    def to_monomial(self) -> QuditMonomial:
        result = QuditMonomial.identity(self.k, self.m)
        for g, e in zip(self._generators(), self.exps):
            result = result * g**e
        return result.with_phase(result.phase + self.phase)

    @classmethod
    def from_monomial(cls, a: QuditMonomial) -> UWord:
        exps = []
        partial = 0
        for i in range(a.n):
            partial += a.z[i]
            exps.extend([a.x[i], partial])
        word = cls(a.m, 0, tuple(exps))
        return cls(a.m, a.phase - word.to_monomial().phase, tuple(exps))


def _is_prime(m: int) -> bool:
    return bool(sympy.isprime(m))


def _require_prime(m: int) -> None:
    if not _is_prime(m):
        raise ValueError(f"Stabilizer tableaus need a prime modulus, got m = {m}!")


def _require_unitary(a: QuditMonomial) -> None:
    if a.phase % 2:
        raise ValueError(f"{a} is not a unitary monomial with eigenvalues in powers of ω!")


def _solve_mod_p(rows: list[tuple[int, ...]], target: tuple[int, ...], p: int) -> list[int] | None:
    """Solve Σ c_k rows[k] = target over F_p, returning None when unsolvable."""
    k = len(rows)
    width = len(target)
    # augmented matrix with unknowns as columns
    mat = [[rows[c][r] % p for c in range(k)] + [target[r] % p] for r in range(width)]
    pivots = []
    row = 0
    for col in range(k):
        pivot = next((r for r in range(row, width) if mat[r][col]), None)
        if pivot is None:
            continue
        mat[row], mat[pivot] = mat[pivot], mat[row]
        inv = pow(mat[row][col], -1, p)
        mat[row] = [v * inv % p for v in mat[row]]
        for r in range(width):
            if r != row and mat[r][col]:
                f = mat[r][col]
                mat[r] = [(v - f * w) % p for v, w in zip(mat[r], mat[row])]
        pivots.append(col)
        row += 1
    if any(mat[r][k] for r in range(row, width)):
        return None
    coeffs = [0] * k
    for r, col in enumerate(pivots):
        coeffs[col] = mat[r][k]
    return coeffs


def rank_mod_p(vectors: list[tuple[int, ...]], p: int) -> int:
    """Rank of a list of integer vectors over F_p."""
    mat = [[v % p for v in vec] for vec in vectors]
    rank = 0
    width = len(mat[0]) if mat else 0
    for col in range(width):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = pow(mat[rank][col], -1, p)
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                f = mat[r][col] * inv % p
                mat[r] = [(v - f * w) % p for v, w in zip(mat[r], mat[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class StabilizerTableau:
    """Commuting monomials S_k with eigenvalues ω^{e_k}, S_k|ψ⟩ = ω^{e_k}|ψ⟩."""

    n: int
    m: int
    rows: tuple[tuple[QuditMonomial, int], ...]

    def __post_init__(self):
        rows = tuple((s, e % self.m) for s, e in self.rows)
        object.__setattr__(self, "rows", rows)
        for s, _ in rows:
            if s.n != self.n or s.m != self.m:
                raise ValueError("Every row must act on the tableau's qudits with the same modulus!")
            _require_unitary(s)
        for k, (s, _) in enumerate(rows):
            for t, _ in rows[k + 1 :]:
                if not commute(s, t):
                    raise ValueError(f"Rows {s} and {t} do not commute!")
        if _is_prime(self.m) and rank_mod_p([s.vector() for s, _ in rows], self.m) < len(rows):
            raise ValueError("The rows of a stabilizer tableau must be independent!")

    def monomials(self) -> list[QuditMonomial]:
        return [s for s, _ in self.rows]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "rows": [dict(s.to_dict(), eigen_exp=e) for s, e in self.rows],
        }

    @classmethod
    def from_dict(cls, data: dict) -> StabilizerTableau:
        n, m = int(data["n"]), int(data["m"])
        rows = tuple(
            (QuditMonomial(m, row["phase_exp"], tuple(row["x_exp"]), tuple(row["z_exp"])), row["eigen_exp"])
            for row in data["rows"]
        )
        return cls(n, m, rows)


def commutant_generators(n: int, m: int) -> list[QuditMonomial]:
    """Ũ_i (i = 1..n−1), X_1Z_1 and X_nZ_n^{-1}; each commutes with every U_i."""
    gens = [u_tilde_op(n, m, i) for i in range(1, n)]
    gens.append(QuditMonomial.from_sites(n, m, x={1: 1}, z={1: 1}))
    gens.append(QuditMonomial.from_sites(n, m, x={n: 1}, z={n: -1}))
    return gens


def init_pair_tableau(n: int, m: int) -> StabilizerTableau:
    """The state of n Xe anyons created in pairs (2j−1, 2j) from the vacuum:
    rows U_{2j−1} and Ũ_{2j−1} per pair plus X_nZ_n^{-1} for odd n,
    all with eigenvalue 1.

    :param n: The number of qudits, at least 2.
    :param m: A prime modulus.
    """
    if n < 2:
        raise ValueError(f"A pair tableau needs at least 2 qudits, got {n}!")
    _require_prime(m)
    rows = []
    for i in range(1, n, 2):
        rows.append((u_op(n, m, i), 0))
        rows.append((u_tilde_op(n, m, i), 0))
    if n % 2:
        rows.append((QuditMonomial.from_sites(n, m, x={n: 1}, z={n: -1}), 0))
    return StabilizerTableau(n, m, tuple(rows))


def evolve_tableau(tableau: StabilizerTableau, braid: BraidWord) -> StabilizerTableau:
    """Stabilizers of ρ(b)|ψ⟩: every row S becomes ρ(b) S ρ(b)†.

    :param tableau: The stabilizer tableau of |ψ⟩.
    :param braid: A braid word on tableau.n strands.
    """
    if braid.strands != tableau.n:
        raise ValueError(f"A braid on {braid.strands} strands does not act on {tableau.n} qudits!")
    inverse = braid.inverse()
    rows = tuple((conjugate(s, inverse), e) for s, e in tableau.rows)
    return StabilizerTableau(tableau.n, tableau.m, rows)


@dataclass(frozen=True)
class Measurement:
    outcome: int
    deterministic: bool
    updated: StabilizerTableau

    def to_dict(self) -> dict:
        return {
            "outcome_exp": self.outcome,
            "deterministic": self.deterministic,
            "updated": self.updated.to_dict(),
        }


def measure_monomial(
    tableau: StabilizerTableau, target: QuditMonomial, rng: np.random.Generator | int | None = None
) -> Measurement:
    """Measure the eigenvalue ω^e of a monomial on a stabilizer state.

    :param tableau: A stabilizer tableau over a prime modulus.
    :param target: The measured monomial (even ζ-phase).
    :param rng: A numpy Generator or a seed.
    :return: A Measurement holding the outcome exponent e and the post-measurement tableau.
    """
    p = tableau.m
    _require_prime(p)
    _require_unitary(target)
    if target.n != tableau.n or target.m != p:
        raise ValueError("The measured monomial does not match the tableau!")
    rng = np.random.default_rng(rng)
    rows = list(tableau.rows)
    s = [symp(row, target) for row, _ in rows]
    if not any(s):
        coeffs = _solve_mod_p([row.vector() for row, _ in rows], target.vector(), p)
        if coeffs is None:
            raise ValueError("incomplete tableau: the monomial commutes with every row but is not in their span")
        product = QuditMonomial.identity(tableau.n, p)
        outcome = 0
        for (row, e), c in zip(rows, coeffs):
            product = product * row**c
            outcome += c * e
        outcome = ((target.phase - product.phase) // 2 + outcome) % p
        logger.debug("Deterministic outcome {} for {}", outcome, target)
        return Measurement(outcome, True, tableau)
    pivot = next(k for k, v in enumerate(s) if v)
    pivot_row, pivot_eigen = rows[pivot]
    inv = pow(s[pivot], -1, p)
    for k, (row, e) in enumerate(rows):
        if k == pivot or not s[k]:
            continue
        c = -s[k] * inv % p
        rows[k] = (row * pivot_row**c, e + c * pivot_eigen)
    outcome = int(rng.integers(p))
    rows[pivot] = (target, outcome)
    return Measurement(outcome, False, StabilizerTableau(tableau.n, p, tuple(rows)))


def projector(target: QuditMonomial, outcome: int) -> np.ndarray:
    """Dense projector (1/m) Σ_j (ω^{−e} T)^j onto the ω^e eigenspace of T."""
    mat = target.to_dense() * cmath.exp(-2j * math.pi * outcome / target.m)
    total = np.zeros_like(mat)
    power = np.eye(mat.shape[0], dtype=complex)
    for _ in range(target.m):
        total += power
        power = power @ mat
    return total / target.m


def tableau_state(tableau: StabilizerTableau) -> np.ndarray:
    """Dense unit vector stabilized by a complete tableau."""
    dim = tableau.m**tableau.n
    proj = np.eye(dim, dtype=complex)
    for s, e in tableau.rows:
        proj = proj @ projector(s, e)
    col = int(np.argmax(np.linalg.norm(proj, axis=0)))
    vec = proj[:, col]
    return vec / np.linalg.norm(vec)


def heisenberg_images(braid: BraidWord, m: int) -> dict[str, str]:
    """Heisenberg images of every U_i, X_i and Z_i under a braid."""
    n = braid.strands
    ops = {f"U{i}": u_op(n, m, i) for i in range(1, n)}
    ops.update({f"X{i}": shift_op(n, m, i) for i in range(1, n + 1)})
    ops.update({f"Z{i}": clock_op(n, m, i) for i in range(1, n + 1)})
    return {name: str(conjugate(op, braid)) for name, op in ops.items()}
