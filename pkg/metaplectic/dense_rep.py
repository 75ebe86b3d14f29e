"""Dense matrix realizations of the R-matrices and of braid group
representations built from them. These are the brute-force oracle for the
polynomial-time simulators.
"""

from __future__ import annotations
from dataclasses import dataclass
from enum import Enum
from itertools import product
import cmath
import math
import numpy as np
from loguru import logger
from tqdm import tqdm
from .braid import BraidWord
from .utils import check_limit

TOL = 1e-9


class Family(Enum):
    """Families of R-matrices."""

    GAUSSIAN = "gaussian"
    POTTS = "potts"
    Y1 = "y1"
    ISING = "ising"


@dataclass(frozen=True)
class RMatrixKind:
    """An R-matrix family together with its modulus m (unused for IsingBell)."""

    family: Family
    m: int = 0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.family != Family.ISING and (self.m < 3 or self.m % 2 == 0):
            raise ValueError(f"m must be an odd integer >= 3, got {self.m}!")

    @classmethod
    def gaussian(cls, m: int) -> RMatrixKind:
        return cls(Family.GAUSSIAN, m)

    @classmethod
    def potts(cls, m: int) -> RMatrixKind:
        return cls(Family.POTTS, m)

    @classmethod
    def y1(cls, m: int) -> RMatrixKind:
        return cls(Family.Y1, m)

    @classmethod
    def ising(cls) -> RMatrixKind:
        return cls(Family.ISING, 0)

    @property
    def locality(self) -> int:
        return 3 if self.family == Family.Y1 else 2

    @property
    def local_dim(self) -> int:
        """Dimension of a single site."""
        if self.family in (Family.Y1, Family.ISING):
            return 2
        return self.m

    @property
    def unitary(self) -> bool:
        return self.family != Family.POTTS or self.m == 3

    def sites(self, n: int) -> int:
        """Number of sites carrying the representation of B_n."""
        return n + 1 if self.family == Family.Y1 else n

    def dim(self, n: int) -> int:
        return self.local_dim ** self.sites(n)

    def __str__(self) -> str:
        if self.family == Family.ISING:
            return "ising"
        return f"{self.family.value}({self.m})"


def omega(m: int) -> complex:
    return cmath.exp(2j * math.pi / m)


def shift(m: int) -> np.ndarray:
    """The shift operator X|j⟩ = |j+1⟩."""
    return np.roll(np.eye(m, dtype=complex), 1, axis=0)


def clock(m: int) -> np.ndarray:
    """The clock operator Z|j⟩ = ω^j|j⟩."""
    return np.diag([omega(m) ** j for j in range(m)])


def embed(op: np.ndarray, site: int, sites: int, local_dim: int) -> np.ndarray:
    """Place a k-site operator on sites site, ..., site+k-1 (0-based) of a
    register, the first site being the most significant.
    """
    width = round(math.log(op.shape[0], local_dim))
    left = np.eye(local_dim**site, dtype=complex)
    right = np.eye(local_dim ** (sites - site - width), dtype=complex)
    return np.kron(np.kron(left, op), right)


def u_operator(m: int) -> np.ndarray:
    """U(e_i ⊗ e_j) = ω^{i−j} e_{i+1} ⊗ e_{j+1}, i.e. U = X_1X_2Z_1Z_2^{-1}."""
    x, z = shift(m), clock(m)
    return np.kron(x, x) @ np.kron(z, z.conj().T)


def potts_parameter(m: int) -> complex:
    """The root of t + 1/t + 2 = m used by the Potts representation."""
    return ((m - 2) - cmath.sqrt(m * (m - 4))) / 2


def y1_matrix(m: int) -> np.ndarray:
    """The 8×8 R-matrix of Y_1 on qubits (x_1, x_2, x_3), x_1 most significant."""
    c, s = math.cos(math.pi / m), math.sin(math.pi / m)
    nu = -1 if m == 3 else 1
    b0 = np.array(
        [
            [nu * c, 0, 1j * s, 0],
            [0, -1j * s, 0, c],
            [1j * s, 0, nu * c, 0],
            [0, c, 0, -1j * s],
        ],
        dtype=complex,
    )
    b1 = np.array(
        [
            [-1j * s, 0, c, 0],
            [0, nu * c, 0, 1j * s],
            [c, 0, -1j * s, 0],
            [0, 1j * s, 0, nu * c],
        ],
        dtype=complex,
    )
    mat = np.zeros((8, 8), dtype=complex)
    mat[:4, :4] = b0
    mat[4:, 4:] = b1
    return mat


ISING_BELL = np.array(
    [[1, 0, 0, 1], [0, 1, -1, 0], [0, 1, 1, 0], [-1, 0, 0, 1]], dtype=complex
) / math.sqrt(2)


def build_r_matrix(kind: RMatrixKind) -> np.ndarray:
    """Build the local R-matrix of a family (global phases omitted).

    :param kind: The R-matrix family.
    :return: An m²×m², 8×8 or 4×4 complex matrix.
    """
    m = kind.m
    if kind.family == Family.GAUSSIAN:
        u = u_operator(m)
        w = omega(m)
        return sum(
            w ** (j * j) * np.linalg.matrix_power(u, j) for j in range(m)
        ) / math.sqrt(m)
    if kind.family == Family.POTTS:
        u = u_operator(m)
        t = potts_parameter(m)
        total = sum(np.linalg.matrix_power(u, j) for j in range(m))
        return (t + 1) / m * total - np.eye(m * m)
    if kind.family == Family.Y1:
        return y1_matrix(m)
    return ISING_BELL.copy()


def generator_matrix(
    kind: RMatrixKind, n: int, i: int, r_matrix: np.ndarray | None = None
) -> np.ndarray:
    """ρ(σ_i) for the representation of B_n.

    :param kind: The R-matrix family.
    :param n: The number of strands.
    :param i: The generator index, 1 <= i <= n-1.
    :param r_matrix: An optional replacement of the local R-matrix.
    """
    if not 1 <= i <= n - 1:
        raise ValueError(f"Generator index {i} is out of range for B_{n}!")
    r = build_r_matrix(kind) if r_matrix is None else r_matrix
    return embed(r, i - 1, kind.sites(n), kind.local_dim)


def _check_dim(kind: RMatrixKind, n: int, max_dim: int) -> None:
    if n < 2:
        raise ValueError(f"The braid group B_{n} has no generators; use n >= 2.")
    check_limit(
        kind.dim(n),
        max_dim,
        "dense dimension",
        "Use the heisenberg or group engine for larger registers.",
    )


def represent_braid(
    braid: BraidWord,
    kind: RMatrixKind,
    max_dim: int = 4096,
    r_matrix: np.ndarray | None = None,
) -> np.ndarray:
    """The dense image ρ(b) = ρ(g_1)ρ(g_2)...ρ(g_k) of a braid word.

    :param braid: A braid word on n >= 2 strands.
    :param kind: The R-matrix family.
    :param max_dim: The largest dense dimension allowed.
    :param r_matrix: An optional replacement of the local R-matrix.
    :return: A complex matrix.
    """
    n = braid.strands
    _check_dim(kind, n, max_dim)
    r = build_r_matrix(kind) if r_matrix is None else r_matrix
    r_inv = r.conj().T if kind.unitary and r_matrix is None else np.linalg.inv(r)
    result = np.eye(kind.dim(n), dtype=complex)
    for g in braid.letters:
        local = r if g > 0 else r_inv
        result = result @ embed(local, abs(g) - 1, kind.sites(n), kind.local_dim)
    return result


def unitarity_residual(mat: np.ndarray) -> float:
    return float(np.linalg.norm(mat.conj().T @ mat - np.eye(mat.shape[0]), 2))


def phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Operator-norm distance between a and b after aligning global phases
    by the argument of tr(b†a).
    """
    overlap = np.trace(b.conj().T @ a)
    phase = overlap / abs(overlap) if abs(overlap) > TOL else 1.0
    return float(np.linalg.norm(a - phase * b, 2))


@dataclass(frozen=True)
class BraidReport:
    yang_baxter_residual: float
    far_commutation_residual: float

    def to_dict(self) -> dict:
        return {
            "yang_baxter_residual": self.yang_baxter_residual,
            "far_commutation_residual": self.far_commutation_residual,
        }


def check_braid_relations(
    kind: RMatrixKind,
    n: int,
    r_matrix: np.ndarray | None = None,
    max_dim: int = 4096,
) -> BraidReport:
    """Largest residuals of the braid relations in the representation of B_n.

    :param kind: The R-matrix family.
    :param n: The number of strands.
    :param r_matrix: An optional replacement of the local R-matrix.
    :param max_dim: The largest dense dimension allowed.
    :return: A BraidReport.
    """
    _check_dim(kind, n, max_dim)
    gens = [generator_matrix(kind, n, i, r_matrix) for i in range(1, n)]
    yb = 0.0
    for i in range(len(gens) - 1):
        a, b = gens[i], gens[i + 1]
        yb = max(yb, float(np.linalg.norm(a @ b @ a - b @ a @ b, 2)))
    far = 0.0
    for i, j in product(range(len(gens)), repeat=2):
        if j - i >= 2:
            a, b = gens[i], gens[j]
            far = max(far, float(np.linalg.norm(a @ b - b @ a, 2)))
    logger.debug("Braid relation residuals for {} on {} strands: {}, {}", kind, n, yb, far)
    return BraidReport(yb, far)


PAULIS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_matrix(word: str) -> np.ndarray:
    mat = np.eye(1, dtype=complex)
    for ch in word:
        mat = np.kron(mat, PAULIS[ch])
    return mat


def pauli_images(r: np.ndarray) -> dict[str, tuple[int, str]]:
    """Signed Pauli images R P R† of every Pauli word P on the qubits of R.

    :param r: A unitary acting on a register of qubits.
    :return: A dict mapping each Pauli word to (sign, image word).
    :raises ValueError: If some image is not a signed Pauli word.
    """
    qubits = round(math.log2(r.shape[0]))
    words = ["".join(w) for w in product("IXYZ", repeat=qubits)]
    images = {}
    for word in words:
        image = r @ pauli_matrix(word) @ r.conj().T
        for target in words:
            coeff = np.trace(pauli_matrix(target).conj().T @ image) / r.shape[0]
            if abs(abs(coeff) - 1) < TOL:
                sign = 1 if coeff.real > 0 else -1
                if np.allclose(image, sign * pauli_matrix(target), atol=TOL):
                    images[word] = (sign, target)
                    break
        else:
            raise ValueError(f"The image of {word} is not a signed Pauli word!")
    return images


def _canonical_phase(mat: np.ndarray) -> np.ndarray:
    flat = mat.ravel()
    idx = int(np.argmax(np.abs(flat) > TOL))
    return mat * (abs(flat[idx]) / flat[idx])


KEY_DIGITS = 6


def _keys(mat: np.ndarray) -> tuple[bytes, list[bytes]]:
    """Hash keys of a matrix rounded to KEY_DIGITS decimals.

    :return: The key of the plain rounding and every key reachable by
        rounding the entries within TOL of a rounding boundary the other way,
        so matrices equal up to TOL always find each other.
    """
    scaled = np.stack([mat.real, mat.imag]).ravel() * 10**KEY_DIGITS
    base = np.round(scaled) + 0.0
    near = np.flatnonzero(np.abs(scaled - np.floor(scaled) - 0.5) < TOL * 10**KEY_DIGITS)
    keys = []
    for bits in product((0, 1), repeat=len(near)):
        alt = base.copy()
        alt[near] = np.floor(scaled[near]) + np.array(bits, dtype=float)
        keys.append((alt + 0.0).tobytes())
    return base.tobytes(), keys


@dataclass(frozen=True)
class ImageGroup:
    order_up_to_phase: int
    terminated: bool

    def to_dict(self) -> dict:
        return {"order_up_to_phase": self.order_up_to_phase, "terminated": self.terminated}


def enumerate_image_group(
    kind: RMatrixKind,
    n: int,
    max_order: int = 100_000,
    max_dim: int = 4096,
    progress: bool = False,
) -> ImageGroup:
    """Close the generators ρ(σ_i)^{±1} under multiplication, identifying
    matrices that agree up to a global phase.

    :param kind: The R-matrix family.
    :param n: The number of strands.
    :param max_order: Stop once more than this many elements are found.
    :param max_dim: The largest dense dimension allowed.
    :param progress: Whether to show a progress bar.
    :return: An ImageGroup; terminated is False if max_order was exceeded.
    """
    _check_dim(kind, n, max_dim)
    gens = []
    for i in range(1, n):
        g = generator_matrix(kind, n, i)
        gens.extend([g, np.linalg.inv(g)])
    identity = np.eye(kind.dim(n), dtype=complex)
    seen: dict[bytes, list[np.ndarray]] = {_keys(identity)[0]: [identity]}
    frontier = [identity]
    count = 1
    with tqdm(total=max_order, desc="image group", disable=not progress) as pbar:
        while frontier:
            new_frontier = []
            for elem in frontier:
                for g in gens:
                    cand = _canonical_phase(elem @ g)
                    primary, keys = _keys(cand)
                    if any(
                        np.allclose(cand, other, rtol=0, atol=TOL)
                        for key in keys
                        for other in seen.get(key, ())
                    ):
                        continue
                    seen.setdefault(primary, []).append(cand)
                    new_frontier.append(cand)
                    count += 1
                    pbar.update(1)
                    if count > max_order:
                        logger.info("Image group of {} on {} strands exceeds {} elements.", kind, n, max_order)
                        return ImageGroup(count, False)
            frontier = new_frontier
    logger.info("Image group of {} on {} strands has {} elements up to phase.", kind, n, count)
    return ImageGroup(count, True)
