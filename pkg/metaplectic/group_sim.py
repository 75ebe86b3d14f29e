"""Polynomial-space exact simulation of the qubit representation of Y1
braiding. A braid image is stored as A·C where A is a product of exponentials
exp(iπe/m · S_{k,l}) of commuting interval operators and C is a signed
CNOT-circuit Clifford C|x⟩ = (−1)^{c·x}|Ax⟩.
"""

from __future__ import annotations
from dataclasses import dataclass
from functools import cached_property, reduce
import math
import numpy as np
from loguru import logger
from tqdm import tqdm
from .braid import BraidWord

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _mat_inv_f2(mat: np.ndarray) -> np.ndarray:
    q = mat.shape[0]
    aug = np.concatenate([mat % 2, np.eye(q, dtype=np.int64)], axis=1)
    for col in range(q):
        pivots = np.nonzero(aug[col:, col])[0]
        if not len(pivots):
            raise ValueError("The matrix is not invertible over F_2!")
        pivot = col + pivots[0]
        aug[[col, pivot]] = aug[[pivot, col]]
        for row in range(q):
            if row != col and aug[row, col]:
                aug[row] ^= aug[col]
    return aug[:, q:]


@dataclass(frozen=True)
class PauliWord:
    """The operator i^phase · X^x · Z^z on q qubits (qubit 1 first)."""

    phase: int
    x: tuple[int, ...]
    z: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "phase", self.phase % 4)
        object.__setattr__(self, "x", tuple(int(v) % 2 for v in self.x))
        object.__setattr__(self, "z", tuple(int(v) % 2 for v in self.z))

    @property
    def q(self) -> int:
        return len(self.x)

    def __mul__(self, other: PauliWord) -> PauliWord:
        flips = sum(a & b for a, b in zip(self.z, other.x))
        return PauliWord(
            self.phase + other.phase + 2 * flips,
            tuple(a ^ b for a, b in zip(self.x, other.x)),
            tuple(a ^ b for a, b in zip(self.z, other.z)),
        )

    def to_dense(self) -> np.ndarray:
        xs = reduce(np.kron, [_X if v else np.eye(2) for v in self.x], np.eye(1))
        zs = reduce(np.kron, [_Z if v else np.eye(2) for v in self.z], np.eye(1))
        return (1j**self.phase) * (xs @ zs)

    def __str__(self) -> str:
        sign = {0: "+", 1: "+i", 2: "-", 3: "-i"}[self.phase]
        body = "".join(f"X{k + 1}" for k, v in enumerate(self.x) if v)
        body += "".join(f"Z{k + 1}" for k, v in enumerate(self.z) if v)
        return sign + (body or "I")


def s_word(q: int, m: int, k: int, l: int) -> PauliWord:
    """The Hermitian interval operator S_{k,l} = X^{[k,l]} Z^b with coefficient +1,
    b = e_{k−1}+e_k+e_l+e_{l+1} (k < l) or e_{k−1}+e_{k+1} (k = l) for m >= 5
    and b = 0 for m = 3, indexes outside 1..q dropped.
    """
    if not 1 <= k <= l <= q:
        raise ValueError(f"Interval ({k}, {l}) is out of range for {q} qubits!")
    x = [1 if k <= j <= l else 0 for j in range(1, q + 1)]
    z = [0] * q
    if m != 3:
        sites = (k - 1, k, l, l + 1) if k < l else (k - 1, k + 1)
        for site in sites:
            if 1 <= site <= q:
                z[site - 1] ^= 1
    return PauliWord(0, tuple(x), tuple(z))


def identify_s(word: PauliWord, m: int) -> tuple[tuple[int, int], int]:
    """Recognize ±S_{k,l}.

    :return: ((k, l), sign).
    :raises RuntimeError: If the word is not a signed interval operator.
    """
    support = [j + 1 for j, v in enumerate(word.x) if v]
    if not support or support != list(range(support[0], support[-1] + 1)):
        raise RuntimeError(f"{word} is not an interval operator!")
    k, l = support[0], support[-1]
    if s_word(word.q, m, k, l).z != word.z or word.phase % 2:
        raise RuntimeError(f"{word} is not an interval operator!")
    return (k, l), 1 if word.phase == 0 else -1


@dataclass(frozen=True)
class Clifford:
    """C|x⟩ = (−1)^{c·x}|Ax⟩ with A invertible over F_2."""

    A: tuple[tuple[int, ...], ...]
    c: tuple[int, ...]

    @property
    def q(self) -> int:
        return len(self.c)

    @classmethod
    def identity(cls, q: int) -> Clifford:
        return cls.from_arrays(np.eye(q, dtype=np.int64), np.zeros(q, dtype=np.int64))

    @classmethod
    def from_arrays(cls, A: np.ndarray, c: np.ndarray) -> Clifford:
        A, c = np.asarray(A) % 2, np.asarray(c) % 2
        return cls(tuple(tuple(int(v) for v in row) for row in A), tuple(int(v) for v in c))

    @cached_property
    def matrix(self) -> np.ndarray:
        return np.array(self.A, dtype=np.int64).reshape(self.q, self.q)

    @cached_property
    def signs(self) -> np.ndarray:
        return np.array(self.c, dtype=np.int64)

    @cached_property
    def matrix_inv(self) -> np.ndarray:
        return _mat_inv_f2(self.matrix)

    def __matmul__(self, other: Clifford) -> Clifford:
        # C1C2|x⟩ = (−1)^{(c2 + A2ᵀc1)·x} |A1A2x⟩
        return Clifford.from_arrays(
            self.matrix @ other.matrix, other.signs + other.matrix.T @ self.signs
        )

    def inverse(self) -> Clifford:
        inv = self.matrix_inv
        return Clifford.from_arrays(inv, inv.T @ self.signs)

    def conjugate(self, word: PauliWord) -> PauliWord:
        """C P C† for a Pauli word P."""
        a, b = np.array(word.x), np.array(word.z)
        phase = word.phase + 2 * int(self.signs @ a)
        return PauliWord(phase, tuple(self.matrix @ a), tuple(self.matrix_inv.T @ b))

    def to_dense(self) -> np.ndarray:
        q = self.q
        dim = 1 << q
        mat = np.zeros((dim, dim), dtype=complex)
        weights = 1 << np.arange(q - 1, -1, -1)
        for idx in range(dim):
            x = (idx >> np.arange(q - 1, -1, -1)) & 1
            y = self.matrix @ x % 2
            mat[int(weights @ y), idx] = -1 if int(self.signs @ x) % 2 else 1
        return mat

    def tableau(self) -> list[dict[str, str]]:
        """Signed Pauli images C X_k C† and C Z_k C† for every qubit."""
        rows = []
        for k in range(self.q):
            e = tuple(int(j == k) for j in range(self.q))
            zero = (0,) * self.q
            rows.append(
                {
                    "X": str(self.conjugate(PauliWord(0, e, zero))),
                    "Z": str(self.conjugate(PauliWord(0, zero, e))),
                }
            )
        return rows


def not_gate(q: int, i: int, signs: tuple[int, ...] = ()) -> Clifford:
    """The XOR-controlled NOT centered at qubit i: x_i ^= x_{i−1} ⊕ x_{i+1},
    missing boundary controls fixed to 0. Optional sign qubits multiply by Z's.
    """
    A = np.eye(q, dtype=np.int64)
    for j in (i - 1, i + 1):
        if 1 <= j <= q:
            A[i - 1, j - 1] = 1
    c = np.zeros(q, dtype=np.int64)
    for j in signs:
        if 1 <= j <= q:
            c[j - 1] ^= 1
    return Clifford.from_arrays(A, c)


@dataclass(frozen=True)
class AbelianElement:
    """sign · Π exp(iπe/m · S_{k,l}) with exponents canonical in [0, m)."""

    q: int
    m: int
    sign: int
    exps: tuple[tuple[int, int, int], ...]

    @classmethod
    def build(cls, q: int, m: int, sign: int, exps: dict[tuple[int, int], int]) -> AbelianElement:
        canonical = []
        for (k, l), e in sorted(exps.items()):
            e %= 2 * m
            # exp(iπ S) = −1
            if e >= m:
                e -= m
                sign = -sign
            if e:
                canonical.append((k, l, e))
        return cls(q, m, sign, tuple(canonical))

    @classmethod
    def identity(cls, q: int, m: int) -> AbelianElement:
        return cls(q, m, 1, ())

    def as_dict(self) -> dict[tuple[int, int], int]:
        return {(k, l): e for k, l, e in self.exps}

    def __mul__(self, other: AbelianElement) -> AbelianElement:
        exps = self.as_dict()
        for key, e in other.as_dict().items():
            exps[key] = exps.get(key, 0) + e
        return AbelianElement.build(self.q, self.m, self.sign * other.sign, exps)

    def inverse(self) -> AbelianElement:
        return AbelianElement.build(
            self.q, self.m, self.sign, {key: -e for key, e in self.as_dict().items()}
        )

    def conjugate_by(self, cliff: Clifford) -> AbelianElement:
        """C A C†: every S_{k,l} is carried to another signed S interval."""
        exps: dict[tuple[int, int], int] = {}
        for k, l, e in self.exps:
            key, sign = identify_s(cliff.conjugate(s_word(self.q, self.m, k, l)), self.m)
            exps[key] = exps.get(key, 0) + sign * e
        return AbelianElement.build(self.q, self.m, self.sign, exps)

    def to_dense(self) -> np.ndarray:
        dim = 1 << self.q
        mat = self.sign * np.eye(dim, dtype=complex)
        for k, l, e in self.exps:
            theta = math.pi * e / self.m
            s = s_word(self.q, self.m, k, l).to_dense()
            mat = mat @ (math.cos(theta) * np.eye(dim) + 1j * math.sin(theta) * s)
        return mat


@dataclass(frozen=True)
class GroupElement:
    """The operator a·c with a abelian and c a signed CNOT circuit."""

    a: AbelianElement
    c: Clifford

    @property
    def q(self) -> int:
        return self.a.q

    @property
    def m(self) -> int:
        return self.a.m

    @classmethod
    def identity(cls, q: int, m: int) -> GroupElement:
        return cls(AbelianElement.identity(q, m), Clifford.identity(q))

    def to_dense(self) -> np.ndarray:
        return self.a.to_dense() @ self.c.to_dense()

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "m": self.m,
            "sign": self.a.sign,
            "exps": [list(t) for t in self.a.exps],
            "tableau": self.c.tableau(),
        }


def multiply(g1: GroupElement, g2: GroupElement) -> GroupElement:
    """(A1C1)(A2C2) = (A1 · C1A2C1†)(C1C2)."""
    if (g1.q, g1.m) != (g2.q, g2.m):
        raise ValueError(f"Mismatched elements: (q={g1.q}, m={g1.m}) vs (q={g2.q}, m={g2.m})!")
    return GroupElement(g1.a * g2.a.conjugate_by(g1.c), g1.c @ g2.c)


def inverse(g: GroupElement) -> GroupElement:
    """(AC)^{-1} = (C^{-1}A^{-1}C)C^{-1}."""
    cinv = g.c.inverse()
    return GroupElement(g.a.inverse().conjugate_by(cinv), cinv)


def generator_element(i: int, m: int, q: int) -> GroupElement:
    """The image of the 3-qubit Y1 R-matrix centered at qubit i.
    For m >= 5 it is V_i·NOT_i with V_i = exp(iπ/m · Z_{i−1}X_iZ_{i+1}); for m = 3
    it is V_i²·Z_{i−1}Z_{i+1}·NOT_i with V_i = exp(iπ/3 · X_i).

    :param i: The center qubit, 1 <= i <= q.
    :param m: An odd integer >= 3.
    :param q: The number of qubits.
    """
    if not 1 <= i <= q:
        raise ValueError(f"Center qubit {i} is out of range for {q} qubits!")
    if m < 3 or m % 2 == 0:
        raise ValueError(f"m must be an odd integer >= 3, got {m}!")
    if m == 3:
        abelian = AbelianElement.build(q, m, 1, {(i, i): 2})
        cliff = not_gate(q, i, (i - 1, i + 1))
    else:
        abelian = AbelianElement.build(q, m, 1, {(i, i): 1})
        cliff = not_gate(q, i)
    return GroupElement(abelian, cliff)


def braid_to_element(braid: BraidWord, m: int) -> GroupElement:
    """The image of a braid on n strands acting on q = n+1 qubits;
    σ_i is centered at qubit i+1.
    """
    q = braid.strands + 1
    gens = {}
    result = GroupElement.identity(q, m)
    for g in braid.letters:
        if g not in gens:
            gen = generator_element(abs(g) + 1, m, q)
            gens[g] = gen if g > 0 else inverse(gen)
        result = multiply(result, gens[g])
    return result


def pullback_s(g: GroupElement, k: int, l: int) -> tuple[tuple[int, int], int]:
    """g† S_{k,l} g as a signed interval operator; the abelian factor commutes with S."""
    word = s_word(g.q, g.m, k, l)
    return identify_s(g.c.inverse().conjugate(word), g.m)


def enumerate_group(
    m: int, q: int, max_order: int = 100_000, progress: bool = False
) -> tuple[int, bool]:
    """Close the braid generators (centers 2..q−1) and their inverses under
    multiplication.

    :return: (number of distinct elements, whether the closure terminated).
    """
    gens = []
    for i in range(2, q):
        gen = generator_element(i, m, q)
        gens.extend([gen, inverse(gen)])
    identity = GroupElement.identity(q, m)
    seen = {identity}
    frontier = [identity]
    with tqdm(total=max_order, desc="group", disable=not progress) as pbar:
        while frontier:
            new_frontier = []
            for elem in frontier:
                for gen in gens:
                    cand = multiply(elem, gen)
                    if cand in seen:
                        continue
                    seen.add(cand)
                    new_frontier.append(cand)
                    pbar.update(1)
                    if len(seen) > max_order:
                        return len(seen), False
            frontier = new_frontier
    logger.info("The Y1 image group for m = {} on {} qubits has {} elements.", m, q, len(seen))
    return len(seen), True
