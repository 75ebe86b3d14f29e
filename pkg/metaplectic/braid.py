"""Braid words and the topology of their trace and plat closures.
"""

from __future__ import annotations
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
import re
import numpy as np


class Closure(Enum):
    """Ways of closing a braid into a link."""

    TRACE = "trace"
    PLAT = "plat"


@dataclass(frozen=True)
class BraidWord:
    """A word in the braid group B_n. A letter g stands for σ_{|g|}^{sign(g)}."""

    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise ValueError(f"Malformed header: the number of strands must be positive, got {self.strands}!")
        object.__setattr__(self, "letters", tuple(int(g) for g in self.letters))
        for g in self.letters:
            if g == 0 or abs(g) >= self.strands:
                raise ValueError(
                    f"Malformed generator {g}: indexes must satisfy 1 <= |g| <= {self.strands - 1}!"
                )

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: BraidWord) -> BraidWord:
        if self.strands != other.strands:
            raise ValueError(f"Cannot concatenate braids on {self.strands} and {other.strands} strands!")
        return BraidWord(self.strands, self.letters + other.letters)

    def inverse(self) -> BraidWord:
        return BraidWord(self.strands, tuple(-g for g in reversed(self.letters)))

    def __str__(self) -> str:
        return format_braid(self)


def parse_braid(text: str) -> BraidWord:
    """Parse the text format "n=<strands>" followed by whitespace-separated letters.

    :param text: The text to parse.
    :return: A BraidWord.
    """
    match = re.match(r"\s*n\s*=\s*(-?\d+)\s*", text)
    if not match:
        raise ValueError("Malformed header: a braid file must start with n=<strands>!")
    body = text[match.end():].split()
    try:
        letters = tuple(int(tok) for tok in body)
    except ValueError as err:
        raise ValueError(f"Malformed generator in braid body: {err}") from err
    return BraidWord(int(match.group(1)), letters)


def format_braid(braid: BraidWord) -> str:
    return f"n={braid.strands}\n" + " ".join(str(g) for g in braid.letters) + "\n"


def read_braid(path: str | Path) -> BraidWord:
    """Read a braid from a file in the text format.

    :param path: Path to a braid file.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"The braid file {path} does not exist!")
    return parse_braid(path.read_text(encoding="utf-8"))


def permutation(braid: BraidWord) -> tuple[int, ...]:
    """The permutation of the braid: the strand starting at top position s
    (0-based) ends at bottom position perm[s].
    """
    strand_at = list(range(braid.strands))
    for g in braid.letters:
        i = abs(g)
        strand_at[i - 1], strand_at[i] = strand_at[i], strand_at[i - 1]
    perm = [0] * braid.strands
    for pos, strand in enumerate(strand_at):
        perm[strand] = pos
    return tuple(perm)


@dataclass(frozen=True)
class Components:
    """Components of a closure. Strands are identified by their top position;
    labels[s] is the component of strand s and orientation[s] is +1 when the
    strand is traversed downward, -1 otherwise.
    """

    count: int
    labels: tuple[int, ...]
    orientation: tuple[int, ...]

    def strands_of(self, component: int) -> list[int]:
        return [s for s, c in enumerate(self.labels) if c == component]


def closure_components(braid: BraidWord, kind: Closure = Closure.TRACE) -> Components:
    """Partition the strands of a braid into the components of its closure.

    :param braid: A braid word.
    :param kind: Trace or plat closure.
    :return: A Components object, components numbered by smallest top position.
    """
    n = braid.strands
    perm = permutation(braid)
    labels = [-1] * n
    orientation = [1] * n
    count = 0
    if kind == Closure.TRACE:
        for start in range(n):
            if labels[start] >= 0:
                continue
            s = start
            while labels[s] < 0:
                labels[s] = count
                s = perm[s]
            count += 1
        return Components(count, tuple(labels), tuple(orientation))
    if n % 2:
        raise ValueError(f"A plat closure needs an even number of strands, got {n}!")
    inv = [0] * n
    for s, pos in enumerate(perm):
        inv[pos] = s
    for start in range(n):
        if labels[start] >= 0:
            continue
        s, o = start, 1
        while True:
            labels[s] = count
            orientation[s] = o
            if o == 1:
                s, o = inv[perm[s] ^ 1], -1
            else:
                s, o = s ^ 1, 1
                if s == start:
                    break
        count += 1
    return Components(count, tuple(labels), tuple(orientation))


@dataclass(frozen=True)
class LinkingMatrix:
    """Pairwise linking numbers of the components of a link."""

    components: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.int64).reshape(
            self.components, self.components
        )
        if (arr != arr.T).any():
            raise ValueError("A linking matrix must be symmetric!")
        if np.diag(arr).any():
            raise ValueError("A linking matrix must have a zero diagonal!")
        object.__setattr__(self, "entries", tuple(tuple(int(x) for x in row) for row in arr))

    @classmethod
    def from_array(cls, arr) -> LinkingMatrix:
        arr = np.asarray(arr, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"A linking matrix must be square, got shape {arr.shape}!")
        return cls(arr.shape[0], tuple(map(tuple, arr)))

    @classmethod
    def from_dict(cls, data: dict) -> LinkingMatrix:
        """Build from the JSON form {"components": c, "linking": [[...]]}."""
        c = int(data["components"])
        entries = data.get("linking") or [[0] * c for _ in range(c)]
        lk = cls.from_array(entries) if c else cls(0, ())
        if lk.components != c:
            raise ValueError(f"Expected a {c}x{c} linking matrix, got {lk.components}x{lk.components}!")
        return lk

    def to_array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=np.int64).reshape(
            self.components, self.components
        )

    def to_dict(self) -> dict:
        return {"components": self.components, "linking": [list(row) for row in self.entries]}


def linking_matrix(braid: BraidWord, kind: Closure = Closure.TRACE) -> LinkingMatrix:
    """Linking numbers between the components of a closure.
    Every crossing between distinct components contributes sign(g) times the
    orientations of the two strands; the total is halved.

    :param braid: A braid word.
    :param kind: Trace or plat closure.
    :return: A LinkingMatrix.
    """
    comps = closure_components(braid, kind)
    total = np.zeros((comps.count, comps.count), dtype=np.int64)
    strand_at = list(range(braid.strands))
    for g in braid.letters:
        i = abs(g)
        a, b = strand_at[i - 1], strand_at[i]
        ca, cb = comps.labels[a], comps.labels[b]
        if ca != cb:
            sign = (1 if g > 0 else -1) * comps.orientation[a] * comps.orientation[b]
            total[ca, cb] += sign
            total[cb, ca] += sign
        strand_at[i - 1], strand_at[i] = b, a
    if (total % 2).any():
        raise RuntimeError("Odd number of signed crossings between two components!")
    return LinkingMatrix.from_array(total // 2)


def braid_relation(braid: BraidWord, pos: int) -> BraidWord | None:
    """Rewrite σ_iσ_jσ_i -> σ_jσ_iσ_j (|i−j| = 1, equal signs) at pos.

    :return: The rewritten braid, or None if the relation does not apply.
    """
    word = braid.letters[pos : pos + 3]
    if len(word) < 3:
        return None
    g1, g2, g3 = word
    if g1 != g3 or abs(abs(g1) - abs(g2)) != 1 or (g1 > 0) != (g2 > 0):
        return None
    letters = braid.letters[:pos] + (g2, g1, g2) + braid.letters[pos + 3 :]
    return BraidWord(braid.strands, letters)


def far_commute(braid: BraidWord, pos: int) -> BraidWord | None:
    """Swap the letters at pos and pos + 1 when they commute (indexes at least 2 apart)."""
    word = braid.letters[pos : pos + 2]
    if len(word) < 2 or abs(abs(word[0]) - abs(word[1])) < 2:
        return None
    letters = braid.letters[:pos] + (word[1], word[0]) + braid.letters[pos + 2 :]
    return BraidWord(braid.strands, letters)


def insert_cancelling(braid: BraidWord, pos: int, g: int) -> BraidWord:
    """Insert σ_g σ_g^{-1} before position pos."""
    letters = braid.letters[:pos] + (g, -g) + braid.letters[pos:]
    return BraidWord(braid.strands, letters)


def random_braid(strands: int, length: int, rng: np.random.Generator) -> BraidWord:
    """A uniformly random word of the given length on the given number of strands."""
    if strands < 2:
        return BraidWord(strands, ())
    idx = rng.integers(1, strands, size=length)
    signs = rng.choice(np.array([-1, 1]), size=length)
    return BraidWord(strands, tuple(int(g) for g in idx * signs))
