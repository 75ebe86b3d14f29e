"""Fusion rules and category data of the metaplectic categories SO(m)_2.
"""

from __future__ import annotations
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence
import math
import re
import numpy as np
from .cyclotomic import RootOfUnity


class Kind(IntEnum):
    """Kinds of simple objects, in canonical order."""

    ONE = 0
    Z = 1
    XE = 2
    XE_PRIME = 3
    Y = 4


_NAMES = {Kind.ONE: "1", Kind.Z: "Z", Kind.XE: "Xe", Kind.XE_PRIME: "Xe'"}


@dataclass(frozen=True, order=True)
class Label:
    """A simple object. Y_0 is canonicalized to the unit object."""

    kind: Kind
    j: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.kind == Kind.Y and self.j == 0:
            object.__setattr__(self, "kind", Kind.ONE)
        if self.kind != Kind.Y and self.j != 0:
            raise ValueError(f"Only Y labels carry an index, got {self.kind.name} with j = {self.j}!")
        if self.j < 0:
            raise ValueError(f"The index of a Y label must be non-negative, got {self.j}!")

    def __str__(self) -> str:
        if self.kind == Kind.Y:
            return f"Y{self.j}"
        return _NAMES[self.kind]


ONE = Label(Kind.ONE)
Z = Label(Kind.Z)
XE = Label(Kind.XE)
XE_PRIME = Label(Kind.XE_PRIME)


def Y(j: int) -> Label:
    return Label(Kind.Y, j)


def parse_label(text: str) -> Label:
    """Parse a label such as 1, Z, Xe, Xe', Y0 or Y3.

    :param text: The text of the label.
    :return: The corresponding Label.
    """
    text = text.strip()
    aliases = {
        "1": ONE,
        "one": ONE,
        "z": Z,
        "x": XE,
        "xe": XE,
        "x'": XE_PRIME,
        "xe'": XE_PRIME,
        "xeprime": XE_PRIME,
    }
    if text.lower() in aliases:
        return aliases[text.lower()]
    match = re.fullmatch(r"[Yy]_?(\d+)", text)
    if match:
        return Y(int(match.group(1)))
    raise ValueError(f"Unknown label: {text}!")


@dataclass(frozen=True)
class CategoryDatum:
    """Quantum dimension, scaling dimension, twist and R-symbols of a simple object."""

    label: Label
    qdim: float
    qdim_squared: int
    h: Fraction
    twist: RootOfUnity
    kind: str
    r_symbols: dict[tuple[Label, Label, Label], RootOfUnity] = field(
        default_factory=dict
    )

    def to_dict(self) -> dict:
        return {
            "label": str(self.label),
            "qdim": self.qdim,
            "qdim_squared": self.qdim_squared,
            "h": str(self.h),
            "twist": str(self.twist.turn),
            "kind": self.kind,
            "r_symbols": {
                f"R^{{{a},{b}}}_{c}": str(val.turn)
                for (a, b, c), val in self.r_symbols.items()
            },
        }


@dataclass(frozen=True)
class FusionRing:
    """The fusion ring of SO(m)_2 for an odd integer m ≥ 3."""

    m: int

    def __post_init__(self):
        if self.m < 3 or self.m % 2 == 0:
            raise ValueError(f"m must be an odd integer >= 3, got {self.m}!")

    @property
    def r(self) -> int:
        return (self.m - 1) // 2

    @property
    def rank(self) -> int:
        return self.r + 4

    @cached_property
    def labels(self) -> tuple[Label, ...]:
        """Simple objects in canonical order: 1, Z, Xe, Xe', Y_1, ..., Y_r."""
        return (ONE, Z, XE, XE_PRIME) + tuple(Y(j) for j in range(1, self.r + 1))

    @cached_property
    def _index(self) -> dict[Label, int]:
        return {label: idx for idx, label in enumerate(self.labels)}

    def check(self, label: Label) -> Label:
        if label.kind == Kind.Y and label.j > self.r:
            raise ValueError(f"{label} is out of range for m = {self.m} (j <= {self.r})!")
        return label

    def _ys(self, start: int = 1) -> list[Label]:
        return [Y(j) if j else ONE for j in range(start, self.r + 1)]

    def _fuse_sorted(self, a: Label, b: Label) -> list[Label]:
        if a.kind == Kind.ONE:
            return [b]
        if a.kind == Kind.Z:
            return [{Kind.Z: ONE, Kind.XE: XE_PRIME, Kind.XE_PRIME: XE}.get(b.kind, b)]
        if a.kind in (Kind.XE, Kind.XE_PRIME):
            if b.kind == Kind.Y:
                return [XE, XE_PRIME]
            if a.kind == b.kind:
                return self._ys(0)
            return [Z] + self._ys(1)
        i, j = a.j, b.j
        if i == j:
            return [ONE, Z, Y(min(2 * j, self.m - 2 * j))]
        return [Y(abs(i - j)), Y(min(i + j, self.m - i - j))]

    def fuse(self, a: Label, b: Label) -> tuple[Label, ...]:
        """Decompose a ⊗ b into simple objects.

        :param a: A simple object.
        :param b: A simple object.
        :return: The simple summands (with multiplicity) in canonical order.
        """
        a, b = sorted((self.check(a), self.check(b)))
        return tuple(sorted(self._fuse_sorted(a, b)))

    def fuse_many(self, labels: Iterable[Label], b: Label) -> tuple[Label, ...]:
        """Fuse every member of a multiset with b, flattening with multiplicity."""
        return tuple(sorted(c for a in labels for c in self.fuse(a, b)))

    @cached_property
    def _fusion_matrices(self) -> dict[Label, np.ndarray]:
        mats = {}
        for b in self.labels:
            mat = np.zeros((self.rank, self.rank), dtype=np.int64)
            for a in self.labels:
                for c in self.fuse(a, b):
                    mat[self._index[a], self._index[c]] += 1
            mat.setflags(write=False)
            mats[b] = mat
        return mats

    def fusion_matrix(self, b: Label) -> np.ndarray:
        """The matrix N_b with (N_b)[a][c] the multiplicity of c in a ⊗ b,
        rows and columns indexed by labels in canonical order.
        """
        return self._fusion_matrices[self.check(b)]

    def hom_dim(self, sequence: Sequence[Label], target: Label) -> int:
        """Dimension of Hom(a_1 ⊗ ... ⊗ a_k, target), the number of admissible
        fusion paths, computed by iterated application of fusion matrices.

        :param sequence: A nonempty sequence of simple objects.
        :param target: The total charge.
        :return: The dimension of the Hom space.
        """
        if not sequence:
            raise ValueError("The sequence of labels must be nonempty!")
        vec = np.zeros(self.rank, dtype=np.int64)
        vec[self._index[self.check(sequence[0])]] = 1
        for label in sequence[1:]:
            vec = vec @ self.fusion_matrix(label)
        return int(vec[self._index[self.check(target)]])

    def sector_dims(self, n: int) -> dict[tuple[Label, Label], int]:
        """Dimensions of Hom(Y_L ⊗ Xe^{⊗n}, Y_R) for the (r+1)^2 sectors
        with Y_L, Y_R ∈ {Y_0, ..., Y_r}.

        :param n: The number of Xe anyons.
        """
        ends = self._ys(0)
        return {
            (left, right): self.hom_dim([left] + [XE] * n, right)
            for left in ends
            for right in ends
        }

    def qdim_squared(self, a: Label) -> int:
        return {Kind.ONE: 1, Kind.Z: 1, Kind.XE: self.m, Kind.XE_PRIME: self.m}.get(
            self.check(a).kind, 4
        )

    def scaling_dimension(self, a: Label) -> Fraction:
        """The scaling dimension h_a reduced to [0, 1)."""
        a = self.check(a)
        if a.kind in (Kind.ONE, Kind.Z):
            return Fraction(0)
        if a.kind == Kind.XE:
            return Fraction(self.r, 8) % 1
        if a.kind == Kind.XE_PRIME:
            return Fraction(self.r + 4, 8) % 1
        return Fraction(a.j * (self.m - a.j), 2 * self.m) % 1

    @cached_property
    def _r_symbols(self) -> dict[tuple[Label, Label, Label], RootOfUnity]:
        m, r = self.m, self.r
        symbols = {
            (Y(1), Y(1), ONE): RootOfUnity(Fraction(m + 1, 2 * m)),
            (Y(1), Y(1), Z): RootOfUnity(Fraction(1, 2 * m)),
            (Y(1), Y(1), Y(min(2, m - 2))): RootOfUnity(Fraction(m - 1, 2 * m)),
        }
        for j in range(r + 1):
            channel = Y(j) if j else ONE
            symbols[(XE, XE, channel)] = RootOfUnity(
                Fraction((r - j) * (r - j + 1) - j, 4)
                + Fraction(r, 8)
                + Fraction(j * j, 4 * m)
            )
        return symbols

    def r_symbol(self, a: Label, b: Label, c: Label) -> RootOfUnity | None:
        """The R-symbol R^{a,b}_c when it is part of the known braiding data,
        None otherwise.
        """
        return self._r_symbols.get((self.check(a), self.check(b), self.check(c)))

    def category_data(self, a: Label) -> CategoryDatum:
        """Quantum dimension, scaling dimension, twist and R-symbols of a.

        :param a: A simple object.
        :return: A CategoryDatum.
        """
        a = self.check(a)
        h = self.scaling_dimension(a)
        sq = self.qdim_squared(a)
        if sq == 1:
            kind = {
                Fraction(0): "boson",
                Fraction(1, 2): "fermion",
                Fraction(1, 4): "semion",
                Fraction(3, 4): "semion",
            }.get(h, "abelian")
        else:
            kind = "non-abelian"
        return CategoryDatum(
            label=a,
            qdim=math.sqrt(sq),
            qdim_squared=sq,
            h=h,
            twist=RootOfUnity(h),
            kind=kind,
            r_symbols={
                key: val for key, val in self._r_symbols.items() if a in key
            },
        )
