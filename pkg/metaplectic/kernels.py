"""Numba kernels for the brute-force sums (sublinks, spin configurations and
vectors of a quadratic form) together with a chunked thread runner.
Every kernel produces an integer histogram so that the result does not depend
on how chunks are scheduled.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable
import numpy as np
from numba import njit
from tqdm import tqdm
from loguru import logger

CHUNK = 1 << 16


@njit(nogil=True, cache=True)
def _lowest_bit(idx: int) -> int:
    bit = 0
    while (idx & 1) == 0:
        idx >>= 1
        bit += 1
    return bit


@njit(nogil=True, cache=True)
def _sublink_kernel(lk, rowsum, modulus, start, stop, bins):
    c = lk.shape[0]
    hist = np.zeros(bins, dtype=np.int64)
    gray = start ^ (start >> 1)
    # t[j] = sum of lk[j, k] over k in the current sublink
    t = np.zeros(c, dtype=np.int64)
    x = 0
    for k in range(c):
        if (gray >> k) & 1:
            for j in range(c):
                if not (gray >> j) & 1:
                    x += lk[k, j]
            for j in range(c):
                t[j] += lk[j, k]
    hist[(x % modulus + modulus) % modulus] += 1
    for idx in range(start + 1, stop):
        bit = _lowest_bit(idx)
        if (gray >> bit) & 1:
            x -= rowsum[bit] - 2 * t[bit]
            for j in range(c):
                t[j] -= lk[j, bit]
        else:
            x += rowsum[bit] - 2 * t[bit]
            for j in range(c):
                t[j] += lk[j, bit]
        gray ^= 1 << bit
        hist[(x % modulus + modulus) % modulus] += 1
    return hist


@njit(nogil=True, cache=True)
def _coupling_kernel(J, offset, start, stop, bins):
    n = J.shape[0]
    hist = np.zeros(bins, dtype=np.int64)
    gray = start ^ (start >> 1)
    # the last spin is pinned to +1, global flips are counted by the caller
    spins = np.ones(n, dtype=np.int64)
    for k in range(n - 1):
        if (gray >> k) & 1:
            spins[k] = -1
    aligned = 0
    for i in range(n):
        for j in range(i + 1, n):
            if spins[i] == spins[j]:
                aligned += J[i, j]
    hist[aligned - offset] += 1
    for idx in range(start + 1, stop):
        bit = _lowest_bit(idx)
        delta = 0
        for j in range(n):
            delta += J[bit, j] * spins[bit] * spins[j]
        # J has a zero diagonal so the j == bit term vanishes
        aligned -= delta
        spins[bit] = -spins[bit]
        gray ^= 1 << bit
        hist[aligned - offset] += 1
    return hist


@njit(nogil=True, cache=True)
def _gauss_kernel(V, p, start, stop, bins):
    b = V.shape[0]
    hist = np.zeros(bins, dtype=np.int64)
    digits = np.zeros(b, dtype=np.int64)
    rest = start
    for k in range(b):
        digits[k] = rest % p
        rest //= p
    for _ in range(start, stop):
        value = 0
        for i in range(b):
            if digits[i] == 0:
                continue
            for j in range(b):
                value += digits[i] * V[i, j] * digits[j]
        hist[(value % p + p) % p] += 1
        k = 0
        while k < b:
            digits[k] += 1
            if digits[k] < p:
                break
            digits[k] = 0
            k += 1
    return hist


def run_chunks(
    kernel: Callable,
    args: tuple,
    total: int,
    bins: int,
    threads: int = 1,
    progress: bool = False,
    desc: str = "",
) -> np.ndarray:
    """Evaluate a histogram kernel over the index range [0, total) in chunks.

    :param kernel: A numba kernel taking (*args, start, stop, bins).
    :param args: Leading arguments passed to the kernel.
    :param total: The number of indexes to enumerate.
    :param bins: The length of the histogram.
    :param threads: The number of worker threads.
    :param progress: Whether to show a tqdm progress bar.
    :param desc: Description for the progress bar.
    :return: The summed integer histogram.
    """
    starts = range(0, total, CHUNK)
    hist = np.zeros(bins, dtype=np.int64)
    logger.debug("Enumerating {} indexes in {} chunks with {} threads.", total, len(starts), threads)

    def _run(start):
        return kernel(*args, start, min(start + CHUNK, total), bins)

    with ThreadPoolExecutor(max_workers=max(threads, 1)) as executor:
        for part in tqdm(
            executor.map(_run, starts),
            total=len(starts),
            desc=desc,
            disable=not progress,
        ):
            hist += part
    return hist


def sublink_counts(
    lk: np.ndarray, modulus: int, threads: int = 1, progress: bool = False
) -> np.ndarray:
    """Count the sublinks S of a link by the value of ⟨S, L−S⟩ mod modulus.

    :param lk: A symmetric integer linking matrix with zero diagonal.
    :param modulus: The modulus of the histogram.
    :param threads: The number of worker threads.
    :param progress: Whether to show a progress bar.
    :return: An integer array h with h[x] = #{S : ⟨S, L−S⟩ ≡ x}.
    """
    lk = np.ascontiguousarray(lk, dtype=np.int64)
    rowsum = lk.sum(axis=1)
    return run_chunks(
        _sublink_kernel,
        (lk, rowsum, modulus),
        1 << lk.shape[0],
        modulus,
        threads=threads,
        progress=progress,
        desc="sublinks",
    )


def coupling_counts(
    J: np.ndarray, threads: int = 1, progress: bool = False
) -> tuple[np.ndarray, int]:
    """Count spin configurations by their aligned coupling total
    Σ_{i<j} J_ij δ(σ_i, σ_j).

    :param J: A symmetric integer coupling matrix with zero diagonal.
    :param threads: The number of worker threads.
    :param progress: Whether to show a progress bar.
    :return: A pair (h, offset) where h[k] counts the configurations
        whose aligned total is k + offset.
    """
    J = np.ascontiguousarray(J, dtype=np.int64)
    n = J.shape[0]
    upper = np.triu(J, 1)
    offset = int(upper[upper < 0].sum())
    bins = int(upper[upper > 0].sum()) - offset + 1
    hist = run_chunks(
        _coupling_kernel,
        (J, offset),
        1 << (n - 1),
        bins,
        threads=threads,
        progress=progress,
        desc="spins",
    )
    return 2 * hist, offset


def gauss_counts(
    V: np.ndarray, p: int, threads: int = 1, progress: bool = False
) -> np.ndarray:
    """Count vectors v over F_p by the value of vᵀVv mod p.

    :param V: An integer square matrix.
    :param p: The modulus.
    :param threads: The number of worker threads.
    :param progress: Whether to show a progress bar.
    :return: An integer array h with h[x] = #{v : vᵀVv ≡ x}.
    """
    V = np.ascontiguousarray(V, dtype=np.int64) % p
    return run_chunks(
        _gauss_kernel,
        (V, p),
        p ** V.shape[0],
        p,
        threads=threads,
        progress=progress,
        desc="vectors",
    )
