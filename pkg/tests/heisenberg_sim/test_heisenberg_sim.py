"""Test heisenberg_sim.py.
"""

import cmath
import math
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from metaplectic.braid import BraidWord, random_braid
from metaplectic.dense_rep import RMatrixKind, represent_braid
from metaplectic.heisenberg_sim import (
    QuditMonomial,
    StabilizerTableau,
    UWord,
    clock_op,
    commutant_generators,
    commute,
    conjugate,
    conjugate_by_generator,
    evolve_tableau,
    heisenberg_images,
    init_pair_tableau,
    measure_monomial,
    parse_monomial,
    projector,
    rank_mod_p,
    shift_op,
    symp,
    tableau_state,
    u_op,
    u_tilde_op,
)


def test_multiply_convention():
    zx = clock_op(1, 3, 1) * shift_op(1, 3, 1)
    assert zx == QuditMonomial(3, 2, (1,), (1,))
    xz = shift_op(1, 3, 1) * clock_op(1, 3, 1)
    assert xz == QuditMonomial(3, 0, (1,), (1,))
    omega = cmath.exp(2j * math.pi / 3)
    assert np.allclose(zx.to_dense(), omega * xz.to_dense())


def test_multiply_matches_dense():
    m = 5
    a = parse_monomial("X1^2 Z1 Z2^3", 2, m)
    b = parse_monomial("w X2 Z1^4", 2, m)
    assert np.allclose((a * b).to_dense(), a.to_dense() @ b.to_dense())
    assert np.allclose((a**3).to_dense(), np.linalg.matrix_power(a.to_dense(), 3))
    assert (a * a.inverse()) == QuditMonomial.identity(2, m)
    assert (a**-2) == (a.inverse() * a.inverse())


def test_parse_monomial():
    a = parse_monomial("w^2 X1 Z2^-1", 2, 3)
    assert a == QuditMonomial(3, 4, (1, 0), (0, 2))
    assert str(QuditMonomial.identity(2, 3)) == "I"
    with pytest.raises(ValueError):
        parse_monomial("Y1", 2, 3)
    with pytest.raises(ValueError):
        parse_monomial("X3", 2, 3)


def test_monomial_validation():
    with pytest.raises(ValueError):
        QuditMonomial(4, 0, (1,), (0,))
    with pytest.raises(ValueError):
        QuditMonomial(3, 0, (1, 0), (0,))
    with pytest.raises(ValueError):
        shift_op(2, 3, 1) * shift_op(3, 3, 1)


def test_symp_commute():
    assert commute(u_op(2, 3, 1), u_tilde_op(2, 3, 1))
    assert not commute(u_op(2, 3, 1), clock_op(2, 3, 1))
    assert symp(shift_op(1, 5, 1), clock_op(1, 5, 1)) == 1
    for n in (2, 3, 4):
        for g in commutant_generators(n, 5):
            assert all(commute(g, u_op(n, 5, i)) for i in range(1, n))


@pytest.mark.parametrize("m", [3, 5, 7])
def test_uword_round_trip(m):
    rng = np.random.default_rng(m)
    for _ in range(20):
        a = QuditMonomial(
            m, int(rng.integers(2 * m)), tuple(rng.integers(m, size=3)), tuple(rng.integers(m, size=3))
        )
        assert UWord.from_monomial(a).to_monomial() == a


def test_uword_generators():
    word = UWord(3, 0, (0, 1, 0, 0))
    assert word.to_monomial() == parse_monomial("Z1 Z2^-1", 2, 3)
    word = UWord(3, 0, (0, 0, 0, 1))
    assert word.to_monomial() == clock_op(2, 3, 2)
    with pytest.raises(ValueError):
        UWord(3, 0, (1, 2, 3))


def test_conjugate_clock_m3():
    z1 = clock_op(2, 3, 1)
    u = u_op(2, 3, 1)
    # R† Z R = ω Z U and R Z R† = ω² Z U²
    assert conjugate_by_generator(z1, 1, 1) == (z1 * u).scaled(2)
    assert conjugate_by_generator(z1, 1, -1) == (z1 * u**2).scaled(4)


def test_conjugate_fixes_u():
    for m in (3, 5, 7):
        u = u_op(3, m, 1)
        assert conjugate_by_generator(u, 1, 1) == u
        assert conjugate_by_generator(u, 1, -1) == u
        x3 = shift_op(3, m, 3)
        assert conjugate_by_generator(x3, 1, 1) == x3


def test_conjugate_inverse_pair():
    a = parse_monomial("w X1 Z2^2 X3", 3, 5)
    assert conjugate(a, BraidWord(3, (1, -1, -2, 2))) == a
    with pytest.raises(ValueError):
        conjugate_by_generator(a, 3, 1)
    with pytest.raises(ValueError):
        conjugate(a, BraidWord(2, (1,)))


def _random_monomial(rng: np.random.Generator, n: int, m: int) -> QuditMonomial:
    return QuditMonomial(
        m, int(rng.integers(2 * m)), tuple(rng.integers(m, size=n)), tuple(rng.integers(m, size=n))
    )


@st.composite
def _monomials(draw, n: int, m: int) -> QuditMonomial:
    exps = st.lists(st.integers(0, m - 1), min_size=n, max_size=n)
    return QuditMonomial(m, draw(st.integers(0, 2 * m - 1)), tuple(draw(exps)), tuple(draw(exps)))


@st.composite
def _conjugation_cases(draw):
    m = draw(st.sampled_from([3, 5, 9]))
    n = draw(st.integers(2, 5))
    letter = st.integers(1, n - 1).flatmap(lambda g: st.sampled_from([g, -g]))
    braid = BraidWord(n, tuple(draw(st.lists(letter, max_size=12))))
    return braid, draw(_monomials(n, m)), draw(_monomials(n, m))


@settings(max_examples=300, deadline=None)
@given(_conjugation_cases())
def test_conjugation_is_automorphism(case):
    braid, a, b = case
    assert conjugate(a * b, braid) == conjugate(a, braid) * conjugate(b, braid)
    assert conjugate(a.inverse(), braid) == conjugate(a, braid).inverse()


@settings(max_examples=300, deadline=None)
@given(_conjugation_cases())
def test_conjugation_preserves_symp(case):
    braid, a, b = case
    image_a, image_b = conjugate(a, braid), conjugate(b, braid)
    assert symp(image_a, image_b) == symp(a, b)
    assert commute(image_a, image_b) == commute(a, b)


@pytest.mark.parametrize("m", [3, 5])
def test_u_order_relations(m):
    n = 4
    us = [u_op(n, m, i) for i in range(1, n)]
    omega = cmath.exp(2j * math.pi / m)
    dense = [u.to_dense() for u in us]
    identity = np.eye(m**n)
    for u, mat in zip(us, dense):
        assert (u**m).is_identity() and (u**m).phase == 0
        assert np.allclose(np.linalg.matrix_power(mat, m), identity, atol=1e-9)
    for i in range(n - 2):
        # U_iU_{i+1} = ω^{-2} U_{i+1}U_i
        assert us[i] * us[i + 1] == (us[i + 1] * us[i]).scaled(-4)
        assert np.allclose(dense[i] @ dense[i + 1], omega**-2 * dense[i + 1] @ dense[i], atol=1e-9)
    assert us[0] * us[2] == us[2] * us[0]
    assert np.allclose(dense[0] @ dense[2], dense[2] @ dense[0], atol=1e-9)


@pytest.mark.parametrize("m", [3, 5, 7])
def test_conjugate_u_table(m):
    u1, u2 = u_op(3, m, 1), u_op(3, m, 2)
    # σ_{i+1}: U_i -> ω^{-1} U_{i+1}U_i
    assert conjugate_by_generator(u1, 2, 1) == (u2 * u1).scaled(-2)
    # σ_{i-1}: U_i -> ω^{-1} U_{i-1}^{-1}U_i = ω U_iU_{i-1}^{-1}
    assert conjugate_by_generator(u2, 1, 1) == (u1.inverse() * u2).scaled(-2)
    assert conjugate_by_generator(u2, 1, 1) == (u2 * u1.inverse()).scaled(2)
    # σ_i fixes U_i
    assert conjugate_by_generator(u1, 1, 1) == u1
    assert conjugate_by_generator(u2, 2, -1) == u2
    # far generators fix U_i
    assert conjugate_by_generator(u_op(4, m, 1), 3, 1) == u_op(4, m, 1)
    assert conjugate_by_generator(u_op(4, m, 3), 1, -1) == u_op(4, m, 3)
    kind = RMatrixKind.gaussian(m)
    for a, i in ((u1, 2), (u2, 1), (u1, 1)):
        rho = represent_braid(BraidWord(3, (i,)), kind)
        expected = rho.conj().T @ a.to_dense() @ rho
        assert np.allclose(conjugate_by_generator(a, i, 1).to_dense(), expected, atol=1e-9)


ORACLE_SWEEP = [(3, 2, 20), (3, 3, 25), (3, 4, 25), (5, 2, 15), (5, 3, 10), (5, 4, 5)]


@pytest.mark.parametrize("m, n, braids", ORACLE_SWEEP)
def test_conjugate_matches_dense(m, n, braids):
    rng = np.random.default_rng(1000 * m + n)
    kind = RMatrixKind.gaussian(m)
    for _ in range(braids):
        braid = random_braid(n, int(rng.integers(1, 21)), rng)
        rho = represent_braid(braid, kind)
        for _ in range(5):
            a = _random_monomial(rng, n, m)
            expected = rho.conj().T @ a.to_dense() @ rho
            assert np.allclose(conjugate(a, braid).to_dense(), expected, rtol=0, atol=1e-9)


def test_rank_mod_p():
    assert rank_mod_p([(1, 2), (2, 4)], 5) == 1
    assert rank_mod_p([(1, 0), (0, 1)], 3) == 2
    assert rank_mod_p([(3, 0)], 3) == 0


def test_tableau_validation():
    with pytest.raises(ValueError):
        StabilizerTableau(2, 3, ((u_op(2, 3, 1), 0), (clock_op(2, 3, 1), 0)))
    with pytest.raises(ValueError):
        StabilizerTableau(2, 3, ((u_op(2, 3, 1), 0), (u_op(2, 3, 1) ** 2, 0)))
    with pytest.raises(ValueError):
        StabilizerTableau(1, 3, ((clock_op(1, 3, 1).scaled(1), 0),))


def test_init_pair_tableau():
    tableau = init_pair_tableau(3, 3)
    assert len(tableau.rows) == 3
    assert tableau.monomials()[0] == u_op(3, 3, 1)
    assert StabilizerTableau.from_dict(tableau.to_dict()) == tableau
    with pytest.raises(ValueError):
        init_pair_tableau(1, 3)
    with pytest.raises(ValueError):
        init_pair_tableau(2, 9)


def test_tableau_state_is_stabilized():
    tableau = init_pair_tableau(2, 5)
    psi = tableau_state(tableau)
    for s, e in tableau.rows:
        assert np.allclose(s.to_dense() @ psi, cmath.exp(2j * math.pi * e / 5) * psi)


@pytest.mark.parametrize("n", [2, 3])
def test_evolve_matches_dense(n):
    m = 3
    rng = np.random.default_rng(7 + n)
    tableau = init_pair_tableau(n, m)
    psi = tableau_state(tableau)
    for _ in range(10):
        braid = random_braid(n, 8, rng)
        evolved = tableau_state(evolve_tableau(tableau, braid))
        rho = represent_braid(braid, RMatrixKind.gaussian(m))
        assert abs(np.vdot(evolved, rho @ psi)) == pytest.approx(1.0, abs=1e-8)


def test_measure_deterministic():
    tableau = init_pair_tableau(2, 3)
    psi = tableau_state(tableau)
    for text in ("X1 X2", "X1 X2 Z1 Z2^-1", "w^2 X1^2 X2^2"):
        target = parse_monomial(text, 2, 3)
        result = measure_monomial(tableau, target, rng=0)
        assert result.deterministic
        assert result.updated == tableau
        expectation = np.vdot(psi, target.to_dense() @ psi)
        assert expectation == pytest.approx(cmath.exp(2j * math.pi * result.outcome / 3), abs=1e-8)


def test_measure_random_statistics():
    p = 3
    tableau = init_pair_tableau(2, p)
    target = clock_op(2, p, 1)
    psi = tableau_state(tableau)
    probs = [np.vdot(psi, projector(target, e) @ psi).real for e in range(p)]
    rng = np.random.default_rng(2024)
    shots = 10000
    counts = [0] * p
    for _ in range(shots):
        result = measure_monomial(tableau, target, rng)
        assert not result.deterministic
        counts[result.outcome] += 1
    for e in range(p):
        sigma = math.sqrt(shots * probs[e] * (1 - probs[e]))
        assert abs(counts[e] - shots * probs[e]) <= 3 * sigma


def test_measure_collapses():
    tableau = init_pair_tableau(2, 5)
    target = clock_op(2, 5, 1)
    first = measure_monomial(tableau, target, rng=3)
    second = measure_monomial(first.updated, target, rng=4)
    assert second.deterministic
    assert second.outcome == first.outcome
    psi = tableau_state(first.updated)
    assert np.allclose(target.to_dense() @ psi, cmath.exp(2j * math.pi * first.outcome / 5) * psi)


def test_measure_incomplete_tableau():
    tableau = StabilizerTableau(2, 3, ((u_op(2, 3, 1), 0),))
    with pytest.raises(ValueError, match="incomplete tableau"):
        measure_monomial(tableau, u_tilde_op(2, 3, 1))
    with pytest.raises(ValueError):
        measure_monomial(tableau, clock_op(2, 3, 1).scaled(1))


def test_heisenberg_images():
    images = heisenberg_images(BraidWord(3, (1, -1)), 3)
    assert len(images) == 8
    assert images["X1"] == "X1"
    assert images["U2"] == str(u_op(3, 3, 2))
