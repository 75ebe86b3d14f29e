"""Test dense_rep.py.
"""

import math
import numpy as np
import pytest
from metaplectic.braid import BraidWord
from metaplectic.dense_rep import (
    ISING_BELL,
    RMatrixKind,
    build_r_matrix,
    check_braid_relations,
    enumerate_image_group,
    _keys,
    generator_matrix,
    pauli_images,
    phase_distance,
    represent_braid,
    u_operator,
    unitarity_residual,
    y1_matrix,
)
from metaplectic.utils import ScaleError

RELATION_CASES = [
    (RMatrixKind.gaussian(3), 3),
    (RMatrixKind.gaussian(5), 3),
    (RMatrixKind.gaussian(7), 3),
    (RMatrixKind.potts(3), 3),
    (RMatrixKind.potts(5), 3),
    (RMatrixKind.y1(3), 4),
    (RMatrixKind.y1(5), 4),
    (RMatrixKind.ising(), 4),
]


def test_kinds():
    assert RMatrixKind.gaussian(5).dim(3) == 125
    assert RMatrixKind.y1(3).sites(4) == 5
    assert RMatrixKind.y1(3).locality == 3
    assert RMatrixKind.ising().dim(3) == 8
    assert not RMatrixKind.potts(5).unitary
    assert str(RMatrixKind.gaussian(3)) == "gaussian(3)"
    with pytest.raises(ValueError):
        RMatrixKind.gaussian(4)


def test_u_operator_order():
    u = u_operator(3)
    assert np.allclose(np.linalg.matrix_power(u, 3), np.eye(9), atol=1e-12)


def test_y1_matrix():
    r = y1_matrix(3)
    assert r[0, 0] == pytest.approx(-0.5)
    assert y1_matrix(5)[0, 0] == pytest.approx(math.cos(math.pi / 5))
    assert unitarity_residual(r) < 1e-12


def test_ising_bell():
    nonzero = ISING_BELL[np.abs(ISING_BELL) > 1e-12]
    assert len(nonzero) == 8
    assert np.allclose(np.abs(nonzero), 1 / math.sqrt(2))


@pytest.mark.parametrize("kind,n", RELATION_CASES)
def test_braid_relations(kind, n):
    report = check_braid_relations(kind, n)
    assert report.yang_baxter_residual < 1e-9
    assert report.far_commutation_residual < 1e-9


def test_braid_relations_negative_control():
    r = y1_matrix(3)
    r[0, 0] = -r[0, 0]
    report = check_braid_relations(RMatrixKind.y1(3), 4, r_matrix=r)
    assert report.yang_baxter_residual > 0.1


def test_represent_braid():
    kind = RMatrixKind.gaussian(3)
    assert np.allclose(represent_braid(BraidWord(3, ()), kind), np.eye(27))
    mat = represent_braid(BraidWord(2, (1, -1)), kind)
    assert np.allclose(mat, np.eye(9), atol=1e-12)
    mat = represent_braid(BraidWord(3, (1, 2, -1, 2)), kind)
    assert mat.shape == (27, 27)
    assert unitarity_residual(mat) < 1e-9
    assert np.allclose(represent_braid(BraidWord(3, (2,)), kind), generator_matrix(kind, 3, 2))


def test_represent_braid_non_unitary():
    kind = RMatrixKind.potts(5)
    assert unitarity_residual(generator_matrix(kind, 2, 1)) > 1e-3
    mat = represent_braid(BraidWord(2, (1, -1)), kind)
    assert np.allclose(mat, np.eye(25), atol=1e-9)


def test_potts_against_gaussian():
    for n in (2, 3):
        braid = BraidWord(n, tuple(range(1, n)))
        potts = represent_braid(braid, RMatrixKind.potts(3))
        gauss = represent_braid(braid, RMatrixKind.gaussian(3))
        assert phase_distance(potts, gauss) < 1e-9
    potts = build_r_matrix(RMatrixKind.potts(5))
    gauss = build_r_matrix(RMatrixKind.gaussian(5))
    assert phase_distance(potts, gauss) > 0.1


def test_scale_limits():
    with pytest.raises(ScaleError):
        represent_braid(BraidWord(5, (1,)), RMatrixKind.gaussian(7))
    with pytest.raises(ValueError):
        represent_braid(BraidWord(1, ()), RMatrixKind.gaussian(3))
    with pytest.raises(ValueError):
        generator_matrix(RMatrixKind.gaussian(3), 3, 3)


def test_pauli_images():
    images = pauli_images(ISING_BELL)
    assert len(images) == 16
    assert images["II"] == (1, "II")
    for word, (sign, target) in images.items():
        assert target != "II" or word == "II"
    with pytest.raises(ValueError):
        pauli_images(y1_matrix(3))


def test_image_group_gaussian():
    group = enumerate_image_group(RMatrixKind.gaussian(3), 3)
    assert group.terminated
    assert group.order_up_to_phase == 24


def test_image_group_y1():
    group = enumerate_image_group(RMatrixKind.y1(3), 2)
    assert group.terminated
    assert group.order_up_to_phase > 1


def test_keys_straddle_rounding_boundary():
    a = np.zeros((2, 2), dtype=complex)
    a[0, 0] = 0.1234565 + 2e-10
    b = a.copy()
    b[0, 0] = 0.1234565 - 2e-10
    primary_a, keys_a = _keys(a)
    primary_b, keys_b = _keys(b)
    assert primary_a != primary_b
    assert primary_a in keys_b
    assert primary_b in keys_a
    primary, keys = _keys(np.eye(2, dtype=complex))
    assert keys == [primary]


def test_image_group_bound():
    group = enumerate_image_group(RMatrixKind.gaussian(3), 2, max_order=1)
    assert not group.terminated
    assert group.to_dict()["terminated"] is False
