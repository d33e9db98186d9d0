import math

import numpy as np
import pytest

from app.exceptions import ZeroOmegaError
from app.models.equilibrium import (
    ClassificationTag,
    EquilibriumCertificate,
    Rejection,
    RejectionReason,
)
from app.models.game import AngularParams, PayCoefficients
from app.models.reduced import TorusPoint
from app.services.reduction_service import angle_point
from app.utils.algebra2 import vec2
from conftest import random_game

QUARTER = math.pi / 4
SQ10 = math.sqrt(10)
UNIQUE = PayCoefficients.from_list([1, 0, 2, 3])
DUAL = PayCoefficients.from_list([0, 0.5, 1, 0.5])
FAILED = PayCoefficients.from_list([1, 2, 3, 2])
NO_OMEGA = PayCoefficients.from_list([1, 1, 1, 1])
STAR = TorusPoint(vec2(np.array([2.0, 1.0]) / math.sqrt(5)))


@pytest.fixture
def unique_game(reduction_service):
    return reduction_service.reduce(UNIQUE, AngularParams.symmetric(QUARTER))


@pytest.fixture
def dual_game(reduction_service):
    return reduction_service.reduce(DUAL, AngularParams.symmetric(QUARTER))


def test_check_criterion_certifies_unique_equilibrium(equilibrium_service, unique_game):
    cert = equilibrium_service.check_criterion(unique_game, STAR, STAR)
    assert isinstance(cert, EquilibriumCertificate)
    assert cert.lam == pytest.approx(SQ10 - 3, abs=1e-12)
    assert cert.mu == pytest.approx(SQ10 + 3, abs=1e-12)
    assert cert.game_value_g == pytest.approx(-3.0, abs=1e-12)
    assert cert.game_value_H == pytest.approx(0.75, abs=1e-12)


def test_check_criterion_rejects_misaligned_pair(equilibrium_service, unique_game):
    e1 = TorusPoint(vec2([1.0, 0.0]))
    result = equilibrium_service.check_criterion(unique_game, e1, e1)
    assert isinstance(result, Rejection)
    assert result.reason == RejectionReason.NOT_COLLINEAR_X


def test_check_criterion_rejects_when_omega_vanishes(equilibrium_service, reduction_service, rng):
    rg = reduction_service.reduce(NO_OMEGA, AngularParams.symmetric(QUARTER))
    for _ in range(200):
        x, y = angle_point(rng.uniform(0, 2 * math.pi)), angle_point(rng.uniform(0, 2 * math.pi))
        assert isinstance(equilibrium_service.check_criterion(rg, x, y), Rejection)


def test_check_criterion_reports_negative_multipliers(equilibrium_service, unique_game):
    opposite = TorusPoint(vec2(-STAR.x))
    # -Ay + u = (|z| - 3) z/|z| is collinear with -z/|z| but with a negative multiplier
    result = equilibrium_service.check_criterion(unique_game, opposite, STAR)
    assert isinstance(result, Rejection)
    assert result.reason == RejectionReason.NEGATIVE_LAMBDA

    result = equilibrium_service.check_criterion(unique_game, STAR, opposite)
    assert isinstance(result, Rejection)
    assert result.reason == RejectionReason.NEGATIVE_MU


def test_eigen_angle_examples(equilibrium_service):
    assert equilibrium_service.eigen_angle(UNIQUE) == pytest.approx(QUARTER, abs=1e-15)
    assert equilibrium_service.eigen_angle(PayCoefficients.from_list([1, 0, 2, 0.5])) == ClassificationTag.NO_EIGEN_ANGLE
    assert equilibrium_service.eigen_angle(PayCoefficients.from_list([0, 0, 1, 1])) == ClassificationTag.DEGENERATE
    # Delta = 2 and (m - n) w1 w2 = 2 put cos 2theta exactly on the boundary
    assert equilibrium_service.eigen_angle(PayCoefficients.from_list([0, 0, 1, 2])) == ClassificationTag.NO_EIGEN_ANGLE


def test_common_eigen_check_examples(equilibrium_service):
    assert equilibrium_service.common_eigen_check(UNIQUE, QUARTER, QUARTER)
    assert not equilibrium_service.common_eigen_check(UNIQUE, QUARTER, math.pi / 6)
    with pytest.raises(ZeroOmegaError):
        equilibrium_service.common_eigen_check(NO_OMEGA, QUARTER, QUARTER)


def test_eigen_angle_makes_omega_a_common_eigenvector(equilibrium_service, rng):
    checked = 0
    while checked < 1000:
        c = random_game(rng)
        theta = equilibrium_service.eigen_angle(c)
        if isinstance(theta, ClassificationTag):
            continue
        assert 0.0 < theta < math.pi / 2
        assert equilibrium_service.common_eigen_residual(c, theta, theta) <= 1e-9
        checked += 1


def test_solve_unique_game(equilibrium_service, reduction_service):
    result = equilibrium_service.solve(UNIQUE)
    assert result.tag == ClassificationTag.UNIQUE_EIGEN
    assert result.theta_star == pytest.approx(QUARTER, abs=1e-12)
    assert result.s_value == pytest.approx(30.0, abs=1e-10)
    assert result.z_norm_cubed == pytest.approx(10 * SQ10, abs=1e-10)
    (cert,) = result.certificates
    np.testing.assert_allclose(cert.x.x, STAR.x, atol=1e-10)
    np.testing.assert_allclose(cert.y.x, STAR.x, atol=1e-10)
    assert cert.lam == pytest.approx(SQ10 - 3, abs=1e-10)
    assert cert.mu == pytest.approx(SQ10 + 3, abs=1e-10)
    assert cert.game_value_g == pytest.approx(-3.0, abs=1e-10)
    assert cert.game_value_H == pytest.approx(0.75, abs=1e-10)
    assert equilibrium_service.game_value(cert, 6.0) == pytest.approx(0.75, abs=1e-10)


def test_solve_dual_game(equilibrium_service, dual_game):
    result = equilibrium_service.solve(DUAL)
    assert result.tag == ClassificationTag.DUAL_EIGEN
    assert result.theta_star == pytest.approx(QUARTER, abs=1e-12)
    np.testing.assert_allclose(result.z, [math.sqrt(2) / 2, -math.sqrt(2) / 2], atol=1e-12)
    aligned, flipped = result.certificates
    z_hat = result.z / np.linalg.norm(result.z)
    np.testing.assert_allclose(aligned.x.x, z_hat, atol=1e-12)
    np.testing.assert_allclose(aligned.y.x, z_hat, atol=1e-12)
    np.testing.assert_allclose(flipped.x.x, -z_hat, atol=1e-12)
    np.testing.assert_allclose(flipped.y.x, z_hat, atol=1e-12)

    assert abs(aligned.lam) <= 1e-9
    assert aligned.mu == pytest.approx(2.0, abs=1e-9)
    assert abs(flipped.lam) <= 1e-9
    assert abs(flipped.mu) <= 1e-9
    for cert in result.certificates:
        assert cert.game_value_g == pytest.approx(-1.0, abs=1e-9)
        assert cert.game_value_H == pytest.approx(0.25, abs=1e-9)
        assert isinstance(equilibrium_service.check_criterion(dual_game, cert.x, cert.y), EquilibriumCertificate)


def test_solve_negative_space(equilibrium_service):
    assert equilibrium_service.solve(NO_OMEGA).tag == ClassificationTag.NO_OMEGA
    assert equilibrium_service.solve(PayCoefficients.from_list([0, 0, 1, 1])).tag == ClassificationTag.DEGENERATE
    assert equilibrium_service.solve(PayCoefficients.from_list([1, 0, 2, 0.5])).tag == ClassificationTag.NO_EIGEN_ANGLE

    failed = equilibrium_service.solve(FAILED)
    assert failed.tag == ClassificationTag.HYPOTHESIS_FAILED
    assert failed.theta_star == pytest.approx(QUARTER, abs=1e-12)
    assert failed.s_value == pytest.approx(16.0, abs=1e-10)
    assert failed.z_norm_cubed == pytest.approx(8.0, abs=1e-10)
    np.testing.assert_allclose(failed.z, [math.sqrt(2), -math.sqrt(2)], atol=1e-12)
    assert failed.certificates == ()


def test_game_value_examples(equilibrium_service, unique_game):
    cert = equilibrium_service.check_criterion(unique_game, STAR, STAR)
    assert equilibrium_service.game_value(cert._replace(game_value_g=-3.0), 6.0) == 0.75
    assert equilibrium_service.game_value(cert._replace(game_value_g=-1.0), 2.0) == 0.25
    assert equilibrium_service.game_value(cert._replace(game_value_g=-4.5), 4.5) == 0.0


def _solved_with_game(equilibrium_service, reduction_service, c):
    result = equilibrium_service.solve(c)
    rg = None
    if result.theta_star is not None:
        rg = reduction_service.reduce(c, AngularParams.symmetric(result.theta_star))
    return result, rg


def test_certificates_pass_independent_reverification(equilibrium_service, reduction_service, rng):
    seen = 0
    for _ in range(300):
        c = random_game(rng)
        result, rg = _solved_with_game(equilibrium_service, reduction_service, c)
        for cert in result.certificates:
            seen += 1
            again = equilibrium_service.check_criterion(rg, cert.x, cert.y)
            assert isinstance(again, EquilibriumCertificate)
            assert equilibrium_service.is_eigenequilibrium(rg, cert.x, cert.y)
        if result.tag == ClassificationTag.UNIQUE_EIGEN:
            (cert,) = result.certificates
            z_norm = float(np.linalg.norm(result.z))
            assert abs(cert.lam - (z_norm - result.alpha_eig)) <= 1e-9 * (1 + z_norm)
            assert abs(cert.mu - (z_norm + result.alpha_eig)) <= 1e-9 * (1 + z_norm)
            assert cert.game_value_g == pytest.approx(-result.alpha_eig, abs=1e-9 * (1 + z_norm))
    assert seen > 0


def test_candidate_values_match_dual_certificates(equilibrium_service, reduction_service, dual_game):
    sym = reduction_service.symmetrize(dual_game)
    first, second = equilibrium_service.candidate_values(sym)
    assert first == pytest.approx(-1.0, abs=1e-12)
    assert second == pytest.approx(-1.0, abs=1e-12)

    result = equilibrium_service.solve(DUAL)
    g1, g2 = (cert.game_value_g for cert in result.certificates)
    assert abs(g1 - g2) <= 1e-9 * (1 + np.max(np.abs(dual_game.A)))


def test_interchange_of_dual_equilibria(equilibrium_service, dual_game):
    first, second = equilibrium_service.solve(DUAL).certificates
    for crossed in equilibrium_service.interchange(dual_game, first, second):
        assert isinstance(crossed, EquilibriumCertificate)
        assert crossed.game_value_g == pytest.approx(first.game_value_g, abs=1e-9)


def test_is_eigenequilibrium_rejects_generic_pairs(equilibrium_service, unique_game):
    assert equilibrium_service.is_eigenequilibrium(unique_game, STAR, STAR)
    # A = 3I: (x, y) is an eigenvector of the block matrix only when y = ±x
    assert not equilibrium_service.is_eigenequilibrium(unique_game, STAR, TorusPoint(vec2([1.0, 0.0])))


def test_solve_is_scale_invariant(equilibrium_service, rng):
    for _ in range(100):
        c = random_game(rng)
        base = equilibrium_service.solve(c)
        for factor in (0.1, 3.0, 40.0):
            scaled = equilibrium_service.solve(c.scaled(factor))
            assert scaled.tag == base.tag
            assert len(scaled.certificates) == len(base.certificates)
            for ours, theirs in zip(scaled.certificates, base.certificates):
                np.testing.assert_allclose(ours.x.x, theirs.x.x, atol=1e-12, rtol=0)
                np.testing.assert_allclose(ours.y.x, theirs.y.x, atol=1e-12, rtol=0)
                assert ours.lam == pytest.approx(factor * theirs.lam, rel=1e-9, abs=1e-9 * factor)
                assert ours.mu == pytest.approx(factor * theirs.mu, rel=1e-9, abs=1e-9 * factor)
                assert ours.game_value_g == pytest.approx(factor * theirs.game_value_g, rel=1e-9, abs=1e-9 * factor)


@pytest.mark.parametrize("shift", [1e-11, 1e-10])
def test_solve_certifies_both_equilibria_inside_the_dual_band(equilibrium_service, shift):
    # <Az, z> exceeds |z|^3 by about 2 * shift, so lam and mu dip just below zero
    c = PayCoefficients.from_list([shift, 0.5, 1 - shift, 0.5])
    result = equilibrium_service.solve(c)
    assert result.tag == ClassificationTag.DUAL_EIGEN
    aligned, flipped = result.certificates
    assert aligned.lam == pytest.approx(-2 * shift, abs=1e-14)
    assert flipped.mu == pytest.approx(-2 * shift, abs=1e-14)
    for cert in result.certificates:
        assert cert.residual_x <= 1e-12 and cert.residual_y <= 1e-12


def test_check_criterion_extra_slack(equilibrium_service, reduction_service):
    c = PayCoefficients.from_list([1e-11, 0.5, 1 - 1e-11, 0.5])
    rg = reduction_service.reduce(c, AngularParams.symmetric(QUARTER))
    z_hat = TorusPoint(vec2([math.sqrt(2) / 2, -math.sqrt(2) / 2]))
    result = equilibrium_service.check_criterion(rg, z_hat, z_hat)
    assert isinstance(result, Rejection)
    assert result.reason == RejectionReason.NEGATIVE_LAMBDA
    assert isinstance(equilibrium_service.check_criterion(rg, z_hat, z_hat, 1e-9), EquilibriumCertificate)
