import math
from typing import Tuple, Union

import numpy as np
from loguru import logger

from app.config import Settings
from app.exceptions import ServiceError, ZeroOmegaError
from app.models.equilibrium import (
    ClassificationTag,
    EquilibriumCertificate,
    GameClassification,
    Rejection,
    RejectionReason,
)
from app.models.game import AngularParams, PayCoefficients
from app.models.reduced import ReducedGame, SymReducedGame, TorusPoint
from app.services.reduction_service import ReductionService
from app.utils.algebra2 import block_matrix, mat2, max_abs, vec2

CriterionResult = Union[EquilibriumCertificate, Rejection]


class EquilibriumService:
    def __init__(self, settings: Settings):
        self.settings = settings
        self.reduction_service = ReductionService(settings)

    @staticmethod
    def game_value(cert: EquilibriumCertificate, trC: float) -> float:
        """Average payoff <H> from the reduced payoff: 4<H> = g + tr C."""
        return (cert.game_value_g + trC) / 4.0

    def check_criterion(self, rg: ReducedGame, x: TorusPoint, y: TorusPoint,
                        extra_slack: float = 0.0) -> CriterionResult:
        """Test -Ay + u = lam x, A^T x + v = mu y with lam, mu >= 0.

        Multipliers down to -(tol_multiplier * (1 + max|A|) + extra_slack) count as nonnegative.
        """
        scale = 1.0 + max_abs(rg.A)
        tol_cert = self.settings.tol_cert * scale
        slack = self.settings.tol_multiplier * scale + extra_slack

        pull_x = -rg.A @ y.x + rg.u
        pull_y = rg.A.T @ x.x + rg.v
        lam = float(pull_x @ x.x)
        mu = float(pull_y @ y.x)
        residual_x = float(np.linalg.norm(pull_x - lam * x.x))
        residual_y = float(np.linalg.norm(pull_y - mu * y.x))

        reason = None
        if residual_x > tol_cert:
            reason = RejectionReason.NOT_COLLINEAR_X
        elif residual_y > tol_cert:
            reason = RejectionReason.NOT_COLLINEAR_Y
        elif lam < -slack:
            reason = RejectionReason.NEGATIVE_LAMBDA
        elif mu < -slack:
            reason = RejectionReason.NEGATIVE_MU

        if reason is not None:
            return Rejection(reason=reason, lam=lam, mu=mu, residual_x=residual_x, residual_y=residual_y)

        g = self.reduction_service.g_payoff(rg, x, y)
        return EquilibriumCertificate(
            x=x, y=y, lam=lam, mu=mu,
            residual_x=residual_x, residual_y=residual_y,
            game_value_g=g, game_value_H=(g + rg.trC) / 4.0,
        )

    def eigen_angle(self, c: PayCoefficients) -> Union[float, ClassificationTag]:
        """theta* with cos 2theta* = (m - n) w1 w2 / Delta, or the reason it does not exist."""
        w1, w2 = c.omega
        delta = c.delta
        if abs(delta) <= self.settings.tol_delta * (c.n + c.m) * float(w1 ** 2 + w2 ** 2):
            return ClassificationTag.DEGENERATE

        t = (c.m - c.n) * w1 * w2 / delta
        # theta* must lie in the open interval (0, pi/2)
        if not -1.0 < t < 1.0:
            return ClassificationTag.NO_EIGEN_ANGLE
        return 0.5 * math.acos(t)

    def common_eigen_residual(self, c: PayCoefficients, theta: float, tau: float) -> float:
        omega = c.omega
        if not np.any(omega):
            raise ZeroOmegaError("omega = 0 has no eigenvector meaning")

        worst = 0.0
        for gamma in (theta, tau):
            k = math.cos(2.0 * gamma)
            # C M M^T with M M^T = [[1, cos 2g], [cos 2g, 1]]
            s = mat2(c.C @ np.array([[1.0, k], [k, 1.0]]))
            image = s @ omega
            rho = float(image @ omega / (omega @ omega))
            residual = float(np.linalg.norm(image - rho * omega))
            worst = max(worst, residual / (max(max_abs(s), 1e-300) * float(np.linalg.norm(omega))))
        return worst

    def common_eigen_check(self, c: PayCoefficients, theta: float, tau: float) -> bool:
        return self.common_eigen_residual(c, theta, tau) <= self.settings.tol_eigvec

    def is_eigenequilibrium(self, rg: ReducedGame, x: TorusPoint, y: TorusPoint) -> bool:
        stacked = np.concatenate([x.x, y.x])
        image = block_matrix(rg.A) @ stacked
        rho = float(image @ stacked / (stacked @ stacked))
        residual = float(np.linalg.norm(image - rho * stacked))
        return residual <= self.settings.tol_cert * (1.0 + max_abs(rg.A))

    def interchange(
        self, rg: ReducedGame, first: EquilibriumCertificate, second: EquilibriumCertificate
    ) -> Tuple[CriterionResult, CriterionResult]:
        """Re-check the exchanged pairs (x1, y2) and (x2, y1) of two equilibria."""
        return (
            self.check_criterion(rg, first.x, second.y),
            self.check_criterion(rg, second.x, first.y),
        )

    @staticmethod
    def candidate_values(sym: SymReducedGame) -> Tuple[float, float]:
        """Values of g at x = y = z/|z| and at x = -z/|z|, y = z/|z|."""
        z_norm = float(np.linalg.norm(sym.z))
        return -sym.alpha_eig, sym.alpha_eig - 2.0 * z_norm

    def _certify(self, rg: ReducedGame, x: TorusPoint, y: TorusPoint,
                 extra_slack: float = 0.0) -> EquilibriumCertificate:
        result = self.check_criterion(rg, x, y, extra_slack)
        if isinstance(result, Rejection):
            raise ServiceError(f"Constructed eigenequilibrium failed re-verification: {result.reason.value}")
        return result

    def solve(self, c: PayCoefficients) -> GameClassification:
        if not np.any(c.omega):
            logger.info(f"Game {c.as_list()} has omega = 0; no equilibrium exists")
            return GameClassification(tag=ClassificationTag.NO_OMEGA)

        angle = self.eigen_angle(c)
        if isinstance(angle, ClassificationTag):
            logger.info(f"Game {c.as_list()} classified {angle.value} by the eigen-angle step")
            return GameClassification(tag=angle)

        theta_star = angle
        cos_two_theta = math.cos(2.0 * theta_star)
        rg = self.reduction_service.reduce(c, AngularParams.symmetric(theta_star))
        sym = self.reduction_service.symmetrize(rg)
        logger.info(f"Game {c.as_list()}: theta*={theta_star}, z={sym.z.tolist()}, alpha={sym.alpha_eig}")

        base = dict(theta_star=theta_star, cos_two_theta=cos_two_theta, z=sym.z, alpha_eig=sym.alpha_eig)
        if not self.common_eigen_check(c, theta_star, theta_star):
            logger.error(f"omega is not a common eigenvector at theta*={theta_star} for c={c.as_list()}")
            return GameClassification(tag=ClassificationTag.NOT_COMMON_EIGENVECTOR, **base)

        z_norm = float(np.linalg.norm(sym.z))
        s_value = float(sym.z @ sym.A @ sym.z)
        z_cubed = z_norm ** 3
        tol_cmp = self.settings.tol_cmp * (1.0 + max_abs(sym.A)) * z_cubed
        base.update(s_value=s_value, z_norm_cubed=z_cubed)

        direction = TorusPoint(vec2(sym.z / z_norm))
        opposite = TorusPoint(vec2(-sym.z / z_norm))

        if abs(s_value - z_cubed) <= tol_cmp:
            # inside the band lam = |z| - alpha may sit just below zero
            band = self.settings.tol_cmp * (1.0 + max_abs(sym.A)) * z_norm
            certificates = (self._certify(rg, direction, direction, band), self._certify(rg, opposite, direction, band))
            logger.info(f"Game {c.as_list()} sits on the boundary <Az,z> = |z|^3: two eigenequilibria")
            return GameClassification(tag=ClassificationTag.DUAL_EIGEN, certificates=certificates, **base)

        if s_value < z_cubed:
            certificate = self._certify(rg, direction, direction)
            logger.debug(f"lambda={certificate.lam} (closed form {z_norm - sym.alpha_eig}), "
                         f"mu={certificate.mu} (closed form {z_norm + sym.alpha_eig})")
            return GameClassification(tag=ClassificationTag.UNIQUE_EIGEN, certificates=(certificate,), **base)

        logger.info(f"Game {c.as_list()}: <Az,z>={s_value} exceeds |z|^3={z_cubed}; no eigenequilibrium")
        return GameClassification(tag=ClassificationTag.HYPOTHESIS_FAILED, **base)
