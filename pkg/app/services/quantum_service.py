import math
from typing import NamedTuple

import numpy as np
from loguru import logger

from app.config import Settings
from app.exceptions import NotSymmetricError
from app.models.game import AngularParams, PayCoefficients, ProbabilityProfile, StrategyAngles
from app.utils.algebra2 import IDENTITY2, Mat2, Mat4, mat2, mat4, max_abs, tensor2, vec2


class ProjectorFamily(NamedTuple):
    A1: Mat2
    A2: Mat2
    A3: Mat2
    A4: Mat2
    B1: Mat2
    B2: Mat2
    B3: Mat2
    B4: Mat2


class QuantumService:
    def __init__(self, settings: Settings):
        self.tol_sym = settings.tol_sym

    @staticmethod
    def projector(gamma: float) -> Mat2:
        """Rank-1 projector onto (cos gamma, sin gamma)."""
        c, s = math.cos(gamma), math.sin(gamma)
        return mat2([[c * c, c * s], [c * s, s * s]])

    def projectors(self, ang: AngularParams) -> ProjectorFamily:
        # A2 projects onto (cos theta, sin theta) so that p2 = cos^2(alpha - theta)
        A1, A2 = self.projector(0.0), self.projector(ang.theta)
        B1, B2 = self.projector(0.0), self.projector(ang.tau)
        return ProjectorFamily(
            A1=A1, A2=A2, A3=mat2(IDENTITY2 - A1), A4=mat2(IDENTITY2 - A2),
            B1=B1, B2=B2, B3=mat2(IDENTITY2 - B1), B4=mat2(IDENTITY2 - B2),
        )

    def build_pay_operator(self, c: PayCoefficients, ang: AngularParams) -> Mat4:
        f = self.projectors(ang)
        h = (c.c3 * tensor2(f.A1, f.B3)
             + c.c1 * tensor2(f.A3, f.B1)
             + c.c4 * tensor2(f.A2, f.B4)
             + c.c2 * tensor2(f.A4, f.B2))
        logger.debug(f"Built pay operator for c={c.as_list()}, theta={ang.theta}, tau={ang.tau}")
        return mat4(h)

    @staticmethod
    def probabilities(s: StrategyAngles, ang: AngularParams) -> ProbabilityProfile:
        return ProbabilityProfile.from_pure(
            p1=math.cos(s.alpha) ** 2,
            p2=math.cos(s.alpha - ang.theta) ** 2,
            q1=math.cos(s.beta) ** 2,
            q2=math.cos(s.beta - ang.tau) ** 2,
        )

    @staticmethod
    def payoff_closed_form(c: PayCoefficients, prob: ProbabilityProfile) -> float:
        return (c.c3 * prob.p1 * prob.q3
                + c.c1 * prob.p3 * prob.q1
                + c.c4 * prob.p2 * prob.q4
                + c.c2 * prob.p4 * prob.q2)

    def expectation(self, h: Mat4, s: StrategyAngles) -> float:
        """Quadratic form of h at the product state (cos a, sin a) ⊗ (cos b, sin b)."""
        if np.max(np.abs(h - h.T)) > self.tol_sym * max_abs(h):
            raise NotSymmetricError("Pay operator must be symmetric")
        phi = vec2([math.cos(s.alpha), math.sin(s.alpha)])
        psi = vec2([math.cos(s.beta), math.sin(s.beta)])
        state = np.kron(phi, psi)
        return float(state @ h @ state)

    def expectation_grid(self, h: Mat4, alphas: np.ndarray, betas: np.ndarray) -> np.ndarray:
        """expectation over every (alpha_i, beta_j) pair at once, shape (len(alphas), len(betas))."""
        if np.max(np.abs(h - h.T)) > self.tol_sym * max_abs(h):
            raise NotSymmetricError("Pay operator must be symmetric")
        phi = np.column_stack([np.cos(alphas), np.sin(alphas)])
        psi = np.column_stack([np.cos(betas), np.sin(betas)])
        # h indexed as (a, b, c, d) with row index 2a + b, matching np.kron
        return np.einsum("ia,jb,abcd,ic,jd->ij", phi, psi, h.reshape(2, 2, 2, 2), phi, psi, optimize=True)
