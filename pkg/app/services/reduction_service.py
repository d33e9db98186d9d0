import math
from typing import Tuple

import numpy as np
from loguru import logger

from app.config import Settings
from app.exceptions import AnglesDifferError, ReductionError, SingularAngleError, ZeroOmegaError
from app.models.game import AngularParams, PayCoefficients
from app.models.reduced import ReducedGame, SymReducedGame, TorusPoint
from app.utils.algebra2 import Mat2, eig_sym2, mat2, max_abs, vec2

UNIT_TOL = 1e-12
SINGULAR_TOL = 1e-15
E = np.ones(2)


def torus_point(values) -> TorusPoint:
    x = vec2(values)
    norm = float(np.linalg.norm(x))
    if abs(norm - 1.0) > UNIT_TOL:
        raise ReductionError(f"Torus point must be a unit vector, got norm {norm}")
    return TorusPoint(x)


def angle_point(phi: float) -> TorusPoint:
    return TorusPoint(vec2([math.cos(phi), math.sin(phi)]))


class ReductionService:
    def __init__(self, settings: Settings):
        self.tol_angle_equal = settings.tol_angle_equal
        self.tol_sym = settings.tol_sym
        self.tol_degenerate_eig = settings.tol_degenerate_eig

    @staticmethod
    def mat_m(gamma: float) -> Mat2:
        c, s = math.cos(gamma), math.sin(gamma)
        return mat2([[c, -s], [c, s]])

    @staticmethod
    def _require_regular(theta: float):
        if abs(math.sin(2.0 * theta)) <= SINGULAR_TOL:
            raise SingularAngleError(f"M_theta is singular at theta={theta} (sin 2theta = 0)")

    def reduce(self, c: PayCoefficients, ang: AngularParams) -> ReducedGame:
        m_theta, m_tau = self.mat_m(ang.theta), self.mat_m(ang.tau)
        omega = c.omega
        A = mat2(m_theta.T @ c.C @ m_tau)
        u = vec2(m_theta.T @ omega)
        v = vec2(m_tau.T @ omega)
        logger.debug(f"Reduced game c={c.as_list()} to A={A.tolist()}, u={u.tolist()}, v={v.tolist()}")
        return ReducedGame(
            A=A, u=u, v=v, omega=omega,
            n=c.n, m=c.m, trC=c.n + c.m,
            theta=ang.theta, tau=ang.tau, delta=c.delta,
        )

    def to_torus(self, alpha: float, theta: float) -> TorusPoint:
        """Circle point x with 2p(alpha) = M_theta x + e.

        Solving the 2x2 system gives the branch x = (cos(2a - theta), sin(2a - theta)).
        """
        self._require_regular(theta)
        return angle_point(2.0 * alpha - theta)

    def from_torus(self, x: TorusPoint, theta: float) -> Tuple[float, float]:
        self._require_regular(theta)
        point = torus_point(x.x)
        p = 0.5 * (self.mat_m(theta) @ point.x + E)
        p = np.clip(p, 0.0, 1.0)
        return float(p[0]), float(p[1])

    @staticmethod
    def g_payoff(rg: ReducedGame, x: TorusPoint, y: TorusPoint) -> float:
        return float(-x.x @ rg.A @ y.x + x.x @ rg.u - rg.v @ y.x)

    @staticmethod
    def g_payoff_grid(rg: ReducedGame, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """g at every pair of rows of xs and ys, shape (len(xs), len(ys))."""
        return -(xs @ rg.A @ ys.T) + (xs @ rg.u)[:, None] - (ys @ rg.v)[None, :]

    def symmetrize(self, rg: ReducedGame) -> SymReducedGame:
        if abs(rg.theta - rg.tau) > self.tol_angle_equal:
            raise AnglesDifferError(f"Symmetric reduction needs theta == tau, got {rg.theta} and {rg.tau}")
        if not np.any(rg.omega):
            raise ZeroOmegaError("omega = b - a vanishes, so z = M^T omega = 0")

        A = mat2(0.5 * (rg.A + rg.A.T))
        low, high, _, _ = eig_sym2(A, self.tol_sym, self.tol_degenerate_eig)
        if low < -self.tol_sym * max_abs(A):
            logger.warning(f"Symmetric reduced matrix is not PSD: spectrum ({low}, {high})")
        z = vec2(self.mat_m(rg.theta).T @ rg.omega)
        alpha_eig = float(z @ A @ z / (z @ z))
        return SymReducedGame(A=A, z=z, trC=rg.trC, alpha_eig=alpha_eig, theta=rg.theta)
