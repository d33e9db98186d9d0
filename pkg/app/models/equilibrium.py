import enum
from typing import NamedTuple, Optional, Tuple

from app.models.reduced import TorusPoint
from app.utils.algebra2 import Vec2


class ClassificationTag(str, enum.Enum):
    NO_OMEGA = "NoOmega"
    DEGENERATE = "Degenerate"
    NO_EIGEN_ANGLE = "NoEigenAngle"
    NOT_COMMON_EIGENVECTOR = "NotCommonEigenvector"
    UNIQUE_EIGEN = "UniqueEigen"
    DUAL_EIGEN = "DualEigen"
    HYPOTHESIS_FAILED = "HypothesisFailed"


class RejectionReason(str, enum.Enum):
    NEGATIVE_LAMBDA = "NegativeLambda"
    NEGATIVE_MU = "NegativeMu"
    NOT_COLLINEAR_X = "NotCollinearX"
    NOT_COLLINEAR_Y = "NotCollinearY"


class EquilibriumCertificate(NamedTuple):
    x: TorusPoint
    y: TorusPoint
    lam: float
    mu: float
    residual_x: float
    residual_y: float
    game_value_g: float
    game_value_H: float


class Rejection(NamedTuple):
    reason: RejectionReason
    lam: float
    mu: float
    residual_x: float
    residual_y: float


class GameClassification(NamedTuple):
    tag: ClassificationTag
    theta_star: Optional[float] = None
    cos_two_theta: Optional[float] = None
    z: Optional[Vec2] = None
    alpha_eig: Optional[float] = None
    s_value: Optional[float] = None
    z_norm_cubed: Optional[float] = None
    certificates: Tuple[EquilibriumCertificate, ...] = ()
