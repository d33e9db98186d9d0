import math
from typing import List, Sequence

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from app.utils.algebra2 import Mat2, Vec2, mat2, vec2

HALF_PI = math.pi / 2


class PayCoefficients(BaseModel):
    c1: float = Field(..., ge=0, allow_inf_nan=False)
    c2: float = Field(..., ge=0, allow_inf_nan=False)
    c3: float = Field(..., ge=0, allow_inf_nan=False)
    c4: float = Field(..., ge=0, allow_inf_nan=False)

    class Config:
        frozen = True

    @classmethod
    def from_list(cls, values: Sequence[float]) -> "PayCoefficients":
        values = list(values)
        if len(values) != 4:
            raise ValueError(f"expected 4 coefficients, got {len(values)}")
        return cls(c1=values[0], c2=values[1], c3=values[2], c4=values[3])

    def as_list(self) -> List[float]:
        return [self.c1, self.c2, self.c3, self.c4]

    def scaled(self, factor: float) -> "PayCoefficients":
        return PayCoefficients.from_list([factor * c for c in self.as_list()])

    @property
    def total(self) -> float:
        return self.c1 + self.c2 + self.c3 + self.c4

    @property
    def a(self) -> Vec2:
        return vec2([self.c1, self.c2])

    @property
    def b(self) -> Vec2:
        return vec2([self.c3, self.c4])

    @property
    def omega(self) -> Vec2:
        return vec2(self.b - self.a)

    @property
    def n(self) -> float:
        return self.c1 + self.c3

    @property
    def m(self) -> float:
        return self.c2 + self.c4

    @property
    def C(self) -> Mat2:
        return mat2(np.diag([self.n, self.m]))

    @property
    def delta(self) -> float:
        # det [[n, m], [w1^2, w2^2]]
        w1, w2 = self.omega
        return float(self.n * w2 ** 2 - self.m * w1 ** 2)


class AngularParams(BaseModel):
    theta: float = Field(..., allow_inf_nan=False)
    tau: float = Field(..., allow_inf_nan=False)

    class Config:
        frozen = True

    @field_validator('theta', 'tau')
    @classmethod
    def open_quarter_turn(cls, value: float) -> float:
        if not 0.0 < value < HALF_PI:
            raise ValueError(f"angle {value} must lie in the open interval (0, pi/2) radians")
        return value

    @classmethod
    def symmetric(cls, theta: float) -> "AngularParams":
        return cls(theta=theta, tau=theta)


class StrategyAngles(BaseModel):
    alpha: float = Field(..., allow_inf_nan=False)
    beta: float = Field(..., allow_inf_nan=False)

    class Config:
        frozen = True


class ProbabilityProfile(BaseModel):
    p1: float = Field(..., ge=0, le=1)
    p2: float = Field(..., ge=0, le=1)
    p3: float = Field(..., ge=0, le=1)
    p4: float = Field(..., ge=0, le=1)
    q1: float = Field(..., ge=0, le=1)
    q2: float = Field(..., ge=0, le=1)
    q3: float = Field(..., ge=0, le=1)
    q4: float = Field(..., ge=0, le=1)

    class Config:
        frozen = True

    @classmethod
    def from_pure(cls, p1: float, p2: float, q1: float, q2: float) -> "ProbabilityProfile":
        """Fill in the complementary probabilities of A3 = I - A1, A4 = I - A2 (and B)."""
        return cls(p1=p1, p2=p2, p3=1.0 - p1, p4=1.0 - p2,
                   q1=q1, q2=q2, q3=1.0 - q1, q4=1.0 - q2)

    @model_validator(mode='after')
    def complements_sum_to_one(self) -> "ProbabilityProfile":
        pairs = ((self.p1, self.p3), (self.p2, self.p4), (self.q1, self.q3), (self.q2, self.q4))
        for first, second in pairs:
            if abs(first + second - 1.0) > 1e-12:
                raise ValueError(f"complementary probabilities {first} and {second} do not sum to 1")
        return self
