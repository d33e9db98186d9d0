from typing import NamedTuple

from app.utils.algebra2 import Mat2, Vec2


class TorusPoint(NamedTuple):
    """A point of one player's unit circle."""
    x: Vec2


class ReducedGame(NamedTuple):
    A: Mat2
    u: Vec2
    v: Vec2
    omega: Vec2
    n: float
    m: float
    trC: float
    theta: float
    tau: float
    delta: float


class SymReducedGame(NamedTuple):
    A: Mat2
    z: Vec2
    trC: float
    alpha_eig: float
    theta: float
