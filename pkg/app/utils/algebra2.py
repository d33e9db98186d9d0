"""Fixed-shape numeric kernel for 2-vectors, 2x2 and 4x4 matrices.

Vec2, Mat2 and Mat4 are float64 numpy arrays of shape (2,), (2, 2) and
(4, 4). The constructors below validate shape and finiteness and hand back
read-only arrays, so values never change after construction. Tensor
products use the basis order e1⊗e1, e1⊗e2, e2⊗e1, e2⊗e2.
"""
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from app.exceptions import NonFiniteError, NotSymmetricError

Vec2 = NDArray[np.float64]
Mat2 = NDArray[np.float64]
Mat4 = NDArray[np.float64]


class SymEigen(NamedTuple):
    eigenvalue1: float
    eigenvalue2: float
    eigenvector1: Vec2
    eigenvector2: Vec2


def _frozen(values: ArrayLike, shape: tuple, kind: str) -> NDArray[np.float64]:
    arr = np.array(values, dtype=np.float64)
    if arr.shape != shape:
        raise ValueError(f"{kind} expects shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{kind} entries must be finite: {arr.tolist()}")
    arr.setflags(write=False)
    return arr


def vec2(values: ArrayLike) -> Vec2:
    return _frozen(values, (2,), "Vec2")


def mat2(values: ArrayLike) -> Mat2:
    return _frozen(values, (2, 2), "Mat2")


def mat4(values: ArrayLike) -> Mat4:
    return _frozen(values, (4, 4), "Mat4")


IDENTITY2 = mat2(np.eye(2))


def max_abs(m: NDArray[np.float64]) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


def transpose(a: Mat2) -> Mat2:
    return mat2(a.T)


def mat2_mul(a: Mat2, b: Mat2) -> Mat2:
    return mat2(a @ b)


def is_symmetric(s: Mat2, tol: float = 1e-12) -> bool:
    return abs(s[0, 1] - s[1, 0]) <= tol * max_abs(s)


def _sign_normalized(v: NDArray[np.float64]) -> Vec2:
    # first nonzero component nonnegative
    lead = v[0] if v[0] != 0.0 else v[1]
    return vec2(-v if lead < 0 else v)


def eig_sym2(s: Mat2, tol_sym: float = 1e-12, tol_degenerate: float = 1e-12) -> SymEigen:
    """Closed-form eigendecomposition of a symmetric 2x2 matrix.

    Eigenvalues come back ascending, eigenvectors unit-norm with their first
    nonzero component nonnegative. Coincident eigenvalues (relative to the
    largest entry) return the canonical basis.
    """
    s = mat2(s)
    if not is_symmetric(s, tol_sym):
        raise NotSymmetricError(f"Matrix is not symmetric within {tol_sym}: {s.tolist()}")

    scale = max_abs(s)
    if scale == 0.0:
        return SymEigen(0.0, 0.0, vec2([1.0, 0.0]), vec2([0.0, 1.0]))

    unit = s / scale
    p, r = unit[0, 0], unit[1, 1]
    q = 0.5 * (unit[0, 1] + unit[1, 0])

    mid = 0.5 * (p + r)
    half_gap = float(np.hypot(0.5 * (p - r), q))
    low, high = mid - half_gap, mid + half_gap

    if 2.0 * half_gap <= tol_degenerate:
        return SymEigen(float(scale * low), float(scale * high), vec2([1.0, 0.0]), vec2([0.0, 1.0]))

    # Two algebraically equivalent kernel vectors of S - low*I; take the better conditioned one
    first = np.array([q, low - p])
    second = np.array([low - r, q])
    v = first if np.dot(first, first) >= np.dot(second, second) else second
    v = v / np.linalg.norm(v)
    w = np.array([-v[1], v[0]])

    return SymEigen(float(scale * low), float(scale * high), _sign_normalized(v), _sign_normalized(w))


def tensor2(a: Mat2, b: Mat2) -> Mat4:
    return mat4(np.kron(a, b))


def block_matrix(a: Mat2) -> Mat4:
    """The block matrix [[0, A], [A^T, 0]] acting on stacked (x, y)."""
    block = np.zeros((4, 4))
    block[:2, 2:] = a
    block[2:, :2] = np.asarray(a).T
    return mat4(block)
