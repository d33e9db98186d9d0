"""Brute-force equilibrium search on a discretized torus.

Player 1 maximizes g, player 2 minimizes it. Both unit circles are sampled
at phi_k = 2*pi*k/N and every grid pair is scanned for epsilon best
responses. This module evaluates g with its own arithmetic and never calls
into the analytic pipeline.
"""
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from typing import List, Tuple

import numpy as np
from loguru import logger

from app.config import Settings
from app.models.equilibrium import EquilibriumCertificate
from app.models.game import PayCoefficients
from app.models.oracle import GridSpec, OracleCluster, OracleEquilibrium, OracleResult
from app.models.reduced import ReducedGame, TorusPoint
from app.utils.algebra2 import vec2

TWO_PI = 2.0 * math.pi


def grid_angles(resolution: int) -> np.ndarray:
    return TWO_PI * np.arange(resolution) / resolution


def grid_points(resolution: int) -> np.ndarray:
    phi = grid_angles(resolution)
    return np.column_stack([np.cos(phi), np.sin(phi)])


def point_angle(point: TorusPoint) -> float:
    return math.atan2(point.x[1], point.x[0])


def angular_distance(first: Tuple[TorusPoint, TorusPoint], second: Tuple[TorusPoint, TorusPoint]) -> float:
    """Largest circular angle difference between the matching players of two strategy pairs."""
    worst = 0.0
    for p, q in zip(first, second):
        diff = abs(point_angle(p) - point_angle(q)) % TWO_PI
        worst = max(worst, min(diff, TWO_PI - diff))
    return worst


class OracleService:
    def __init__(self, settings: Settings):
        self.workers = settings.oracle_workers
        self.block_rows = settings.oracle_block_rows
        self.epsilon_factor = settings.epsilon_factor
        self.regret_factor = settings.regret_factor

    def default_epsilon(self, c: PayCoefficients, resolution: int) -> float:
        # payoff change over one grid step, with a safety factor
        return self.epsilon_factor * c.total * TWO_PI / resolution

    def default_spec(self, c: PayCoefficients, resolution: int) -> GridSpec:
        return GridSpec(resolution=resolution, epsilon=self.default_epsilon(c, resolution))

    @staticmethod
    def _payoff_block(rg: ReducedGame, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        # Cellwise arithmetic in a fixed order, so any row partition gives identical bits
        A, u, v = rg.A, rg.u, rg.v
        ay0 = A[0, 0] * ys[:, 0] + A[0, 1] * ys[:, 1]
        ay1 = A[1, 0] * ys[:, 0] + A[1, 1] * ys[:, 1]
        xu = xs[:, 0] * u[0] + xs[:, 1] * u[1]
        vy = v[0] * ys[:, 0] + v[1] * ys[:, 1]
        cross = xs[:, 0, None] * ay0[None, :] + xs[:, 1, None] * ay1[None, :]
        return (xu[:, None] - cross) - vy[None, :]

    @staticmethod
    def _continuum_gaps(rg: ReducedGame, xs: np.ndarray, ys: np.ndarray, g: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        # max over unit x of x.w is |w|, so each gap is measured against the exact best response
        A, u, v = rg.A, rg.u, rg.v
        w_norm = np.hypot(u[0] - (A[0, 0] * ys[:, 0] + A[0, 1] * ys[:, 1]),
                          u[1] - (A[1, 0] * ys[:, 0] + A[1, 1] * ys[:, 1]))
        q_norm = np.hypot(A[0, 0] * xs[:, 0] + A[1, 0] * xs[:, 1] + v[0],
                          A[0, 1] * xs[:, 0] + A[1, 1] * xs[:, 1] + v[1])
        xu = xs[:, 0] * u[0] + xs[:, 1] * u[1]
        vy = v[0] * ys[:, 0] + v[1] * ys[:, 1]
        gap_x = w_norm - (g + vy)
        gap_y = q_norm - (xu - g)
        return np.maximum(gap_x, 0.0), np.maximum(gap_y, 0.0)

    def best_response_x(self, rg: ReducedGame, y: TorusPoint, resolution: int) -> TorusPoint:
        xs = grid_points(resolution)
        values = self._payoff_block(rg, xs, y.x[None, :])[:, 0]
        k = int(np.argmax(values))  # first maximum, i.e. smallest k
        return TorusPoint(vec2(xs[k]))

    def best_response_y(self, rg: ReducedGame, x: TorusPoint, resolution: int) -> TorusPoint:
        ys = grid_points(resolution)
        values = self._payoff_block(rg, x.x[None, :], ys)[0]
        k = int(np.argmin(values))
        return TorusPoint(vec2(ys[k]))

    def _blocks(self, resolution: int) -> List[Tuple[int, int]]:
        return [(start, min(start + self.block_rows, resolution))
                for start in range(0, resolution, self.block_rows)]

    def grid_nash(self, rg: ReducedGame, spec: GridSpec) -> OracleResult:
        n = spec.resolution
        points = grid_points(n)
        blocks = self._blocks(n)
        logger.info(f"Scanning {n}x{n} grid in {len(blocks)} blocks with {self.workers} workers, eps={spec.epsilon}")

        def extremes(block):
            start, stop = block
            g = self._payoff_block(rg, points[start:stop], points)
            return g.max(axis=0), g.min(axis=1)

        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            partials = list(pool.map(extremes, blocks))
        column_max = np.max(np.stack([p[0] for p in partials]), axis=0)
        row_min = np.concatenate([p[1] for p in partials])

        def hits_in(block):
            start, stop = block
            g = self._payoff_block(rg, points[start:stop], points)
            gap_x = column_max[None, :] - g
            gap_y = g - row_min[start:stop, None]
            rows, cols = np.nonzero((gap_x <= spec.epsilon) & (gap_y <= spec.epsilon))
            regret_x, regret_y = self._continuum_gaps(rg, points[start + rows], points[cols], g[rows, cols])
            return [
                OracleEquilibrium(
                    i=start + int(r), j=int(col),
                    x=TorusPoint(vec2(points[start + r])), y=TorusPoint(vec2(points[col])),
                    g_value=float(g[r, col]),
                    deviation_gap_x=float(gap_x[r, col]), deviation_gap_y=float(gap_y[r, col]),
                    regret=float(rx + ry),
                )
                for r, col, rx, ry in zip(rows, cols, regret_x, regret_y)
            ]

        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            hits = [hit for block_hits in pool.map(hits_in, blocks) for hit in block_hits]

        limit = self.regret_limit(rg, n)
        clusters, discarded = [], []
        for cluster in self.merge_clusters(hits, n):
            (clusters if cluster.representative.regret <= limit else discarded).append(cluster)
        for cluster in discarded:
            rep = cluster.representative
            logger.warning(f"Discarding cluster of {cluster.size} hits at ({rep.i}, {rep.j}): regret {rep.regret} > {limit}")
        logger.info(f"Oracle found {len(hits)} raw hits in {len(clusters)} clusters")
        return OracleResult(spec=spec, hits=hits, clusters=clusters, discarded=discarded)

    def regret_limit(self, rg: ReducedGame, resolution: int) -> float:
        """Largest representative regret a cluster may carry and still count.

        One grid step of payoff variation, trC * 2pi / N, scaled by regret_factor.
        """
        return self.regret_factor * rg.trC * TWO_PI / resolution

    @staticmethod
    def merge_clusters(hits: List[OracleEquilibrium], resolution: int) -> List[OracleCluster]:
        """Connected components of the hits under 8-neighbour adjacency on the torus.

        Clusters come out ordered by their lowest (i, j) member. The representative
        is the member with the smallest regret, lowest (i, j) on ties. Grid gaps
        tie at rounding noise next to an exact equilibrium; regret does not.
        """
        index = {(hit.i, hit.j): k for k, hit in enumerate(hits)}
        seen = set()
        clusters = []
        for key in sorted(index):
            if key in seen:
                continue
            seen.add(key)
            queue = deque([key])
            members = []
            while queue:
                i, j = queue.popleft()
                members.append(hits[index[(i, j)]])
                for di in (-1, 0, 1):
                    for dj in (-1, 0, 1):
                        neighbour = ((i + di) % resolution, (j + dj) % resolution)
                        if neighbour in index and neighbour not in seen:
                            seen.add(neighbour)
                            queue.append(neighbour)
            representative = min(members, key=lambda h: (h.regret, h.i, h.j))
            clusters.append(OracleCluster(representative=representative, size=len(members)))
        return clusters

    def verify_certificate(self, rg: ReducedGame, cert: EquilibriumCertificate, spec: GridSpec) -> bool:
        points = grid_points(spec.resolution)
        x, y = cert.x.x[None, :], cert.y.x[None, :]
        value = float(self._payoff_block(rg, x, y)[0, 0])
        gain_x = float(np.max(self._payoff_block(rg, points, y)[:, 0])) - value
        gain_y = value - float(np.min(self._payoff_block(rg, x, points)[0]))
        logger.debug(f"Certificate deviation gains: player 1 {gain_x}, player 2 {gain_y}")
        return gain_x <= spec.epsilon and gain_y <= spec.epsilon
