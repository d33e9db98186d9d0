import csv
import io
import json
import math
import time
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger
from pydantic import ValidationError

from app import __version__
from app.config import Settings
from app.exceptions import AngleUnderdeterminedError, InputError, OutputError, ServiceError
from app.models.equilibrium import ClassificationTag, EquilibriumCertificate, GameClassification
from app.models.game import AngularParams, PayCoefficients
from app.models.oracle import GridSpec, OracleResult
from app.models.reduced import ReducedGame
from app.models.report import (
    AnalysisReport,
    CertificateReport,
    ClusterReport,
    DerivedQuantities,
    GameSpecFile,
    OracleSummary,
)
from app.services.equilibrium_service import EquilibriumService
from app.services.oracle_service import OracleService, angular_distance, grid_angles, grid_points, point_angle
from app.services.quantum_service import QuantumService
from app.services.reduction_service import ReductionService

LANDSCAPE_HEADER = ["phi_x", "phi_y", "g", "H"]


def _fmt(value: float) -> str:
    return f"{value:.12g}"


class AnalysisService:
    def __init__(self, settings: Settings):
        self.settings = settings
        self.quantum_service = QuantumService(settings)
        self.reduction_service = ReductionService(settings)
        self.equilibrium_service = EquilibriumService(settings)
        self.oracle_service = OracleService(settings)

    @staticmethod
    def load_spec(path: str) -> GameSpecFile:
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise InputError(f"Cannot read game spec {path}: {e}")
        try:
            return GameSpecFile.model_validate(json.loads(text))
        except json.JSONDecodeError as e:
            raise InputError(f"Game spec {path} is not valid JSON: {e}")
        except ValidationError as e:
            details = "; ".join(err["msg"] for err in e.errors())
            raise InputError(f"Invalid game spec {path}: {details}")

    def resolve_angles(self, spec: GameSpecFile, classification: GameClassification) -> AngularParams:
        if spec.theta is not None:
            return AngularParams(theta=spec.theta, tau=spec.tau)
        if classification.theta_star is not None:
            return AngularParams.symmetric(classification.theta_star)
        raise AngleUnderdeterminedError(
            f"Angles cannot be derived for a game classified {classification.tag.value}; "
            f"supply theta and tau in the spec file"
        )

    def _derived(self, c: PayCoefficients, classification: GameClassification) -> DerivedQuantities:
        return DerivedQuantities(
            omega=c.omega.tolist(), n=c.n, m=c.m, delta=c.delta, trC=c.n + c.m,
            theta_star=classification.theta_star,
            cos_two_theta=classification.cos_two_theta,
            z=None if classification.z is None else classification.z.tolist(),
            alpha_eig=classification.alpha_eig,
            s_value=classification.s_value,
            z_norm_cubed=classification.z_norm_cubed,
        )

    def _certificate_report(self, rg: ReducedGame, cert: EquilibriumCertificate) -> CertificateReport:
        return CertificateReport(
            x=cert.x.x.tolist(), y=cert.y.x.tolist(),
            lam=cert.lam, mu=cert.mu,
            residual_x=cert.residual_x, residual_y=cert.residual_y,
            g=cert.game_value_g, H=self.equilibrium_service.game_value(cert, rg.trC),
            eigenequilibrium=self.equilibrium_service.is_eigenequilibrium(rg, cert.x, cert.y),
        )

    def _classify(self, spec: GameSpecFile) -> Tuple[PayCoefficients, GameClassification]:
        c = PayCoefficients.from_list(spec.c)
        return c, self.equilibrium_service.solve(c)

    def analyze(self, spec: GameSpecFile) -> AnalysisReport:
        started = time.perf_counter()
        c, classification = self._classify(spec)
        report = self._report(spec, c, classification)
        report.elapsed_seconds = time.perf_counter() - started
        return report

    def _report(self, spec: GameSpecFile, c: PayCoefficients, classification: GameClassification) -> AnalysisReport:
        certificates = []
        if classification.certificates:
            rg = self.reduction_service.reduce(c, AngularParams.symmetric(classification.theta_star))
            certificates = [self._certificate_report(rg, cert) for cert in classification.certificates]
        return AnalysisReport(
            version=__version__,
            input=spec,
            derived=self._derived(c, classification),
            classification=classification.tag.value,
            certificates=certificates,
        )

    def _grid_spec(self, spec: GameSpecFile, c: PayCoefficients,
                   resolution: Optional[int], epsilon: Optional[float]) -> GridSpec:
        override = spec.grid
        if resolution is None:
            resolution = override.resolution if override and override.resolution else self.settings.grid_resolution
        if epsilon is None and override and override.epsilon is not None:
            epsilon = override.epsilon
        if epsilon is None:
            epsilon = self.oracle_service.default_epsilon(c, resolution)
        try:
            return GridSpec(resolution=resolution, epsilon=epsilon)
        except ValidationError as e:
            raise InputError(f"Invalid grid: {e}")

    def _agreement(self, rg: ReducedGame, ang: AngularParams, classification: GameClassification,
                   result: OracleResult, cluster_passes: List[bool]) -> Tuple[Optional[bool], List[bool]]:
        if classification.tag == ClassificationTag.NO_OMEGA:
            return not any(cluster_passes), []

        same_game = (classification.theta_star is not None
                     and abs(ang.theta - classification.theta_star) <= self.settings.tol_angle_equal
                     and abs(ang.tau - classification.theta_star) <= self.settings.tol_angle_equal)
        if not same_game or not classification.certificates:
            return None, []

        verified = [self.oracle_service.verify_certificate(rg, cert, result.spec)
                    for cert in classification.certificates]
        reach = 2.0 * 2.0 * math.pi / result.spec.resolution
        located = all(
            any(angular_distance((cert.x, cert.y), (cl.representative.x, cl.representative.y)) <= reach
                for cl in result.clusters)
            for cert in classification.certificates
        )
        agreement = len(result.clusters) == len(classification.certificates) and located and all(verified)
        return agreement, verified

    def analyze_with_oracle(self, spec: GameSpecFile, resolution: Optional[int] = None,
                            epsilon: Optional[float] = None) -> AnalysisReport:
        started = time.perf_counter()
        c, classification = self._classify(spec)
        ang = self.resolve_angles(spec, classification)
        grid = self._grid_spec(spec, c, resolution, epsilon)

        rg = self.reduction_service.reduce(c, ang)
        result = self.oracle_service.grid_nash(rg, grid)
        cluster_passes = [
            isinstance(self.equilibrium_service.check_criterion(rg, cl.representative.x, cl.representative.y),
                       EquilibriumCertificate)
            for cl in result.clusters
        ]
        agreement, verified = self._agreement(rg, ang, classification, result, cluster_passes)
        if agreement is False:
            logger.warning(f"Oracle and analytic classification disagree for c={spec.c}")

        report = self._report(spec, c, classification)
        report.oracle = OracleSummary(
            resolution=grid.resolution, epsilon=grid.epsilon, theta=ang.theta, tau=ang.tau,
            raw_hits=len(result.hits),
            clusters=[
                ClusterReport(
                    i=cl.representative.i, j=cl.representative.j,
                    phi_x=point_angle(cl.representative.x) % (2.0 * math.pi),
                    phi_y=point_angle(cl.representative.y) % (2.0 * math.pi),
                    g=cl.representative.g_value, size=cl.size, regret=cl.representative.regret,
                    criterion_passes=passes,
                )
                for cl, passes in zip(result.clusters, cluster_passes)
            ],
            discarded_clusters=len(result.discarded),
            certificates_verified=verified,
            agreement=agreement,
        )
        report.elapsed_seconds = time.perf_counter() - started
        return report

    def landscape_rows(self, spec: GameSpecFile, resolution: Optional[int] = None) -> List[Tuple[float, float, float, float]]:
        """Rows (phi_x, phi_y, g, H) over the angle grid, ordered by (k_x, k_y).

        H is evaluated through the pay operator at alpha = (phi_x + theta)/2,
        beta = (phi_y + tau)/2, the inverse of the torus change of variables.
        """
        c, classification = self._classify(spec)
        ang = self.resolve_angles(spec, classification)
        if resolution is None:
            resolution = spec.grid.resolution if spec.grid and spec.grid.resolution else self.settings.landscape_resolution

        rg = self.reduction_service.reduce(c, ang)
        h = self.quantum_service.build_pay_operator(c, ang)
        phis = grid_angles(resolution)
        points = grid_points(resolution)
        g = self.reduction_service.g_payoff_grid(rg, points, points)
        H = self.quantum_service.expectation_grid(h, 0.5 * (phis + ang.theta), 0.5 * (phis + ang.tau))
        phi_x, phi_y = np.meshgrid(phis, phis, indexing="ij")
        rows = list(zip(phi_x.ravel().tolist(), phi_y.ravel().tolist(), g.ravel().tolist(), H.ravel().tolist()))
        logger.info(f"Computed {len(rows)} landscape rows for c={spec.c}")
        return rows

    @staticmethod
    def render_landscape(rows: List[Tuple[float, float, float, float]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(LANDSCAPE_HEADER)
        for row in rows:
            writer.writerow([_fmt(value) for value in row])
        return buffer.getvalue()

    def write_landscape(self, rows: List[Tuple[float, float, float, float]], out: str) -> int:
        try:
            Path(out).write_text(self.render_landscape(rows), newline="\n")
        except OSError as e:
            raise OutputError(f"Cannot write landscape to {out}: {e}")
        except Exception as e:
            if isinstance(e, ServiceError):
                raise
            raise OutputError(f"Failed to write landscape: {str(e)}")
        return len(rows)
