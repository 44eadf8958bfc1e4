"""
Suite registry and runner.

Each suite owns a seeded numpy Generator, suites run on a thread pool and the
merged report is ordered by suite name, so a fixed config yields a fixed report.
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

# --- Project Imports ---
from core.config import settings
from core.exceptions import ConfigurationException
from core.logger import logger
from models.common import ModelSpace, SpinLabel
from models.report import IdentityCheck, Suite, SuiteConfig, VerificationReport
from services.clifford_service import clifford_service
from services.cone_service import cone_service
from services.geometry_service import geometry_service
from services.identity_service import identity_service
from services.irrep_service import irrep_service
from services.killing_service import killing_service
from services.tensor_service import tensor_service

PROVENANCE = "spinlab verification suites"

# levels beyond these are covered by the algebraic suites only
TENSOR_LEVEL_LIMIT = 9
CONE_SPIN_LIMIT = 10

SuiteRunner = Callable[[SuiteConfig, np.random.Generator], list[IdentityCheck]]


def _half_integral(config: SuiteConfig, limit: int | None = None) -> list[SpinLabel]:
    top = config.max_two_s if limit is None else min(config.max_two_s, limit)
    return [SpinLabel(two_s=n) for n in range(1, top + 1, 2)]


def _irreps(config: SuiteConfig, rng: np.random.Generator) -> list[IdentityCheck]:
    checks = []
    for n in range(config.max_two_s + 1):
        checks.extend(irrep_service.verify_irrep(SpinLabel(two_s=n), config.basis,
                                                 config.algebra_tolerance))
    return checks


def _clifford(config: SuiteConfig, rng: np.random.Generator) -> list[IdentityCheck]:
    tol = config.algebra_tolerance
    checks = []
    for n in range(config.max_two_s + 1):
        label = SpinLabel(two_s=n)
        checks.extend(clifford_service.decomposition_checks(label, tol))
        checks.extend(clifford_service.verify_p_relations(label, tol, rng).checks)
        checks.extend(clifford_service.structure_checks(label, tol, rng))
    return checks


def _identities(config: SuiteConfig, rng: np.random.Generator) -> list[IdentityCheck]:
    tol = config.algebra_tolerance
    checks = []
    for label in _half_integral(config):
        checks.extend(identity_service.run_level(label, tol, rng))

    # n = 3 carries every Killing number once c takes its forced value
    for j in range(0, 3):
        s = 3 + 2 * j
        forced = 4 * 0.25 / (s * (s - 2))
        report = identity_service.check_dimension_obstruction(3, j, 0.5, forced, tol)
        checks.extend(report.checks)
    checks.extend(identity_service.check_dimension_obstruction(4, 1, 0.0, 0.0, tol).checks)
    active = identity_service.check_dimension_obstruction(5, 2, 0.5, 0.0, tol)
    checks.extend(c for c in active.checks if c.name == "obstruction.active")
    return checks


def _killing(config: SuiteConfig, rng: np.random.Generator) -> list[IdentityCheck]:
    checks = []
    for label in _half_integral(config):
        for space in ModelSpace:
            checks.extend(geometry_service.verify_model_space(space, label,
                                                              config.algebra_tolerance))
        checks.extend(killing_service.run_level(label, config.tolerance, config.samples,
                                                rng))
    checks.extend(killing_service.h3_bootstrap_check(tolerance=config.tolerance).checks)
    return checks


def _tensors(config: SuiteConfig, rng: np.random.Generator) -> list[IdentityCheck]:
    checks = []
    top = min(config.max_two_s, TENSOR_LEVEL_LIMIT)
    for n in range(top + 1):
        checks.extend(tensor_service.run_level(SpinLabel(two_s=n), config.tolerance,
                                               config.samples, rng))
    checks.extend(tensor_service.d1_symbol_check(config.algebra_tolerance).checks)
    return checks


def _cone(config: SuiteConfig, rng: np.random.Generator) -> list[IdentityCheck]:
    checks = list(cone_service.verify_so4_splitting(
        tolerance=config.algebra_tolerance, rng=rng).checks)
    for label in _half_integral(config, 2 * CONE_SPIN_LIMIT + 1):
        checks.extend(cone_service.run_level(label, config.tolerance, config.samples, rng))
    return checks


SUITES: dict[Suite, SuiteRunner] = {
    Suite.IRREPS: _irreps,
    Suite.CLIFFORD: _clifford,
    Suite.IDENTITIES: _identities,
    Suite.KILLING: _killing,
    Suite.TENSORS: _tensors,
    Suite.CONE: _cone,
}


class SuiteService:
    """Runs the selected verification suites and merges their reports"""

    def suite_rng(self, config: SuiteConfig, suite: Suite) -> np.random.Generator:
        return np.random.default_rng([config.seed, list(Suite).index(suite)])

    def run_one(self, config: SuiteConfig, suite: Suite) -> VerificationReport:
        runner = SUITES.get(Suite(suite))
        if runner is None:
            raise ConfigurationException(f"Unknown suite: {suite}")
        logger.info(f"Running suite {suite.value} up to twoS={config.max_two_s}")
        checks = runner(config, self.suite_rng(config, suite))
        report = VerificationReport.build(suite.value, checks, PROVENANCE)
        logger.info(f"Suite {suite.value}: {report.summary.passed}/"
                    f"{report.summary.total} passed, max residual "
                    f"{report.summary.max_residual:.3g}")
        return report

    def run_suite(self, config: SuiteConfig) -> VerificationReport:
        """Run every selected suite and merge the checks ordered by suite name."""
        selected = sorted(set(config.suites), key=lambda s: s.value)
        if not selected:
            raise ConfigurationException("No suite selected")
        workers = max(1, min(settings.MAX_WORKERS, len(selected)))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda s: self.run_one(config, s), selected))
        checks = [c for report in reports for c in report.checks]
        failed = [c for c in checks if not c.passed]
        for check in failed:
            logger.warning(f"FAILED {check.suite}:{check.name} at twoS={check.two_s} "
                           f"residual={check.residual:.3g} tolerance={check.tolerance:.1g}")
        return VerificationReport.build(",".join(s.value for s in selected), checks,
                                        PROVENANCE, config.echo())


suite_service = SuiteService()
