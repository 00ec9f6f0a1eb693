"""Oracle-equivalence suites: every closed form in the library against an
independent numerical route, with one pass/fail line per suite.

``fast`` keeps every grid small enough for interactive use; ``full`` runs
the production grids.  A propagator can be injected to exercise the
negative control (a tampered closed form must fail the suite).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .discrimination import f_n, f_n_pipeline
from .evolution import (
    PhysicalFields,
    evolution_closed_form,
    evolution_oracle,
    normalize_fields,
    params_from_bj,
)
from .linalg import projector
from .states import initial_pair, schmidt, schmidt_closed_form
from .stochastic import (
    GaussianTime,
    gaussian_mixed_state,
    quadrature_oracle,
    witness_table,
    witness_table_numeric,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}  {self.name}: max deviation {self.max_deviation:.3e} "
                f"(tolerance {self.tolerance:.1e})")


@dataclass(frozen=True)
class VerifyReport:
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        out = [c.line() for c in self.checks]
        out.append("all checks passed" if self.ok else "VERIFICATION FAILED")
        return out


def _check_propagator(level: str, propagator) -> CheckResult:
    n_draws = 10_000 if level == "full" else 2_000
    rng = np.random.default_rng(1234)
    worst = 0.0
    for _ in range(n_draws):
        j_phys = rng.uniform(0.0, 3.0)
        b1, b2 = rng.uniform(-3.0, 3.0, 2)
        fields = PhysicalFields(b1=b1, b2=b2, j=j_phys)
        if fields.scale < 1e-9:
            continue
        t = rng.uniform(-2.0 * math.pi, 2.0 * math.pi)
        p = normalize_fields(fields)
        dev = np.abs(propagator(p, p.scale * t) - evolution_oracle(fields, t)).max()
        worst = max(worst, float(dev))
    return CheckResult("propagator closed form vs spectral oracle", worst, 1e-10)


def _check_schmidt(level: str, propagator) -> CheckResult:
    n = 20 if level == "full" else 8
    worst = 0.0
    for theta in np.linspace(0.0, math.pi / 2.0, n):
        for j in np.linspace(0.0, 0.5, n):
            p = params_from_bj(1.1, j)
            for t in np.linspace(0.0, 2.0 * math.pi, n):
                _, beta2 = initial_pair(theta)
                lam = schmidt(propagator(p, t) @ beta2)
                closed = schmidt_closed_form(theta, j, t)
                worst = max(worst, abs(lam[0] - closed.lambda1),
                            abs(lam[1] - closed.lambda2))
    return CheckResult("Schmidt closed form vs reduced-density eigenvalues", worst, 1e-9)


def _check_f_n(level: str, propagator) -> CheckResult:
    n_th, n_b = (20, 20) if level == "full" else (6, 6)
    n_jt = 5 if level == "full" else 3
    worst = 0.0
    for theta in np.linspace(0.0, math.pi / 2.0, n_th):
        for b_plus in np.linspace(0.0, 5.0, n_b):
            for j in np.linspace(0.0, 0.5, n_jt):
                for t in np.linspace(0.1, 2.0 * math.pi, n_jt):
                    worst = max(worst, abs(f_n(theta, b_plus, j, t)
                                           - f_n_pipeline(theta, b_plus, j, t)))
    return CheckResult("do-nothing closed form vs state pipeline", worst, 1e-9)


def _check_mixed(level: str, propagator) -> CheckResult:
    n_th = 5 if level == "full" else 3
    worst = 0.0
    t0_values = (math.pi / 2.0, 3.0 * math.pi / 4.0, 7.0 * math.pi / 4.0)
    for theta in np.linspace(0.0, math.pi / 2.0, n_th):
        for b_plus in np.linspace(0.0, 2.0, n_th):
            p = params_from_bj(b_plus, 1.0 / 6.0)
            _, beta2 = initial_pair(theta)
            rho = projector(beta2)
            for t0 in t0_values:
                for s in (0.0, t0 / 6.0, t0 / 3.0):
                    g = GaussianTime(t0, s)
                    dev = np.abs(gaussian_mixed_state(rho, p, g)
                                 - quadrature_oracle(rho, p, g, nodes=64)).max()
                    worst = max(worst, float(dev))
    return CheckResult("Gaussian mixing analytic vs quadrature oracle", worst, 1e-8)


def _check_witnesses(level: str, propagator) -> CheckResult:
    n = 5 if level == "full" else 3
    worst = 0.0
    for theta in np.linspace(0.0, math.pi / 2.0, n):
        for b_plus in np.linspace(0.0, 2.0, n):
            p = params_from_bj(b_plus, 1.0 / 6.0)
            for t0 in (math.pi / 2.0, 7.0 * math.pi / 4.0):
                for s in (0.0, t0 / 4.0):
                    g = GaussianTime(t0, s)
                    closed = witness_table(theta, p, g)
                    numeric = witness_table_numeric(theta, p, g)
                    worst = max(worst, max(abs(closed[k] - numeric[k]) for k in closed))
    return CheckResult("witness closed forms vs mixing pipeline", worst, 1e-9)


_SUITES = (
    ("propagator closed form vs spectral oracle", 1e-10, _check_propagator),
    ("Schmidt closed form vs reduced-density eigenvalues", 1e-9, _check_schmidt),
    ("do-nothing closed form vs state pipeline", 1e-9, _check_f_n),
    ("Gaussian mixing analytic vs quadrature oracle", 1e-8, _check_mixed),
    ("witness closed forms vs mixing pipeline", 1e-9, _check_witnesses),
)


def run_verify(level: str = "fast", propagator=None) -> VerifyReport:
    """Run every oracle-equivalence suite and collect pass/fail lines.

    ``propagator`` substitutes the closed-form propagator in the suites
    that consume one (negative-control hook); default is the real one.
    A suite that raises counts as an infinite deviation, never an abort.
    """
    if level not in ("fast", "full"):
        raise ValueError(f"level must be 'fast' or 'full', got {level!r}")
    propagator = propagator or evolution_closed_form
    checks = []
    for name, tolerance, suite in _SUITES:
        try:
            checks.append(suite(level, propagator))
        except Exception:  # noqa: BLE001 - a broken route must fail, not abort
            checks.append(CheckResult(name, math.inf, tolerance))
    return VerifyReport(checks=tuple(checks))
