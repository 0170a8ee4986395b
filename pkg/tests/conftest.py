"""Shared fixtures and the acceptance summary hook.

The heavyweight gallery estimates are computed once per session and shared
between the acceptance criteria that consume them.
"""

import math
import time

import numpy as np
import pytest

from entro import (
    bd_count_table,
    compacta_estimate,
    entropy_estimate,
    friedland_estimate,
    inequality_report,
)
from entro.gallery import default_suite

ACCEPTANCE_LINES: list[str] = []


def record_criterion(tag: str, passed: bool, detail: str) -> None:
    status = "PASS" if passed else "FAIL"
    ACCEPTANCE_LINES.append(f"[acceptance] {tag}: {status}  {detail}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


class SuiteResult:
    def __init__(self, bundle, bd, bc, fr, elapsed):
        self.bundle = bundle
        self.bd = bd
        self.bc = bc
        self.fr = fr
        self.elapsed = elapsed
        self.verdict = inequality_report(bd, bc, fr)


@pytest.fixture(scope="session")
def suite_results():
    """Three-estimator results for every gallery bundle, computed once."""
    out = {}
    for bundle in default_suite():
        start = time.monotonic()
        table = bd_count_table(
            bundle.system,
            bundle.cloud,
            bundle.metric,
            eps_list=list(bundle.eps_list),
            n_max=bundle.n_max,
        )
        bd = entropy_estimate(table)
        bc = compacta_estimate(
            bundle.system, bundle.metric, bundle.family, list(bundle.eps_list), bundle.n_max
        )
        fr = friedland_estimate(
            bundle.system, bundle.cloud, list(bundle.eps_list), bundle.n_max, rho=bundle.rho
        )
        elapsed = time.monotonic() - start
        out[bundle.name] = SuiteResult(bundle, bd, bc, fr, elapsed)
    return out


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def log2():
    return math.log(2.0)
