"""Shared fixtures: preset profiles, memoized asymptotics, cached 2D sweeps."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import axishell as ax
from axishell import lame2d

ACCEPTANCE_LINES: list[str] = []


def record_criterion(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def profiles():
    return {mid: ax.preset(mid) for mid in "ABDHL"}


@pytest.fixture(scope="session")
def asym_results(profiles):
    cache = {}

    def get(mid):
        if mid not in cache:
            cache[mid] = ax.compute(profiles[mid])
        return cache[mid]

    return get


@pytest.fixture(scope="session")
def sweep2d(profiles, asym_results):
    """Memoized k-sweeps shared across acceptance and property tests."""
    cache = {}

    def run(mid, eps):
        key = (mid, eps)
        if key not in cache:
            cache[key] = lame2d.k_sweep(profiles[mid], eps, asym=asym_results(mid))
        return cache[key]

    return run


@pytest.fixture(scope="session")
def mode_trace(profiles):
    """Memoized single-mode solves + midline traces at chosen (model, eps, k)."""
    cache = {}

    def run(mid, eps, k, n_meridian, n_thickness=2):
        key = (mid, eps, k, n_meridian, n_thickness)
        if key not in cache:
            mesh = lame2d.build_meridian_mesh(profiles[mid], eps, n_meridian, n_thickness)
            system = lame2d.assemble_fourier_lame(mesh, k)
            rec, vec = lame2d.first_eigenpair_2d(system)
            cache[key] = (rec, lame2d.midline_mode_trace(system, vec))
        return cache[key]

    return run
