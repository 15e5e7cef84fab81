"""Shared fixtures: the reference configuration and one full run of it.

The default run integrates both branches over a whole loop, so it is built once
per session and shared by every module that only reads it.
"""

import pytest

from sgi_nanorotor.domain.dynamics.dto import InterferometerResult
from sgi_nanorotor.domain.dynamics.service import run_interferometer
from sgi_nanorotor.domain.params.dto import RunConfig
from sgi_nanorotor.domain.params.service import default_run_config


def with_stride(config: RunConfig, stride: int) -> RunConfig:
    output = config.output.model_copy(update={"stride": stride})
    return config.model_copy(update={"output": output})


@pytest.fixture
def default_config() -> RunConfig:
    return default_run_config()


@pytest.fixture(scope="session")
def fine_config() -> RunConfig:
    # Twenty samples per spin period keep trapezoidal quadrature of beta honest.
    return with_stride(default_run_config(), 10)


@pytest.fixture(scope="session")
def default_result(fine_config: RunConfig) -> InterferometerResult:
    return run_interferometer(fine_config, threads=2)
