"""
anyonwalk Test Configuration and Fixtures

Provides shared fixtures for all test modules:
- Anyon models for the levels the suite exercises
- A subprocess runner for the CLI
- Small ring sizes that keep exact evolutions fast
"""

import os
import subprocess
import sys
from pathlib import Path
from typing import Callable, List

import pytest

from anyonwalk.engine.anyon_model import INFINITY, AnyonModel, make_model

LEVELS = [1, 2, 3, 4, 5, 10, INFINITY]


@pytest.fixture(scope="session")
def project_root() -> Path:
    """Return the project root directory."""
    return Path(__file__).parent.parent.parent


@pytest.fixture(scope="session")
def abelian() -> AnyonModel:
    return make_model(1)


@pytest.fixture(scope="session")
def ising() -> AnyonModel:
    return make_model(2)


@pytest.fixture(scope="session")
def fibonacci_level() -> AnyonModel:
    """k=3, the first level whose moments are neither trivial nor Ising-like."""
    return make_model(3)


@pytest.fixture(scope="session")
def classical_limit() -> AnyonModel:
    return make_model(INFINITY)


@pytest.fixture(params=LEVELS, ids=lambda k: f"k={k}")
def any_model(request: pytest.FixtureRequest) -> AnyonModel:
    return make_model(request.param)


@pytest.fixture
def run_cli(project_root: Path, tmp_path: Path) -> Callable[..., subprocess.CompletedProcess]:
    """Run ``python -m anyonwalk`` inside ``tmp_path``."""
    env = dict(os.environ)
    env["PYTHONPATH"] = os.pathsep.join(
        [str(project_root)] + ([env["PYTHONPATH"]] if env.get("PYTHONPATH") else [])
    )
    env.pop("ANYONWALK_DEBUG", None)

    def run(*args: str, timeout: int = 120) -> subprocess.CompletedProcess:
        command: List[str] = [sys.executable, "-m", "anyonwalk", *args]
        return subprocess.run(
            command, capture_output=True, text=True, cwd=tmp_path, env=env, timeout=timeout
        )

    return run
