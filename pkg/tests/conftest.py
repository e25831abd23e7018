import io
import json
import os

import numpy as np
import pytest

from soliton_spectra import cli, kernels

ACCEPTANCE_LINES = []


def seed() -> int:
    return int(os.environ.get("SOLITON_SPECTRA_SEED", "0") or 0)


@pytest.fixture
def rng():
    return np.random.default_rng(seed())


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request, monkeypatch):
    """Route the eigensolver through each available kernel backend."""
    module = kernels.available_backends()[request.param]
    for name in ("sturm_count", "bisect_eigenvalues", "shifted_solve"):
        monkeypatch.setattr(kernels, name, getattr(module, name))
    return request.param


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def write_factor(tmp_path, filename="factor", **doc):
    path = tmp_path / f"{filename}.json"
    path.write_text(json.dumps(doc))
    return path


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
