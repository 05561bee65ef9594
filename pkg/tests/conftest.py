import json
from pathlib import Path

import numpy as np
import pytest

from lucanon import linalg
from lucanon.rng import SeededStream
from lucanon.tensor import StateTensor, new_state, normalize

DATA = Path(__file__).parent / "data"
S2 = 1 / np.sqrt(2)
GAMMA = np.sqrt(0.1)


@pytest.fixture(scope="session")
def derived():
    return json.loads((DATA / "derived_values.json").read_text())


@pytest.fixture
def ghz():
    return new_state([2, 2, 2], [S2, 0, 0, 0, 0, 0, 0, S2])


@pytest.fixture
def w_state():
    return normalize(new_state([2, 2, 2], [0, 1, 1, 0, 1, 0, 0, 0]))


def diag44(alpha=0.8, beta=0.4, gamma=GAMMA):
    return new_state([4, 4], np.diag([alpha, beta, gamma, gamma]))


@pytest.fixture
def diag_fixture():
    return diag44()


@pytest.fixture(params=linalg.available_backends())
def backend(request):
    previous = linalg.set_backend(request.param)
    yield request.param
    linalg.set_backend(previous)


def latin_state(seed: int, perturb: bool = False):
    """3x3x3 state supported on k = i + j (mod 3).

    Slices in every mode have disjoint supports, so the tensor is already
    all-orthogonal whatever the phases. The phase system has a 2-dimensional
    integer left kernel; a phase kick on a single entry violates it.
    """
    st = SeededStream(seed, 7)
    mags = 0.2 + st.uniform(9)
    phases = 2 * np.pi * st.uniform(9)
    arr = np.zeros((3, 3, 3), dtype=complex)
    cells = [(i, j) for i in range(3) for j in range(3)]
    for k, (i, j) in enumerate(cells):
        arr[i, j, (i + j) % 3] = mags[k] * np.exp(1j * phases[k])
    if perturb:
        i, j = cells[int(st.uniform(1)[0] * 9)]
        kick = 0.5 + (2 * np.pi - 1.0) * st.uniform(1)[0]
        arr[i, j, (i + j) % 3] *= np.exp(1j * kick)
    return normalize(StateTensor(arr))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report(capsys):
    """Record and print one PASS/FAIL line for an acceptance criterion."""

    def emit(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print(f"\n{line}")
        return ok

    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
