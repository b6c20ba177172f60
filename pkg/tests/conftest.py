from __future__ import annotations

import numpy as np
import pytest

from ghirano import testkit

_criteria: dict[str, dict] = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    number, title = mark.args
    entry = _criteria.setdefault(number, {"title": title, "tests": []})
    entry["tests"].append((item.name, call.excinfo is None))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria, key=int):
        entry = _criteria[number]
        ok = all(passed for _, passed in entry["tests"])
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {entry['title']}")
        for name, passed in entry["tests"]:
            if not passed:
                terminalreporter.write_line(f"    failed: {name}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def hirano_specs(count: int, seed: int, max_dim: int = 8, cond_max: float = 100.0):
    """Deterministic Hirano Jordan specs with ``n <= max_dim`` and ``cond <= cond_max``."""
    r = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(r.integers(1, max_dim + 1))
        out.append(testkit.random_spec(r, n, cond_bound=float(r.uniform(1.0, cond_max))))
    return out
