import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE: dict[int, str] = {}


class _Criterion:
    def __init__(self, number: int, title: str, limit: float | None):
        self.number, self.title, self.limit = number, title, limit

    @contextmanager
    def timed(self):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            within = self.limit is None or elapsed < self.limit
            verdict = "PASS" if ok and within else "FAIL"
            bound = f" (limit {self.limit:g} s)" if self.limit is not None else ""
            line = f"criterion {self.number}: {verdict}  {self.title}  [{elapsed:.2f} s{bound}]"
            _ACCEPTANCE[self.number] = line
            print(line)
        assert within, f"criterion {self.number} took {elapsed:.2f} s, limit {self.limit} s"


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[n])
