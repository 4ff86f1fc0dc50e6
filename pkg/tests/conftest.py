from __future__ import annotations

import functools

import pytest

from klw.hecke import KLTable

# (criterion number, PASS/FAIL, detail) lines recorded by test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, str]] = {}


@functools.lru_cache(maxsize=None)
def table_for(cartan: str) -> KLTable:
    return KLTable.build(cartan)


@pytest.fixture
def table():
    return table_for


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:>2}: {status}  {detail}")


@pytest.fixture
def acceptance():
    """``record(n, ok, detail)`` stores one summary line for criterion ``n``."""

    def record(num: int, ok: bool, detail: str) -> bool:
        ACCEPTANCE[num] = ("PASS" if ok else "FAIL", detail)
        print(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return record
