from __future__ import annotations

import pytest

from g2gz.exact_field import SQRT3, FieldElement, parse_field

LAMBDAS = [FieldElement(1), SQRT3, parse_field("7/2"), parse_field("2+sqrt3")]

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def model():
    from g2gz.g2_model import build_model

    return build_model()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
