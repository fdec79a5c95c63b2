from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture
def fixture_path():
    return lambda name: str(FIXTURES / f"{name}.json")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(params=["flint", "pure"])
def backend(request, monkeypatch):
    """Run a test on both resultant/gcd backends."""
    from surfint import _dmp
    if request.param == "flint":
        if not _dmp.USE_FLINT:
            pytest.skip("python-flint not available")
    else:
        monkeypatch.setattr(_dmp, "USE_FLINT", False)
    return request.param
