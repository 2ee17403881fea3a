import contextlib

import pytest

_ACCEPTANCE: list[tuple[str, str, bool]] = []


class AcceptanceRecorder:
    @contextlib.contextmanager
    def criterion(self, cid: str, title: str):
        ok = False
        try:
            yield
            ok = True
        finally:
            _ACCEPTANCE.append((cid, title, ok))
            print(f"[acceptance {cid}] {'PASS' if ok else 'FAIL'}: {title}")


@pytest.fixture(scope="session")
def acceptance():
    return AcceptanceRecorder()


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid, title, ok in sorted(_ACCEPTANCE, key=lambda t: int(t[0])):
        terminalreporter.write_line(f"{cid:>2}. {'PASS' if ok else 'FAIL'}  {title}")
