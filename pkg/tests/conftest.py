"""Shared pytest plumbing.

The acceptance tests report one human-readable verdict line each; the
summary hook prints them after the run so they are visible without -s.
"""

from __future__ import annotations

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(name: str, passed: bool, detail: str) -> None:
    verdict = "PASS" if passed else "FAIL"
    ACCEPTANCE_LINES.append(f"[acceptance] {name:<28s} {verdict}  ({detail})")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("-", "acceptance summary")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
