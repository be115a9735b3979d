"""Acceptance gate: every quantitative guarantee at its pinned tolerance.

Each criterion prints one PASS/FAIL line (run pytest with -s to see them all,
or use the ``coronagrid certify`` CLI command, which runs the same checks).
"""

import pytest

from coronagrid import certify


@pytest.mark.parametrize(
    "number,name",
    [(num, name) for num, name, _, _ in certify.CRITERIA],
    ids=[f"{num:02d}-{name}" for num, name, _, _ in certify.CRITERIA])
def test_criterion(number, name, capsys):
    result = certify.run_criterion(number)
    with capsys.disabled():
        print("\n" + result.line(), end="")
    assert result.passed, result.detail


def test_certify_cli_exit_code():
    from coronagrid.cli import run
    assert run(["certify"]) == 0
