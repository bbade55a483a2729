import os
import re

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=100, deadline=None)
settings.register_profile("ci", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE_KEY] = []


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    rep = yield
    if rep.when == "call":
        item.stash["call_report"] = rep
    return rep


class Criterion:
    def __init__(self) -> None:
        self.detail = ""


@pytest.fixture
def criterion(request):
    """Records one acceptance line for the calling test: number, verdict, detail."""
    c = Criterion()
    yield c
    rep = request.node.stash.get("call_report", None)
    number = re.search(r"criterion_(\d+)", request.node.name).group(1)
    verdict = "PASS" if rep is not None and rep.passed else "FAIL"
    title = (request.node.function.__doc__ or "").strip().splitlines()[0]
    line = f"criterion {number}: {verdict}  {title}"
    if c.detail:
        line += f" [{c.detail}]"
    request.config.stash[_ACCEPTANCE_KEY].append(line)


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash[_ACCEPTANCE_KEY]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
