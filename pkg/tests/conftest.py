import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wangnorm import surface  # noqa: E402
from wangnorm.tileset import parse_polygon_set, parse_wang_tileset  # noqa: E402

DATA = Path(__file__).resolve().parent.parent / "data"

# Every GluedSurface built while the suite runs, for the Gauss-Bonnet audit.
SURFACES = []
_original_init = surface.GluedSurface.__init__


def _recording_init(self, *args, **kwargs):
    _original_init(self, *args, **kwargs)
    SURFACES.append(self)


surface.GluedSurface.__init__ = _recording_init


def load(name):
    text = (DATA / name).read_text()
    return parse_polygon_set(text) if name.endswith(".poly") else parse_wang_tileset(text)


@pytest.fixture
def mono():
    return load("mono.wts")


@pytest.fixture
def dead():
    return load("dead.wts")


@pytest.fixture
def checker():
    return load("checker.wts")


def pytest_collection_modifyitems(items):
    # the acceptance module audits surfaces built by the rest of the suite, so it runs last
    items.sort(key=lambda item: item.nodeid.split("::")[0].endswith("test_acceptance.py"))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    RESULTS = module.RESULTS
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])
