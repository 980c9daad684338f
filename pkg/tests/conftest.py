import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # geodesy_oracle, fh_oracle

DATA = Path(__file__).parent / "data"


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion that ran."""
    try:
        from test_acceptance import CRITERION_RESULTS
    except ImportError:
        return
    if CRITERION_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_RESULTS:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def four_rooms_script() -> str:
    return (DATA / "four_rooms.script").read_text()


@pytest.fixture(scope="session")
def four_rooms_anchors() -> str:
    return (DATA / "four_rooms.anchors").read_text()


@pytest.fixture()
def four_rooms_model(four_rooms_script):
    from simkit.tracing.script import replay_script

    model, warnings = replay_script(four_rooms_script, 600, 400)
    assert not warnings
    return model


@pytest.fixture()
def four_rooms_geo(four_rooms_model, four_rooms_anchors):
    from simkit.georef import georegister, load_anchors

    return georegister(four_rooms_model, load_anchors(four_rooms_anchors))
