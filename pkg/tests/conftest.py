from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from votesim.core import Candidate, SimParams, Voter, world_from_agents


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and report.when == "call":
        status = "PASS" if report.passed else "FAIL"
        num, title = marker.args
        terminal = item.config.pluginmanager.get_plugin("terminalreporter")
        if terminal is not None:
            terminal.write_line(f"[acceptance criterion {num}] {status}: {title}")


def make_voter(
    vid: int = 0,
    position=(0.5, 0.5),
    openness: float = 0.2,
    charisma: float = 0.5,
    tolerance: float = 0.5,
    conformity: float = 0.0,
) -> Voter:
    return Voter(
        id=vid,
        position=position,
        openness=openness,
        charisma=charisma,
        tolerance=tolerance,
        conformity=conformity,
    )


def make_candidate(cid: int = 0, position=(0.5, 0.5), repulsion: float = 0.0) -> Candidate:
    return Candidate(id=cid, label=f"C{cid}", position=position, repulsion=repulsion)


def make_world(candidates, voters, scandals=(), time=0, **param_overrides):
    defaults = dict(
        num_voters=len(voters),
        num_candidates=len(candidates),
        social_step=0.01,
        candidate_attraction_step=0.005,
    )
    defaults.update(param_overrides)
    params = SimParams(**defaults)
    return world_from_agents(params, candidates, voters, scandals, time=time)


@pytest.fixture
def two_candidate_world():
    candidates = [make_candidate(0, (0.2, 0.5)), make_candidate(1, (0.8, 0.5))]
    voters = [
        make_voter(0, (0.25, 0.5), openness=0.2, tolerance=0.9),
        make_voter(1, (0.75, 0.5), openness=0.2, tolerance=0.9),
        make_voter(2, (0.5, 0.9), openness=0.05, tolerance=0.9),
    ]
    return make_world(candidates, voters)
