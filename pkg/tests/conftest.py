import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cayleyball import all_pairs_distances, build_ball, parse_group_spec


@pytest.fixture(scope="session")
def make_pair():
    """Session cache of (ball, dist) pairs keyed by group text and radius."""
    cache = {}

    def _make(text, r_in, generators=None):
        key = (text, r_in, tuple(generators) if generators else None)
        if key not in cache:
            ball = build_ball(parse_group_spec(text), r_in, generators=generators)
            cache[key] = (ball, all_pairs_distances(ball))
        return cache[key]

    return _make
