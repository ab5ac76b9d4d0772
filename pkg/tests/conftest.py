"""Shared fixtures: tiny hand-checkable corpora and the benchmark fixture."""

import pytest

from semcloud import Assignment, build_corpus, standard_fixture


@pytest.fixture(scope="session")
def fixture_corpus():
    """The documented dominant-plus-minor-topics corpus, seed 0."""
    return standard_fixture(0)


@pytest.fixture()
def tiny_corpus():
    """Three resources, four tags, known counts.

    r1: apple (users u1,u2), banana (u1)
    r2: apple (u1), cherry (u1,u2,u3)
    r3: banana (u2), date (u1)
    """
    return build_corpus(
        [
            Assignment("u1", "r1", "apple"),
            Assignment("u2", "r1", "apple"),
            Assignment("u1", "r1", "banana"),
            Assignment("u1", "r2", "apple"),
            Assignment("u1", "r2", "cherry"),
            Assignment("u2", "r2", "cherry"),
            Assignment("u3", "r2", "cherry"),
            Assignment("u2", "r3", "banana"),
            Assignment("u1", "r3", "date"),
        ]
    )
