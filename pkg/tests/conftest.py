"""Shared fan fixtures used across the test suite."""

import itertools

import pytest

from toric_ic.fan import load_fan


def p1_spec():
    return dict(rank=1, rays=[[1], [-1]], maximal_cones=[[0], [1]])


def p2_spec():
    return dict(
        rank=2,
        rays=[[1, 0], [0, 1], [-1, -1]],
        maximal_cones=[[0, 1], [1, 2], [2, 0]],
    )


def p1xp1_spec():
    return dict(
        rank=2,
        rays=[[1, 0], [0, 1], [-1, 0], [0, -1]],
        maximal_cones=[[0, 1], [1, 2], [2, 3], [3, 0]],
    )


def octahedron_spec():
    rays = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, 0, 0], [0, -1, 0], [0, 0, -1]]
    maximal = [
        [i, j, k]
        for i in (0, 3)
        for j in (1, 4)
        for k in (2, 5)
    ]
    return dict(rank=3, rays=rays, maximal_cones=maximal)


def cube_spec():
    rays = [list(v) for v in itertools.product((1, -1), repeat=3)]
    idx = {tuple(v): i for i, v in enumerate(rays)}
    maximal = []
    for axis in range(3):
        for sign in (1, -1):
            maximal.append(sorted(
                idx[v] for v in idx if v[axis] == sign
            ))
    return dict(rank=3, rays=rays, maximal_cones=maximal)


ALL_SPECS = {
    "p1": p1_spec,
    "p2": p2_spec,
    "p1xp1": p1xp1_spec,
    "octahedron": octahedron_spec,
    "cube": cube_spec,
}


@pytest.fixture(scope="session")
def p1():
    return load_fan(**p1_spec())


@pytest.fixture(scope="session")
def p2():
    return load_fan(**p2_spec())


@pytest.fixture(scope="session")
def p1xp1():
    return load_fan(**p1xp1_spec())


@pytest.fixture(scope="session")
def octahedron():
    return load_fan(**octahedron_spec())


@pytest.fixture(scope="session")
def cube():
    return load_fan(**cube_spec())


@pytest.fixture(scope="session")
def all_fans(p1, p2, p1xp1, octahedron, cube):
    return {
        "p1": p1,
        "p2": p2,
        "p1xp1": p1xp1,
        "octahedron": octahedron,
        "cube": cube,
    }
