import random

import pytest

from brauerbox.permgrp import Perm, Subgroup, make_group, parse_cycles


@pytest.fixture(scope="session")
def a8_scene():
    from brauerbox.bootstrap import a8_scene as build
    return build()


@pytest.fixture(scope="session")
def local_scene():
    from brauerbox.bootstrap import local_scene as build
    return build()


@pytest.fixture(scope="session")
def a8(a8_scene):
    return a8_scene["G"]


@pytest.fixture(scope="session")
def sylow_p(a8_scene):
    return a8_scene["P"]


@pytest.fixture(scope="session")
def h_prime(a8_scene):
    return a8_scene["H"]


@pytest.fixture(scope="session")
def a7(a8_scene):
    return a8_scene["A7"]


def random_small_group(rng, max_order=720, max_degree=7):
    """A random permutation group of bounded order."""
    while True:
        n = rng.randrange(3, max_degree + 1)
        gens = []
        for _ in range(rng.randrange(1, 3)):
            images = list(range(n))
            rng.shuffle(images)
            gens.append(Perm(images))
        G = make_group(gens, degree=n)
        if 1 < G.order <= max_order:
            return G


def random_subgroup(rng, G, max_gens=2):
    """A random subgroup generated by a few random elements."""
    gens = [G.random_element(rng) for _ in range(rng.randrange(1, max_gens + 1))]
    return Subgroup(G, [g for g in gens if not g.is_identity()])
