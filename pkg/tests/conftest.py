import random

import pytest

from delmenu import Instance, Menu, full_menu, gen_random

OUTSIDE_MODES = ("none", "fixed", "random")


def random_independent(seed: int, outside: str | None = None, n: int = 3, support: int = 2):
    """Seeded random independent instance; outside mode cycles with the seed."""
    if outside is None:
        outside = OUTSIDE_MODES[seed % 3]
    return gen_random("independent", n=n, support_size=support, seed=seed, outside=outside)


def random_correlated(seed: int, outside: str | None = None, n: int = 3, profiles: int = 4):
    if outside is None:
        outside = OUTSIDE_MODES[seed % 3]
    return gen_random("correlated", n=n, support_size=profiles, seed=seed, outside=outside)


def random_menus(instance: Instance, count: int, seed: int) -> list[Menu]:
    """Random nonempty-unless-outside menus, always including the full menu."""
    rng = random.Random(seed)
    menus = [full_menu(instance)]
    while len(menus) < count:
        menu = frozenset(i for i in range(1, instance.n + 1) if rng.random() < 0.5)
        if not menu and not instance.has_outside:
            continue
        menus.append(menu)
    return menus


@pytest.fixture
def triangle_edges(tmp_path):
    path = tmp_path / "triangle.edges"
    path.write_text("1 2\n2 3\n1 3\n")
    return str(path)
