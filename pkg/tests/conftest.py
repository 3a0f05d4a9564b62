import random

import pytest

from boundary_slopes import data
from boundary_slopes.families import member
from boundary_slopes.triangulation import FACES, FaceGluing, Triangulation, check, edge_classes

ODD_PERMS = [p for p in __import__("itertools").permutations(range(4))
             if sum(p[i] > p[j] for i in range(4) for j in range(i + 1, 4)) % 2]


def random_triangulation(n_tets: int, rng: random.Random, max_tries: int = 20000) -> Triangulation:
    """Random oriented gluing of ``n_tets`` tets with as many edge classes as tets."""
    for _ in range(max_tries):
        slots = [(t, f) for t in range(n_tets) for f in range(4)]
        rng.shuffle(slots)
        tets = [[None] * 4 for _ in range(n_tets)]
        ok = True
        for (t, f), (u, h) in zip(slots[0::2], slots[1::2]):
            if (t, f) == (u, h):
                ok = False
                break
            # choose an odd vertex map sending face f onto face h
            (miss_f,) = set(range(4)) - set(FACES[f])
            (miss_h,) = set(range(4)) - set(FACES[h])
            perm = rng.choice([p for p in ODD_PERMS if p[miss_f] == miss_h])
            g = FaceGluing(u, perm)
            tets[t][f] = g
            tets[u][h] = FaceGluing(t, g.inverse_map())
        if not ok:
            continue
        tri = Triangulation(tuple(tuple(r) for r in tets))
        check(tri)
        if len(edge_classes(tri)) == n_tets:
            return tri
    raise RuntimeError("no triangulation with matching edge count found")


@pytest.fixture(scope="session")
def k5():
    return member("K", 5)


@pytest.fixture(scope="session")
def j2():
    return member("J", 2)


@pytest.fixture(scope="session")
def shipped():
    return {name: data.triangulation(name) for name in data.TRIANGULATIONS}
