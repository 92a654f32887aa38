import pytest
from hypothesis import settings
from hypothesis import strategies as st

from graphhom.fatgraph import FatGraph, cycles_of

settings.register_profile("default", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("default")

THETA = FatGraph.from_cycles([(0, 2, 4), (1, 5, 3)], labels={1: 0, 2: 1, 3: 3})
TWISTED_THETA = FatGraph.from_cycles([(0, 2, 4), (1, 3, 5)], labels={1: 0})
FIGURE_EIGHT = FatGraph.from_cycles([(0, 1, 2, 3)], labels={1: 0, 2: 1, 3: 3})
TWISTED_EIGHT = FatGraph.from_cycles([(0, 2, 1, 3)], labels={1: 0})
DUMBBELL = FatGraph.from_cycles([(0, 1, 4), (2, 3, 5)])
LOOP = FatGraph.from_cycles([(0, 1)], labels={1: 0, 2: 1})


def _connected(sigma):
    seen, todo = {0}, [0]
    while todo:
        d = todo.pop()
        for e in (sigma[d], d ^ 1):
            if e not in seen:
                seen.add(e)
                todo.append(e)
    return len(seen) == len(sigma)


@st.composite
def fat_graphs(draw, max_edges=4, min_valence=1, labeled=True):
    """Random connected fat graph with labelled boundary cycles."""
    E = draw(st.integers(1, max_edges))
    sigma = tuple(draw(st.permutations(range(2 * E))))
    if not _connected(sigma):
        # join everything into one vertex cycle instead
        sigma = tuple((d + 1) % (2 * E) for d in range(2 * E))
    g = FatGraph(2 * E, sigma)
    if min(len(c) for c in cycles_of(sigma)) < min_valence:
        sigma = tuple((d + 1) % (2 * E) for d in range(2 * E))
        g = FatGraph(2 * E, sigma)
    if labeled:
        orbits = g.boundary_orbits
        perm = draw(st.permutations(range(1, len(orbits) + 1)))
        g = g.with_labels({perm[i]: o[0] for i, o in enumerate(orbits)})
    return g


@pytest.fixture
def theta():
    return THETA
