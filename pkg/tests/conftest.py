import json
import pathlib

import numpy as np
import pytest

from rouxlab import constructions
from rouxlab.abelian import make_group
from rouxlab.roux import Homomorphism, Roux, complete_roux, embed

DATA = pathlib.Path(__file__).parent / "data"
SAMPLES = pathlib.Path(__file__).parent.parent / "samples"
SEED = 20240611


def constructed_roux() -> dict[str, Roux]:
    """Every roux the constructions module can build cheaply, keyed by name."""
    out = {
        "conference4": constructions.conference4_roux(),
        "complete5_trivial": complete_roux(5),
        "complete4_c2": complete_roux(4, make_group([2])),
        "hoggar1": constructions.hoggar_family(1),
        "hoggar3": constructions.hoggar_family(3),
    }
    for k in (1, 2, 3, 4):
        out[f"conference_iter{k}"] = constructions.conference_roux(constructions.conference_iterate(k))
    for q, m in ((2, 1), (3, 1), (4, 1), (5, 1), (7, 1), (8, 1), (9, 1), (2, 2), (3, 2)):
        out[f"thas_somma_{q}_{m}"] = constructions.thas_somma(q, m)
    for q in (3, 5, 7, 9, 11, 13):
        out[f"psl{q}"] = constructions.psl_roux(q)
    # a disconnected one: the conference roux sitting inside C4 x C3
    big = make_group([4, 3])
    out["conference4_in_c4xc3"] = embed(constructions.conference4_roux(),
                                        Homomorphism(constructions.C4, big, [(1, 0)]))
    return out


_CACHE: dict = {}


@pytest.fixture(scope="session")
def zoo() -> dict[str, Roux]:
    if "zoo" not in _CACHE:
        _CACHE["zoo"] = constructed_roux()
    return _CACHE["zoo"]


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def random_switch(B: Roux, rng) -> Roux:
    from rouxlab.roux import switch
    G = B.group
    D = [G.elements[int(k)] for k in rng.integers(0, G.order, size=B.n)]
    return switch(B, D)


def random_permutation(B: Roux, rng) -> Roux:
    p = rng.permutation(B.n)
    return Roux(B.group, B.idx[np.ix_(p, p)])


def load_json(path):
    with open(path) as fh:
        return json.load(fh)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
