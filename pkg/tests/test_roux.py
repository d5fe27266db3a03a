import json

import numpy as np
import pytest

from conftest import SAMPLES, random_permutation, random_switch
from rouxlab import constructions
from rouxlab.abelian import GroupRingElement, make_group
from rouxlab.roux import (ZERO, Homomorphism, Roux, RouxAxiomError, RouxError, RouxParameters,
                          RouxStructureError, complete_roux, embed, generated_subgroup, is_roux, load_roux,
                          minimal_group, normalize, pushforward, pushforward_parameters, scale,
                          scaled_parameters, square_counts, verify_roux)

C4 = make_group([4])


def group_ring_square(B: Roux):
    """Independent oracle: (B^2)_ij as GroupRingElements from entry-by-entry products."""
    G, n = B.group, B.n
    cells = [[GroupRingElement(G) if B.entry(i, j) is None else GroupRingElement.delta(G, B.entry(i, j))
              for j in range(n)] for i in range(n)]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = GroupRingElement(G)
            for k in range(n):
                acc = acc + cells[i][k] * cells[k][j]
            row.append(acc)
        out.append(row)
    return out


def test_conference4_parameters():
    params = verify_roux(constructions.conference4_roux())
    assert params.labelled() == {"1": 0, "i": 1, "-1": 0, "-i": 1}
    assert params.total == 2


@pytest.mark.parametrize("name", ["conference4", "hoggar1", "thas_somma_3_1", "psl5", "complete4_c2"])
def test_square_counts_match_group_ring_oracle(zoo, name):
    B = zoo[name]
    C = square_counts(B)
    oracle = group_ring_square(B)
    for i in range(B.n):
        for j in range(B.n):
            assert np.array_equal(C[:, i, j], oracle[i][j].counts())


@pytest.mark.parametrize("name", ["conference4", "hoggar1", "thas_somma_3_1", "psl7"])
def test_b_squared_identity(zoo, name):
    """B^2 = (n-1)I + sum_g c_g gB cell by cell."""
    B = zoo[name]
    G, n = B.group, B.n
    params = verify_roux(B)
    oracle = group_ring_square(B)
    for i in range(n):
        for j in range(n):
            if i == j:
                want = GroupRingElement(G, {G.identity: n - 1})
            else:
                want = GroupRingElement(G, {G.op(g, B.entry(i, j)): params[g] for g in G.elements})
            assert oracle[i][j] == want


def test_structural_errors_name_axiom_and_cell():
    with pytest.raises(RouxStructureError) as exc:
        Roux(C4, [[0, 1], [3, ZERO]])
    assert exc.value.axiom == "R1" and exc.value.cell == (0, 0)
    with pytest.raises(RouxStructureError) as exc:
        Roux(C4, [[ZERO, 7], [3, ZERO]])
    assert exc.value.axiom == "R2" and exc.value.cell == (0, 1)
    with pytest.raises(RouxStructureError) as exc:
        Roux(C4, [[ZERO, 1], [1, ZERO]])
    assert exc.value.axiom == "R3"


def test_r4_failure_reports_conflict():
    idx = np.array(constructions.CONFERENCE4)
    idx[1, 2], idx[2, 1] = 3, 1
    B = Roux(C4, idx)
    with pytest.raises(RouxAxiomError) as exc:
        verify_roux(B)
    assert exc.value.cell != (0, 1)
    assert not is_roux(B)


def test_parameters_check_rejects_bad_sums():
    with pytest.raises(RouxError):
        RouxParameters(C4, (0, 1, 0, 2)).check(4)
    with pytest.raises(RouxError):
        RouxParameters(C4, (0, 2, 0, 0)).check(4)


def test_complete_roux():
    assert verify_roux(complete_roux(5)).counts == (3,)
    assert verify_roux(complete_roux(4, C4)).counts == (2, 0, 0, 0)


def test_json_round_trip_and_sample():
    B = constructions.conference4_roux()
    assert Roux.from_json(json.loads(B.dumps())) == B
    assert load_roux(SAMPLES / "conference4.roux.json") == B


def test_switching_preserves_parameters(zoo, rng):
    for name in ("conference4", "psl5", "thas_somma_4_1"):
        B = zoo[name]
        p = verify_roux(B)
        for _ in range(5):
            assert verify_roux(random_switch(B, rng)) == p


def test_normalize_first_row_identity(zoo):
    B = zoo["hoggar3"]
    N = normalize(B)
    e = C4.index(C4.identity)
    assert (N.idx[0, 1:] == e).all() and (N.idx[1:, 0] == e).all()
    assert normalize(N) == N


def test_scale_by_involution():
    B = constructions.conference4_roux()
    p = verify_roux(B)
    S = scale(B, (2,))
    assert verify_roux(S) == scaled_parameters(p, (2,))
    with pytest.raises(RouxError):
        scale(B, (1,))


def test_pushforward_to_quotient():
    B = constructions.conference4_roux()
    C2 = make_group([2])
    phi = Homomorphism(C4, C2, [(1,)])
    P = pushforward(B, phi)
    assert verify_roux(P) == pushforward_parameters(verify_roux(B), phi)
    assert verify_roux(P).counts == (0, 2)


def test_homomorphism_validation():
    with pytest.raises(ValueError):
        Homomorphism(make_group([3]), C4, [(1,)])  # order 3 cannot map to an element of order 4


def test_embed_and_minimal_group():
    big = make_group([4, 2])
    phi = Homomorphism(C4, big, [(1, 0)])
    B = embed(constructions.conference4_roux(), phi)
    p = verify_roux(B)
    sub, small = minimal_group(B, p)
    assert sub.index == 2
    assert sub.group.order == 4
    assert verify_roux(small).total == 2


def test_generated_subgroup():
    G = make_group([6])
    sub = generated_subgroup(G, [(2,)])
    assert sub.group.order == 3 and sub.index == 2


def test_permuting_indices_preserves_roux(zoo, rng):
    B = zoo["psl7"]
    assert verify_roux(random_permutation(B, rng)) == verify_roux(B)
