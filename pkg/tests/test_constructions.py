import json
from fractions import Fraction

import numpy as np
import pytest

from conftest import SAMPLES
from rouxlab import constructions as cons
from rouxlab.abelian import Character
from rouxlab.graphs import DracknParameters, drackn_check
from rouxlab.lines import (SignatureMatrix, detect_drackn_lines, detect_real_lines, detect_roux_lines, etf_check,
                           evaluate, hadamard_power)
from rouxlab.roux import RouxError, normalize, verify_roux


def test_conference_iterate_small():
    assert cons.conference_iterate(1).M.tolist() == [[0, 1], [-1, 0]]
    M = cons.conference_iterate(3).M
    assert M.shape == (8, 8)
    assert np.array_equal(M @ M.T, 7 * np.eye(8, dtype=int))
    with pytest.raises(ValueError):
        cons.conference_iterate(0)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_conference_roux_parameters(k):
    B = cons.conference_roux(cons.conference_iterate(k))
    half = 2 ** (k - 1) - 1
    assert verify_roux(B).labelled() == {"1": 0, "i": half, "-1": 0, "-i": half}


def test_conference_roux_rejects_symmetric():
    # Paley conference matrix of order 6 is symmetric
    q = 5
    chi = {x: (1 if x in (1, 4) else -1) for x in range(1, 5)}
    core = np.array([[0 if a == b else chi[(b - a) % q] for b in range(q)] for a in range(q)])
    C = np.zeros((6, 6), dtype=np.int64)
    C[0, 1:] = C[1:, 0] = 1
    C[1:, 1:] = core
    assert cons.ConferenceMatrix(C).is_conference()
    with pytest.raises(ValueError):
        cons.conference_roux(C)


def test_conference4_display_matches_iterate_parameters():
    a = verify_roux(cons.conference4_roux())
    b = verify_roux(cons.conference_roux(cons.conference_iterate(2)))
    assert a == b


@pytest.mark.parametrize("q, m, counts", [(3, 1, (1, 3, 3)), (2, 1, (0, 2))])
def test_thas_somma_parameters(q, m, counts):
    B = cons.thas_somma(q, m)
    assert B.n == q ** (2 * m)
    assert verify_roux(B).counts == counts


@pytest.mark.parametrize("q, m", [(2, 1), (3, 1), (4, 1), (5, 1), (7, 1), (8, 1), (9, 1), (2, 2), (3, 2)])
def test_thas_somma_formula_and_dimension(zoo, q, m):
    B = zoo[f"thas_somma_{q}_{m}"]
    params = verify_roux(B)
    top = q ** (2 * m - 1)
    ident = B.group.index(B.group.identity)
    assert all(c == (top - 2 if k == ident else top) for k, c in enumerate(params.counts))
    if q > 2:
        assert drackn_check(B, params) == cons.thas_somma_parameters(q, m)
    alpha = next(a for a in B.group.characters if not a.is_trivial())
    rep = etf_check(evaluate(B, alpha))
    n = q ** (2 * m)
    assert rep.is_etf and rep.d == q ** m * (q ** m + 1) // 2
    # trace and trace-of-square checks on the two eigenvalues
    (l1, m1), (l2, m2) = rep.eigenvalues
    assert l1 * m1 + l2 * m2 == 0
    assert l1 * l1 * m1 + l2 * l2 * m2 == n * (n - 1)


def test_thas_somma_drackn_lines(zoo):
    B = zoo["thas_somma_3_1"]
    alpha = Character(B.group, (1,))
    assert detect_drackn_lines(evaluate(B, alpha)).yes


def test_thas_somma_errors():
    with pytest.raises(ValueError):
        cons.thas_somma(6)
    with pytest.raises(ValueError):
        cons.thas_somma(3, 0)
    with pytest.raises(ValueError):
        cons.thas_somma(11, 2)


def test_gray_code():
    assert cons.gray(0) == (0, 0) and cons.gray(2) == (1, 1)
    assert [cons.gray_inverse(cons.gray(j)) for j in range(4)] == [0, 1, 2, 3]
    # consecutive codewords differ in one bit
    assert all(sum(x != y for x, y in zip(cons.gray(j), cons.gray((j + 1) % 4))) == 1 for j in range(4))
    with pytest.raises(ValueError):
        cons.gray(4)


def test_hoggar_family():
    assert verify_roux(cons.hoggar_family(1)).labelled() == {"1": 0, "i": 1, "-1": 0, "-i": 1}
    B3 = cons.hoggar_family(3)
    assert B3.n == 64
    assert verify_roux(B3).labelled() == {"1": 24, "i": 16, "-1": 6, "-i": 16}


def test_hoggar_k2_is_not_a_roux():
    with pytest.raises(ValueError):
        cons.hoggar_family(2)
    with pytest.raises(RouxError):
        verify_roux(cons.hoggar_family(2, allow_unsupported=True))


def test_hoggar_lines():
    B = cons.hoggar_family(3)
    S = evaluate(B, Character(B.group, (1,)))
    rep = etf_check(S)
    assert rep.d == 8 and rep.mu == Fraction(1, 3)
    assert rep.welch_equality
    assert detect_roux_lines(S).yes
    assert not detect_drackn_lines(S).yes
    assert etf_check(hadamard_power(S, 2)).d == 36


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
def test_psl_roux(zoo, q):
    B = zoo[f"psl{q}"]
    assert B.n == q + 1
    params = verify_roux(B)
    assert params == cons.psl_expected_parameters(q)
    S = evaluate(B, Character(B.group, (1,)))
    rep = etf_check(S)
    assert rep.is_etf and rep.d == (q + 1) // 2
    real = q % 4 == 1
    assert detect_real_lines(S) is real
    # real conference lines normalize to a C2 roux, which is a DRACKN with r = 2
    v = detect_drackn_lines(S)
    assert v.yes is real
    if real:
        assert v.r == 2


def test_su3_parameters():
    p, d = cons.su3_parameters(3, 4)
    assert p.counts == (2, 8, 8, 8) and d.n == 28
    p, d = cons.su3_parameters(3, 2)
    assert p.counts == (10, 16) and p.total == 26
    p, d = cons.su3_parameters(4, 5)
    assert d == DracknParameters(65, 5, 15) and d.delta == -12
    with pytest.raises(ValueError):
        cons.su3_parameters(3, 3)


def test_maximal_family():
    fam = cons.maximal_family_parameters(1)
    assert fam.params.labelled() == {"1": 24, "i": 16, "-1": 6, "-i": 16}
    assert (fam.n, fam.d) == (64, 8)
    fam = cons.maximal_family_parameters(2)
    assert fam.params.labelled() == {"1": 198, "i": 144, "-1": 88, "-i": 144}
    assert (fam.n, fam.d) == (576, 24) and fam.params.total == 574
    assert fam.params == cons.maximal_family_parameters(2).params
    with pytest.raises(ValueError):
        cons.maximal_family_parameters(0)


def test_lift_c4_signature():
    assert cons.lift_c4_signature(cons.conference4_signature()) == cons.conference4_roux()
    S = SignatureMatrix.from_json(json.loads((SAMPLES / "hoggar.sig.json").read_text()))
    assert normalize(cons.lift_c4_signature(S)) == normalize(cons.hoggar_family(3))
    exp = np.array(cons.CONFERENCE4)
    exp[1, 2], exp[2, 1] = 3, 1
    with pytest.raises(RouxError):
        cons.lift_c4_signature(SignatureMatrix(exp, 4))
    with pytest.raises(ValueError):
        cons.lift_c4_signature(SignatureMatrix([[-1, 1], [2, -1]], 3))
