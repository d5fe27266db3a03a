import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from rouxlab import constructions
from rouxlab.abelian import Character
from rouxlab.lines import (SignatureError, SignatureMatrix, coherence, complete_signature, detect_drackn_lines,
                           detect_real_lines, detect_roux_lines, etf_check, evaluate, hadamard_power,
                           integrality_q, normalize, quadratic_conductor, real_roux_criterion, same_lines,
                           vectors_from_gram, welch_bound, welch_equality)
from rouxlab.roux import normalize as normalize_roux, verify_roux
from rouxlab.scheme import carries_scheme, idempotent_matrix, roux_scheme, same_partition
from rouxlab.surd import Surd

R3 = Surd.sqrt(3)


@pytest.fixture(scope="module")
def S4():
    return constructions.conference4_signature()


def test_conference4_signature_is_evaluation(S4):
    B = constructions.conference4_roux()
    S = evaluate(B, Character(B.group, (1,)))
    assert S == S4
    off = ~np.eye(4, dtype=bool)
    assert set(S.exp[off].tolist()) == {1, 3}


def test_trivial_character_gives_complete_pattern(zoo):
    B = zoo["hoggar1"]
    assert evaluate(B, Character(B.group, (0,))) == complete_signature(B.n)


def test_signature_validation():
    with pytest.raises(SignatureError):
        SignatureMatrix([[0, 1], [1, 0]], 4)  # diagonal not marked empty
    with pytest.raises(SignatureError):
        SignatureMatrix([[-1, 1], [1, -1]], 4)  # i and i are not conjugate
    with pytest.raises(SignatureError):
        SignatureMatrix(values=[[0, 2], [2, 0]])


def test_signature_json_round_trip(S4):
    assert SignatureMatrix.from_json(S4.to_json()) == S4
    numeric = SignatureMatrix(values=S4.values())
    assert SignatureMatrix.from_json(numeric.to_json()) == numeric
    assert SignatureMatrix.from_complex(S4.values()) == S4


def test_etf_check_conference4(S4):
    rep = etf_check(S4)
    assert rep.is_etf and rep.d == 2
    assert rep.mu * rep.mu == Fraction(1, 3)
    assert rep.welch_equality


def test_etf_check_complete_pattern():
    rep = etf_check(complete_signature(5))
    assert rep.is_etf and rep.d == 1


def test_etf_check_sign_flip_fails(S4):
    exp = S4.exp.copy()
    exp[0, 1], exp[1, 0] = (exp[0, 1] + 2) % 4, (exp[1, 0] + 2) % 4
    S = SignatureMatrix(exp, 4)
    assert not etf_check(S).is_etf
    # numeric oracle: more than two eigenvalues
    w = np.linalg.eigvalsh(S.values())
    assert len(np.unique(np.round(w, 8))) > 2
    assert not etf_check(SignatureMatrix(values=S.values())).is_etf


def test_numeric_etf_check_matches_exact(S4):
    rep = etf_check(SignatureMatrix(values=S4.values()))
    assert rep.is_etf and rep.d == 2
    assert rep.mu == pytest.approx(1 / math.sqrt(3), abs=1e-12)


@pytest.mark.parametrize("n, d, value", [(4, 2, 1 / math.sqrt(3)), (5, 5, 0.0), (64, 8, 1 / 3)])
def test_welch_bound(n, d, value):
    assert welch_bound(n, d) == pytest.approx(value, abs=1e-15)


def test_welch_bound_rejects_bad_dims():
    with pytest.raises(ValueError):
        welch_bound(2, 3)


def test_welch_equality_exact():
    assert welch_equality(R3 / 3, 4, 2)
    assert not welch_equality(-R3 / 3, 4, 2)


def test_hadamard_powers(S4):
    assert hadamard_power(S4, 1) == S4
    sq = hadamard_power(S4, 2)
    off = ~np.eye(4, dtype=bool)
    assert np.allclose(sq.values()[off], -1)
    assert hadamard_power(S4, 4) == complete_signature(4)
    with pytest.raises(ValueError):
        hadamard_power(S4, 0)


def test_vectors_from_identity():
    fam = vectors_from_gram(np.eye(3))
    assert fam.d == 3
    assert np.allclose(fam.vectors.conj().T @ fam.vectors, np.eye(3))


def test_vectors_from_conference_gram(S4):
    G = np.eye(4) + S4.values() / math.sqrt(3)
    fam = vectors_from_gram(G, 2)
    assert fam.n == 4 and fam.d == 2
    assert np.allclose(np.linalg.norm(fam.vectors, axis=0), 1)
    ov = np.abs(fam.gram()) ** 2
    assert np.allclose(ov[~np.eye(4, dtype=bool)], 1 / 3)
    assert coherence(fam.vectors) == pytest.approx(1 / math.sqrt(3))


def test_vectors_from_gram_errors():
    with pytest.raises(ValueError):
        vectors_from_gram(np.diag([1.0, -1.0]))
    with pytest.raises(ValueError):
        vectors_from_gram(np.eye(3), 2)
    with pytest.raises(ValueError):
        vectors_from_gram(np.array([[1, 1j], [1, 1]]))


@pytest.mark.parametrize("name", ["conference4", "hoggar1", "psl5", "thas_somma_3_1"])
def test_two_representations_give_same_lines(zoo, name):
    B = zoo[name]
    params = verify_roux(B)
    G = B.group
    for alpha in G.characters:
        if alpha.is_trivial():
            continue
        I = idempotent_matrix(B, alpha.inverse(), 1, params)
        rep = etf_check(evaluate(B, alpha))
        mu = float(rep.mu)
        big = vectors_from_gram(I.matrix, I.d)
        small = vectors_from_gram(np.eye(B.n) + mu * evaluate(B, alpha).values(), rep.d)
        assert big.d == small.d
        # align the two factorizations through the block-first vectors (i, e)
        first = big.vectors[:, ::G.order]
        U = first @ np.linalg.pinv(small.vectors)
        assert np.allclose(U.conj().T @ U, np.eye(big.d), atol=1e-8)
        assert same_lines(big.vectors, U @ small.vectors)
        # each line carries r phased copies per coincident small vector
        Vs = U @ small.vectors
        same = (np.abs(Vs.conj().T @ Vs) > 1 - 1e-8).sum(axis=1)
        hits = (np.abs(Vs.conj().T @ big.vectors) > 1 - 1e-8).sum(axis=1)
        assert np.array_equal(hits, G.order * same)


@pytest.mark.parametrize("name", ["conference4", "hoggar1", "psl5"])
def test_phased_gram_carries_roux_scheme(zoo, name):
    B = zoo[name]
    G = B.group
    alpha = next(a for a in G.characters if a.order() == G.exponent)
    I = idempotent_matrix(B, alpha, 1)
    assert same_partition(carries_scheme(I.matrix), roux_scheme(B))


def test_detect_roux_lines_conference(S4):
    v = detect_roux_lines(S4)
    assert v.yes and v.r == 4
    assert normalize_roux(v.roux) == normalize_roux(constructions.conference4_roux())
    assert v.params.labelled() == {"1": 0, "i": 1, "-1": 0, "-i": 1}


def test_detect_roux_lines_generic_lines_fail(rng):
    X = rng.normal(size=(3, 5)) + 1j * rng.normal(size=(3, 5))
    G = X.conj().T @ X
    D = np.sqrt(np.diag(G).real)
    P = G / np.outer(D, D)
    S = SignatureMatrix(values=(P / np.abs(P)) * (1 - np.eye(5)))
    v = detect_roux_lines(S)
    assert not v.yes


def test_detect_roux_lines_reports_failing_power():
    # 3x3 signature at level 3 whose first Hadamard power is not two-valued
    S = SignatureMatrix([[-1, 1, 0, 0], [2, -1, 0, 0], [0, 0, -1, 1], [0, 0, 2, -1]], 3)
    v = detect_roux_lines(S)
    assert not v.yes and v.failing_k == 1


def test_detect_real_lines(S4, zoo):
    assert not detect_real_lines(S4)
    assert detect_real_lines(complete_signature(6))
    B = zoo["psl5"]
    assert detect_real_lines(evaluate(B, Character(B.group, (1,))))


def test_real_roux_criterion_examples(zoo):
    for name, want in (("psl5", True), ("psl3", False)):
        B = zoo[name]
        assert real_roux_criterion(B, Character(B.group, (1,))) is want
        assert real_roux_criterion(B, Character(B.group, (0,)))


def test_detect_drackn_lines(S4, zoo):
    B = zoo["thas_somma_3_1"]
    alpha = next(a for a in B.group.characters if not a.is_trivial())
    v = detect_drackn_lines(evaluate(B, alpha))
    assert v.yes and v.r == 3
    assert not detect_drackn_lines(S4).yes
    assert not detect_drackn_lines(complete_signature(4)).yes


def test_hadamard_square_dimension(S4):
    assert etf_check(hadamard_power(S4, 2)).d == 3


def test_normalize_signature(S4):
    N = normalize(S4)
    assert (N.exp[0, 1:] == 0).all() and (N.exp[1:, 0] == 0).all()
    assert normalize(N) == N


@pytest.mark.parametrize("n, d, r, q, sq_int, in_ring", [
    (9, 6, 3, 4, True, True),
    (8, 4, 4, 0, True, True),
    (33, 11, 3, 16, True, True),
    (16, 4, 5, 20, False, True),
    (16, 4, 4, 20, False, False),
    (15, 5, 28, 7, False, True),
    (15, 5, 7, 7, False, False),
])
def test_integrality_q(n, d, r, q, sq_int, in_ring):
    res = integrality_q(n, d, r)
    assert res.q == q and res.q_integer
    assert res.sqrt_integer is sq_int
    assert res.sqrt_in_Zomega is in_ring


def test_integrality_q_non_integer():
    res = integrality_q(7, 3, 2)
    assert not res.q_integer and res.q == Fraction(6, 12)
    with pytest.raises(ValueError):
        integrality_q(4, 4, 2)


def test_quadratic_conductor_by_gauss_sums():
    # sqrt(5) is a Gauss sum over the 5th roots, sqrt(-3) over the cube roots
    z5 = cmath.exp(2j * math.pi / 5)
    assert abs(z5 - z5 ** 2 - z5 ** 3 + z5 ** 4 - math.sqrt(5)) < 1e-12
    assert quadratic_conductor(5) == 5
    assert quadratic_conductor(-3) == 3
    assert quadratic_conductor(3) == 12
    assert quadratic_conductor(2) == 8
