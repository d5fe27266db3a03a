"""Explicit roux families: conference, symplectic, Gray-code, PSL(2,q) and parameter calculators."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .abelian import AbelianGroup, Character, hat_c, make_group
from .fields import field, prime_power
from .graphs import DracknParameters
from .higman import psl_pair, psl_quotient_generator, roux_from_higman, verify_higman_pair, GroupError
from .lines import SignatureMatrix
from .roux import ZERO, Roux, RouxParameters, verify_roux
from .scheme import _rank_value, mu_exact

C4 = make_group([4])
MAX_THAS_SOMMA_VERTICES = 1024

# exponents of i for the 4 x 4 roux over C4 and its signature at alpha(z) = z
CONFERENCE4 = [[ZERO, 1, 1, 1],
               [3, ZERO, 1, 3],
               [3, 3, ZERO, 1],
               [3, 1, 3, ZERO]]


def conference4_roux() -> Roux:
    return Roux(C4, np.array(CONFERENCE4))


def conference4_signature() -> SignatureMatrix:
    return SignatureMatrix(CONFERENCE4, 4)


# --------------------------------------------------------------------------
# conference matrices


@dataclass
class ConferenceMatrix:
    M: np.ndarray

    @property
    def n(self) -> int:
        return self.M.shape[0]

    def is_conference(self) -> bool:
        M, n = self.M, self.n
        return (np.isin(M, (-1, 0, 1)).all() and (np.diag(M) == 0).all()
                and (M[~np.eye(n, dtype=bool)] != 0).all()
                and np.array_equal(M @ M.T, (n - 1) * np.eye(n, dtype=M.dtype)))

    def is_antisymmetric(self) -> bool:
        return np.array_equal(self.M.T, -self.M)


def conference_iterate(k: int) -> ConferenceMatrix:
    """Antisymmetric conference matrix of size 2^k by block doubling."""
    if k < 1:
        raise ValueError("k must be at least 1")
    M = np.array([[0, 1], [-1, 0]], dtype=np.int64)
    for _ in range(k - 1):
        I = np.eye(M.shape[0], dtype=np.int64)
        M = np.block([[M, M + I], [M - I, -M]])
    out = ConferenceMatrix(M)
    assert out.is_conference() and out.is_antisymmetric()
    return out


def conference_roux(C: ConferenceMatrix | np.ndarray) -> Roux:
    """Entries +1 and -1 become i and -i in C4."""
    C = C if isinstance(C, ConferenceMatrix) else ConferenceMatrix(np.asarray(C, dtype=np.int64))
    if not (C.is_conference() and C.is_antisymmetric()):
        raise ValueError("input is not an antisymmetric conference matrix")
    idx = np.where(C.M == 1, 1, 3)
    np.fill_diagonal(idx, ZERO)
    return Roux(C4, idx)


# --------------------------------------------------------------------------
# Thas-Somma


def additive_group(q: int) -> AbelianGroup:
    p, e = prime_power(q)
    return make_group([p] * e)


def thas_somma(q: int, m: int = 1) -> Roux:
    """B_uv = [u, v] for the standard symplectic form on F_q^{2m}, over (F_q, +)."""
    pe = prime_power(q)
    if pe is None or q > 16:
        raise ValueError(f"q = {q} must be a prime power at most 16")
    if m < 1:
        raise ValueError("m must be at least 1")
    N = q ** (2 * m)
    if N > MAX_THAS_SOMMA_VERTICES:
        raise ValueError(f"q^(2m) = {N} exceeds the cap {MAX_THAS_SOMMA_VERTICES}")
    F = field(q)
    V = np.array(list(itertools.product(range(q), repeat=2 * m)), dtype=np.int64)
    form = np.zeros((N, N), dtype=np.int64)
    for t in range(m):
        a, b = V[:, 2 * t], V[:, 2 * t + 1]
        term = F.sub[F.mul[a[:, None], b[None, :]], F.mul[b[:, None], a[None, :]]]
        form = F.add[form, term]
    # field element x has base-p digits F.digits[x]; group residues list the same digits
    G = additive_group(q)
    to_group = np.array([G.index(tuple(int(d) for d in F.digits[x])) for x in range(q)])
    idx = to_group[form]
    np.fill_diagonal(idx, ZERO)
    return Roux(G, idx)


def thas_somma_parameters(q: int, m: int = 1) -> DracknParameters:
    return DracknParameters(q ** (2 * m), q, q ** (2 * m - 1))


# --------------------------------------------------------------------------
# Gray-code family


GRAY = ((0, 0), (0, 1), (1, 1), (1, 0))


def gray(j: int) -> tuple[int, int]:
    if not 0 <= j < 4:
        raise ValueError(f"{j} is not in Z_4")
    return GRAY[j]


def gray_inverse(bits: tuple[int, int]) -> int:
    return GRAY.index(tuple(bits))


def hoggar_family(k: int, allow_unsupported: bool = False) -> Roux:
    """B_k over C4 on (Z_2^k)^2; only k = 1 and k = 3 give roux."""
    if k not in (1, 3) and not (allow_unsupported and k >= 1):
        raise ValueError(f"k = {k} is not supported (use 1 or 3)")
    V = np.array(list(itertools.product(range(2), repeat=k)), dtype=np.int64)
    pairs = [(a, b) for a in range(len(V)) for b in range(len(V))]
    N = len(pairs)
    ginv = np.array([[0, 1], [3, 2]])  # gray^-1 indexed by the bit pair
    idx = np.full((N, N), ZERO, dtype=np.int64)
    for p, (a, b) in enumerate(pairs):
        for s, (c, d) in enumerate(pairs):
            if p == s:
                continue
            ac = (V[a] + V[c]) % 2
            j = ginv[int(V[d] @ ac) % 2, int(V[b] @ ac) % 2]
            # the "-i^j" case is the group element -(i^j), exponent j + 2
            idx[p, s] = j if (a == c or b == d) else (j + 2) % 4
    return Roux(C4, idx)


# --------------------------------------------------------------------------
# PSL(2, q)


def psl_expected_parameters(q: int) -> RouxParameters:
    h = (q - 1) // 2
    counts = (h, 0, h, 0) if q % 4 == 1 else (0, h, 0, h)
    return RouxParameters(C4, counts)


def psl_roux(q: int) -> Roux:
    """(q+1) x (q+1) roux over C4 from the PSL(2, q) Higman pair."""
    G, H = psl_pair(q)
    cert = verify_higman_pair(G, H)
    if not cert.passed:
        raise GroupError(f"PSL({q}) Higman pair failed: {cert.reason}")
    found = roux_from_higman(cert, quotient=(C4, [psl_quotient_generator(G)]))
    expected = psl_expected_parameters(q)
    if found.params != expected:
        raise GroupError(f"PSL({q}) parameters {found.params.labelled()} differ from {expected.labelled()}")
    return found.roux


# --------------------------------------------------------------------------
# parameter calculators


def su3_parameters(q: int, r: int) -> tuple[RouxParameters, DracknParameters]:
    if q <= 2 or r <= 1 or (q + 1) % r:
        raise ValueError(f"need q > 2, r > 1 and r | q + 1 (got q={q}, r={r})")
    n = q ** 3 + 1
    c = (q + 1) * (q * q - 1) // r
    counts = (c + q - q * q,) + (c,) * (r - 1)
    params = RouxParameters(make_group([r]), counts)
    params.check(n)
    drackn = DracknParameters(n, r, (q - 1) * (q + 1) ** 2 // r)
    assert drackn.c == c
    return params, drackn


@dataclass(frozen=True)
class MaximalFamily:
    j: int
    params: RouxParameters
    n: int
    d: int


def maximal_family_parameters(j: int) -> MaximalFamily:
    if j < 1:
        raise ValueError("j must be at least 1")
    one = 4 * j**4 + 12 * j**3 + 10 * j**2 - 2
    imag = 4 * j**4 + 8 * j**3 + 4 * j**2
    minus = 4 * j**4 + 4 * j**3 - 2 * j**2
    params = RouxParameters(C4, (one, imag, minus, imag))
    n = params.total + 2
    assert n == 16 * j**2 * (j + 1) ** 2
    params.check(n)
    d = 4 * j * (j + 1)
    alpha = Character(C4, (1,))
    for chi, want in ((alpha, d), (alpha * alpha, d * (d + 1) // 2)):
        got, _ = _rank_value(mu_exact(hat_c(params, chi), n, 1)[1])
        if got != want:
            raise AssertionError(f"d for {chi} is {got}, expected {want}")
    return MaximalFamily(j, params, n, d)


def lift_c4_signature(S: SignatureMatrix) -> Roux:
    """Read a signature with fourth-root entries as a matrix over C4 and verify it.

    Raises RouxError when the result is not a roux; maximal ETF inputs always pass.
    """
    if not S.exact or 4 % S.minimal_level():
        raise ValueError("entries are not fourth roots of unity")
    B = Roux(C4, S.at_level(4).exp)
    verify_roux(B)
    return B
