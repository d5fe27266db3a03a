"""Signature matrices of equiangular lines, exact ETF tests and line detectors.

An exact signature matrix stores the exponent k of zeta_L for every
off-diagonal entry (the diagonal is -1).  Matrices whose entries are not
recognised as roots of unity are kept as complex arrays and handled
numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .abelian import Character, Cyclotomic, make_group, reduction_matrix
from .roux import ZERO, Roux, RouxParameters, verify_roux
from .surd import Surd, squarefree_split

EIG_MERGE = 1e-7


class SignatureError(ValueError):
    pass


class SignatureMatrix:
    """Self-adjoint matrix with zero diagonal and unimodular off-diagonal entries."""

    def __init__(self, exponents=None, L: int | None = None, values=None):
        if exponents is not None:
            exp = np.array(exponents, dtype=np.int64)
            if exp.ndim != 2 or exp.shape[0] != exp.shape[1]:
                raise SignatureError("signature matrix must be square")
            if L is None or L < 1:
                raise SignatureError("exact signature needs a level L >= 1")
            n = exp.shape[0]
            off = ~np.eye(n, dtype=bool)
            if (np.diag(exp) != ZERO).any():
                raise SignatureError("diagonal must be zero")
            exp = np.where(off, exp % L, ZERO)
            if (exp[off] != ((-exp.T) % L)[off]).any():
                raise SignatureError("matrix is not self-adjoint")
            self.exp, self.L, self.n = exp, int(L), n
            self._values = None
        else:
            M = np.array(values, dtype=np.complex128)
            n = M.shape[0]
            if M.shape != (n, n):
                raise SignatureError("signature matrix must be square")
            if np.abs(np.diag(M)).max(initial=0) > 1e-9:
                raise SignatureError("diagonal must be zero")
            if np.abs(M - M.conj().T).max(initial=0) > 1e-9:
                raise SignatureError("matrix is not self-adjoint")
            off = ~np.eye(n, dtype=bool)
            if n > 1 and np.abs(np.abs(M[off]) - 1).max() > 1e-9:
                raise SignatureError("off-diagonal entries must have unit modulus")
            self.exp, self.L, self.n = None, None, n
            self._values = M

    @property
    def exact(self) -> bool:
        return self.exp is not None

    @classmethod
    def from_complex(cls, M, max_level: int = 120, tol: float = 1e-9) -> "SignatureMatrix":
        """Recognise entries as roots of unity of a common level when possible."""
        M = np.asarray(M, dtype=np.complex128)
        n = M.shape[0]
        off = ~np.eye(n, dtype=bool)
        turns = np.angle(M[off]) / (2 * np.pi)
        if n > 1 and np.abs(np.abs(M[off]) - 1).max() < tol:
            for L in range(1, max_level + 1):
                k = turns * L
                if np.abs(k - np.rint(k)).max() < tol * L:
                    exp = np.full((n, n), ZERO, dtype=np.int64)
                    exp[off] = np.rint(k).astype(np.int64) % L
                    return cls(exp, L)
        return cls(values=M)

    def values(self) -> np.ndarray:
        if self._values is not None:
            return self._values
        roots = np.exp(2j * np.pi * np.arange(self.L) / self.L)
        M = roots[np.where(self.exp == ZERO, 0, self.exp)]
        np.fill_diagonal(M, 0)
        return M

    def __eq__(self, other):
        if not isinstance(other, SignatureMatrix) or self.n != other.n:
            return False
        if self.exact and other.exact:
            L = self.L * other.L // math.gcd(self.L, other.L)
            a = np.where(self.exp == ZERO, ZERO, self.exp * (L // self.L))
            b = np.where(other.exp == ZERO, ZERO, other.exp * (L // other.L))
            return np.array_equal(a, b)
        return np.allclose(self.values(), other.values(), atol=1e-9)

    def __repr__(self):
        return f"SignatureMatrix(n={self.n}, L={self.L})" if self.exact else f"SignatureMatrix(n={self.n}, float)"

    def minimal_level(self) -> int:
        """Smallest r with every off-diagonal entry an r-th root of unity."""
        if not self.exact:
            raise SignatureError("entries are not roots of unity")
        off = ~np.eye(self.n, dtype=bool)
        g = self.L
        for k in np.unique(self.exp[off]):
            g = math.gcd(g, int(k))
        return self.L // g if self.n > 1 else 1

    def at_level(self, L: int) -> "SignatureMatrix":
        if L % self.minimal_level():
            raise SignatureError(f"entries are not {L}-th roots of unity")
        off = ~np.eye(self.n, dtype=bool)
        exp = np.where(off, self.exp * L // self.L, ZERO)
        return SignatureMatrix(exp, L)

    def to_json(self) -> dict:
        if self.exact:
            return {"n": self.n, "L": self.L,
                    "entries": [[None if k == ZERO else int(k) for k in row] for row in self.exp]}
        M = self._values
        return {"n": self.n, "entries": [[None if i == j else {"re": float(M[i, j].real), "im": float(M[i, j].imag)}
                                          for j in range(self.n)] for i in range(self.n)]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "SignatureMatrix":
        rows = obj["entries"]
        n = int(obj.get("n", len(rows)))
        if len(rows) != n or any(len(row) != n for row in rows):
            raise SignatureError("entries do not form an n x n grid")
        if "L" in obj:
            exp = [[ZERO if k is None else int(k) for k in row] for row in rows]
            return cls(exp, int(obj["L"]))
        M = np.zeros((n, n), dtype=np.complex128)
        for i, row in enumerate(rows):
            for j, z in enumerate(row):
                if z is not None:
                    M[i, j] = complex(z["re"], z["im"])
        return cls(values=M)


def evaluate(B: Roux, alpha: Character) -> SignatureMatrix:
    """Apply a character entrywise to a roux."""
    if alpha.group != B.group:
        raise ValueError("character and roux belong to different groups")
    row = alpha.group.char_table[alpha.index]
    exp = np.where(B.idx == ZERO, ZERO, row[np.where(B.idx == ZERO, 0, B.idx)])
    return SignatureMatrix(exp, alpha.group.exponent)


def hadamard_power(S: SignatureMatrix, k: int) -> SignatureMatrix:
    if k < 1:
        raise ValueError("Hadamard power needs k >= 1")
    if S.exact:
        return SignatureMatrix(np.where(S.exp == ZERO, ZERO, S.exp * k), S.L)
    M = S.values() ** k
    np.fill_diagonal(M, 0)
    return SignatureMatrix(values=M)


def normalize(S: SignatureMatrix) -> SignatureMatrix:
    """Switch so that the first row and column are all ones."""
    if S.exact:
        e0 = S.exp[0].copy()
        e0[0] = 0
        exp = e0[:, None] + S.exp - e0[None, :]
        np.fill_diagonal(exp, ZERO)
        return SignatureMatrix(exp, S.L)
    M = S.values()
    v = M[0].copy()
    v[0] = 1
    N = v[:, None] * M * v.conj()[None, :]
    return SignatureMatrix.from_complex(N)


def complete_signature(n: int) -> SignatureMatrix:
    exp = np.zeros((n, n), dtype=np.int64)
    np.fill_diagonal(exp, ZERO)
    return SignatureMatrix(exp, 1)


# --------------------------------------------------------------------------
# two-eigenvalue tests


def _cyclotomic_square(S: SignatureMatrix) -> np.ndarray:
    """Canonical coefficients of S^2, shape (phi(L), n, n)."""
    L, n = S.L, S.n
    E = (S.exp[None, :, :] == np.arange(L)[:, None, None]).astype(np.float64)
    C = np.zeros((L, n, n))
    for a in range(L):
        if not E[a].any():
            continue
        for b in range(L):
            C[(a + b) % L] += E[a] @ E[b]
    C = np.rint(C).astype(np.int64)
    return np.einsum("kij,kd->dij", C, reduction_matrix(L))


def square_relation(S: SignatureMatrix) -> Cyclotomic | None:
    """Return t with S^2 = (n-1)I + tS exactly, or None when no such t exists."""
    if not S.exact:
        raise SignatureError("exact relation needs root-of-unity entries")
    n, L = S.n, S.L
    if n == 1:
        return Cyclotomic.rational(0, L)
    sq = _cyclotomic_square(S)
    R = reduction_matrix(L)
    diag_target = np.zeros(R.shape[1], dtype=np.int64)
    diag_target[0] = n - 1
    ii = np.arange(n)
    if not (sq[:, ii, ii] == diag_target[:, None]).all():
        return None
    if n == 2:
        return Cyclotomic.rational(0, L)
    # t = (S^2)_{01} * zeta^{-e01}
    s01 = Cyclotomic(L, [Fraction(int(x)) for x in sq[:, 0, 1]])
    t = s01 * Cyclotomic.root(L, -int(S.exp[0, 1]))
    # t as an integer combination of powers of zeta, then multiply every entry of S
    tcoef = np.array([int(c) for c in t.coeffs], dtype=np.int64)
    counts = np.zeros((L, n, n), dtype=np.int64)
    off = ~np.eye(n, dtype=bool)
    for j, c in enumerate(tcoef):
        if c:
            k = (S.exp + j) % L
            np.add.at(counts, (k[off], *np.nonzero(off)), c)
    tS = np.einsum("kij,kd->dij", counts, R)
    if not np.array_equal(sq[:, off], tS[:, off]):
        return None
    return t


@dataclass
class EtfReport:
    is_etf: bool
    n: int
    d: object = None
    mu: object = None
    welch_equality: bool = False
    t: object = None
    eigenvalues: tuple = ()
    reason: str = ""

    def to_json(self) -> dict:
        conv = lambda x: x.to_json() if isinstance(x, Surd) else (str(x) if isinstance(x, Fraction) else x)
        return {"is_etf": self.is_etf, "n": self.n, "d": conv(self.d), "mu": conv(self.mu),
                "welch_equality": self.welch_equality,
                "t": None if self.t is None else (self.t.to_json() if isinstance(self.t, Cyclotomic) else self.t),
                "eigenvalues": [[conv(v), m] for v, m in self.eigenvalues], "reason": self.reason}


def spectrum_from_t(n: int, t):
    """Eigenvalues, multiplicities, coherence and dimension from S^2 = (n-1)I + tS."""
    if isinstance(t, (int, Fraction)):
        t = Fraction(t)
        root = Surd.sqrt(t * t + 4 * (n - 1))
        half = root * Fraction(1, 2)
        lam1, lam2 = half + t / 2, t / 2 - half
        # m1 = -n lam2 / (lam1 - lam2) = n/2 - n t / (2 root)
        if t == 0:
            m1 = Surd(Fraction(n, 2))
        elif root.is_rational():
            m1 = Surd(Fraction(n, 2) - n * t / (2 * root.a))
        else:
            m1 = Surd(Fraction(n, 2)) - Surd(n * t / 2) * root.inverse()
        mu = -lam2.inverse()
    else:
        t = float(t)
        root = math.sqrt(t * t + 4 * (n - 1))
        lam1, lam2 = (t + root) / 2, (t - root) / 2
        m1 = -n * lam2 / (lam1 - lam2)
        mu = -1 / lam2
    return lam1, lam2, m1, mu


def etf_check(S: SignatureMatrix) -> EtfReport:
    n = S.n
    if n < 2:
        return EtfReport(False, n, reason="need at least two lines")
    if not S.exact:
        return _etf_check_numeric(S)
    t = square_relation(S)
    if t is None:
        return EtfReport(False, n, reason="S^2 is not in the span of I and S")
    if not t.is_real():
        return EtfReport(False, n, t=t, reason="t is not real")
    tval = t.rational_value() if t.is_rational() else float(t)
    lam1, lam2, m1, mu = spectrum_from_t(n, tval)
    d, integral = _as_int(m1)
    if not integral:
        return EtfReport(False, n, t=t, reason=f"multiplicity {float(m1)} is not an integer")
    welch = welch_equality(mu, n, d)
    return EtfReport(True, n, d, mu, welch, t, ((lam1, d), (lam2, n - d)))


def _as_int(x) -> tuple[object, bool]:
    if isinstance(x, Surd):
        if x.is_rational() and x.rational().denominator == 1:
            return int(x.rational()), True
        return float(x), False
    k = round(x)
    return (int(k), True) if abs(x - k) < 1e-6 else (float(x), False)


def _etf_check_numeric(S: SignatureMatrix) -> EtfReport:
    n = S.n
    w = np.linalg.eigvalsh(S.values())
    groups = _merge(w)
    if len(groups) != 2:
        return EtfReport(False, n, eigenvalues=tuple((v, m) for v, m in groups),
                         reason=f"{len(groups)} distinct eigenvalues")
    (lam2, m2), (lam1, m1) = groups
    mu = -1 / lam2
    welch = welch_equality(mu, n, m1)
    return EtfReport(True, n, m1, mu, welch, lam1 + lam2, ((lam1, m1), (lam2, m2)))


def _merge(w) -> list[tuple[float, int]]:
    out: list[list] = []
    for x in sorted(w):
        if out and abs(x - out[-1][0]) <= EIG_MERGE * max(1.0, abs(x)):
            out[-1][1] += 1
        else:
            out.append([float(x), 1])
    return [(v, m) for v, m in out]


def welch_bound(n: int, d: int) -> float:
    if n < d or d < 1:
        raise ValueError("need n >= d >= 1")
    if n == 1:
        return 0.0
    return math.sqrt((n - d) / (d * (n - 1)))


def welch_bound_squared(n: int, d: int) -> Fraction:
    if n < d or d < 1:
        raise ValueError("need n >= d >= 1")
    return Fraction(n - d, d * (n - 1)) if n > 1 else Fraction(0)


def welch_equality(mu, n: int, d: int) -> bool:
    if isinstance(mu, Surd):
        return mu.sign() >= 0 and mu * mu == Surd(welch_bound_squared(n, d))
    return abs(abs(mu) - welch_bound(n, d)) < 1e-9


# --------------------------------------------------------------------------
# vectors


@dataclass
class LineFamily:
    d: int
    vectors: np.ndarray  # d x n, unit-norm columns

    @property
    def n(self) -> int:
        return self.vectors.shape[1]

    def gram(self) -> np.ndarray:
        return self.vectors.conj().T @ self.vectors


def vectors_from_gram(G, d: int | None = None, tol: float = 1e-9) -> LineFamily:
    """Factor a positive semidefinite Gram matrix as Phi^* Phi with Phi of rank d."""
    G = np.asarray(G, dtype=np.complex128)
    if np.abs(G - G.conj().T).max() > tol * max(1.0, np.abs(G).max()):
        raise ValueError("Gram matrix is not self-adjoint")
    w, U = np.linalg.eigh(G)
    top = max(float(w.max()), 0.0)
    if w.min() < -tol * max(1.0, top):
        raise ValueError(f"Gram matrix is not positive semidefinite (eigenvalue {w.min():.3g})")
    keep = w > 1e-8 * top
    rank = int(keep.sum())
    if d is not None and rank != d:
        raise ValueError(f"Gram matrix has rank {rank}, expected {d}")
    Phi = np.sqrt(w[keep])[:, None] * U[:, keep].conj().T
    if np.abs(Phi.conj().T @ Phi - G).max() > tol * max(1.0, top) * 10:
        raise ValueError("factorization does not reproduce the Gram matrix")
    return LineFamily(rank, Phi)


def coherence(vectors) -> float:
    V = np.asarray(vectors)
    V = V / np.linalg.norm(V, axis=0)
    G = np.abs(V.conj().T @ V)
    np.fill_diagonal(G, 0)
    return float(G.max()) if G.size > 1 else 0.0


def same_lines(V1, V2, tol: float = 1e-8) -> bool:
    """Do two families (columns) span the same set of one-dimensional subspaces?"""
    A = np.asarray(V1) / np.linalg.norm(V1, axis=0)
    Bv = np.asarray(V2) / np.linalg.norm(V2, axis=0)
    overlap = np.abs(A.conj().T @ Bv)
    return bool((overlap.max(axis=1) > 1 - tol).all() and (overlap.max(axis=0) > 1 - tol).all())


# --------------------------------------------------------------------------
# detectors


@dataclass
class Verdict:
    yes: bool
    r: int | None = None
    roux: Roux | None = None
    params: RouxParameters | None = None
    failing_k: int | None = None
    t: object = None
    reason: str = ""
    reports: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"verdict": "yes" if self.yes else "no", "r": self.r, "reason": self.reason}
        if self.failing_k is not None:
            out["failing_k"] = self.failing_k
        if self.params is not None:
            out["parameters"] = self.params.labelled()
        if self.t is not None:
            out["t"] = self.t.to_json() if isinstance(self.t, Cyclotomic) else self.t
        return out


def _roux_from_signature(S: SignatureMatrix) -> Roux:
    G = make_group([S.L])
    idx = np.where(S.exp == ZERO, ZERO, S.exp)
    return Roux(G, idx)


def detect_roux_lines(S: SignatureMatrix) -> Verdict:
    """Normalize, then require every Hadamard power up to the entry order to be an ETF."""
    if not S.exact:
        return Verdict(False, reason="normalized entries are not roots of unity")
    N = normalize(S)
    r = N.minimal_level()
    N = N.at_level(r)
    reports = {}
    for k in range(1, r + 1):
        rep = etf_check(hadamard_power(N, k))
        reports[k] = rep
        if not rep.is_etf:
            return Verdict(False, r, failing_k=k, reason=f"Hadamard power {k}: {rep.reason}", reports=reports)
    B = _roux_from_signature(N)
    params = verify_roux(B)
    return Verdict(True, r, B, params, reports=reports)


def detect_real_lines(S: SignatureMatrix) -> bool:
    """Eigenvalues of the Hadamard square are n-1 (once) and -1."""
    n = S.n
    X = hadamard_power(S, 2)
    if X.exact:
        t = square_relation(X)
        return t is not None and t == n - 2
    groups = _merge(np.linalg.eigvalsh(X.values()))
    if n == 1:
        return True
    want = sorted([(-1.0, n - 1), (float(n - 1), 1)])
    return len(groups) == 2 and all(abs(a - b) < 1e-7 * n and m == k for (a, m), (b, k) in zip(groups, want))


def real_roux_criterion(B: Roux, alpha: Character, params: RouxParameters | None = None) -> bool:
    """alpha takes values +-1 on every g with c_g nonzero."""
    params = params or verify_roux(B)
    L = alpha.level
    for g in params.support():
        k = alpha.exponent_at(g)
        if (2 * k) % L:
            return False
    return True


def detect_drackn_lines(S: SignatureMatrix) -> Verdict:
    """Every nontrivial Hadamard power shares one two-point spectrum."""
    if not S.exact:
        return Verdict(False, reason="normalized entries are not roots of unity")
    N = normalize(S)
    r = N.minimal_level()
    if r == 1:
        return Verdict(False, 1, reason="all entries are 1 after normalization (r = 1 is excluded)")
    N = N.at_level(r)
    t0 = None
    reports = {}
    for k in range(1, r):
        rep = etf_check(hadamard_power(N, k))
        reports[k] = rep
        if not rep.is_etf:
            return Verdict(False, r, failing_k=k, reason=f"Hadamard power {k}: {rep.reason}", reports=reports)
        if t0 is None:
            t0 = rep.t
        elif rep.t != t0:
            return Verdict(False, r, failing_k=k, t=rep.t,
                           reason=f"Hadamard power {k} has t = {rep.t}, power 1 has t = {t0}", reports=reports)
    B = _roux_from_signature(N)
    return Verdict(True, r, B, verify_roux(B), t=t0, reports=reports)


# --------------------------------------------------------------------------
# integrality


@dataclass
class Integrality:
    q: Fraction
    q_integer: bool
    sqrt_integer: bool
    sqrt_in_Zomega: bool

    def to_json(self) -> dict:
        return {"q": str(self.q), "q_integer": self.q_integer, "sqrt_integer": self.sqrt_integer,
                "sqrt_in_Zomega": self.sqrt_in_Zomega}


def quadratic_conductor(s: int) -> int:
    """Conductor of Q(sqrt(s)) for squarefree s != 1."""
    return abs(s) if s % 4 == 1 else 4 * abs(s)


def integrality_q(n: int, d: int, r: int) -> Integrality:
    if not (1 <= d < n):
        raise ValueError("need n > d >= 1")
    q = Fraction((n - 2 * d) ** 2 * (n - 1), d * (n - d))
    q_int = q.denominator == 1
    if not q_int:
        return Integrality(q, False, False, False)
    m = q.numerator
    if m == 0:
        return Integrality(q, True, True, True)
    k, s = squarefree_split(m)
    if s == 1:
        return Integrality(q, True, True, True)
    level = r if r % 2 == 0 else 2 * r
    return Integrality(q, True, False, level % quadratic_conductor(s) == 0)
