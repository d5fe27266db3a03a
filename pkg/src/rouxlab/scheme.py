"""Cayley expansion of group-ring matrices, association-scheme checks and the
primitive idempotents of a roux scheme.

Expansion convention: the r x r block of group element x has a 1 in position
(g, h) exactly when g = x*h, and the rn x rn index (i, g) is ordered
lexicographically (block first, then group element).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .abelian import AbelianGroup, Character, hat_c
from .roux import ZERO, Roux, RouxParameters, verify_roux
from .surd import Surd


class SchemeError(ValueError):
    def __init__(self, axiom: str, message: str, witness=None):
        super().__init__(f"{axiom} fails: {message}")
        self.axiom = axiom
        self.witness = witness


# --------------------------------------------------------------------------
# expansion


def expand(group: AbelianGroup, X: np.ndarray) -> np.ndarray:
    """Expand a coefficient tensor X[g, i, j] (coefficient of g in cell (i, j))."""
    X = np.asarray(X)
    r, n, _ = X.shape
    if r != group.order:
        raise ValueError("coefficient tensor does not match the group order")
    blocks = X[group.div_table]  # (r, r, n, n): [g, h, i, j] = X[g h^-1, i, j]
    return blocks.transpose(2, 0, 3, 1).reshape(r * n, r * n)


def roux_tensor(B: Roux, shift=None) -> np.ndarray:
    """Coefficient tensor of gB (g = identity unless shift is given)."""
    G = B.group
    idx = B.idx
    if shift is not None:
        k = G.index(shift)
        safe = np.where(idx == ZERO, 0, idx)
        idx = np.where(idx == ZERO, ZERO, G.mul_table[k, safe])
    return (idx[None, :, :] == np.arange(G.order)[:, None, None]).astype(np.int64)


def scalar_tensor(group: AbelianGroup, n: int, g) -> np.ndarray:
    X = np.zeros((group.order, n, n), dtype=np.int64)
    X[group.index(g), np.arange(n), np.arange(n)] = 1
    return X


def group_ring_matmul(group: AbelianGroup, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Product of two group-ring matrices given as coefficient tensors."""
    r = group.order
    out = np.zeros(np.broadcast_shapes(X.shape[:1], Y.shape[:1]) + (X.shape[1], Y.shape[2]),
                   dtype=np.result_type(X, Y))
    for a in range(r):
        for b in range(r):
            out[group.mul_table[a, b]] += X[a] @ Y[b]
    return out


def class_labels(B: Roux) -> tuple[np.ndarray, np.ndarray]:
    """For every cell of the expansion: kind (0 for gI, 1 for gB) and element index g."""
    G, n = B.group, B.n
    r = G.order
    x = np.broadcast_to(G.div_table[None, :, None, :], (n, r, n, r))  # x = g h^-1 at ((i,g),(j,h))
    bij = np.where(B.idx == ZERO, 0, B.idx)
    binv = G.inv_table[bij]
    y = G.mul_table[x, binv[:, None, :, None]]  # y = x * B_ij^-1
    diag = np.eye(n, dtype=bool)[:, None, :, None]
    kind = np.broadcast_to(~diag, (n, r, n, r)).astype(np.int8)
    elem = np.where(diag, x, y)
    return kind.reshape(r * n, r * n), elem.reshape(r * n, r * n)


# --------------------------------------------------------------------------
# association schemes


@dataclass
class AdjacencySet:
    size: int
    matrices: list
    labels: list = field(default_factory=list)

    def __post_init__(self):
        if not self.labels:
            self.labels = [str(k) for k in range(len(self.matrices))]

    def __len__(self):
        return len(self.matrices)

    def to_json(self) -> dict:
        return {"size": self.size,
                "matrices": [{"label": lab, "rows": np.asarray(A, dtype=int).tolist()}
                             for lab, A in zip(self.labels, self.matrices)]}

    @classmethod
    def from_json(cls, obj) -> "AdjacencySet":
        mats = [np.array(m["rows"], dtype=np.uint8) for m in obj["matrices"]]
        return cls(int(obj["size"]), mats, [m.get("label", str(k)) for k, m in enumerate(obj["matrices"])])


@dataclass
class SchemeReport:
    constants: np.ndarray  # p[a, b, k]: A_a A_b = sum_k p[a, b, k] A_k
    commutative: bool
    symmetric: bool
    transpose: list  # index of the transpose of each matrix


def roux_scheme(B: Roux, params: RouxParameters | None = None) -> AdjacencySet:
    """The 2r matrices expand(gI) and expand(gB), labelled 'gI' and 'gB'."""
    if params is None:
        verify_roux(B)
    G = B.group
    kind, elem = class_labels(B)
    lab = kind.astype(np.int64) * G.order + elem
    mats = [(lab == k).astype(np.uint8) for k in range(2 * G.order)]
    labels = [f"{G.label(g)}I" for g in G.elements] + [f"{G.label(g)}B" for g in G.elements]
    return AdjacencySet(B.n * G.order, mats, labels)


def check_scheme(S: AdjacencySet) -> SchemeReport:
    N = S.size
    mats = [np.asarray(A) for A in S.matrices]
    if not mats:
        raise SchemeError("A1", "empty set")
    for k, A in enumerate(mats):
        if A.shape != (N, N):
            raise SchemeError("shape", f"matrix {S.labels[k]} has shape {A.shape}", k)
        if not np.isin(A, (0, 1)).all():
            raise SchemeError("shape", f"matrix {S.labels[k]} is not 0/1", k)
    eye = np.eye(N, dtype=mats[0].dtype)
    if not any(np.array_equal(A, eye) for A in mats):
        raise SchemeError("A1", "identity matrix is missing")
    total = np.sum(mats, axis=0)
    if not (total == 1).all():
        i, j = map(int, np.argwhere(total != 1)[0])
        raise SchemeError("A2", f"cell ({i},{j}) is covered {int(total[i, j])} times", (i, j))
    label = np.zeros((N, N), dtype=np.int64)
    for k, A in enumerate(mats):
        label[A == 1] = k
    rep = [tuple(map(int, np.argwhere(A == 1)[0])) for A in mats]
    m = len(mats)
    transpose = []
    for k, A in enumerate(mats):
        t = int(label[rep[k][1], rep[k][0]])
        if not np.array_equal(A.T, mats[t]):
            raise SchemeError("A3", f"transpose of {S.labels[k]} is not in the set", (k,))
        transpose.append(t)
    F = [A.astype(np.float64) for A in mats]
    p = np.zeros((m, m, m), dtype=np.int64)
    products = {}
    for a in range(m):
        for b in range(m):
            P = F[a] @ F[b]
            coeffs = np.array([P[rep[k]] for k in range(m)])
            if not np.array_equal(P, coeffs[label]):
                i, j = map(int, np.argwhere(P != coeffs[label])[0])
                raise SchemeError("A3", f"product {S.labels[a]}*{S.labels[b]} is not constant on the class of cell ({i},{j})",
                                  (a, b))
            p[a, b] = np.rint(coeffs).astype(np.int64)
            products[a, b] = p[a, b]
    commutative = all(np.array_equal(p[a, b], p[b, a]) for a in range(m) for b in range(a + 1, m))
    symmetric = all(t == k for k, t in enumerate(transpose))
    return SchemeReport(p, commutative, symmetric, transpose)


def cayley_scheme(group: AbelianGroup) -> AdjacencySet:
    """Thin scheme of the regular representation: one translation matrix per element."""
    mats = []
    for g in group.elements:
        X = np.zeros((group.order, 1, 1), dtype=np.int64)
        X[group.index(g), 0, 0] = 1
        mats.append(expand(group, X).astype(np.uint8))
    return AdjacencySet(group.order, mats, [group.label(g) for g in group.elements])


def carries_scheme(M, tol: float = 1e-6) -> AdjacencySet:
    """Level sets of M, checked to form an association scheme.

    M is either an IdempotentMatrix (grouped exactly) or a complex array
    (grouped within tol relative to the largest entry).
    """
    if isinstance(M, IdempotentMatrix):
        label = M.exact_classes()
    else:
        label = _cluster(np.asarray(M, dtype=np.complex128), tol)
    N = label.shape[0]
    diag_classes = set(np.diag(label).tolist())
    if len(diag_classes) != 1:
        raise SchemeError("A1", "diagonal entries are not all equal")
    d = diag_classes.pop()
    if (label == d).sum() != N:
        raise SchemeError("A1", "the diagonal value also occurs off the diagonal")
    classes = sorted(set(label.ravel().tolist()), key=lambda k: (k != d, k))
    mats = [(label == k).astype(np.uint8) for k in classes]
    S = AdjacencySet(N, mats)
    check_scheme(S)
    return S


def _cluster(M: np.ndarray, tol: float) -> np.ndarray:
    scale = max(float(np.abs(M).max()), 1.0)
    label = np.full(M.shape, -1, dtype=np.int64)
    k = 0
    while (label < 0).any():
        pos = tuple(np.argwhere(label < 0)[0])
        v = M[pos]
        hit = (label < 0) & (np.abs(M - v) <= tol * scale)
        label[hit] = k
        k += 1
    return label


def same_partition(S1: AdjacencySet, S2: AdjacencySet) -> bool:
    """True when the two sets consist of the same matrices, up to ordering."""
    key = lambda A: np.asarray(A, dtype=np.uint8).tobytes()
    return sorted(map(key, S1.matrices)) == sorted(map(key, S2.matrices))


# --------------------------------------------------------------------------
# primitive idempotents


@dataclass
class IdempotentMatrix:
    alpha: Character
    eps: int
    mu: object  # Surd when exact, float otherwise
    d: object  # int when integral, else float
    d_integral: bool
    kind: np.ndarray
    phase: np.ndarray
    n: int
    hat_c: object

    @property
    def level(self) -> int:
        return self.alpha.group.exponent

    @property
    def exact(self) -> bool:
        return isinstance(self.mu, Surd)

    @property
    def matrix(self) -> np.ndarray:
        L = self.level
        roots = np.exp(2j * np.pi * np.arange(L) / L)
        scal = np.where(self.kind == 0, 1.0, float(self.mu))
        return scal * roots[self.phase]

    @property
    def scale(self) -> float:
        """s with G^2 = s G."""
        return self.alpha.group.order * (1 + (self.n - 1) * float(self.mu) ** 2)

    def normalized(self) -> np.ndarray:
        return self.matrix / self.scale

    def numeric_rank(self, tol: float = 1e-8) -> int:
        w = np.linalg.eigvalsh(self.normalized())
        return int((w > tol).sum())

    def exact_entry(self, p: int, q: int) -> tuple:
        """(real scalar, exponent of zeta_L) for cell (p, q)."""
        s = Surd(1) if self.kind[p, q] == 0 else self.mu
        return s, int(self.phase[p, q])

    def exact_classes(self) -> np.ndarray:
        """Class label per cell, grouping cells with exactly equal values."""
        L = self.level
        keys = {}
        if self.exact:
            vals = [Surd(1), self.mu]
        else:
            vals = [1.0, float(self.mu)]
        canon = []
        for s in vals:
            neg = (s < 0) if isinstance(s, Surd) else s < 0
            canon.append((-s if neg else s, L if neg else 0))
        label = np.zeros(self.kind.shape, dtype=np.int64)
        for kd in (0, 1):
            mag, off = canon[kd]
            if not self.exact:
                mag = round(mag, 9)
            for ph in range(L):
                key = (mag, (2 * ph + off) % (2 * L))
                keys.setdefault(key, len(keys))
                label[(self.kind == kd) & (self.phase == ph)] = keys[key]
        return label

    def to_json(self) -> dict:
        M = self.matrix
        return {"alpha": list(self.alpha.exponents), "eps": "+" if self.eps > 0 else "-",
                "mu": self.mu.to_json() if self.exact else float(self.mu),
                "d": self.d, "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in M]}


def mu_exact(hc, n: int, eps: int):
    """mu and d for one (alpha, eps); Surd values when hat c is rational, floats otherwise."""
    if n == 1:
        raise ValueError("need n >= 2")
    if hasattr(hc, "is_rational") and hc.is_rational():
        c = hc.rational_value()
        root = Surd.sqrt(c * c + 4 * (n - 1))
        mu = (Surd(c) + root * eps) / (2 * (n - 1))
        d = Surd(n) / (Surd(1) + mu * mu * (n - 1))
        return mu, d
    c = float(hc)
    mu = (c + eps * math.sqrt(c * c + 4 * (n - 1))) / (2 * (n - 1))
    return mu, n / (1 + (n - 1) * mu * mu)


def _rank_value(d) -> tuple[object, bool]:
    if isinstance(d, Surd):
        if d.is_rational() and d.rational().denominator == 1:
            return int(d.rational()), True
        return float(d), False
    k = round(d)
    if abs(d - k) < 1e-6:
        return int(k), True
    return float(d), False


def idempotent_matrix(B: Roux, alpha: Character, eps: int, params: RouxParameters | None = None,
                      labels=None) -> IdempotentMatrix:
    """sum_g alpha(g)[gI] + mu sum_g alpha(g)[gB] for the sign eps of the square root."""
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    params = params or verify_roux(B)
    hc = hat_c(params, alpha)
    if not hc.is_real():
        raise ValueError(f"hat c = {hc} is not real; the parameters are not inverse-symmetric")
    mu, d = mu_exact(hc, B.n, eps)
    dval, integral = _rank_value(d)
    kind, elem = labels if labels is not None else class_labels(B)
    phase = alpha.group.char_table[alpha.index][elem]
    return IdempotentMatrix(alpha, eps, mu, dval, integral, kind, phase, B.n, hc)


def all_idempotents(B: Roux, params: RouxParameters | None = None) -> list[IdempotentMatrix]:
    """All 2r idempotents; characters in lexicographic order, + before -."""
    params = params or verify_roux(B)
    labels = class_labels(B)
    return [idempotent_matrix(B, a, e, params, labels)
            for a in B.group.characters for e in (1, -1)]


def rank_multiset(B: Roux, params: RouxParameters | None = None) -> list:
    return sorted(I.d for I in all_idempotents(B, params))
