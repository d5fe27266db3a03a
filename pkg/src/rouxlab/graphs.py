"""Roux graphs: spectra, components, distances, DRACKN checks and conversions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .abelian import AbelianGroup, decompose, hat_c, make_group
from .fields import _is_prime
from .roux import (ZERO, Homomorphism, Roux, RouxParameters, minimal_group, pushforward,
                   verify_roux)
from .scheme import expand
from .surd import Surd

MAX_BFS_VERTICES = 4096


def adjacency(B: Roux) -> np.ndarray:
    """0/1 adjacency matrix of the expansion of B; vertex (i, g) sits at i*r + g."""
    return expand(B.group, B.one_hot()).astype(np.uint8)


# --------------------------------------------------------------------------
# spectrum


@dataclass
class Eigenvalue:
    value: object  # Surd or float
    multiplicity: int

    def __float__(self):
        return float(self.value)


def spectrum_terms(B: Roux, params: RouxParameters | None = None) -> list[tuple]:
    """(alpha, eps, lambda, multiplicity) for every character and sign."""
    params = params or verify_roux(B)
    n = B.n
    out = []
    for alpha in B.group.characters:
        hc = hat_c(params, alpha)
        if not hc.is_real():
            raise AssertionError(f"hat c for {alpha} is not real; parameters are inconsistent")
        for eps in (1, -1):
            if hc.is_rational():
                c = hc.rational_value()
                lam = (Surd(c) + Surd.sqrt(c * c + 4 * (n - 1)) * eps) / 2
                mult = Surd(n) / (Surd(1) + lam * lam / (n - 1))
                if not (mult.is_rational() and mult.rational().denominator == 1):
                    raise AssertionError(f"multiplicity {mult} is not an integer")
                m = int(mult.rational())
            else:
                c = float(hc)
                lam = (c + eps * math.sqrt(c * c + 4 * (n - 1))) / 2
                mf = n / (1 + lam * lam / (n - 1))
                m = round(mf)
                if abs(mf - m) > 1e-6:
                    raise AssertionError(f"multiplicity {mf} is not an integer")
            out.append((alpha, eps, lam, m))
    return out


def spectrum(B: Roux, params: RouxParameters | None = None) -> list[Eigenvalue]:
    """Distinct eigenvalues with multiplicities, in decreasing order."""
    merged: dict = {}
    for _, _, lam, m in spectrum_terms(B, params):
        key = round(float(lam), 9)
        if key in merged:
            merged[key].multiplicity += m
            if not isinstance(merged[key].value, Surd) and isinstance(lam, Surd):
                merged[key].value = lam
        else:
            merged[key] = Eigenvalue(lam, m)
    out = [e for e in merged.values() if e.multiplicity > 0]
    return sorted(out, key=lambda e: -float(e.value))


def numeric_spectrum(B: Roux) -> np.ndarray:
    return np.sort(np.linalg.eigvalsh(adjacency(B).astype(np.float64)))


def spectrum_matches(B: Roux, params: RouxParameters | None = None, tol: float = 1e-8) -> bool:
    formula = np.sort(np.concatenate([[float(e.value)] * e.multiplicity for e in spectrum(B, params)]))
    numeric = numeric_spectrum(B)
    return formula.shape == numeric.shape and bool(np.abs(formula - numeric).max() <= tol * max(1, B.n))


# --------------------------------------------------------------------------
# connectivity and distances


def bfs_components(A: np.ndarray) -> int:
    N = A.shape[0]
    nbrs = [np.flatnonzero(row) for row in A]
    seen = np.zeros(N, dtype=bool)
    count = 0
    for s in range(N):
        if seen[s]:
            continue
        count += 1
        seen[s] = True
        stack = [s]
        while stack:
            v = stack.pop()
            for w in nbrs[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
    return count


def components(B: Roux, params: RouxParameters | None = None, check: bool = True) -> int:
    """[Gamma : Lambda], Lambda generated by the support of the parameters."""
    sub, _ = minimal_group(B, params)
    k = sub.index
    if check and B.n * B.group.order <= MAX_BFS_VERTICES:
        found = bfs_components(adjacency(B))
        if found != k:
            raise AssertionError(f"index formula gives {k} components but search finds {found}")
    return k


def distance_matrix(A: np.ndarray) -> np.ndarray:
    """All-pairs graph distances by breadth-first layers; -1 marks unreachable pairs."""
    N = A.shape[0]
    if N > MAX_BFS_VERTICES:
        raise ValueError(f"graph has {N} vertices, above the cap {MAX_BFS_VERTICES}")
    F = A.astype(np.float64)
    dist = np.full((N, N), -1, dtype=np.int64)
    np.fill_diagonal(dist, 0)
    reached = np.eye(N, dtype=bool)
    frontier = np.eye(N)
    k = 0
    while True:
        k += 1
        nxt = (frontier @ F > 0) & ~reached
        if not nxt.any():
            break
        dist[nxt] = k
        reached |= nxt
        frontier = nxt.astype(np.float64)
    return dist


def diameter(B: Roux) -> float:
    dist = distance_matrix(adjacency(B))
    return math.inf if (dist < 0).any() else int(dist.max())


# --------------------------------------------------------------------------
# DRACKNs


@dataclass(frozen=True)
class DracknParameters:
    n: int
    r: int
    c: int

    @property
    def delta(self) -> int:
        return self.n - self.r * self.c - 2

    def roux_counts(self, group: AbelianGroup) -> tuple[int, ...]:
        ident = group.index(group.identity)
        return tuple(self.n - self.c * (self.r - 1) - 2 if k == ident else self.c for k in range(group.order))

    def to_json(self) -> dict:
        return {"n": self.n, "r": self.r, "c": self.c, "delta": self.delta}


def drackn_from_parameters(B: Roux, params: RouxParameters) -> DracknParameters | None:
    """Parameter route: c_g = c > 0 off the identity and c_id = n - c(r-1) - 2."""
    G, n = B.group, B.n
    r = G.order
    if r < 2:
        return None
    ident = G.index(G.identity)
    others = {c for k, c in enumerate(params.counts) if k != ident}
    if len(others) != 1:
        return None
    c = others.pop()
    if c <= 0 or params.counts[ident] != n - c * (r - 1) - 2:
        return None
    return DracknParameters(n, r, c)


def drackn_combinatorial(A: np.ndarray, fibres: Sequence[Sequence[int]]) -> DracknParameters | None:
    """Check connectivity and (D1)-(D3) directly on a graph with a given fibre partition."""
    N = A.shape[0]
    n = len(fibres)
    r = len(fibres[0])
    if r < 2 or any(len(f) != r for f in fibres) or n * r != N:
        return None
    for i in range(n):
        for j in range(n):
            blk = A[np.ix_(fibres[i], fibres[j])]
            if i == j and blk.any():
                return None
            if i != j and not ((blk.sum(axis=0) == 1).all() and (blk.sum(axis=1) == 1).all()):
                return None
    dist = distance_matrix(A)
    if (dist < 0).any():
        return None
    diam = int(dist.max())
    same = np.zeros((N, N), dtype=bool)
    for f in fibres:
        same[np.ix_(f, f)] = True
    np.fill_diagonal(same, False)
    if not np.array_equal(dist == diam, same):
        return None
    F = A.astype(np.float64)
    common = np.rint(F @ F).astype(np.int64)
    at2 = common[dist == 2]
    if at2.size == 0 or (at2 != at2[0]).any():
        return None
    return DracknParameters(n, r, int(at2[0]))


def fibres_of(B: Roux) -> list[list[int]]:
    r = B.group.order
    return [list(range(i * r, (i + 1) * r)) for i in range(B.n)]


def drackn_check(B: Roux, params: RouxParameters | None = None, combinatorial: bool = True) -> DracknParameters | None:
    """DRACKN parameters of the roux graph, or None; positive answers are confirmed on the graph."""
    params = params or verify_roux(B)
    found = drackn_from_parameters(B, params)
    if found is not None and combinatorial and B.n * B.group.order <= MAX_BFS_VERTICES:
        direct = drackn_combinatorial(adjacency(B), fibres_of(B))
        if direct != found:
            raise AssertionError(f"parameter route gives {found} but the graph gives {direct}")
    return found


def drackn_to_roux(A, fibres: Sequence[Sequence[int]]) -> Roux:
    """Recover a roux from a cover of K_n whose matching blocks generate an abelian group."""
    A = np.asarray(A)
    n = len(fibres)
    r = len(fibres[0])
    if any(len(f) != r for f in fibres) or sorted(v for f in fibres for v in f) != list(range(A.shape[0])):
        raise ValueError("fibres must partition the vertices into equal parts")
    if not np.array_equal(A, A.T):
        raise ValueError("adjacency matrix is not symmetric")
    perm = {}
    for i in range(n):
        for j in range(n):
            blk = A[np.ix_(fibres[i], fibres[j])]
            if i == j:
                if blk.any():
                    raise ValueError(f"fibre {i} is not an independent set")
                continue
            if not ((blk.sum(axis=0) == 1).all() and (blk.sum(axis=1) == 1).all()):
                raise ValueError(f"fibres {i} and {j} are not joined by a perfect matching")
            perm[i, j] = tuple(int(np.flatnonzero(blk[:, b])[0]) for b in range(r))  # b -> a
    if r == 1:
        return Roux(make_group([]), np.where(np.eye(n, dtype=bool), ZERO, 0))
    # relabel each fibre j > 0 through the matching with fibre 0
    relabel = [tuple(range(r))] + [perm[0, j] for j in range(1, n)]
    inv = lambda p: tuple(np.argsort(p).tolist())
    compose = lambda p, s: tuple(p[s[b]] for b in range(r))  # p after s
    blocks = {}
    for (i, j), p in perm.items():
        # new block maps b' -> a' with b = relabel[j][b'] and a' = relabel[i]^-1[a]
        blocks[i, j] = compose(inv(relabel[i]), compose(p, relabel[j]))
    ident = tuple(range(r))
    gens = sorted(set(blocks.values()))
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(g, x)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    elems = sorted(elems)
    if any(compose(a, b) != compose(b, a) for a in gens for b in gens):
        raise ValueError("matching permutations do not commute; the cover is not abelian")
    if len(elems) != r:
        raise ValueError(f"matching group has order {len(elems)}, expected {r} for a regular action")
    group, iso = decompose(elems, compose, ident)
    back = {p: t for t, p in iso.items()}
    rows = [[None if i == j else back[blocks[i, j]] for j in range(n)] for i in range(n)]
    return Roux.from_rows(group, rows)


def distance_regular_check(B: Roux, params: RouxParameters | None = None) -> bool:
    """Connected with exactly four distinct eigenvalues (antipodal case only)."""
    params = params or verify_roux(B)
    if any(c <= 0 for c in params.counts):
        raise ValueError("distance-regularity test needs every parameter positive")
    if components(B, params, check=False) != 1:
        return False
    return len(spectrum(B, params)) == 4


def is_distance_regular(A: np.ndarray) -> bool:
    """Brute force: p^k_ij constant on each distance class."""
    dist = distance_matrix(A)
    if (dist < 0).any():
        return False
    D = int(dist.max())
    ind = [(dist == k).astype(np.float64) for k in range(D + 1)]
    for i in range(D + 1):
        for j in range(D + 1):
            P = ind[i] @ ind[j]
            for k in range(D + 1):
                vals = P[dist == k]
                if vals.size and (vals != vals[0]).any():
                    return False
    return True


# --------------------------------------------------------------------------
# odd prime quotients


@dataclass
class QuotientResult:
    roux: Roux
    params: RouxParameters
    drackn: DracknParameters | None


def odd_prime_quotient(B: Roux, p: int, params: RouxParameters | None = None) -> QuotientResult:
    """Push B forward onto C_p through the first cyclic factor divisible by p."""
    if p < 3 or not _is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    params = params or verify_roux(B)
    G = B.group
    if G.order % p:
        raise ValueError(f"{p} does not divide |Gamma| = {G.order}")
    if components(B, params, check=False) != 1:
        raise ValueError("the roux graph is disconnected")
    j = next(k for k, m in enumerate(G.orders) if m % p == 0)
    Cp = make_group([p])
    phi = Homomorphism(G, Cp, [(1,) if k == j else (0,) for k in range(len(G.orders))])
    Q = pushforward(B, phi)
    qparams = verify_roux(Q)
    return QuotientResult(Q, qparams, drackn_check(Q, qparams))


def edge_list(B: Roux) -> str:
    A = adjacency(B)
    G, r = B.group, B.group.order
    name = lambda v: "(" + ",".join(map(str, (v // r, *G.elements[v % r]))) + ")"
    lines = [f"{name(u)} {name(v)}" for u, v in zip(*np.nonzero(np.triu(A)))]
    return "\n".join(lines) + "\n"
