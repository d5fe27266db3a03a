"""Finite groups by index, subgroup and double-coset machinery, Higman pairs.

Group elements are integers 0..size-1.  Every group provides a vectorised
`mul(a, b)` on integer arrays.  Small groups carry an explicit Cayley table;
SL(2, q) x C_r computes products from finite-field tables instead, since its
Cayley table would not fit in memory for the larger q.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .abelian import decompose
from .fields import field as finite_field, prime_power
from .roux import Roux, RouxParameters, verify_roux

MAX_GROUP_ORDER = 200_000
MAX_SL2_Q = 13


class GroupError(ValueError):
    pass


class FiniteGroup:
    """Base class: subclasses set size, identity, inv and implement mul."""

    size: int
    identity: int
    inv: np.ndarray

    def mul(self, a, b):
        raise NotImplementedError

    def label(self, x: int) -> str:
        return str(int(x))

    def elements(self) -> np.ndarray:
        return np.arange(self.size, dtype=np.int64)

    def conj(self, a, x):
        """a x a^-1, broadcasting."""
        return self.mul(self.mul(a, x), self.inv[np.asarray(a)])

    def power(self, x: int, k: int) -> int:
        out = self.identity
        for _ in range(k):
            out = int(self.mul(out, x))
        return out

    def order_of(self, x: int) -> int:
        k, y = 1, int(x)
        while y != self.identity:
            y = int(self.mul(y, x))
            k += 1
        return k

    def spot_check(self, trials: int = 200, seed: int = 0) -> None:
        """Associativity on random triples plus identity and inverse laws."""
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, self.size, size=(3, trials))
        if not np.array_equal(self.mul(self.mul(a, b), c), self.mul(a, self.mul(b, c))):
            raise GroupError("multiplication is not associative")
        e = self.elements()
        if not (np.array_equal(self.mul(e, self.identity), e) and np.array_equal(self.mul(self.identity, e), e)):
            raise GroupError("identity law fails")
        if not (self.mul(e, self.inv[e]) == self.identity).all():
            raise GroupError("inverse law fails")


class CayleyGroup(FiniteGroup):
    def __init__(self, table, labels: Sequence[str] | None = None):
        table = np.array(table, dtype=np.int64)
        size = table.shape[0]
        if table.shape != (size, size) or table.min() < 0 or table.max() >= size:
            raise GroupError("Cayley table must be a square array of element indices")
        if size > MAX_GROUP_ORDER:
            raise GroupError(f"group order {size} exceeds the cap {MAX_GROUP_ORDER}")
        if any(len(set(row)) != size for row in table.tolist()):
            raise GroupError("Cayley table rows are not permutations")
        ids = [e for e in range(size) if np.array_equal(table[e], np.arange(size))]
        if not ids:
            raise GroupError("no identity element")
        self.table = table
        self.size = size
        self.identity = ids[0]
        self.inv = np.argmax(table == self.identity, axis=1).astype(np.int64)
        self.labels = list(labels) if labels else None
        self.spot_check()

    def mul(self, a, b):
        return self.table[a, b]

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(int(x))


class DirectProductCyclic(FiniteGroup):
    """G x C_r with index g*r + z."""

    def __init__(self, base: FiniteGroup, r: int):
        if r < 1:
            raise GroupError("cyclic factor order must be >= 1")
        self.base, self.r = base, r
        self.size = base.size * r
        if self.size > MAX_GROUP_ORDER:
            raise GroupError(f"group order {self.size} exceeds the cap {MAX_GROUP_ORDER}")
        self.identity = base.identity * r
        e = np.arange(self.size, dtype=np.int64)
        self.inv = base.inv[e // r] * r + (-(e % r)) % r

    def mul(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        r = self.r
        return self.base.mul(a // r, b // r) * r + (a % r + b % r) % r

    def pack(self, g: int, z: int) -> int:
        return g * self.r + z % self.r

    def label(self, x: int) -> str:
        return f"({self.base.label(x // self.r)}, {x % self.r})"


class SL2(FiniteGroup):
    """SL(2, q) with elements enumerated lexicographically by (a, b, c, d)."""

    def __init__(self, q: int):
        if prime_power(q) is None:
            raise GroupError(f"{q} is not a prime power")
        F = finite_field(q)
        self.F, self.q = F, q
        quads = np.array(list(itertools.product(range(q), repeat=4)), dtype=np.int64)
        a, b, c, d = quads.T
        det = F.sub[F.mul[a, d], F.mul[b, c]]
        self.mats = quads[det == 1]
        self.size = len(self.mats)
        self.code = np.full(q ** 4, -1, dtype=np.int64)
        self.code[self._key(self.mats)] = np.arange(self.size)
        self.identity = self.index(1, 0, 0, 1)
        a, b, c, d = self.mats.T
        # inverse of [a b; c d] with det 1 is [d -b; -c a]
        self.inv = self.code[self._key(np.stack([d, F.neg[b], F.neg[c], a], axis=1))]

    def _key(self, quads) -> np.ndarray:
        q = self.q
        quads = np.asarray(quads)
        return ((quads[..., 0] * q + quads[..., 1]) * q + quads[..., 2]) * q + quads[..., 3]

    def index(self, a: int, b: int, c: int, d: int) -> int:
        k = int(self.code[self._key(np.array([a, b, c, d]))])
        if k < 0:
            raise GroupError(f"[{a} {b}; {c} {d}] is not in SL(2,{self.q})")
        return k

    def mul(self, x, y):
        F = self.F
        x, y = np.asarray(x), np.asarray(y)
        A, Bm = self.mats[x], self.mats[y]
        a, b, c, d = (A[..., k] for k in range(4))
        e, f, g, h = (Bm[..., k] for k in range(4))
        M = np.stack([F.add[F.mul[a, e], F.mul[b, g]], F.add[F.mul[a, f], F.mul[b, h]],
                      F.add[F.mul[c, e], F.mul[d, g]], F.add[F.mul[c, f], F.mul[d, h]]], axis=-1)
        return self.code[self._key(M)]

    def label(self, x: int) -> str:
        a, b, c, d = self.mats[int(x)]
        return f"[{a} {b}; {c} {d}]"


def build_sl2(q: int) -> SL2:
    return SL2(q)


def direct_with_cyclic(G: FiniteGroup, r: int) -> DirectProductCyclic:
    return DirectProductCyclic(G, r)


# --------------------------------------------------------------------------
# subgroups and cosets


@dataclass
class SubgroupHandle:
    parent: FiniteGroup
    members: np.ndarray  # sorted indices
    gens: list = field(default_factory=list)

    def __post_init__(self):
        self.members = np.asarray(self.members, dtype=np.int64)
        self.mask = np.zeros(self.parent.size, dtype=bool)
        self.mask[self.members] = True

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x)])

    def __eq__(self, other):
        return isinstance(other, SubgroupHandle) and np.array_equal(self.members, other.members)


def subgroup_closure(G: FiniteGroup, gens: Sequence[int]) -> SubgroupHandle:
    gens = np.unique(np.asarray(list(gens), dtype=np.int64))
    seen = np.zeros(G.size, dtype=bool)
    seen[G.identity] = True
    frontier = np.array([G.identity], dtype=np.int64)
    while frontier.size:
        prod = np.unique(G.mul(frontier[:, None], gens[None, :]).ravel())
        new = prod[~seen[prod]]
        seen[new] = True
        frontier = new
    return SubgroupHandle(G, np.flatnonzero(seen), list(gens.tolist()))


def normalizer(G: FiniteGroup, H: SubgroupHandle) -> SubgroupHandle:
    """{a : a H a^-1 = H}, tested in chunks to bound memory."""
    keep = np.zeros(G.size, dtype=bool)
    gens = np.array(H.gens if H.gens else H.members, dtype=np.int64)
    step = max(1, 400_000 // max(1, len(gens)))
    for start in range(0, G.size, step):
        a = np.arange(start, min(G.size, start + step), dtype=np.int64)
        img = G.conj(a[:, None], gens[None, :])
        keep[a] = H.mask[img].all(axis=1)
    # conjugating generators into H gives aHa^-1 <= H, hence equality by finiteness
    return SubgroupHandle(G, np.flatnonzero(keep))


def left_cosets(G: FiniteGroup, K: SubgroupHandle) -> list[int]:
    """Minimal-index representative of each left coset xK, in increasing order."""
    label = np.full(G.size, -1, dtype=np.int64)
    reps = []
    for x in range(G.size):
        if label[x] < 0:
            label[G.mul(x, K.members)] = len(reps)
            reps.append(x)
    return reps


def double_coset(G: FiniteGroup, H: SubgroupHandle, x: int) -> np.ndarray:
    left = G.mul(H.members, x)
    return np.unique(G.mul(left[:, None], H.members[None, :]).ravel())


def double_cosets(G: FiniteGroup, H: SubgroupHandle) -> list[np.ndarray]:
    """Partition of G into sets H x H, ordered by minimal element."""
    assigned = np.zeros(G.size, dtype=bool)
    out = []
    for x in range(G.size):
        if not assigned[x]:
            D = double_coset(G, H, x)
            assigned[D] = True
            out.append(D)
    return out


def double_coset_count(G: FiniteGroup, H: SubgroupHandle, limit: int | None = None) -> int:
    assigned = np.zeros(G.size, dtype=bool)
    count = 0
    for x in range(G.size):
        if not assigned[x]:
            assigned[double_coset(G, H, x)] = True
            count += 1
            if limit is not None and count > limit:
                return count
    return count


# --------------------------------------------------------------------------
# Higman pairs


@dataclass
class HigmanCertificate:
    G: FiniteGroup
    H: SubgroupHandle
    K: SubgroupHandle
    key: int | None
    h1: bool
    h2: bool
    h3: bool
    h4: bool
    h5: bool
    n: int
    r: int
    reason: str = ""

    @property
    def passed(self) -> bool:
        return (self.h1 and self.h2 and self.h3 and self.h4 and self.h5
                and self.key is not None and self.key not in self.K)

    def to_json(self) -> dict:
        return {"pass": self.passed, "H1": self.h1, "H2": self.h2, "H3": self.h3, "H4": self.h4,
                "H5": self.h5, "order_G": self.G.size, "order_K": self.K.order, "order_H": self.H.order,
                "n": self.n, "r": self.r, "key": self.key,
                "key_label": None if self.key is None else self.G.label(self.key), "reason": self.reason}


def quotient_is_abelian(G: FiniteGroup, K: SubgroupHandle, H: SubgroupHandle) -> bool:
    reps = np.array(left_cosets_within(G, K, H), dtype=np.int64)
    a, b = reps[:, None], reps[None, :]
    comm = G.mul(G.mul(a, b), G.mul(G.inv[a], G.inv[b]))
    return bool(H.mask[comm].all())


def left_cosets_within(G: FiniteGroup, K: SubgroupHandle, H: SubgroupHandle) -> list[int]:
    """Minimal representatives of the cosets aH inside K."""
    seen = np.zeros(G.size, dtype=bool)
    reps = []
    for a in K.members:
        if not seen[a]:
            seen[G.mul(a, H.members)] = True
            reps.append(int(a))
    return reps


def check_key(G: FiniteGroup, H: SubgroupHandle, K: SubgroupHandle, b: int,
              coset: np.ndarray | None = None) -> tuple[bool, bool, bool]:
    """(H3), (H4), (H5) for a candidate key b outside K."""
    D = coset if coset is not None else double_coset(G, H, b)
    inD = np.zeros(G.size, dtype=bool)
    inD[D] = True
    h3 = bool(inD[G.inv[b]])
    h4 = bool(inD[G.conj(K.members, b)].all())
    ab = G.mul(K.members, b)
    h5 = bool(H.mask[K.members[inD[ab]]].all())
    return h3, h4, h5


def verify_higman_pair(G: FiniteGroup, H: SubgroupHandle) -> HigmanCertificate:
    if H.order >= G.size:
        raise GroupError("H must be a proper subgroup")
    K = normalizer(G, H)
    n, r = G.size // K.order, K.order // H.order
    h1 = K.order < G.size and double_coset_count(G, K, limit=2) == 2
    h2 = quotient_is_abelian(G, K, H)
    cert = HigmanCertificate(G, H, K, None, h1, h2, False, False, False, n, r)
    if K.order == G.size:
        cert.reason = "H is normal, so no key exists outside its normalizer"
        return cert
    # (H3)-(H5) only depend on the double coset HbH, so each thick coset is tested once
    best = (False, False, False)
    for D in double_cosets(G, H):
        b = int(D[0])
        if b in K:
            continue
        flags = check_key(G, H, K, b, D)
        if sum(flags) > sum(best):
            best = flags
        if all(flags):
            cert.key = b
            best = flags
            break
    cert.h3, cert.h4, cert.h5 = best
    if not cert.passed:
        failing = [name for name, ok in zip(("H1", "H2", "H3", "H4", "H5"), (h1, h2, *best)) if not ok]
        cert.reason = "failed " + ", ".join(failing)
    return cert


def double_coset_census(cert: HigmanCertificate) -> dict:
    """Thin cosets (inside K) and thick cosets with their sizes."""
    thin, thick = [], []
    for D in double_cosets(cert.G, cert.H):
        (thin if D[0] in cert.K else thick).append(len(D))
    return {"thin": thin, "thick": thick, "total": len(thin) + len(thick)}


@dataclass
class HigmanRoux:
    roux: Roux
    params: RouxParameters
    formula_params: RouxParameters
    quotient_reps: dict  # group element tuple -> representative in K
    coset_reps: list


def _quotient_group(G: FiniteGroup, K: SubgroupHandle, H: SubgroupHandle, a_reps: list[int],
                    quotient: tuple | None):
    """Identify K/H with an AbelianGroup; returns (group, tuple -> rep, coset label array over K)."""
    coset_of = np.full(G.size, -1, dtype=np.int64)
    for k, a in enumerate(a_reps):
        coset_of[G.mul(a, H.members)] = k
    if (coset_of[K.members] < 0).any():
        raise GroupError("representatives do not cover K/H")
    if quotient is not None:
        group, gens = quotient
        gens = [int(x) for x in gens]
        iso = {}
        for t in group.elements:
            y = G.identity
            for g, e in zip(gens, t):
                for _ in range(e):
                    y = int(G.mul(y, g))
            iso[t] = a_reps[coset_of[y]]
        if len({coset_of[v] for v in iso.values()}) != group.order or group.order != len(a_reps):
            raise GroupError("given generators do not present K/H")
    else:
        op = lambda x, y: a_reps[coset_of[int(G.mul(x, y))]]
        group, iso = decompose(a_reps, op, a_reps[coset_of[G.identity]])
    return group, iso, coset_of


def roux_from_higman(cert: HigmanCertificate, x_reps: Sequence[int] | None = None,
                     a_reps: Sequence[int] | None = None, quotient: tuple | None = None) -> HigmanRoux:
    """Roux over K/H: entry (i, j) is the g with x_i^-1 x_j in H a_g b H."""
    if not cert.passed:
        raise GroupError(f"certificate does not pass: {cert.reason}")
    G, H, K, b = cert.G, cert.H, cert.K, cert.key
    x_reps = list(x_reps) if x_reps is not None else left_cosets(G, K)
    a_reps = list(a_reps) if a_reps is not None else left_cosets_within(G, K, H)
    n, r = cert.n, cert.r
    if len(x_reps) != n or len({tuple(np.sort(G.mul(x, K.members))) for x in x_reps}) != n:
        raise GroupError("x representatives are not a transversal of G/K")
    if len(a_reps) != r:
        raise GroupError("a representatives are not a transversal of K/H")
    group, iso, _ = _quotient_group(G, K, H, a_reps, quotient)
    label = np.full(G.size, -1, dtype=np.int64)
    thick = {}
    for t in group.elements:
        D = double_coset(G, H, int(G.mul(iso[t], b)))
        if (label[D] >= 0).any():
            raise GroupError("thick double cosets overlap; the key is not valid")
        label[D] = group.index(t)
        thick[t] = D
    xs = np.array(x_reps, dtype=np.int64)
    prod = G.mul(G.inv[xs][:, None], xs[None, :])
    idx = label[prod]
    np.fill_diagonal(idx, -1)
    if (idx[~np.eye(n, dtype=bool)] < 0).any():
        raise GroupError("some x_i^-1 x_j lies in K for i != j")
    B = Roux(group, idx)
    params = verify_roux(B)
    bHb = G.conj(b, H.members)
    mask = np.zeros(G.size, dtype=bool)
    mask[bHb] = True
    counts = []
    for t in group.elements:
        inter = int(mask[thick[t]].sum())
        num = (n - 1) * inter
        if num % H.order:
            raise GroupError("parameter formula is not integral")
        counts.append(num // H.order)
    formula = RouxParameters(group, tuple(counts))
    if formula != params:
        raise GroupError(f"parameter formula {formula.labelled()} disagrees with B^2 {params.labelled()}")
    return HigmanRoux(B, params, formula, iso, x_reps)


# --------------------------------------------------------------------------
# standard examples


def psl_pair(q: int) -> tuple[DirectProductCyclic, SubgroupHandle]:
    """G = SL(2,q) x C4 with H = {([a b; 0 a^-1], beta(a))}, beta the quadratic character."""
    pe = prime_power(q)
    if pe is None or pe[0] == 2:
        raise GroupError("q must be an odd prime power")
    if q > MAX_SL2_Q:
        raise GroupError(f"q = {q} exceeds the supported range (q <= {MAX_SL2_Q})")
    S = build_sl2(q)
    G = direct_with_cyclic(S, 4)
    F = S.F
    gens = []
    for a in range(1, q):
        for bb in range(q):
            z = 0 if F.is_square(a) else 2
            gens.append(G.pack(S.index(a, bb, 0, int(F.inv[a])), z))
    H = subgroup_closure(G, gens)
    return G, H


def psl_quotient_generator(G: DirectProductCyclic) -> int:
    """The element (I, i), whose coset generates K/H = C4."""
    S = G.base
    return G.pack(S.identity, 1)


def s3_cayley() -> CayleyGroup:
    perms = list(itertools.permutations(range(3)))
    index = {p: k for k, p in enumerate(perms)}
    table = [[index[tuple(p[x] for x in s)] for s in perms] for p in perms]
    return CayleyGroup(table, ["".join(map(str, p)) for p in perms])


def load_group(obj: Mapping) -> tuple[FiniteGroup, SubgroupHandle | None]:
    """Group input: {"cayley": table} or {"sl2q": q, "cyclic": r}, plus optional "subgroup"."""
    if "cayley" in obj:
        G: FiniteGroup = CayleyGroup(obj["cayley"], obj.get("labels"))
    elif "sl2q" in obj:
        q = int(obj["sl2q"])
        if q > MAX_SL2_Q:
            raise GroupError(f"q = {q} exceeds the supported range (q <= {MAX_SL2_Q})")
        base = build_sl2(q)
        r = int(obj.get("cyclic", 1))
        G = direct_with_cyclic(base, r) if r > 1 else base
    else:
        raise GroupError('group file needs "cayley" or "sl2q"')
    sub = obj.get("subgroup")
    if sub is None:
        return G, None
    if sub == "psl":
        q = int(obj["sl2q"])
        if int(obj.get("cyclic", 1)) != 4:
            raise GroupError('the "psl" subgroup needs cyclic = 4')
        return psl_pair(q)
    gens = [_parse_element(G, x) for x in sub]
    return G, subgroup_closure(G, gens)


def _parse_element(G: FiniteGroup, x) -> int:
    if isinstance(x, int):
        if not 0 <= x < G.size:
            raise GroupError(f"element index {x} out of range")
        return x
    if isinstance(x, Mapping) and "matrix" in x:
        base = G.base if isinstance(G, DirectProductCyclic) else G
        if not isinstance(base, SL2):
            raise GroupError("matrix elements need an SL(2,q) group")
        (a, b), (c, d) = x["matrix"]
        m = base.index(*(v % base.q for v in (a, b, c, d)))
        if isinstance(G, DirectProductCyclic):
            return G.pack(m, int(x.get("z", 0)))
        return m
    raise GroupError(f"cannot parse group element {x!r}")


def load_group_file(path) -> tuple[FiniteGroup, SubgroupHandle | None]:
    with open(path) as fh:
        return load_group(json.load(fh))
