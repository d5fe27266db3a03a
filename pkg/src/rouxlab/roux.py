"""Roux matrices: storage, axiom verification through B^2, and switching-type transformations.

A roux of size n over an abelian group G is stored as an n x n integer array of
element indices (in the group's lexicographic enumeration) with -1 marking the
zero diagonal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .abelian import AbelianGroup, decompose, make_group, subgroup_elements

ZERO = -1


class RouxError(ValueError):
    """Base class for roux failures."""


class RouxStructureError(RouxError):
    """One of the structural axioms (zero diagonal, group entries, inverse symmetry) fails."""

    def __init__(self, axiom: str, cell: tuple[int, int], message: str):
        super().__init__(f"{axiom} violated at cell {cell}: {message}")
        self.axiom = axiom
        self.cell = cell


class RouxAxiomError(RouxError):
    """B^2 is not of the form (n-1)I + sum_g c_g gB."""

    def __init__(self, cell: tuple[int, int], message: str, demand=None, conflict=None):
        super().__init__(f"B^2 identity fails at cell {cell}: {message}")
        self.cell = cell
        self.demand = demand
        self.conflict = conflict


@dataclass(frozen=True)
class RouxParameters:
    """Parameter counts c_g indexed like group.elements."""

    group: AbelianGroup
    counts: tuple[int, ...]

    def __getitem__(self, g) -> int:
        return self.counts[self.group.index(g)]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return dict(zip(self.group.elements, self.counts))

    def labelled(self) -> dict[str, int]:
        return {self.group.label(g): c for g, c in self.as_dict().items()}

    def support(self) -> list[tuple[int, ...]]:
        return [g for g, c in self.as_dict().items() if c]

    def check(self, n: int) -> None:
        inv = self.group.inv_table
        if any(c < 0 for c in self.counts):
            raise RouxError(f"negative parameter in {self.labelled()}")
        if self.total != n - 2:
            raise RouxError(f"parameters sum to {self.total}, expected {n - 2}")
        for k, c in enumerate(self.counts):
            if self.counts[inv[k]] != c:
                raise RouxError("parameters are not inverse-symmetric")

    def to_json(self) -> dict:
        return {"group": list(self.group.orders),
                "c": [{"g": list(g), "label": self.group.label(g), "count": c}
                      for g, c in self.as_dict().items()]}


class Roux:
    """Structurally valid roux candidate; (R4) is checked by verify_roux."""

    def __init__(self, group: AbelianGroup, idx):
        idx = np.array(idx, dtype=np.int64)
        if idx.ndim != 2 or idx.shape[0] != idx.shape[1]:
            raise RouxStructureError("shape", (0, 0), f"expected a square grid, got {idx.shape}")
        n = idx.shape[0]
        if n < 2:
            raise RouxStructureError("shape", (0, 0), "need n >= 2")
        diag = np.diag(idx)
        bad = np.flatnonzero(diag != ZERO)
        if bad.size:
            i = int(bad[0])
            raise RouxStructureError("R1", (i, i), "diagonal entry is not zero")
        off = ~np.eye(n, dtype=bool)
        bad = np.argwhere(off & ((idx < 0) | (idx >= group.order)))
        if bad.size:
            i, j = map(int, bad[0])
            raise RouxStructureError("R2", (i, j), "off-diagonal entry is not a group element")
        inv = group.inv_table
        safe = np.where(off, idx, 0)
        bad = np.argwhere(off & (safe.T != inv[safe]))
        if bad.size:
            i, j = map(int, bad[0])
            raise RouxStructureError("R3", (i, j), f"entry ({j},{i}) is not the inverse of entry ({i},{j})")
        idx.setflags(write=False)
        self.group = group
        self.idx = idx
        self.n = n

    @classmethod
    def from_rows(cls, group: AbelianGroup, rows: Sequence[Sequence]) -> "Roux":
        """Build from rows whose cells are None (zero) or group elements."""
        idx = [[ZERO if cell is None else group.index(cell) for cell in row] for row in rows]
        return cls(group, idx)

    def __repr__(self):
        return f"Roux(n={self.n}, group={self.group})"

    def __eq__(self, other):
        return (isinstance(other, Roux) and self.group == other.group
                and np.array_equal(self.idx, other.idx))

    def __hash__(self):
        return hash((self.group, self.idx.tobytes()))

    def entry(self, i: int, j: int) -> tuple[int, ...] | None:
        k = int(self.idx[i, j])
        return None if k == ZERO else self.group.elements[k]

    def rows(self) -> list[list]:
        return [[self.entry(i, j) for j in range(self.n)] for i in range(self.n)]

    @cached_property
    def parameters(self) -> RouxParameters:
        return verify_roux(self)

    def one_hot(self) -> np.ndarray:
        """Array E with E[g, i, j] = 1 iff entry (i, j) is g."""
        r = self.group.order
        return (self.idx[None, :, :] == np.arange(r)[:, None, None]).astype(np.float64)

    def to_json(self) -> dict:
        return {"group": list(self.group.orders), "n": self.n,
                "rows": [[None if cell is None else list(cell) for cell in row]
                         for row in self.rows()]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Roux":
        group = make_group(obj["group"])
        rows = obj["rows"]
        if "n" in obj and len(rows) != int(obj["n"]):
            raise RouxStructureError("shape", (0, 0), f"declared n={obj['n']} but {len(rows)} rows")
        return cls.from_rows(group, rows)

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def square_counts(B: Roux) -> np.ndarray:
    """Exact group-ring square: C[h, i, j] = coefficient of h in (B^2)_{ij}."""
    G = B.group
    E = B.one_hot()
    C = np.zeros_like(E)
    mul = G.mul_table
    for g1 in range(G.order):
        for g2 in range(G.order):
            C[mul[g1, g2]] += E[g1] @ E[g2]
    return np.rint(C).astype(np.int64)


def verify_roux(B: Roux) -> RouxParameters:
    """Check (n-1)I + sum_g c_g gB = B^2 and return the parameters c."""
    G, n = B.group, B.n
    C = square_counts(B)
    ident = G.index(G.identity)
    expected = np.zeros(G.order, dtype=np.int64)
    expected[ident] = n - 1
    for i in range(n):
        if not np.array_equal(C[:, i, i], expected):
            raise RouxAxiomError((i, i), f"diagonal of B^2 is not {n - 1} times the identity")
    if n == 2:
        counts = (0,) * G.order
        return RouxParameters(G, counts)
    # demand[g, i, j] = coefficient of g * B_ij in (B^2)_ij, i.e. the value c_g that cell (i, j) requires
    safe = np.where(B.idx == ZERO, 0, B.idx)
    shifted = G.mul_table[:, safe]  # (r, n, n): index of g*B_ij
    demand = np.take_along_axis(C, shifted, axis=0)
    ref = demand[:, 0, 1]
    off = ~np.eye(n, dtype=bool)
    mismatch = off & np.any(demand != ref[:, None, None], axis=0)
    if mismatch.any():
        i, j = map(int, np.argwhere(mismatch)[0])
        want = dict(zip(map(G.label, G.elements), ref.tolist()))
        got = dict(zip(map(G.label, G.elements), demand[:, i, j].tolist()))
        raise RouxAxiomError((i, j), f"cell (0,1) demands c = {want} but cell ({i},{j}) demands c = {got}",
                             demand=want, conflict=got)
    params = RouxParameters(G, tuple(int(c) for c in ref))
    params.check(n)
    return params


def is_roux(B: Roux) -> bool:
    try:
        verify_roux(B)
    except RouxError:
        return False
    return True


# --------------------------------------------------------------------------
# transformations


def switch(B: Roux, D: Sequence) -> Roux:
    """Replace entry (i, j) by D_i * B_ij * D_j^-1."""
    if len(D) != B.n:
        raise ValueError(f"switching vector has length {len(D)}, expected {B.n}")
    G = B.group
    d = np.array([G.index(x) for x in D], dtype=np.int64)
    return _switch_idx(B, d)


def _switch_idx(B: Roux, d: np.ndarray) -> Roux:
    G = B.group
    safe = np.where(B.idx == ZERO, 0, B.idx)
    out = G.mul_table[d[:, None], safe]
    out = G.div_table[out, d[None, :]]
    np.fill_diagonal(out, ZERO)
    return Roux(G, out)


def normalize(B: Roux) -> Roux:
    """Switching-equivalent roux whose first row and column are the identity."""
    d = B.idx[0].copy()
    d[0] = B.group.index(B.group.identity)
    return _switch_idx(B, d)


def scale(B: Roux, h) -> Roux:
    """Multiply every entry by h; only allowed when h^2 = 1."""
    G = B.group
    h = G.coerce(h)
    if G.op(h, h) != G.identity:
        raise RouxError(f"scaling by {G.label(h)} breaks inverse symmetry since its square is not 1")
    k = G.index(h)
    safe = np.where(B.idx == ZERO, 0, B.idx)
    out = G.mul_table[k, safe]
    np.fill_diagonal(out, ZERO)
    return Roux(G, out)


def scaled_parameters(params: RouxParameters, h) -> RouxParameters:
    """Parameters of hB: c'_g = c_{gh}."""
    G = params.group
    k = G.index(h)
    return RouxParameters(G, tuple(params.counts[G.mul_table[g, k]] for g in range(G.order)))


class Homomorphism:
    """Map between abelian groups given by images of the standard generators."""

    def __init__(self, source: AbelianGroup, target: AbelianGroup, images: Sequence):
        images = [target.coerce(x) for x in images]
        if len(images) != len(source.orders):
            raise ValueError(f"need {len(source.orders)} generator images, got {len(images)}")
        for m, x in zip(source.orders, images):
            if target.power(x, m) != target.identity:
                raise ValueError(f"image {x} has order not dividing {m}; not a homomorphism")
        self.source, self.target, self.images = source, target, images

    def __call__(self, g) -> tuple[int, ...]:
        out = self.target.identity
        for k, x in zip(self.source.coerce(g), self.images):
            out = self.target.op(out, self.target.power(x, k))
        return out

    @cached_property
    def table(self) -> np.ndarray:
        return np.array([self.target.index(self(g)) for g in self.source.elements], dtype=np.int64)

    def is_injective(self) -> bool:
        return len(set(self.table.tolist())) == self.source.order

    def is_surjective(self) -> bool:
        return len(set(self.table.tolist())) == self.target.order


def pushforward(B: Roux, phi: Homomorphism) -> Roux:
    if phi.source != B.group:
        raise ValueError("homomorphism source does not match the roux group")
    safe = np.where(B.idx == ZERO, 0, B.idx)
    out = phi.table[safe]
    np.fill_diagonal(out, ZERO)
    return Roux(phi.target, out)


def pushforward_parameters(params: RouxParameters, phi: Homomorphism) -> RouxParameters:
    counts = np.zeros(phi.target.order, dtype=np.int64)
    np.add.at(counts, phi.table, np.array(params.counts, dtype=np.int64))
    return RouxParameters(phi.target, tuple(int(c) for c in counts))


def embed(B: Roux, phi: Homomorphism) -> Roux:
    """Reinterpret B over a larger group through an injective homomorphism."""
    if not phi.is_injective():
        raise ValueError("embedding homomorphism is not injective")
    return pushforward(B, phi)


@dataclass
class Subgroup:
    """Subgroup of `parent` presented as an abstract AbelianGroup `group`."""

    parent: AbelianGroup
    group: AbelianGroup
    elements: list = field(default_factory=list)
    embedding: dict = field(default_factory=dict)

    @property
    def index(self) -> int:
        return self.parent.order // self.group.order

    def inclusion(self) -> Homomorphism:
        gens = []
        for j in range(len(self.group.orders)):
            e = [0] * len(self.group.orders)
            e[j] = 1
            gens.append(self.embedding[tuple(e)])
        return Homomorphism(self.group, self.parent, gens)


def generated_subgroup(G: AbelianGroup, gens) -> Subgroup:
    elems = subgroup_elements(G, gens)
    small, iso = decompose(elems, G.op, G.identity)
    return Subgroup(G, small, elems, iso)


def minimal_group(B: Roux, params: RouxParameters | None = None) -> tuple[Subgroup, Roux]:
    """Subgroup generated by the support of the parameters, with the normalized roux over it."""
    params = params or verify_roux(B)
    sub = generated_subgroup(B.group, params.support())
    N = normalize(B)
    back = {g: t for t, g in sub.embedding.items()}
    rows = []
    for row in N.rows():
        out = []
        for cell in row:
            if cell is None:
                out.append(None)
            elif cell not in back:
                raise AssertionError(f"normalized entry {cell} escapes the parameter subgroup; "
                                     "this contradicts the roux axioms and indicates a bug")
            else:
                out.append(back[cell])
        rows.append(out)
    return sub, Roux.from_rows(sub.group, rows)


def complete_roux(n: int, group: AbelianGroup | None = None) -> Roux:
    """All off-diagonal entries equal to the identity."""
    group = group or make_group([])
    idx = np.full((n, n), group.index(group.identity), dtype=np.int64)
    np.fill_diagonal(idx, ZERO)
    return Roux(group, idx)


def load_roux(path) -> Roux:
    with open(path) as fh:
        return Roux.from_json(json.load(fh))
