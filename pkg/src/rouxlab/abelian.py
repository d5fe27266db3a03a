"""Finite abelian groups, characters, cyclotomic integers and group-ring elements.

Groups are products of cyclic groups C_{m_1} x ... x C_{m_k}; an element is a
residue tuple and elements are enumerated lexicographically.  Characters are
indexed by the same tuples: the character with exponents (a_1..a_k) sends g to
exp(2 pi i sum_j a_j g_j / m_j).  All character values live in the cyclotomic
field of level L = exponent of the group, where they are stored exactly.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np


def _lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


class AbelianGroup:
    """Direct product of cyclic groups with componentwise arithmetic."""

    def __init__(self, orders: Sequence[int]):
        orders = tuple(int(m) for m in orders)
        if any(m < 1 for m in orders):
            raise ValueError(f"cyclic factor orders must be >= 1, got {orders}")
        self.orders = orders
        self.order = math.prod(orders)
        self.exponent = _lcm(orders)

    def __repr__(self):
        if not self.orders:
            return "AbelianGroup(trivial)"
        return "AbelianGroup(" + " x ".join(f"C{m}" for m in self.orders) + ")"

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and self.orders == other.orders

    def __hash__(self):
        return hash(self.orders)

    @cached_property
    def elements(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(m) for m in self.orders)))

    @cached_property
    def _index(self) -> dict[tuple[int, ...], int]:
        return {g: k for k, g in enumerate(self.elements)}

    def index(self, g) -> int:
        try:
            return self._index[self.coerce(g)]
        except KeyError:
            raise ValueError(f"{g!r} is not an element of {self}") from None

    def coerce(self, g) -> tuple[int, ...]:
        if isinstance(g, (int, np.integer)) and len(self.orders) == 1:
            g = (int(g),)
        g = tuple(int(x) for x in g)
        if len(g) != len(self.orders):
            raise ValueError(f"{g!r} has the wrong length for {self}")
        return tuple(x % m for x, m in zip(g, self.orders))

    @property
    def identity(self) -> tuple[int, ...]:
        return tuple(0 for _ in self.orders)

    def op(self, g, h) -> tuple[int, ...]:
        return tuple((a + b) % m for a, b, m in zip(g, h, self.orders))

    def inverse(self, g) -> tuple[int, ...]:
        return tuple((-a) % m for a, m in zip(g, self.orders))

    def power(self, g, k: int) -> tuple[int, ...]:
        return tuple((a * k) % m for a, m in zip(g, self.orders))

    def element_order(self, g) -> int:
        return _lcm(m // math.gcd(a, m) for a, m in zip(g, self.orders))

    # Index-level tables used by the vectorised code downstream.
    @cached_property
    def mul_table(self) -> np.ndarray:
        els = np.array(self.elements, dtype=np.int64).reshape(self.order, len(self.orders))
        m = np.array(self.orders, dtype=np.int64)
        summed = (els[:, None, :] + els[None, :, :]) % m
        return self._encode(summed)

    @cached_property
    def inv_table(self) -> np.ndarray:
        els = np.array(self.elements, dtype=np.int64).reshape(self.order, len(self.orders))
        m = np.array(self.orders, dtype=np.int64)
        return self._encode((-els) % m)

    @cached_property
    def div_table(self) -> np.ndarray:
        """div_table[x, y] = index of x * y^-1."""
        return self.mul_table[:, self.inv_table]

    def _encode(self, arr: np.ndarray) -> np.ndarray:
        idx = np.zeros(arr.shape[:-1], dtype=np.int64)
        for j, m in enumerate(self.orders):
            idx = idx * m + arr[..., j]
        return idx

    @cached_property
    def characters(self) -> list["Character"]:
        return [Character(self, a) for a in self.elements]

    @cached_property
    def char_table(self) -> np.ndarray:
        """char_table[a, g] = k such that character a at element g is zeta_L^k."""
        L = self.exponent
        els = np.array(self.elements, dtype=np.int64).reshape(self.order, len(self.orders))
        w = np.array([L // m for m in self.orders], dtype=np.int64)
        return (els[:, None, :] * els[None, :, :] * w).sum(axis=-1) % L

    def label(self, g) -> str:
        """Readable label; C4 uses the roots of unity 1, i, -1, -i and C2 uses 1, -1."""
        g = self.coerce(g)
        if self.orders == (4,):
            return ("1", "i", "-1", "-i")[g[0]]
        if self.orders == (2,):
            return ("1", "-1")[g[0]]
        return ",".join(str(x) for x in g) if g else "e"

    def parse_label(self, text: str) -> tuple[int, ...]:
        text = text.strip()
        if self.orders == (4,) and text in ("1", "i", "-1", "-i"):
            return (("1", "i", "-1", "-i").index(text),)
        if self.orders == (2,) and text in ("1", "-1"):
            return (("1", "-1").index(text),)
        if text in ("", "e"):
            return self.identity
        return self.coerce([int(x) for x in text.split(",")])


def make_group(orders: Sequence[int]) -> AbelianGroup:
    return AbelianGroup(orders)


def cyclic(m: int) -> AbelianGroup:
    return AbelianGroup((m,))


# --------------------------------------------------------------------------
# cyclotomic numbers


@lru_cache(maxsize=None)
def cyclotomic_polynomial(L: int) -> tuple[int, ...]:
    """Integer coefficients of the L-th cyclotomic polynomial, constant term first."""
    num = [-1] + [0] * (L - 1) + [1]  # x^L - 1
    for d in range(1, L):
        if L % d == 0:
            num = _polydiv_exact(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    num = num[:]
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1] // den[-1]
        out[k] = c
        for j, dc in enumerate(den):
            num[k + j] -= c * dc
    assert not any(num[: len(den) - 1]), "inexact cyclotomic division"
    return out


@lru_cache(maxsize=None)
def reduction_matrix(L: int) -> np.ndarray:
    """Integer matrix R with row k = canonical coefficients of zeta_L^k."""
    phi = cyclotomic_polynomial(L)
    deg = len(phi) - 1
    R = np.zeros((L, deg), dtype=np.int64)
    cur = [0] * deg
    cur[0] = 1
    for k in range(L):
        R[k] = cur
        # multiply by x and reduce modulo phi (monic)
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, phi[:-1])]
    return R


class Cyclotomic:
    """Exact element of Q(zeta_L) in the power basis 1, zeta, ..., zeta^(phi(L)-1)."""

    __slots__ = ("L", "coeffs")

    def __init__(self, L: int, coeffs: Sequence):
        deg = len(cyclotomic_polynomial(L)) - 1
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > deg:
            coeffs = _reduce_poly(L, coeffs)
        coeffs = coeffs + [Fraction(0)] * (deg - len(coeffs))
        self.L = L
        self.coeffs = tuple(coeffs)

    @classmethod
    def root(cls, L: int, k: int) -> "Cyclotomic":
        return cls(L, [Fraction(int(c)) for c in reduction_matrix(L)[k % L]])

    @classmethod
    def rational(cls, x, L: int = 1) -> "Cyclotomic":
        return cls(L, [Fraction(x)])

    @classmethod
    def from_counts(cls, L: int, counts: Sequence[int]) -> "Cyclotomic":
        """sum_k counts[k] * zeta_L^k."""
        vec = np.asarray(counts, dtype=np.int64) @ reduction_matrix(L)
        return cls(L, [Fraction(int(c)) for c in vec])

    def promote(self, L2: int) -> "Cyclotomic":
        if L2 % self.L:
            raise ValueError(f"cannot embed level {self.L} into level {L2}")
        step = L2 // self.L
        counts = np.zeros(L2, dtype=object)
        for k, c in enumerate(self.coeffs):
            counts[k * step] += c
        R = reduction_matrix(L2)
        vec = [sum((counts[k] * int(R[k, j]) for k in range(L2) if counts[k]), Fraction(0))
               for j in range(R.shape[1])]
        return Cyclotomic(L2, vec)

    def _common(self, other):
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(other, self.L)
        if other.L == self.L:
            return self, other
        L = self.L * other.L // math.gcd(self.L, other.L)
        return self.promote(L), other.promote(L)

    def __add__(self, other):
        a, b = self._common(other)
        return Cyclotomic(a.L, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.L, [-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, Cyclotomic) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._common(other)
        prod = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic(a.L, prod)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Cyclotomic":
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = Cyclotomic.rational(1, self.L)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, other) -> "Cyclotomic":
        other = Fraction(other)
        return Cyclotomic(self.L, [c / other for c in self.coeffs])

    def conjugate(self) -> "Cyclotomic":
        R = reduction_matrix(self.L)
        out = [Fraction(0)] * R.shape[1]
        for k, c in enumerate(self.coeffs):
            if c:
                row = R[(-k) % self.L]
                for j in range(len(out)):
                    if row[j]:
                        out[j] += c * int(row[j])
        return Cyclotomic(self.L, out)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.rational(other, self.L)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        # hash through the minimal level so that promoted copies collide
        return hash(self.canonical_key())

    def canonical_key(self):
        L = self.L
        for d in sorted(k for k in range(1, L + 1) if L % k == 0):
            try:
                low = self._demote(d)
            except ValueError:
                continue
            return (d, low.coeffs)
        return (L, self.coeffs)

    def _demote(self, d: int) -> "Cyclotomic":
        if d == self.L:
            return self
        deg_d = len(cyclotomic_polynomial(d)) - 1
        # Solve by matching: try each candidate built from the promoted basis.
        R = reduction_matrix(self.L)
        step = self.L // d
        basis = np.array([R[k * step] for k in range(deg_d)], dtype=object)
        target = np.array(self.coeffs, dtype=object)
        sol = _solve_rational(basis.T, target)
        if sol is None:
            raise ValueError("not in subfield")
        return Cyclotomic(d, sol)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def is_real(self) -> bool:
        return self == self.conjugate()

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def sqrt_if_integer(self) -> int | None:
        if not self.is_rational():
            return None
        v = self.coeffs[0]
        if v.denominator != 1 or v < 0:
            return None
        s = math.isqrt(v.numerator)
        return s if s * s == v.numerator else None

    def __complex__(self):
        z = complex(math.cos(2 * math.pi / self.L), math.sin(2 * math.pi / self.L))
        return sum((float(c) * z**k for k, c in enumerate(self.coeffs)), 0j)

    def __float__(self):
        return complex(self).real

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*z{self.L}^{k}")
        return "Cyclotomic(" + (" + ".join(terms) or "0") + ")"

    def to_json(self) -> dict:
        return {"L": self.L, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Cyclotomic":
        return cls(int(obj["L"]), [Fraction(c) for c in obj["coeffs"]])


def _reduce_poly(L: int, coeffs: list[Fraction]) -> list[Fraction]:
    R = reduction_matrix(L)
    out = [Fraction(0)] * R.shape[1]
    for k, c in enumerate(coeffs):
        if c:
            row = R[k % L] if k >= L else R[k]
            # zeta^k for k >= L equals zeta^(k mod L)
            for j in range(len(out)):
                if row[j]:
                    out[j] += c * int(row[j])
    return out


def _solve_rational(A: np.ndarray, b: np.ndarray) -> list[Fraction] | None:
    """Exact least-squares-free solve of A x = b over Q (A has full column rank)."""
    m, n = A.shape
    M = [[Fraction(A[i, j]) for j in range(n)] + [Fraction(b[i])] for i in range(m)]
    row = 0
    pivots = []
    for col in range(n):
        piv = next((r for r in range(row, m) if M[r][col] != 0), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv = 1 / M[row][col]
        M[row] = [x * inv for x in M[row]]
        for r in range(m):
            if r != row and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
    if any(M[r][n] != 0 for r in range(row, m)):
        return None
    x = [Fraction(0)] * n
    for r, col in enumerate(pivots):
        x[col] = M[r][n]
    return x


# --------------------------------------------------------------------------
# characters and group rings


class Character:
    """Character of an AbelianGroup, indexed by an exponent tuple."""

    __slots__ = ("group", "exponents")

    def __init__(self, group: AbelianGroup, exponents):
        self.group = group
        self.exponents = group.coerce(exponents)

    def __repr__(self):
        return f"Character({self.exponents})"

    def __eq__(self, other):
        return (isinstance(other, Character) and self.group == other.group
                and self.exponents == other.exponents)

    def __hash__(self):
        return hash((self.group, self.exponents))

    @property
    def level(self) -> int:
        return self.group.exponent

    @property
    def index(self) -> int:
        return self.group.index(self.exponents)

    def exponent_at(self, g) -> int:
        """k such that the value at g is zeta_L^k, L = group exponent."""
        L = self.group.exponent
        return sum(a * x * (L // m) for a, x, m in
                   zip(self.exponents, self.group.coerce(g), self.group.orders)) % L

    def __call__(self, g) -> Cyclotomic:
        return Cyclotomic.root(self.level, self.exponent_at(g))

    def is_trivial(self) -> bool:
        return not any(self.exponents)

    def __mul__(self, other: "Character") -> "Character":
        return Character(self.group, self.group.op(self.exponents, other.exponents))

    def __pow__(self, k: int) -> "Character":
        return Character(self.group, self.group.power(self.exponents, k))

    def inverse(self) -> "Character":
        return Character(self.group, self.group.inverse(self.exponents))

    def order(self) -> int:
        return self.group.element_order(self.exponents)


def parse_character(group: AbelianGroup, text: str | Sequence[int] | None) -> Character:
    """Parse a character given as 'a1,a2,...'; None means the identity-like
    character with all exponents 1 (alpha(z) = z on a cyclic group)."""
    if text is None:
        return Character(group, tuple(1 for _ in group.orders))
    if isinstance(text, str):
        text = [int(x) for x in text.split(",") if x.strip()]
    return Character(group, text)


class GroupRingElement:
    """Finitely supported integer combination of group elements."""

    def __init__(self, group: AbelianGroup, coeffs: Mapping | None = None):
        self.group = group
        self.coeffs: dict[tuple[int, ...], int] = {}
        for g, c in (coeffs or {}).items():
            if c:
                g = group.coerce(g)
                self.coeffs[g] = self.coeffs.get(g, 0) + int(c)
        self.coeffs = {g: c for g, c in self.coeffs.items() if c}

    @classmethod
    def delta(cls, group: AbelianGroup, g) -> "GroupRingElement":
        return cls(group, {group.coerce(g): 1})

    def __repr__(self):
        return f"GroupRingElement({self.coeffs})"

    def __eq__(self, other):
        return (isinstance(other, GroupRingElement) and self.group == other.group
                and self.coeffs == other.coeffs)

    def _check(self, other):
        if self.group != other.group:
            raise ValueError("group ring elements over different groups")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out.get(g, 0) + c
        return GroupRingElement(self.group, out)

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement(self.group, {g: c * other for g, c in self.coeffs.items()})
        self._check(other)
        out: dict = {}
        for g, a in self.coeffs.items():
            for h, b in other.coeffs.items():
                k = self.group.op(g, h)
                out[k] = out.get(k, 0) + a * b
        return GroupRingElement(self.group, out)

    __rmul__ = __mul__

    def star(self) -> "GroupRingElement":
        return GroupRingElement(self.group, {self.group.inverse(g): c for g, c in self.coeffs.items()})

    def counts(self) -> np.ndarray:
        vec = np.zeros(self.group.order, dtype=np.int64)
        for g, c in self.coeffs.items():
            vec[self.group.index(g)] += c
        return vec


def eval_character(alpha: Character, x: GroupRingElement) -> Cyclotomic:
    """Linear extension of a character to the group ring."""
    if alpha.group != x.group:
        raise ValueError("character and group ring element belong to different groups")
    L = alpha.level
    counts = np.zeros(L, dtype=np.int64)
    for g, c in x.coeffs.items():
        counts[alpha.exponent_at(g)] += c
    return Cyclotomic.from_counts(L, counts)


def hat_c(params, alpha: Character) -> Cyclotomic:
    """Fourier coefficient sum_h c_h * conj(alpha(h)).

    `params` is a mapping g -> int over alpha's group, or anything with a
    `counts` array indexed like the group's elements.
    """
    group = alpha.group
    counts = _param_counts(params, group)
    L = group.exponent
    row = group.char_table[alpha.index]
    acc = np.zeros(L, dtype=np.int64)
    np.add.at(acc, (-row) % L, counts)
    return Cyclotomic.from_counts(L, acc)


def _param_counts(params, group: AbelianGroup) -> np.ndarray:
    if hasattr(params, "counts") and not callable(params.counts):
        if params.group != group:
            raise ValueError("parameters and character belong to different groups")
        return np.asarray(params.counts, dtype=np.int64)
    counts = np.zeros(group.order, dtype=np.int64)
    for g, c in dict(params).items():
        counts[group.index(g)] += int(c)
    return counts


def subgroup_elements(group: AbelianGroup, gens: Iterable) -> list[tuple[int, ...]]:
    """Elements of the subgroup generated by gens, in the group's order."""
    members = {group.identity}
    frontier = [group.identity]
    gens = [group.coerce(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = group.op(x, g)
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    return [g for g in group.elements if g in members]


def decompose(elements: Sequence, op, identity) -> tuple[AbelianGroup, dict]:
    """Find an isomorphism from a product of cyclic groups onto a finite abelian
    group given by its element list and operation.

    Returns (AbelianGroup, iso) where iso maps residue tuples to elements.  The
    cyclic factors are chosen with nonincreasing orders by backtracking search,
    which is adequate for the small groups handled here.
    """
    elements = list(elements)
    size = len(elements)

    def order(x):
        k, y = 1, x
        while y != identity:
            y = op(y, x)
            k += 1
        return k

    orders = {x: order(x) for x in elements}

    def span(gens):
        return set(subgroup_elements_generic(gens, op, identity))

    def search(chosen, current):
        if len(current) == size:
            return chosen
        # next factor: try the largest available orders first
        cands = sorted((x for x in elements if x not in current),
                       key=lambda x: (-orders[x], elements.index(x)))
        for x in cands:
            m = orders[x]
            if chosen and m > orders[chosen[-1]]:
                continue
            new = span([*chosen, x])
            if len(new) == len(current) * m:
                res = search([*chosen, x], new)
                if res is not None:
                    return res
        return None

    gens = search([], {identity})
    assert gens is not None
    group = AbelianGroup(tuple(orders[g] for g in gens))
    iso = {}
    for t in group.elements:
        y = identity
        for g, k in zip(gens, t):
            for _ in range(k):
                y = op(y, g)
        iso[t] = y
    assert len(set(iso.values())) == size
    return group, iso


def subgroup_elements_generic(gens, op, identity) -> list:
    members = [identity]
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = op(x, g)
                if y not in seen:
                    seen.add(y)
                    members.append(y)
                    nxt.append(y)
        frontier = nxt
    return members
