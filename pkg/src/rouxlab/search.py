"""Feasibility search for abelian DRACKN parameters (d, n, r, c, delta)."""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Iterable

from .fields import _is_prime

FLAG_NAMES = ("gerzon", "q_int", "sqrt_q_int", "c_positive", "c_id_nonneg", "external_unchecked", "degenerate_q",
              "nonstandard_r")


@dataclass(frozen=True, order=True)
class FeasibilityRow:
    n: int
    d: int
    r: int
    c: int
    delta: int
    flags: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def key(self) -> tuple[int, int, int, int, int]:
        return (self.d, self.n, self.r, self.c, self.delta)

    def to_json(self) -> dict:
        return {"d": self.d, "n": self.n, "r": self.r, "c": self.c, "delta": self.delta, "flags": dict(self.flags)}

    def tsv(self) -> str:
        on = ",".join(k for k in FLAG_NAMES if self.flags.get(k)) or "-"
        return f"{self.d}\t{self.n}\t{self.r}\t{self.c}\t{self.delta}\t{on}"


def q_value(n: int, d: int) -> Fraction:
    return Fraction((n - 2 * d) ** 2 * (n - 1), d * (n - d))


def _divisors_for(n: int, policy: str) -> list[int]:
    if policy == "odd-primes":
        return [r for r in range(3, n + 1, 2) if n % r == 0 and _is_prime(r)]
    if policy == "all":
        return [r for r in range(2, n + 1) if n % r == 0]
    raise ValueError(f"unknown r policy {policy!r}")


def rows_for_n(n: int, r_policy: str = "odd-primes") -> list[FeasibilityRow]:
    out = []
    rs = _divisors_for(n, r_policy)
    if not rs:
        return out
    for d in range(2, n - 1):
        if n > min(d * d, (n - d) ** 2):
            continue
        q = q_value(n, d)
        if q.denominator != 1:
            continue
        root = math.isqrt(q.numerator)
        if root * root != q.numerator:
            continue
        sign = 1 if n >= 2 * d else -1
        top = n - 2 - sign * root
        for r in rs:
            if top % r:
                continue
            c = top // r
            delta = n - r * c - 2
            if c <= 0 or delta + c < 0:
                continue
            flags = {"gerzon": True, "q_int": True, "sqrt_q_int": True, "c_positive": True,
                     "c_id_nonneg": True, "external_unchecked": True}
            if root == 0:
                flags["degenerate_q"] = True
            if r_policy != "odd-primes":
                flags["nonstandard_r"] = True
            out.append(FeasibilityRow(n, d, r, c, delta, flags))
    return out


def default_threads() -> int:
    env = os.environ.get("ROUX_LAB_THREADS")
    return max(1, int(env)) if env else 1


def drackn_feasible(max_n: int, r_policy: str = "odd-primes", threads: int | None = None) -> list[FeasibilityRow]:
    """Rows passing the integrality, Gerzon and divisibility steps, sorted by (n, d, r)."""
    if max_n < 3:
        raise ValueError("max_n must be at least 3")
    threads = threads or default_threads()
    ns = range(3, max_n + 1)
    if threads > 1:
        with ProcessPoolExecutor(threads) as pool:
            chunks = list(pool.map(rows_for_n, ns, [r_policy] * len(ns), chunksize=16))
    else:
        chunks = [rows_for_n(n, r_policy) for n in ns]
    return sorted(row for chunk in chunks for row in chunk)


def load_reference() -> list[tuple[int, ...]]:
    text = resources.files("rouxlab").joinpath("data/table1.json").read_text()
    return [tuple(r) for r in json.loads(text)["rows"]]


@dataclass
class CrossCheck:
    reference: int
    found: int
    missing: list
    extras: list

    @property
    def ok(self) -> bool:
        return not self.missing

    def to_json(self) -> dict:
        return {"reference": self.reference, "found": self.found, "ok": self.ok,
                "missing": [list(r) for r in self.missing], "extras": [list(r) for r in self.extras]}


class MissingReferenceRows(AssertionError):
    pass


def cross_check_table(rows: Iterable[FeasibilityRow], reference: Iterable[tuple] | None = None,
                      strict: bool = True) -> CrossCheck:
    """Reference rows must all be found; search rows beyond them are listed as extras."""
    reference = [tuple(r) for r in (load_reference() if reference is None else reference)]
    keys = [row.key for row in rows]
    found = set(keys)
    refset = set(reference)
    report = CrossCheck(len(reference), sum(k in found for k in refset),
                        [r for r in reference if r not in found], [k for k in keys if k not in refset])
    if strict and not report.ok:
        raise MissingReferenceRows(f"{len(report.missing)} reference rows missing, first {report.missing[0]}")
    return report


def to_tsv(rows: Iterable[FeasibilityRow]) -> str:
    return "d\tn\tr\tc\tdelta\tflags\n" + "".join(row.tsv() + "\n" for row in rows)


def to_json(rows: Iterable[FeasibilityRow]) -> str:
    return json.dumps([row.to_json() for row in rows], indent=1)
