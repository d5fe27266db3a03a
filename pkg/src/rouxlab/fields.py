"""Small finite fields as lookup tables.

Elements of GF(p^e) are encoded as integers 0..q-1 whose base-p digits are the
coefficients of the polynomial representative (least significant digit is the
constant term).  For prime q the encoding is the residue itself.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# Irreducible polynomials, coefficients listed from x^0 upwards, monic.
IRREDUCIBLE = {
    4: (2, (1, 1, 1)),          # x^2 + x + 1
    8: (2, (1, 1, 0, 1)),       # x^3 + x + 1
    9: (3, (1, 0, 1)),          # x^2 + 1
    16: (2, (1, 1, 0, 0, 1)),   # x^4 + x + 1
    25: (5, (2, 1, 1)),         # x^2 + x + 2
    27: (3, (1, 2, 0, 1)),      # x^3 + 2x + 1
}


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    k = 2
    while k * k <= m:
        if m % k == 0:
            return False
        k += 1
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, e) with q = p**e, or None."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            if not _is_prime(p):
                return None
            e, m = 0, q
            while m % p == 0:
                m //= p
                e += 1
            return (p, e) if m == 1 else None
    return None


class GF:
    """Finite field with precomputed addition and multiplication tables."""

    def __init__(self, q: int, modulus: tuple[int, ...] | None = None):
        pe = prime_power(q)
        if pe is None:
            raise ValueError(f"{q} is not a prime power")
        self.q = q
        self.p, self.e = pe
        p, e = self.p, self.e
        if e > 1:
            if modulus is None:
                if q not in IRREDUCIBLE:
                    raise ValueError(f"no built-in irreducible polynomial for GF({q})")
                modulus = IRREDUCIBLE[q][1]
            if len(modulus) != e + 1 or modulus[-1] % p != 1:
                raise ValueError("modulus must be monic of degree e")
        self.modulus = modulus

        digits = np.array([[(x // p**k) % p for k in range(e)] for x in range(q)], dtype=np.int64)
        weights = p ** np.arange(e, dtype=np.int64)
        self.digits = digits
        self.add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        self.neg = ((-digits) % p) @ weights
        if e == 1:
            r = np.arange(q, dtype=np.int64)
            self.mul = (r[:, None] * r[None, :]) % p
        else:
            self.mul = np.zeros((q, q), dtype=np.int64)
            for x in range(q):
                for y in range(x, q):
                    z = self._polymul(digits[x], digits[y]) @ weights
                    self.mul[x, y] = self.mul[y, x] = z
        self.inv = np.zeros(q, dtype=np.int64)
        for x in range(1, q):
            self.inv[x] = int(np.flatnonzero(self.mul[x] == 1)[0])
        self.sub = self.add[:, self.neg]

    def _polymul(self, a, b) -> np.ndarray:
        p, e = self.p, self.e
        prod = np.zeros(2 * e - 1, dtype=np.int64)
        for i in range(e):
            prod[i:i + e] += a[i] * b
        prod %= p
        mod = np.array(self.modulus, dtype=np.int64)
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k]
            if c:
                prod[k - e:k + 1] = (prod[k - e:k + 1] - c * mod) % p
        return prod[:e]

    def power(self, x: int, k: int) -> int:
        out = 1
        for _ in range(k):
            out = int(self.mul[out, x])
        return out

    def is_square(self, x: int) -> bool:
        """Quadratic-residue test by Euler's criterion (odd q, x nonzero)."""
        return self.power(x, (self.q - 1) // 2) == 1

    def __repr__(self):
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)
