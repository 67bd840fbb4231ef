"""Finite fields GF(p^m) with log/antilog tables.

Elements are the integers ``0..q-1``; the base-``p`` digits of an element are
the coefficients of its polynomial representative, least significant first.
"""

from __future__ import annotations

import itertools
from functools import lru_cache


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, m)`` with ``q = p**m`` or None if ``q`` is not a prime power."""
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    m = 0
    while q % p == 0:
        q //= p
        m += 1
    return (p, m) if q == 1 else None


def _digits(x: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        x, r = divmod(x, p)
        out.append(r)
    return out


def _number(ds, p: int) -> int:
    return sum(d * p ** i for i, d in enumerate(ds))


class GF:
    """The field with ``q`` elements, built from the first primitive polynomial found.

    Candidate monic polynomials are tried in lexicographic order of their
    coefficient vectors, so the tables are fixed for each ``q``.
    """

    def __init__(self, q: int):
        pm = prime_power(q)
        if pm is None:
            raise ValueError(f"{q} is not a prime power")
        self.q = q
        self.p, self.m = pm
        self.poly = self._primitive_poly()
        self.exp, self.log = self._tables(self.poly)

    def _times_x(self, ds: list[int], poly) -> list[int]:
        p, m = self.p, self.m
        top = ds[-1]
        shifted = [0] + ds[:-1]
        # x^m = -(c_0 + c_1 x + ... + c_{m-1} x^{m-1})
        return [(s - top * c) % p for s, c in zip(shifted, poly)]

    def _tables(self, poly):
        q = self.q
        exp = [0] * (2 * q)
        log = [None] * q
        ds = [1] + [0] * (self.m - 1)
        for i in range(q - 1):
            x = _number(ds, self.p)
            if log[x] is not None:
                return None, None
            exp[i] = x
            log[x] = i
            ds = self._times_x(ds, poly)
        for i in range(q - 1, 2 * q):
            exp[i] = exp[i - (q - 1)]
        return exp, log

    def _primitive_poly(self):
        if self.m == 1:
            # the least primitive root modulo p, as the polynomial x - g
            for g in range(1, self.p):
                if len({pow(g, i, self.p) for i in range(self.p - 1)}) == self.p - 1:
                    return ((-g) % self.p,)
        for poly in itertools.product(range(self.p), repeat=self.m):
            if poly[0] == 0:
                continue
            exp, _ = self._tables(poly)
            if exp is not None:
                return poly
        raise AssertionError("no primitive polynomial found")

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        return _number([(x + y) % self.p for x, y in zip(_digits(a, self.p, self.m),
                                                        _digits(b, self.p, self.m))], self.p)

    def neg(self, a: int) -> int:
        return _number([(-x) % self.p for x in _digits(a, self.p, self.m)], self.p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)
