"""Exact arithmetic in small finite fields GF(p^m).

An element is encoded as an integer in [0, q): the polynomial
c_0 + c_1*x + ... + c_{m-1}*x^{m-1} over F_p is packed as
sum(c_i * p^i).  The encoding is canonical, so elements compare and
serialize as plain ints.

Construction picks the lexicographically smallest monic irreducible
modulus and the smallest-encoded primitive element, making
``make_field(p, m)`` a pure function of its arguments.  All
multiplicative structure runs on discrete-log tables; the numpy
variants of the operations (``vadd``, ``vmul``, ...) apply them
elementwise to whole arrays and carry the heavy lifting for the
matrix layer.
"""

from __future__ import annotations

import functools
import math

import numpy as np

DEFAULT_SIZE_LIMIT = 1 << 16

# q x q lookup tables for vectorised addition are only built below this
# size; larger fields fall back to digit-wise arithmetic.
_ADD_TABLE_MAX = 512

_ARITH_KINDS = ("add", "sub", "mul", "div", "inv", "pow")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _to_digits(value: int, p: int, length: int) -> list[int]:
    digits = []
    for _ in range(length):
        digits.append(value % p)
        value //= p
    return digits


def _from_digits(digits, p: int) -> int:
    value = 0
    for c in reversed(digits):
        value = value * p + c
    return value


def _poly_mulmod(a: list[int], b: list[int], modulus: list[int], p: int) -> list[int]:
    """Product of two coefficient lists reduced mod a monic `modulus`."""
    m = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % p
    for d in range(len(prod) - 1, m - 1, -1):
        c = prod[d]
        if c == 0:
            continue
        prod[d] = 0
        for j in range(m):
            prod[d - m + j] = (prod[d - m + j] - c * modulus[j]) % p
    prod = prod[:m] + [0] * max(0, m - len(prod))
    return prod


def _poly_powmod(a: list[int], e: int, modulus: list[int], p: int) -> list[int]:
    m = len(modulus) - 1
    result = [1] + [0] * (m - 1)
    base = list(a)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, modulus, p)
        base = _poly_mulmod(base, base, modulus, p)
        e >>= 1
    return result


def _poly_divides(d: list[int], f: list[int], p: int) -> bool:
    """Whether monic polynomial d divides f over F_p."""
    rem = list(f)
    deg_d = len(d) - 1
    while len(rem) - 1 >= deg_d:
        lead = rem[-1]
        if lead == 0:
            rem.pop()
            continue
        shift = len(rem) - 1 - deg_d
        for j in range(deg_d + 1):
            rem[shift + j] = (rem[shift + j] - lead * d[j]) % p
        rem.pop()
    return all(c == 0 for c in rem)


def _is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by all monic polynomials of degree <= deg/2."""
    deg = len(poly) - 1
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for enc in range(p**d):
            divisor = _to_digits(enc, p, d) + [1]
            if _poly_divides(divisor, poly, p):
                return False
    return True


def _smallest_irreducible(p: int, m: int) -> list[int]:
    # Candidates ordered by the base-p packing of (c_0, ..., c_{m-1}).
    for enc in range(p**m):
        poly = _to_digits(enc, p, m) + [1]
        if _is_irreducible(poly, p):
            return poly
    raise RuntimeError(f"no irreducible polynomial of degree {m} over F_{p}")


class FieldSpec:
    """A concrete realization of GF(p^m) with log-table arithmetic.

    Attributes
    ----------
    p, m, q : characteristic, extension degree and size q = p^m.
    modulus : coefficient list [c_0, ..., c_m] of the monic irreducible
        modulus polynomial (c_m = 1).
    alpha : integer encoding of the primitive element.
    exp_table : numpy array, exp_table[i] = alpha^i, length q - 1.
    log_table : numpy array, log base alpha (log_table[0] is a sentinel).

    Instances are immutable; share them freely across workers.
    """

    def __init__(self, p: int, m: int, modulus: list[int] | None = None,
                 alpha: int | None = None, size_limit: int = DEFAULT_SIZE_LIMIT):
        if not _is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if m < 1:
            raise ValueError(f"extension degree must be >= 1, got {m}")
        q = p**m
        if q > size_limit:
            raise ValueError(f"field size {q} exceeds the table budget {size_limit}")
        self.p = p
        self.m = m
        self.q = q

        if modulus is None:
            modulus = _smallest_irreducible(p, m)
        else:
            modulus = [c % p for c in modulus]
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree m")
            if not _is_irreducible(modulus, p):
                raise ValueError("modulus is not irreducible")
        self.modulus = tuple(modulus)

        if alpha is None:
            alpha = self._find_primitive()
        elif not self._has_full_order(alpha):
            raise ValueError(f"{alpha} is not a primitive element")
        self.alpha = alpha

        self._build_tables()

    # -- construction helpers -------------------------------------------

    def _mul_raw(self, a: int, b: int) -> int:
        pa = _to_digits(a, self.p, self.m)
        pb = _to_digits(b, self.p, self.m)
        return _from_digits(_poly_mulmod(pa, pb, list(self.modulus), self.p), self.p)

    def _pow_raw(self, a: int, e: int) -> int:
        pa = _to_digits(a, self.p, self.m)
        return _from_digits(_poly_powmod(pa, e, list(self.modulus), self.p), self.p)

    def _has_full_order(self, a: int) -> bool:
        if a == 0:
            return False
        n = self.q - 1
        if n == 1:
            return a == 1
        if self._pow_raw(a, n) != 1:
            return False
        return all(self._pow_raw(a, n // ell) != 1 for ell in _prime_factors(n))

    def _find_primitive(self) -> int:
        for cand in range(1, self.q):
            if self._has_full_order(cand):
                return cand
        raise RuntimeError("no primitive element found")  # unreachable

    def _build_tables(self):
        p, m, q = self.p, self.m, self.q
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.full(q, 2 * q - 2, dtype=np.int64)  # sentinel at index 0
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._mul_raw(x, self.alpha)
        if x != 1:
            raise RuntimeError("primitive element does not have order q-1")
        self.exp_table = exp
        self.log_table = log

        # Extended exp table: legitimate log sums stay below 2q-3, sums
        # involving the zero sentinel land in the zero-filled tail.
        expx = np.zeros(4 * q - 3, dtype=np.int64)
        idx = np.arange(2 * q - 3)
        expx[idx] = exp[idx % (q - 1)]
        self._expx = expx

        self._neg = np.array([self._negate_raw(a) for a in range(q)], dtype=np.int64)
        inv = np.zeros(q, dtype=np.int64)
        inv[exp] = exp[(-np.arange(q - 1)) % (q - 1)]
        self._inv = inv

        digits = np.zeros((q, m), dtype=np.int64)
        vals = np.arange(q)
        for j in range(m):
            digits[:, j] = vals % p
            vals = vals // p
        self._digits = digits
        self._powp = p ** np.arange(m, dtype=np.int64)

        if q <= _ADD_TABLE_MAX:
            d = digits
            self._add_table = ((d[:, None, :] + d[None, :, :]) % p) @ self._powp
        else:
            self._add_table = None

        # x^s mod modulus for s up to 2m-2, used to fold convolution
        # coefficients back into the field in matrix products.
        redc = np.zeros((2 * m - 1, m), dtype=np.int64)
        for s in range(2 * m - 1):
            coeffs = [0] * s + [1]
            if s >= m:
                coeffs = _poly_mulmod([1], coeffs, list(self.modulus), p)
            coeffs = coeffs + [0] * (m - len(coeffs))
            redc[s] = coeffs[:m]
        self._redc = redc

        self._frob_tables: dict[int, np.ndarray] = {}

    def _negate_raw(self, a: int) -> int:
        return _from_digits([(-c) % self.p for c in _to_digits(a, self.p, self.m)], self.p)

    # -- scalar operations ----------------------------------------------

    def add(self, a: int, b: int) -> int:
        return int(self.vadd(a, b))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, int(self._neg[b]))

    def neg(self, a: int) -> int:
        return int(self._neg[a])

    def mul(self, a: int, b: int) -> int:
        return int(self._expx[self.log_table[a] + self.log_table[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return int(self._inv[a])

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return self.mul(a, int(self._inv[b]))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 1 if e == 0 else 0
        return int(self.exp_table[(int(self.log_table[a]) * e) % (self.q - 1)])

    def arith(self, a: int, b: int | None, kind: str) -> int:
        """Dispatch one field operation by name.

        ``inv`` ignores ``b``; ``pow`` treats ``b`` as an integer
        exponent (negative exponents are allowed for nonzero ``a``).
        """
        if kind not in _ARITH_KINDS:
            raise ValueError(f"unknown arith kind {kind!r}")
        if kind == "inv":
            return self.inv(a)
        if kind == "pow":
            if a == 0:
                if b < 0:
                    raise ZeroDivisionError("negative power of zero")
                return 1 if b == 0 else 0
            return self.pow(a, b)
        return getattr(self, kind)(a, b)

    def frobenius(self, a: int, i: int) -> int:
        """The i-th Frobenius automorphism a -> a^(p^i)."""
        if i < 0:
            raise ValueError("Frobenius exponent must be >= 0")
        return int(self.frob_table(i)[a])

    def dlog(self, a: int) -> int:
        """Discrete log base alpha; defined for nonzero a."""
        if a == 0:
            raise ZeroDivisionError("discrete log of zero")
        return int(self.log_table[a])

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    # -- vectorised operations (numpy arrays of encodings) ---------------

    def vadd(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.m == 1:
            return (np.asarray(a) + b) % self.p
        if self._add_table is not None:
            return self._add_table[a, b]
        da = (self._digits[a] + self._digits[b]) % self.p
        return da @ self._powp

    def vsub(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.m == 1:
            return (np.asarray(a) - b) % self.p
        return self.vadd(a, self._neg[b])

    def vneg(self, a):
        return self._neg[a]

    def vmul(self, a, b):
        if self.m == 1:
            return (np.asarray(a) * b) % self.p
        return self._expx[self.log_table[a] + self.log_table[b]]

    def vinv(self, a):
        """Elementwise inverse; entries must be nonzero."""
        return self._inv[a]

    def vpow(self, a, e: int):
        """Elementwise a^e for integer e >= 0 (0^0 = 1 by convention)."""
        a = np.asarray(a)
        la = (self.log_table[a] * e) % (self.q - 1)
        out = self.exp_table[la]
        if e == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, out)

    def vfrob(self, a, i: int):
        return self.frob_table(i)[a]

    def vsum(self, a, axis: int = 0):
        """Field sum of an array along an axis."""
        a = np.asarray(a)
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        if self.m == 1:
            return a.sum(axis=axis) % self.p
        dig = self._digits[a].sum(axis=axis) % self.p
        return dig @ self._powp

    def frob_table(self, i: int) -> np.ndarray:
        i = i % self.m
        table = self._frob_tables.get(i)
        if table is None:
            shift = pow(self.p, i, self.q - 1) if self.q > 2 else 1
            table = np.zeros(self.q, dtype=np.int64)
            table[self.exp_table] = self.exp_table[
                (np.arange(self.q - 1) * shift) % (self.q - 1)
            ]
            self._frob_tables[i] = table
        return table

    # -- misc -------------------------------------------------------------

    def describe(self) -> dict:
        """JSON-ready description used by the instance file format."""
        return {
            "p": self.p,
            "m": self.m,
            "modulus": list(self.modulus),
            "alpha": self.alpha,
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.m, self.modulus, self.alpha) == (
            other.p, other.m, other.modulus, other.alpha)

    def __hash__(self):
        return hash((self.p, self.m, self.modulus, self.alpha))

    def __repr__(self):
        return f"FieldSpec(p={self.p}, m={self.m}, q={self.q})"


@functools.lru_cache(maxsize=None)
def make_field(p: int, m: int) -> FieldSpec:
    """The canonical GF(p^m): smallest irreducible modulus, smallest
    primitive element.  Cached, so repeated callers share tables."""
    return FieldSpec(p, m)


def field_from_description(desc: dict) -> FieldSpec:
    """Rebuild a FieldSpec from its serialized form, reusing the cached
    canonical instance when the description matches it."""
    p, m = int(desc["p"]), int(desc["m"])
    canonical = make_field(p, m)
    modulus = tuple(int(c) for c in desc["modulus"])
    alpha = int(desc["alpha"])
    if canonical.modulus == modulus and canonical.alpha == alpha:
        return canonical
    return FieldSpec(p, m, modulus=list(modulus), alpha=alpha)


def prime_power(q: int) -> tuple[int, int]:
    """Split q into (p, m) with q = p^m, p prime; raises otherwise."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    for p in range(2, math.isqrt(q) + 1):
        if q % p == 0:
            m = 0
            n = q
            while n % p == 0:
                n //= p
                m += 1
            if n != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, m
    return q, 1
