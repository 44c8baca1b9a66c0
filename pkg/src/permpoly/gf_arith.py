"""Finite field tower F_p <= F_q <= F_{q^n} on canonical integer indices.

An element of F_{q^n} is a length-n coefficient vector over F_q, and each
F_q coefficient is a length-e vector over F_p.  Flattening both levels
little-endian gives the canonical index::

    index = sum_j idx_q(c_j) * q**j,   idx_q(c) = sum_k c_k * p**k

so index 0 is zero, index 1 is one, and the embedded subfield F_q is exactly
the indices ``0 .. q-1``.  Addition is carry-free base-p digit addition at
every level; multiplication goes through log/exp tables of a primitive
element.  All arithmetic methods accept Python ints or numpy integer arrays.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

DEFAULT_SIZE_CAP = 2**20
_ADD_TABLE_LIMIT = 1024


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_factors(n: int) -> list[int]:
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


# ---------------------------------------------------------------------------
# construction-time polynomial arithmetic over a small base field
# ---------------------------------------------------------------------------

class _PrimeOps:
    def __init__(self, p):
        self.size = p
        self.p = p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)


class _TableOps:
    """Scalar ops on F_q indices backed by finished exp/log tables."""

    def __init__(self, p, size, exp, log):
        self.p = p
        self.size = size
        self._exp = exp
        self._log = log

    def add(self, a, b):
        return _digit_add(a, b, self.p)

    def sub(self, a, b):
        return _digit_add(a, _digit_neg(b, self.p), self.p)

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.size - 1)]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(-self._log[a]) % (self.size - 1)]


def _digit_add(a: int, b: int, p: int) -> int:
    if p == 2:
        return a ^ b
    out, w = 0, 1
    while a or b:
        out += ((a % p + b % p) % p) * w
        a //= p
        b //= p
        w *= p
    return out


def _digit_neg(a: int, p: int) -> int:
    if p == 2:
        return a
    out, w = 0, 1
    while a:
        out += ((-(a % p)) % p) * w
        a //= p
        w *= p
    return out


def _trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mulmod(a, b, m, ops):
    """(a*b) mod m; m monic, coefficients low-degree first."""
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj:
                prod[i + j] = ops.add(prod[i + j], ops.mul(ai, bj))
    return _poly_mod(prod, m, ops)


def _poly_mod(a, m, ops):
    a = list(a)
    d = len(m) - 1
    for k in range(len(a) - 1, d - 1, -1):
        c = a[k]
        if c == 0:
            continue
        for j in range(d + 1):
            a[k - d + j] = ops.sub(a[k - d + j], ops.mul(c, m[j]))
    return _trim(a[:d])


def _poly_powmod(a, k, m, ops):
    result = [1]
    base = _poly_mod(a, m, ops)
    while k:
        if k & 1:
            result = _poly_mulmod(result, base, m, ops)
        base = _poly_mulmod(base, base, m, ops)
        k >>= 1
    return result


def _poly_gcd(a, b, ops):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        inv_lead = ops.inv(b[-1])
        monic = [ops.mul(c, inv_lead) for c in b]
        a, b = b, _poly_mod(a, monic, ops)
    return a


def _poly_eval(c, x, ops):
    acc = 0
    for coef in reversed(c):
        acc = ops.add(ops.mul(acc, x), coef)
    return acc


def _is_irreducible(m, ops) -> bool:
    d = len(m) - 1
    if d == 1:
        return True
    if d <= 3:
        return all(_poly_eval(m, x, ops) != 0 for x in range(ops.size))
    # x^{s^k} - x shares no factor with m for every k <= d/2
    xpow = [0, 1]
    for _ in range(d // 2):
        xpow = _poly_powmod(xpow, ops.size, m, ops)
        diff = list(xpow) + [0] * max(0, 2 - len(xpow))
        diff[1] = ops.sub(diff[1], 1)
        g = _poly_gcd(m, _trim(diff), ops)
        if len(g) > 1:
            return False
    return True


def _index_to_vec(idx: int, base: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        out.append(idx % base)
        idx //= base
    return out


def _vec_to_index(vec, base: int) -> int:
    idx = 0
    for c in reversed(vec):
        idx = idx * base + c
    return idx


def smallest_irreducible(degree: int, ops) -> list[int]:
    """Monic irreducible of the given degree with the smallest canonical index.

    Candidates are ordered by the base-``ops.size`` little-endian index of the
    non-leading coefficient vector.  Returns coefficients low-degree first,
    leading 1 included.
    """
    for idx in range(ops.size**degree):
        m = _index_to_vec(idx, ops.size, degree) + [1]
        if _is_irreducible(m, ops):
            return m
    raise FieldError(f"no irreducible polynomial of degree {degree} found")


def _build_exp_log(size: int, base, modulus) -> tuple[np.ndarray, np.ndarray]:
    """exp/log tables of the smallest primitive element of base[y]/(modulus)."""
    d = len(modulus) - 1
    order = size - 1
    exp = np.zeros(max(order, 1), dtype=np.int64)
    log = np.zeros(size, dtype=np.int64)
    if order == 1:
        exp[0] = 1
        return exp, log
    factors = prime_factors(order)
    one = [1]
    gen = None
    for idx in range(2, size) if size > 2 else ():
        vec = _trim(_index_to_vec(idx, base.size, d))
        if all(_poly_powmod(vec, order // r, modulus, base) != one for r in factors):
            gen = vec
            break
    if gen is None:
        raise FieldError("no primitive element found")
    shift = gen == [0, 1]
    cur = [1] + [0] * (d - 1)
    for k in range(order):
        idx = _vec_to_index(cur, base.size)
        exp[k] = idx
        log[idx] = k
        if shift:
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [base.sub(c, base.mul(top, mc)) for c, mc in zip(cur, modulus)]
        else:
            cur = _poly_mulmod(cur, gen, modulus, base)
            cur = cur + [0] * (d - len(cur))
    if len(set(exp.tolist())) != order:
        raise FieldError("generator is not primitive")
    return exp, log


# ---------------------------------------------------------------------------
# the field tower
# ---------------------------------------------------------------------------

class Field:
    """The tower F_p <= F_q <= F_{q^n}, q = p**e, with index arithmetic.

    Build one with :func:`make_field`.  Instances are immutable; lookup
    tables are computed once and shared.
    """

    def __init__(self, p, e, n, modulus_q, modulus_qn, exp, log):
        self.p = p
        self.e = e
        self.n = n
        self.q = p**e
        self.order = self.q**n
        self.modulus_q = tuple(modulus_q)
        self.modulus_qn = tuple(modulus_qn)
        self._exp = exp
        self._log = log
        self._exp.setflags(write=False)
        self._log.setflags(write=False)
        self.ndigits = e * n

    def __repr__(self):
        return f"Field(p={self.p}, e={self.e}, n={self.n})"

    def __eq__(self, other):
        return isinstance(other, Field) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @property
    def key(self):
        return (self.p, self.e, self.n, self.modulus_q, self.modulus_qn)

    # -- element views ----------------------------------------------------

    @cached_property
    def digits(self) -> np.ndarray:
        """Base-p digits of every index, shape (order, e*n)."""
        idx = np.arange(self.order, dtype=np.int64)
        w = self.p ** np.arange(self.ndigits, dtype=np.int64)
        return ((idx[:, None] // w[None, :]) % self.p).astype(np.int64)

    @cached_property
    def _weights(self) -> np.ndarray:
        return self.p ** np.arange(self.ndigits, dtype=np.int64)

    @cached_property
    def _add_table(self):
        if self.p == 2 or self.order > _ADD_TABLE_LIMIT:
            return None
        d = self.digits
        t = ((d[:, None, :] + d[None, :, :]) % self.p) @ self._weights
        t.setflags(write=False)
        return t

    @cached_property
    def _neg_table(self) -> np.ndarray:
        t = ((-self.digits) % self.p) @ self._weights
        t.setflags(write=False)
        return t

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def subfield_elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def coords_q(self, x):
        """Coefficient vector(s) of x over F_q (length n, low degree first)."""
        x = np.asarray(x, dtype=np.int64)
        w = self.q ** np.arange(self.n, dtype=np.int64)
        return (x[..., None] // w) % self.q

    def from_coords_q(self, c) -> np.ndarray:
        c = np.asarray(c, dtype=np.int64)
        return c @ (self.q ** np.arange(self.n, dtype=np.int64))

    def element(self, index: int, level: str = "qn") -> Element:
        return Element(self, int(index), level)

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _out(res, *args):
        if all(isinstance(a, (int, np.integer)) for a in args):
            return int(res)
        return res

    @cached_property
    def _exp_list(self) -> list:
        return self._exp.tolist()

    @cached_property
    def _log_list(self) -> list:
        return self._log.tolist()

    def add(self, a, b):
        if type(a) is int and type(b) is int:
            if self.p == 2:
                return a ^ b
            t = self._add_table
            if t is not None:
                return int(t[a, b])
        if self.p == 2:
            return self._out(np.bitwise_xor(a, b), a, b)
        t = self._add_table
        if t is not None:
            return self._out(t[a, b], a, b)
        da, db = self.digits[a], self.digits[b]
        return self._out(((da + db) % self.p) @ self._weights, a, b)

    def neg(self, a):
        if self.p == 2:
            return a
        return self._out(self._neg_table[a], a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if type(a) is int and type(b) is int:
            if a == 0 or b == 0:
                return 0
            lg = self._log_list
            return self._exp_list[(lg[a] + lg[b]) % (self.order - 1)]
        a_arr = np.asarray(a, dtype=np.int64)
        b_arr = np.asarray(b, dtype=np.int64)
        res = self._exp[(self._log[a_arr] + self._log[b_arr]) % (self.order - 1)]
        res = np.where((a_arr == 0) | (b_arr == 0), 0, res)
        return self._out(res, a, b)

    def inv(self, a):
        a_arr = np.asarray(a, dtype=np.int64)
        if np.any(a_arr == 0):
            raise ZeroDivisionError("inverse of zero")
        return self._out(self._exp[(-self._log[a_arr]) % (self.order - 1)], a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k: int):
        """a**k through discrete logs; 0**0 == 1."""
        if k < 0:
            return self.pow(self.inv(a), -k)
        a_arr = np.asarray(a, dtype=np.int64)
        if k == 0:
            return self._out(np.ones_like(a_arr), a)
        kk = k % (self.order - 1)
        res = self._exp[(self._log[a_arr] * kk) % (self.order - 1)]
        res = np.where(a_arr == 0, 0, res)
        return self._out(res, a)

    def sum(self, values, axis=-1):
        """Field sum along an axis."""
        values = np.asarray(values, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor.reduce(values, axis=axis)
        s = self.digits[values].sum(axis=axis if axis >= 0 else axis - 1) % self.p
        return s @ self._weights

    def frobenius(self, a, times: int = 1):
        """a**(q**times)."""
        return self.pow(a, self.q**times)

    # -- trace and subfield -------------------------------------------------

    @cached_property
    def trace_table(self) -> np.ndarray:
        x = self.elements()
        acc = np.zeros_like(x)
        cur = x
        for _ in range(self.n):
            acc = self.add(acc, cur)
            cur = self.pow(cur, self.q)
        if np.any(acc >= self.q):
            raise FieldError("trace left the subfield F_q")
        acc.setflags(write=False)
        return acc

    def trace(self, x):
        """Tr(x) = x + x^q + ... + x^{q^{n-1}}, as an F_q index."""
        if type(x) is int:
            return int(self.trace_table[x])
        t = self.trace_table[np.asarray(x, dtype=np.int64)]
        return self._out(t, x)

    def in_subfield(self, x) -> bool:
        return bool(np.all(self.pow(np.asarray(x), self.q) == np.asarray(x)))

    def embed(self, a):
        """F_q -> F_{q^n}; the identity on indices."""
        arr = np.asarray(a)
        if np.any((arr < 0) | (arr >= self.q)):
            raise FieldError("value is not an F_q element")
        return a

    def project(self, x):
        """F_{q^n} -> F_q for elements fixed by x -> x^q."""
        if not self.in_subfield(x):
            raise FieldError("element does not lie in the subfield F_q")
        return x

    # -- naming / serialization ---------------------------------------------

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "e": self.e,
            "n": self.n,
            "modulus_q": list(self.modulus_q),
            "modulus_qn": [_index_to_vec(c, self.p, self.e) for c in self.modulus_qn],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def name(self, index: int, symbol: str = "ω") -> str:
        """Human-readable name as a power of the primitive element."""
        index = int(index)
        if index == 0:
            return "0"
        k = int(self._log[index])
        if k == 0:
            return "1"
        if k == 1:
            return symbol
        return f"{symbol}^{k}"

    @property
    def primitive(self) -> int:
        return int(self._exp[1]) if self.order > 2 else 1


@dataclass(frozen=True)
class Element:
    """A single element with operator overloading, for interactive use."""

    field: Field
    index: int
    level: str = "qn"

    def __post_init__(self):
        size = self.field.q if self.level == "q" else self.field.order
        if self.level not in ("q", "qn"):
            raise FieldError(f"unknown level {self.level!r}")
        if not 0 <= self.index < size:
            raise FieldError(f"index {self.index} out of range for level {self.level}")

    @property
    def coeffs(self) -> list[int]:
        """Coefficients over the next field down the tower."""
        f = self.field
        if self.level == "q":
            return _index_to_vec(self.index, f.p, f.e)
        return _index_to_vec(self.index, f.q, f.n)

    def _check(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        if other.field != self.field or other.level != self.level:
            raise FieldError("operands belong to different fields")
        return other

    def _wrap(self, idx):
        return Element(self.field, int(idx), self.level)

    def __add__(self, other):
        other = self._check(other)
        return self._wrap(self.field.add(self.index, other.index))

    def __sub__(self, other):
        other = self._check(other)
        return self._wrap(self.field.sub(self.index, other.index))

    def __mul__(self, other):
        other = self._check(other)
        return self._wrap(self.field.mul(self.index, other.index))

    def __truediv__(self, other):
        other = self._check(other)
        return self._wrap(self.field.div(self.index, other.index))

    def __neg__(self):
        return self._wrap(self.field.neg(self.index))

    def inverse(self):
        return self._wrap(self.field.inv(self.index))

    def __pow__(self, k: int):
        # square-and-multiply, independent of the log tables
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self._wrap(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __int__(self):
        return self.index

    def __repr__(self):
        return f"Element({self.index}, level={self.level!r})"


def make_field(p: int, e: int = 1, n: int = 1, size_cap: int = DEFAULT_SIZE_CAP) -> Field:
    """Build the tower with the smallest monic irreducible moduli."""
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if e < 1 or n < 1:
        raise FieldError("extension degrees must be positive")
    if p ** (e * n) > size_cap:
        raise FieldError(f"field of size {p}^{e * n} exceeds the cap {size_cap}")
    return _make_field_cached(p, e, n)


_CACHE: dict = {}


def _make_field_cached(p, e, n):
    key = (p, e, n)
    if key in _CACHE:
        return _CACHE[key]
    prime = _PrimeOps(p)
    modulus_q = smallest_irreducible(e, prime)
    q = p**e
    exp_q, log_q = _build_exp_log(q, prime, modulus_q)
    sub_ops = _TableOps(p, q, exp_q.tolist(), log_q.tolist())
    modulus_qn = smallest_irreducible(n, sub_ops)
    exp, log = _build_exp_log(q**n, sub_ops, modulus_qn)
    field = Field(p, e, n, modulus_q, modulus_qn, exp, log)
    _CACHE[key] = field
    return field


def field_from_dict(data: dict) -> Field:
    f = make_field(int(data["p"]), int(data.get("e", 1)), int(data.get("n", 1)))
    if "modulus_q" in data and list(data["modulus_q"]) != list(f.modulus_q):
        raise FieldError("modulus_q differs from the canonical choice")
    if "modulus_qn" in data:
        given = [_vec_to_index(v, f.p) for v in data["modulus_qn"]]
        if given != list(f.modulus_qn):
            raise FieldError("modulus_qn differs from the canonical choice")
    return f
