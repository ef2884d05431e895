"""Exact arithmetic in the tower F_p ⊂ F_q ⊂ F_{q^n}.

Elements of F_{q^n} are plain ints.  The element

    c_0 + c_1·λ + ... + c_{n-1}·λ^{n-1},   c_i ∈ F_q,

is encoded as ``sum(c_i * q**i)``, and each F_q coordinate ``c_i`` is itself
``sum(d_h * p**h)`` over its F_p coordinates.  The whole element is therefore a
single base-p digit string: addition is digit-wise mod p (XOR when p = 2) and
the F_q coordinates are the base-q digits.  The same packing is used for
vectors of F_q^N (``N = n`` for the line, ``N = 2n`` for the plane, with the
first coordinate in the low digits).

:class:`FieldCtx` is immutable after construction.  Internally every algorithm
works on ints through the context's methods; :class:`Element` is the
value-semantic wrapper exposed to users.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

from linsets.errors import (
    BadParams,
    CtxMismatch,
    DivisionByZero,
    NotPrime,
    ReduciblePolynomial,
    TooLarge,
)

# log/exp tables are kept only up to this field order
TABLE_LIMIT = 2**16
MAX_BASE_ORDER = 256


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def prime_factors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def _digit_add(a: int, b: int, p: int) -> int:
    r, m = 0, 1
    while a or b:
        a, x = divmod(a, p)
        b, y = divmod(b, p)
        r += ((x + y) % p) * m
        m *= p
    return r


def _digit_scale(c: int, a: int, p: int) -> int:
    r, m = 0, 1
    while a:
        a, x = divmod(a, p)
        r += (x * c % p) * m
        m *= p
    return r


class BaseField:
    """F_q = F_p[y]/(g(y)) with elements encoded as ints 0..q-1 in base p.

    All operations go through precomputed tables (q ≤ 256).
    """

    def __init__(self, p: int, poly):
        self.p = p
        self.poly = tuple(poly)
        self.e = len(self.poly) - 1
        self.q = p**self.e
        if self.q > MAX_BASE_ORDER:
            raise TooLarge(f"base field order {self.q} exceeds {MAX_BASE_ORDER}")
        q = self.q
        self.add_t = [[_digit_add(a, b, p) for b in range(q)] for a in range(q)]
        self.neg_t = [_digit_scale(p - 1, a, p) for a in range(q)]
        self.mul_t = [[self._mul_slow(a, b) for b in range(q)] for a in range(q)]
        self.inv_t = [0] * q
        for a in range(1, q):
            row = self.mul_t[a]
            self.inv_t[a] = row.index(1)

    def _mul_slow(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        x = [(a // p**i) % p for i in range(e)]
        y = [(b // p**i) % p for i in range(e)]
        prod = [0] * (2 * e)
        for i, u in enumerate(x):
            if u:
                for j, v in enumerate(y):
                    prod[i + j] = (prod[i + j] + u * v) % p
        for d in range(2 * e - 1, e - 1, -1):
            c = prod[d]
            if c:
                for j in range(e + 1):
                    prod[d - e + j] = (prod[d - e + j] - c * self.poly[j]) % p
        return sum(prod[i] * p**i for i in range(e))

    def add(self, a: int, b: int) -> int:
        return self.add_t[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_t[a][self.neg_t[b]]

    def neg(self, a: int) -> int:
        return self.neg_t[a]

    def mul(self, a: int, b: int) -> int:
        return self.mul_t[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero in F_q")
        return self.inv_t[a]

    def from_int(self, k: int) -> int:
        """Image of the integer k in the prime subfield."""
        return k % self.p


# -- polynomials over a BaseField: coefficient lists, constant term first ----


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, f, F: BaseField):
    a = list(a)
    df = len(f) - 1
    lead_inv = F.inv(f[-1])
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i]
        if c:
            c = F.mul(c, lead_inv)
            for j in range(df + 1):
                a[i - df + j] = F.sub(a[i - df + j], F.mul(c, f[j]))
    return _trim(a[:df])


def _poly_mul(a, b, F: BaseField):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                if v:
                    out[i + j] = F.add(out[i + j], F.mul(u, v))
    return _trim(out)


def _poly_sub(a, b, F: BaseField):
    m = max(len(a), len(b))
    a = list(a) + [0] * (m - len(a))
    b = list(b) + [0] * (m - len(b))
    return _trim(F.sub(x, y) for x, y in zip(a, b))


def _poly_gcd(a, b, F: BaseField):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _poly_mod(a, b, F)
    return a


def _poly_powmod(a, k: int, f, F: BaseField):
    result = [1]
    base = _poly_mod(a, f, F)
    while k:
        if k & 1:
            result = _poly_mod(_poly_mul(result, base, F), f, F)
        base = _poly_mod(_poly_mul(base, base, F), f, F)
        k >>= 1
    return result


def is_irreducible(f, F: BaseField) -> bool:
    """Rabin's test for a monic polynomial over F (constant term first)."""
    f = _trim(f)
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    if f[0] == 0:
        return False
    x = [0, 1]
    # h_i = x^(q^i) mod f
    powers = [_poly_mod(x, f, F)]
    for _ in range(d):
        powers.append(_poly_powmod(powers[-1], F.q, f, F))
    if _poly_sub(powers[d], x, F) != []:
        return False
    for r in prime_factors(d):
        g = _poly_gcd(f, _poly_sub(powers[d // r], x, F), F)
        if len(g) > 1:
            return False
    return True


def smallest_irreducible(d: int, F: BaseField) -> list[int]:
    """Lexicographically smallest monic irreducible of degree d over F.

    Coefficient tuples are compared constant term first.
    """
    for coeffs in itertools.product(range(F.q), repeat=d):
        f = list(coeffs) + [1]
        if is_irreducible(f, F):
            return f
    raise ReduciblePolynomial(f"no irreducible of degree {d}")  # unreachable


# -- the extension ------------------------------------------------------------


class FieldCtx:
    """Descriptor of F_p ⊂ F_q ⊂ F_{q^n} with fixed defining polynomials."""

    def __init__(self, p: int, e: int, n: int, fq_poly, fqn_poly):
        self.p, self.e, self.n = p, e, n
        self.fq_poly = tuple(fq_poly)
        self.fqn_poly = tuple(fqn_poly)
        self.base = BaseField(p, self.fq_poly)
        self.q = self.base.q
        self.order = self.q**n
        self._key = (p, e, n, self.fq_poly, self.fqn_poly)
        self._exp = self._log = None
        if self.order <= TABLE_LIMIT:
            self._build_tables()

    # identity / pickling
    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __reduce__(self):
        return (make_field, (self.p, self.e, self.n, self.fq_poly, self.fqn_poly))

    def __repr__(self):
        return f"FieldCtx({self.spec_string()})"

    def spec_string(self) -> str:
        fq = ",".join(map(str, self.fq_poly))
        fqn = ",".join(map(str, self.fqn_poly))
        return f"p={self.p},e={self.e},n={self.n},fq={fq},fqn={fqn}"

    def describe(self) -> dict:
        return {
            "spec": self.spec_string(),
            "p": self.p,
            "e": self.e,
            "n": self.n,
            "q": self.q,
            "fq_poly": list(self.fq_poly),
            "fqn_poly": list(self.fqn_poly),
        }

    # coordinates
    def coords(self, a: int) -> list[int]:
        q = self.q
        out = []
        for _ in range(self.n):
            a, c = divmod(a, q)
            out.append(c)
        return out

    def from_coords(self, cs) -> int:
        cs = list(cs)
        if len(cs) != self.n or any(not 0 <= c < self.q for c in cs):
            raise BadParams(f"expected {self.n} coordinates in 0..{self.q - 1}")
        return sum(c * self.q**i for i, c in enumerate(cs))

    @property
    def one(self) -> int:
        return 1

    @functools.cached_property
    def gen(self) -> int:
        """λ, the class of the indeterminate of fqn_poly."""
        if self.n == 1:
            return self.base.neg(self.fqn_poly[0])
        return self.q

    def in_base(self, a: int) -> bool:
        return a < self.q

    # additive structure (also valid on packed vectors of any length)
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return _digit_add(a, b, self.p)

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return _digit_scale(self.p - 1, a, self.p)

    def sub(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return _digit_add(a, _digit_scale(self.p - 1, b, self.p), self.p)

    def vscale(self, c: int, v: int) -> int:
        """Multiply every F_q coordinate of a packed vector by c ∈ F_q."""
        if c == 1:
            return v
        if c == 0:
            return 0
        if self.e == 1:
            return _digit_scale(c, v, self.p)
        q, row = self.q, self.base.mul_t[c]
        r, m = 0, 1
        while v:
            v, x = divmod(v, q)
            r += row[x] * m
            m *= q
        return r

    # multiplicative structure
    def _build_tables(self):
        Q = self.order
        g = self.primitive
        exp = [0] * (2 * (Q - 1))
        log = [None] * Q
        x = 1
        for i in range(Q - 1):
            exp[i] = x
            log[x] = i
            x = self._mul_slow(x, g)
        for i in range(Q - 1, 2 * (Q - 1)):
            exp[i] = exp[i - (Q - 1)]
        self._exp, self._log = exp, log

    def _mul_slow(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        n = self.n
        if self.q == 2:
            # carry-less product reduced by the bit-polynomial of fqn_poly
            r = 0
            while b:
                if b & 1:
                    r ^= a
                a <<= 1
                b >>= 1
            mod = sum(c << i for i, c in enumerate(self.fqn_poly))
            for d in range(r.bit_length() - 1, n - 1, -1):
                if (r >> d) & 1:
                    r ^= mod << (d - n)
            return r
        F = self.base
        x, y = self.coords(a), self.coords(b)
        prod = [0] * (2 * n - 1)
        for i, u in enumerate(x):
            if u:
                mu = F.mul_t[u]
                for j, v in enumerate(y):
                    if v:
                        prod[i + j] = F.add_t[prod[i + j]][mu[v]]
        f = self.fqn_poly
        for d in range(2 * n - 2, n - 1, -1):
            c = prod[d]
            if c:
                mc = F.mul_t[c]
                for j in range(n):
                    prod[d - n + j] = F.sub(prod[d - n + j], mc[f[j]])
        return self.from_coords(prod[:n])

    def _pow_slow(self, a: int, k: int) -> int:
        result = 1
        while k:
            if k & 1:
                result = self._mul_slow(result, a)
            a = self._mul_slow(a, a)
            k >>= 1
        return result

    @functools.cached_property
    def primitive(self) -> int:
        """Smallest (as an int) generator of the multiplicative group."""
        Q = self.order
        if Q == 2:
            return 1
        facs = prime_factors(Q - 1)
        for g in range(2, Q):
            if all(self._pow_slow(g, (Q - 1) // r) != 1 for r in facs):
                return g
        raise AssertionError("no primitive element")  # pragma: no cover

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_slow(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self._exp is not None:
            return self._exp[(self.order - 1) - self._log[a]]
        return self._pow_slow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise DivisionByZero("division by zero")
        if a == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] - self._log[b] + self.order - 1]
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        if a == 0:
            return 1 if k == 0 else 0
        if self._exp is not None:
            return self._exp[(self._log[a] * k) % (self.order - 1)]
        return self._pow_slow(a, k % (self.order - 1))

    def log(self, a: int) -> int:
        """Discrete log to base ``primitive``."""
        if a == 0:
            raise DivisionByZero("log of zero")
        if self._log is not None:
            return self._log[a]
        x, g = 1, self.primitive
        for i in range(self.order - 1):
            if x == a:
                return i
            x = self._mul_slow(x, g)
        raise AssertionError("element not in the group")  # pragma: no cover

    def frobenius(self, a: int, i: int = 1) -> int:
        """a^(p^i); i is taken mod n·e."""
        i %= self.n * self.e
        return self.pow(a, self.p**i) if a else 0

    def conjugates(self, a: int) -> list[int]:
        """The distinct F_q-conjugates a, a^q, a^(q^2), ..."""
        out = [a]
        x = self.pow(a, self.q)
        while x != a:
            out.append(x)
            x = self.pow(x, self.q)
        return out

    def trace(self, a: int) -> int:
        t = 0
        x = a
        for _ in range(self.n):
            t = self.add(t, x)
            x = self.pow(x, self.q)
        return t

    def degree(self, a: int) -> int:
        return len(self.conjugates(a))

    def min_poly(self, a: int) -> list[int]:
        poly = [1]
        for r in self.conjugates(a):
            # poly *= (x - r)
            nr = self.neg(r)
            shifted = [0] + poly
            scaled = [self.mul(nr, c) for c in poly] + [0]
            poly = [self.add(u, v) for u, v in zip(shifted, scaled)]
        if any(c >= self.q for c in poly):
            raise AssertionError("minimal polynomial left F_q")  # pragma: no cover
        return poly

    def poly_eval(self, poly, a: int) -> int:
        acc = 0
        for c in reversed(list(poly)):
            acc = self.add(self.mul(acc, a), c)
        return acc

    # intermediate fields
    def in_subfield(self, a: int, t: int) -> bool:
        return self.pow(a, self.q**t) == a if a else True

    @functools.lru_cache(maxsize=None)
    def subfield_generator(self, t: int) -> int:
        """Canonical generator of F_{q^t}: the smallest-index power of
        ``primitive`` whose degree over F_q is exactly t."""
        if self.n % t:
            raise BadParams(f"{t} does not divide n={self.n}")
        if t == 1:
            return 1
        Q, g = self.order, self.primitive
        step = (Q - 1) // (self.q**t - 1)
        i = step
        while i < Q - 1:
            x = self.pow(g, i)
            if self.degree(x) == t:
                return x
            i += step
        raise AssertionError("no generator")  # pragma: no cover

    def subfield_basis(self, t: int) -> list[int]:
        w = self.subfield_generator(t)
        return [self.pow(w, i) for i in range(t)]

    def divisors_of_n(self) -> list[int]:
        return [d for d in range(1, self.n + 1) if self.n % d == 0]

    def element(self, value) -> Element:
        if isinstance(value, Element):
            value = value.value
        if not 0 <= value < self.order:
            raise BadParams(f"{value} is not an element of F_{self.order}")
        return Element(self, value)


@functools.lru_cache(maxsize=64)
def _make_field_cached(p, e, n, fq_poly, fqn_poly) -> FieldCtx:
    if not isinstance(p, int) or not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1 or n < 1:
        raise BadParams("e and n must be positive")
    Fp = BaseField(p, (0, 1))
    if fq_poly is None:
        fq_poly = tuple(smallest_irreducible(e, Fp))
    else:
        if len(fq_poly) != e + 1 or fq_poly[-1] != 1 or any(not 0 <= c < p for c in fq_poly):
            raise BadParams(f"fq_poly must be monic of degree {e} over F_{p}")
        if not is_irreducible(fq_poly, Fp):
            raise ReduciblePolynomial(f"{list(fq_poly)} is reducible over F_{p}")
    Fq = BaseField(p, fq_poly)
    if fqn_poly is None:
        fqn_poly = tuple(smallest_irreducible(n, Fq))
    else:
        if len(fqn_poly) != n + 1 or fqn_poly[-1] != 1 or any(not 0 <= c < Fq.q for c in fqn_poly):
            raise BadParams(f"fqn_poly must be monic of degree {n} over F_{Fq.q}")
        if not is_irreducible(fqn_poly, Fq):
            raise ReduciblePolynomial(f"{list(fqn_poly)} is reducible over F_{Fq.q}")
    return FieldCtx(p, e, n, fq_poly, fqn_poly)


def make_field(p: int, e: int = 1, n: int = 1, fq_poly=None, fqn_poly=None) -> FieldCtx:
    """Build (or fetch the cached) tower context.

    Omitted polynomials default to the lexicographically smallest monic
    irreducible of the required degree, constant term compared first.
    """
    fq = tuple(fq_poly) if fq_poly is not None else None
    fqn = tuple(fqn_poly) if fqn_poly is not None else None
    if fq is None and e == 1:
        fq = (0, 1)
    return _make_field_cached(p, e, n, fq, fqn)


@dataclass(frozen=True)
class Element:
    """A value of F_{q^n} bound to its context."""

    ctx: FieldCtx
    value: int

    def _other(self, other) -> int:
        if not isinstance(other, Element):
            return NotImplemented
        if other.ctx != self.ctx:
            raise CtxMismatch("elements belong to different fields")
        return other.value

    def __add__(self, other):
        v = self._other(other)
        return v if v is NotImplemented else Element(self.ctx, self.ctx.add(self.value, v))

    def __sub__(self, other):
        v = self._other(other)
        return v if v is NotImplemented else Element(self.ctx, self.ctx.sub(self.value, v))

    def __mul__(self, other):
        v = self._other(other)
        return v if v is NotImplemented else Element(self.ctx, self.ctx.mul(self.value, v))

    def __truediv__(self, other):
        v = self._other(other)
        return v if v is NotImplemented else Element(self.ctx, self.ctx.div(self.value, v))

    def __neg__(self):
        return Element(self.ctx, self.ctx.neg(self.value))

    def __pow__(self, k: int):
        return Element(self.ctx, self.ctx.pow(self.value, k))

    def __bool__(self):
        return self.value != 0

    @property
    def coords(self) -> list[int]:
        return self.ctx.coords(self.value)

    def __str__(self):
        return "[" + ",".join(map(str, self.coords)) + "]"

    def __repr__(self):
        return f"Element({self})"


_OPS = {
    "add": Element.__add__,
    "sub": Element.__sub__,
    "mul": Element.__mul__,
    "div": Element.__truediv__,
}


def arith(a: Element, b: Element, op: str) -> Element:
    if op not in _OPS:
        raise BadParams(f"unknown operation {op!r}")
    if not isinstance(a, Element) or not isinstance(b, Element):
        raise TypeError("arith expects Element operands")
    return _OPS[op](a, b)


def trace_rel(a: Element) -> Element:
    return Element(a.ctx, a.ctx.trace(a.value))


def frobenius(a: Element, i: int) -> Element:
    return Element(a.ctx, a.ctx.frobenius(a.value, i))


def min_poly_over_fq(a: Element) -> list[int]:
    return a.ctx.min_poly(a.value)


def element_degree(a: Element) -> int:
    return a.ctx.degree(a.value)


# -- text formats ----------------------------------------------------------------


def parse_field_spec(text: str) -> FieldCtx:
    """``p=<int>,e=<int>,n=<int>[,fq=<c0,c1,...>][,fqn=<c0,c1,...>]``.

    Bare numbers after ``fq=``/``fqn=`` continue that coefficient list.
    """
    values: dict[str, list[str]] = {}
    key = None
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        if "=" in tok:
            key, _, val = tok.partition("=")
            if key not in ("p", "e", "n", "fq", "fqn"):
                raise BadParams(f"unknown field spec key {key!r}")
            if key in values:
                raise BadParams(f"repeated field spec key {key!r}")
            values[key] = [val]
        elif key in ("fq", "fqn"):
            values[key].append(tok)
        else:
            raise BadParams(f"cannot parse field spec token {tok!r}")
    if "p" not in values or "n" not in values:
        raise BadParams("field spec needs p= and n=")
    try:
        scalars = {k: int(values[k][0]) for k in ("p", "e", "n") if k in values}
        for k in ("p", "e", "n"):
            if k in values and len(values[k]) != 1:
                raise BadParams(f"{k} takes a single integer")
        fq = [int(c) for c in values["fq"]] if "fq" in values else None
        fqn = [int(c) for c in values["fqn"]] if "fqn" in values else None
    except ValueError as exc:
        raise BadParams(f"non-integer in field spec {text!r}") from exc
    return make_field(scalars["p"], scalars.get("e", 1), scalars["n"], fq, fqn)


def parse_element(ctx: FieldCtx, text: str) -> Element:
    """``[c_0,...,c_{n-1}]``; also ``lambda``, ``lambda^k`` and ``sub:t``
    (the canonical generator of F_{q^t})."""
    s = text.strip()
    low = s.lower().replace("λ", "lambda")
    if low.startswith("lambda"):
        rest = low[len("lambda"):]
        k = 1
        if rest:
            if not rest.startswith("^"):
                raise BadParams(f"cannot parse element {text!r}")
            try:
                k = int(rest[1:])
            except ValueError as exc:
                raise BadParams(f"cannot parse element {text!r}") from exc
        return Element(ctx, ctx.pow(ctx.gen, k))
    if low.startswith("sub:"):
        try:
            t = int(low[4:])
        except ValueError as exc:
            raise BadParams(f"cannot parse element {text!r}") from exc
        if t < 1 or ctx.n % t:
            raise BadParams(f"{t} does not divide n = {ctx.n}")
        return Element(ctx, ctx.subfield_generator(t))
    s = s.strip("[]() ")
    try:
        cs = [int(c) for c in s.split(",")] if s else []
    except ValueError as exc:
        raise BadParams(f"cannot parse element {text!r}") from exc
    if len(cs) != ctx.n:
        raise BadParams(f"element needs {ctx.n} coordinates, got {len(cs)}")
    if any(not 0 <= c < ctx.q for c in cs):
        raise BadParams(f"coordinates must lie in 0..{ctx.q - 1}")
    return Element(ctx, ctx.from_coords(cs))
