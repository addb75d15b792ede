"""Exact arithmetic for the supported class of commutative rings.

The class is generated by the integers and by univariate polynomials over a
small prime field, and is closed under principal quotients, inversion of a
single element, and finite products.  Rings are immutable descriptor objects;
elements are plain Python data interpreted by the descriptor that owns them:

    integers            int
    GF(p)[t]            tuple of coefficients, constant term first, trimmed
    quotients           canonical representative, encoded as in the base
    localizations       Frac(num, power), meaning num / f**power
    products            tuple with one entry per factor
    zero ring           the int 0

Descriptors canonicalize their defining data (positive integers, monic
polynomials, squarefree inverted elements), so structural equality of
descriptors, and of element encodings within a fixed ring, is semantic
equality.  All values are immutable and all operations are pure.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Iterator, NamedTuple

from .errors import FactorBoundExceeded, MalformedInput, UnsupportedRing

Element = Any


class Frac(NamedTuple):
    """A localized element ``num / f**power`` over the base ring."""

    num: Any
    power: int


@dataclass(frozen=True)
class FactorLimits:
    """Hard bounds for factorization searches; exceeding them is an error."""

    max_abs: int = 10**12
    max_degree: int = 40
    max_candidates: int = 200_000


DEFAULT_LIMITS = FactorLimits()


# ---------------------------------------------------------------------------
# polynomial helpers over GF(p); coefficient tuples, constant term first
# ---------------------------------------------------------------------------


def _ptrim(coeffs) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _pdeg(a: tuple[int, ...]) -> int:
    return len(a) - 1


def _padd(p: int, a, b) -> tuple[int, ...]:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _ptrim(out)


def _pneg(p: int, a) -> tuple[int, ...]:
    return tuple((-c) % p for c in a)


def _pmul(p: int, a, b) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] = (out[i + j] + ca * cb) % p
    return _ptrim(out)


def _pdivmod(p: int, a, b) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    rem = list(a)
    quo = [0] * max(len(a) - len(b) + 1, 0)
    while len(rem) >= len(b):
        if rem[-1] == 0:
            rem.pop()
            continue
        shift = len(rem) - len(b)
        factor = (rem[-1] * inv_lead) % p
        quo[shift] = factor
        for i, cb in enumerate(b):
            rem[shift + i] = (rem[shift + i] - factor * cb) % p
        rem.pop()
    return _ptrim(quo), _ptrim(rem)


def _pmonic(p: int, a) -> tuple[int, ...]:
    if not a:
        return ()
    inv = pow(a[-1], -1, p)
    return tuple((c * inv) % p for c in a)


def _pgcd(p: int, a, b) -> tuple[int, ...]:
    while b:
        a, b = b, _pdivmod(p, a, b)[1]
    return _pmonic(p, a)


def _pgcdext(p: int, a, b):
    """Return (g, u, v) with u*a + v*b = g, g monic (or zero)."""
    r0, r1 = a, b
    u0, u1 = (1 % p,) if p > 1 else (), ()
    v0, v1 = (), (1 % p,)
    u0 = _ptrim(u0)
    v1 = _ptrim(v1)
    while r1:
        q, r = _pdivmod(p, r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, _padd(p, u0, _pneg(p, _pmul(p, q, u1)))
        v0, v1 = v1, _padd(p, v0, _pneg(p, _pmul(p, q, v1)))
    if not r0:
        return (), u0, v0
    inv = pow(r0[-1], -1, p)
    scale = (inv % p,)
    return _pmonic(p, r0), _pmul(p, scale, u0), _pmul(p, scale, v0)


def _pformat(a: tuple[int, ...], var: str = "t") -> str:
    if not a:
        return "0"
    parts = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            head = "" if c == 1 else str(c)
            parts.append(f"{head}{var}" if i == 1 else f"{head}{var}^{i}")
    return "+".join(parts)


def _is_prime_int(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def primes_up_to(bound: int) -> list[int]:
    """All primes <= bound, ascending."""
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(math.isqrt(bound)) + 1):
        if sieve[i]:
            sieve[i * i :: i] = b"\x00" * len(sieve[i * i :: i])
    return [i for i in range(2, bound + 1) if sieve[i]]


def monic_irreducibles(p: int, max_degree: int) -> list[tuple[int, ...]]:
    """Monic irreducible polynomials over GF(p) of degree 1..max_degree.

    Ordered by degree, then lexicographically on the coefficient tuple.
    """
    found: list[tuple[int, ...]] = []
    for deg in range(1, max_degree + 1):
        smaller = [f for f in found if _pdeg(f) <= deg // 2]
        for idx in range(p**deg):
            coeffs = []
            n = idx
            for _ in range(deg):
                coeffs.append(n % p)
                n //= p
            coeffs.append(1)
            cand = tuple(coeffs)
            if all(_pdivmod(p, cand, f)[1] for f in smaller):
                found.append(cand)
    return found


# ---------------------------------------------------------------------------
# ring descriptors
# ---------------------------------------------------------------------------


class Ring(ABC):
    """A commutative ring in the supported class, with exact element ops."""

    kind: str

    # -- structure -----------------------------------------------------

    def components(self) -> tuple["Ring", ...]:
        return (self,)

    @abstractmethod
    def label(self) -> str: ...

    @abstractmethod
    def char(self) -> int: ...

    def is_finite(self) -> bool:
        return False

    def element_count(self) -> int:
        raise UnsupportedRing(f"{self.label()} is not finite")

    def elements(self) -> Iterator[Element]:
        raise UnsupportedRing(f"{self.label()} is not finite")

    def has_generic_point(self) -> bool:
        """Whether Spec has a generic point distinct from its closed points."""
        return False

    # -- elements --------------------------------------------------------

    @abstractmethod
    def zero(self) -> Element: ...

    @abstractmethod
    def one(self) -> Element: ...

    @abstractmethod
    def from_int(self, n: int) -> Element: ...

    @abstractmethod
    def add(self, a: Element, b: Element) -> Element: ...

    @abstractmethod
    def neg(self, a: Element) -> Element: ...

    @abstractmethod
    def mul(self, a: Element, b: Element) -> Element: ...

    def sub(self, a: Element, b: Element) -> Element:
        return self.add(a, self.neg(b))

    def pow_elem(self, a: Element, n: int) -> Element:
        out = self.one()
        for _ in range(n):
            out = self.mul(out, a)
        return out

    def is_zero(self, a: Element) -> bool:
        return a == self.zero()

    @abstractmethod
    def is_unit(self, a: Element) -> bool: ...

    @abstractmethod
    def unit_inverse(self, a: Element) -> Element: ...

    @abstractmethod
    def is_element(self, a: Element) -> bool: ...

    @abstractmethod
    def divides(self, a: Element, b: Element) -> bool:
        """Whether a divides b."""

    @abstractmethod
    def exact_div(self, b: Element, a: Element) -> Element:
        """b / a, assuming a divides b."""

    @abstractmethod
    def format_element(self, a: Element) -> str: ...

    @abstractmethod
    def element_to_json(self, a: Element) -> Any: ...

    @abstractmethod
    def element_from_json(self, data: Any) -> Element: ...

    @abstractmethod
    def to_json(self) -> dict: ...


class EuclideanRing(Ring):
    """A ring with division with remainder: Z, GF(p)[t], or a localization."""

    @abstractmethod
    def norm(self, a: Element) -> int:
        """Euclidean size of a nonzero element (nonnegative integer)."""

    @abstractmethod
    def divmod_elem(self, a: Element, b: Element) -> tuple[Element, Element]:
        """(q, r) with a = q*b + r and r = 0 or norm(r) < norm(b)."""

    @abstractmethod
    def gcd(self, a: Element, b: Element) -> Element:
        """Canonical-associate gcd."""

    @abstractmethod
    def gcdext(self, a: Element, b: Element) -> tuple[Element, Element, Element]:
        """(g, u, v) with u*a + v*b = g, g the canonical gcd."""

    @abstractmethod
    def canonical_unit(self, a: Element) -> Element:
        """The unit u such that u*a is the canonical associate of a != 0."""

    def canonical_associate(self, a: Element) -> Element:
        if self.is_zero(a):
            return self.zero()
        return self.mul(self.canonical_unit(a), a)

    def is_domain(self) -> bool:
        return True


@dataclass(frozen=True)
class IntegerRing(EuclideanRing):
    kind = "Z"

    def label(self):
        return "Z"

    def char(self):
        return 0

    def has_generic_point(self):
        return True

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_unit(self, a):
        return a in (1, -1)

    def unit_inverse(self, a):
        if a not in (1, -1):
            raise ValueError(f"{a} is not a unit of Z")
        return a

    def is_element(self, a):
        return isinstance(a, int) and not isinstance(a, bool)

    def divides(self, a, b):
        if a == 0:
            return b == 0
        return b % a == 0

    def exact_div(self, b, a):
        q, r = divmod(b, a)
        if r:
            raise ValueError(f"{a} does not divide {b}")
        return q

    def norm(self, a):
        return abs(a)

    def divmod_elem(self, a, b):
        # divmod gives r the sign of b, so r - b always shrinks |r| below |b|/2
        q, r = divmod(a, b)
        if 2 * abs(r) > abs(b):
            q, r = q + 1, r - b
        return q, r

    def gcd(self, a, b):
        return math.gcd(a, b)

    def gcdext(self, a, b):
        old_r, r = a, b
        old_u, u = 1, 0
        old_v, v = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_u, u = u, old_u - q * u
            old_v, v = v, old_v - q * v
        if old_r < 0:
            old_r, old_u, old_v = -old_r, -old_u, -old_v
        return old_r, old_u, old_v

    def canonical_unit(self, a):
        return -1 if a < 0 else 1

    def format_element(self, a):
        return str(a)

    def element_to_json(self, a):
        return str(a)

    def element_from_json(self, data):
        try:
            return int(data)
        except (TypeError, ValueError) as exc:
            raise MalformedInput(f"bad integer encoding: {data!r}") from exc

    def to_json(self):
        return {"kind": "Z"}


@dataclass(frozen=True)
class PolynomialRing(EuclideanRing):
    """GF(p)[t] for a small prime p."""

    p: int
    kind = "Fpt"

    def __post_init__(self):
        if not _is_prime_int(self.p) or self.p > 47:
            raise ValueError(f"coefficient characteristic must be a small prime, got {self.p}")

    def label(self):
        return f"F{self.p}[t]"

    def char(self):
        return self.p

    def has_generic_point(self):
        return True

    def zero(self):
        return ()

    def one(self):
        return (1,)

    def from_int(self, n):
        n %= self.p
        return (n,) if n else ()

    def variable(self):
        return (0, 1)

    def add(self, a, b):
        return _padd(self.p, a, b)

    def neg(self, a):
        return _pneg(self.p, a)

    def mul(self, a, b):
        return _pmul(self.p, a, b)

    def is_unit(self, a):
        return len(a) == 1

    def unit_inverse(self, a):
        if len(a) != 1:
            raise ValueError(f"{a} is not a unit of {self.label()}")
        return (pow(a[0], -1, self.p),)

    def is_element(self, a):
        return (
            isinstance(a, tuple)
            and all(isinstance(c, int) and 0 <= c < self.p for c in a)
            and (not a or a[-1] != 0)
        )

    def divides(self, a, b):
        if not a:
            return not b
        return not _pdivmod(self.p, b, a)[1]

    def exact_div(self, b, a):
        q, r = _pdivmod(self.p, b, a)
        if r:
            raise ValueError("inexact polynomial division")
        return q

    def norm(self, a):
        return _pdeg(a)

    def divmod_elem(self, a, b):
        return _pdivmod(self.p, a, b)

    def gcd(self, a, b):
        return _pgcd(self.p, a, b)

    def gcdext(self, a, b):
        return _pgcdext(self.p, a, b)

    def canonical_unit(self, a):
        return (pow(a[-1], -1, self.p),)

    def format_element(self, a):
        return _pformat(a)

    def element_to_json(self, a):
        return list(a)

    def element_from_json(self, data):
        if not isinstance(data, list) or not all(isinstance(c, int) for c in data):
            raise MalformedInput(f"bad polynomial encoding: {data!r}")
        return _ptrim(c % self.p for c in data)

    def to_json(self):
        return {"kind": "Fpt", "p": self.p}


@dataclass(frozen=True)
class QuotientRing(Ring):
    """base/(d) for a Euclidean base and a nonzero nonunit d."""

    base: EuclideanRing
    modulus: Element
    kind = "quotient"

    def __post_init__(self):
        if not isinstance(self.base, (IntegerRing, PolynomialRing)):
            raise UnsupportedRing("quotients are taken over Z or GF(p)[t] only")
        d = self.base.canonical_associate(self.modulus)
        if self.base.is_zero(d) or self.base.is_unit(d):
            raise ValueError("quotient modulus must be a nonzero nonunit")
        object.__setattr__(self, "modulus", d)

    def label(self):
        if isinstance(self.base, IntegerRing):
            return f"Z/{self.modulus}"
        return f"{self.base.label()}/({self.base.format_element(self.modulus)})"

    def char(self):
        if isinstance(self.base, IntegerRing):
            return self.modulus
        return self.base.char()

    def is_finite(self):
        return True

    def element_count(self):
        if isinstance(self.base, IntegerRing):
            return self.modulus
        return self.base.p ** _pdeg(self.modulus)

    def elements(self):
        if isinstance(self.base, IntegerRing):
            yield from range(self.modulus)
            return
        p = self.base.p
        deg = _pdeg(self.modulus)
        for idx in range(p**deg):
            coeffs = []
            n = idx
            for _ in range(deg):
                coeffs.append(n % p)
                n //= p
            yield _ptrim(coeffs)

    def reduce(self, a: Element) -> Element:
        if isinstance(self.base, IntegerRing):
            return a % self.modulus
        return _pdivmod(self.base.p, a, self.modulus)[1]

    def zero(self):
        return self.base.zero()

    def one(self):
        return self.reduce(self.base.one())

    def from_int(self, n):
        return self.reduce(self.base.from_int(n))

    def add(self, a, b):
        return self.reduce(self.base.add(a, b))

    def neg(self, a):
        return self.reduce(self.base.neg(a))

    def mul(self, a, b):
        return self.reduce(self.base.mul(a, b))

    def is_unit(self, a):
        return self.base.is_unit(self.base.gcd(a, self.modulus))

    def unit_inverse(self, a):
        g, u, _ = self.base.gcdext(a, self.modulus)
        if not self.base.is_unit(g):
            raise ValueError(f"{self.format_element(a)} is not a unit of {self.label()}")
        return self.reduce(self.base.mul(self.base.unit_inverse(g), u))

    def is_element(self, a):
        return self.base.is_element(a) and self.reduce(a) == a

    def divides(self, a, b):
        # a | b in base/(d)  iff  gcd(a, d) | b in the base
        g = self.base.gcd(a, self.modulus)
        if self.base.is_zero(g):
            return self.base.is_zero(b)
        return self.base.divides(g, b)

    def exact_div(self, b, a):
        g = self.base.gcd(a, self.modulus)
        if self.base.is_zero(g):
            if self.base.is_zero(b):
                return self.zero()
            raise ValueError("division by zero in quotient ring")
        a1 = self.base.exact_div(a, g)
        b1 = self.base.exact_div(b, g)
        d1 = self.base.exact_div(self.modulus, g)
        if self.base.is_unit(d1):
            # a generates the whole ring modulo d/g; any representative works
            inv = self.base.one()
        else:
            sub = QuotientRing(self.base, d1)
            inv = sub.unit_inverse(sub.reduce(a1))
        return self.reduce(self.base.mul(b1, inv))

    def canonical_divisor(self, a: Element) -> Element:
        """Generator of the ideal (a) + (d), as a canonical base element."""
        return self.base.gcd(a, self.modulus)

    def is_domain(self):
        if isinstance(self.base, IntegerRing):
            return _is_prime_int(self.modulus)
        smaller = monic_irreducibles(self.base.p, _pdeg(self.modulus) // 2)
        return all(_pdivmod(self.base.p, self.modulus, f)[1] for f in smaller)

    def format_element(self, a):
        return self.base.format_element(a)

    def element_to_json(self, a):
        return self.base.element_to_json(a)

    def element_from_json(self, data):
        return self.reduce(self.base.element_from_json(data))

    def to_json(self):
        return {
            "kind": "quotient",
            "base": self.base.to_json(),
            "d": self.base.element_to_json(self.modulus),
        }


_UNIT_POWER_GUARD = 128


@dataclass(frozen=True)
class LocalizedRing(EuclideanRing):
    """base[1/f]; construct via :func:`localize_ring` so f is canonical.

    The inverted element is kept positive/monic and squarefree; elements are
    fractions num/f**k with no factor of f left in the numerator.
    """

    base: EuclideanRing
    inverted: Element
    kind = "localization"

    def __post_init__(self):
        if not isinstance(self.base, (IntegerRing, PolynomialRing)):
            raise UnsupportedRing("localizations are taken over Z or GF(p)[t] only")
        f = self.inverted
        if self.base.is_zero(f) or self.base.is_unit(f):
            raise ValueError("inverted element must be a nonzero nonunit")
        if f != self.base.canonical_associate(f):
            raise ValueError("inverted element must be canonical (positive/monic)")

    def label(self):
        return f"{self.base.label()}[1/{self.base.format_element(self.inverted)}]"

    def char(self):
        return self.base.char()

    def has_generic_point(self):
        return True

    def canon(self, num: Element, power: int) -> Frac:
        if self.base.is_zero(num):
            return Frac(self.base.zero(), 0)
        while power < 0:
            num = self.base.mul(num, self.inverted)
            power += 1
        while power > 0 and self.base.divides(self.inverted, num):
            num = self.base.exact_div(num, self.inverted)
            power -= 1
        return Frac(num, power)

    def core(self, a: Frac) -> Element:
        """The part of the numerator coprime to f, as a canonical base element."""
        n = a.num
        if self.base.is_zero(n):
            return self.base.zero()
        g = self.base.gcd(n, self.inverted)
        while not self.base.is_unit(g):
            n = self.base.exact_div(n, g)
            g = self.base.gcd(n, self.inverted)
        return self.base.canonical_associate(n)

    def zero(self):
        return Frac(self.base.zero(), 0)

    def one(self):
        return Frac(self.base.one(), 0)

    def from_int(self, n):
        return self.canon(self.base.from_int(n), 0)

    def from_base(self, a: Element) -> Frac:
        return self.canon(a, 0)

    def add(self, a, b):
        k = max(a.power, b.power)
        fa = self.base.mul(a.num, self._fpow(k - a.power))
        fb = self.base.mul(b.num, self._fpow(k - b.power))
        return self.canon(self.base.add(fa, fb), k)

    def neg(self, a):
        return Frac(self.base.neg(a.num), a.power)

    def mul(self, a, b):
        return self.canon(self.base.mul(a.num, b.num), a.power + b.power)

    def _fpow(self, k: int) -> Element:
        out = self.base.one()
        for _ in range(k):
            out = self.base.mul(out, self.inverted)
        return out

    def is_unit(self, a):
        return not self.base.is_zero(a.num) and self.base.is_unit(self.core(a))

    def unit_inverse(self, a):
        if self.base.is_zero(a.num):
            raise ValueError("zero is not a unit")
        power = self.base.one()
        for m in range(_UNIT_POWER_GUARD):
            if self.base.divides(a.num, power):
                w = self.base.exact_div(power, a.num)
                return self.canon(w, m - a.power)
            power = self.base.mul(power, self.inverted)
        raise ValueError(f"{self.format_element(a)} is not a unit of {self.label()}")

    def is_element(self, a):
        if not isinstance(a, Frac) or not self.base.is_element(a.num):
            return False
        return self.canon(a.num, a.power) == a

    def divides(self, a, b):
        if self.base.is_zero(a.num):
            return self.base.is_zero(b.num)
        return self.base.divides(self.core(a), self.core(b))

    def exact_div(self, b, a):
        if self.base.is_zero(a.num):
            if self.base.is_zero(b.num):
                return self.zero()
            raise ValueError("division by zero")
        power = self.base.one()
        for m in range(_UNIT_POWER_GUARD):
            scaled = self.base.mul(b.num, power)
            if self.base.divides(a.num, scaled):
                z = self.base.exact_div(scaled, a.num)
                return self.canon(z, b.power + m - a.power)
            power = self.base.mul(power, self.inverted)
        raise ValueError("inexact division in localization")

    def norm(self, a):
        return self.base.norm(self.core(a))

    def divmod_elem(self, a, b):
        if self.base.is_zero(a.num):
            return self.zero(), self.zero()
        ca, cb = self.core(a), self.core(b)
        ua = self.exact_div(a, Frac(ca, 0))
        ub = self.exact_div(b, Frac(cb, 0))
        q0, r0 = self.base.divmod_elem(ca, cb)
        q = self.mul(self.mul(self.canon(q0, 0), ua), self.unit_inverse(ub))
        r = self.mul(self.canon(r0, 0), ua)
        return q, r

    def gcd(self, a, b):
        if self.base.is_zero(a.num):
            return Frac(self.core(b), 0) if not self.base.is_zero(b.num) else self.zero()
        if self.base.is_zero(b.num):
            return Frac(self.core(a), 0)
        return Frac(self.base.gcd(self.core(a), self.core(b)), 0)

    def gcdext(self, a, b):
        ca, cb = self.core(a), self.core(b)
        if self.base.is_zero(ca) and self.base.is_zero(cb):
            return self.zero(), self.zero(), self.zero()
        g0, u0, v0 = self.base.gcdext(ca, cb)
        # a = ua * ca, so u = u0 / ua acts on a; same for b
        u = self.zero() if self.base.is_zero(ca) else self.mul(Frac(u0, 0), self.unit_inverse(self.exact_div(a, Frac(ca, 0)))) if not self.base.is_zero(u0) else self.zero()
        v = self.zero() if self.base.is_zero(cb) else self.mul(Frac(v0, 0), self.unit_inverse(self.exact_div(b, Frac(cb, 0)))) if not self.base.is_zero(v0) else self.zero()
        return Frac(g0, 0), u, v

    def canonical_unit(self, a):
        return self.exact_div(Frac(self.core(a), 0), a)

    def format_element(self, a):
        num = self.base.format_element(a.num)
        if a.power == 0:
            return num
        den = self.base.format_element(self.inverted)
        if isinstance(self.base, PolynomialRing) and _pdeg(self.inverted) > 0 and len([c for c in self.inverted if c]) > 1:
            den = f"({den})"
        if "+" in num or "-" in num[1:]:
            num = f"({num})"
        return f"{num}/{den}" if a.power == 1 else f"{num}/{den}^{a.power}"

    def element_to_json(self, a):
        return {
            "num": self.base.element_to_json(a.num),
            "den": self.base.element_to_json(self._fpow(a.power)),
        }

    def element_from_json(self, data):
        if not isinstance(data, dict) or "num" not in data or "den" not in data:
            raise MalformedInput(f"bad fraction encoding: {data!r}")
        num = self.base.element_from_json(data["num"])
        den = self.base.element_from_json(data["den"])
        power = self.base.one()
        for k in range(_UNIT_POWER_GUARD):
            if den == power:
                return self.canon(num, k)
            power = self.base.mul(power, self.inverted)
        raise MalformedInput(
            f"denominator {data['den']!r} is not a power of the inverted element"
        )

    def to_json(self):
        return {
            "kind": "localization",
            "base": self.base.to_json(),
            "f": self.base.element_to_json(self.inverted),
        }


@dataclass(frozen=True)
class ZeroRing(Ring):
    """The terminal ring with 0 = 1; arises as sections over the empty open."""

    kind = "zero"

    def label(self):
        return "0"

    def char(self):
        return 1

    def is_finite(self):
        return True

    def element_count(self):
        return 1

    def elements(self):
        yield 0

    def is_domain(self):
        return False

    def zero(self):
        return 0

    def one(self):
        return 0

    def from_int(self, n):
        return 0

    def add(self, a, b):
        return 0

    def neg(self, a):
        return 0

    def mul(self, a, b):
        return 0

    def is_unit(self, a):
        return True

    def unit_inverse(self, a):
        return 0

    def is_element(self, a):
        return a == 0

    def divides(self, a, b):
        return True

    def exact_div(self, b, a):
        return 0

    def format_element(self, a):
        return "0"

    def element_to_json(self, a):
        return "0"

    def element_from_json(self, data):
        return 0

    def to_json(self):
        return {"kind": "zero"}


@dataclass(frozen=True)
class ProductRing(Ring):
    """A finite product of non-product rings, componentwise arithmetic."""

    factors: tuple[Ring, ...]
    kind = "product"

    def __post_init__(self):
        if len(self.factors) < 2:
            raise ValueError("a product ring needs at least two factors")
        if any(isinstance(r, ProductRing) for r in self.factors):
            raise ValueError("product rings do not nest")

    def components(self):
        return self.factors

    def label(self):
        return " x ".join(r.label() for r in self.factors)

    def char(self):
        chars = [r.char() for r in self.factors]
        return 0 if any(c == 0 for c in chars) else math.lcm(*chars)

    def is_finite(self):
        return all(r.is_finite() for r in self.factors)

    def element_count(self):
        return math.prod(r.element_count() for r in self.factors)

    def elements(self):
        def rec(i):
            if i == len(self.factors):
                yield ()
                return
            for rest in rec(i + 1):
                for x in self.factors[i].elements():
                    yield (x,) + rest

        yield from rec(0)

    def is_domain(self):
        return False

    def zero(self):
        return tuple(r.zero() for r in self.factors)

    def one(self):
        return tuple(r.one() for r in self.factors)

    def from_int(self, n):
        return tuple(r.from_int(n) for r in self.factors)

    def add(self, a, b):
        return tuple(r.add(x, y) for r, x, y in zip(self.factors, a, b))

    def neg(self, a):
        return tuple(r.neg(x) for r, x in zip(self.factors, a))

    def mul(self, a, b):
        return tuple(r.mul(x, y) for r, x, y in zip(self.factors, a, b))

    def is_unit(self, a):
        return all(r.is_unit(x) for r, x in zip(self.factors, a))

    def unit_inverse(self, a):
        return tuple(r.unit_inverse(x) for r, x in zip(self.factors, a))

    def is_element(self, a):
        return (
            isinstance(a, tuple)
            and len(a) == len(self.factors)
            and all(r.is_element(x) for r, x in zip(self.factors, a))
        )

    def divides(self, a, b):
        return all(r.divides(x, y) for r, x, y in zip(self.factors, a, b))

    def exact_div(self, b, a):
        return tuple(r.exact_div(y, x) for r, x, y in zip(self.factors, a, b))

    def format_element(self, a):
        return "(" + ", ".join(r.format_element(x) for r, x in zip(self.factors, a)) + ")"

    def element_to_json(self, a):
        return [r.element_to_json(x) for r, x in zip(self.factors, a)]

    def element_from_json(self, data):
        if not isinstance(data, list) or len(data) != len(self.factors):
            raise MalformedInput(f"bad product element encoding: {data!r}")
        return tuple(r.element_from_json(x) for r, x in zip(self.factors, data))

    def to_json(self):
        return {"kind": "product", "factors": [r.to_json() for r in self.factors]}


Z = IntegerRing()


def ring_from_json(data: Any) -> Ring:
    """Parse a ring descriptor from its JSON form."""
    if not isinstance(data, dict) or "kind" not in data:
        raise MalformedInput(f"bad ring descriptor: {data!r}")
    kind = data["kind"]
    try:
        if kind == "Z":
            return Z
        if kind == "Fpt":
            return PolynomialRing(int(data["p"]))
        if kind == "quotient":
            base = ring_from_json(data["base"])
            if not isinstance(base, (IntegerRing, PolynomialRing)):
                raise MalformedInput("quotient base must be Z or Fpt")
            return QuotientRing(base, base.element_from_json(data["d"]))
        if kind == "localization":
            base = ring_from_json(data["base"])
            if not isinstance(base, (IntegerRing, PolynomialRing)):
                raise MalformedInput("localization base must be Z or Fpt")
            return localize_ring(base, base.element_from_json(data["f"]))
        if kind == "product":
            return ProductRing(tuple(ring_from_json(f) for f in data["factors"]))
        if kind == "zero":
            return ZeroRing()
    except (KeyError, ValueError, TypeError) as exc:
        raise MalformedInput(f"bad ring descriptor: {data!r}") from exc
    raise MalformedInput(f"unknown ring kind: {kind!r}")


# ---------------------------------------------------------------------------
# factorization
# ---------------------------------------------------------------------------


def factor_element(
    ring: Ring, x: Element, limits: FactorLimits = DEFAULT_LIMITS
) -> tuple[Element, tuple[tuple[Element, int], ...]]:
    """Factor x into (unit, ((prime, multiplicity), ...)).

    Primes are canonical base elements (positive integers, monic
    polynomials); for localizations only the part coprime to the inverted
    element appears and the unit soaks up the rest.  Defined over Z,
    GF(p)[t], and localizations; quotients and products are decomposed by
    the caller.
    """
    if isinstance(ring, IntegerRing):
        if x == 0:
            raise ValueError("cannot factor zero")
        if abs(x) > limits.max_abs:
            raise FactorBoundExceeded(f"|{x}| exceeds the factor bound {limits.max_abs}")
        unit = -1 if x < 0 else 1
        n = abs(x)
        factors: list[tuple[int, int]] = []
        for p in _trial_divisors(n):
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if e:
                factors.append((p, e))
            if n == 1:
                break
        if n > 1:
            factors.append((n, 1))
        return unit, tuple(factors)
    if isinstance(ring, PolynomialRing):
        if not x:
            raise ValueError("cannot factor zero")
        if _pdeg(x) > limits.max_degree:
            raise FactorBoundExceeded(
                f"degree {_pdeg(x)} exceeds the factor bound {limits.max_degree}"
            )
        unit = (x[-1],)
        g = _pmonic(ring.p, x)
        factors = []
        deg = 1
        while _pdeg(g) >= 2 * deg:
            if ring.p**deg > limits.max_candidates:
                raise FactorBoundExceeded("irreducible enumeration exceeds the candidate bound")
            for cand in _monic_of_degree(ring.p, deg):
                e = 0
                q, r = _pdivmod(ring.p, g, cand)
                while not r:
                    g = q
                    e += 1
                    q, r = _pdivmod(ring.p, g, cand)
                if e:
                    factors.append((cand, e))
            deg += 1
        if _pdeg(g) >= 1:
            factors.append((g, 1))
        factors.sort(key=lambda pe: (_pdeg(pe[0]), pe[0]))
        return unit, tuple(factors)
    if isinstance(ring, LocalizedRing):
        if ring.base.is_zero(x.num):
            raise ValueError("cannot factor zero")
        core = ring.core(x)
        base_unit, factors = factor_element(ring.base, core, limits)
        assert ring.base.is_unit(base_unit)
        rebuilt = Frac(core, 0)
        unit = ring.exact_div(x, rebuilt)
        return unit, factors
    raise UnsupportedRing(f"factorization is not defined over {ring.label()}")


def _trial_divisors(n: int) -> Iterator[int]:
    yield 2
    d = 3
    while d * d <= n:
        yield d
        d += 2


def _monic_of_degree(p: int, deg: int) -> Iterator[tuple[int, ...]]:
    for idx in range(p**deg):
        coeffs = []
        n = idx
        for _ in range(deg):
            coeffs.append(n % p)
            n //= p
        coeffs.append(1)
        yield tuple(coeffs)


def radical(base: EuclideanRing, x: Element, limits: FactorLimits = DEFAULT_LIMITS) -> Element:
    """Product of the distinct prime factors of x, canonical."""
    _, factors = factor_element(base, x, limits)
    out = base.one()
    for prime, _ in factors:
        out = base.mul(out, prime)
    return base.canonical_associate(out)


# ---------------------------------------------------------------------------
# points of Spec
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpcPoint:
    """A point of Spec: a prime of the component's base ring, or generic."""

    component: int
    prime: Element | None  # None marks the generic point of an integral component

    @property
    def is_generic(self) -> bool:
        return self.prime is None


@dataclass(frozen=True)
class PointEnumeration:
    points: tuple[SpcPoint, ...]
    complete: bool


def point_sort_key(pt: SpcPoint):
    if pt.prime is None:
        return (pt.component, 0, 0, ())
    if isinstance(pt.prime, int):
        return (pt.component, 1, pt.prime, ())
    return (pt.component, 1, _pdeg(pt.prime), pt.prime)


def format_point(ring: Ring, pt: SpcPoint) -> str:
    comp = ring.components()[pt.component]
    prefix = f"{pt.component}:" if len(ring.components()) > 1 else ""
    if pt.prime is None:
        return f"{prefix}eta"
    if isinstance(comp, (QuotientRing, LocalizedRing)):
        return f"{prefix}({comp.base.format_element(pt.prime)})"
    return f"{prefix}({comp.format_element(pt.prime)})"


def component_base(comp: Ring) -> EuclideanRing:
    """The Euclidean ring whose primes name the points of a component."""
    if isinstance(comp, (IntegerRing, PolynomialRing)):
        return comp
    if isinstance(comp, (QuotientRing, LocalizedRing)):
        return comp.base
    raise UnsupportedRing(f"{comp.label()} has no point-naming base")


def _component_points(comp: Ring, bound: int, limits: FactorLimits) -> tuple[list[SpcPoint], bool]:
    if isinstance(comp, ZeroRing):
        return [], True
    if isinstance(comp, QuotientRing):
        _, factors = factor_element(comp.base, comp.modulus, limits)
        return [SpcPoint(0, p) for p, _ in factors], True
    if isinstance(comp, IntegerRing):
        pts = [SpcPoint(0, None)] + [SpcPoint(0, p) for p in primes_up_to(bound)]
        return pts, False
    if isinstance(comp, PolynomialRing):
        pts = [SpcPoint(0, None)] + [SpcPoint(0, f) for f in monic_irreducibles(comp.p, bound)]
        return pts, False
    if isinstance(comp, LocalizedRing):
        inner, _ = _component_points(comp.base, bound, limits)
        kept = [
            pt
            for pt in inner
            if pt.prime is None or not comp.base.divides(pt.prime, comp.inverted)
        ]
        return kept, False
    raise UnsupportedRing(f"cannot enumerate points of {comp.label()}")


def enumerate_points(
    ring: Ring, bound: int, limits: FactorLimits = DEFAULT_LIMITS
) -> PointEnumeration:
    """Points of Spec, complete for finite spectra, truncated otherwise.

    For Z the bound caps the primes; for GF(p)[t] it caps the degree of the
    monic irreducibles.  Quotient components are always complete and ignore
    the bound.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    points: list[SpcPoint] = []
    complete = True
    for idx, comp in enumerate(ring.components()):
        pts, comp_complete = _component_points(comp, bound, limits)
        points.extend(SpcPoint(idx, pt.prime) for pt in pts)
        complete = complete and comp_complete
    points.sort(key=point_sort_key)
    return PointEnumeration(tuple(points), complete)


def element_in_point(ring: Ring, pt: SpcPoint, x: Element) -> bool:
    """Whether a ring element lies in the prime ideal named by a point."""
    comps = ring.components()
    comp = comps[pt.component]
    xc = x[pt.component] if isinstance(ring, ProductRing) else x
    if pt.prime is None:
        return comp.is_zero(xc)
    base = component_base(comp)
    if isinstance(comp, LocalizedRing):
        return base.divides(pt.prime, comp.core(xc)) if not comp.is_zero(xc) else True
    return base.divides(pt.prime, xc)


# ---------------------------------------------------------------------------
# nilradical and localization
# ---------------------------------------------------------------------------


def nilradical_quotient(ring: Ring, limits: FactorLimits = DEFAULT_LIMITS):
    """(reduced ring, projection) killing exactly the nilpotents.

    The projection maps element encodings; it is the identity on reduced
    inputs and is idempotent.
    """
    if isinstance(ring, (IntegerRing, PolynomialRing, LocalizedRing, ZeroRing)):
        return ring, lambda x: x
    if isinstance(ring, QuotientRing):
        rad = radical(ring.base, ring.modulus, limits)
        if rad == ring.modulus:
            return ring, lambda x: x
        reduced = QuotientRing(ring.base, rad)
        return reduced, reduced.reduce
    if isinstance(ring, ProductRing):
        parts = [nilradical_quotient(r, limits) for r in ring.factors]
        reduced = ProductRing(tuple(r for r, _ in parts))
        projections = [p for _, p in parts]

        def project(x):
            return tuple(proj(xc) for proj, xc in zip(projections, x))

        return reduced, project
    raise UnsupportedRing(f"no nilradical quotient for {ring.label()}")


def localize_ring(ring: Ring, f: Element, limits: FactorLimits = DEFAULT_LIMITS) -> Ring:
    """Invert f.  Quotients collapse in closed form; f = 0 is an error.

    The returned descriptor is canonical: inverted elements are squarefree
    and positive/monic, quotient moduli lose their factors shared with f,
    and inverting a unit returns the ring unchanged.
    """
    if ring.is_zero(f):
        raise ValueError("cannot invert zero")
    if isinstance(ring, ZeroRing):
        return ring
    if isinstance(ring, ProductRing):
        return ProductRing(
            tuple(
                _localize_component(r, fc, limits) for r, fc in zip(ring.factors, f)
            )
        )
    return _localize_nonzero(ring, f, limits)


def _localize_component(ring: Ring, f: Element, limits: FactorLimits) -> Ring:
    if isinstance(ring, ZeroRing):
        return ring
    if ring.is_zero(f):
        return ZeroRing()
    return _localize_nonzero(ring, f, limits)


def _localize_nonzero(ring: Ring, f: Element, limits: FactorLimits) -> Ring:
    if ring.is_unit(f):
        return ring
    if isinstance(ring, (IntegerRing, PolynomialRing)):
        return LocalizedRing(ring, radical(ring, f, limits))
    if isinstance(ring, QuotientRing):
        d = ring.modulus
        g = ring.base.gcd(d, f)
        while not ring.base.is_unit(g):
            d = ring.base.exact_div(d, g)
            g = ring.base.gcd(d, f)
        if ring.base.is_unit(d):
            return ZeroRing()
        return QuotientRing(ring.base, d)
    if isinstance(ring, LocalizedRing):
        # (base[1/f0])[1/(num/f0^k)] = base[1/rad(f0 * num)]
        combined = ring.base.mul(ring.inverted, f.num)
        return LocalizedRing(ring.base, radical(ring.base, combined, limits))
    raise UnsupportedRing(f"cannot localize {ring.label()}")


def is_zero_ring_like(ring: Ring) -> bool:
    """Whether the descriptor denotes the zero ring (possibly componentwise)."""
    if isinstance(ring, ZeroRing):
        return True
    if isinstance(ring, ProductRing):
        return all(isinstance(c, ZeroRing) for c in ring.factors)
    return False


def canonical_ring_elements(ring: Ring, count: int = 8) -> list[Element]:
    """A small deterministic sample of elements, for spot checks."""
    sample = [ring.zero(), ring.one(), ring.from_int(-1)]
    for n in (2, 3, 5, 6, 7):
        sample.append(ring.from_int(n))
    if isinstance(ring, PolynomialRing):
        sample.append(ring.variable())
        sample.append(ring.add(ring.variable(), ring.one()))
    if isinstance(ring, QuotientRing) and isinstance(ring.base, PolynomialRing):
        sample.append(ring.reduce(ring.base.variable()))
    if isinstance(ring, LocalizedRing):
        sample.append(Frac(ring.base.one(), 1))
    if isinstance(ring, ProductRing):
        for idx in range(len(ring.factors)):
            one = list(ring.zero())
            one[idx] = ring.factors[idx].one()
            sample.append(tuple(one))
    out = []
    for x in sample:
        if x not in out:
            out.append(x)
    return out[:count] if count < len(out) else out
