"""Imaginary quadratic discriminants and form class groups.

Reduced-form enumeration, Dirichlet composition with Gauss reduction, class
numbers, the genus invariant mu with h2 = 2^(mu-1), prime forms above a split
prime ell and their class-group orders, and a brute-force two-torsion count
that serves as an independent oracle for the genus-theory value.

Everything here is exact integer arithmetic on tiny inputs (|D| up to ~10^6,
class numbers well under 100), so classical algorithms are used throughout:
reduction after every composition, no NUCOMP, trial division only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .arith import factorize, kronecker


class NotSplit(Exception):
    """ell does not split in the order of the given discriminant."""


class NotEllFundamental(Exception):
    """ell divides the conductor, so there is no prime form above ell."""


@dataclass(frozen=True, order=True)
class Discriminant:
    """A negative discriminant D = conductor^2 * d_k with d_k fundamental."""

    d: int
    d_k: int
    conductor: int

    @classmethod
    def of(cls, d: int) -> "Discriminant":
        if d >= 0 or d % 4 not in (0, 1):
            raise ValueError(f"{d} is not a negative discriminant")
        square_free = 1
        root = 1
        for q, e in factorize(-d):
            if e % 2:
                square_free *= q
            root *= q ** (e // 2)
        # fundamental part: s itself if s = 1 mod 4, else 4s
        s = -square_free
        if s % 4 == 1:
            d_k = s
            f = root
        else:
            d_k = 4 * s
            assert root % 2 == 0
            f = root // 2
        assert f * f * d_k == d
        return cls(d, d_k, f)

    def __int__(self):
        return self.d


def _disc_value(D) -> int:
    return D.d if isinstance(D, Discriminant) else int(D)


@dataclass(frozen=True, order=True)
class BinaryQuadraticForm:
    """Primitive positive-definite integral form a x^2 + b xy + c y^2."""

    a: int
    b: int
    c: int

    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_primitive(self) -> bool:
        return math.gcd(math.gcd(self.a, self.b), self.c) == 1

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        return b >= 0 if (abs(b) == a or a == c) else True

    def inverse(self) -> "BinaryQuadraticForm":
        return reduce_form(BinaryQuadraticForm(self.a, -self.b, self.c))

    def reduced(self) -> "BinaryQuadraticForm":
        return reduce_form(self)


def reduce_form(f: BinaryQuadraticForm) -> BinaryQuadraticForm:
    a, b, c = f.a, f.b, f.c
    if a <= 0 or f.discriminant() >= 0:
        raise ValueError("form must be positive definite")
    while True:
        if b <= -a or b > a:
            # normalize b into (-a, a]
            r = (a - b) // (2 * a)
            b, c = b + 2 * r * a, a * r * r + b * r + c
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        break
    return BinaryQuadraticForm(a, b, c)


def principal_form(D) -> BinaryQuadraticForm:
    d = _disc_value(D)
    k = d & 1
    return BinaryQuadraticForm(1, k, (k * k - d) // 4)


@lru_cache(maxsize=None)
def _reduced_forms_cached(d: int) -> tuple[BinaryQuadraticForm, ...]:
    Discriminant.of(d)  # validate
    out = []
    amax = math.isqrt(-d // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            if math.gcd(math.gcd(a, b), c) == 1:
                out.append(BinaryQuadraticForm(a, b, c))
    return tuple(sorted(out))


def reduced_forms(D) -> list[BinaryQuadraticForm]:
    """All reduced primitive positive-definite forms of discriminant D."""
    return list(_reduced_forms_cached(_disc_value(D)))


def class_number(D) -> int:
    return len(_reduced_forms_cached(_disc_value(D)))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _solve_linear(a: int, b: int, m: int) -> tuple[int, int]:
    """Some x with a x = b (mod m), plus the solution period m/gcd."""
    g, inv, _ = _xgcd(a, m)
    if b % g:
        raise ArithmeticError("no solution to linear congruence")
    period = m // g
    return (inv * (b // g)) % period, period


def compose(f: BinaryQuadraticForm, g: BinaryQuadraticForm, D) -> BinaryQuadraticForm:
    """Reduced Dirichlet composition of two primitive forms of discriminant D."""
    d = _disc_value(D)
    if f.discriminant() != d or g.discriminant() != d:
        raise ValueError("forms must share the given discriminant")
    a1, b1, c1 = f.a, f.b, f.c
    a2, b2, c2 = g.a, g.b, g.c
    # solve for the composed form via the standard congruence system
    gm = (b1 + b2) // 2
    h = (b2 - b1) // 2
    w = math.gcd(math.gcd(a1, a2), gm)
    s = a1 // w
    t = a2 // w
    u = gm // w
    k0, period = _solve_linear(t * u, h * u + s * c1, s * t)
    n, _ = _solve_linear(t * period, h - t * k0, s)
    k = k0 + period * n
    l = (t * k - h) // s
    m = (t * u * k - h * u - s * c1) // (s * t)
    a3 = s * t
    b3 = w * u - (k * t + l * s)
    c3 = k * l - w * m
    return reduce_form(BinaryQuadraticForm(a3, b3, c3))


def form_pow(f: BinaryQuadraticForm, e: int, D) -> BinaryQuadraticForm:
    result = principal_form(D)
    acc = f.reduced()
    while e:
        if e & 1:
            result = compose(result, acc, D)
        e >>= 1
        if e:
            acc = compose(acc, acc, D)
    return result


def form_order(f: BinaryQuadraticForm, D) -> int:
    """Least k >= 1 with f^k principal."""
    ident = principal_form(D)
    acc = f.reduced()
    k = 1
    cap = 4 * abs(_disc_value(D)) + 16  # far above any class number at this scale
    while acc != ident:
        acc = compose(acc, f, D)
        k += 1
        if k > cap:
            raise ArithmeticError("runaway order computation (composition bug?)")
    return k


def genus_mu(D) -> int:
    """The genus invariant: cl(O_D) has exactly 2^(mu-1) elements of order <= 2."""
    d = _disc_value(D)
    Discriminant.of(d)
    r = sum(1 for q, _ in factorize(-d) if q % 2)
    if d % 4 == 1:
        return r
    n = -d // 4
    if n % 4 == 3:
        return r
    if n % 4 in (1, 2):
        return r + 1
    if n % 8 == 4:
        return r + 1
    return r + 2  # n = 0 mod 8


def h2(D) -> int:
    """Size of the two-torsion subgroup cl(O_D)[2], from genus theory."""
    return 1 << (genus_mu(D) - 1)


def two_torsion_bruteforce(D) -> int:
    """Independent oracle for h2: count classes squaring to the principal one."""
    ident = principal_form(D)
    return sum(1 for f in reduced_forms(D) if compose(f, f, D) == ident)


def prime_form(D, ell: int) -> BinaryQuadraticForm:
    """The reduced class of a form (ell, b, c) above a split prime ell."""
    d = _disc_value(D)
    disc = Discriminant.of(d) if not isinstance(D, Discriminant) else D
    if disc.conductor % ell == 0:
        raise NotEllFundamental(f"{ell} divides the conductor of {d}")
    if kronecker(d, ell) != 1:
        raise NotSplit(f"{ell} does not split in discriminant {d}")
    for b in range(2 * ell):
        if (b - d) % 2 == 0 and (b * b - d) % (4 * ell) == 0:
            return reduce_form(BinaryQuadraticForm(ell, b, (b * b - d) // (4 * ell)))
    raise AssertionError("split prime admits a square root of D mod 4*ell")


@dataclass(frozen=True)
class DiscriminantProfile:
    """Class-group data attached to one discriminant (and one split prime)."""

    disc: Discriminant
    h: int
    mu: int
    h2: int
    ell_order: int | None

    def __post_init__(self):
        assert self.h2 == 1 << (self.mu - 1)
        assert self.h % self.h2 == 0
        if self.ell_order is not None:
            assert self.h % self.ell_order == 0


@lru_cache(maxsize=None)
def discriminant_profile(d: int, ell: int | None = None) -> DiscriminantProfile:
    disc = Discriminant.of(d)
    order = None
    if ell is not None:
        try:
            order = form_order(prime_form(disc, ell), disc)
        except (NotSplit, NotEllFundamental):
            order = None
    return DiscriminantProfile(disc, class_number(d), genus_mu(d), h2(d), order)
