"""The twisted polynomial ring K{tau} with tau*c = c^q*tau.

Right division is the only Euclidean structure implemented; duals,
annihilators and kernel intersections all reduce to it.  Coefficients of
one skew polynomial always live in one declared field; mixed-field
operations raise rather than coerce.
"""
from __future__ import annotations

from .errors import BothZero, DivisionByZero, FieldMismatch

__all__ = [
    "SkewPoly",
    "skew_mul",
    "right_divmod",
    "right_gcd",
    "right_gcd_bezout",
    "lclm",
    "skew_eval",
    "differential",
    "conjugate",
]


class SkewPoly:
    """Element of K{tau}: little-endian coefficients, no trailing zero."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        n = len(coeffs)
        while n and coeffs[n - 1].is_zero():
            n -= 1
        self.field = field
        self.coeffs = tuple(coeffs[:n])

    @classmethod
    def from_scalar(cls, c):
        return cls(c.field, (c,))

    @classmethod
    def tau(cls, field, k=1):
        return cls(field, (field.zero,) * k + (field.one,))

    @property
    def deg(self):
        # tau-degree; -1 for the zero element
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_scalar(self):
        return len(self.coeffs) <= 1

    def is_one(self):
        return len(self.coeffs) == 1 and self.coeffs[0].is_one()

    def lead(self):
        if self.is_zero():
            raise DivisionByZero("leading coefficient of zero")
        return self.coeffs[-1]

    def constant(self):
        if self.is_zero():
            return self.field.zero
        return self.coeffs[0]

    def coeff(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, SkewPoly)
            and other.field is self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((id(self.field),) + self.coeffs)

    def __add__(self, other):
        self._same(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return SkewPoly(
            self.field, [self.coeff(i) + other.coeff(i) for i in range(n)]
        )

    def __sub__(self, other):
        self._same(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return SkewPoly(
            self.field, [self.coeff(i) - other.coeff(i) for i in range(n)]
        )

    def __neg__(self):
        return SkewPoly(self.field, [-c for c in self.coeffs])

    def __mul__(self, other):
        self._same(other)
        return skew_mul(self, other)

    def scale_left(self, c):
        """c * self for a scalar c in K."""
        if c.is_zero():
            return SkewPoly(self.field, ())
        return SkewPoly(self.field, [c * a for a in self.coeffs])

    def monic(self):
        if self.is_zero() or self.lead().is_one():
            return self
        inv = self.lead().inverse()
        return self.scale_left(inv)

    def tau_shift(self, k):
        """tau^k * self is not this; this is self * tau^k (right shift)."""
        if self.is_zero() or k == 0:
            return self
        return SkewPoly(self.field, (self.field.zero,) * k + self.coeffs)

    def tau_valuation(self):
        if self.is_zero():
            return -1
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                return i
        return -1

    def __pow__(self, e):
        out = SkewPoly.from_scalar(self.field.one)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def _same(self, other):
        if other.field is not self.field:
            raise FieldMismatch("skew polynomials over different fields")

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            cs = repr(c)
            if i == 0:
                parts.append(cs)
            else:
                t = "t" if i == 1 else f"t^{i}"
                parts.append(t if c.is_one() else f"({cs})*{t}")
        return " + ".join(parts)


def skew_mul(a, b):
    """(c tau^i)(d tau^j) = c d^(q^i) tau^(i+j), extended bilinearly."""
    if a.is_zero() or b.is_zero():
        return SkewPoly(a.field, ())
    field = a.field
    out = [field.zero] * (a.deg + b.deg + 1)
    # Frobenius powers of b's coefficients, step by step up to deg a
    frobs = [list(b.coeffs)]
    for _ in range(a.deg):
        frobs.append([c.frob() for c in frobs[-1]])
    for i, ca in enumerate(a.coeffs):
        if ca.is_zero():
            continue
        row = frobs[i]
        for j, cb in enumerate(row):
            if cb.is_zero():
                continue
            out[i + j] = out[i + j] + ca * cb
    return SkewPoly(field, out)


def right_divmod(a, b):
    """a = quot*b + rem with deg_tau rem < deg_tau b; unique."""
    if b.is_zero():
        raise DivisionByZero("right division by the zero skew polynomial")
    if a.field is not b.field:
        raise FieldMismatch("skew polynomials over different fields")
    field = a.field
    m = b.deg
    if a.deg < m:
        return SkewPoly(field, ()), a
    rem = list(a.coeffs)
    quo = [field.zero] * (a.deg - m + 1)
    lead_frobs = {}
    coef_frobs = {0: list(b.coeffs)}

    def b_frob(k):
        if k not in coef_frobs:
            prev = max(coef_frobs)
            cur = coef_frobs[prev]
            for step in range(prev + 1, k + 1):
                cur = [c.frob() for c in cur]
                coef_frobs[step] = cur
        return coef_frobs[k]

    for k in range(a.deg - m, -1, -1):
        top = rem[k + m]
        if top.is_zero():
            continue
        if k not in lead_frobs:
            lead_frobs[k] = b_frob(k)[m]
        qc = top / lead_frobs[k]
        quo[k] = qc
        row = b_frob(k)
        for j in range(m + 1):
            if row[j].is_zero():
                continue
            rem[k + j] = rem[k + j] - qc * row[j]
    return SkewPoly(field, quo), SkewPoly(field, rem[:m])


def right_gcd(a, b):
    """Monic generator of the right ideal aK{tau} + bK{tau}.

    Its kernel is the intersection of the kernels for separable inputs.
    """
    if a.is_zero() and b.is_zero():
        raise BothZero("right gcd of two zero skew polynomials")
    while not b.is_zero():
        a, b = b, right_divmod(a, b)[1]
    return a.monic()


def right_gcd_bezout(a, b):
    """(g, u, v) with g = u*a + v*b the monic right gcd (left coefficients)."""
    if a.is_zero() and b.is_zero():
        raise BothZero("right gcd of two zero skew polynomials")
    field = a.field
    one = SkewPoly.from_scalar(field.one)
    zero = SkewPoly(field, ())
    r0, r1 = a, b
    u0, u1 = one, zero
    v0, v1 = zero, one
    while not r1.is_zero():
        q, r = right_divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if not r0.is_zero() and not r0.lead().is_one():
        c = SkewPoly.from_scalar(r0.lead().inverse())
        r0, u0, v0 = c * r0, c * u0, c * v0
    return r0, u0, v0


def lclm(a, b):
    """Least common left multiple; its kernel is the sum of the kernels."""
    if a.is_zero() or b.is_zero():
        raise BothZero("lclm needs two nonzero skew polynomials")
    field = a.field
    one = SkewPoly.from_scalar(field.one)
    zero = SkewPoly(field, ())
    r0, r1 = a, b
    u0, u1 = one, zero
    while not r1.is_zero():
        q, r = right_divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
    # u1 * a = -(v1 * b) is the minimal common left multiple
    out = (u1 * a).monic()
    return out


def skew_eval(a, lam):
    """a(lam) = sum c_i lam^(q^i); additive and composition-compatible."""
    out = lam.field.zero
    cur = lam
    for i, c in enumerate(a.coeffs):
        if i > 0:
            cur = cur.frob()
        if not c.is_zero():
            out = out + c * cur
    return out


def differential(a):
    """The constant term; a ring homomorphism K{tau} -> K."""
    return a.constant()


def conjugate(datum, element, a):
    """Coefficientwise Galois action; a ring automorphism of K{tau}."""
    return SkewPoly(a.field, [datum.apply(element, c) for c in a.coeffs])
