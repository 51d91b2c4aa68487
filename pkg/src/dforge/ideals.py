"""Ideals of A = F_q[T] and polynomial factorization.

A is a principal ideal domain: an ideal is stored by its monic generator
and "divides" is polynomial divisibility.  Equal-degree splitting draws
from a caller-suppliable random source so factorizations are reproducible;
the returned factor list is sorted canonically either way.
"""
from __future__ import annotations

import random

from .errors import ZeroIdeal, ZeroPolynomial
from .fields import PolyA, RatFunc, poly_to_text

_DEFAULT_SEED = 0xD4


class IdealA:
    """Nonzero ideal of A by monic generator, with lazily computed factors."""

    __slots__ = ("gen", "_factors")

    def __init__(self, gen):
        if gen.is_zero():
            raise ZeroIdeal("the zero ideal is not allowed here")
        self.gen = gen.monic()
        self._factors = None

    @property
    def field(self):
        return self.gen.field

    @property
    def degree(self):
        return self.gen.degree

    def is_unit(self):
        return self.gen.is_one()

    def __eq__(self, other):
        return isinstance(other, IdealA) and other.gen == self.gen

    def __hash__(self):
        return hash(("IdealA", self.gen))

    def __mul__(self, other):
        return IdealA(self.gen * other.gen)

    def gcd(self, other):
        return IdealA(self.gen.gcd(other.gen))

    def lcm(self, other):
        return IdealA((self.gen * other.gen) // self.gen.gcd(other.gen))

    def divides(self, other):
        """self | other, i.e. other ⊆ self as sets."""
        return (other.gen % self.gen).is_zero()

    def quotient(self, other):
        q, r = divmod(self.gen, other.gen)
        if not r.is_zero():
            raise ZeroIdeal("inexact ideal quotient")
        return IdealA(q)

    def factors(self, rng=None):
        if self._factors is None:
            self._factors = factor_ideal(self, rng)
        return self._factors

    def valuation(self, p, rng=None):
        """v_p of this ideal (multiplicity of the prime p in the factorization)."""
        for prime, mult in self.factors(rng):
            if prime == p:
                return mult
        return 0

    def is_prime(self, rng=None):
        return is_irreducible(self.gen)

    def is_square_free(self, rng=None):
        return all(m == 1 for _, m in self.factors(rng))

    def radical(self, rng=None):
        out = unit_ideal(self.field)
        for prime, _ in self.factors(rng):
            out = out * prime
        return out

    def __repr__(self):
        return f"({poly_to_text(self.gen)})"


def unit_ideal(field):
    return IdealA(field.poly_one)


def is_irreducible(f):
    """Rabin irreducibility: T^(q^n) = T mod f and no prime-level coincidence."""
    if f.is_zero() or f.degree < 1:
        return False
    n = f.degree
    if n == 1:
        return True
    field = f.field
    T = field.poly_T()

    def next_frob(r):
        return r.frob_power(1) % f

    primes = sorted({p for p in range(2, n + 1) if n % p == 0 and _is_prime(p)})
    r = T % f
    images = {}
    for i in range(1, n + 1):
        r = next_frob(r)
        images[i] = r
    for p in primes:
        g = (images[n // p] - T % f).gcd(f)
        if not g.is_one():
            return False
    return (images[n] - T % f).is_zero()


def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def squarefree_decomposition(f):
    """Yield (squarefree part g_i, exponent i) with f = prod g_i^i, g_i monic."""
    field = f.field
    p = field.p
    f = f.monic()
    out = {}

    def accumulate(g, scale):
        if g.degree < 1:
            return
        for part, e in _sqf_char_p(g):
            out[e * scale] = out.get(e * scale, field.poly_one) * part

    def _sqf_char_p(g):
        res = []
        d = g.derivative()
        if d.is_zero():
            root = _pth_root_poly(g)
            for part, e in _sqf_char_p(root):
                res.append((part, e * p))
            return res
        c = g.gcd(d)
        w = g // c
        i = 1
        while not w.is_one():
            y = w.gcd(c)
            fac = w // y
            if fac.degree >= 1:
                res.append((fac.monic(), i))
            w, c = y, c // y
            i += 1
        if not c.is_one():
            for part, e in _sqf_char_p(_pth_root_poly(c)):
                res.append((part, e * p))
        return res

    accumulate(f, 1)
    return [(part, e) for e, part in sorted(out.items(), key=lambda kv: kv[0])]


def _pth_root_poly(g):
    field = g.field
    arr = g.array
    import numpy as np

    stride = arr[:: field.p].copy()
    nz = stride != 0
    stride[nz] = field._proot[stride[nz]]
    n = len(stride)
    while n and stride[n - 1] == 0:
        n -= 1
    return PolyA(field, stride[:n])


def _distinct_degree(f):
    """Split a squarefree monic f into (product of degree-d primes, d) parts."""
    field = f.field
    T = field.poly_T()
    out = []
    r = T % f
    d = 0
    rest = f
    while rest.degree > 0:
        d += 1
        if 2 * d > rest.degree:
            out.append((rest, rest.degree))
            break
        r = r.frob_power(1) % rest
        g = (r - T % rest).gcd(rest)
        if not g.is_one():
            out.append((g, d))
            rest = rest // g
            r = r % rest
    return out


def _equal_degree(f, d, rng):
    """Cantor-Zassenhaus split of a product of degree-d primes."""
    field = f.field
    if f.degree == d:
        return [f]
    q = field.q
    n = f.degree
    while True:
        h = field.poly([field.elem_packed(rng.randrange(q)) for _ in range(n)])
        if h.degree < 1:
            continue
        g = h.gcd(f)
        if not g.is_one():
            break
        if q % 2 == 1:
            e = (q ** d - 1) // 2
            w = _powmod(h, e, f) - field.poly_one % f
        else:
            # char 2: additive trace over F_2
            w = field.poly_zero
            t = h % f
            for _ in range(d * field.d):
                w = w + t
                t = (t * t) % f
        g = w.gcd(f)
        if not g.is_one() and g.degree < f.degree:
            break
    return _equal_degree(g.monic(), d, rng) + _equal_degree((f // g).monic(), d, rng)


def _powmod(base, e, mod):
    field = base.field
    out = field.poly_one % mod
    base = base % mod
    while e:
        if e & 1:
            out = (out * base) % mod
        base = (base * base) % mod
        e >>= 1
    return out


def factor_ideal(n, rng=None):
    """Factor a nonzero ideal into primes with multiplicity.

    Returns [(IdealA prime, mult)] sorted by (degree, text); the product of
    gen^mult equals the generator exactly.
    """
    if isinstance(n, PolyA):
        n = IdealA(n)
    if rng is None:
        rng = random.Random(_DEFAULT_SEED)
    elif isinstance(rng, int):
        rng = random.Random(rng)
    gen = n.gen
    if gen.is_one():
        return []
    result = {}
    for part, e in squarefree_decomposition(gen):
        for block, d in _distinct_degree(part):
            for prime in _equal_degree(block.monic(), d, rng):
                key = IdealA(prime)
                result[key] = result.get(key, 0) + e
    out = sorted(result.items(), key=lambda kv: (kv[0].degree, poly_to_text(kv[0].gen)))
    # consistency: re-multiplied factors must reproduce the generator
    check = gen.field.poly_one
    for prime, mult in out:
        for _ in range(mult):
            check = check * prime.gen
    assert check == gen, "factorization does not re-multiply"
    return out


def monic_divisors(f, rng=None, cap=200000):
    """All monic divisors of a nonzero polynomial (via its factorization)."""
    if f.is_zero():
        raise ZeroPolynomial("divisors of zero requested")
    field = f.field
    divisors = [field.poly_one]
    total = 1
    for prime, mult in factor_ideal(IdealA(f), rng):
        total *= mult + 1
        if total > cap:
            raise ValueError("divisor enumeration too large")
        powers = [field.poly_one]
        for _ in range(mult):
            powers.append(powers[-1] * prime.gen)
        divisors = [d * pw for d in divisors for pw in powers]
    return divisors


def divisors_in_degree_order(f, rng=None):
    """Yield the monic divisors of f in nondecreasing degree, lazily.

    Heap walk over the exponent lattice of the factorization; only popped
    divisors are materialized, so early-stopping consumers never touch the
    full (possibly huge) divisor set.
    """
    import heapq

    if f.is_zero():
        raise ZeroPolynomial("divisors of zero requested")
    field = f.field
    facs = factor_ideal(IdealA(f), rng)
    if not facs:
        yield field.poly_one
        return
    degs = [p.degree for p, _ in facs]
    mults = [m for _, m in facs]
    start = (0,) * len(facs)
    heap = [(0, start, field.poly_one)]
    seen = {start}
    while heap:
        deg, exps, poly = heapq.heappop(heap)
        yield poly
        for i in range(len(facs)):
            if exps[i] < mults[i]:
                nxt = exps[:i] + (exps[i] + 1,) + exps[i + 1:]
                if nxt not in seen:
                    seen.add(nxt)
                    heapq.heappush(
                        heap, (deg + degs[i], nxt, poly * facs[i][0].gen)
                    )


def divisors_of_degree(ideal, k, rng=None):
    """Monic divisor ideals of the given degree."""
    out = []
    for d in monic_divisors(ideal.gen, rng):
        if d.degree == k:
            out.append(IdealA(d))
    return out


def rational_roots(coeffs, rng=None):
    """All roots in Q of a nonzero polynomial with coefficients in Q.

    Clears denominators to a primitive polynomial over A and enumerates
    num/den candidates through the rational root theorem over the PID A,
    testing each exactly.
    """
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    if not coeffs:
        raise ZeroPolynomial("root search on the zero polynomial")
    field = coeffs[0].field
    if len(coeffs) == 1:
        return []
    # clear denominators
    den_lcm = field.poly_one
    for c in coeffs:
        den_lcm = (den_lcm * c.den) // den_lcm.gcd(c.den)
    cleared = [c.num * (den_lcm // c.den) for c in coeffs]
    # primitive part
    content = field.poly_zero
    for c in cleared:
        content = content.gcd(c)
    cleared = [c // content for c in cleared]
    roots = []
    # strip powers of x; x | g means 0 is a root
    low = 0
    while cleared[low].is_zero():
        low += 1
    if low > 0:
        roots.append(field.rat_zero)
        cleared = cleared[low:]
        if len(cleared) == 1:
            return roots
    trailing, leading = cleared[0], cleared[-1]

    def horner(x):
        acc = field.rat_zero
        for c in reversed(cleared):
            acc = acc * x + RatFunc.from_poly(c)
        return acc

    units = [field.elem(u) for u in range(1, field.q)]
    for u in monic_divisors(trailing, rng):
        for v in monic_divisors(leading, rng):
            if not u.gcd(v).is_one():
                continue
            base = RatFunc.make(u, v)
            for xi in units:
                cand = base * RatFunc.from_poly(field.poly([xi]))
                if horner(cand).is_zero():
                    roots.append(cand)
    roots.sort(key=lambda r: (r.den.degree, r.num.degree, repr(r)))
    return roots
