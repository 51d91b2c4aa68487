"""The extension K = Q[x]/(f) and explicit finite Galois actions on it.

f is a single monic irreducible over Q (no towers of towers); e = 1
degenerates to Q itself.  Frobenius x -> x^q is precomputed as a linear
map over the power basis, so iterated q-powers cost e^2 coefficient
operations each.
"""
from __future__ import annotations

from itertools import product as _iproduct

from .errors import DivisionByZero, FieldMismatch, InvalidAutomorphism
from .fields import RatFunc

__all__ = ["ExtField", "ExtFieldElem", "GaloisDatum", "apply_automorphism", "ext_frobenius"]


def _qpoly_trim(c):
    while c and c[-1].is_zero():
        c.pop()
    return c


class ExtField:
    """Context for K = Q[x]/(f), f monic of degree e over Q = F_q(T)."""

    def __init__(self, fq, minpoly=None):
        self.fq = fq
        if minpoly is None:
            minpoly = [fq.rat_zero, fq.rat_one]  # f = x, i.e. K = Q
        minpoly = list(minpoly)
        if len(minpoly) < 2 or not minpoly[-1].is_one():
            raise ValueError("minimal polynomial must be monic of degree >= 1")
        self.f = tuple(minpoly)
        self.e = len(minpoly) - 1
        self.zero = ExtFieldElem(self, (fq.rat_zero,) * self.e)
        one = [fq.rat_zero] * self.e
        one[0] = fq.rat_one
        self.one = ExtFieldElem(self, tuple(one))
        self._xpow_table = self._reduction_table()
        self._xq_table = None
        if self.e > 1:
            self._check_no_rational_root()

    def _reduction_table(self):
        # x^k mod f for k = e .. 2e-2
        fq, e = self.fq, self.e
        rows = []
        cur = [(-self.f[i]) for i in range(e)]
        rows.append(tuple(cur))
        for _ in range(e - 2):
            top = cur[e - 1]
            cur = [fq.rat_zero] + cur[: e - 1]
            if not top.is_zero():
                cur = [cur[i] + top * rows[0][i] for i in range(e)]
            rows.append(tuple(cur))
        return rows

    def _check_no_rational_root(self):
        from .ideals import rational_roots

        if rational_roots(list(self.f)):
            raise ValueError("minimal polynomial has a root in Q; not irreducible")

    def elem(self, coords):
        """Element from coordinates (RatFunc, PolyA, or base-embeddable values)."""
        vec = []
        for c in coords:
            if isinstance(c, RatFunc):
                vec.append(c)
            elif isinstance(c, int):
                vec.append(RatFunc.from_poly(self.fq.poly([c])))
            else:
                vec.append(RatFunc.from_poly(c))
        if len(vec) > self.e:
            raise ValueError("too many coordinates")
        vec += [self.fq.rat_zero] * (self.e - len(vec))
        return ExtFieldElem(self, tuple(vec))

    def from_rat(self, r):
        vec = [self.fq.rat_zero] * self.e
        vec[0] = r
        return ExtFieldElem(self, tuple(vec))

    def from_poly(self, p):
        return self.from_rat(RatFunc.from_poly(p))

    def gen(self):
        if self.e == 1:
            # x = 0 in the degenerate presentation
            return self.zero
        vec = [self.fq.rat_zero] * self.e
        vec[1] = self.fq.rat_one
        return ExtFieldElem(self, tuple(vec))

    def T(self):
        return self.from_poly(self.fq.poly_T())

    def _xq_pows(self):
        # (x^j)^q mod f for j < e, via square-and-multiply once per field
        if self._xq_table is None:
            xq = self._powmod_x(self.fq.q)
            table = [self.one, xq]
            for _ in range(self.e - 2):
                table.append(table[-1] * xq)
            self._xq_table = tuple(table[: self.e])
        return self._xq_table

    def _powmod_x(self, exp):
        out = self.one
        base = self.gen() if self.e > 1 else self.zero
        if self.e == 1:
            return self.one if exp == 0 else self.zero
        while exp:
            if exp & 1:
                out = out * base
            base = base * base
            exp >>= 1
        return out

    def __repr__(self):
        return f"ExtField(q={self.fq.q}, e={self.e})"


class ExtFieldElem:
    """Element of K as coordinates over the power basis 1, x, ..., x^{e-1}."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = coords

    def is_zero(self):
        return all(c.is_zero() for c in self.coords)

    def is_one(self):
        return self.coords[0].is_one() and all(c.is_zero() for c in self.coords[1:])

    def in_base(self):
        """True when the element lies in Q."""
        return all(c.is_zero() for c in self.coords[1:])

    def as_rat(self):
        if not self.in_base():
            raise ValueError("element is not in Q")
        return self.coords[0]

    def is_fq_constant(self):
        return self.in_base() and self.coords[0].is_constant()

    def as_fq(self):
        if not self.is_fq_constant():
            raise ValueError("element is not an F_q constant")
        return self.coords[0].as_fq()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        return (
            isinstance(other, ExtFieldElem)
            and other.field is self.field
            and other.coords == self.coords
        )

    def __hash__(self):
        return hash(tuple(self.coords))

    def __add__(self, other):
        return ExtFieldElem(
            self.field, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def __sub__(self, other):
        return ExtFieldElem(
            self.field, tuple(a - b for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self):
        return ExtFieldElem(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other):
        fld = self.field
        e = fld.e
        if e == 1:
            return ExtFieldElem(fld, (self.coords[0] * other.coords[0],))
        fq = fld.fq
        raw = [fq.rat_zero] * (2 * e - 1)
        for i, a in enumerate(self.coords):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coords):
                if b.is_zero():
                    continue
                raw[i + j] = raw[i + j] + a * b
        out = list(raw[:e])
        for k in range(e, 2 * e - 1):
            top = raw[k]
            if top.is_zero():
                continue
            row = fld._xpow_table[k - e]
            out = [out[i] + top * row[i] for i in range(e)]
        return ExtFieldElem(fld, tuple(out))

    def scale(self, r):
        """Multiply by an element of Q."""
        if r.is_zero():
            return self.field.zero
        return ExtFieldElem(self.field, tuple(c * r for c in self.coords))

    def inverse(self):
        fld = self.field
        if self.is_zero():
            raise DivisionByZero("inverse of zero in K")
        if fld.e == 1 or self.in_base():
            vec = [self.coords[0].inverse()] + [fld.fq.rat_zero] * (fld.e - 1)
            return ExtFieldElem(fld, tuple(vec))
        # extended Euclid in Q[x] against f
        r0 = list(fld.f)
        r1 = list(self.coords)
        s0 = [fld.fq.rat_zero]
        s1 = [fld.fq.rat_one]
        _qpoly_trim(r1)
        while True:
            if len(r1) == 1:
                inv = r1[0].inverse()
                vec = [c * inv for c in s1]
                vec += [fld.fq.rat_zero] * (fld.e - len(vec))
                return ExtFieldElem(fld, tuple(vec[: fld.e]))
            q, r = _qpoly_divmod(r0, r1, fld.fq)
            r0, r1 = r1, r
            s0, s1 = s1, _qpoly_sub(s0, _qpoly_mul(q, s1, fld.fq), fld.fq)
            if not r1:
                raise DivisionByZero("element is a zero divisor; f is reducible")

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.field.one
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def frob(self):
        """The q-power map; coefficientwise spread plus the x^q linear map."""
        fld = self.field
        if fld.e == 1:
            return ExtFieldElem(fld, (self.coords[0].frob_power(1),))
        table = fld._xq_pows()
        out = fld.zero
        for j, c in enumerate(self.coords):
            if c.is_zero():
                continue
            out = out + table[j].scale(c.frob_power(1))
        return out

    def frob_power(self, k):
        out = self
        for _ in range(k):
            out = out.frob()
        return out

    def __repr__(self):
        if self.field.e == 1:
            return repr(self.coords[0])
        return "[" + ", ".join(repr(c) for c in self.coords) + "]"


def _qpoly_divmod(a, b, fq):
    a = list(a)
    inv = b[-1].inverse()
    quo = [fq.rat_zero] * max(len(a) - len(b) + 1, 0)
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] * inv
        if not c.is_zero():
            quo[k] = c
            for i, bc in enumerate(b):
                a[k + i] = a[k + i] - c * bc
    rem = _qpoly_trim(a[: len(b) - 1])
    return quo, rem


def _qpoly_mul(a, b, fq):
    out = [fq.rat_zero] * (len(a) + len(b) - 1 if a and b else 0)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _qpoly_trim(out)


def _qpoly_sub(a, b, fq):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else fq.rat_zero
        y = b[i] if i < len(b) else fq.rat_zero
        out.append(x - y)
    return _qpoly_trim(out)


def _qpoly_eval(coeffs, point):
    acc = point.field.zero
    for c in reversed(coeffs):
        acc = acc * point + point.field.from_rat(c)
    return acc


def ext_frobenius(a):
    """a^q, computed through the precomputed x^q image (square-and-multiply)."""
    return a.frob()


class GaloisDatum:
    """An explicit finite abelian quotient of G_K acting on K = Q[x]/(f).

    Generators are given by name, order, and the image of the extension
    generator x; all compositions are precomputed and validated (images are
    roots of f, generators commute, orders hold).
    """

    def __init__(self, field, generators):
        self.field = field
        self.generators = tuple(generators)  # (name, order, image)
        names = [g[0] for g in self.generators]
        if len(set(names)) != len(names):
            raise InvalidAutomorphism("duplicate generator names")
        for name, order, image in self.generators:
            if image.field is not field:
                raise FieldMismatch("generator image lives in another field")
            if order < 1:
                raise InvalidAutomorphism(f"generator {name} has order < 1")
            if not _qpoly_eval(list(field.f), image).is_zero():
                raise InvalidAutomorphism(f"image of {name} is not a root of f")
        self._x_images = {}
        self._precompute()
        self._validate()

    @property
    def orders(self):
        return tuple(g[1] for g in self.generators)

    @property
    def names(self):
        return tuple(g[0] for g in self.generators)

    def identity(self):
        return (0,) * len(self.generators)

    def elements(self):
        return list(_iproduct(*(range(o) for o in self.orders)))

    def generator_element(self, name):
        out = [0] * len(self.generators)
        for i, (gname, order, _) in enumerate(self.generators):
            if gname == name:
                out[i] = 1 % order
                return tuple(out)
        raise KeyError(name)

    def compose(self, s, t):
        return tuple((a + b) % o for a, b, o in zip(s, t, self.orders))

    def inverse_element(self, s):
        return tuple((-a) % o for a, o in zip(s, self.orders))

    def is_cyclic(self):
        return len(self.generators) <= 1

    def _apply_with_image(self, ximg, a):
        # ring map fixing Q, x -> ximg, by Horner
        fld = self.field
        if fld.e == 1:
            return a
        acc = fld.zero
        for c in reversed(a.coords):
            acc = acc * ximg + fld.from_rat(c)
        return acc

    def _precompute(self):
        fld = self.field
        x = fld.gen()
        self._x_images[self.identity()] = x
        # walk the product group one generator at a time
        frontier = [self.identity()]
        for i, (_, order, image) in enumerate(self.generators):
            new = []
            for elem in frontier:
                cur = self._x_images[elem]
                for k in range(1, order):
                    step = list(elem)
                    step[i] = k
                    cur = self._apply_with_image(image, cur)
                    self._x_images[tuple(step)] = cur
                    new.append(tuple(step))
            frontier += new

    def _validate(self):
        fld = self.field
        x = fld.gen()
        for i, (name, order, image) in enumerate(self.generators):
            # order relation: applying the generator `order` times is identity
            cur = x
            for _ in range(order):
                cur = self._apply_with_image(image, cur)
            if cur != x:
                raise InvalidAutomorphism(f"generator {name} does not have order {order}")
        # commutativity on x for each generator pair
        for i in range(len(self.generators)):
            for j in range(i + 1, len(self.generators)):
                si = self.generator_element(self.names[i])
                sj = self.generator_element(self.names[j])
                a = self.apply(si, self._x_images[sj])
                b = self.apply(sj, self._x_images[si])
                if a != b:
                    raise InvalidAutomorphism("generators do not commute")

    def apply(self, element, a):
        """Apply the automorphism indexed by an exponent tuple to a in K."""
        if a.field is not self.field:
            raise FieldMismatch("element from another field")
        element = tuple(element)
        if element == self.identity():
            return a
        return self._apply_with_image(self._x_images[element], a)

    def apply_name(self, name, a):
        return self.apply(self.generator_element(name), a)

    def is_fixed(self, a):
        gens = [self.generator_element(n) for n in self.names]
        return all(self.apply(s, a) == a for s in gens)

    def __repr__(self):
        gens = ", ".join(f"{n}^{o}" for n, o in zip(self.names, self.orders))
        return f"GaloisDatum({gens or 'trivial'})"


def apply_automorphism(datum, element, a):
    """Coefficient action used to build conjugates; a ring map fixing Q."""
    return datum.apply(element, a)


def trivial_galois(field):
    return GaloisDatum(field, ())
