"""Exact arithmetic for F_p < F_q < A = F_q[T] < Q = F_q(T).

Elements of F_q are packed base-p integers; polynomials over F_q are
little-endian numpy int64 arrays of packed values.  Multiplication in F_q
goes through discrete log/exp tables, so all polynomial kernels work the
same way for prime and non-prime q.
"""
from __future__ import annotations

import numpy as np

from .errors import DivisionByZero, FieldMismatch

_EMPTY = np.zeros(0, dtype=np.int64)


def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class Fq:
    """The finite field F_q, q = p^d, with its polynomial ring A = F_q[T].

    `modulus` is the monic degree-d irreducible over F_p defining the power
    basis (little-endian int coefficients); omit it for q = p.
    """

    def __init__(self, p, modulus=None):
        if not _is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if modulus is None:
            modulus = (0, 1)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) < 2 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree >= 1")
        self.p = p
        self.d = len(modulus) - 1
        self.q = p ** self.d
        self.modulus = modulus
        if self.q > 65536:
            raise ValueError("field too large for table-based arithmetic")
        self._pp = p ** np.arange(self.d, dtype=np.int64)
        self._build_reduction()
        if self.d > 1 and not self._modulus_irreducible():
            raise ValueError("modulus is reducible over F_p")
        self._build_tables()
        self.zero = FqElem(self, 0)
        self.one = FqElem(self, 1)
        self.poly_zero = PolyA(self, _EMPTY)
        self.poly_one = PolyA(self, np.array([1], dtype=np.int64))
        self.rat_one = RatFunc(self, self.poly_one, self.poly_one)
        self.rat_zero = RatFunc(self, self.poly_zero, self.poly_one)

    def __repr__(self):
        return f"Fq(p={self.p}, d={self.d})"

    # -- construction of the multiplication tables ---------------------------

    def _build_reduction(self):
        # rows: y^k mod modulus for k = 0 .. 2d-2, as F_p digit vectors
        p, d = self.p, self.d
        rows = np.zeros((2 * d - 1, d), dtype=np.int64)
        cur = np.zeros(d + 1, dtype=np.int64)
        cur[0] = 1
        mod = np.array(self.modulus, dtype=np.int64)
        for k in range(2 * d - 1):
            rows[k] = cur[:d]
            cur = np.concatenate((np.zeros(1, dtype=np.int64), cur[:d]))
            if cur[d]:
                cur = (cur - cur[d] * mod) % p
            cur = cur % p
        self._red = rows

    def _digit_mul(self, a, b):
        # multiply two packed scalars by digit convolution + reduction
        p, d = self.p, self.d
        da = (a // self._pp) % p
        db = (b // self._pp) % p
        conv = np.convolve(da, db) % p
        digits = (conv @ self._red[: len(conv)]) % p
        return int(digits @ self._pp)

    def _modulus_irreducible(self):
        # Rabin test over F_p on the defining modulus, via plain int polys
        p, d = self.p, self.d
        mod = list(self.modulus)

        def pmulmod(a, b):
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] = (out[i + j] + x * y) % p
            while len(out) >= len(mod):
                lead = out[-1]
                if lead:
                    shift = len(out) - len(mod)
                    for i, c in enumerate(mod):
                        out[shift + i] = (out[shift + i] - lead * c) % p
                out.pop()
            while out and out[-1] == 0:
                out.pop()
            return out or [0]

        def frob(a):
            r = [1]
            base = a
            e = p
            while e:
                if e & 1:
                    r = pmulmod(r, base)
                base = pmulmod(base, base)
                e >>= 1
            return r

        def pgcd_nontrivial(a):
            # gcd(a, modulus) nontrivial?
            u, v = mod[:], a[:]
            while v != [0]:
                # u mod v
                while len(u) >= len(v) and u != [0]:
                    lead = u[-1] * pow(v[-1], -1, p) % p
                    shift = len(u) - len(v)
                    for i, c in enumerate(v):
                        u[shift + i] = (u[shift + i] - lead * c) % p
                    while len(u) > 1 and u[-1] == 0:
                        u.pop()
                    if u == [0]:
                        break
                u, v = v, u
            return len(u) > 1

        # x^(p^i) chain with gcd checks at proper prime-divisor levels
        cur = [0, 1]
        for i in range(1, d + 1):
            cur = frob(cur)
            if i < d and d % i == 0 and _is_prime(d // i):
                diff = cur[:]
                if len(diff) < 2:
                    diff = diff + [0]
                diff[1] = (diff[1] - 1) % p
                while len(diff) > 1 and diff[-1] == 0:
                    diff.pop()
                if diff != [0] and pgcd_nontrivial(diff):
                    return False
        diff = cur[:]
        if len(diff) < 2:
            diff = diff + [0]
        diff[1] = (diff[1] - 1) % p
        while len(diff) > 1 and diff[-1] == 0:
            diff.pop()
        return diff == [0]

    def _build_tables(self):
        p, d, q = self.p, self.d, self.q
        # find a multiplicative generator by trial
        order = q - 1
        factors = []
        n = order
        f = 2
        while f * f <= n:
            if n % f == 0:
                factors.append(f)
                while n % f == 0:
                    n //= f
            f += 1
        if n > 1:
            factors.append(n)
        gen = None
        for cand in range(2, q):
            if all(self._spow(cand, order // f) != 1 for f in factors):
                gen = cand
                break
        if gen is None:
            gen = 1  # q = 2
        exp = np.zeros(2 * max(order, 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        cur = 1
        for i in range(order):
            exp[i] = cur
            log[cur] = i
            cur = self._digit_mul(cur, gen)
        exp[order: 2 * order] = exp[:order]
        self._exp = exp
        self._log = log
        # p-th root table (x -> x^(p^(d-1)))
        self._proot = np.array(
            [self._spow(v, p ** (d - 1)) for v in range(q)], dtype=np.int64
        )
        if q <= 256:
            vals = np.arange(q, dtype=np.int64)
            self._addtab = self.digit_add(vals[:, None], vals[None, :])
            self._multab = np.zeros((q, q), dtype=np.int64)
            for i in range(1, q):
                li = self._log[i]
                self._multab[i, 1:] = self._exp[li + self._log[np.arange(1, q)]]
            self._negtab = np.array([self.digit_add(0, self._negate_digits(v)) for v in range(q)],
                                    dtype=np.int64)
        else:
            self._addtab = None
            self._multab = None
            self._negtab = None

    def _spow(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = self._digit_mul(r, a)
            a = self._digit_mul(a, a)
            e >>= 1
        return r

    # -- packed scalar arithmetic --------------------------------------------

    def digit_add(self, a, b):
        if self.d == 1:
            return (a + b) % self.p
        out = 0
        for j in range(self.d):
            pj = int(self._pp[j])
            out = out + ((a // pj + b // pj) % self.p) * pj
        return out

    def sadd(self, a, b):
        if self._addtab is not None:
            return int(self._addtab[a, b])
        return int(self.digit_add(a, b))

    def sneg(self, a):
        if self.d == 1:
            return (-a) % self.p
        return int(self.digit_add(0, self._negate_digits(a)))

    def _negate_digits(self, a):
        out = 0
        for j in range(self.d):
            pj = int(self._pp[j])
            out += ((-(a // pj)) % self.p) * pj
        return out

    def ssub(self, a, b):
        return self.sadd(a, self.sneg(b))

    def smul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def sinv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero in F_q")
        return int(self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)])

    def sdiv(self, a, b):
        return self.smul(a, self.sinv(b))

    def spow(self, a, e):
        if a == 0:
            return 0 if e else 1
        return int(self._exp[(self._log[a] * (e % (self.q - 1))) % (self.q - 1)])

    # -- array kernels (little-endian packed coefficient vectors) ------------

    def arr_add(self, a, b):
        n = max(len(a), len(b))
        if self.d == 1:
            out = np.zeros(n, dtype=np.int64)
            out[: len(a)] = a
            out[: len(b)] = (out[: len(b)] + b) % self.p
            return _trim(out)
        out = np.zeros(n, dtype=np.int64)
        out[: len(a)] = a
        if self._addtab is not None:
            out[: len(b)] = self._addtab[out[: len(b)], b]
            return _trim(out)
        pad = np.zeros(n, dtype=np.int64)
        pad[: len(b)] = b
        return _trim(self.digit_add(out, pad))

    def arr_neg(self, a):
        if self.d == 1:
            return (-a) % self.p
        if self._negtab is not None:
            return self._negtab[a]
        out = 0 * a
        for j in range(self.d):
            pj = int(self._pp[j])
            out = out + ((-(a // pj)) % self.p) * pj
        return out

    def arr_sub(self, a, b):
        return self.arr_add(a, self.arr_neg(b))

    def arr_scalar_mul(self, a, c):
        if c == 0 or len(a) == 0:
            return _EMPTY
        if c == 1:
            return a
        out = np.zeros(len(a), dtype=np.int64)
        nz = a != 0
        out[nz] = self._exp[self._log[a[nz]] + self._log[c]]
        return _trim(out)

    def arr_mul(self, a, b):
        if len(a) == 0 or len(b) == 0:
            return _EMPTY
        p, d = self.p, self.d
        if d == 1:
            return np.convolve(a, b) % p
        da = ((a[:, None] // self._pp) % p).T  # (d, na)
        db = ((b[:, None] // self._pp) % p).T
        n = len(a) + len(b) - 1
        conv = np.zeros((2 * d - 1, n), dtype=np.int64)
        for i in range(d):
            if not da[i].any():
                continue
            for j in range(d):
                if not db[j].any():
                    continue
                conv[i + j] += np.convolve(da[i], db[j])
        conv %= p
        digits = np.tensordot(self._red, conv, axes=(0, 0)) % p  # (d, n)
        return _trim((digits.T @ self._pp))

    def arr_divmod(self, a, b):
        if len(b) == 0:
            raise DivisionByZero("polynomial division by zero")
        if len(a) < len(b):
            return _EMPTY, a
        r = a.copy()
        nb = len(b)
        quo = np.zeros(len(a) - nb + 1, dtype=np.int64)
        inv_lead = self.sinv(int(b[-1]))
        bneg = self.arr_neg(b)
        addtab, multab = self._addtab, self._multab
        if self.d == 1:
            p = self.p
            for k in range(len(a) - nb, -1, -1):
                c = int(r[k + nb - 1])
                if c:
                    qc = self.smul(c, inv_lead)
                    quo[k] = qc
                    r[k: k + nb] = (r[k: k + nb] + qc * bneg) % p
        elif addtab is not None:
            for k in range(len(a) - nb, -1, -1):
                c = int(r[k + nb - 1])
                if c:
                    qc = self.smul(c, inv_lead)
                    quo[k] = qc
                    r[k: k + nb] = addtab[r[k: k + nb], multab[bneg, qc]]
        else:
            for k in range(len(a) - nb, -1, -1):
                c = int(r[k + nb - 1])
                if c:
                    qc = self.smul(c, inv_lead)
                    quo[k] = qc
                    r[k: k + nb] = self.digit_add(
                        r[k: k + nb], self._scalar_mul_nocheck(bneg, qc)
                    )
        return _trim(quo), _trim(r[: nb - 1])

    def _scalar_mul_nocheck(self, a, c):
        if self._multab is not None:
            return self._multab[a, c]
        out = np.zeros(len(a), dtype=np.int64)
        nz = a != 0
        out[nz] = self._exp[self._log[a[nz]] + self._log[c]]
        return out

    def arr_mod_inplace(self, r, b, bneg):
        """r mod b where r is a private writable array; returns trimmed view."""
        nb = len(b)
        inv_lead = self.sinv(int(b[-1]))
        addtab, multab = self._addtab, self._multab
        if self.d == 1:
            p = self.p
            for k in range(len(r) - nb, -1, -1):
                c = int(r[k + nb - 1])
                if c:
                    qc = self.smul(c, inv_lead)
                    r[k: k + nb] = (r[k: k + nb] + qc * bneg) % p
        elif addtab is not None:
            for k in range(len(r) - nb, -1, -1):
                c = int(r[k + nb - 1])
                if c:
                    qc = self.smul(c, inv_lead)
                    r[k: k + nb] = addtab[r[k: k + nb], multab[bneg, qc]]
        else:
            for k in range(len(r) - nb, -1, -1):
                c = int(r[k + nb - 1])
                if c:
                    qc = self.smul(c, inv_lead)
                    r[k: k + nb] = self.digit_add(
                        r[k: k + nb], self._scalar_mul_nocheck(bneg, qc)
                    )
        return _trim(r[: nb - 1])

    def arr_gcd(self, a, b):
        if len(a) < len(b):
            a, b = b, a
        a, b = a.copy(), b.copy()
        while len(b):
            if len(b) == 1:
                return np.array([1], dtype=np.int64)
            r = self.arr_mod_inplace(a, b, self.arr_neg(b))
            a, b = b, r
        if len(a) and a[-1] != 1:
            a = self.arr_scalar_mul(a, self.sinv(int(a[-1])))
        return a

    def arr_frob_spread(self, a, k):
        # a^(q^k): F_q coefficients are Frobenius-fixed, exponents scale
        if len(a) == 0 or k == 0:
            return a
        stride = self.q ** k
        out = np.zeros((len(a) - 1) * stride + 1, dtype=np.int64)
        out[:: stride] = a
        return out

    def arr_pth_root(self, a):
        # valid when all exponents are divisible by p
        if len(a) == 0:
            return a
        compressed = a[:: self.p].copy()
        nz = compressed != 0
        compressed[nz] = self._proot[compressed[nz]]
        return _trim(compressed)

    # -- convenience constructors ---------------------------------------------

    def elem(self, coords):
        if isinstance(coords, FqElem):
            return coords
        if isinstance(coords, int):
            return FqElem(self, coords % self.p if self.d == 1 else self._pack_int(coords))
        vec = [int(c) % self.p for c in coords]
        if len(vec) > self.d:
            raise ValueError("too many coordinates")
        vec += [0] * (self.d - len(vec))
        return FqElem(self, int(np.dot(vec, self._pp)))

    def _pack_int(self, n):
        # embed an integer through F_p
        return n % self.p

    def elem_packed(self, val):
        """Element from its packed base-p value in [0, q)."""
        return FqElem(self, int(val) % self.q)

    def poly(self, coeffs):
        vals = []
        for c in coeffs:
            if isinstance(c, FqElem):
                if c.field is not self:
                    raise FieldMismatch("coefficient from another field")
                vals.append(c.val)
            elif isinstance(c, int):
                vals.append(c % self.p)
            else:
                vals.append(self.elem(c).val)
        return PolyA(self, _trim(np.array(vals, dtype=np.int64)))

    def poly_T(self):
        return self.poly([0, 1])

    def rat(self, num, den=None):
        if isinstance(num, (list, tuple)):
            num = self.poly(num)
        if den is None:
            return RatFunc.make(num, self.poly_one)
        if isinstance(den, (list, tuple)):
            den = self.poly(den)
        return RatFunc.make(num, den)


def _trim(arr):
    n = len(arr)
    while n and arr[n - 1] == 0:
        n -= 1
    if n == len(arr):
        return arr
    return arr[:n]


class FqElem:
    """Element of F_q as coordinates over the power basis of the modulus."""

    __slots__ = ("field", "val")

    def __init__(self, field, val):
        self.field = field
        self.val = int(val)

    @property
    def coords(self):
        p = self.field.p
        return tuple((self.val // p ** i) % p for i in range(self.field.d))

    def __bool__(self):
        return self.val != 0

    def __eq__(self, other):
        return (
            isinstance(other, FqElem)
            and other.field is self.field
            and other.val == self.val
        )

    def __hash__(self):
        return hash((id(self.field), self.val))

    def __add__(self, other):
        return FqElem(self.field, self.field.sadd(self.val, other.val))

    def __sub__(self, other):
        return FqElem(self.field, self.field.ssub(self.val, other.val))

    def __neg__(self):
        return FqElem(self.field, self.field.sneg(self.val))

    def __mul__(self, other):
        return FqElem(self.field, self.field.smul(self.val, other.val))

    def __truediv__(self, other):
        return FqElem(self.field, self.field.sdiv(self.val, other.val))

    def inverse(self):
        return FqElem(self.field, self.field.sinv(self.val))

    def __pow__(self, e):
        return FqElem(self.field, self.field.spow(self.val, e))

    def __repr__(self):
        if self.field.d == 1:
            return str(self.val)
        return "[" + ",".join(str(c) for c in self.coords) + "]"


def fq_arith(a, b, op):
    """Dispatch table for the four field operations on FqElem values."""
    if a.field is not b.field:
        raise FieldMismatch("operands from different fields")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op-code {op!r}")


class PolyA:
    """Element of A = F_q[T], little-endian, no trailing zero coefficient."""

    __slots__ = ("field", "_c", "_hash")

    def __init__(self, field, arr):
        self.field = field
        arr = np.asarray(arr, dtype=np.int64)
        arr.flags.writeable = False
        self._c = arr
        self._hash = None

    @property
    def coeffs(self):
        return tuple(FqElem(self.field, int(v)) for v in self._c)

    @property
    def array(self):
        return self._c

    @property
    def degree(self):
        # zero polynomial reports the sentinel -1
        return len(self._c) - 1

    def is_zero(self):
        return len(self._c) == 0

    def is_one(self):
        return len(self._c) == 1 and int(self._c[0]) == 1

    def is_constant(self):
        return len(self._c) <= 1

    def lc(self):
        if self.is_zero():
            raise DivisionByZero("leading coefficient of zero")
        return FqElem(self.field, int(self._c[-1]))

    def is_monic(self):
        return len(self._c) > 0 and int(self._c[-1]) == 1

    def __bool__(self):
        return len(self._c) != 0

    def __eq__(self, other):
        return (
            isinstance(other, PolyA)
            and other.field is self.field
            and len(other._c) == len(self._c)
            and bool(np.array_equal(other._c, self._c))
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((id(self.field), self._c.tobytes()))
        return self._hash

    def __add__(self, other):
        return PolyA(self.field, self.field.arr_add(self._c, other._c))

    def __sub__(self, other):
        return PolyA(self.field, self.field.arr_sub(self._c, other._c))

    def __neg__(self):
        return PolyA(self.field, self.field.arr_neg(self._c))

    def __mul__(self, other):
        if isinstance(other, FqElem):
            return self.scale(other)
        return PolyA(self.field, self.field.arr_mul(self._c, other._c))

    def scale(self, c):
        return PolyA(self.field, self.field.arr_scalar_mul(self._c, c.val))

    def __divmod__(self, other):
        q, r = self.field.arr_divmod(self._c, other._c)
        return PolyA(self.field, q), PolyA(self.field, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def gcd(self, other):
        return PolyA(self.field, self.field.arr_gcd(self._c, other._c))

    def monic(self):
        if self.is_zero() or self._c[-1] == 1:
            return self
        return self.scale(self.lc().inverse())

    def frob_power(self, k):
        return PolyA(self.field, self.field.arr_frob_spread(self._c, k))

    def derivative(self):
        if len(self._c) <= 1:
            return self.field.poly_zero
        f = self.field
        out = self._c[1:].copy()
        for i in range(len(out)):
            out[i] = f.smul(int(out[i]), (i + 1) % f.p) if (i + 1) % f.p else 0
        return PolyA(f, _trim(out))

    def shift(self, k):
        # multiply by T^k
        if self.is_zero():
            return self
        return PolyA(
            self.field,
            np.concatenate((np.zeros(k, dtype=np.int64), self._c)),
        )

    def eval_fq(self, c):
        """Evaluate at an F_q point (Horner)."""
        f = self.field
        acc = 0
        for v in self._c[::-1]:
            acc = f.sadd(f.smul(acc, c.val), int(v))
        return FqElem(f, acc)

    def qth_root(self):
        """Exact q-th root, or None when the polynomial is not a q-th power."""
        f = self.field
        if self.is_zero():
            return self
        if (len(self._c) - 1) % f.q != 0:
            return None
        stride = self._c[:: f.q]
        probe = np.zeros(len(self._c), dtype=np.int64)
        probe[:: f.q] = stride
        if not np.array_equal(probe, self._c):
            return None
        return PolyA(f, _trim(stride.copy()))

    def __repr__(self):
        return poly_to_text(self)


def poly_to_text(p):
    """Render in the `c0 + c1*T + c2*T^2` grammar."""
    if p.is_zero():
        return "0"
    parts = []
    for i, v in enumerate(p._c):
        if v == 0:
            continue
        c = FqElem(p.field, int(v))
        cs = repr(c)
        if i == 0:
            parts.append(cs)
        else:
            t = "T" if i == 1 else f"T^{i}"
            parts.append(t if cs == "1" else f"{cs}*{t}")
    return " + ".join(parts)


def poly_divmod(a, b):
    """Euclidean division in A; returns (quot, rem) with deg rem < deg b."""
    if a.field is not b.field:
        raise FieldMismatch("operands from different fields")
    return divmod(a, b)


def poly_lcm(a, b):
    if a.is_zero() or b.is_zero():
        return a.field.poly_zero
    return ((a * b) // a.gcd(b)).monic()


class RatFunc:
    """Element of Q = F_q(T) in canonical form: den monic, gcd(num, den) = 1."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field, num, den):
        # trusted constructor; use RatFunc.make to normalize
        self.field = field
        self.num = num
        self.den = den

    @classmethod
    def make(cls, num, den):
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        field = num.field
        if num.is_zero():
            return field.rat_zero
        if not den.is_one():
            g = num.gcd(den)
            if not g.is_one():
                num = num // g
                den = den // g
            if den._c[-1] != 1:
                lead_inv = den.lc().inverse()
                num = num.scale(lead_inv)
                den = den.scale(lead_inv)
        return cls(field, num, den)

    @classmethod
    def from_poly(cls, p):
        return cls(p.field, p, p.field.poly_one)

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num.is_one() and self.den.is_one()

    def is_poly(self):
        return self.den.is_one()

    def is_constant(self):
        return self.num.is_constant() and self.den.is_one()

    def as_fq(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        if self.is_zero():
            return self.field.zero
        return FqElem(self.field, int(self.num._c[0]))

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        return (
            isinstance(other, RatFunc)
            and other.field is self.field
            and other.num == self.num
            and other.den == self.den
        )

    def __hash__(self):
        return hash((hash(self.num), hash(self.den)))

    def _add_like(self, other, sign):
        # Knuth/cpython-fractions scheme: keeps gcd operands small and the
        # result canonical without a full re-normalization.
        field = self.field
        na, da = self.num, self.den
        nb, db = other.num, other.den
        if da.is_one() and db.is_one():
            t = na + nb if sign > 0 else na - nb
            return RatFunc(field, t, da) if not t.is_zero() else field.rat_zero
        g = da.gcd(db)
        if g.is_one():
            t = na * db + nb * da if sign > 0 else na * db - nb * da
            if t.is_zero():
                return field.rat_zero
            return RatFunc(field, t, da * db)
        s = da // g
        db_red = db // g
        t = na * db_red + nb * s if sign > 0 else na * db_red - nb * s
        if t.is_zero():
            return field.rat_zero
        g2 = t.gcd(g)
        if g2.is_one():
            return RatFunc(field, t, s * db)
        return RatFunc(field, t // g2, s * (db // g2))

    def __add__(self, other):
        return self._add_like(other, 1)

    def __sub__(self, other):
        return self._add_like(other, -1)

    def __neg__(self):
        if self.is_zero():
            return self
        return RatFunc(self.field, -self.num, self.den)

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return self.field.rat_zero
        if self.den.is_one() and other.den.is_one():
            return RatFunc(self.field, self.num * other.num, self.den)
        # reduce crosswise first to keep gcd operands small
        a, b = self.num, self.den
        c, d = other.num, other.den
        g1 = a.gcd(d)
        if not g1.is_one():
            a, d = a // g1, d // g1
        g2 = c.gcd(b)
        if not g2.is_one():
            c, b = c // g2, b // g2
        num = a * c
        den = b * d
        if not den.is_monic():
            inv = den.lc().inverse()
            num, den = num.scale(inv), den.scale(inv)
        return RatFunc(self.field, num, den)

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero rational function")
        num, den = self.den, self.num
        if not den.is_monic():
            inv = den.lc().inverse()
            num, den = num.scale(inv), den.scale(inv)
        return RatFunc(self.field, num, den)

    def __truediv__(self, other):
        return self * other.inverse()

    def frob_power(self, k):
        # canonical form is preserved by T -> T^(q^k) spreading
        if k == 0 or self.is_zero():
            return self
        return RatFunc(self.field, self.num.frob_power(k), self.den.frob_power(k))

    def qth_root(self):
        rn = self.num.qth_root()
        rd = self.den.qth_root()
        if rn is None or rd is None:
            return None
        return RatFunc(self.field, rn, rd)

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.field.rat_one
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __repr__(self):
        if self.den.is_one():
            return poly_to_text(self.num)
        return f"({poly_to_text(self.num)}) / ({poly_to_text(self.den)})"
