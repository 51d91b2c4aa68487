"""Drinfeld A-modules: construction, phi_a, j-invariants, conjugates,
bounded endomorphism search, and constructive Weil descent.

A rank-2 module is phi_T = T + g tau + Delta tau^2.  Intertwiners of
bounded tau-degree are parametrized by their constant term through the
coefficient recurrence

    c_i (T^(q^i) - T) = g' c_{i-1}^q - g^(q^(i-1)) c_{i-1}
                        + Delta' c_{i-2}^(q^2) - Delta^(q^(i-2)) c_{i-2}

whose solutions are kernels of two tail linearized polynomials in c_0.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import (
    BadConstantTerm,
    CMSuspected,
    CocycleViolation,
    DivisionByZero,
    FieldMismatch,
    InternalInconsistency,
    NonCyclicGroup,
    NotRankTwo,
    RankZero,
    UnsupportedField,
)
from .fields import RatFunc
from .ideals import divisors_in_degree_order
from .skew import SkewPoly, conjugate, right_divmod, right_gcd, skew_eval

__all__ = [
    "DrinfeldModule",
    "JInvariant",
    "NonCMCertificate",
    "DescentCocycle",
    "make_module",
    "phi_a",
    "j_invariant",
    "conjugate_module",
    "endo_search",
    "certify_non_cm",
    "descend_k_model",
]


class DrinfeldModule:
    """Rank-r module given by the image of T; immutable."""

    __slots__ = ("phiT",)

    def __init__(self, phiT):
        self.phiT = phiT

    @property
    def field(self):
        return self.phiT.field

    @property
    def rank(self):
        return self.phiT.deg

    @property
    def g(self):
        self._rank2()
        return self.phiT.coeff(1)

    @property
    def delta(self):
        self._rank2()
        return self.phiT.coeff(2)

    def _rank2(self):
        if self.rank != 2:
            raise NotRankTwo(f"rank {self.rank} module where rank 2 is required")

    def __eq__(self, other):
        return isinstance(other, DrinfeldModule) and other.phiT == self.phiT

    def __hash__(self):
        return hash(("DrinfeldModule", self.phiT))

    def __repr__(self):
        return f"DrinfeldModule({self.phiT})"


def make_module(phiT):
    """Validate phi_T: constant term T, tau-degree >= 1, nonzero lead."""
    field = phiT.field
    if phiT.deg < 1:
        raise RankZero("phi_T must have tau-degree at least 1")
    if phiT.constant() != field.T():
        raise BadConstantTerm("the differential of phi_T must equal T")
    return DrinfeldModule(phiT)


def phi_a(module, a):
    """The image of a in A under the module map (Horner over phi_T)."""
    field = module.field
    if a.field is not field.fq:
        raise FieldMismatch("polynomial over a different coefficient field")
    out = SkewPoly(field, ())
    for c in reversed(a.coeffs):
        out = out * module.phiT
        if c.val:
            out = out + SkewPoly.from_scalar(field.from_poly(a.field.poly([c])))
    return out


@dataclass(frozen=True)
class JInvariant:
    value: object  # ExtFieldElem

    def __repr__(self):
        return f"j({self.value!r})"


def j_invariant(module):
    """j = g^(q+1)/Delta for rank 2; classifies modules up to K-bar isomorphism."""
    g, delta = module.g, module.delta
    q = module.field.fq.q
    return JInvariant((g ** (q + 1)) / delta)


def conjugate_module(datum, element, module):
    """The conjugate module with phi_T replaced coefficientwise."""
    return DrinfeldModule(conjugate(datum, element, module.phiT))


# -- intertwiner closure ------------------------------------------------------

def intertwiner_closure(phi, psi, bound):
    """Linearized data for {u : u phi_T = psi_T u, deg_tau u <= bound}.

    Returns (slevels, dens, tails): c_i = slevels[i](c_0)/dens[i], with the
    scaled levels kept denominator-free so the tail constraints come out
    with polynomial coefficients.  The tails' common kernel is the set of
    admissible constant terms; left scaling does not change kernels.
    """
    phi._rank2()
    psi._rank2()
    field = phi.field
    if psi.field is not field:
        raise FieldMismatch("modules over different fields")
    fq = field.fq
    g, dl = phi.g, phi.delta
    g2, dl2 = psi.g, psi.delta
    Tq = fq.poly_T()
    one = SkewPoly.from_scalar(field.one)
    tau = SkewPoly.tau(field)
    tau2 = SkewPoly.tau(field, 2)

    # Frobenius ladders g^(q^j), Delta^(q^j) and denominators
    # D_i = (T^(q^i) - T) D_{i-1}^q over A
    gpow = [g]
    dlpow = [dl]
    for _ in range(bound + 2):
        gpow.append(gpow[-1].frob())
        dlpow.append(dlpow[-1].frob())
    binom = [None]  # T^(q^i) - T
    dens = [fq.poly_one]
    for i in range(1, bound + 3):
        binom.append(Tq.frob_power(i) - Tq)
        dens.append(binom[i] * dens[i - 1].frob_power(1))

    def embed(p):
        return field.from_poly(p)

    slevels = [one]
    for i in range(1, bound + 1):
        sm1 = slevels[i - 1]
        dprev = dens[i - 1]
        acc = (tau * sm1).scale_left(g2) \
            - sm1.scale_left(gpow[i - 1] * embed(dprev.frob_power(1) // dprev))
        if i >= 2:
            sm2 = slevels[i - 2]
            e_i = embed(binom[i - 1].frob_power(1))  # D_{i-1}^q / D_{i-2}^(q^2)
            acc = acc + (tau2 * sm2).scale_left(dl2 * e_i) \
                - sm2.scale_left(
                    dlpow[i - 2] * e_i
                    * embed(dens[i - 2].frob_power(2) // dens[i - 2])
                )
        slevels.append(acc)

    sN = slevels[bound]
    dN = dens[bound]
    tail1 = (tau * sN).scale_left(g2) \
        - sN.scale_left(gpow[bound] * embed(dN.frob_power(1) // dN))
    if bound >= 1:
        sN1 = slevels[bound - 1]
        e_t = embed(binom[bound].frob_power(1))
        tail1 = tail1 + (tau2 * sN1).scale_left(dl2 * e_t) \
            - sN1.scale_left(
                dlpow[bound - 1] * e_t
                * embed(dens[bound - 1].frob_power(2) // dens[bound - 1])
            )
    tail2 = (tau2 * sN).scale_left(dl2) \
        - sN.scale_left(dlpow[bound] * embed(dN.frob_power(2) // dN))
    tails = [t for t in (tail1, tail2) if not t.is_zero()]
    if not tails:
        raise InternalInconsistency("both closure constraints vanished")
    return slevels, dens[: bound + 1], tails


def a_part_kernel_poly(field, t):
    """Subspace polynomial of {a(T) : a in A, deg a <= t} inside K.

    Built by the standard tower W <- tau W - W(v)^(q-1) W over the basis
    1, T, ..., T^t; monic of tau-degree t+1 with polynomial coefficients.
    """
    fq = field.fq
    tau = SkewPoly.tau(field)
    W = SkewPoly.from_scalar(field.one)
    v = field.one
    Tval = field.T()
    for _ in range(t + 1):
        wv = skew_eval(W, v)
        if wv.is_zero():
            raise InternalInconsistency("dependent basis in subspace polynomial")
        W = tau * W - W.scale_left(wv ** (fq.q - 1))
        v = v * Tval
    return W


def _constraint_gcd(tails):
    g = tails[0]
    for t in tails[1:]:
        g = right_gcd(g, t)
    return g


def _strip_content(a):
    """Clear coordinate denominators and divide out the coefficient content.

    Left scaling by elements of Q preserves kernels, so this is free to use
    anywhere only kernels matter.
    """
    if a.is_zero():
        return a
    field = a.field
    fq = field.fq
    den_lcm = fq.poly_one
    for c in a.coeffs:
        for r in c.coords:
            if not r.den.is_one():
                den_lcm = (den_lcm * r.den) // den_lcm.gcd(r.den)
    if not den_lcm.is_one():
        scale = RatFunc.from_poly(den_lcm)
        a = SkewPoly(field, [c.scale(scale) for c in a.coeffs])
    content = fq.poly_zero
    for c in a.coeffs:
        for r in c.coords:
            content = content.gcd(r.num)
            if content.is_one():
                return a
    inv = RatFunc.from_poly(content).inverse()
    return SkewPoly(field, [c.scale(inv) for c in a.coeffs])


def _pseudo_right_mod(a, b):
    """a mod b up to left scaling; multiplies through by the lead instead of
    dividing, so polynomial coordinates stay polynomial."""
    field = a.field
    m = b.deg
    lead = b.lead()
    lead_frobs = {0: lead}
    while a.deg >= m:
        k = a.deg - m
        if k not in lead_frobs:
            prev = max(lead_frobs)
            cur = lead_frobs[prev]
            for step in range(prev + 1, k + 1):
                cur = cur.frob()
                lead_frobs[step] = cur
        blf = lead_frobs[k]
        top = a.lead()
        a = a.scale_left(blf) - (SkewPoly(field, (field.zero,) * k + (top,)) * b)
    return a


def _kernel_dimension_pair(quotients):
    """F_q-dimension of the common kernel of the constraint quotients, by a
    fraction-free right Euclid (pseudo-division plus content stripping)."""
    if len(quotients) == 1:
        g = quotients[0]
        return g.deg - g.tau_valuation()
    a, b = quotients[0], quotients[1]
    a = _strip_content(a)
    b = _strip_content(b)
    if a.deg < b.deg:
        a, b = b, a
    while not b.is_zero():
        r = _pseudo_right_mod(a, b)
        r = _strip_content(r)
        a, b = b, r
    return a.deg - a.tau_valuation()


def build_intertwiner(slevels, dens, c0):
    """Assemble the skew polynomial with constant term c0 via the recurrence."""
    field = c0.field
    coeffs = []
    for S, D in zip(slevels, dens):
        val = skew_eval(S, c0)
        if not D.is_one():
            val = val.scale(RatFunc.from_poly(D).inverse())
        coeffs.append(val)
    return SkewPoly(field, coeffs)


class CertificateCache:
    """Memoized certify_non_cm; certificates at a higher bound cover lower ones."""

    def __init__(self):
        self._by_module = {}

    def __call__(self, module, bound):
        cached = self._by_module.get(module)
        if cached is not None and cached.covers(module, bound):
            return cached
        cert = certify_non_cm(module, bound)
        if cached is None or cached.bound < cert.bound:
            self._by_module[module] = cert
        return cert


@dataclass(frozen=True)
class NonCMCertificate:
    """Witness that a module has no endomorphisms beyond A up to a tau-degree.

    `dimension` is the F_q-dimension of the bounded intertwiner space; the
    certificate asserts it equals the count of phi_a with deg_tau <= bound.
    """

    module: DrinfeldModule
    bound: int
    dimension: int

    def covers(self, module, bound):
        return self.module == module and self.bound >= bound


def certify_non_cm(module, bound):
    """Bounded non-CM certificate via the kernel dimension of the closure.

    The intertwiner space {u : u phi_T = phi_T u, deg_tau u <= bound} always
    contains the phi_a with 2 deg a <= bound; their constant terms span the
    kernel of the subspace polynomial W.  W must right-divide every tail
    constraint, and the residual right gcd of the quotients must have a
    trivial kernel (tau-degree equal to tau-valuation) exactly when there is
    no extra endomorphism up to the bound.
    """
    module._rank2()
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    _, _, tails = intertwiner_closure(module, module, bound)
    expected = bound // 2 + 1
    W = a_part_kernel_poly(module.field, bound // 2)
    quotients = []
    for t in tails:
        quo, rem = right_divmod(t, W)
        if not rem.is_zero():
            raise InternalInconsistency(
                "A-part constants do not satisfy the closure constraints"
            )
        quotients.append(quo)
    extra = _kernel_dimension_pair([t for t in quotients if not t.is_zero()])
    if extra > 0:
        raise CMSuspected(
            f"extra endomorphisms of tau-degree <= {bound}: "
            f"dimension {expected + extra} > {expected}"
        )
    return NonCMCertificate(module, bound, expected)


def _cleared_constraint(gpoly):
    """(cleared A-coefficients after the valuation strip, the valuation)."""
    field = gpoly.field
    fq = field.fq
    val = gpoly.tau_valuation()
    coeffs = [c.as_rat() for c in gpoly.coeffs[val:]]
    den_lcm = fq.poly_one
    for c in coeffs:
        if not c.den.is_one():
            den_lcm = (den_lcm * c.den) // den_lcm.gcd(c.den)
    cleared = [c.num * (den_lcm // c.den) for c in coeffs]
    content = fq.poly_zero
    for c in cleared:
        content = content.gcd(c)
        if content.is_one():
            break
    if not content.is_one():
        cleared = [c // content for c in cleared]
    return cleared, val


def _lin_eval_is_zero(cleared, u, vpows):
    """sum_i C_i u^(q^i) v^(q^m - q^i) == 0, evaluated in A."""
    fq = u.field
    acc = fq.poly_zero
    for i, c in enumerate(cleared):
        if c.is_zero():
            continue
        acc = acc + c * u.frob_power(i) * vpows[i]
    return acc.is_zero()


def linearized_roots_in_Q(gpoly, extra=(), stop_dim=None, cancel=None):
    """All c in Q with sum g_i c^(q^i) = 0, for coefficients in Q (e = 1).

    Candidates num/den run over monic divisor pairs of the trailing and
    leading cleared coefficients (rational root theorem over the PID A);
    each F_q-line is tested once.  Roots must also kill every constraint
    in `extra`; the search stops once q^stop_dim - 1 roots are found,
    which is exhaustive when stop_dim bounds the kernel dimension.
    `cancel` is polled between candidates; cancellation returns the lines
    found so far.
    """
    field = gpoly.field
    if field.e != 1:
        raise UnsupportedField("automatic root search requires K = Q")
    fq = field.fq
    if gpoly.is_zero():
        raise DivisionByZero("root search on the zero constraint")
    cleared, val = _cleared_constraint(gpoly)
    extra_data = [_cleared_constraint(t) for t in extra if not t.is_zero()]
    trailing = cleared[0]
    leading = cleared[-1]
    m = len(cleared) - 1
    if trailing.is_zero():
        raise InternalInconsistency("valuation strip left a zero trailing term")
    target = None if stop_dim is None else fq.q ** stop_dim - 1
    units = [fq.elem_packed(u) for u in range(2, fq.q)]
    lines = []
    u_gen = divisors_in_degree_order(trailing)
    v_gen = divisors_in_degree_order(leading)
    u_cache = []
    v_cache = []

    def fetch(cache, gen, i):
        while len(cache) <= i:
            try:
                cache.append(next(gen))
            except StopIteration:
                return None
        return cache[i]

    def q_power_root(r, k):
        for _ in range(k):
            r = r.qth_root()
            if r is None:
                return None
        return r

    def satisfies_extra(root):
        for ecl, eval_ in extra_data:
            shifted = root
            for _ in range(eval_):
                shifted = shifted.frob_power(1)
            acc = fq.rat_zero
            cur = shifted
            for i, c in enumerate(ecl):
                if i > 0:
                    cur = cur.frob_power(1)
                if not c.is_zero():
                    acc = acc + RatFunc.from_poly(c) * cur
            if not acc.is_zero():
                return False
        return True

    # walk (u, v) pairs by combined degree so small fractions come first
    import heapq

    vpow_cache = {}

    def vpows_for(v):
        if v not in vpow_cache:
            vq = [v]
            for _ in range(m):
                vq.append(vq[-1].frob_power(1))
            vpow_cache[v] = [vq[m] // vq[i] for i in range(m + 1)]
        return vpow_cache[v]

    first_u = fetch(u_cache, u_gen, 0)
    first_v = fetch(v_cache, v_gen, 0)
    if first_u is None or first_v is None:
        raise InternalInconsistency("empty divisor enumeration")
    heap = [(first_u.degree + first_v.degree, 0, 0)]
    visited = {(0, 0)}
    tested = 0
    while heap:
        if cancel is not None and cancel():
            break
        _, iu, iv = heapq.heappop(heap)
        u = fetch(u_cache, u_gen, iu)
        v = fetch(v_cache, v_gen, iv)
        for niu, niv in ((iu + 1, iv), (iu, iv + 1)):
            if (niu, niv) in visited:
                continue
            nu = fetch(u_cache, u_gen, niu)
            nv = fetch(v_cache, v_gen, niv)
            if nu is not None and nv is not None:
                visited.add((niu, niv))
                heapq.heappush(heap, (nu.degree + nv.degree, niu, niv))
        tested += 1
        if tested > 2_000_000:
            raise ValueError("root candidate enumeration too large")
        if not u.gcd(v).is_one():
            continue
        if not _lin_eval_is_zero(cleared, u, vpows_for(v)):
            continue
        root = q_power_root(RatFunc.make(u, v), val)
        if root is None or not satisfies_extra(root):
            continue
        lines.append(root)
        if target is not None and (fq.q - 1) * len(lines) >= target:
            break
    roots = []
    for r in lines:
        roots.append(r)
        for xi in units:
            roots.append(RatFunc(fq, r.num.scale(xi), r.den))
    roots.sort(key=lambda r: (r.den.degree, r.num.degree, repr(r)))
    return [field.from_rat(r) for r in roots]


def intertwiner_space(phi, psi, bound, candidates=None, cancel=None):
    """All nonzero u with u phi_T = psi_T u and deg_tau u <= bound.

    Complete over K = Q; over a proper extension the caller must supply
    constant-term candidates, and only those are tested.  Roots of one tail
    constraint are enumerated and filtered through the remaining ones, so no
    gcd of the constraints is ever formed.
    """
    slevels, dens, tails = intertwiner_closure(phi, psi, bound)
    field = phi.field
    if candidates is None:
        if field.e != 1:
            raise UnsupportedField(
                "constant-term candidates are required over a proper extension"
            )
        quotients = [_strip_content(t) for t in tails]
        dim_bar = _kernel_dimension_pair(quotients)
        if phi == psi and dim_bar == bound // 2 + 1:
            # kernel equals the A-part: every admissible constant term is
            # the value of some a with 2 deg a <= bound
            fq = field.fq
            roots = []
            for packed in range(1, fq.q ** (bound // 2 + 1)):
                digits = []
                v = packed
                while v:
                    digits.append(fq.elem_packed(v % fq.q))
                    v //= fq.q
                roots.append(field.from_poly(fq.poly(digits)))
        else:
            roots = linearized_roots_in_Q(tails[0], extra=tails[1:],
                                          stop_dim=dim_bar, cancel=cancel)
    else:
        roots = []
        for c in candidates:
            if cancel is not None and cancel():
                break
            if all(skew_eval(t, c).is_zero() for t in tails):
                roots.append(c)
    out = []
    for c0 in roots:
        if c0.is_zero():
            continue
        u = build_intertwiner(slevels, dens, c0)
        if (u * phi.phiT) != (psi.phiT * u):
            raise InternalInconsistency("closure produced a non-intertwiner")
        out.append(u)
    return out


def endo_search(module, bound, candidates=None):
    """Spanning set of the endomorphisms of tau-degree <= bound.

    Always contains the phi_a with 2 deg a <= bound; anything further is
    CM evidence.
    """
    space = intertwiner_space(module, module, bound, candidates)
    if candidates is None and bound >= 2:
        if module.phiT not in space:
            raise InternalInconsistency("endomorphism search missed phi_T")
    return space


# -- Weil descent -------------------------------------------------------------

@dataclass(frozen=True)
class DescentCocycle:
    """A family nu_s of isomorphisms s(phi) -> phi with s(nu_t) nu_s = nu_st."""

    datum: object  # GaloisDatum
    values: tuple  # ((element, ExtFieldElem), ...) over all group elements

    @classmethod
    def from_map(cls, datum, mapping):
        elems = datum.elements()
        vals = []
        for e in elems:
            if tuple(e) not in mapping and e != datum.identity():
                raise CocycleViolation(f"missing cocycle value for {e}")
            vals.append((tuple(e), mapping.get(tuple(e), datum.field.one)))
        return cls(datum, tuple(vals))

    def value(self, element):
        for e, v in self.values:
            if e == tuple(element):
                return v
        raise KeyError(element)

    def validate(self, module):
        datum = self.datum
        field = datum.field
        ident = datum.identity()
        if self.value(ident) != field.one:
            raise CocycleViolation("nu_id must be 1")
        for e, nu in self.values:
            if nu.is_zero():
                raise CocycleViolation("cocycle value is zero")
            conj = conjugate_module(datum, e, module)
            lhs = SkewPoly.from_scalar(nu) * conj.phiT
            rhs = module.phiT * SkewPoly.from_scalar(nu)
            if lhs != rhs:
                raise CocycleViolation(f"nu_{e} is not an isomorphism onto phi")
        for s, nu_s in self.values:
            for t, nu_t in self.values:
                st = datum.compose(s, t)
                lhs = datum.apply(s, nu_t) * nu_s
                if lhs != self.value(st):
                    raise CocycleViolation(f"cocycle relation fails at {s}, {t}")


def descend_k_model(module, cocycle, rng=None, max_tries=64):
    """Produce a model with Galois-fixed coefficients (Hilbert 90, cyclic case).

    nu is built as the Poincare series sum_i nu_{s^i} s^i(theta) over the
    cyclic group with randomized theta, retrying while the sum vanishes.
    """
    datum = cocycle.datum
    if not datum.is_cyclic():
        raise NonCyclicGroup("constructive descent implemented for cyclic actions")
    cocycle.validate(module)
    field = datum.field
    if rng is None:
        rng = random.Random(0x90)
    order = datum.orders[0] if datum.generators else 1
    gen = datum.generator_element(datum.names[0]) if datum.generators else datum.identity()

    def poincare(theta):
        total = field.zero
        elem = datum.identity()
        for _ in range(order):
            total = total + cocycle.value(elem) * datum.apply(elem, theta)
            elem = datum.compose(elem, gen)
        return total

    b = poincare(field.one)
    tries = 0
    while b.is_zero():
        tries += 1
        if tries > max_tries:
            raise InternalInconsistency("no nonzero Poincare series element found")
        fq = field.fq
        coords = [
            fq.rat(fq.poly([fq.elem_packed(rng.randrange(fq.q)) for _ in range(2)]))
            for _ in range(field.e)
        ]
        b = poincare(field.elem(coords))
    nu = b.inverse()
    # check the constructive Hilbert-90 identity nu_s = nu^(-1) s(nu)
    elem = datum.identity()
    for _ in range(order):
        if cocycle.value(elem) != b * datum.apply(elem, nu):
            raise InternalInconsistency("Poincare element does not split the cocycle")
        elem = datum.compose(elem, gen)
    nu_sk = SkewPoly.from_scalar(nu)
    nu_inv_sk = SkewPoly.from_scalar(nu.inverse())
    psiT = nu_sk * module.phiT * nu_inv_sk
    model = make_module(psiT)
    for c in psiT.coeffs:
        if not datum.is_fixed(c):
            raise InternalInconsistency("descended coefficients are not Galois-fixed")
    return model
