"""Isogenies as skew polynomials: verification, annihilator linear algebra,
degree ideals, duals, p-parts, prime-power factorization, bounded search,
and normalization over K(lambda^(1/n)).

Kernels are never materialized; every kernel statement is a right
divisibility or right gcd in K{tau}.  The kernel of mu is A/n1 + A/n2 with
n2 | n1, n1 the annihilator ideal, and deg(n1 n2) = deg_tau mu.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np

from .errors import (
    ChainMismatch,
    DivisionInexact,
    FieldMismatch,
    Inseparable,
    InternalInconsistency,
    MissingCertificate,
    NotCyclic,
    NotIntertwining,
    NotPrimePower,
    NotPrimitive,
    NotScalarConjugate,
    StructureError,
)
from .fields import FqElem
from .ideals import IdealA, divisors_of_degree, unit_ideal
from .drinfeld import intertwiner_space, make_module, phi_a
from .skew import SkewPoly, conjugate, right_divmod, right_gcd

__all__ = [
    "Isogeny",
    "verify_isogeny",
    "annihilator",
    "degree",
    "is_cyclic",
    "is_primitive",
    "dual",
    "compose",
    "delta_p",
    "project_p",
    "factor_prime_power",
    "find_isogenies",
    "normalize_isogeny",
    "target_of",
]


class Isogeny:
    """A validated triple (source, target, mu) with cached kernel data."""

    def __init__(self, source, target, mu, certificate=None):
        self.source = source
        self.target = target
        self.mu = mu
        self.certificate = certificate

    @property
    def field(self):
        return self.mu.field

    @property
    def certificate_bound(self):
        return None if self.certificate is None else self.certificate.bound

    def require_certificate(self, bound=None):
        need = self.mu.deg if bound is None else bound
        if self.certificate is None or not self.certificate.covers(self.source, need):
            raise MissingCertificate(
                f"operation needs the source certified non-CM to bound {need}"
            )

    @cached_property
    def annihilator_ideal(self):
        return _annihilator(self)

    def degree_parts(self):
        self.require_certificate()
        return self._degree_parts

    @cached_property
    def _degree_parts(self):
        return _degree_parts(self)

    def degree_ideal(self):
        return self.degree_parts()[0]

    def is_cyclic(self):
        return self.degree_parts()[2].is_unit()

    def is_primitive(self):
        # cyclic and primitive agree for rank-two non-CM isogenies
        return self.is_cyclic()

    def is_scalar(self):
        return self.mu.deg == 0

    def __eq__(self, other):
        return (
            isinstance(other, Isogeny)
            and other.source == self.source
            and other.target == self.target
            and other.mu == self.mu
        )

    def __hash__(self):
        return hash(("Isogeny", self.source, self.target, self.mu))

    def __repr__(self):
        return f"Isogeny({self.mu} : {self.source.phiT} -> {self.target.phiT})"


def verify_isogeny(phi, psi, mu, certificate=None):
    """Check mu phi_T = psi_T mu and separability, returning the Isogeny."""
    if mu.is_zero():
        raise NotIntertwining("the zero map is not an isogeny")
    if mu.field is not phi.field or psi.field is not phi.field:
        raise FieldMismatch("isogeny data over different fields")
    if mu.constant().is_zero():
        raise Inseparable("constant term of mu vanishes; impossible in "
                          "generic characteristic")
    if mu * phi.phiT != psi.phiT * mu:
        raise NotIntertwining("mu phi_T != psi_T mu")
    return Isogeny(phi, psi, mu, certificate)


def target_of(phi, mu):
    """The module psi with mu: phi -> psi, i.e. psi_T = mu phi_T mu^(-1).

    Exists exactly when Ker mu is an A-submodule; otherwise the right
    division is inexact.
    """
    quo, rem = right_divmod(mu * phi.phiT, mu)
    if not rem.is_zero():
        raise DivisionInexact("kernel of mu is not T-stable")
    return make_module(quo)


# -- annihilator linear algebra ------------------------------------------------

def _fq_row_from_skew(r, m, e, fq, den_lcm, width):
    """Flatten a remainder into an F_q vector over (tau-slot, coord, T-deg)."""
    row = np.zeros(m * e * width, dtype=np.int64)
    for j in range(min(len(r.coeffs), m)):
        c = r.coeffs[j]
        for k in range(e):
            rat = c.coords[k]
            if rat.is_zero():
                continue
            scaled = rat.num * (den_lcm // rat.den)
            arr = scaled.array
            base = (j * e + k) * width
            row[base: base + len(arr)] = arr
    return row


def _min_monic_dependence(rows, fq):
    """First index n with rows[n] in the span of rows[:n], plus coefficients.

    Returns (n, combo) with rows[n] = sum combo[i] rows[i]; Gaussian
    elimination over F_q with an augmented identity block.
    """
    pivots = []  # (col, row, aug)
    for n, raw in enumerate(rows):
        row = raw.copy()
        aug = np.zeros(len(rows), dtype=np.int64)
        aug[n] = 1
        for col, prow, paug in pivots:
            c = int(row[col])
            if c:
                neg = fq.sneg(c)
                row = fq.digit_add(row, fq._scalar_mul_nocheck(prow, neg)) \
                    if fq.d > 1 else (row + neg * prow) % fq.p
                aug = fq.digit_add(aug, fq._scalar_mul_nocheck(paug, neg)) \
                    if fq.d > 1 else (aug + neg * paug) % fq.p
        nz = np.nonzero(row)[0]
        if len(nz) == 0:
            # sum_i aug[i] rows[i] = 0 with aug[n] = 1: the monic coefficients
            return n, [int(aug[i]) for i in range(n)]
        col = int(nz[0])
        inv = fq.sinv(int(row[col]))
        row = fq._scalar_mul_nocheck(row, inv)
        aug = fq._scalar_mul_nocheck(aug, inv)
        pivots.append((col, row, aug))
    return None, None


def _annihilator(iso):
    """Minimal monic a with mu right-dividing phi_a; the ideal n1.

    Remainders of phi_{T^i} mod mu are flattened over the monomial basis of
    T and the power basis of K, and the minimal monic F_q-dependence is read
    off by incremental elimination.
    """
    phi = iso.source
    field = iso.field
    fq = field.fq
    mu = iso.mu
    m = mu.deg
    if m == 0:
        return unit_ideal(fq)
    rems = []
    cur = SkewPoly.from_scalar(field.one)  # phi_{T^0}
    rems.append(right_divmod(cur, mu)[1])
    for _ in range(m):
        cur = cur * phi.phiT
        rems.append(right_divmod(cur, mu)[1])
    # common denominator and width for the F_q expansion
    den_lcm = fq.poly_one
    maxdeg = 0
    for r in rems:
        for c in r.coeffs:
            for rat in c.coords:
                if not rat.den.is_one():
                    den_lcm = (den_lcm * rat.den) // den_lcm.gcd(rat.den)
    for r in rems:
        for c in r.coeffs:
            for rat in c.coords:
                if not rat.is_zero():
                    d = rat.num.degree + (den_lcm.degree - rat.den.degree)
                    maxdeg = max(maxdeg, d)
    width = maxdeg + 1
    rows = [_fq_row_from_skew(r, m, field.e, fq, den_lcm, width) for r in rems]
    n, combo = _min_monic_dependence(rows, fq)
    if n is None:
        raise InternalInconsistency(
            "no annihilator of degree <= deg_tau mu; not a rank-2 isogeny kernel"
        )
    gen = fq.poly([FqElem(fq, c) for c in combo] + [fq.one])
    # exactness check: phi_gen must be right-divisible by mu
    quo, rem = right_divmod(phi_a(phi, gen), mu)
    if not rem.is_zero():
        raise InternalInconsistency("annihilator candidate fails divisibility")
    return IdealA(gen)


def annihilator(iso):
    return iso.annihilator_ideal


def _degree_parts(iso):
    """(deg, n1, n2): n1 the annihilator, n2 | n1 with the complementary
    degree and phi_{gen n2} right-dividing mu."""
    n1 = iso.annihilator_ideal
    m = iso.mu.deg
    k = m - n1.degree
    if k < 0:
        raise InternalInconsistency("annihilator degree exceeds deg_tau mu")
    fq = iso.field.fq
    if k == 0:
        n2 = unit_ideal(fq)
        return n1 * n2, n1, n2
    candidates = [d for d in divisors_of_degree(n1, k) if d.divides(n1)]
    matches = []
    for cand in candidates:
        _, rem = right_divmod(iso.mu, phi_a(iso.source, cand.gen))
        if rem.is_zero():
            matches.append(cand)
    if not matches:
        raise StructureError(
            "no complementary kernel ideal; CM input or rank != 2"
        )
    if len(matches) > 1:
        raise InternalInconsistency("complementary kernel ideal is not unique")
    n2 = matches[0]
    return n1 * n2, n1, n2


def degree(iso):
    """(deg, n1, n2) with Ker mu = A/n1 + A/n2 and #(A/deg) = q^(deg_tau mu)."""
    return iso.degree_parts()


def is_cyclic(iso):
    return iso.is_cyclic()


def is_primitive(iso):
    return iso.is_primitive()


def dual(iso, target_certificate=None):
    """The unique eta with eta mu = phi_{a_n} and mu eta = psi_{a_n}."""
    deg, _, _ = iso.degree_parts()
    a_n = deg.gen
    quo, rem = right_divmod(phi_a(iso.source, a_n), iso.mu)
    if not rem.is_zero():
        raise DivisionInexact("phi_{a_n} is not right-divisible by mu")
    eta = quo
    if eta * iso.mu != phi_a(iso.source, a_n):
        raise InternalInconsistency("dual does not reproduce phi_{a_n}")
    if iso.mu * eta != phi_a(iso.target, a_n):
        raise InternalInconsistency("dual does not reproduce psi_{a_n}")
    return verify_isogeny(iso.target, iso.source, eta, target_certificate)


def compose(g, f, certificate=None):
    """The composite isogeny g o f; degree multiplicativity checked when
    the certificates at hand allow computing all three degrees."""
    if f.target != g.source:
        raise ChainMismatch("target of the first leg differs from the source "
                            "of the second")
    cert = certificate if certificate is not None else f.certificate
    out = verify_isogeny(f.source, g.target, g.mu * f.mu, cert)
    if (
        out.certificate is not None
        and out.certificate.covers(out.source, out.mu.deg)
        and f.certificate is not None
        and f.certificate.covers(f.source, f.mu.deg)
        and g.certificate is not None
        and g.certificate.covers(g.source, g.mu.deg)
    ):
        if out.degree_ideal() != f.degree_ideal() * g.degree_ideal():
            raise InternalInconsistency("degree multiplicativity failed")
    return out


def delta_p(iso, p):
    """v_p of the degree of a primitive isogeny (eq. delta); the local
    distance between the modules in the p-isogeny tree."""
    if not iso.is_primitive():
        raise NotPrimitive("delta_p needs a primitive isogeny")
    deg = iso.degree_ideal()
    return deg.valuation(p)


def project_p(iso, p, certificate_factory=None):
    """Split a primitive cyclic isogeny as (prime-to-p) o (p-part).

    Returns (pi_p_target, p_part, coprime_part); the p-part is the right
    gcd of mu with phi_{a_p^k} for k = deg_tau mu, which always bounds the
    p-primary kernel.
    """
    if not iso.is_cyclic():
        raise NotCyclic("project_p needs a primitive cyclic isogeny")
    phi = iso.source
    k = max(iso.mu.deg, 1)
    apk = p.gen
    for _ in range(k - 1):
        apk = apk * p.gen
    mu_p = right_gcd(iso.mu, phi_a(phi, apk))
    if mu_p.deg == 0:
        # p does not divide the degree
        one_iso = verify_isogeny(phi, phi, SkewPoly.from_scalar(phi.field.one),
                                 iso.certificate)
        return phi, one_iso, verify_isogeny(phi, iso.target, iso.mu,
                                            iso.certificate)
    mid = target_of(phi, mu_p)
    quo, rem = right_divmod(iso.mu, mu_p)
    if not rem.is_zero():
        raise InternalInconsistency("p-part does not right-divide mu")
    cert_mid = certificate_factory(mid, quo.deg) if certificate_factory else None
    p_part = verify_isogeny(phi, mid, mu_p, iso.certificate)
    coprime = verify_isogeny(mid, iso.target, quo, cert_mid)
    if iso.certificate is not None and iso.certificate.covers(phi, iso.mu.deg):
        dp = p_part.degree_ideal()
        if dp.valuation(p) * p.degree != dp.degree:
            raise InternalInconsistency("p-part degree is not a p-power")
    return mid, p_part, coprime


def factor_prime_power(iso, certificate_factory=None):
    """Factor a cyclic p^n-isogeny into n p-isogenies, unique up to units.

    The composite of the returned factors equals mu exactly; each step
    extracts the unique cyclic p-kernel as a right gcd with phi_{a_p}.
    """
    deg, n1, n2 = iso.degree_parts()
    if not n2.is_unit():
        raise NotPrimePower("isogeny is not cyclic")
    facs = deg.factors()
    if len(facs) > 1:
        raise NotPrimePower("degree has more than one prime factor")
    if not facs:
        return []
    p, n = facs[0]
    out = []
    cur_mu = iso.mu
    cur_src = iso.source
    cert = iso.certificate
    for step in range(n):
        if step == n - 1:
            link = cur_mu
            tgt = iso.target
        else:
            link = right_gcd(cur_mu, phi_a(cur_src, p.gen))
            tgt = target_of(cur_src, link)
            quo, rem = right_divmod(cur_mu, link)
            if not rem.is_zero():
                raise InternalInconsistency("p-kernel does not divide mu")
            cur_mu = quo
        cert_here = cert if cur_src == iso.source else (
            certificate_factory(cur_src, link.deg) if certificate_factory else None
        )
        out.append(verify_isogeny(cur_src, tgt, link, cert_here))
        cur_src = tgt
    comp = out[0].mu
    for nxt in out[1:]:
        comp = nxt.mu * comp
    if comp != iso.mu:
        raise InternalInconsistency("prime-power factors do not recompose")
    return out


def find_isogenies(phi, psi, bound, candidates=None, certificate=None,
                   cancel=None):
    """All intertwiners of tau-degree <= bound as validated isogenies.

    Complete over K = Q; candidate-restricted over proper extensions (the
    caller supplies constant terms).  `cancel` is polled between constant
    term candidates and truncates the search cooperatively.
    """
    space = intertwiner_space(phi, psi, bound, candidates, cancel=cancel)
    return [verify_isogeny(phi, psi, u, certificate) for u in space]


def normalize_isogeny(iso, galois):
    """(n, lambda, mu_normalized) from the scalar-conjugacy character.

    For an isogeny between models with Galois-fixed coefficients, each
    generator s satisfies s(mu) = xi_s mu with xi_s in F_q^x; n is the
    order of the character, lambda = c_0^n is fixed, and mu = c_0 *
    mu_normalized with mu_normalized fixed and of constant term 1.
    """
    iso.require_certificate()
    if not iso.is_primitive():
        raise NotPrimitive("normalization needs a primitive isogeny")
    field = iso.field
    fq = field.fq
    for mod in (iso.source, iso.target):
        for c in mod.phiT.coeffs:
            if not galois.is_fixed(c):
                raise NotScalarConjugate(
                    "source and target must have Galois-fixed coefficients"
                )
    mu = iso.mu
    c0 = mu.constant()
    xi = {}
    for name in galois.names:
        elem = galois.generator_element(name)
        smu = conjugate(galois, elem, mu)
        ratio = None
        for a, b in zip(smu.coeffs, mu.coeffs):
            if b.is_zero():
                if not a.is_zero():
                    raise NotScalarConjugate("conjugate has different support")
                continue
            r = a / b
            if not r.is_fq_constant():
                raise NotScalarConjugate("conjugate is not an F_q^x multiple")
            if ratio is None:
                ratio = r
            elif ratio != r:
                raise NotScalarConjugate("conjugate ratio is not constant")
        xi[name] = ratio.as_fq() if ratio is not None else fq.one
    # order of the character; generator relations must hold
    n = 1
    for name, order in zip(galois.names, galois.orders):
        val = xi[name]
        if val ** order != fq.one:
            raise InternalInconsistency(
                f"character value at {name} violates the generator order"
            )
        k = 1
        acc = val
        while acc != fq.one:
            acc = acc * val
            k += 1
        n = (n * k) // _gcd_int(n, k)
    lam = c0 ** n
    if not galois.is_fixed(lam):
        raise InternalInconsistency("lambda = c0^n is not Galois-fixed")
    mu_norm = mu.scale_left(c0.inverse())
    for c in mu_norm.coeffs:
        if not galois.is_fixed(c):
            raise InternalInconsistency("normalized coefficients not fixed")
    return n, lam, mu_norm


def _gcd_int(a, b):
    while b:
        a, b = b, a % b
    return a
