"""Moduli-level bookkeeping for cyclic n-isogeny classes: the Atkin-Lehner
group W(n), its action through the m-part/dual diagram, the forgetful pair
Theta, W(n)-orbits, and polyquadratic descent data.

Points are never curve points: a point is an equivalence class of cyclic
n-isogenies fingerprinted by its Theta pair (j of source, j of target).
Equality of points is decided by Theta pairs plus degree, which is faithful
on the non-CM locus.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import (
    AmbientMismatch,
    DegreeMismatch,
    EvenCharacteristicUnsupported,
    InternalInconsistency,
    NotCyclic,
    NotGStable,
    NotAHomomorphism,
)
from .drinfeld import certify_non_cm, conjugate_module, j_invariant, phi_a
from .ideals import IdealA, unit_ideal
from .isogeny import (
    Isogeny,
    compose as iso_compose,
    dual as iso_dual,
    target_of,
    verify_isogeny,
)
from .skew import lclm, right_divmod, right_gcd

__all__ = [
    "ALElement",
    "ModuliPoint",
    "StarOrbit",
    "al_compose",
    "al_apply",
    "theta",
    "star_orbit",
    "descent_data",
    "is_central",
]


@dataclass(frozen=True)
class ALElement:
    """w_m for m | n with gcd(m, n/m) = 1; identity is m = (1)."""

    m: IdealA
    n: IdealA

    def __post_init__(self):
        if not self.m.divides(self.n):
            raise DegreeMismatch("m must divide the ambient level n")
        comp = self.n.quotient(self.m)
        if not self.m.gcd(comp).is_unit():
            raise DegreeMismatch("m must be coprime to n/m")

    def is_identity(self):
        return self.m.is_unit()

    def __repr__(self):
        return f"w_{self.m}"


def al_group(n):
    """All of W(n); order 2^(number of prime factors).

    An element takes the full p-power of n for each prime in its support,
    keeping m coprime to n/m.
    """
    blocks = []
    for p, e in n.factors():
        gen = p.gen
        for _ in range(e - 1):
            gen = gen * p.gen
        blocks.append(IdealA(gen))
    out = []
    for r in range(len(blocks) + 1):
        for sub in combinations(blocks, r):
            m = unit_ideal(n.field)
            for b in sub:
                m = m * b
            out.append(ALElement(m, n))
    return out


def al_compose(w1, w2):
    """w_{m1} w_{m2} = w_{m3} with m3 = m1 m2 / (m1, m2)^2."""
    if w1.n != w2.n:
        raise AmbientMismatch("Atkin-Lehner elements over different levels")
    g = w1.m.gcd(w2.m)
    m3 = (w1.m * w2.m).quotient(g * g)
    return ALElement(m3, w1.n)


@dataclass(frozen=True)
class ModuliPoint:
    """A K-bar equivalence class [mu: phi -> psi] of cyclic n-isogenies."""

    iso: Isogeny

    @property
    def level(self):
        return self.iso.degree_ideal()

    def theta_pair(self):
        return theta(self)

    def validate(self):
        if not self.iso.is_cyclic():
            raise NotCyclic("a moduli point needs a cyclic representative")
        return self


def theta(point):
    """(j(source), j(target)); the target class is theta of w_n x."""
    return (
        j_invariant(point.iso.source).value,
        j_invariant(point.iso.target).value,
    )


def points_equal(x, y):
    """Theta-pair plus degree equality; faithful on non-CM points."""
    return x.level == y.level and x.theta_pair() == y.theta_pair()


def al_apply(w, x, certificate_factory=None):
    """The involution action on a point, through the m-part diagram.

    mu splits as mu_{n'} mu_m with mu_m = rgcd(mu, phi_{a_m}); the image
    point starts at the m-part target and is represented by the isogeny
    whose kernel is mu_m(phi[m] + Lambda_{n'}), realized as the exact
    quotient of lclm(phi_{a_m}, mu) by mu_m.  The full involution lands on
    the dual representative.
    """
    iso = x.iso
    n = iso.degree_ideal()
    if w.n != n:
        raise DegreeMismatch("involution level differs from the point level")
    if not iso.is_cyclic():
        raise NotCyclic("Atkin-Lehner action needs a cyclic representative")
    if w.is_identity():
        return x
    phi = iso.source

    def factory(module, bound):
        if certificate_factory is not None:
            return certificate_factory(module, bound)
        return certify_non_cm(module, bound)

    a_m = w.m.gen
    mu_m = right_gcd(iso.mu, phi_a(phi, a_m))
    phi_m = target_of(phi, mu_m)
    big = lclm(phi_a(phi, a_m), iso.mu)
    eta, rem = right_divmod(big, mu_m)
    if not rem.is_zero():
        raise InternalInconsistency("kernel union is not divisible by the m-part")
    psi_m = target_of(phi_m, eta)
    cert = factory(phi_m, eta.deg)
    out = verify_isogeny(phi_m, psi_m, eta, cert)
    if out.degree_ideal() != n:
        raise InternalInconsistency("Atkin-Lehner image has the wrong degree")
    if not out.is_cyclic():
        raise InternalInconsistency("Atkin-Lehner image is not cyclic")
    return ModuliPoint(out)


def diagram_closure_check(w, x, certificate_factory=None):
    """lambda eta_m = dual(mu_m) from diagram (4.1), checked literally."""
    iso = x.iso
    phi = iso.source
    a_m = w.m.gen
    mu_m = right_gcd(iso.mu, phi_a(phi, a_m))
    if mu_m.deg == 0:
        return True
    phi_m = target_of(phi, mu_m)
    y = al_apply(w, x, certificate_factory)
    eta = y.iso.mu
    eta_m = right_gcd(eta, phi_a(phi_m, a_m))
    # dual of mu_m: phi_m -> phi
    def factory(module, bound):
        if certificate_factory is not None:
            return certificate_factory(module, bound)
        return certify_non_cm(module, bound)

    mu_m_iso = verify_isogeny(phi, phi_m, mu_m, factory(phi, mu_m.deg))
    hat = iso_dual(mu_m_iso, target_certificate=factory(phi_m, mu_m.deg))
    # hat.mu = lambda * eta_m for a scalar lambda in K^x
    lam = None
    for a, b in zip(hat.mu.coeffs, eta_m.coeffs):
        if b.is_zero():
            if not a.is_zero():
                return False
            continue
        r = a / b
        if lam is None:
            lam = r
        elif lam != r:
            return False
    return lam is not None and not lam.is_zero()


@dataclass
class StarOrbit:
    """The full W(n)-translate list of a point, with optional Galois data."""

    base: ModuliPoint
    translates: list          # (ALElement, ModuliPoint)
    m_map: dict               # generator name -> IdealA (when galois given)
    decomposition: list       # ALElement fixing the base through Theta
    cm_suspected: bool

    @property
    def size(self):
        seen = []
        for _, pt in self.translates:
            key = (pt.level, pt.theta_pair())
            if key not in seen:
                seen.append(key)
        return len(seen)


def star_orbit(x, galois=None, certificate_factory=None):
    """All W(n)-translates; with Galois data, also the w_{m_s} matching
    each generator conjugate through Theta pairs."""
    iso = x.iso
    fq = iso.field.fq
    if fq.q % 2 == 0:
        raise EvenCharacteristicUnsupported(
            "decomposition groups can exceed order 2 for even q"
        )
    n = iso.degree_ideal()
    group = al_group(n)
    translates = [(w, al_apply(w, x, certificate_factory)) for w in group]
    base_key = (x.level, x.theta_pair())
    decomposition = [
        w for w, pt in translates
        if not w.is_identity() and (pt.level, pt.theta_pair()) == base_key
    ]
    cm_suspected = bool(decomposition)
    m_map = {}
    if galois is not None:
        for name in galois.names:
            elem = galois.generator_element(name)
            s_source = conjugate_module(galois, elem, iso.source)
            s_target = conjugate_module(galois, elem, iso.target)
            s_pair = (j_invariant(s_source).value, j_invariant(s_target).value)
            match = None
            for w, pt in translates:
                if pt.theta_pair() == s_pair:
                    match = w
                    break
            if match is None:
                raise NotGStable(
                    f"conjugate by {name} is not a W(n)-translate of the point"
                )
            m_map[name] = match.m
    return StarOrbit(
        base=x,
        translates=translates,
        m_map=m_map,
        decomposition=decomposition,
        cm_suspected=cm_suspected,
    )


def descent_data(orbit, galois):
    """The homomorphism G -> W(n)/D_x and the polyquadratic degree bound.

    The bound is 2^rank of the image; relations of the presented group are
    checked against the Atkin-Lehner composition law modulo D_x.
    """
    if not orbit.m_map:
        raise NotGStable("orbit carries no Galois matching data")
    n = orbit.base.level
    d_x = {w.m for w in orbit.decomposition}

    def mod_dx_equal(m1, m2):
        # equal in W(n)/D_x: w_{m1} w_{m2} in D_x
        g = m1.gcd(m2)
        prod = (m1 * m2).quotient(g * g)
        return prod.is_unit() or prod in d_x

    # homomorphism check on all generator pairs and orders
    for n1, o1 in zip(galois.names, galois.orders):
        m1 = orbit.m_map[n1]
        acc = unit_ideal(n.field)
        for _ in range(o1):
            g = acc.gcd(m1)
            acc = (acc * m1).quotient(g * g)
        if not (acc.is_unit() or acc in d_x):
            raise NotAHomomorphism(
                f"generator {n1} violates its order in W(n)/D_x"
            )
    # rank of the image in the F_2 vector space of prime supports
    primes = [p for p, _ in n.factors()]
    basis = []
    for name in galois.names:
        vec = [1 if p.divides(orbit.m_map[name]) else 0 for p in primes]
        for b in basis:
            if vec == b:
                break
        else:
            if any(vec):
                # reduce against the collected basis over F_2
                v = vec[:]
                for b in basis:
                    lead = next((i for i, x in enumerate(b) if x), None)
                    if lead is not None and v[lead]:
                        v = [(a + c) % 2 for a, c in zip(v, b)]
                if any(v):
                    basis.append(v)
    rank = len(basis)
    return dict(orbit.m_map), 2 ** rank


def is_central(conjugate_isogenies, n):
    """True when every conjugate's primitive isogeny degree divides n."""
    for iso in conjugate_isogenies:
        if not iso.degree_ideal().divides(n):
            return False
    return True
