"""Batch command-line front end.

One self-describing JSON job document declares the field tower, the
objects (modules, isogenies, orbits), and parameters; each subcommand runs
one library operation and prints a result JSON on stdout.  Exit codes:
0 success, 1 parse/schema error, 2 domain error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor

from .errors import AlgebraError, EvenCharacteristic, ParseError
from .extfield import ExtField, GaloisDatum
from .fields import Fq
from .drinfeld import CertificateCache, conjugate_module, j_invariant, make_module
from .ideals import IdealA
from .isogeny import (
    compose,
    degree,
    dual,
    find_isogenies,
    project_p,
    verify_isogeny,
)
from .moduli import ModuliPoint, star_orbit
from .skew import SkewPoly
from .textform import (
    ext_to_text,
    ideal_to_text,
    parse_ext,
    parse_ideal,
    parse_skew,
    skew_to_text,
)
from .trees import (
    OrbitDatum,
    OrbitGroup,
    classify,
    minimality_check,
    orbit_from_isogenies,
    validate_orbit,
)


class JobContext:
    """Field tower, declared objects, and helpers built from a document."""

    def __init__(self, doc, seed=0, certify_bound=None):
        if not isinstance(doc, dict):
            raise ParseError("job document must be a JSON object")
        fspec = doc.get("field")
        if not isinstance(fspec, dict) or "p" not in fspec:
            raise ParseError("field specification with p is required")
        self.fq = Fq(int(fspec["p"]), fspec.get("fq_modulus"))
        minpoly = fspec.get("ext_minpoly")
        if minpoly is not None:
            coeffs = [self._rat(c) for c in minpoly]
            self.field = ExtField(self.fq, coeffs)
        else:
            self.field = ExtField(self.fq)
        gens = []
        for g in fspec.get("galois", []) or []:
            image = self._ext(g["image"])
            gens.append((g["name"], int(g["order"]), image))
        self.galois = GaloisDatum(self.field, gens)
        self.rng = random.Random(seed)
        self.certify_bound = certify_bound
        self.certs = CertificateCache()
        self.modules = {}
        for name, text in (doc.get("modules") or {}).items():
            self.modules[name] = make_module(parse_skew(text, self.field))
        self.isogenies = {}
        for name, spec in (doc.get("isogenies") or {}).items():
            src = self._module(spec["source"])
            tgt = self._module(spec["target"])
            mu = parse_skew(spec["mu"], self.field)
            bound = self.certify_bound if self.certify_bound is not None \
                else max(mu.deg, 0)
            cert = self.certs(src, bound)
            self.isogenies[name] = verify_isogeny(src, tgt, mu, cert)
        self.orbits = {}
        for name, spec in (doc.get("orbits") or {}).items():
            self.orbits[name] = self._orbit(spec)
        self.params = doc.get("params") or {}

    def _rat(self, text):
        from .textform import parse_rat

        return parse_rat(text, self.fq)

    def _ext(self, spec):
        if isinstance(spec, list):
            return self.field.elem([self._rat(c) for c in spec])
        return parse_ext(spec, self.field)

    def _module(self, name):
        if name not in self.modules:
            raise ParseError(f"unknown module {name!r}")
        return self.modules[name]

    def _isogeny(self, name):
        if name not in self.isogenies:
            raise ParseError(f"unknown isogeny {name!r}")
        return self.isogenies[name]

    def _orbit_obj(self, name):
        if name not in self.orbits:
            raise ParseError(f"unknown orbit {name!r}")
        return self.orbits[name]

    def _orbit(self, spec):
        labels = tuple(spec["labels"])
        gens = [
            (g["name"], int(g["order"]), tuple(g["permutation"]))
            for g in spec.get("generators", [])
        ]
        metrics = {}
        for ptext, mat in (spec.get("metrics") or {}).items():
            p = parse_ideal(ptext, self.fq)
            metrics[p] = tuple(tuple(int(x) for x in row) for row in mat)
        isogenies = {}
        for key, iso_name in (spec.get("isogenies") or {}).items():
            i, j = (int(x) for x in key.split(","))
            isogenies[(i, j)] = self._isogeny(iso_name)
        modules = tuple(self._module(m) for m in spec.get("modules", []))
        datum = OrbitDatum(
            labels=labels,
            group=OrbitGroup(gens),
            metrics=metrics,
            isogenies=isogenies,
            modules=modules,
        )
        return validate_orbit(datum)

    def param_isogeny(self):
        name = self.params.get("isogeny")
        if name is None:
            if len(self.isogenies) == 1:
                return next(iter(self.isogenies.values()))
            raise ParseError("params.isogeny is required")
        return self._isogeny(name)

    def param_module(self):
        name = self.params.get("module")
        if name is None:
            if len(self.modules) == 1:
                return next(iter(self.modules.values()))
            raise ParseError("params.module is required")
        return self._module(name)

    def param_orbit(self):
        name = self.params.get("orbit")
        if name is None:
            if len(self.orbits) == 1:
                return next(iter(self.orbits.values()))
            raise ParseError("params.orbit is required")
        return self._orbit_obj(name)


def _iso_json(iso):
    deg_txt = n1_txt = n2_txt = None
    if iso.certificate is not None and iso.certificate.covers(iso.source,
                                                              iso.mu.deg):
        deg, n1, n2 = iso.degree_parts()
        deg_txt, n1_txt, n2_txt = (ideal_to_text(deg), ideal_to_text(n1),
                                   ideal_to_text(n2))
    return {
        "source": skew_to_text(iso.source.phiT),
        "target": skew_to_text(iso.target.phiT),
        "mu": skew_to_text(iso.mu),
        "degree": deg_txt,
        "n1": n1_txt,
        "n2": n2_txt,
        "certificate-bound": iso.certificate_bound,
    }


def cmd_verify(ctx):
    iso = ctx.param_isogeny()
    return _iso_json(iso)


def cmd_degree(ctx):
    iso = ctx.param_isogeny()
    deg, n1, n2 = degree(iso)
    return {
        "degree": ideal_to_text(deg),
        "n1": ideal_to_text(n1),
        "n2": ideal_to_text(n2),
        "cyclic": n2.is_unit(),
    }


def cmd_dual(ctx):
    iso = ctx.param_isogeny()
    bound = iso.mu.deg
    cert = ctx.certs(iso.target, bound)
    return _iso_json(dual(iso, target_certificate=cert))


def cmd_j(ctx):
    mod = ctx.param_module()
    return {"j": ext_to_text(j_invariant(mod).value)}


def cmd_find(ctx):
    src = ctx._module(ctx.params.get("source") or ctx.params.get("module"))
    tgt = ctx._module(ctx.params.get("target"))
    bound = int(ctx.params.get("bound", 1))
    cands = ctx.params.get("candidates")
    candidates = None
    if cands is not None:
        candidates = [ctx._ext(c) for c in cands]
    cert = ctx.certs(src, bound)
    isos = find_isogenies(src, tgt, bound, candidates=candidates,
                          certificate=cert)
    return {
        "count": len(isos),
        "complete": candidates is None,
        "isogenies": [_iso_json(i) for i in isos],
    }


def cmd_project(ctx):
    iso = ctx.param_isogeny()
    p = parse_ideal(ctx.params["prime"], ctx.fq)
    mid, p_part, coprime = project_p(iso, p, certificate_factory=ctx.certs)
    return {
        "pi_p_target": skew_to_text(mid.phiT),
        "p_part": _iso_json(p_part),
        "coprime_part": _iso_json(coprime),
    }


def cmd_classify(ctx):
    datum = ctx.param_orbit()
    result = classify(datum, fq=ctx.fq)
    report = minimality_check(datum, result)
    return {
        "n": ideal_to_text(result.n),
        "centers": {
            ideal_to_text(p): {"kind": c.kind, "vertices": list(c.vertices)}
            for p, c in result.centers.items()
        },
        "m": {name: ideal_to_text(v)
              for name, v in result.m_generators.items()},
        "minimality": {ideal_to_text(p): rep["ok"] for p, rep in report.items()},
    }


def cmd_star_orbit(ctx):
    iso = ctx.param_isogeny()
    point = ModuliPoint(iso).validate()
    galois = ctx.galois if ctx.galois.generators else None
    orbit = star_orbit(point, galois=galois, certificate_factory=ctx.certs)
    return {
        "points": [
            {"w": ideal_to_text(w.m),
             "point": {"n": ideal_to_text(pt.level), "iso": _iso_json(pt.iso)}}
            for w, pt in orbit.translates
        ],
        "m_map": {k: ideal_to_text(v) for k, v in orbit.m_map.items()},
        "D_x": [ideal_to_text(m) for m in sorted(
            (w.m for w in orbit.decomposition), key=ideal_to_text)],
        "cm_suspected": orbit.cm_suspected,
    }


def cmd_example35(q, jobs=1):
    """Build the worked example over F_q, run every check, and classify."""
    p, d = _prime_power(q)
    if p == 2:
        raise EvenCharacteristic("the example requires odd characteristic")
    fq = Fq(p, _find_modulus(p, d))
    field0 = ExtField(fq)
    Tp1 = fq.rat(fq.poly([1, 1]))
    K = ExtField(fq, [-Tp1, fq.rat_zero, fq.rat_one])
    alpha = K.gen()
    one = K.one
    mu = SkewPoly(K, (alpha + one, -one))
    eta = SkewPoly(K, (alpha - one, one))
    phi = make_module(mu * eta)
    galois = GaloisDatum(K, [("s", 2, -alpha)])
    s = galois.generator_element("s")
    sphi = conjugate_module(galois, s, phi)
    certs = CertificateCache()
    iso_mu = verify_isogeny(sphi, phi, mu, certs(sphi, 2))
    iso_eta = verify_isogeny(phi, sphi, eta, certs(phi, 2))
    checks = []

    def check(name, fn):
        checks.append((name, fn))

    check("mu intertwines s(phi) -> phi",
          lambda: mu * sphi.phiT == phi.phiT * mu)
    check("s(phi_T) equals eta*mu",
          lambda: sphi.phiT == eta * mu)

    def j_check():
        jv = j_invariant(phi).value
        two = K.from_poly(fq.poly([2]))
        expect = -((two + alpha - alpha.frob()) ** (fq.q + 1))
        return jv == expect and not jv.in_base()

    check("j = -(2+a-a^q)^(q+1), not in Q", j_check)

    T_ideal = IdealA(fq.poly([0, 1]))

    def degree_check():
        dmu = iso_mu.degree_ideal()
        deta = iso_eta.degree_ideal()
        return dmu == T_ideal and deta == T_ideal

    check("deg mu = deg eta = (T)", degree_check)

    def dual_check():
        d = dual(iso_mu, target_certificate=certs(phi, 1))
        for c in range(1, fq.q):
            scalar = K.from_poly(fq.poly([fq.elem_packed(c)]))
            if d.mu.scale_left(scalar) == eta:
                return True
        return d.mu == eta

    check("dual(mu) = eta up to F_q^x", dual_check)

    def classify_check():
        datum = orbit_from_isogenies([phi, sphi],
                                     {(1, 0): iso_mu, (0, 1): iso_eta},
                                     galois)
        result = classify(datum)
        rep = minimality_check(datum, result)
        ok = result.n == T_ideal
        ok = ok and result.m_generators["s"] == T_ideal
        ok = ok and all(v["ok"] for v in rep.values())
        return ok

    check("classification: n = (T), m_s = (T)", classify_check)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(lambda c: bool(c[1]()), checks))
    else:
        outcomes = [bool(fn()) for _, fn in checks]
    return {
        "q": q,
        "checks": [{"name": name, "pass": ok}
                   for (name, _), ok in zip(checks, outcomes)],
        "n": ideal_to_text(T_ideal),
        "m": {"s": ideal_to_text(T_ideal)},
        "all_pass": all(outcomes),
    }


def _prime_power(q):
    for p in range(2, q + 1):
        if q % p == 0:
            d = 0
            n = q
            while n % p == 0:
                n //= p
                d += 1
            if n != 1:
                raise ParseError(f"{q} is not a prime power")
            return p, d
    raise ParseError(f"{q} is not a prime power")


def _find_modulus(p, d):
    if d == 1:
        return None
    from .ideals import is_irreducible

    fp = Fq(p)
    # deterministic scan over monic candidates
    total = p ** d
    for packed in range(total):
        coeffs = []
        v = packed
        for _ in range(d):
            coeffs.append(v % p)
            v //= p
        cand = coeffs + [1]
        probe = fp.poly(cand)
        if is_irreducible(probe):
            return cand
    raise ParseError(f"no irreducible modulus of degree {d} over F_{p}")


_COMMANDS = {
    "verify": cmd_verify,
    "degree": cmd_degree,
    "dual": cmd_dual,
    "j": cmd_j,
    "find": cmd_find,
    "project": cmd_project,
    "classify": cmd_classify,
    "star-orbit": cmd_star_orbit,
}


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="dforge",
        description="Exact isogeny algebra for rank-two Drinfeld modules",
    )
    parser.add_argument("command",
                        choices=sorted(_COMMANDS) + ["example35"],
                        help="operation to run")
    parser.add_argument("--in", dest="infile", help="job document (JSON)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for the factorization randomness source")
    parser.add_argument("--certify-bound", type=int, default=None,
                        help="non-CM certification bound for declared isogenies")
    parser.add_argument("--jobs", type=int, default=1,
                        help="parallel workers for independent checks")
    parser.add_argument("--q", type=int, default=3,
                        help="field size for the example35 command")
    args = parser.parse_args(argv)

    try:
        if args.command == "example35":
            result = cmd_example35(args.q, jobs=max(args.jobs, 1))
        else:
            if not args.infile:
                raise ParseError("--in is required for this command")
            try:
                with open(args.infile) as handle:
                    doc = json.load(handle)
            except OSError as exc:
                raise ParseError(f"cannot read job document: {exc}")
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc}")
            ctx = JobContext(doc, seed=args.seed,
                             certify_bound=args.certify_bound)
            result = _COMMANDS[args.command](ctx)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except (KeyError, TypeError, ValueError) as exc:
        print(f"parse error: malformed document ({exc})", file=sys.stderr)
        return 1
    except AlgebraError as exc:
        print(f"domain error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    json.dump(result, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
