"""Isogeny-tree combinatorics: reconstruct the finite subtree spanned by a
Galois orbit from its per-prime distance matrices, find the Galois-fixed
center, and run the classification pipeline producing the square-free ideal
n and the involution assignment s -> m_s.

Trees are materialized with unit edges (every lattice point of the ambient
p-isogeny tree on a spanned path is a vertex), so centers of odd-diameter
subtrees are addressable edges.  Steiner vertices are the non-label
vertices; branch points have degree >= 3 while path subdivisions have
degree 2.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field
from itertools import combinations, product as iproduct

from .errors import (
    AsymmetricMatrix,
    InternalInconsistency,
    MissingIsogeny,
    NotGInvariant,
    NotPrimitive,
    NotRealizable,
    NotTreeMetric,
    OrbitNotClosed,
)
from .ideals import IdealA, unit_ideal


class OrbitGroup:
    """Finite abelian group presented by generators acting on labels."""

    def __init__(self, generators):
        # generators: sequence of (name, order, permutation of label indices)
        self.generators = tuple(
            (name, int(order), tuple(perm)) for name, order, perm in generators
        )
        names = [g[0] for g in self.generators]
        if len(set(names)) != len(names):
            raise NotGInvariant("duplicate generator names")
        for name, order, perm in self.generators:
            if sorted(perm) != list(range(len(perm))):
                raise NotGInvariant(f"generator {name} is not a permutation")
            if order < 1:
                raise NotGInvariant(f"generator {name} has order < 1")
            if self.generators and len(perm) != len(self.generators[0][2]):
                raise NotGInvariant("permutation lengths differ")
            cur = list(range(len(perm)))
            for _ in range(order):
                cur = [perm[i] for i in cur]
            if cur != list(range(len(perm))):
                raise NotGInvariant(f"generator {name} does not have order {order}")
        for (n1, _, p1), (n2, _, p2) in combinations(self.generators, 2):
            ab = [p1[p2[i]] for i in range(len(p1))]
            ba = [p2[p1[i]] for i in range(len(p1))]
            if ab != ba:
                raise NotGInvariant(f"generators {n1} and {n2} do not commute")

    @property
    def names(self):
        return tuple(g[0] for g in self.generators)

    @property
    def orders(self):
        return tuple(g[1] for g in self.generators)

    def identity(self):
        return (0,) * len(self.generators)

    def elements(self):
        return list(iproduct(*(range(o) for o in self.orders)))

    def generator_element(self, name):
        out = [0] * len(self.generators)
        for i, (gname, order, _) in enumerate(self.generators):
            if gname == name:
                out[i] = 1 % order
                return tuple(out)
        raise KeyError(name)

    def compose(self, s, t):
        return tuple((a + b) % o for a, b, o in zip(s, t, self.orders))

    def label_permutation(self, element):
        n = len(self.generators[0][2]) if self.generators else 0
        perm = list(range(n))
        for (name, order, gperm), k in zip(self.generators, element):
            for _ in range(k % order):
                perm = [gperm[i] for i in perm]
        return tuple(perm)


@dataclass
class OrbitDatum:
    """A finite conjugate orbit with per-prime tree metrics.

    `metrics` maps each prime ideal to a symmetric integer matrix over the
    labels; `isogenies`, when present, maps ordered label-index pairs to
    concrete primitive isogenies and index 0 is the base conjugate.
    """

    labels: tuple
    group: OrbitGroup
    metrics: dict
    isogenies: dict = dc_field(default_factory=dict)
    modules: tuple = ()
    validated: bool = False
    support: tuple = ()

    def metric(self, p):
        return self.metrics[p]


def validate_orbit(datum):
    """Check symmetry, G-invariance, the triangle and four-point conditions.

    Returns the datum with `validated` set and the support (primes with a
    nonzero matrix) recorded.
    """
    k = len(datum.labels)
    if datum.group.generators and len(datum.group.generators[0][2]) != k:
        raise NotGInvariant("permutation length differs from the label count")
    support = []
    for p, mat in datum.metrics.items():
        if len(mat) != k or any(len(row) != k for row in mat):
            raise AsymmetricMatrix("matrix shape does not match labels")
        for i in range(k):
            if mat[i][i] != 0:
                raise AsymmetricMatrix("nonzero diagonal")
            for j in range(k):
                if mat[i][j] != mat[j][i]:
                    raise AsymmetricMatrix("matrix is not symmetric")
                if mat[i][j] < 0:
                    raise NotTreeMetric("negative distance")
        for name in datum.group.names:
            perm = datum.group.label_permutation(
                datum.group.generator_element(name)
            )
            for i in range(k):
                for j in range(k):
                    if mat[perm[i]][perm[j]] != mat[i][j]:
                        raise NotGInvariant(
                            f"metric at {p} is not invariant under {name}"
                        )
        for i, j, l in combinations(range(k), 3):
            if mat[i][j] > mat[i][l] + mat[l][j]:
                raise NotTreeMetric("triangle inequality fails")
        for quad in combinations(range(k), 4):
            a, b, c, d = quad
            s1 = mat[a][b] + mat[c][d]
            s2 = mat[a][c] + mat[b][d]
            s3 = mat[a][d] + mat[b][c]
            top = sorted((s1, s2, s3))
            if top[1] != top[2]:
                raise NotTreeMetric("four-point condition fails")
        if any(mat[i][j] for i in range(k) for j in range(k)):
            support.append(p)
    datum.support = tuple(sorted(support, key=lambda q: (q.degree, repr(q))))
    datum.validated = True
    return datum


@dataclass
class SubTree:
    """Unit-edge realization of one per-prime metric.

    vertices 0..n-1; `class_vertex[c]` is where label class c sits;
    `label_class` maps label index -> class index; `actions` maps each
    generator name to the induced vertex permutation.
    """

    adj: list
    class_vertex: list
    label_class: list
    classes: list
    actions: dict
    max_degree: int

    @property
    def n_vertices(self):
        return len(self.adj)

    def bfs(self, start):
        dist = [-1] * len(self.adj)
        dist[start] = 0
        dq = deque((start,))
        while dq:
            v = dq.popleft()
            dv = dist[v]
            for w in self.adj[v]:
                if dist[w] < 0:
                    dist[w] = dv + 1
                    dq.append(w)
        return dist

    def degree(self, v):
        return len(self.adj[v])

    def leaves(self):
        return [v for v in range(len(self.adj)) if len(self.adj[v]) <= 1]


@dataclass(frozen=True)
class Center:
    kind: str          # "vertex" | "edge"
    vertices: tuple    # one vertex, or the unordered pair


def _zero_classes(mat, k):
    """Group labels into classes of pairwise distance zero."""
    cls = [-1] * k
    classes = []
    for i in range(k):
        if cls[i] >= 0:
            continue
        idx = len(classes)
        members = [i]
        cls[i] = idx
        for j in range(i + 1, k):
            if cls[j] < 0 and mat[i][j] == 0:
                cls[j] = idx
                members.append(j)
        classes.append(members)
    # distance-zero grouping must be consistent
    for members in classes:
        base = members[0]
        for m in members[1:]:
            if any(mat[base][x] != mat[m][x] for x in range(k)):
                raise NotTreeMetric("zero-distance labels with differing rows")
    return cls, classes


def reconstruct_subtree(datum, p):
    """Realize the metric at p as the minimal unit-edge subtree.

    Iterative leaf insertion: each new class attaches at the unique vertex
    consistent with all previously placed classes, growing a chain of unit
    edges; half-integer split points or inconsistent distances raise
    NotTreeMetric.
    """
    if not datum.validated:
        raise NotTreeMetric("orbit datum must be validated first")
    mat = datum.metrics[p]
    k = len(datum.labels)
    label_class, classes = _zero_classes(mat, k)
    reps = [members[0] for members in classes]
    D = [[mat[a][b] for b in reps] for a in reps]
    nc = len(reps)

    adj = [[]]
    class_vertex = [0]
    dists = {0: [0]}  # class index -> dist list over vertices

    def bfs_from(v):
        dist = [-1] * len(adj)
        dist[v] = 0
        dq = deque((v,))
        while dq:
            x = dq.popleft()
            dx = dist[x]
            for w in adj[x]:
                if dist[w] < 0:
                    dist[w] = dx + 1
                    dq.append(w)
        return dist

    for c in range(1, nc):
        placed = list(range(c))
        u0 = 0
        best_alpha, best_u = 0, u0
        for u in placed:
            num = D[c][u0] + D[u0][u] - D[c][u]
            if num < 0 or num % 2:
                raise NotTreeMetric("split point is not a lattice point")
            alpha = num // 2
            if alpha > best_alpha:
                best_alpha, best_u = alpha, u
        # w sits on the path(u0, best_u) at distance best_alpha from u0
        d0 = dists[u0]
        du = dists[best_u]
        w = -1
        span = D[u0][best_u]
        for v in range(len(adj)):
            if d0[v] == best_alpha and du[v] == span - best_alpha:
                w = v
                break
        if w < 0:
            raise NotTreeMetric("no attachment vertex for the split point")
        h = D[c][u0] - best_alpha
        if h < 0:
            raise NotTreeMetric("negative attachment height")
        for u in placed:
            if dists[u][w] + h != D[c][u]:
                raise NotTreeMetric("attachment violates a placed distance")
        cur = w
        for step in range(h):
            adj.append([])
            new = len(adj) - 1
            adj[cur].append(new)
            adj[new].append(cur)
            for u in placed:
                dists[u].append(dists[u][cur] + 1)
            cur = new
        class_vertex.append(cur)
        dists[c] = bfs_from(cur)

    # minimality: every terminal vertex carries a class
    class_set = set(class_vertex)
    for v in range(len(adj)):
        if len(adj[v]) <= 1 and v not in class_set and len(adj) > 1:
            raise InternalInconsistency("terminal Steiner vertex produced")

    # induced group action by distance-vector rigidity
    vec_index = {}
    for v in range(len(adj)):
        vec_index[tuple(dists[c][v] for c in range(nc))] = v
    actions = {}
    for name in datum.group.names:
        perm = datum.group.label_permutation(datum.group.generator_element(name))
        cls_perm = [None] * nc
        for i in range(k):
            src = label_class[i]
            dst = label_class[perm[i]]
            if cls_perm[src] is None:
                cls_perm[src] = dst
            elif cls_perm[src] != dst:
                raise NotGInvariant("action does not respect zero classes")
        vperm = []
        for v in range(len(adj)):
            image_vec = [0] * nc
            for cidx in range(nc):
                image_vec[cls_perm[cidx]] = dists[cidx][v]
            w = vec_index.get(tuple(image_vec))
            if w is None:
                raise InternalInconsistency(
                    "distance-preserving extension of the action failed"
                )
            vperm.append(w)
        if sorted(vperm) != list(range(len(adj))):
            raise InternalInconsistency("induced action is not a permutation")
        for v in range(len(adj)):
            im = set(vperm[w] for w in adj[v])
            if im != set(adj[vperm[v]]):
                raise InternalInconsistency("induced action breaks adjacency")
        actions[name] = tuple(vperm)

    max_degree = max((len(a) for a in adj), default=0)
    return SubTree(
        adj=adj,
        class_vertex=class_vertex,
        label_class=label_class,
        classes=classes,
        actions=actions,
        max_degree=max_degree,
    )


def tree_center(tree, path_cap=1000):
    """Midpoint of the diameter: a vertex for even diameter, else an edge.

    All diameter endpoint pairs (up to the cap) are checked to give the
    same midpoint; the paper's uniqueness is verified, not assumed.
    """
    n = tree.n_vertices
    if n == 1:
        return Center("vertex", (0,))
    dist = [tree.bfs(v) for v in range(n)]
    diameter = max(max(row) for row in dist)
    centers = set()
    pairs = 0
    for x in range(n):
        for y in range(x + 1, n):
            if dist[x][y] != diameter:
                continue
            pairs += 1
            if pairs > path_cap:
                break
            half = diameter // 2
            if diameter % 2 == 0:
                mids = [v for v in range(n)
                        if dist[x][v] == half and dist[y][v] == half]
                if len(mids) != 1:
                    raise InternalInconsistency("midpoint vertex not unique")
                centers.add(("vertex", (mids[0],)))
            else:
                a = [v for v in range(n)
                     if dist[x][v] == half and dist[y][v] == half + 1]
                b = [v for v in range(n)
                     if dist[x][v] == half + 1 and dist[y][v] == half]
                if len(a) != 1 or len(b) != 1 or b[0] not in tree.adj[a[0]]:
                    raise InternalInconsistency("midpoint edge not unique")
                centers.add(("edge", tuple(sorted((a[0], b[0])))))
        if pairs > path_cap:
            break
    if len(centers) != 1:
        raise InternalInconsistency("diameter paths disagree on the center")
    kind, verts = centers.pop()
    return Center(kind, verts)


@dataclass
class ClassificationResult:
    n: IdealA
    centers: dict            # prime -> Center
    trees: dict              # prime -> SubTree
    psi_descriptor: dict     # prime -> vertex
    psi_prime_descriptor: dict
    m_elements: dict         # group element tuple -> IdealA
    m_generators: dict       # generator name -> IdealA

    def m_of(self, element):
        return self.m_elements[tuple(element)]


def _center_fixed(tree, center, name):
    act = tree.actions[name]
    if center.kind == "vertex":
        return act[center.vertices[0]] == center.vertices[0]
    a, b = center.vertices
    return {act[a], act[b]} == {a, b}


def classify(datum, fq=None):
    """The main pipeline: n = product of primes whose center is an edge,
    the glued point descriptors, and the swap assignment m_s."""
    if not datum.validated:
        validate_orbit(datum)
    if fq is None:
        if datum.modules:
            fq = datum.modules[0].field.fq
        elif datum.metrics:
            fq = next(iter(datum.metrics)).field
        else:
            raise InternalInconsistency("empty metric family needs a field hint")
    n = unit_ideal(fq)
    centers = {}
    trees = {}
    psi = {}
    psi_prime = {}
    for p in datum.support:
        tree = reconstruct_subtree(datum, p)
        center = tree_center(tree)
        for name in datum.group.names:
            if not _center_fixed(tree, center, name):
                raise InternalInconsistency(
                    "center is not fixed by the induced action"
                )
        trees[p] = tree
        centers[p] = center
        if center.kind == "edge":
            n = n * p
            a, b = center.vertices
            psi[p], psi_prime[p] = _orient_edge(tree, datum, a, b)
        else:
            psi[p] = center.vertices[0]
            psi_prime[p] = center.vertices[0]
    m_elements = {}
    for element in datum.group.elements():
        m = unit_ideal(fq)
        for p in datum.support:
            center = centers[p]
            if center.kind != "edge":
                continue
            a, b = center.vertices
            # compose the generator actions per the element's exponents
            act = list(range(trees[p].n_vertices))
            for name, k in zip(datum.group.names, element):
                gen_act = trees[p].actions[name]
                for _ in range(k):
                    act = [gen_act[v] for v in act]
            if act[a] == b:
                m = m * p
            elif act[a] != a:
                raise InternalInconsistency("center edge not stabilized")
        m_elements[element] = m
    m_generators = {
        name: m_elements[datum.group.generator_element(name)]
        for name in datum.group.names
    }
    result = ClassificationResult(
        n=n,
        centers=centers,
        trees=trees,
        psi_descriptor=psi,
        psi_prime_descriptor=psi_prime,
        m_elements=m_elements,
        m_generators=m_generators,
    )
    if m_elements and m_elements[datum.group.identity()] != unit_ideal(fq):
        raise InternalInconsistency("m_id is not the unit ideal")
    return result


def _orient_edge(tree, datum, a, b):
    """Deterministic psi/psi' choice: order endpoints by their distance
    vectors to classes listed in sorted-label order."""
    order = sorted(range(len(tree.classes)),
                   key=lambda c: str(datum.labels[tree.classes[c][0]]))
    da = tree.bfs(a)
    db = tree.bfs(b)
    va = tuple(da[tree.class_vertex[c]] for c in order)
    vb = tuple(db[tree.class_vertex[c]] for c in order)
    return (a, b) if va <= vb else (b, a)


def minimality_check(datum, result):
    """For each p | n: no vertex of the subtree is fixed by the full group
    (so any ideal satisfying the parametrization is divisible by p).

    Violations are reported, not raised; a non-empty fixed set would mean
    an internal inconsistency between the center and the action.
    """
    report = {}
    for p in datum.support:
        if not p.divides(result.n):
            continue
        tree = result.trees[p]
        fixed = []
        for v in range(tree.n_vertices):
            if all(tree.actions[name][v] == v for name in datum.group.names):
                fixed.append(v)
        report[p] = {
            "fixed_vertices": fixed,
            "ok": not fixed,
            "violation": "InternalInconsistency" if fixed else None,
        }
    return report


def orbit_from_isogenies(conjugates, isogenies, galois, rng=None):
    """Build an OrbitDatum from concrete modules and primitive isogenies.

    `isogenies` maps ordered index pairs (i, j) to isogenies conjugates[i]
    -> conjugates[j]; metric entries are v_p of the degrees.  The group
    permutation is derived by matching j-invariants of conjugated modules.
    """
    from .drinfeld import conjugate_module, j_invariant

    k = len(conjugates)
    jvals = [j_invariant(m).value for m in conjugates]
    if len(set(jvals)) != k:
        raise OrbitNotClosed("conjugates are not pairwise non-isomorphic")
    perms = []
    for name in galois.names:
        elem = galois.generator_element(name)
        perm = []
        for i, m in enumerate(conjugates):
            jv = j_invariant(conjugate_module(galois, elem, m)).value
            try:
                perm.append(jvals.index(jv))
            except ValueError:
                raise OrbitNotClosed(
                    f"conjugate of label {i} under {name} is not in the orbit"
                )
        perms.append((name, galois.orders[galois.names.index(name)], perm))
    group = OrbitGroup(perms)

    degs = {}
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            iso = isogenies.get((i, j))
            rev = isogenies.get((j, i))
            if iso is None and rev is None:
                raise MissingIsogeny(f"no isogeny for the pair ({i}, {j})")
            use = iso if iso is not None else rev
            if not use.is_cyclic():
                raise NotPrimitive(f"isogeny for pair ({i}, {j}) is not primitive")
            degs[(i, j)] = use.degree_ideal()
    support = set()
    for d in degs.values():
        for prime, _ in d.factors(rng):
            support.add(prime)
    metrics = {}
    for p in sorted(support, key=lambda q: (q.degree, repr(q))):
        mat = [[0] * k for _ in range(k)]
        for (i, j), d in degs.items():
            mat[i][j] = d.valuation(p)
        for i in range(k):
            for j in range(k):
                if mat[i][j] != mat[j][i]:
                    raise AsymmetricMatrix(
                        "forward and reverse isogeny degrees disagree"
                    )
        metrics[p] = tuple(tuple(row) for row in mat)
    datum = OrbitDatum(
        labels=tuple(range(k)),
        group=group,
        metrics=metrics,
        isogenies=dict(isogenies),
        modules=tuple(conjugates),
    )
    return validate_orbit(datum)


# -- materialization -----------------------------------------------------------

def _primitive_reduce(iso, certificate_factory):
    """Strip phi_a right factors until the isogeny is primitive."""
    from .drinfeld import phi_a
    from .isogeny import verify_isogeny
    from .skew import right_divmod

    mu = iso.mu
    src = iso.source
    changed = True
    while changed:
        changed = False
        cert = certificate_factory(src, mu.deg)
        probe = verify_isogeny(src, iso.target, mu, cert)
        deg = probe.degree_ideal()
        for prime, _ in deg.factors():
            quo, rem = right_divmod(mu, phi_a(src, prime.gen))
            if rem.is_zero() and quo.deg >= 0 and not quo.is_zero():
                mu = quo
                changed = True
                break
    cert = certificate_factory(src, mu.deg)
    from .isogeny import verify_isogeny as vf
    return vf(src, iso.target, mu, cert)


def materialize_center(datum, result, certificate_factory=None):
    """Realize the glued descriptor as a module plus a cyclic n-isogeny.

    Walks concrete isogeny paths: the p-part of base->label legs projected
    through `project_p`, unit steps from `factor_prime_power`, and glues one
    prime at a time.  Raises NotRealizable when a needed concrete leg is
    missing.
    """
    from .drinfeld import certify_non_cm, phi_a
    from .isogeny import (
        compose as iso_compose,
        dual as iso_dual,
        factor_prime_power,
        project_p,
        verify_isogeny,
    )
    from .skew import SkewPoly, right_divmod

    if not datum.modules:
        raise NotRealizable("orbit datum carries no concrete modules")
    base = datum.modules[0]
    cert_cache = {}

    def factory(module, bound):
        key = module
        cached = cert_cache.get(key)
        if cached is not None and cached.covers(module, bound):
            return cached
        if certificate_factory is not None:
            cert = certificate_factory(module, bound)
        else:
            cert = certify_non_cm(module, bound)
        cert_cache[key] = cert
        return cert

    def leg(i):
        """Concrete primitive isogeny base -> conjugate i."""
        if i == 0:
            one = SkewPoly.from_scalar(base.field.one)
            return verify_isogeny(base, base, one, factory(base, 0))
        iso = datum.isogenies.get((0, i))
        if iso is None:
            rev = datum.isogenies.get((i, 0))
            if rev is None:
                raise NotRealizable(f"no concrete leg between the base and {i}")
            iso = iso_dual(rev, target_certificate=factory(base, rev.mu.deg))
        if iso.certificate is None:
            iso = verify_isogeny(iso.source, iso.target, iso.mu,
                                 factory(iso.source, iso.mu.deg))
        return iso

    def vertex_module(p, tree, vertex):
        """Module whose pi_p sits at the given subtree vertex, and the
        primitive p-power isogeny from pi_p(base) reaching it."""
        # locate a label-class pair whose path contains the vertex
        nc = len(tree.classes)
        dv = tree.bfs(vertex)
        for cx in range(nc):
            for cy in range(nc):
                vx, vy = tree.class_vertex[cx], tree.class_vertex[cy]
                dxy = dv[vx] + dv[vy]
                dd = tree.bfs(vx)[vy]
                if dxy != dd:
                    continue
                x = tree.classes[cx][0]
                y = tree.classes[cy][0]
                try:
                    leg_x = leg(x)
                    leg_y = leg(y)
                except NotRealizable:
                    continue
                return _walk_to_vertex(
                    p, leg_x, leg_y, dv[vx], factory
                )
        raise NotRealizable("center vertex lies outside concrete paths")

    support = datum.support
    trees, centers = result.trees, result.centers

    def glue(descriptor):
        cur_iso = leg(0)  # scalar: base -> base
        for p in support:
            tree = trees[p]
            vertex = descriptor[p]
            target_mod, to_vertex = vertex_module(p, tree, vertex)
            # transport to the current glued module
            omega = iso_compose(
                to_vertex,
                iso_dual(cur_iso, target_certificate=factory(cur_iso.target,
                                                             cur_iso.mu.deg)),
                certificate=factory(cur_iso.target,
                                    to_vertex.mu.deg + cur_iso.mu.deg),
            )
            omega = _primitive_reduce(omega, factory)
            _, p_part, _ = project_p(omega, p, certificate_factory=factory)
            cur_iso = iso_compose(
                p_part, cur_iso,
                certificate=factory(cur_iso.source,
                                    p_part.mu.deg + cur_iso.mu.deg),
            )
            cur_iso = _primitive_reduce(cur_iso, factory)
        return cur_iso

    iso_psi = glue(result.psi_descriptor)
    iso_psi_prime = glue(result.psi_prime_descriptor)
    psi = iso_psi.target
    bridge = iso_compose(
        iso_psi_prime,
        iso_dual(iso_psi, target_certificate=factory(psi, iso_psi.mu.deg)),
        certificate=factory(psi, iso_psi.mu.deg + iso_psi_prime.mu.deg),
    )
    bridge = _primitive_reduce(bridge, factory)
    if bridge.degree_ideal() != result.n:
        raise InternalInconsistency("materialized isogeny degree differs from n")
    if not bridge.is_cyclic():
        raise InternalInconsistency("materialized isogeny is not cyclic")
    return psi, bridge


def _walk_to_vertex(p, leg_x, leg_y, steps, factory):
    """Module at distance `steps` from pi_p(x) toward pi_p(y), with the
    primitive p-power isogeny from the base reaching it."""
    from .isogeny import (
        compose as iso_compose,
        dual as iso_dual,
        factor_prime_power,
        project_p,
    )

    _, px, _ = project_p(leg_x, p, certificate_factory=factory)
    if steps == 0:
        return px.target, px
    _, py, _ = project_p(leg_y, p, certificate_factory=factory)
    # primitive p-power X -> Y through the base
    rho = iso_compose(
        py,
        iso_dual(px, target_certificate=factory(px.target, px.mu.deg)),
        certificate=factory(px.target, px.mu.deg + py.mu.deg),
    )
    rho = _primitive_reduce(rho, factory)
    chain = factor_prime_power(rho, certificate_factory=factory)
    if steps > len(chain):
        raise InternalInconsistency("walk longer than the p-power chain")
    walked = chain[0]
    for link in chain[1:steps]:
        walked = iso_compose(
            link, walked,
            certificate=factory(walked.source, walked.mu.deg + link.mu.deg),
        )
    reach = iso_compose(
        walked, px,
        certificate=factory(px.source, px.mu.deg + walked.mu.deg),
    )
    reach = _primitive_reduce(reach, factory)
    return reach.target, reach
