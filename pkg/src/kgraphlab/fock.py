"""Creation operators on the path-space basis of a colored graph.

The basis is a single shared vacuum symbol plus every path of nonzero shape.
Operators are immutable expression trees evaluated lazily, one basis vector
at a time, with integer coefficients throughout.  Nothing is ever truncated:
a shape bound only selects which vectors a checker visits, never how an
operator acts, so every reported identity is exact on the checked vectors.

Conventions match the path calculus in kgraph: a path runs from its source
(right end) to its target (left end), and compose(p, q) requires
p.source == q.target.  Left creation prepends, right creation appends.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError
from .kgraph import KGraph, Path
from .shapes import Shape, shapes_below


class _Vacuum:
    """The shared vacuum basis symbol.  Not vertex-indexed; compare by identity."""

    __slots__ = ()

    def __repr__(self):
        return "<vacuum>"


VACUUM = _Vacuum()


def fock_basis(graph: KGraph, bound: Shape) -> tuple:
    """The vacuum plus every nonzero-shape path with shape <= bound."""
    bound = bound if isinstance(bound, Shape) else Shape(*bound)
    out = [VACUUM]
    for n in shapes_below(bound):
        if not n.is_zero:
            out.extend(graph.enumerate_paths(n))
    return tuple(out)


# -- integer vectors -----------------------------------------------------------
#
# A vector is a plain dict {basis element: nonzero int}.  The empty dict is the
# zero vector.  Helpers keep entries clean so dict equality is vector equality.


def _accumulate(dst: dict, src: dict, scale: int = 1):
    for b, c in src.items():
        new = dst.get(b, 0) + scale * c
        if new:
            dst[b] = new
        else:
            dst.pop(b, None)


class FockOperator:
    """Base class for operator expression trees.

    Subclasses implement act(b) -> dict for a single basis element b (a Path
    of nonzero shape, or VACUUM) and adjoint() -> FockOperator.  Everything
    else (linear extension, algebra sugar) lives here.
    """

    __slots__ = ()

    def act(self, b) -> dict:
        raise NotImplementedError

    def adjoint(self) -> "FockOperator":
        raise NotImplementedError

    def apply_vector(self, vec: dict) -> dict:
        out: dict = {}
        for b, c in vec.items():
            _accumulate(out, self.act(b), c)
        return out

    def __mul__(self, other):
        if isinstance(other, FockOperator):
            return Product((self, other))
        return NotImplemented

    def __rmul__(self, k):
        if isinstance(k, int):
            return Scaled(k, self)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, FockOperator):
            return Sum((self, other))
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, FockOperator):
            return Sum((self, Scaled(-1, other)))
        return NotImplemented

    def __neg__(self):
        return Scaled(-1, self)


class Identity(FockOperator):
    __slots__ = ()

    def act(self, b):
        return {b: 1}

    def adjoint(self):
        return self

    def __repr__(self):
        return "1"


class Zero(FockOperator):
    __slots__ = ()

    def act(self, b):
        return {}

    def adjoint(self):
        return self

    def __repr__(self):
        return "0"


class Scaled(FockOperator):
    __slots__ = ("scale", "inner")

    def __init__(self, scale, inner):
        if not isinstance(scale, int):
            raise ConfigError(f"operator scalars must be int, got {scale!r}")
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "inner", inner)

    def __setattr__(self, name, value):
        raise AttributeError("operators are immutable")

    def act(self, b):
        out: dict = {}
        _accumulate(out, self.inner.act(b), self.scale)
        return out

    def adjoint(self):
        return Scaled(self.scale, self.inner.adjoint())

    def __repr__(self):
        return f"{self.scale}*{self.inner!r}"


class Sum(FockOperator):
    __slots__ = ("terms",)

    def __init__(self, terms):
        object.__setattr__(self, "terms", tuple(terms))

    def __setattr__(self, name, value):
        raise AttributeError("operators are immutable")

    def act(self, b):
        out: dict = {}
        for t in self.terms:
            _accumulate(out, t.act(b))
        return out

    def adjoint(self):
        return Sum(t.adjoint() for t in self.terms)

    def __repr__(self):
        return "(" + " + ".join(repr(t) for t in self.terms) + ")"


class Product(FockOperator):
    """Composition; factors apply right to left, like written products."""

    __slots__ = ("factors",)

    def __init__(self, factors):
        object.__setattr__(self, "factors", tuple(factors))

    def __setattr__(self, name, value):
        raise AttributeError("operators are immutable")

    def act(self, b):
        vec = {b: 1}
        for f in reversed(self.factors):
            if not vec:
                break
            vec = f.apply_vector(vec)
        return vec

    def adjoint(self):
        return Product(f.adjoint() for f in reversed(self.factors))

    def __repr__(self):
        return "(" + "*".join(repr(f) for f in self.factors) + ")"


class LeftCreation(FockOperator):
    """Prepend a fixed path.  A vertex path acts as the matching span projection."""

    __slots__ = ("graph", "path")

    def __init__(self, graph, path):
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "path", path)

    def __setattr__(self, name, value):
        raise AttributeError("operators are immutable")

    def act(self, b):
        p = self.path
        if b is VACUUM:
            # a vertex creation is a projection and fixes the vacuum
            return {VACUUM: 1} if p.is_vertex else {p: 1}
        if p.source != b.target:
            return {}
        return {self.graph.compose(p, b): 1}

    def adjoint(self):
        return LeftAnnihilation(self.graph, self.path)

    def __repr__(self):
        return f"l+{self.path.display()}"


class LeftAnnihilation(FockOperator):
    """Strip a fixed left factor; zero where the factorization disagrees."""

    __slots__ = ("graph", "path")

    def __init__(self, graph, path):
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "path", path)

    def __setattr__(self, name, value):
        raise AttributeError("operators are immutable")

    def act(self, b):
        p = self.path
        if b is VACUUM:
            return {VACUUM: 1} if p.is_vertex else {}
        if not p.shape <= b.shape:
            return {}
        head, tail = self.graph.factorize(b, p.shape)
        if head != p:
            return {}
        return {VACUUM: 1} if tail.is_vertex else {tail: 1}

    def adjoint(self):
        return LeftCreation(self.graph, self.path)

    def __repr__(self):
        return f"l-{self.path.display()}"


class RightCreation(FockOperator):
    """Append a fixed path.  A vertex path acts as the matching span projection."""

    __slots__ = ("graph", "path")

    def __init__(self, graph, path):
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "path", path)

    def __setattr__(self, name, value):
        raise AttributeError("operators are immutable")

    def act(self, b):
        p = self.path
        if b is VACUUM:
            return {VACUUM: 1} if p.is_vertex else {p: 1}
        if b.source != p.target:
            return {}
        return {self.graph.compose(b, p): 1}

    def adjoint(self):
        return RightAnnihilation(self.graph, self.path)

    def __repr__(self):
        return f"r+{self.path.display()}"


class RightAnnihilation(FockOperator):
    """Strip a fixed right factor; zero where the factorization disagrees."""

    __slots__ = ("graph", "path")

    def __init__(self, graph, path):
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "path", path)

    def __setattr__(self, name, value):
        raise AttributeError("operators are immutable")

    def act(self, b):
        p = self.path
        if b is VACUUM:
            return {VACUUM: 1} if p.is_vertex else {}
        if not p.shape <= b.shape:
            return {}
        head, tail = self.graph.factorize(b, b.shape - p.shape)
        if tail != p:
            return {}
        return {VACUUM: 1} if head.is_vertex else {head: 1}

    def adjoint(self):
        return RightCreation(self.graph, self.path)

    def __repr__(self):
        return f"r-{self.path.display()}"


class SpanProjection(FockOperator):
    """Diagonal projection onto the basis vectors satisfying a predicate.

    with_vacuum controls whether the vacuum belongs to the projected span;
    the predicate itself only ever sees nonzero-shape paths.
    """

    __slots__ = ("label", "predicate", "with_vacuum")

    def __init__(self, label, predicate, with_vacuum):
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "predicate", predicate)
        object.__setattr__(self, "with_vacuum", bool(with_vacuum))

    def __setattr__(self, name, value):
        raise AttributeError("operators are immutable")

    def act(self, b):
        if b is VACUUM:
            return {VACUUM: 1} if self.with_vacuum else {}
        return {b: 1} if self.predicate(b) else {}

    def adjoint(self):
        return self

    def __repr__(self):
        return f"proj[{self.label}]"


# -- operator builders ---------------------------------------------------------


def left_creation(graph: KGraph, path: Path) -> FockOperator:
    if path.graph is not graph:
        raise ConfigError("path belongs to a different graph")
    return LeftCreation(graph, path)


def right_creation(graph: KGraph, path: Path) -> FockOperator:
    if path.graph is not graph:
        raise ConfigError("path belongs to a different graph")
    return RightCreation(graph, path)


def _check_vertex(graph, a):
    if a not in graph.vertices:
        raise ConfigError(f"unknown vertex {a!r}")


def _check_color(graph, j):
    if not 1 <= j <= graph.rank:
        raise ConfigError(f"color {j} out of range 1..{graph.rank}")


def target_projection(graph: KGraph, a) -> FockOperator:
    """Vacuum plus every path whose target is the given vertex."""
    _check_vertex(graph, a)
    return SpanProjection(f"target={a}", lambda b: b.target == a, with_vacuum=True)


def source_projection(graph: KGraph, a) -> FockOperator:
    """Vacuum plus every path whose source is the given vertex."""
    _check_vertex(graph, a)
    return SpanProjection(f"source={a}", lambda b: b.source == a, with_vacuum=True)


def target_projection_level(graph: KGraph, a, j: int) -> FockOperator:
    """Like target_projection but restricted to paths with no color-j edge."""
    _check_vertex(graph, a)
    _check_color(graph, j)
    return SpanProjection(
        f"target={a},level{j}=0",
        lambda b: b.target == a and b.shape.coord(j) == 0,
        with_vacuum=True,
    )


def source_projection_level(graph: KGraph, a, j: int) -> FockOperator:
    _check_vertex(graph, a)
    _check_color(graph, j)
    return SpanProjection(
        f"source={a},level{j}=0",
        lambda b: b.source == a and b.shape.coord(j) == 0,
        with_vacuum=True,
    )


def level_projection(graph: KGraph, j: int) -> FockOperator:
    """Vacuum plus every path with no color-j edge."""
    _check_color(graph, j)
    return SpanProjection(f"level{j}=0", lambda b: b.shape.coord(j) == 0, with_vacuum=True)


def shape_floor_projection(graph: KGraph, k: Shape) -> FockOperator:
    """Paths whose shape dominates k; the vacuum is excluded.  Needs k != 0."""
    k = k if isinstance(k, Shape) else Shape(*k)
    if len(k) != graph.rank:
        raise ConfigError(f"shape rank {len(k)} != graph rank {graph.rank}")
    if k.is_zero:
        raise ConfigError("shape floor needs a nonzero bound; at zero the "
                          "left and right sums count the vacuum differently")
    return SpanProjection(f"shape>={tuple(k.coords)}", lambda b: k <= b.shape,
                          with_vacuum=False)


def identity_operator() -> FockOperator:
    return Identity()


def zero_operator() -> FockOperator:
    return Zero()


# -- pointwise evaluation and comparison ----------------------------------------


def apply(op: FockOperator, b) -> dict:
    """Evaluate an operator on one basis element; {} is the zero vector."""
    return op.act(b)


def operators_agree(lhs: FockOperator, rhs: FockOperator, basis, *, cap: int = 3):
    """Compare two operators pointwise.  Returns (ok, checked, failures)."""
    failures = []
    checked = 0
    for b in basis:
        checked += 1
        lv = lhs.act(b)
        rv = rhs.act(b)
        if lv != rv:
            if len(failures) < cap:
                failures.append((b, lv, rv))
            else:
                break
    return not failures, checked, failures


def is_partial_injection(op: FockOperator, basis):
    """Whether op maps basis elements to single unit-coefficient vectors, injectively."""
    hit = {}
    for b in basis:
        out = op.act(b)
        if not out:
            continue
        if len(out) != 1:
            return False, (b, out)
        (img, c), = out.items()
        if c != 1:
            return False, (b, out)
        if img in hit:
            return False, (b, hit[img])
        hit[img] = b
    return True, None


def fixed_set(op: FockOperator, basis) -> frozenset:
    """The basis elements op fixes.  Meaningful for partial identities."""
    return frozenset(b for b in basis if op.act(b) == {b: 1})


def is_partial_identity(op: FockOperator, basis):
    """Whether op acts as b -> b or b -> 0 on every listed basis element."""
    for b in basis:
        out = op.act(b)
        if out and out != {b: 1}:
            return False, (b, out)
    return True, None


# -- the relation catalog --------------------------------------------------------


@dataclass(frozen=True)
class RelationReport:
    """Outcome of one named pointwise identity check over a basis window."""

    relation: str
    graph: str
    bound: Shape
    ok: bool
    checked: int
    counterexamples: tuple  # (instance label, basis element, lhs vec, rhs vec)

    def __bool__(self):
        return self.ok


def _run_instances(relation, graph, bound, instances, basis, cap=3):
    """instances: iterable of (label, lhs operator, rhs operator)."""
    checked = 0
    bad = []
    for label, lhs, rhs in instances:
        ok, n, failures = operators_agree(lhs, rhs, basis, cap=cap)
        checked += n
        for b, lv, rv in failures:
            if len(bad) < cap:
                bad.append((label, b, lv, rv))
    return RelationReport(relation, graph.name, bound, not bad, checked, tuple(bad))


def verify_left_isometry(graph: KGraph, bound: Shape, basis=None) -> RelationReport:
    """Prepending then stripping a path projects onto spans rooted at its source."""
    bound = bound if isinstance(bound, Shape) else Shape(*bound)
    basis = fock_basis(graph, bound) if basis is None else basis

    def instances():
        for mu in graph.all_paths(bound):
            L = left_creation(graph, mu)
            yield (f"mu={mu.display()}", Product((L.adjoint(), L)),
                   target_projection(graph, mu.source))

    return _run_instances("R1.left", graph, bound, instances(), basis)


def verify_right_isometry(graph: KGraph, bound: Shape, basis=None) -> RelationReport:
    """Appending then stripping a path projects onto spans ending at its target."""
    bound = bound if isinstance(bound, Shape) else Shape(*bound)
    basis = fock_basis(graph, bound) if basis is None else basis

    def instances():
        for mu in graph.all_paths(bound):
            R = right_creation(graph, mu)
            yield (f"mu={mu.display()}", Product((R.adjoint(), R)),
                   source_projection(graph, mu.target))

    return _run_instances("R1.right", graph, bound, instances(), basis)


def verify_vertex_sum(graph: KGraph, j: int, bound: Shape, basis=None) -> RelationReport:
    """A vertex projection splits into color-j edge ranges plus its level part."""
    _check_color(graph, j)
    bound = bound if isinstance(bound, Shape) else Shape(*bound)
    basis = fock_basis(graph, bound) if basis is None else basis
    ej = Shape.unit(graph.rank, j)

    def instances():
        for a in sorted(graph.vertices):
            left_terms = [Product((LeftCreation(graph, lam), LeftAnnihilation(graph, lam)))
                          for lam in graph.enumerate_paths(ej, target=a)]
            yield (f"vertex={a},j={j},left",
                   target_projection(graph, a),
                   Sum(left_terms + [target_projection_level(graph, a, j)]))
            right_terms = [Product((RightCreation(graph, lam), RightAnnihilation(graph, lam)))
                           for lam in graph.enumerate_paths(ej, source=a)]
            yield (f"vertex={a},j={j},right",
                   source_projection(graph, a),
                   Sum(right_terms + [source_projection_level(graph, a, j)]))

    return _run_instances(f"R2[j={j}]", graph, bound, instances(), basis)


def verify_level_complement(graph: KGraph, j: int, bound: Shape, basis=None) -> RelationReport:
    """Both one-sided color-j range sums have the same complement: the level span."""
    _check_color(graph, j)
    bound = bound if isinstance(bound, Shape) else Shape(*bound)
    basis = fock_basis(graph, bound) if basis is None else basis
    ej = Shape.unit(graph.rank, j)
    edges = graph.enumerate_paths(ej)
    lsum = Sum(Product((LeftCreation(graph, lam), LeftAnnihilation(graph, lam)))
               for lam in edges)
    rsum = Sum(Product((RightCreation(graph, lam), RightAnnihilation(graph, lam)))
               for lam in edges)
    one = Identity()
    pj = level_projection(graph, j)
    instances = [
        (f"j={j},left", Sum((one, Scaled(-1, lsum))), pj),
        (f"j={j},right", Sum((one, Scaled(-1, rsum))), pj),
    ]
    return _run_instances(f"R3[j={j}]", graph, bound, instances, basis)


def verify_shape_floor(graph: KGraph, k: Shape, bound: Shape, basis=None) -> RelationReport:
    """Left and right range sums at a fixed nonzero shape agree with the floor span."""
    k = k if isinstance(k, Shape) else Shape(*k)
    bound = bound if isinstance(bound, Shape) else Shape(*bound)
    if k.is_zero:
        raise ConfigError("shape floor checks need k != 0")
    basis = fock_basis(graph, bound) if basis is None else basis
    paths = graph.enumerate_paths(k)
    lsum = Sum(Product((LeftCreation(graph, lam), LeftAnnihilation(graph, lam)))
               for lam in paths)
    rsum = Sum(Product((RightCreation(graph, lam), RightAnnihilation(graph, lam)))
               for lam in paths)
    floor = shape_floor_projection(graph, k)
    kk = tuple(k.coords)
    instances = [
        (f"k={kk},left-vs-floor", lsum, floor),
        (f"k={kk},right-vs-floor", rsum, floor),
    ]
    return _run_instances(f"R4[k={kk}]", graph, bound, instances, basis)


def creation_commutation(graph: KGraph, lam: Path, mu: Path, bound: Shape,
                         basis=None) -> RelationReport:
    """Left creation by lam and right creation by mu commute, vacuum included.

    Both orders send a path to lam.path.mu (or zero), and the vacuum to the
    two-sided composite lam.mu.  Only nonzero-shape creations are claimed to
    commute: vertex creations are projections and fail this at the vacuum.
    """
    bound = bound if isinstance(bound, Shape) else Shape(*bound)
    basis = fock_basis(graph, bound) if basis is None else basis
    L = left_creation(graph, lam)
    R = right_creation(graph, mu)
    instances = [(f"lam={lam.display()},mu={mu.display()}",
                  Product((L, R)), Product((R, L)))]
    return _run_instances("commutation", graph, bound, instances, basis)


def verify_commutation(graph: KGraph, bound: Shape, pair_bound: Shape = None,
                       basis=None) -> RelationReport:
    """creation_commutation over every pair of nonzero-shape paths below pair_bound."""
    bound = bound if isinstance(bound, Shape) else Shape(*bound)
    if pair_bound is None:
        pair_bound = Shape(*([1] * graph.rank))
    basis = fock_basis(graph, bound) if basis is None else basis
    pairs = [p for p in graph.all_paths(pair_bound) if not p.shape.is_zero]

    def instances():
        for lam in pairs:
            L = left_creation(graph, lam)
            for mu in pairs:
                R = right_creation(graph, mu)
                yield (f"lam={lam.display()},mu={mu.display()}",
                       Product((L, R)), Product((R, L)))

    return _run_instances("commutation", graph, bound, instances(), basis)


RELATION_NAMES = ("R1", "R2", "R3", "R4", "commutation")


def verify_identity(graph: KGraph, name: str, bound: Shape) -> RelationReport:
    """Check one named relation everywhere it applies below the bound.

    R2 and R3 run over every color, R4 over every nonzero shape k <= bound,
    commutation over path pairs below the unit box.  Reports merge with the
    first few counterexamples kept.
    """
    bound = bound if isinstance(bound, Shape) else Shape(*bound)
    basis = fock_basis(graph, bound)
    if name == "R1":
        parts = [verify_left_isometry(graph, bound, basis),
                 verify_right_isometry(graph, bound, basis)]
    elif name == "R2":
        parts = [verify_vertex_sum(graph, j, bound, basis)
                 for j in range(1, graph.rank + 1)]
    elif name == "R3":
        parts = [verify_level_complement(graph, j, bound, basis)
                 for j in range(1, graph.rank + 1)]
    elif name == "R4":
        parts = [verify_shape_floor(graph, k, bound, basis)
                 for k in shapes_below(bound) if not k.is_zero]
    elif name == "commutation":
        parts = [verify_commutation(graph, bound, basis=basis)]
    else:
        raise ConfigError(f"unknown relation {name!r}; known: {', '.join(RELATION_NAMES)}")
    bad = tuple(c for p in parts for c in p.counterexamples)[:3]
    return RelationReport(name, graph.name, bound, all(p.ok for p in parts),
                          sum(p.checked for p in parts), bad)


# -- mixed projections -----------------------------------------------------------


def mixed_range_projection(graph: KGraph, lam: Path, mu: Path) -> FockOperator:
    """Range projection of (strip mu on the right) after (prepend lam).

    Fixes exactly the paths w such that w.mu exists and carries lam as a left
    factor.  For same-shape lam, mu this is the projection whose membership
    in the one-sided algebra separates genuinely two-sided graphs.
    """
    L = left_creation(graph, lam)
    R = right_creation(graph, mu)
    return Product((R.adjoint(), L, L.adjoint(), R))


def level_conjugated_projection(graph: KGraph, j: int, lam: Path, mu: Path) -> FockOperator:
    """Level-j compression of the matching domain projection.

    The inner factor is the domain projection of (strip lam on the left)
    after (append mu); compressing by the level projection keeps only the
    color-j-free part of its fixed span.
    """
    _check_color(graph, j)
    L = left_creation(graph, lam)
    R = right_creation(graph, mu)
    pj = level_projection(graph, j)
    return Product((pj, L.adjoint(), R, R.adjoint(), L, pj))


# -- the diagonal fixed-set algebra ------------------------------------------------


class FixedSetAlgebra:
    """Finite Boolean algebra of subsets generated by a family of fixed-sets.

    Stored as the partition of the universe into membership-signature cells;
    a subset belongs to the algebra iff it is a union of cells.
    """

    def __init__(self, universe, generators):
        self.universe = tuple(universe)
        gens = tuple(generators)
        cells: dict = {}
        for x in self.universe:
            key = tuple(x in g for g in gens)
            cells.setdefault(key, []).append(x)
        self.atoms = frozenset(frozenset(c) for c in cells.values())

    def __contains__(self, subset):
        s = frozenset(subset)
        if not s <= frozenset(self.universe):
            return False
        return all(a <= s or not (a & s) for a in self.atoms)

    def __len__(self):
        return 2 ** len(self.atoms)

    def __eq__(self, other):
        if not isinstance(other, FixedSetAlgebra):
            return NotImplemented
        return (frozenset(self.universe) == frozenset(other.universe)
                and self.atoms == other.atoms)

    def __hash__(self):
        return hash((frozenset(self.universe), self.atoms))

    def __repr__(self):
        return f"<FixedSetAlgebra: {len(self.atoms)} atoms over {len(self.universe)} points>"


@dataclass(frozen=True)
class DiagonalAlgebra:
    """Fixed-set algebras of short partial-identity operator words.

    projections maps a representative word label to each distinct fixed set
    found.  full uses every word; left_only and right_only restrict to words
    in one family of creations; one_sided is generated by both one-sided
    pools together and is the reference for mixed-projection membership.
    """

    graph: str
    word_len: int
    bound: Shape
    basis: tuple
    projections: dict
    full: FixedSetAlgebra
    one_sided: FixedSetAlgebra
    left_only: FixedSetAlgebra
    right_only: FixedSetAlgebra


def _atom_actions(graph, edges, vertices, sides):
    """Labelled single-step actions, each a partial injection on basis elements.

    Returned as (label, act) with act(x) -> image or None; results are cached
    per atom since words revisit the same intermediate elements constantly.
    """
    atoms = []

    def single(op):
        cache: dict = {}

        def act(x):
            if x in cache:
                return cache[x]
            out = op.act(x)
            img = next(iter(out)) if out else None
            cache[x] = img
            return img

        return act

    for e in edges:
        p = graph.path([e.name])
        if "l" in sides:
            atoms.append((f"l+{e.name}", single(LeftCreation(graph, p))))
            atoms.append((f"l-{e.name}", single(LeftAnnihilation(graph, p))))
        if "r" in sides:
            atoms.append((f"r+{e.name}", single(RightCreation(graph, p))))
            atoms.append((f"r-{e.name}", single(RightAnnihilation(graph, p))))
    for a in vertices:
        if "l" in sides:
            atoms.append((f"p@{a}", single(target_projection(graph, a))))
        if "r" in sides:
            atoms.append((f"q@{a}", single(source_projection(graph, a))))
    return atoms


def _identity_pool(graph, word_len, basis, sides):
    """Fixed sets of every partial-identity word of length <= word_len.

    Depth-first over words, composing partial injections pointwise over the
    basis.  States dedupe on the induced map, so distinct words with equal
    action cost one visit; the all-undefined state prunes its whole subtree.
    """
    atoms = _atom_actions(graph, graph.edges, sorted(graph.vertices), sides)
    pool: dict = {}
    seen: dict = {}

    def visit(state, depth_left, label):
        prev = seen.get(state)
        if prev is not None and prev >= depth_left:
            return
        seen[state] = depth_left
        if all(img is None or img == b for img, b in zip(state, basis)):
            fix = frozenset(b for img, b in zip(state, basis) if img is not None)
            pool.setdefault(fix, label)
        if depth_left == 0 or all(img is None for img in state):
            return
        for alabel, act in atoms:
            nxt = tuple(None if img is None else act(img) for img in state)
            visit(nxt, depth_left - 1, f"{alabel} {label}" if label else alabel)

    visit(tuple(basis), word_len, "")
    return pool


def diagonal_algebra(graph: KGraph, word_len: int, bound: Shape) -> DiagonalAlgebra:
    """Survey the partial-identity words over the creation atoms.

    Collects fix(w) for every edge/vertex operator word of length <= word_len
    acting as a partial identity on the basis window, then closes each pool
    into a Boolean algebra of subsets.
    """
    if word_len < 1:
        raise ConfigError("word_len must be >= 1")
    bound = bound if isinstance(bound, Shape) else Shape(*bound)
    basis = fock_basis(graph, bound)
    full_pool = _identity_pool(graph, word_len, basis, "lr")
    left_pool = _identity_pool(graph, word_len, basis, "l")
    right_pool = _identity_pool(graph, word_len, basis, "r")
    projections = {label or "1": fix for fix, label in sorted(
        full_pool.items(), key=lambda kv: (len(kv[0]), kv[1]))}
    return DiagonalAlgebra(
        graph=graph.name,
        word_len=word_len,
        bound=bound,
        basis=basis,
        projections=projections,
        full=FixedSetAlgebra(basis, full_pool),
        one_sided=FixedSetAlgebra(basis, list(left_pool) + list(right_pool)),
        left_only=FixedSetAlgebra(basis, left_pool),
        right_only=FixedSetAlgebra(basis, right_pool),
    )


@dataclass(frozen=True)
class ObstructionReport:
    """Whether one mixed range projection stays inside the one-sided algebra.

    A pure finite-window computation: membership is decided against the
    truncated algebra only, so a True here never certifies the untruncated
    statement and a False only certifies separation at this window.
    """

    graph: str
    left_path: str
    right_path: str
    word_len: int
    bound: Shape
    fixed_set: frozenset
    in_one_sided: bool
    caveat: str = "membership computed on the finite basis window only"


def obstruction_report(graph: KGraph, lam: Path, mu: Path, *, algebra=None,
                       word_len: int = 4, bound: Shape = None) -> ObstructionReport:
    """Probe one mixed range projection against the one-sided algebra."""
    if algebra is None:
        if bound is None:
            raise ConfigError("need either a precomputed algebra or a bound")
        algebra = diagonal_algebra(graph, word_len, bound)
    op = mixed_range_projection(graph, lam, mu)
    ok, witness = is_partial_identity(op, algebra.basis)
    if not ok:
        raise ConfigError(f"mixed projection is not a partial identity: {witness!r}")
    fix = fixed_set(op, algebra.basis)
    return ObstructionReport(
        graph=graph.name,
        left_path=lam.display(),
        right_path=mu.display(),
        word_len=algebra.word_len,
        bound=algebra.bound,
        fixed_set=fix,
        in_one_sided=fix in algebra.one_sided,
    )
