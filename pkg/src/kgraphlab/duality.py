"""Two-coordinate covering picture over the path-space dynamics.

This module houses the boundary side of the package: eventually periodic
infinite paths with exact (bounded-unrolling) equality, the paired points
(finite path, infinite continuation) carrying two commuting families of
shifts, the covering map onto (shape, infinite path) data together with
constructive fiber lifts, the two-sided shift on doubly infinite words,
and the lattice-translation twist on groupoid elements.

Everything is exact: equality of infinite paths is decided by unrolling
to a fixed finite shape, so every check here is a finite computation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .dynsys import MGDS, PartialMap
from .errors import ConfigError, DomainError, NotComposable, ShapeError, WitnessError
from .groupoid import GroupoidElement
from .kgraph import Path, compose, factorize
from .shapes import INF, ExtendedShape, Shape, make_shape, shapes_below

__all__ = [
    "RationalInfinitePath",
    "ZPoint",
    "boundary_points",
    "shift_infinite",
    "t_shift",
    "v_shift",
    "zpoint_system",
    "phi",
    "phi_section",
    "s_shift",
    "w_shift",
    "lift_fiber",
    "fiber_lift_report",
    "LiftReport",
    "two_sided_shift",
    "two_sided_shift_inverse",
    "two_sided_cocycle",
    "theta_twist",
    "theta_untwist",
]


# -- rational infinite paths -----------------------------------------------------


def _primitive_root(cycle: Path) -> Path:
    """Smallest closed path whose repetition gives ``cycle``."""
    coords = cycle.shape.coords
    g = 0
    for c in coords:
        g = math.gcd(g, c)
    for m in range(g, 1, -1):  # largest exponent first -> smallest root
        if any(c % m for c in coords):
            continue
        root_shape = Shape(tuple(c // m for c in coords))
        root = factorize(cycle, root_shape)[0]
        if root.source != root.target:
            continue
        power = root
        for _ in range(m - 1):
            power = compose(power, root)
        if power == cycle:
            return root
    return cycle


def _raw_head(prefix: Path, cycle: Path, bound: Shape) -> Path:
    word = prefix
    while not bound <= word.shape:
        word = compose(word, cycle)
    return factorize(word, bound)[0]


def _reduce_period(prefix: Path, cycle: Path) -> tuple[Path, Path]:
    """Replace the cycle by a strictly smaller period when one exists.

    A primitive cycle need not be the smallest period: squares can braid
    a longer cycle into alignment with a shorter one (on the flip graph,
    (a0.a0.b0)-forever equals (a0.b0)-forever).  Candidate periods are
    the strictly positive shapes dominated by the current cycle shape;
    each is accepted only after a bounded-unrolling equality check.
    """
    reduced = True
    while reduced:
        reduced = False
        for s in shapes_below(cycle.shape):
            if s == cycle.shape or any(c < 1 for c in s.coords):
                continue
            lo, hi = prefix.shape, prefix.shape + s
            block = factorize(_raw_head(prefix, cycle, hi), lo)[1]
            if block.source != block.target:
                continue
            bound = Shape(tuple(
                2 * (p + 2 * max(c, b))
                for p, c, b in zip(prefix.shape.coords, cycle.shape.coords, s.coords)
            ))
            if _raw_head(prefix, block, bound) == _raw_head(prefix, cycle, bound):
                cycle = block
                reduced = True
                break
    return prefix, cycle


def _absorb(prefix: Path, cycle: Path) -> tuple[Path, Path]:
    """Shed whole trailing cycle copies, rotate shared last edges into the cycle."""
    rank = prefix.graph.rank
    changed = True
    while changed:
        changed = False
        while cycle.shape <= prefix.shape:
            head, tail = factorize(prefix, prefix.shape - cycle.shape)
            if tail != cycle:
                break
            prefix = head
            changed = True
        if prefix.shape.is_zero:
            break
        for j in range(1, rank + 1):
            if prefix.shape.coord(j) < 1:
                continue
            unit = Shape.unit(rank, j)
            head, last = factorize(prefix, prefix.shape - unit)
            c_head, c_last = factorize(cycle, cycle.shape - unit)
            if last == c_last:
                prefix, cycle = head, compose(last, c_head)
                changed = True
                break
    return prefix, cycle


@dataclass(frozen=True, eq=False, repr=False)
class RationalInfinitePath:
    """Eventually periodic infinite path prefix.cycle.cycle...

    The cycle returns to its own left end, meets the prefix's right end,
    and has strictly positive shape in every color, so shifts of every
    color stay defined forever.  Construction normalizes the pair: a
    cycle that is a proper power is reduced to its root, a prefix ending
    in a whole copy of the cycle sheds it, and a prefix whose last edge
    matches the cycle's last edge rotates that edge into the cycle.
    Equality is semantic (bounded unrolling), so no check in this module
    leans on the normalization being complete.
    """

    prefix: Path
    cycle: Path

    def __post_init__(self):
        prefix, cycle = self.prefix, self.cycle
        if prefix.graph is not cycle.graph:
            raise ConfigError("prefix and cycle must live on the same graph")
        if cycle.source != cycle.target:
            raise NotComposable(
                f"cycle must return to its start: {cycle.target} -> {cycle.source}"
            )
        if prefix.source != cycle.target:
            raise NotComposable(
                f"prefix ends at {prefix.source}, cycle starts at {cycle.target}"
            )
        if any(c < 1 for c in cycle.shape.coords):
            raise ConfigError(
                f"cycle shape {cycle.shape} must be strictly positive in every color"
            )
        while True:
            cycle = _primitive_root(cycle)
            prefix, cycle = _reduce_period(prefix, cycle)
            before = (prefix, cycle)
            prefix, cycle = _absorb(prefix, cycle)
            if (prefix, cycle) == before:
                break
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "cycle", cycle)

    @property
    def graph(self):
        return self.prefix.graph

    @property
    def rank(self) -> int:
        return self.graph.rank

    @property
    def target(self) -> str:
        """Vertex at the finite (grade zero) end."""
        return self.prefix.target

    @property
    def shape(self) -> ExtendedShape:
        return make_shape((INF,) * self.rank)

    def unroll(self, bound: Shape) -> Path:
        """Finite path prefix.cycle^n whose shape dominates ``bound``."""
        if not bound.is_finite:
            raise ShapeError(f"unroll bound must be finite: {bound}")
        copies = 0
        for p, c, b in zip(self.prefix.shape.coords, self.cycle.shape.coords, bound.coords):
            if b > p:
                copies = max(copies, -((p - b) // c))  # ceil((b - p) / c)
        word = self.prefix
        for _ in range(copies):
            word = compose(word, self.cycle)
        return word

    def segment(self, lo: Shape, hi: Shape) -> Path:
        """The finite block of shape hi - lo sitting between grades lo and hi."""
        if not lo <= hi:
            raise ShapeError(f"segment needs lo <= hi, got {lo} and {hi}")
        head = factorize(self.unroll(hi), hi)[0]
        return factorize(head, lo)[1]

    def head(self, k: Shape) -> Path:
        return self.segment(Shape.zero(self.rank), k)

    def _eq_bound(self) -> Shape:
        return Shape(tuple(
            2 * (p + 2 * c)
            for p, c in zip(self.prefix.shape.coords, self.cycle.shape.coords)
        ))

    def __eq__(self, other):
        if not isinstance(other, RationalInfinitePath):
            return NotImplemented
        if self.rank != other.rank or self.graph is not other.graph:
            return False
        bound = self._eq_bound().join(other._eq_bound())
        return self.head(bound) == other.head(bound)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        # representation independent: equal paths share every finite head
        return hash(("rational", self.head(Shape((1,) * self.rank))))

    def __repr__(self):
        return f"<{self.prefix.display()}|({self.cycle.display()})^inf>"


def shift_infinite(k: Shape, y: RationalInfinitePath) -> RationalInfinitePath:
    """Drop the grade-k head; the shift of every color is total on rational paths."""
    if not k.is_finite:
        raise ShapeError(f"shift needs a finite shape, got {k}")
    tail = factorize(y.unroll(k), k)[1]
    return RationalInfinitePath(tail, y.cycle)


def boundary_points(graph, *, prefix_cap: Shape | None = None,
                    cycle_cap: Shape | None = None) -> list:
    """Every rational infinite path with prefix and cycle inside the caps.

    Deduplicated semantically, so each point appears once no matter how
    many (prefix, cycle) pairs inside the window present it.  A graph
    with no strictly positive cycles (a grid, say) yields the empty list.
    """
    rank = graph.rank
    if prefix_cap is None:
        prefix_cap = Shape.zero(rank)
    if cycle_cap is None:
        cycle_cap = Shape((1,) * rank)
    points, seen = [], set()
    for prefix in graph.all_paths(prefix_cap):
        v = prefix.source
        for shape in shapes_below(cycle_cap):
            if any(c < 1 for c in shape.coords):
                continue
            for cycle in graph.enumerate_paths(shape, source=v, target=v):
                y = RationalInfinitePath(prefix, cycle)
                if y not in seen:
                    seen.add(y)
                    points.append(y)
    points.sort(key=lambda y: (y.prefix.sort_key(), y.cycle.sort_key()))
    return points


# -- paired points and their two shift families ----------------------------------


@dataclass(frozen=True)
class ZPoint:
    """Finite path glued to an infinite continuation at its right end."""

    x: Path
    y: RationalInfinitePath

    def __post_init__(self):
        if self.x.graph is not self.y.graph:
            raise ConfigError("the two coordinates must live on the same graph")
        if self.x.source != self.y.target:
            raise NotComposable(
                f"x ends at {self.x.source} but y starts at {self.y.target}"
            )

    @property
    def graph(self):
        return self.x.graph

    @property
    def rank(self) -> int:
        return self.x.graph.rank

    def composite(self) -> RationalInfinitePath:
        """The glued infinite path x.y."""
        return RationalInfinitePath(compose(self.x, self.y.prefix), self.y.cycle)

    def __repr__(self):
        return f"({self.x.display()}, {self.y!r})"


def t_shift(m: Shape, z: ZPoint) -> ZPoint:
    """Move the grade-m tail of x across the seam onto y; needs sigma(x) >= m."""
    if not m <= z.x.shape:
        raise DomainError(f"no t-shift by {m}: x has shape {z.x.shape}")
    head, tail = factorize(z.x, z.x.shape - m)
    return ZPoint(head, RationalInfinitePath(compose(tail, z.y.prefix), z.y.cycle))


def v_shift(m: Shape, z: ZPoint) -> ZPoint:
    """Slide the window forward: append the grade-m head of y to x, then drop
    the grade-m head of the extended x.  Total, and preserves sigma(x)."""
    extended = compose(z.x, z.y.head(m))
    return ZPoint(factorize(extended, m)[1], shift_infinite(m, z.y))


def zpoint_system(graph, seeds, *, name: str | None = None) -> MGDS:
    """Dynamical system on paired points: generators T1..Tr then V1..Vr.

    The carrier is the full forward closure of the seeds, which is finite:
    the slide maps preserve sigma(x) and rational tails recur, while the
    seam maps strictly shrink sigma(x).  Working with the closed carrier
    keeps every domain honest, so commutation and domain checks measure
    the maps themselves and not the sampling window.
    """
    rank = graph.rank
    t_tables = [dict() for _ in range(rank)]
    v_tables = [dict() for _ in range(rank)]
    carrier, queue = [], []
    seen = set()
    for z in seeds:
        if z not in seen:
            seen.add(z)
            queue.append(z)
    while queue:
        z = queue.pop(0)
        carrier.append(z)
        for j in range(1, rank + 1):
            unit = Shape.unit(rank, j)
            images = []
            if z.x.shape.coord(j) >= 1:
                w = t_shift(unit, z)
                t_tables[j - 1][z] = w
                images.append(w)
            w = v_shift(unit, z)
            v_tables[j - 1][z] = w
            images.append(w)
            for w in images:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    gens = [PartialMap(f"T{j}", t_tables[j - 1]) for j in range(1, rank + 1)]
    gens += [PartialMap(f"V{j}", v_tables[j - 1]) for j in range(1, rank + 1)]
    return MGDS(name or f"zcover({graph.name})", carrier, gens)


# -- the covering map and its fibers ----------------------------------------------


def phi(z: ZPoint) -> tuple:
    """Covering data of a paired point: (sigma(x), the glued infinite path)."""
    return (z.x.shape, z.composite())


def phi_section(pair) -> ZPoint:
    """The unique paired point with the given covering data.

    Splits the infinite path at the recorded grade; phi_section(phi(z)) == z
    and phi(phi_section(p)) == p, so the covering map is a bijection on
    rational data.
    """
    n, w = pair
    if not n.is_finite:
        raise ConfigError(f"covering data needs a finite grade, got {n}")
    n = Shape(tuple(n.coords))
    return ZPoint(w.head(n), shift_infinite(n, w))


def s_shift(m: Shape, pair) -> tuple:
    """Grade-side shift on covering data: subtract m, keep the path."""
    n, w = pair
    if not m <= n:
        raise DomainError(f"no grade shift by {m} at grade {n}")
    return (n - m, w)


def w_shift(k: Shape, pair) -> tuple:
    """Path-side shift on covering data: keep the grade, drop the grade-k head."""
    n, w = pair
    return (n, shift_infinite(k, w))


def _split(m: Shape, rank: int) -> tuple[Shape, Shape]:
    return Shape(m.coords[:rank]), Shape(m.coords[rank:])


def _apply_word(z: ZPoint, seam: Shape, slide: Shape) -> ZPoint:
    return v_shift(slide, t_shift(seam, z))


def lift_fiber(z: ZPoint, target, *, witness_bound: Shape | None = None) -> GroupoidElement:
    """The unique arrow out of z covering a given arrow out of phi(z).

    ``target`` is an arrow over covering data: a GroupoidElement or a
    plain (range pair, cocycle, source pair) triple whose source is
    phi(z) and whose cocycle has one coordinate per seam map followed by
    one per slide map.  The range point is reconstructed by splitting the
    range data, then a witness pair certifying the arrow is found by
    bounded search.  A valid target always lifts; exhausting the bound
    means a bug or a model gap and raises loudly.
    """
    if isinstance(target, GroupoidElement):
        range_pair, cocycle, source_pair = target.x, target.z, target.y
        if isinstance(range_pair, ZPoint):  # arrow of the paired-point groupoid
            range_pair, source_pair = phi(range_pair), phi(source_pair)
    else:
        range_pair, cocycle, source_pair = target
    rank = z.rank
    if len(cocycle) != 2 * rank:
        raise ConfigError(
            f"cocycle {cocycle} should have {2 * rank} coordinates (seam then slide)"
        )
    if source_pair[0] != phi(z)[0] or source_pair[1] != phi(z)[1]:
        raise ConfigError("target arrow does not start at the covering data of z")
    n, w = range_pair
    if not n.is_finite:
        raise WitnessError(f"no lift: grade {n} is not covering data of any paired point")
    lifted = phi_section(range_pair)
    if witness_bound is None:
        witness_bound = Shape((2,) * (2 * rank))
    for m in shapes_below(witness_bound):
        n_coords = tuple(mc - zc for mc, zc in zip(m.coords, cocycle))
        if any(c < 0 for c in n_coords):
            continue
        n_wit = Shape(n_coords)
        try:
            left = _apply_word(lifted, *_split(m, rank))
            right = _apply_word(z, *_split(n_wit, rank))
        except DomainError:
            continue
        if left == right:
            return GroupoidElement(lifted, tuple(cocycle), z, witness=(m, n_wit))
    raise WitnessError(
        f"no lift of cocycle {cocycle} over the covering data of {z!r} "
        f"within witness bound {witness_bound}: bug or model gap"
    )


@dataclass(frozen=True)
class LiftReport:
    """Outcome of the exhaustive fiber-uniqueness check."""

    ok: bool
    checked: int
    defects: tuple

    def __bool__(self):
        return self.ok


def fiber_lift_report(groupoid, *, cocycle_cap: int | None = None) -> LiftReport:
    """Check every arrow of a paired-point groupoid is alone over its image.

    Buckets arrows by (source point, covered arrow); two arrows in one
    bucket would be distinct lifts of a single covering arrow out of the
    same point.  ``cocycle_cap`` restricts to arrows with every cocycle
    coordinate in [-cap, cap].
    """
    buckets: dict = {}
    checked = 0
    for g in groupoid:
        if cocycle_cap is not None and any(abs(c) > cocycle_cap for c in g.z):
            continue
        checked += 1
        key = (g.y, (phi(g.x), g.z, phi(g.y)))
        buckets.setdefault(key, []).append(g)
    defects = tuple(tuple(v) for v in buckets.values() if len(v) > 1)[:3]
    return LiftReport(not defects, checked, defects)


# -- two-sided words and the lattice twist ----------------------------------------


def _pivot_check(p) -> tuple:
    x, y = p
    if x.rank != y.rank:
        raise ConfigError("the two sides must have the same rank")
    if x.target != y.target:
        raise NotComposable(
            f"sides meet at different vertices: {x.target} and {y.target}"
        )
    return x, y


def two_sided_shift(k: int, p) -> tuple:
    """Move one color-k edge across the pivot of a doubly infinite word.

    ``p`` is (x, y): x an infinite path and y an infinite path of the
    reversed graph, meeting at a shared pivot vertex.  The head edge of
    color k moves from x onto y (by its shared name), so the pivot slides
    one step into x.  Total on every such pair, and inverted exactly by
    two_sided_shift_inverse, which is the set-level content of the
    two-sided shift being a bisection with cocycle two_sided_cocycle.
    """
    x, y = _pivot_check(p)
    if not 1 <= k <= x.rank:
        raise ConfigError(f"color {k} out of range 1..{x.rank}")
    unit = Shape.unit(x.rank, k)
    name = x.head(unit).word[0]
    hop = y.graph.path((name,))
    return (shift_infinite(unit, x),
            RationalInfinitePath(compose(hop, y.prefix), y.cycle))


def two_sided_shift_inverse(k: int, p) -> tuple:
    """Move one color-k edge back across the pivot, from y onto x."""
    x, y = _pivot_check(p)
    if not 1 <= k <= x.rank:
        raise ConfigError(f"color {k} out of range 1..{x.rank}")
    unit = Shape.unit(x.rank, k)
    name = y.head(unit).word[0]
    hop = x.graph.path((name,))
    return (RationalInfinitePath(compose(hop, x.prefix), x.cycle),
            shift_infinite(unit, y))


def two_sided_cocycle(rank: int, k: int) -> tuple:
    """Lattice data of the color-k two-sided shift: the x side advances one
    color-k step while the y side retreats one."""
    if not 1 <= k <= rank:
        raise ConfigError(f"color {k} out of range 1..{rank}")
    forward = tuple(Shape.unit(rank, k).coords)
    return (forward, tuple(-c for c in forward))


def theta_twist(t, gamma: GroupoidElement) -> tuple:
    """Translate the lattice coordinate by the arrow's own cocycle.

    (t, gamma) -> (t + z(gamma), gamma) on pairs (lattice vector, arrow).
    Since cocycles add under composition this is an automorphism of the
    product: composable pairs map to composable pairs with matching
    composites, and theta_untwist inverts it.
    """
    t = tuple(t)
    if len(t) != len(gamma.z):
        raise ConfigError(f"vector {t} does not match cocycle {gamma.z}")
    return (tuple(a + b for a, b in zip(t, gamma.z)), gamma)


def theta_untwist(t, gamma: GroupoidElement) -> tuple:
    """Inverse translation: (t, gamma) -> (t - z(gamma), gamma)."""
    t = tuple(t)
    if len(t) != len(gamma.z):
        raise ConfigError(f"vector {t} does not match cocycle {gamma.z}")
    return (tuple(a - b for a, b in zip(t, gamma.z)), gamma)
