"""Commuting partial-map systems on finite carriers.

A system is a finite point set together with finitely many partial self-maps
that commute pairwise (equal domains and equal values for both composition
orders).  Composite powers indexed by shapes, the joint-domain compatibility
check, exit times, and the partition of the carrier by which coordinates can
be shifted forever all live here, along with the stock carriers used
throughout the test suite: integer grids, a two-sided word system, path
spaces of validated graphs, their eventually periodic boundaries, and plain
product systems.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import ConfigError, DomainError
from .shapes import INF, ExtendedShape, Shape, shapes_below


class PartialMap:
    """Partial self-map of a finite point set, stored as an explicit table.

    Equality compares graphs (the tables), not names.  Applying the map
    outside its domain raises DomainError; there is no silent default.
    """

    __slots__ = ("name", "_table")

    def __init__(self, name: str, table: dict):
        self.name = name
        self._table = dict(table)

    @classmethod
    def from_rule(cls, name: str, points: Iterable, defined: Callable, image: Callable):
        """Materialize a rule-based map over an enumerable point set."""
        return cls(name, {x: image(x) for x in points if defined(x)})

    @classmethod
    def identity(cls, points: Iterable):
        return cls("id", {x: x for x in points})

    def defined_at(self, x) -> bool:
        return x in self._table

    def __call__(self, x):
        try:
            return self._table[x]
        except KeyError:
            raise DomainError(f"{self.name} is undefined at {x!r}", point=x) from None

    def domain(self) -> frozenset:
        return frozenset(self._table)

    def codomain_points(self) -> frozenset:
        return frozenset(self._table.values())

    def compose(self, other: "PartialMap") -> "PartialMap":
        # dom(self after other) = {x in dom(other): other(x) in dom(self)}
        table = {
            x: self._table[y] for x, y in other._table.items() if y in self._table
        }
        return PartialMap(f"{self.name}*{other.name}", table)

    def restrict(self, points) -> "PartialMap":
        keep = set(points)
        table = {x: y for x, y in self._table.items() if x in keep and y in keep}
        return PartialMap(self.name, table)

    def graph_items(self):
        return tuple(self._table.items())

    def __eq__(self, other):
        if not isinstance(other, PartialMap):
            return NotImplemented
        return self._table == other._table

    def __len__(self):
        return len(self._table)

    def __repr__(self):
        return f"PartialMap({self.name}: {len(self._table)} points)"


@dataclass(frozen=True)
class CommutationReport:
    ok: bool
    witness: tuple | None  # (i, j, x): 1-based generator pair, offending point


@dataclass(frozen=True)
class DcReport:
    """Outcome of the joint-domain compatibility check."""

    ok: bool
    bound: Shape
    witness: tuple | None  # (n, m, x) with x in dom(T^n) and dom(T^m) but not dom(T^(n join m))


class MGDS:
    """Finitely many commuting partial maps acting on one finite carrier.

    Immutable after construction; power tables and exit times are cached.
    Generators are 1-based in every public signature, matching shape
    coordinates.
    """

    def __init__(self, name: str, carrier: Iterable, generators, *, check: bool = True):
        self.name = name
        self.carrier = tuple(dict.fromkeys(carrier))
        self._carrier_set = frozenset(self.carrier)
        self.generators = tuple(generators)
        if not self.generators:
            raise ConfigError("a system needs at least one generator")
        for T in self.generators:
            stray = (T.domain() | T.codomain_points()) - self._carrier_set
            if stray:
                raise ConfigError(
                    f"map {T.name} of system {name} leaves the carrier: {sorted(map(repr, stray))[:3]}"
                )
        self._powers: dict = {}
        self._exit: dict = {}
        if check:
            rep = self.check_commuting()
            if not rep.ok:
                i, j, x = rep.witness
                raise ConfigError(
                    f"generators {i} and {j} of system {name} do not commute at {x!r}"
                )

    @property
    def rank(self) -> int:
        return len(self.generators)

    def generator(self, j: int) -> PartialMap:
        if not 1 <= j <= self.rank:
            raise ConfigError(f"generator index {j} out of range 1..{self.rank}")
        return self.generators[j - 1]

    def check_commuting(self) -> CommutationReport:
        """Both composition orders of every generator pair must agree as partial maps."""
        for i in range(1, self.rank + 1):
            for j in range(i + 1, self.rank + 1):
                a = self.generators[i - 1].compose(self.generators[j - 1])
                b = self.generators[j - 1].compose(self.generators[i - 1])
                if a == b:
                    continue
                for x in self.carrier:
                    da, db = a.defined_at(x), b.defined_at(x)
                    if da != db or (da and a(x) != b(x)):
                        return CommutationReport(False, (i, j, x))
        return CommutationReport(True, None)

    def power(self, n: Shape) -> PartialMap:
        """The composite map indexed by a shape; T^0 is the identity on the carrier."""
        n = Shape(n) if not isinstance(n, Shape) else n
        if n.rank != self.rank:
            raise ConfigError(f"shape rank {n.rank} does not match system rank {self.rank}")
        cached = self._powers.get(n)
        if cached is None:
            cur = PartialMap.identity(self.carrier)
            for j, count in enumerate(n, start=1):
                for _ in range(count):
                    cur = self.generators[j - 1].compose(cur)
            cur.name = f"T^{tuple(n)}"
            cached = self._powers[n] = cur
        return cached

    def apply(self, n: Shape, x):
        return self.power(n)(x)

    def domain(self, n: Shape) -> frozenset:
        return self.power(n).domain()

    def exit_time(self, x) -> ExtendedShape:
        """Per coordinate, how many times the generator applies starting at x.

        A revisited point means the generator can be applied forever, so that
        coordinate is infinite.  Intrinsic to the carrier: no truncation
        bookkeeping is consulted.
        """
        if x not in self._carrier_set:
            raise DomainError(f"{x!r} is not a carrier point of {self.name}", point=x)
        cached = self._exit.get(x)
        if cached is None:
            coords = []
            for T in self.generators:
                seen = {x}
                cur, count = x, 0
                while T.defined_at(cur):
                    cur = T(cur)
                    if cur in seen:
                        count = INF
                        break
                    seen.add(cur)
                    count += 1
                coords.append(count)
            cached = self._exit[x] = ExtendedShape(coords)
        return cached

    def exit_bound(self) -> Shape:
        """Componentwise maximum orbit span over the carrier.

        The span of a point under one generator is its finite exit time, or
        the number of steps until the first revisit where the orbit is
        periodic.  Default search bound for the compatibility check and for
        groupoid witnesses: large enough to see both every finite domain and
        every period.
        """
        coords = []
        for T in self.generators:
            best = 0
            for x in self.carrier:
                seen = {x}
                cur, steps = x, 0
                while T.defined_at(cur):
                    cur = T(cur)
                    steps += 1
                    if cur in seen:
                        break
                    seen.add(cur)
                best = max(best, steps)
            coords.append(best)
        return Shape(coords)

    def check_dc(self, bound: Shape | None = None) -> DcReport:
        """Joint-domain compatibility: dom(T^n) and dom(T^m) meet inside dom(T^(n join m)).

        Scans shape pairs below the bound and reports the first violating
        triple, if any.
        """
        if bound is None:
            bound = self.exit_bound()
        shapes = list(shapes_below(bound))
        for a, n in enumerate(shapes):
            for m in shapes[:a]:
                if m <= n or n <= m:
                    continue  # join is the larger one, nothing to check
                allowed = self.domain(n | m)
                both = self.domain(n) & self.domain(m)
                for x in self.carrier:
                    if x in both and x not in allowed:
                        return DcReport(False, bound, (n, m, x))
        return DcReport(True, bound, None)

    def xj_partition(self) -> dict:
        """Split the carrier by the set of coordinates with infinite exit time.

        Every subset of {1..rank} appears as a key, possibly with an empty
        block.
        """
        blocks = {
            frozenset(J): []
            for size in range(self.rank + 1)
            for J in itertools.combinations(range(1, self.rank + 1), size)
        }
        for x in self.carrier:
            blocks[self.exit_time(x).infinite_support()].append(x)
        return {J: tuple(pts) for J, pts in blocks.items()}

    def __repr__(self):
        return f"MGDS({self.name}: rank {self.rank}, {len(self.carrier)} points)"


# -- stock systems ----------------------------------------------------------------------


def grid_system(rank: int, side: int) -> MGDS:
    """Points {0..side-1}^rank; generator j subtracts 1 from coordinate j where it can."""
    if rank < 1 or side < 1:
        raise ConfigError("grid needs positive rank and side")
    pts = list(itertools.product(range(side), repeat=rank))
    gens = []
    for j in range(rank):
        table = {p: p[:j] + (p[j] - 1,) + p[j + 1 :] for p in pts if p[j] >= 1}
        gens.append(PartialMap(f"T{j + 1}", table))
    return MGDS(f"grid{rank}x{side}", pts, gens)


def free_monoid_system(alphabet: str = "ab", maxlen: int = 3) -> MGDS:
    """Words of bounded length; one generator drops the first letter, the other the last.

    The standard source of joint-domain failure: both generators are defined
    on every nonvoid word, but their join needs length at least 2.
    """
    if maxlen < 1 or not alphabet:
        raise ConfigError("word system needs a nonempty alphabet and positive length cap")
    letters = sorted(set(alphabet))
    words = [""]
    for n in range(1, maxlen + 1):
        words.extend("".join(w) for w in itertools.product(letters, repeat=n))
    left = PartialMap("L", {w: w[1:] for w in words if w})
    right = PartialMap("R", {w: w[:-1] for w in words if w})
    return MGDS(f"words<= {maxlen}", words, [left, right])


def path_space_system(graph, cap: Shape, include_boundary: bool = False) -> MGDS:
    """Paths of shape at most cap, shifted by peeling unit heads off the target end.

    With include_boundary, eventually periodic infinite paths (deduplicated
    semantically) join the carrier; the shifts are total on them.
    """
    rep = graph.validate(cap)
    if not rep.ok:
        first = next(c for c in rep.checks if not c.ok)
        raise ConfigError(f"graph {graph.name} fails validation: {first.name}")
    from .kgraph import factorize

    carrier = list(graph.all_paths(cap))
    if include_boundary:
        from .duality import boundary_points, shift_infinite

        carrier.extend(boundary_points(graph, prefix_cap=cap))
    tables = [dict() for _ in range(graph.rank)]
    for x in carrier:
        for j in range(1, graph.rank + 1):
            e = Shape.unit(graph.rank, j)
            if hasattr(x, "cycle"):  # infinite stand-in: always shiftable
                tables[j - 1][x] = shift_infinite(e, x)
            elif x.shape.coord(j) >= 1:
                tables[j - 1][x] = factorize(x, e)[1]
    gens = [PartialMap(f"T{j}", tables[j - 1]) for j in range(1, graph.rank + 1)]
    return MGDS(f"paths({graph.name})<= {tuple(cap)}", carrier, gens)


def boundary_subsystem(graph, prefix_cap: Shape | None = None, cycle_cap: Shape | None = None) -> MGDS:
    """Restriction to the eventually periodic infinite stand-ins alone.

    Requires every vertex to receive an edge of every color, so the shifts
    stay total and no finite path would belong to the boundary.
    """
    from .duality import boundary_points, shift_infinite

    for v in graph.vertices:
        for j in range(1, graph.rank + 1):
            if not graph.edges_into(v, j):
                raise ConfigError(
                    f"vertex {v} of {graph.name} receives no color-{j} edge; "
                    "its boundary would contain finite paths"
                )
    pts = boundary_points(graph, prefix_cap=prefix_cap, cycle_cap=cycle_cap)
    gens = []
    for j in range(1, graph.rank + 1):
        e = Shape.unit(graph.rank, j)
        gens.append(PartialMap(f"T{j}", {x: shift_infinite(e, x) for x in pts}))
    return MGDS(f"boundary({graph.name})", pts, gens)


def identity_system(points: Iterable, rank: int) -> MGDS:
    """Every generator acts as the identity; nothing is ever undefined."""
    pts = list(dict.fromkeys(points))
    gens = [PartialMap(f"T{j}", {x: x for x in pts}) for j in range(1, rank + 1)]
    return MGDS("identity", pts, gens)


def product_system(name: str, components) -> MGDS:
    """One independent partial map per coordinate, acting on a product carrier.

    components: per coordinate, a (points, table) pair.  Commutation is
    automatic and joint-domain compatibility always holds, because powers of
    a single map have nested domains.
    """
    comp = [(list(dict.fromkeys(pts)), dict(table)) for pts, table in components]
    pts = list(itertools.product(*[c[0] for c in comp]))
    gens = []
    for j, (_, table) in enumerate(comp):
        moved = {p: p[:j] + (table[p[j]],) + p[j + 1 :] for p in pts if p[j] in table}
        gens.append(PartialMap(f"T{j + 1}", moved))
    return MGDS(name, pts, gens)
