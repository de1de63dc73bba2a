"""Core data model for envy-free division of graphs with divisible edges.

Agents divide the edges of a connected graph. Every edge is identified
with the rational interval [0, 1]; a share ("piece") is a collection of
edge intervals that hangs together through shared endpoint vertices.
Two problem variants exist: GC, where several pieces may touch the same
vertex, and VDGC, where every vertex may belong to at most one piece.

All arithmetic is exact. Utilities, cut points and interval lengths are
``fractions.Fraction`` values and every comparison in this package is an
exact rational comparison; there is no floating point and no tolerance
parameter anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class EfgcError(Exception):
    """Base class for errors raised by this package."""


class AllZeroAgentError(EfgcError):
    """An agent values every edge at zero, so it cannot be normalized."""


class UnknownEdgeError(EfgcError):
    """A piece references an edge that does not exist in the graph."""


class Variant(Enum):
    """Problem variant: may pieces of different agents share vertices?"""

    GC = "gc"
    VDGC = "vdgc"


def as_rational(value) -> Fraction:
    """Coerce ints, strings like ``"2/3"`` and Fractions to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"expected an exact rational, got {value!r}")
    return Fraction(value)


@dataclass(frozen=True)
class Graph:
    """A connected simple graph with a fixed global vertex ordering.

    ``vertices`` is the ordering: within an edge, coordinate 0 sits at
    the endpoint that appears earlier in this ordering and coordinate 1
    at the later one.  ``edges`` are (edge id, endpoint, endpoint)
    triples; the listing order of the endpoints carries no meaning.
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex identifiers")
        if not self.edges:
            raise ValueError("a graph must have at least one edge")
        ids = [e[0] for e in self.edges]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate edge identifiers")
        index = {v: i for i, v in enumerate(self.vertices)}
        seen_pairs = set()
        for eid, u, v in self.edges:
            if u not in index or v not in index:
                raise ValueError(f"edge {eid} references an unknown vertex")
            if u == v:
                raise ValueError(f"edge {eid} is a loop")
            pair = frozenset((u, v))
            if pair in seen_pairs:
                raise ValueError(f"parallel edge {eid}")
            seen_pairs.add(pair)
        if not self._connected():
            raise ValueError("graph is not connected")

    def _connected(self) -> bool:
        adj: dict[str, list[str]] = {v: [] for v in self.vertices}
        for _, u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e[0] for e in self.edges)

    def vertex_index(self, v: str) -> int:
        return self.vertices.index(v)

    def endpoints(self, edge: str) -> tuple[str, str]:
        for eid, u, v in self.edges:
            if eid == edge:
                return u, v
        raise UnknownEdgeError(edge)

    def coord_vertex(self, edge: str, coord: int) -> str:
        """The vertex sitting at coordinate ``coord`` (0 or 1) of ``edge``."""
        u, v = self.endpoints(edge)
        lo, hi = sorted((u, v), key=self.vertex_index)
        return lo if coord == 0 else hi

    def coord_of(self, edge: str, vertex: str) -> Fraction:
        """The coordinate (0 or 1) of ``vertex`` within ``edge``."""
        u, v = self.endpoints(edge)
        if vertex not in (u, v):
            raise ValueError(f"{vertex} is not an endpoint of {edge}")
        return ZERO if self.coord_vertex(edge, 0) == vertex else ONE

    def incident_edges(self, vertex: str) -> tuple[str, ...]:
        return tuple(eid for eid, u, v in self.edges if vertex in (u, v))

    def degree(self, vertex: str) -> int:
        return len(self.incident_edges(vertex))

    def is_tree(self) -> bool:
        return len(self.edges) == len(self.vertices) - 1

    def is_cycle(self) -> bool:
        return all(self.degree(v) == 2 for v in self.vertices)


@dataclass(frozen=True)
class Instance:
    """A division problem: a graph, agents, and per-edge utilities."""

    graph: Graph
    agents: tuple[str, ...]
    utilities: Mapping[tuple[str, str], Fraction]
    variant: Variant

    def __post_init__(self):
        if not self.agents:
            raise ValueError("at least one agent is required")
        if len(set(self.agents)) != len(self.agents):
            raise ValueError("duplicate agent identifiers")
        for a in self.agents:
            for e in self.graph.edge_ids:
                u = self.utilities.get((a, e))
                if u is None:
                    raise ValueError(f"missing utility for ({a}, {e})")
                if u < 0:
                    raise ValueError(f"negative utility for ({a}, {e})")
        object.__setattr__(self, "utilities", MappingProxyType(dict(self.utilities)))

    def util(self, agent: str, edge: str) -> Fraction:
        return self.utilities[(agent, edge)]

    def total_utility(self, agent: str) -> Fraction:
        return sum((self.util(agent, e) for e in self.graph.edge_ids), ZERO)


def build_instance(
    vertices: Sequence[str],
    edges: Sequence[tuple[str, str, str]],
    utilities: Mapping[str, Mapping[str, object]],
    variant: Variant | str = Variant.GC,
) -> Instance:
    """Convenience constructor; missing utilities default to zero."""
    graph = Graph(tuple(vertices), tuple(edges))
    if isinstance(variant, str):
        variant = Variant(variant)
    table: dict[tuple[str, str], Fraction] = {}
    for agent, per_edge in utilities.items():
        for e in graph.edge_ids:
            table[(agent, e)] = as_rational(per_edge.get(e, 0))
    return Instance(graph, tuple(utilities.keys()), table, variant)


def normalize(instance: Instance) -> Instance:
    """Scale every agent's utilities so they sum to exactly one.

    Scaling an agent's utility function by a positive constant never
    changes which assignments are envy-free, so the answer is preserved.
    """
    table: dict[tuple[str, str], Fraction] = {}
    for a in instance.agents:
        total = instance.total_utility(a)
        if total == 0:
            raise AllZeroAgentError(f"agent {a} values every edge at zero")
        for e in instance.graph.edge_ids:
            table[(a, e)] = instance.util(a, e) / total
    return Instance(instance.graph, instance.agents, table, instance.variant)


@dataclass(frozen=True)
class EdgePiece:
    """A sub-interval of one edge, with closure flags at both ends.

    The closure flags record whether the endpoints belong to the
    interval.  A degenerate interval (lo == hi) is a single point and is
    always closed on both sides; it has length zero but still contains
    its point, which lets it claim a vertex or bridge two neighbours.
    """

    edge: str
    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if not (ZERO <= self.lo <= self.hi <= ONE):
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise ValueError("a degenerate interval must be closed on both sides")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, point: Fraction) -> bool:
        if point < self.lo or point > self.hi:
            return False
        if point == self.lo and not self.lo_closed:
            return False
        if point == self.hi and not self.hi_closed:
            return False
        return True


def _sort_key(ep: EdgePiece):
    return (ep.edge, ep.lo, ep.hi, ep.lo_closed, ep.hi_closed)


@dataclass(frozen=True)
class Piece:
    """A collection of edge pieces; connected collections form shares."""

    edge_pieces: tuple[EdgePiece, ...]

    def __init__(self, edge_pieces: Iterable[EdgePiece] = ()):
        object.__setattr__(
            self, "edge_pieces", tuple(sorted(set(edge_pieces), key=_sort_key))
        )

    def on_edge(self, edge: str) -> tuple[EdgePiece, ...]:
        return tuple(ep for ep in self.edge_pieces if ep.edge == edge)


@dataclass(frozen=True)
class Assignment:
    """A map from agents to pieces, stored sorted by agent id."""

    entries: tuple[tuple[str, Piece], ...]

    def __init__(self, mapping: Mapping[str, Piece] | Iterable[tuple[str, Piece]]):
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        object.__setattr__(self, "entries", tuple(sorted(items)))
        agents = [a for a, _ in self.entries]
        if len(set(agents)) != len(agents):
            raise ValueError("duplicate agent in assignment")

    @property
    def agents(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.entries)

    def piece_of(self, agent: str) -> Piece:
        for a, p in self.entries:
            if a == agent:
                return p
        raise KeyError(agent)

    def items(self) -> tuple[tuple[str, Piece], ...]:
        return self.entries


@dataclass(frozen=True)
class Verdict:
    """Solver outcome: yes with a witness assignment, or no."""

    yes: bool
    assignment: Assignment | None = None


def piece_utility(agent: str, piece: Piece, instance: Instance) -> Fraction:
    """Exact value of a piece: sum of interval length times edge utility.

    Closure flags never matter here; single points have measure zero.
    """
    known = set(instance.graph.edge_ids)
    total = ZERO
    for ep in piece.edge_pieces:
        if ep.edge not in known:
            raise UnknownEdgeError(ep.edge)
        total += ep.length * instance.util(agent, ep.edge)
    return total


def _same_edge_touch(p: EdgePiece, q: EdgePiece) -> bool:
    lo = max(p.lo, q.lo)
    hi = min(p.hi, q.hi)
    if lo > hi:
        return False
    if lo < hi:
        return True
    return p.contains(lo) and q.contains(lo)


def _adjacent(p: EdgePiece, q: EdgePiece, graph: Graph) -> bool:
    if p.edge == q.edge:
        return _same_edge_touch(p, q)
    pu, pv = graph.endpoints(p.edge)
    qu, qv = graph.endpoints(q.edge)
    shared = {pu, pv} & {qu, qv}
    for v in shared:
        if p.contains(graph.coord_of(p.edge, v)) and q.contains(graph.coord_of(q.edge, v)):
            return True
    return False


def is_connected_piece(piece: Piece, graph: Graph) -> bool:
    """True iff the edge pieces form one connected share of the graph.

    Pieces on the same edge are adjacent when their intervals share a
    point; pieces on adjacent edges are adjacent when both contain the
    coordinate of the shared vertex.  Empty and singleton collections
    count as connected.
    """
    eps = piece.edge_pieces
    if len(eps) <= 1:
        return True
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(len(eps)):
            if j not in seen and _adjacent(eps[i], eps[j], graph):
                seen.add(j)
                stack.append(j)
    return len(seen) == len(eps)


@dataclass(frozen=True)
class Failure:
    kind: str  # "tiling" | "connectivity" | "vertex-disjointness" | "envy"
    message: str


@dataclass(frozen=True)
class VerificationReport:
    failures: tuple[Failure, ...]

    @property
    def valid(self) -> bool:
        return not self.failures


def _check_tiling(instance: Instance, assignment: Assignment, failures: list[Failure]):
    if set(assignment.agents) != set(instance.agents):
        failures.append(
            Failure("tiling", "assignment agents differ from instance agents")
        )
        return
    for edge in instance.graph.edge_ids:
        pieces = []
        for agent, piece in assignment.items():
            pieces.extend(piece.on_edge(edge))
        total = sum((ep.length for ep in pieces), ZERO)
        if total != 1:
            failures.append(Failure("tiling", f"edge {edge}: lengths sum to {total}, not 1"))
            continue
        ordered = sorted(pieces, key=lambda ep: (ep.lo, ep.hi))
        reach = ZERO
        overlap = False
        for ep in ordered:
            if ep.length > 0:
                if ep.lo < reach:
                    overlap = True
                reach = max(reach, ep.hi)
        if overlap:
            failures.append(Failure("tiling", f"edge {edge}: interval interiors overlap"))
            continue
        points = {ZERO, ONE}
        for ep in ordered:
            points.add(ep.lo)
            points.add(ep.hi)
        for x in sorted(points):
            if not any(ep.contains(x) for ep in ordered):
                failures.append(Failure("tiling", f"edge {edge}: point {x} is uncovered"))


def _check_vertex_disjoint(instance: Instance, assignment: Assignment, failures: list[Failure]):
    graph = instance.graph
    for v in graph.vertices:
        owners = set()
        for agent, piece in assignment.items():
            for edge in graph.incident_edges(v):
                coord = graph.coord_of(edge, v)
                if any(ep.contains(coord) for ep in piece.on_edge(edge)):
                    owners.add(agent)
        if len(owners) > 1:
            failures.append(
                Failure(
                    "vertex-disjointness",
                    f"vertex {v} belongs to pieces of {sorted(owners)}",
                )
            )


def verify_assignment(instance: Instance, assignment: Assignment) -> VerificationReport:
    """Independently check an assignment; failures are reported, not raised.

    Checks: every edge is tiled exactly (lengths sum to one, interval
    interiors disjoint, every point covered), every agent's piece is
    connected, vertices belong to at most one agent (VDGC only), and no
    agent values another piece above its own.
    """
    failures: list[Failure] = []
    _check_tiling(instance, assignment, failures)
    for agent, piece in assignment.items():
        if not is_connected_piece(piece, instance.graph):
            failures.append(Failure("connectivity", f"piece of {agent} is disconnected"))
    if instance.variant is Variant.VDGC:
        _check_vertex_disjoint(instance, assignment, failures)
    if set(assignment.agents) == set(instance.agents):
        values = {
            (a, b): piece_utility(a, assignment.piece_of(b), instance)
            for a in instance.agents
            for b in instance.agents
        }
        for a in instance.agents:
            for b in instance.agents:
                if values[(a, a)] < values[(a, b)]:
                    failures.append(
                        Failure(
                            "envy",
                            f"{a} values the piece of {b} at {values[(a, b)]}"
                            f" but its own at {values[(a, a)]}",
                        )
                    )
    return VerificationReport(tuple(failures))


def singleton_interval_lengths_agree(assignment: Assignment) -> bool:
    """Check an envy-freeness consequence: agents whose whole share is a
    single interval inside a common edge must hold intervals of equal
    length (each would otherwise envy the longer one)."""
    by_edge: dict[str, set[Fraction]] = {}
    for _, piece in assignment.items():
        if len(piece.edge_pieces) == 1:
            ep = piece.edge_pieces[0]
            by_edge.setdefault(ep.edge, set()).add(ep.length)
    return all(len(lengths) == 1 for lengths in by_edge.values())


def tile_edge(
    edge: str, segments: Sequence[tuple[object, Fraction]]
) -> list[tuple[object, EdgePiece]]:
    """Lay out consecutive owner segments across one edge.

    ``segments`` lists (owner key, length) pairs left to right; lengths
    must sum to exactly one.  Consecutive segments with the same owner
    merge.  Closure flags make the tiling exact: coordinate 0 belongs to
    the first segment, coordinate 1 to the last, and every interior cut
    point to the segment on its left.  Zero-length segments become
    degenerate point pieces.
    """
    total = sum((length for _, length in segments), ZERO)
    if total != 1:
        raise ValueError(f"segment lengths on {edge} sum to {total}, not 1")
    merged: list[list] = []
    for owner, length in segments:
        if merged and merged[-1][0] == owner:
            merged[-1][1] += length
        else:
            merged.append([owner, length])
    out: list[tuple[object, EdgePiece]] = []
    m = len(merged)
    lo = ZERO
    for j, (owner, length) in enumerate(merged, start=1):
        hi = lo + length
        if lo == hi:
            out.append((owner, EdgePiece(edge, lo, hi, True, True)))
        else:
            lo_closed = j == 1
            hi_closed = j == m or hi != 1
            out.append((owner, EdgePiece(edge, lo, hi, lo_closed, hi_closed)))
        lo = hi
    return out
