"""Cut-set solvers for trees and cycles.

Fix a set F of cut edges.  Restricting attention to assignments where
every connected component of G - F goes wholly to one agent, the rest
is searchable: branch over the component assignment, connect each
agent's components with a minimal set of edges from F (unique on trees,
a leave-one-gap choice on cycles), branch over which cut edge hosts
each agent that owns no component, and solve an exact LP for the share
lengths on the remaining cut edges.

The wrappers enumerate the cut sets that make this restriction lossless
on their graph class: for vertex-disjoint division of trees every
solution is captured by some F of at most |A|-1 edges; for the shared
variant on trees by cutting around at most |A| shared vertices and
edges; on cycles by at most |A| cut edges.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterator, Sequence

from efgc.linprog import EQ, GE, Feasible, LinearForm, LinearSystem, lp_feasible
from efgc.model import (
    Assignment,
    EdgePiece,
    EfgcError,
    Graph,
    Instance,
    Piece,
    Variant,
    Verdict,
    normalize,
    tile_edge,
    verify_assignment,
)

ZERO = Fraction(0)


class NotTreeError(EfgcError):
    pass


class NotCycleError(EfgcError):
    pass


class NotTreeOrCycleError(EfgcError):
    pass


@dataclass(frozen=True)
class Component:
    """One connected component of G - F: its vertices and edges."""

    vertices: frozenset[str]
    edges: tuple[str, ...]


@dataclass(frozen=True)
class CutBranch:
    """One fully guessed branch of the cut-set search."""

    component_assignment: tuple[str, ...]  # agent per component index
    connector_edges: dict[str, frozenset[str]]
    inside_edge_choice: dict[str, str]
    f_prime: frozenset[str]


def components_without(graph: Graph, cut: frozenset[str]) -> list[Component]:
    """Connected components after removing the cut edges, ordered by the
    smallest vertex index they contain; isolated vertices count."""
    parent = {v: v for v in graph.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for eid, u, v in graph.edges:
        if eid not in cut:
            parent[find(u)] = find(v)
    groups: dict[str, list[str]] = {}
    for v in graph.vertices:
        groups.setdefault(find(v), []).append(v)
    comps = []
    for members in groups.values():
        vs = frozenset(members)
        es = tuple(
            eid for eid, u, v in graph.edges if eid not in cut and u in vs
        )
        comps.append(Component(vs, es))
    comps.sort(key=lambda c: min(graph.vertex_index(v) for v in c.vertices))
    return comps


def _spans(graph: Graph, required: frozenset[str], edges: Sequence[str]) -> bool:
    """Are all required vertices in one connected part of these edges?"""
    if len(required) <= 1:
        return True
    parent = {v: v for v in graph.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in edges:
        u, v = graph.endpoints(e)
        parent[find(u)] = find(v)
    roots = {find(v) for v in required}
    return len(roots) == 1


def _connector_choices(
    graph: Graph, cut: frozenset[str], own_edges: Sequence[str], required: frozenset[str]
) -> list[frozenset[str]]:
    """Minimal subsets of the cut that link the agent's components.

    Small cuts allow direct subset enumeration; spanning is monotone, so
    a set containing an earlier (smaller) spanning set is not minimal.
    On a tree at most one subset survives; on a cycle the choice of
    which gap to leave open gives several, not necessarily equal-sized.
    """
    minimal: list[frozenset[str]] = []
    for size in range(len(cut) + 1):
        for subset in combinations(sorted(cut), size):
            candidate = frozenset(subset)
            if any(prev <= candidate for prev in minimal):
                continue
            if _spans(graph, required, list(own_edges) + list(subset)):
                minimal.append(candidate)
    return minimal


def _cut_var(edge: str, agent: str) -> str:
    return f"y_{edge}__{agent}"


def _build_cut_lp(
    instance: Instance,
    f_prime: Sequence[str],
    end_owners: dict[str, tuple[str, str]],
    insiders: dict[str, list[str]],
    owned_edges: dict[str, list[str]],
) -> LinearSystem:
    system = LinearSystem()
    allowed: dict[str, list[str]] = {}
    for e in f_prime:
        names = []
        for agent in end_owners[e] + tuple(insiders.get(e, ())):
            if agent not in names:
                names.append(agent)
        allowed[e] = names
        for agent in names:
            system.declare(_cut_var(e, agent))
            system.add(LinearForm.var(_cut_var(e, agent)), GE)
        system.add(
            LinearForm.make({_cut_var(e, a): 1 for a in names}, -1), EQ
        )

    def value_form(valuer: str, owner: str) -> LinearForm:
        const = sum(
            (instance.util(valuer, g) for g in owned_edges.get(owner, ())), ZERO
        )
        terms = {}
        for e in f_prime:
            if owner in allowed[e] and (
                owner in end_owners[e] or owner in insiders.get(e, ())
            ):
                terms[_cut_var(e, owner)] = instance.util(valuer, e)
        return LinearForm.make(terms, const)

    for a in instance.agents:
        mine = value_form(a, a)
        for b in instance.agents:
            if a != b:
                system.add(mine - value_form(a, b), GE)
    return system


def _extract_cut_assignment(
    instance: Instance,
    f_prime: Sequence[str],
    end_owners: dict[str, tuple[str, str]],
    insiders: dict[str, list[str]],
    owned_edges: dict[str, list[str]],
    witness,
) -> Assignment:
    graph = instance.graph
    buckets: dict[str, list] = {a: [] for a in instance.agents}
    for agent, edges in owned_edges.items():
        for g in edges:
            buckets[agent].append(EdgePiece(g, 0, 1))
    for e in f_prime:
        o0, o1 = end_owners[e]
        mid = [(b, witness[_cut_var(e, b)]) for b in insiders.get(e, ())]
        if o0 == o1:
            segments = [(o0, witness[_cut_var(e, o0)])] + mid + [(o1, ZERO)]
        else:
            segments = (
                [(o0, witness[_cut_var(e, o0)])]
                + mid
                + [(o1, witness[_cut_var(e, o1)])]
            )
        for owner, ep in tile_edge(e, segments):
            buckets[owner].append(ep)
    return Assignment({a: Piece(b) for a, b in buckets.items()})


def solve_with_cut_set(instance: Instance, cut: Sequence[str]) -> Verdict:
    """Decide existence of an envy-free assignment in which every
    component of G - cut goes wholly to one agent.

    A yes verdict ships a verified assignment; no means no assignment
    within this restricted scope exists.
    """
    inst = normalize(instance)
    graph = inst.graph
    if not (graph.is_tree() or graph.is_cycle()):
        raise NotTreeOrCycleError("cut-set solving needs a tree or a cycle")
    cut = frozenset(cut)
    comps = components_without(graph, cut)
    vdgc = inst.variant is Variant.VDGC
    for comp_assign in product(inst.agents, repeat=len(comps)):
        per_agent: dict[str, list[Component]] = {}
        for comp, agent in zip(comps, comp_assign):
            per_agent.setdefault(agent, []).append(comp)
        choice_lists = []
        holders = [a for a in inst.agents if a in per_agent]
        feasible_shape = True
        for agent in holders:
            own = per_agent[agent]
            required = frozenset().union(*(c.vertices for c in own))
            own_edges = [e for c in own for e in c.edges]
            choices = _connector_choices(graph, cut, own_edges, required)
            if not choices:
                feasible_shape = False
                break
            choice_lists.append(choices)
        if not feasible_shape:
            continue
        for connector_combo in product(*choice_lists):
            used: set[str] = set()
            clash = False
            for chosen in connector_combo:
                if chosen & used:
                    clash = True
                    break
                used |= chosen
            if clash:
                continue
            connectors = dict(zip(holders, connector_combo))
            owned_edges = {
                agent: sorted(
                    [e for c in per_agent[agent] for e in c.edges]
                    + list(connectors[agent]),
                    key=graph.edge_ids.index,
                )
                for agent in holders
            }
            if vdgc:
                spans: dict[str, set[str]] = {}
                for agent in holders:
                    verts = set()
                    for c in per_agent[agent]:
                        verts |= c.vertices
                    for e in connectors[agent]:
                        verts.update(graph.endpoints(e))
                    spans[agent] = verts
                if any(
                    spans[a] & spans[b]
                    for i, a in enumerate(holders)
                    for b in holders[i + 1 :]
                ):
                    continue
            f_prime = sorted(cut - used, key=graph.edge_ids.index)
            comp_of_vertex = {}
            for comp, agent in zip(comps, comp_assign):
                for v in comp.vertices:
                    comp_of_vertex[v] = agent
            end_owners = {}
            for e in f_prime:
                end_owners[e] = (
                    comp_of_vertex[graph.coord_vertex(e, 0)],
                    comp_of_vertex[graph.coord_vertex(e, 1)],
                )
            floaters = [a for a in inst.agents if a not in per_agent]
            if floaters and not f_prime:
                continue
            # an agent placed inside an edge it values at zero must envy
            options = [
                [e for e in f_prime if inst.util(a, e) > 0] for a in floaters
            ]
            for placement in product(*options):
                insiders: dict[str, list[str]] = {}
                for agent, e in zip(floaters, placement):
                    insiders.setdefault(e, []).append(agent)
                system = _build_cut_lp(
                    inst, f_prime, end_owners, insiders, owned_edges
                )
                result = lp_feasible(system)
                if isinstance(result, Feasible):
                    assignment = _extract_cut_assignment(
                        inst,
                        f_prime,
                        end_owners,
                        insiders,
                        owned_edges,
                        result.witness,
                    )
                    report = verify_assignment(inst, assignment)
                    assert report.valid, report.failures
                    return Verdict(True, assignment)
    return Verdict(False, None)


def _cut_sets(edges: Sequence[str], max_size: int) -> Iterator[frozenset[str]]:
    for size in range(max_size + 1):
        for subset in combinations(edges, size):
            yield frozenset(subset)


def solve_tree_vdgc(instance: Instance) -> Verdict:
    """Vertex-disjoint division of a tree: some cut set of fewer edges
    than agents captures every solution."""
    if not instance.graph.is_tree():
        raise NotTreeError("expects a tree")
    if instance.variant is not Variant.VDGC:
        raise ValueError("expects the vertex-disjoint variant")
    for cut in _cut_sets(instance.graph.edge_ids, len(instance.agents) - 1):
        verdict = solve_with_cut_set(instance, cut)
        if verdict.yes:
            return verdict
    return Verdict(False, None)


def solve_tree_gc_bounded_degree(instance: Instance) -> Verdict:
    """Shared-vertex division of a tree: at most |A| vertices and edges
    are shared between agents, so cutting around every choice of those
    is exhaustive (polynomial only for bounded degree)."""
    if not instance.graph.is_tree():
        raise NotTreeError("expects a tree")
    if instance.variant is not Variant.GC:
        raise ValueError("expects the shared-vertex variant")
    graph = instance.graph
    items = [("v", v) for v in graph.vertices] + [("e", e) for e in graph.edge_ids]
    seen: set[frozenset[str]] = set()
    for size in range(len(instance.agents) + 1):
        for chosen in combinations(items, size):
            cut = {e for kind, e in chosen if kind == "e"}
            for kind, v in chosen:
                if kind == "v":
                    cut.update(graph.incident_edges(v))
            cut = frozenset(cut)
            if cut in seen:
                continue
            seen.add(cut)
            verdict = solve_with_cut_set(instance, cut)
            if verdict.yes:
                return verdict
    return Verdict(False, None)


def solve_cycle(instance: Instance) -> Verdict:
    """Division of a cycle, either variant: at most |A| edges are shared
    between agents, so cut sets up to that size are exhaustive."""
    if not instance.graph.is_cycle():
        raise NotCycleError("expects a cycle")
    for cut in _cut_sets(instance.graph.edge_ids, len(instance.agents)):
        verdict = solve_with_cut_set(instance, cut)
        if verdict.yes:
            return verdict
    return Verdict(False, None)
