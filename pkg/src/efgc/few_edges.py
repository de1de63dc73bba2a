"""Decision procedure for arbitrary connected graphs with few edges.

The search guesses the combinatorial shape of a hypothetical envy-free
assignment and lets an exact LP fill in the lengths:

1. guess, for both ends of every edge, the agent whose piece contains
   that end, plus the number of agents placed fully inside each edge;
2. guess envy-critical agents: for each ordered edge pair, the inside
   agent closest to envying the other edge, and for each (edge, holder)
   pair, the inside agent closest to envying that holder -- the latter
   relative to a sample point taken from one cell of the arrangement of
   envy-comparison forms;
3. solve the LP over endpoint lengths and per-edge inside lengths; on
   success, hand the guessed agents their pieces and match the rest to
   the leftover intervals via the compatibility graph.

Any produced assignment is re-verified before it is returned.  Sample
points are enumerated independently per holder: distinct holders' length
variables are disjoint, so the joint cell structure is the product of
the per-holder ones and nothing is lost by combining witnesses.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import product
from typing import Iterator, Mapping, Sequence

from efgc.cells import (
    CellWitness,
    endpoint_var,
    enumerate_sign_conditions,
    guessed_pieces,
    holdings_value_form,
)
from efgc.linprog import (
    EQ,
    GE,
    Feasible,
    LinearForm,
    LinearSystem,
    lp_feasible,
)
from efgc.matching import compatibility_graph, is_perfect, max_bipartite_matching
from efgc.model import (
    Assignment,
    EfgcError,
    Instance,
    Piece,
    Variant,
    Verdict,
    normalize,
    piece_utility,
    tile_edge,
    verify_assignment,
)

ZERO = Fraction(0)


class InconsistentLengthsError(EfgcError):
    """The supplied lengths do not satisfy the branch's constraints."""


def delta_var(edge: str) -> str:
    return f"d_{edge}"


@dataclass(frozen=True)
class BranchGuess:
    """One node of the search tree.

    ``endpoint_agent`` maps (edge, end) to the agent holding that end,
    ``n`` counts the agents placed fully inside each edge, and the
    critical-agent maps plus the sample point pin down the constraints
    of step 2.  ``a_v`` caches the set of endpoint holders.
    """

    endpoint_agent: Mapping[tuple[str, int], str]
    a_v: frozenset[str]
    n: Mapping[str, int]
    pair_critical: Mapping[tuple[str, str], str] = field(default_factory=dict)
    vertex_critical: Mapping[tuple[str, str], str] = field(default_factory=dict)
    sample_point: Mapping[str, Fraction] = field(default_factory=dict)


@dataclass(frozen=True)
class LengthSolution:
    x0: Mapping[str, Fraction]
    delta: Mapping[str, Fraction]
    x1: Mapping[str, Fraction]

    @staticmethod
    def from_witness(edges: Sequence[str], witness: Mapping[str, Fraction]) -> "LengthSolution":
        return LengthSolution(
            {e: witness[endpoint_var(e, 0)] for e in edges},
            {e: witness[delta_var(e)] for e in edges},
            {e: witness[endpoint_var(e, 1)] for e in edges},
        )

    def as_witness(self) -> dict[str, Fraction]:
        point = {}
        for e, v in self.x0.items():
            point[endpoint_var(e, 0)] = v
        for e, v in self.delta.items():
            point[delta_var(e)] = v
        for e, v in self.x1.items():
            point[endpoint_var(e, 1)] = v
        return point


def check_counts(instance: Instance, endpoint_agent, n) -> bool:
    """Endpoint holders plus inside agents must account for everyone."""
    return len(set(endpoint_agent.values())) + sum(n.values()) == len(instance.agents)


def check_connected_guesses(instance: Instance, endpoint_agent, n) -> bool:
    """Each holder's guessed ends must be linkable through edges that the
    holder owns outright (both ends guessed for it, nobody inside)."""
    graph = instance.graph
    for agent, held in guessed_pieces(endpoint_agent).items():
        if len(held) <= 1:
            continue
        parent = {v: v for v in graph.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for e in graph.edge_ids:
            if (
                n.get(e, 0) == 0
                and endpoint_agent[(e, 0)] == agent
                and endpoint_agent[(e, 1)] == agent
            ):
                u, v = graph.endpoints(e)
                parent[find(u)] = find(v)
        anchors = {find(graph.coord_vertex(e, i)) for e, i in held}
        if len(anchors) > 1:
            return False
    return True


def check_vertex_consistency(instance: Instance, endpoint_agent) -> bool:
    """Vertex-disjoint variant: at every vertex, all incident ends must
    be guessed for one and the same agent."""
    graph = instance.graph
    for v in graph.vertices:
        owners = set()
        for e in graph.incident_edges(v):
            end = 0 if graph.coord_vertex(e, 0) == v else 1
            owners.add(endpoint_agent[(e, end)])
        if len(owners) > 1:
            return False
    return True


def enumerate_initial_branches(instance: Instance) -> Iterator[BranchGuess]:
    """All endpoint-holder functions crossed with all inside-count maps
    that survive the sanity checks, in lexicographic order."""
    graph = instance.graph
    agents = instance.agents
    edges = graph.edge_ids
    slots = [(e, i) for e in edges for i in (0, 1)]
    for combo in product(agents, repeat=len(slots)):
        ep = dict(zip(slots, combo))
        if instance.variant is Variant.VDGC and not check_vertex_consistency(
            instance, ep
        ):
            continue
        target = len(agents) - len(set(ep.values()))
        if target < 0:
            continue
        for counts in product(range(len(agents) + 1), repeat=len(edges)):
            if sum(counts) != target:
                continue
            n = dict(zip(edges, counts))
            if not check_connected_guesses(instance, ep, n):
                continue
            yield BranchGuess(ep, frozenset(ep.values()), n)


def _ratio_ge(instance: Instance, a1: str, a2: str, e: str, f: str) -> bool:
    """Division-free test for u_a1(e)/u_a1(f) >= u_a2(e)/u_a2(f)."""
    return instance.util(a1, e) * instance.util(a2, f) >= instance.util(
        a1, f
    ) * instance.util(a2, e)


def _holder_order(instance: Instance, a_v: frozenset[str]) -> list[str]:
    return [a for a in instance.agents if a in a_v]


def _hot_edges(instance: Instance, n) -> list[str]:
    return [e for e in instance.graph.edge_ids if n[e] > 0]


def _pin_map(guess_maps: Sequence[Mapping]) -> dict[str, str] | None:
    """Collect agent -> edge pins; None when an agent is pinned twice."""
    pinned: dict[str, str] = {}
    for mapping in guess_maps:
        for key, agent in mapping.items():
            edge = key[0]
            if pinned.setdefault(agent, edge) != edge:
                return None
    return pinned


def _pin_counts_ok(pinned: Mapping[str, str], n) -> bool:
    counts: dict[str, int] = {}
    for edge in pinned.values():
        counts[edge] = counts.get(edge, 0) + 1
    return all(counts[e] <= n[e] for e in counts)


def enumerate_pair_critical(instance: Instance, guess: BranchGuess) -> Iterator[dict]:
    """Guesses of the inside agent per ordered edge pair that is closest
    (by utility ratio) to envying the second edge."""
    hot = _hot_edges(instance, guess.n)
    pairs = [(e, f) for e in hot for f in hot if e != f]
    if not pairs:
        yield {}
        return
    outsiders = [a for a in instance.agents if a not in guess.a_v]
    for combo in product(outsiders, repeat=len(pairs)):
        pc = dict(zip(pairs, combo))
        pinned = _pin_map([pc])
        if pinned is None or not _pin_counts_ok(pinned, guess.n):
            continue
        # every guessed inside agent of e must sit at or above the
        # designated minimizer in the (e, f) ratio order
        ok = True
        for (e, f), low in pc.items():
            for (e2, _), other in pc.items():
                if e2 == e and not _ratio_ge(instance, other, low, e, f):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield pc


def _value_at(instance, valuer, held, point) -> Fraction:
    return holdings_value_form(instance, valuer, held).evaluate(point)


def enumerate_vertex_critical(
    instance: Instance, guess: BranchGuess, pair_critical: Mapping, sample: Mapping
) -> Iterator[dict]:
    """Guesses of the inside agent per (edge, holder) pair that envies
    the holder the most, judged at the sample point."""
    hot = _hot_edges(instance, guess.n)
    holders = _holder_order(instance, guess.a_v)
    slots = [(e, a) for e in hot for a in holders]
    if not slots:
        yield {}
        return
    pieces = guessed_pieces(guess.endpoint_agent)
    outsiders = [a for a in instance.agents if a not in guess.a_v]
    values = {
        (agent, holder): _value_at(instance, agent, pieces[holder], sample)
        for agent in outsiders
        for holder in holders
    }
    for combo in product(outsiders, repeat=len(slots)):
        vc = dict(zip(slots, combo))
        pinned = _pin_map([pair_critical, vc])
        if pinned is None or not _pin_counts_ok(pinned, guess.n):
            continue
        by_edge: dict[str, set[str]] = {}
        for agent, edge in pinned.items():
            by_edge.setdefault(edge, set()).add(agent)
        ok = True
        for (e, f), low in pair_critical.items():
            for other in by_edge.get(e, ()):
                if not _ratio_ge(instance, other, low, e, f):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            for (e, holder), alpha in vc.items():
                for other in by_edge.get(e, ()):
                    # alpha must envy the holder at least as much as any
                    # other agent guessed inside e, at the sample point
                    if (
                        instance.util(other, e) * values[(alpha, holder)]
                        < instance.util(alpha, e) * values[(other, holder)]
                    ):
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            yield vc


def build_lp(instance: Instance, guess: BranchGuess) -> LinearSystem:
    """The length program of one fully guessed branch.

    Variables per edge: the two endpoint lengths and the shared inside
    length.  Constraints: non-negativity; per-edge tiling; mutual envy
    among endpoint holders; holders against inside pieces; the guessed
    pair-critical agents against their target edges; and, for every
    agent whose envy ratio at the sample point does not exceed the
    vertex-critical agent's, that agent against the holder.
    """
    graph = instance.graph
    edges = graph.edge_ids
    system = LinearSystem()
    for e in edges:
        system.declare(endpoint_var(e, 0))
        system.declare(delta_var(e))
        system.declare(endpoint_var(e, 1))
    pieces = guessed_pieces(guess.endpoint_agent)
    holders = _holder_order(instance, guess.a_v)
    for e in edges:
        for var in (endpoint_var(e, 0), delta_var(e), endpoint_var(e, 1)):
            system.add(LinearForm.var(var), GE)
        system.add(
            LinearForm.make(
                {
                    endpoint_var(e, 0): 1,
                    delta_var(e): guess.n[e],
                    endpoint_var(e, 1): 1,
                },
                -1,
            ),
            EQ,
        )
    own = {
        a: holdings_value_form(instance, a, pieces[a]) for a in holders
    }
    for a in holders:
        for b in holders:
            if a != b:
                system.add(
                    own[a] - holdings_value_form(instance, a, pieces[b]), GE
                )
        for e in edges:
            system.add(
                own[a] - LinearForm.make({delta_var(e): instance.util(a, e)}), GE
            )
    for (e, f) in sorted(guess.pair_critical):
        agent = guess.pair_critical[(e, f)]
        system.add(
            LinearForm.make(
                {
                    delta_var(e): instance.util(agent, e),
                    delta_var(f): -instance.util(agent, f),
                }
            ),
            GE,
        )
    outsiders = [a for a in instance.agents if a not in guess.a_v]
    hot = _hot_edges(instance, guess.n)
    for e in hot:
        for holder in holders:
            alpha = guess.vertex_critical[(e, holder)]
            held = pieces[holder]
            s_alpha = _value_at(instance, alpha, held, guess.sample_point)
            u_alpha = instance.util(alpha, e)
            for b in outsiders:
                s_b = _value_at(instance, b, held, guess.sample_point)
                if instance.util(b, e) * s_alpha >= u_alpha * s_b:
                    system.add(
                        LinearForm.make({delta_var(e): instance.util(b, e)})
                        - holdings_value_form(instance, b, held),
                        GE,
                    )
    return system


def extract_assignment(
    instance: Instance, guess: BranchGuess, lengths: LengthSolution
) -> tuple[dict[str, Piece], list[Piece]]:
    """Turn an LP solution into pieces.

    Holders receive their endpoint intervals; each edge's interior is
    split into equal inside intervals; guessed critical agents are
    pinned to the leftmost free interval of their edge.  Returns the
    pinned part of the assignment and the remaining inside pieces in
    edge order.
    """
    for table in (lengths.x0, lengths.delta, lengths.x1):
        for e, value in table.items():
            if value < 0:
                raise InconsistentLengthsError(f"negative length on {e}")
    for e in instance.graph.edge_ids:
        total = lengths.x0[e] + guess.n[e] * lengths.delta[e] + lengths.x1[e]
        if total != 1:
            raise InconsistentLengthsError(
                f"lengths on {e} sum to {total}, not 1"
            )
    graph = instance.graph
    pieces = guessed_pieces(guess.endpoint_agent)
    endpoint_bucket: dict[str, list] = {a: [] for a in pieces}
    slot_pieces: dict[str, list] = {}
    for e in graph.edge_ids:
        segments: list[tuple[object, Fraction]] = [
            (("end", guess.endpoint_agent[(e, 0)]), lengths.x0[e])
        ]
        for j in range(guess.n[e]):
            segments.append((("slot", j), lengths.delta[e]))
        segments.append((("end", guess.endpoint_agent[(e, 1)]), lengths.x1[e]))
        for owner, ep in tile_edge(e, segments):
            if owner[0] == "end":
                endpoint_bucket[owner[1]].append(ep)
            else:
                slot_pieces.setdefault(e, []).append(ep)
        got = slot_pieces.get(e, ())
        assert all(ep.length == lengths.delta[e] for ep in got)
        assert len(got) == guess.n[e]
    partial = {a: Piece(bucket) for a, bucket in endpoint_bucket.items()}
    pinned = _pin_map([guess.pair_critical, guess.vertex_critical])
    assert pinned is not None
    taken = {e: 0 for e in graph.edge_ids}
    for agent in instance.agents:
        edge = pinned.get(agent)
        if edge is not None:
            partial[agent] = Piece([slot_pieces[edge][taken[edge]]])
            taken[edge] += 1
    leftovers = [
        Piece([ep])
        for e in graph.edge_ids
        for ep in slot_pieces.get(e, [])[taken[e] :]
    ]
    return partial, leftovers


def _holder_blocks(instance: Instance, guess: BranchGuess):
    """Per-holder comparison forms and bounded region on the holder's
    own length variables (holders' variable sets are disjoint)."""
    pieces = guessed_pieces(guess.endpoint_agent)
    holders = _holder_order(instance, guess.a_v)
    hot = _hot_edges(instance, guess.n)
    blocks = []
    if not hot:
        return blocks
    agents = instance.agents
    for holder in holders:
        held = pieces[holder]
        region = LinearSystem()
        for e, i in held:
            var = endpoint_var(e, i)
            region.add(LinearForm.var(var), GE)
            region.add(LinearForm.make({var: -1}, 1), GE)
        held_edges = {e for e, _ in held}
        for e in sorted(held_edges):
            if (e, 0) in held and (e, 1) in held:
                region.add(
                    LinearForm.make(
                        {endpoint_var(e, 0): -1, endpoint_var(e, 1): -1}, 1
                    ),
                    GE,
                )
        forms = []
        for e in hot:
            for i, a1 in enumerate(agents):
                for a2 in agents[i + 1 :]:
                    form = holdings_value_form(instance, a1, held).scale(
                        instance.util(a2, e)
                    ) - holdings_value_form(instance, a2, held).scale(
                        instance.util(a1, e)
                    )
                    if not form.is_zero():
                        forms.append(form)
        blocks.append((holder, forms, region))
    return blocks


def _sample_points(instance: Instance, guess: BranchGuess) -> Iterator[dict]:
    """Sample points covering every combination of per-holder envy
    orderings; one witness per combined cell."""
    blocks = _holder_blocks(instance, guess)
    if not blocks:
        yield {}
        return
    per_block = [enumerate_sign_conditions(forms, region) for _, forms, region in blocks]
    for combo in product(*per_block):
        point: dict[str, Fraction] = {}
        for cw in combo:
            point.update(cw.point)
        yield point


def _complete_with_matching(
    instance: Instance, guess: BranchGuess, partial: dict, leftovers: list[Piece]
) -> Assignment | None:
    full_partition = [partial[a] for a in instance.agents if a in partial] + leftovers
    best = {
        a: max(piece_utility(a, q, instance) for q in full_partition)
        for a in instance.agents
    }
    pinned = _pin_map([guess.pair_critical, guess.vertex_critical]) or {}
    for agent in pinned:
        if piece_utility(agent, partial[agent], instance) < best[agent]:
            return None  # a pinned agent would envy; reject the branch
    unassigned = [a for a in instance.agents if a not in partial]
    graph = compatibility_graph(instance, full_partition, unassigned, leftovers)
    matching = max_bipartite_matching(graph)
    if not is_perfect(graph, matching):
        return None
    assignment = dict(partial)
    for li, ri in matching.items():
        assignment[unassigned[li]] = leftovers[ri]
    return Assignment(assignment)


def solve_few_edges(instance: Instance) -> Verdict:
    """Decide envy-free divisibility of an arbitrary connected graph.

    Explores initial branches, pair-critical guesses, sample points and
    vertex-critical guesses in a fixed order; the first branch whose LP
    is feasible and whose leftover pieces admit a perfect compatibility
    matching yields the witness.  The verdict is deterministic.
    """
    inst = normalize(instance)
    edges = inst.graph.edge_ids
    lp_cache: dict = {}
    for base in enumerate_initial_branches(inst):
        samples = None
        for pc in enumerate_pair_critical(inst, base):
            if samples is None:
                samples = list(_sample_points(inst, base))
            for sample in samples:
                for vc in enumerate_vertex_critical(inst, base, pc, sample):
                    guess = replace(
                        base,
                        pair_critical=pc,
                        vertex_critical=vc,
                        sample_point=sample,
                    )
                    system = build_lp(inst, guess)
                    key = tuple(
                        (form.coeffs, form.const, rel)
                        for form, rel in system.constraints
                    )
                    result = lp_cache.get(key)
                    if result is None:
                        result = lp_feasible(system)
                        lp_cache[key] = result
                    if not isinstance(result, Feasible):
                        continue
                    lengths = LengthSolution.from_witness(edges, result.witness)
                    partial, leftovers = extract_assignment(inst, guess, lengths)
                    assignment = _complete_with_matching(
                        inst, guess, partial, leftovers
                    )
                    if assignment is not None:
                        report = verify_assignment(inst, assignment)
                        assert report.valid, report.failures
                        return Verdict(True, assignment)
    return Verdict(False, None)
