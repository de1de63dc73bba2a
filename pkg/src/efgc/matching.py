"""Bipartite matching between unassigned agents and leftover pieces.

The final solver step: after the guessed agents take their pieces, the
remaining agents must be paired with the remaining single-interval
pieces.  An agent is compatible with a piece when taking it leaves the
agent envying nobody, which only depends on the fixed partition, so a
perfect matching in the compatibility graph completes the assignment.

Sizes are bounded by the number of agents, so a plain augmenting-path
search with deterministic scan order is used.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from efgc.model import Instance, Piece, piece_utility


@dataclass(frozen=True)
class Bigraph:
    left: tuple[str, ...]  # agent ids
    right: tuple[int, ...]  # piece indices
    edges: frozenset[tuple[int, int]]  # (left index, right index)


def compatibility_graph(
    instance: Instance,
    full_partition: Sequence[Piece],
    unassigned_agents: Sequence[str],
    leftover_pieces: Sequence[Piece],
) -> Bigraph:
    """Join agent a to piece p iff a values p at least as much as every
    piece of the partition (so assigning a to p causes no envy)."""
    edges = set()
    for li, agent in enumerate(unassigned_agents):
        values = [piece_utility(agent, q, instance) for q in full_partition]
        best = max(values) if values else None
        for ri, piece in enumerate(leftover_pieces):
            if best is None or piece_utility(agent, piece, instance) >= best:
                edges.add((li, ri))
    return Bigraph(
        tuple(unassigned_agents), tuple(range(len(leftover_pieces))), frozenset(edges)
    )


def max_bipartite_matching(g: Bigraph) -> dict[int, int]:
    """Maximum-cardinality matching as a left-index -> right-index map.

    Augmenting paths are explored in index order, so the result is
    deterministic for a fixed input.
    """
    adj = [
        [ri for ri in range(len(g.right)) if (li, ri) in g.edges]
        for li in range(len(g.left))
    ]
    right_match: list[int | None] = [None] * len(g.right)

    def augment(li: int, seen: set[int]) -> bool:
        for ri in adj[li]:
            if ri in seen:
                continue
            seen.add(ri)
            if right_match[ri] is None or augment(right_match[ri], seen):
                right_match[ri] = li
                return True
        return False

    for li in range(len(g.left)):
        augment(li, set())
    return {li: ri for ri, li in enumerate(right_match) if li is not None}


def is_perfect(g: Bigraph, matching: dict[int, int]) -> bool:
    return len(matching) == len(g.left) == len(g.right)
